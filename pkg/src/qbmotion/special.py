"""Bath kernels and the special integrals behind the coefficient closed forms.

The two workhorse integrals, for complex r with Re r > 0 and t > 0, are

    I1(r, t) = int_0^inf w cos(w t) / (r^2 + w^2) dw
    I2(r, t) = int_0^inf   sin(w t) / (r^2 + w^2) dw

with the closed forms

    I1 = -[cosh(rt) Chi(rt) - sinh(rt) Shi(rt)]
    I2 = -(1/r) [sinh(rt) Chi(rt) - cosh(rt) Shi(rt)]

Both are invariant under r -> -r, so arguments in the left half-plane are
mapped to the right half-plane before any branch-sensitive logarithm is
taken. The naive closed forms subtract two exponentially large terms once
|rt| grows; evaluation here goes through the cancellation-free split

    I1 = (F - G)/2,     I2 = (F + G)/(2 r),
    F(x) = e^x E1(x),   G(x) = e^{-x} Ei(x),     x = r t,

inside the split radius and through the asymptotic expansion of the
combination (plus the oscillatory pole term) beyond. The two exponentially
large terms are never subtracted from each other.
"""
from __future__ import annotations

import numpy as np
import scipy.special as sc

from .errors import DivergentKernelError, DomainError, SingularityError
from .params import ModelParams

EULER_GAMMA = 0.5772156649015328606

#: switch radius between Taylor and asymptotic series for Chi/Shi
ASYMPTOTIC_RADIUS = 25.0

#: switch radius for the I1/I2 combinations; the exponential-integral split
#: stays at machine accuracy here while the truncated divergent series first
#: drops below 1e-10 relative (at 25 it still floors near 3e-9)
I_SPLIT_RADIUS = 30.0

# ---------------------------------------------------------------------------
# hyperbolic cosine / sine integrals
# ---------------------------------------------------------------------------


def _chi_shi_taylor(z):
    """Chi(z), Shi(z) by Taylor series; reliable for |z| <= 25.

    The chi component is -inf at z = 0; shi is still valid there.
    """
    z = np.asarray(z, dtype=complex)
    z2 = z * z
    chi_sum = np.zeros_like(z)
    shi_sum = z.copy()
    p = np.ones_like(z)      # z^{2k} / (2k)!
    q = z.copy()             # z^{2k+1} / (2k+1)!
    for k in range(1, 120):
        p = p * z2 / ((2 * k - 1) * (2 * k))
        q = q * z2 / ((2 * k) * (2 * k + 1))
        dchi = p / (2 * k)
        dshi = q / (2 * k + 1)
        chi_sum = chi_sum + dchi
        shi_sum = shi_sum + dshi
        if max(np.max(np.abs(dchi)), np.max(np.abs(dshi))) < 1e-18 * max(
            1.0, np.max(np.abs(chi_sum)), np.max(np.abs(shi_sum))
        ):
            break
    with np.errstate(divide="ignore", invalid="ignore"):
        log_part = np.log(z)
    return EULER_GAMMA + log_part + chi_sum, shi_sum


def _exp_series_asym(z, signs):
    """sum_k (+-1)^k k! / z^{k+1}, truncated at the smallest term."""
    z = np.asarray(z, dtype=complex)
    inv = 1.0 / z
    term = inv.copy()
    total = term.copy()
    prev = np.abs(term)
    active = np.ones(z.shape, dtype=bool)
    for k in range(1, 80):
        term = term * inv * (k if signs > 0 else -k)
        mag = np.abs(term)
        grow = mag >= prev
        active &= ~grow
        total = np.where(active, total + term, total)
        prev = mag
        if not np.any(active) or np.max(np.where(active, mag, 0.0)) < 1e-18:
            break
    return total


def chi(z):
    """Hyperbolic cosine integral Chi(z), principal branch.

    Taylor series for |z| <= 25, asymptotic series beyond. Chi has a
    logarithmic singularity at z = 0.
    """
    scalar = np.isscalar(z)
    z = np.atleast_1d(np.asarray(z, dtype=complex))
    if np.any(z == 0):
        raise SingularityError("chi(0) is logarithmically divergent")
    out = np.empty_like(z)
    small = np.abs(z) <= ASYMPTOTIC_RADIUS
    if np.any(small):
        out[small] = _chi_shi_taylor(z[small])[0]
    if np.any(~small):
        zb = z[~small]
        s = np.sign(zb.imag)
        ei = np.exp(zb) * _exp_series_asym(zb, +1) + 1j * np.pi * s
        e1 = np.exp(-zb) * _exp_series_asym(zb, -1)
        out[~small] = (ei - e1) / 2.0
    return out[0] if scalar else out


def shi(z):
    """Hyperbolic sine integral Shi(z); odd entire function."""
    scalar = np.isscalar(z)
    z = np.atleast_1d(np.asarray(z, dtype=complex))
    out = np.empty_like(z)
    small = np.abs(z) <= ASYMPTOTIC_RADIUS
    if np.any(small):
        out[small] = _chi_shi_taylor(z[small])[1]
    if np.any(~small):
        zb = z[~small]
        s = np.sign(zb.imag)
        ei = np.exp(zb) * _exp_series_asym(zb, +1) + 1j * np.pi * s
        e1 = np.exp(-zb) * _exp_series_asym(zb, -1)
        out[~small] = (ei + e1) / 2.0
    return out[0] if scalar else out


# ---------------------------------------------------------------------------
# I1, I2
# ---------------------------------------------------------------------------


def _right_half(r: complex) -> complex:
    """Map r to Re r >= 0 (the integrals are even in r)."""
    r = complex(r)
    if r.real < 0 or (r.real == 0 and r.imag < 0):
        return -r
    return r


def _fg_split(x):
    """F = e^x E1(x), G = e^{-x} Ei(x) for Re x >= 0, moderate |x|."""
    F = np.exp(x) * sc.exp1(x)
    G = np.exp(-x) * sc.expi(x)
    return F, G


def _asym_combination(x):
    """(I1_scaled, I2_scaled) for |x| > 25.

    I1 = -sum_m (2m+1)!/x^{2m+2} - (i pi s / 2) e^{-x}
    r*I2 = sum_m (2m)!/x^{2m+1} + (i pi s / 2) e^{-x}
    with s = sign(Im x); the e^{-x} pole term is the oscillatory remnant of
    the near-axis poles and is exactly absent for real x.
    """
    x = np.asarray(x, dtype=complex)
    inv2 = 1.0 / (x * x)
    # odd sum: (2m+1)!/x^{2m+2};  even sum: (2m)!/x^{2m+1}
    odd = inv2.copy()
    even = 1.0 / x
    odd_tot = odd.copy()
    even_tot = even.copy()
    prev_o = np.abs(odd)
    prev_e = np.abs(even)
    act_o = np.ones(x.shape, dtype=bool)
    act_e = np.ones(x.shape, dtype=bool)
    for m in range(1, 60):
        odd = odd * inv2 * ((2 * m) * (2 * m + 1))
        even = even * inv2 * ((2 * m - 1) * (2 * m))
        mo, me = np.abs(odd), np.abs(even)
        act_o &= mo < prev_o
        act_e &= me < prev_e
        odd_tot = np.where(act_o, odd_tot + odd, odd_tot)
        even_tot = np.where(act_e, even_tot + even, even_tot)
        prev_o, prev_e = mo, me
        if not (np.any(act_o) or np.any(act_e)):
            break
    pole = 0.5j * np.pi * np.sign(x.imag) * np.exp(-x)
    return -odd_tot - pole, even_tot + pole


def _i1_i2(r: complex, t):
    """Vectorized over t. Returns (I1, I2) arrays."""
    t = np.asarray(t, dtype=float)
    if np.any(t <= 0):
        raise DomainError("I1/I2 require t > 0")
    r = _right_half(r)
    x = r * t.astype(complex)
    ax = np.abs(x)
    i1 = np.empty_like(x)
    i2 = np.empty_like(x)
    small = ax <= I_SPLIT_RADIUS
    if np.any(small):
        F, G = _fg_split(x[small])
        i1[small] = 0.5 * (F - G)
        i2[small] = (F + G) / (2.0 * r)
    if np.any(~small):
        s1, s2 = _asym_combination(x[~small])
        i1[~small] = s1
        i2[~small] = s2 / r
    return i1, i2


def I1(r, t):
    """I1(r, t) = int_0^inf w cos(wt)/(r^2+w^2) dw for t > 0."""
    scalar = np.isscalar(t)
    v = _i1_i2(r, np.atleast_1d(t))[0]
    return v[0] if scalar else v


def I2(r, t):
    """I2(r, t) = int_0^inf sin(wt)/(r^2+w^2) dw for t > 0."""
    scalar = np.isscalar(t)
    v = _i1_i2(r, np.atleast_1d(t))[1]
    return v[0] if scalar else v


# ---------------------------------------------------------------------------
# bath kernels
# ---------------------------------------------------------------------------


def spectral_density(omega, params: ModelParams):
    """Lorentz-Drude ohmic spectral density 2 M gamma Wc^2 w / (pi (w^2 + Wc^2))."""
    omega = np.asarray(omega, dtype=float)
    if np.any(omega < 0):
        raise DomainError("spectral density defined for omega >= 0")
    wc = params.omega_c
    return 2.0 * params.mass * params.gamma * wc**2 / np.pi * omega / (omega**2 + wc**2)


def eta(s, params: ModelParams):
    """Dissipation kernel: odd in s; -M gamma Wc^2 e^{-Wc s} for s > 0."""
    s = np.asarray(s, dtype=float)
    amp = params.mass * params.gamma * params.omega_c**2
    return np.where(s == 0.0, 0.0, -np.sign(s) * amp * np.exp(-params.omega_c * np.abs(s)))


def nu0_amplitude(params: ModelParams) -> float:
    """Prefactor 2 M gamma Wc^2 / pi of the zero-temperature noise kernel."""
    return 2.0 * params.mass * params.gamma * params.omega_c**2 / np.pi


def nu0(s, params: ModelParams):
    """Zero-temperature noise kernel: cosine transform of the spectral density.

    Even in s, with a logarithmic divergence at s = 0 (which is genuine at
    T = 0 and therefore an error, not an extrapolated value).
    """
    s = np.asarray(s, dtype=float)
    if np.any(s == 0.0):
        raise DivergentKernelError("nu(0) diverges logarithmically at T = 0")
    scalar = s.ndim == 0
    v = nu0_amplitude(params) * I1(params.omega_c, np.abs(np.atleast_1d(s))).real
    return v[0] if scalar else v


def nu0_regular(s, params: ModelParams):
    """Smooth remainder of nu0 after removing its logarithmic part.

    nu0(s) = nu0_amplitude * (-EULER_GAMMA - ln(Wc |s|)) + nu0_regular(s);
    the remainder vanishes at s = 0 like s^2 log s.
    """
    s = np.abs(np.asarray(s, dtype=float))
    scalar = s.ndim == 0
    s1 = np.atleast_1d(s)
    out = np.zeros_like(s1)
    pos = s1 > 0
    if np.any(pos):
        wc = params.omega_c
        out[pos] = I1(wc, s1[pos]).real + EULER_GAMMA + np.log(wc * s1[pos])
    return nu0_amplitude(params) * (out[0] if scalar else out)
