"""Characteristic cubic of the Laplace-transformed Langevin equation.

For the original model the cubic reads

    z^3 + Wc z^2 + W0^2 z + (W0^2 Wc - 2 gamma Wc^2) = 0

and for the Caldeira-Leggett (shifted) model

    z^3 + Wc z^2 + (W0^2 + 2 gamma Wc) z + W0^2 Wc = 0,

with Wc the cutoff and W0 the bare frequency. Every closed form downstream
divides by root differences, so near-degenerate roots are surfaced as an
error instead of silently amplified.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DegenerateRootsError, NumericalError
from .params import ModelParams, ModelVariant, kernel_frequency_squared

#: roots closer than this (times omega) raise DegenerateRootsError
DEGENERACY_TOL = 1e-8

#: imaginary parts below this (relative) are snapped to zero
REALNESS_TOL = 1e-10

THREE_REAL = "three-real"
ONE_REAL_PLUS_PAIR = "one-real-plus-conjugate-pair"


@dataclass(frozen=True)
class RootTriple:
    """Ordered roots of the characteristic cubic.

    z1 is the real root with the smallest real part (it is always real);
    when a conjugate pair exists it occupies z2 (Im > 0) and z3 = conj(z2).
    """

    z1: complex
    z2: complex
    z3: complex
    classification: str
    variant: ModelVariant

    def as_tuple(self):
        return (self.z1, self.z2, self.z3)

    @property
    def max_real_part(self) -> float:
        return max(self.z1.real, self.z2.real, self.z3.real)


def cubic_coefficients(params: ModelParams, variant: ModelVariant):
    """Monic coefficients (b, c, d) of z^3 + b z^2 + c z + d."""
    wc = params.omega_c
    if variant is ModelVariant.ORIGINAL:
        return wc, params.omega**2, params.omega**2 * wc - 2.0 * params.gamma * wc**2
    w2 = kernel_frequency_squared(params, variant)
    return wc, w2, params.omega**2 * wc


def _polish(z, b, c, d, steps=2):
    """Newton iterations on the monic cubic."""
    for _ in range(steps):
        p = ((z + b) * z + c) * z + d
        dp = (3.0 * z + 2.0 * b) * z + c
        if dp != 0:
            z = z - p / dp
    return z


def check_separation(zs, omega: float):
    """Raise if any two roots are closer than the degeneracy tolerance.

    Every closed form downstream divides by pairwise root differences, so
    near-degeneracy is surfaced here instead of silently amplified.
    """
    tol = DEGENERACY_TOL * omega
    zs = list(zs)
    for i in range(len(zs)):
        for j in range(i + 1, len(zs)):
            if abs(zs[i] - zs[j]) < tol:
                raise DegenerateRootsError(
                    f"roots {zs[i]} and {zs[j]} closer than {tol}"
                )


def solve_characteristic_cubic(params: ModelParams, variant: ModelVariant) -> RootTriple:
    """Solve the variant's cubic, enforce the ordering convention, classify.

    Companion-matrix eigenvalues (robust for the widely separated magnitudes
    |z1| ~ Wc vs |z2| ~ W0) followed by Newton polishing.
    """
    b, c, d = cubic_coefficients(params, variant)
    raw = np.roots([1.0, b, c, d])
    polished = np.array([_polish(z, b, c, d) for z in raw])
    check_separation(polished, params.omega)

    # snap tiny imaginary parts to zero, then enforce exact conjugacy
    snapped = []
    for z in polished:
        if abs(z.imag) <= REALNESS_TOL * max(1.0, abs(z)):
            snapped.append(complex(z.real, 0.0))
        else:
            snapped.append(complex(z))
    n_real = sum(1 for z in snapped if z.imag == 0.0)

    if n_real == 3:
        ordered = sorted(snapped, key=lambda z: z.real)
        triple = RootTriple(ordered[0], ordered[1], ordered[2], THREE_REAL, variant)
    else:
        reals = [z for z in snapped if z.imag == 0.0]
        pair = [z for z in snapped if z.imag != 0.0]
        if len(reals) != 1:
            raise NumericalError(f"unexpected root structure: {snapped}")
        z2 = pair[0] if pair[0].imag > 0 else pair[1]
        z2 = complex(z2.real, abs(z2.imag))
        triple = RootTriple(reals[0], z2, z2.conjugate(), ONE_REAL_PLUS_PAIR, variant)

    res = vieta_residuals(triple, params, variant)
    scale = max(1.0, abs(b), abs(c), abs(d))
    if max(res) > 1e-9 * scale:
        raise NumericalError(f"Vieta residuals too large: {res}")
    return triple


def vieta_residuals(roots: RootTriple, params: ModelParams, variant: ModelVariant):
    """Absolute residuals of the three symmetric-function identities."""
    b, c, d = cubic_coefficients(params, variant)
    z1, z2, z3 = roots.as_tuple()
    r1 = abs(z1 + z2 + z3 + b)
    r2 = abs(z1 * z2 + z2 * z3 + z3 * z1 - c)
    r3 = abs(z1 * z2 * z3 + d)
    return r1, r2, r3


def _discriminant(b, c, d):
    return 18.0 * b * c * d - 4.0 * b**3 * d + b**2 * c**2 - 4.0 * c**3 - 27.0 * d**2


def gamma_critical(params: ModelParams, variant: ModelVariant) -> float:
    """Coupling beyond which the evolution turns unphysical.

    Original model: closed form W0^2 / (2 Wc), where the largest root's real
    part crosses zero. Shifted models: the coupling where two real roots
    merge into a conjugate pair as gamma grows (discriminant zero), located
    by bisection on the discriminant sign to 1e-6 relative.
    """
    if variant is ModelVariant.ORIGINAL:
        return params.omega**2 / (2.0 * params.omega_c)

    wc = params.omega_c
    w0sq = params.omega**2
    # discriminant is a cubic polynomial in gamma through c = W0^2 + 2 g Wc
    #   disc(g) = 18 b c d - 4 b^3 d + b^2 c^2 - 4 c^3 - 27 d^2,  b = Wc, d = W0^2 Wc
    b = wc
    d = w0sq * wc
    # expand in c first: -4 c^3 + b^2 c^2 + 18 b d c + (-4 b^3 d - 27 d^2)
    poly_c = np.array([-4.0, b**2, 18.0 * b * d, -4.0 * b**3 * d - 27.0 * d**2])
    # substitute c = w0sq + 2 wc g
    g = np.polynomial.polynomial.Polynomial([w0sq, 2.0 * wc])
    disc_poly = sum(
        coeff * g**k for k, coeff in enumerate(poly_c[::-1])
    )
    cand = [x.real for x in disc_poly.roots() if abs(x.imag) < 1e-8 and x.real > 0]
    if not cand:
        raise NumericalError("discriminant has no positive real zero in gamma")
    gcr = max(cand)

    # refine by bisection on the sign change (three-real -> pair as gamma grows)
    f = lambda gv: _discriminant(b, w0sq + 2.0 * gv * wc, d)
    lo, hi = gcr * (1.0 - 1e-3), gcr * (1.0 + 1e-3)
    flo, fhi = f(lo), f(hi)
    if flo == 0.0:
        return lo
    if flo * fhi > 0:
        raise NumericalError(
            f"discriminant bracket failure near gamma={gcr}: f({lo})={flo}, f({hi})={fhi}"
        )
    while (hi - lo) > 1e-6 * 1e-2 * gcr:
        mid = 0.5 * (lo + hi)
        fm = f(mid)
        if fm == 0.0:
            return mid
        if flo * fm < 0:
            hi = mid
        else:
            lo, flo = mid, fm
    return 0.5 * (lo + hi)
