"""Model parameters, variants, and dimensionless normalization.

The central oscillator has mass M and bare frequency Omega; the bath is
ohmic with a Lorentz-Drude cutoff Omega_c and dimensionless-in-spirit
coupling strength gamma (units 1/time). All downstream modules compute in
normalized units M = Omega = hbar = 1; raw-unit values are converted at
the boundary.
"""
from __future__ import annotations

import enum
import warnings
from dataclasses import dataclass, replace

from .errors import InvalidParameterError


class ModelVariant(enum.Enum):
    """Which counterterm convention the model uses.

    ORIGINAL: bilinear coupling, no counterterm.
    CALDEIRA_LEGGETT: quadratic counterterm; shifts Omega^2 -> Omega^2 + 2*gamma*Omega_c
        everywhere (characteristic cubic and observable frequency alike).
    WEAK_SHIFTED_KERNEL: the shift is applied only on the kernel/Langevin side,
        never in the trigonometric factors of the weak-coupling formulas nor in
        the observable frequency.
    """

    ORIGINAL = "original"
    CALDEIRA_LEGGETT = "caldeira-leggett"
    WEAK_SHIFTED_KERNEL = "weak-shifted"

    @classmethod
    def from_string(cls, name: str) -> "ModelVariant":
        key = name.strip().lower().replace("_", "-")
        for v in cls:
            if v.value == key:
                return v
        raise InvalidParameterError(
            f"unknown variant {name!r}; choose from "
            + ", ".join(v.value for v in cls)
        )


@dataclass(frozen=True)
class ModelParams:
    """Physical parameters of the damped oscillator.

    mass      M  > 0
    omega     bare frequency Omega > 0 (1/time)
    omega_c   bath cutoff Omega_c > 0 (1/time)
    gamma     coupling strength >= 0 (1/time)
    hbar      reduced Planck constant > 0
    """

    mass: float = 1.0
    omega: float = 1.0
    omega_c: float = 40.0
    gamma: float = 1.0 / 128.0
    hbar: float = 1.0

    def __post_init__(self):
        for name in ("mass", "omega", "omega_c", "hbar"):
            if not getattr(self, name) > 0:
                raise InvalidParameterError(f"{name} must be positive, got {getattr(self, name)}")
        if self.gamma < 0:
            raise InvalidParameterError(f"gamma must be nonnegative, got {self.gamma}")
        if self.omega_c < 10.0 * self.omega:
            warnings.warn(
                "omega_c < 10*omega: the cutoff is not large compared to the bare "
                "frequency; closed forms remain valid but the model is strained",
                stacklevel=2,
            )

    @property
    def is_normalized(self) -> bool:
        return self.mass == 1.0 and self.omega == 1.0 and self.hbar == 1.0


def normalize(params: ModelParams) -> ModelParams:
    """Rescale to M = Omega = hbar = 1; omega_c, gamma in units of Omega."""
    return ModelParams(
        mass=1.0,
        omega=1.0,
        omega_c=params.omega_c / params.omega,
        gamma=params.gamma / params.omega,
        hbar=1.0,
    )


def denormalize(normalized: ModelParams, reference: ModelParams) -> ModelParams:
    """Undo normalize() given the original raw parameters as the unit system."""
    return replace(
        reference,
        omega_c=normalized.omega_c * reference.omega,
        gamma=normalized.gamma * reference.omega,
    )


@dataclass(frozen=True)
class UnitScales:
    """Multiplicative factors restoring raw units from normalized outputs.

    A normalized quantity X_n becomes X_raw = X_n * scale; times divide:
    t_n = t_raw * frequency.
    """

    frequency: float
    time: float
    drift_a: float   # mass / time^2
    drift_b: float   # 1 / time
    diff_c: float    # action / time
    diff_d: float    # action * mass / time^2
    pos: float       # sqrt(action / (mass * frequency))
    mom: float       # sqrt(action * mass * frequency)
    cov_qq: float
    cov_qp: float
    cov_pp: float


def unit_scales(raw: ModelParams) -> UnitScales:
    w = raw.omega
    m = raw.mass
    hb = raw.hbar
    return UnitScales(
        frequency=w,
        time=1.0 / w,
        drift_a=m * w**2,
        drift_b=w,
        diff_c=hb * w,
        diff_d=hb * m * w**2,
        pos=(hb / (m * w)) ** 0.5,
        mom=(hb * m * w) ** 0.5,
        cov_qq=hb / (m * w),
        cov_qp=hb,
        cov_pp=hb * m * w,
    )


def effective_frequency_squared(params: ModelParams, variant: ModelVariant) -> float:
    """Frequency squared entering the oscillator term of the master equation.

    Only the Caldeira-Leggett variant carries the counterterm shift here; the
    weak-shifted-kernel variant keeps the bare frequency in all trigonometric
    factors and observables.
    """
    if variant is ModelVariant.CALDEIRA_LEGGETT:
        return params.omega**2 + 2.0 * params.gamma * params.omega_c
    return params.omega**2


def kernel_frequency_squared(params: ModelParams, variant: ModelVariant) -> float:
    """Frequency squared entering the integro-differential (Langevin) equation."""
    if variant is ModelVariant.ORIGINAL:
        return params.omega**2
    return params.omega**2 + 2.0 * params.gamma * params.omega_c


_CONFIG_KEYS = {
    "M": "mass",
    "Omega": "omega",
    "Omega_c": "omega_c",
    "gamma": "gamma",
    "hbar": "hbar",
}


def load_config(path) -> tuple[ModelParams, ModelVariant]:
    """Read a plain key=value config file.

    Recognized keys: M, Omega, Omega_c, gamma, hbar, variant. Lines starting
    with '#' and blank lines are ignored. Missing keys fall back to defaults.
    """
    values = {}
    variant = ModelVariant.ORIGINAL
    with open(path) as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            if "=" not in line:
                raise InvalidParameterError(f"{path}:{lineno}: expected key=value, got {line!r}")
            key, _, raw = line.partition("=")
            key = key.strip()
            raw = raw.strip()
            if key == "variant":
                variant = ModelVariant.from_string(raw)
            elif key in _CONFIG_KEYS:
                try:
                    values[_CONFIG_KEYS[key]] = float(raw)
                except ValueError as exc:
                    raise InvalidParameterError(f"{path}:{lineno}: bad number {raw!r}") from exc
            else:
                raise InvalidParameterError(f"{path}:{lineno}: unknown key {key!r}")
    return ModelParams(**values), variant
