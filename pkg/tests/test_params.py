import warnings

import pytest

from qbmotion.errors import InvalidParameterError
from qbmotion.params import (
    ModelParams,
    ModelVariant,
    denormalize,
    effective_frequency_squared,
    kernel_frequency_squared,
    load_config,
    normalize,
)


def test_normalize_rescales_by_omega():
    p = ModelParams(mass=2.0, omega=3.0, omega_c=120.0, gamma=0.03, hbar=1.0)
    n = normalize(p)
    assert (n.mass, n.omega, n.hbar) == (1.0, 1.0, 1.0)
    assert n.omega_c == pytest.approx(40.0, rel=1e-15)
    assert n.gamma == pytest.approx(0.01, rel=1e-15)


def test_normalize_fixed_point():
    p = ModelParams(mass=1.0, omega=1.0, omega_c=40.0, gamma=1 / 128, hbar=1.0)
    assert normalize(p) == p


def test_normalize_round_trip():
    p = ModelParams(mass=2.5, omega=0.7, omega_c=31.0, gamma=0.004, hbar=3.1)
    n = normalize(p)
    back = denormalize(n, p)
    for name in ("mass", "omega", "omega_c", "gamma", "hbar"):
        assert getattr(back, name) == pytest.approx(getattr(p, name), rel=1e-14)


def test_normalize_idempotent():
    p = ModelParams(mass=2.0, omega=3.0, omega_c=120.0, gamma=0.03)
    assert normalize(normalize(p)) == normalize(p)


@pytest.mark.parametrize("field,value", [
    ("mass", 0.0), ("mass", -1.0), ("omega", 0.0), ("omega_c", -2.0), ("hbar", 0.0),
    ("gamma", -0.1),
])
def test_invalid_parameters_raise(field, value):
    kwargs = {field: value}
    with pytest.raises(InvalidParameterError):
        ModelParams(**kwargs)


def test_cutoff_ratio_warns_but_does_not_error():
    with warnings.catch_warnings(record=True) as rec:
        warnings.simplefilter("always")
        ModelParams(omega=1.0, omega_c=5.0)
    assert any("omega_c" in str(w.message) for w in rec)


def test_effective_frequency_squared():
    p = ModelParams(omega=1.0, omega_c=40.0, gamma=1 / 128)
    assert effective_frequency_squared(p, ModelVariant.ORIGINAL) == 1.0
    assert effective_frequency_squared(p, ModelVariant.CALDEIRA_LEGGETT) == pytest.approx(
        1.0 + 80.0 / 128.0, rel=1e-15
    )
    assert effective_frequency_squared(p, ModelVariant.WEAK_SHIFTED_KERNEL) == 1.0
    p0 = ModelParams(gamma=0.0)
    assert effective_frequency_squared(p0, ModelVariant.CALDEIRA_LEGGETT) == 1.0


def test_shift_difference_is_exact():
    p = ModelParams(gamma=0.003, omega_c=55.0)
    d = effective_frequency_squared(p, ModelVariant.CALDEIRA_LEGGETT) - \
        effective_frequency_squared(p, ModelVariant.ORIGINAL)
    assert d == pytest.approx(2.0 * p.gamma * p.omega_c, rel=1e-15)


def test_kernel_frequency_shifted_for_both_shifted_variants():
    p = ModelParams(gamma=0.01, omega_c=40.0)
    assert kernel_frequency_squared(p, ModelVariant.ORIGINAL) == 1.0
    shifted = 1.0 + 2.0 * 0.01 * 40.0
    assert kernel_frequency_squared(p, ModelVariant.CALDEIRA_LEGGETT) == shifted
    assert kernel_frequency_squared(p, ModelVariant.WEAK_SHIFTED_KERNEL) == shifted


def test_variant_from_string():
    assert ModelVariant.from_string("Caldeira-Leggett") is ModelVariant.CALDEIRA_LEGGETT
    assert ModelVariant.from_string("weak_shifted") is ModelVariant.WEAK_SHIFTED_KERNEL
    with pytest.raises(InvalidParameterError):
        ModelVariant.from_string("nope")


def test_config_loading(tmp_path):
    cfg = tmp_path / "run.cfg"
    cfg.write_text(
        "# comment\nM = 2.0\nOmega = 1.0\nOmega_c = 30\ngamma = 0.005\n"
        "hbar = 1.0\nvariant = caldeira-leggett\n"
    )
    params, variant = load_config(cfg)
    assert params.mass == 2.0
    assert params.omega_c == 30.0
    assert variant is ModelVariant.CALDEIRA_LEGGETT


def test_config_rejects_unknown_keys(tmp_path):
    cfg = tmp_path / "bad.cfg"
    cfg.write_text("Omega = 1.0\nbogus = 3\n")
    with pytest.raises(InvalidParameterError):
        load_config(cfg)
