"""Oscillatory-transform layer: closed forms, derivative link, positivity."""

import math

import numpy as np
import pytest

from zetacheck import fresnel
from zetacheck.amplitudes import AmplitudeSpec, Family
from zetacheck.errors import AmplitudeError
from zetacheck.quad import QuadSpec
from zetacheck.report import ClaimStatus

TIGHT = QuadSpec(abs_tol=1e-12, rel_tol=1e-12)


@pytest.mark.parametrize("a", [0.5, 1.0, 3.0])
@pytest.mark.parametrize("nu", [0.5, 1.0, 2.0, 7.5])
def test_exponential_sine_closed_form(a, nu):
    amp = AmplitudeSpec.exponential(a)
    got = fresnel.fresnel_sin(amp, nu, TIGHT)
    assert abs(got.value - nu / (a * a + nu * nu)) <= 1e-10


@pytest.mark.parametrize("a", [0.5, 1.0, 3.0])
@pytest.mark.parametrize("nu", [0.5, 1.0, 2.0, 7.5])
def test_exponential_cosine_closed_form(a, nu):
    amp = AmplitudeSpec.exponential(a)
    got = fresnel.fresnel_cos(amp, nu, TIGHT)
    assert abs(got.value - a / (a * a + nu * nu)) <= 1e-10


def test_closed_form_helpers_match_quadrature():
    amp = AmplitudeSpec.exponential(1.3)
    for nu in (0.7, 2.0):
        s = fresnel.closed_form_sin(amp, nu)
        c = fresnel.closed_form_cos(amp, nu)
        assert s == pytest.approx(nu / (1.3 ** 2 + nu ** 2), rel=1e-15)
        assert c == pytest.approx(1.3 / (1.3 ** 2 + nu ** 2), rel=1e-15)
    # No elementary form is claimed for the gaussian family.
    assert fresnel.closed_form_sin(AmplitudeSpec.gaussian(1.0), 1.0) is None


@pytest.mark.parametrize("nu", [0.5, 1.0, 2.0])
def test_reciprocal_amplitude_gives_half_pi(nu):
    got = fresnel.fresnel_sin(AmplitudeSpec.reciprocal(), nu, TIGHT)
    assert abs(got.value - math.pi / 2.0) <= 1e-7


@pytest.mark.parametrize("nu", [0.5, 1.0, 2.0])
def test_classic_quadratic_phase_value(nu):
    got = fresnel.fresnel_classic(nu)
    want = fresnel.fresnel_classic_value(nu)
    assert want == pytest.approx(0.5 * math.sqrt(math.pi / (2.0 * nu)),
                                 rel=1e-15)
    assert abs(got.value - want) <= 1e-7


@pytest.mark.parametrize("amp", [
    AmplitudeSpec.exponential(1.0),
    AmplitudeSpec.gaussian(1.0),
    AmplitudeSpec.rational(2.0),
    AmplitudeSpec.rational(3.5),
])
def test_derivative_identity(amp):
    resid, budget = fresnel.derivative_identity(amp, 1.5, TIGHT)
    assert resid <= max(5.0 * budget, 1e-8)
    assert resid <= 1e-7


def test_positivity_audit_confirms():
    rep = fresnel.positivity_audit(seed=20260815)
    assert rep.status == ClaimStatus.CONFIRMED
    assert rep.inputs["nSamples"] >= 200
    # worst sampled value must be positive by more than its own error bar
    assert rep.lhs > rep.error_estimate


def test_positivity_audit_is_seed_deterministic():
    a = fresnel.positivity_audit(seed=4)
    b = fresnel.positivity_audit(seed=4)
    assert a.lhs == b.lhs and a.inputs == b.inputs


# -- amplitude admission -----------------------------------------------------


def test_amplitude_validation_rejects_bad_parameters():
    with pytest.raises(AmplitudeError):
        AmplitudeSpec.exponential(-1.0)
    with pytest.raises(AmplitudeError):
        AmplitudeSpec.gaussian(0.0)
    with pytest.raises(AmplitudeError):
        AmplitudeSpec.rational(1.0)   # not integrable


def test_amplitude_total_integrals():
    assert AmplitudeSpec.exponential(2.0).total_integral() == pytest.approx(0.5)
    assert AmplitudeSpec.gaussian(1.0).total_integral() == pytest.approx(
        0.5 * math.sqrt(math.pi))
    assert AmplitudeSpec.rational(3.0).total_integral() == pytest.approx(0.5)
    with pytest.raises(AmplitudeError):
        AmplitudeSpec.reciprocal().total_integral()


def test_amplitude_pcid_audit_passes_for_all_families():
    for fam in Family:
        spec = AmplitudeSpec(fam, 2.0 if fam == Family.RATIONAL else 1.0)
        spec.validate_pcid()


def test_improper_flags():
    assert AmplitudeSpec.reciprocal().improper
    assert AmplitudeSpec.inv_sqrt().improper
    assert not AmplitudeSpec.exponential(1.0).improper


def test_amplitude_derivative_consistency():
    amp = AmplitudeSpec.rational(2.5)
    xs = np.array([0.5, 1.0, 4.0])
    v, d = amp.value(xs), amp.derivative(xs)
    assert np.all(v > 0.0) and np.all(d < 0.0)
