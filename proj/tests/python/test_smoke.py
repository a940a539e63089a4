import math
from fractions import Fraction

import pytest

import partrec


@pytest.fixture
def chained():
    return partrec.chained_plan([1, 3, 5])


def test_validate_and_cardinalities(chained):
    assert chained.cardinalities == [1, 2, 3]
    assert len(chained) == 3
    assert partrec.cumulative_intensity(chained, 3) == Fraction(11, 6)
    same = partrec.validate([1, 3, 5], [[], [1], [3, 1]])
    assert same.digest == chained.digest


def test_validation_errors():
    report = partrec.validation_report([2, 5], [[1], [1, 3]])
    assert [kind for kind, _, _ in report] == ["MissingPredecessor"]
    with pytest.raises(partrec.PartrecError) as err:
        partrec.validate([1, 2, 3], [[], [1], [2]])
    assert err.value.code == "InvalidPlan"


def test_exact_probabilities(chained):
    assert partrec.joint_record_prob(chained, [2, 3]) == Fraction(1, 6)
    assert partrec.exact_joint(chained, [2, 3]) == Fraction(1, 6)
    total3 = partrec.total_comparison_plan(3)
    assert partrec.exact_joint(total3, [(2, True), (3, False)]) == Fraction(1, 6)
    moments = partrec.record_count_moments(total3, 3)
    assert moments["variance"] == Fraction(17, 36)
    assert partrec.harmonic_number(3) == Fraction(11, 6)


def test_bounded_and_quadrature(chained):
    assert partrec.joint_record_prob_bounded(chained, [2], 0.5, "uniform01") == pytest.approx(0.125, abs=1e-15)
    assert partrec.quadrature_bounded(chained, [2, 3], 1.0, "smoothstep") == pytest.approx(1 / 6, abs=1e-9)


def test_record_time_and_value():
    total = partrec.total_comparison_plan(50)
    pmf = partrec.record_time_pmf(total, 2, 50)
    assert pmf["entries"][0][2] == pytest.approx(0.5)
    cdf = partrec.record_value_cdf(total, 2, 0.5, "uniform01", 50)
    target = 0.5 + 0.5 * math.log(0.5)
    assert cdf["lower"] <= target <= cdf["upper"]


def test_simulation_is_deterministic(chained):
    a = partrec.simulate(chained, "power(2)", 20000, 42, joint=[[2, 3]], trajectory=True)
    b = partrec.simulate(chained, "power(2)", 20000, 42, joint=[[2, 3]], trajectory=True, threads=3)
    assert a == b
    assert a["event_freq"][0] == 1.0
    assert abs(a["event_freq"][2] - 1 / 3) < 4 * math.sqrt(2 / 9 / 20000)
    est, radius = partrec.estimate_joint(chained, "uniform01", 20000, 1, [2, 3])
    assert abs(est - 1 / 6) <= radius


def test_densities():
    d = partrec.density("smoothstep")
    assert d.cdf(0.5) == pytest.approx(0.5)
    draws = d.sample(seed=3, count=5)
    assert draws == d.sample(seed=3, count=5)
    assert "power" in partrec.builtin_names()
    with pytest.raises(partrec.PartrecError) as err:
        partrec.density("nosuch")
    assert err.value.code == "UnknownFamily"


def test_discrete(chained):
    assert partrec.joint_record_prob_discrete(chained, [2], "uniform01", 10) == Fraction(55, 121)
    assert partrec.exhaustive_discrete_oracle(chained, [2, 3], "uniform01", 3) == \
        partrec.joint_record_prob_discrete(chained, [2, 3], "uniform01", 3)
    model = partrec.discretize("power(2)", 2)
    assert [Fraction(x) for x in model["exact_masses"]] == [0, Fraction(1, 3), Fraction(2, 3)]
    rows = partrec.error_sweep(chained, [2], "uniform01", [8, 16])
    assert [r["m"] for r in rows] == [8, 16]
    assert rows[0]["abs_err"] == pytest.approx(1 / 18, abs=1e-12)
    lemma = partrec.lemma_checks("uniform01", 100, 1)
    assert lemma["normalization"]["exact"] == Fraction(1, 100)
    assert partrec.theta("uniform01", 4, 4, 2) == pytest.approx(3 / 8)
