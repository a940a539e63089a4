"""Record statistics under partial comparisons.

Exact results come back as ``fractions.Fraction``; everything else is plain
floats, lists and dicts.
"""

from fractions import Fraction

from . import _partrec
from ._partrec import (
    Density,
    PartrecError,
    Plan,
    builtin_names,
    chained_plan,
    density,
    discretize,
    empirical_record_value_cdf,
    error_sweep,
    estimate_joint,
    joint_record_prob_bounded,
    quadrature_bounded,
    record_time_pmf,
    record_value_cdf,
    simulate,
    tabulated,
    theta,
    total_comparison_plan,
    validate,
    validation_report,
)

__version__ = "0.1.0"


def _frac(text):
    return Fraction(text) if text is not None else None


def cumulative_intensity(plan, j):
    return _frac(_partrec.cumulative_intensity(plan, j))


def record_prob(plan, t):
    return _frac(_partrec.record_prob(plan, t))


def joint_record_prob(plan, positions):
    return _frac(_partrec.joint_record_prob(plan, list(positions)))


def harmonic_number(j):
    return _frac(_partrec.harmonic_number(j))


def record_count_moments(plan, j):
    d = _partrec.record_count_moments(plan, j)
    return {"j": d["j"], "mean": _frac(d["mean"]), "variance": _frac(d["variance"])}


def exact_joint(plan, terms, max_indices=10, threads=1):
    """``terms`` is a list of positions or ``(position, negated)`` pairs."""
    norm = [(t, False) if isinstance(t, int) else (t[0], bool(t[1])) for t in terms]
    return _frac(_partrec.exact_joint(plan, norm, max_indices, threads))


def lemma_checks(density, m, r):
    rows = _partrec.lemma_checks(density, m, r)
    for row in rows.values():
        row["exact"] = _frac(row["exact"])
    return rows


def joint_record_prob_discrete(plan, positions, density, m):
    d = _partrec.joint_record_prob_discrete(plan, list(positions), density, m)
    return _frac(d["exact"]) if d["exact"] is not None else d["value"]


def exhaustive_discrete_oracle(plan, positions, density, m):
    d = _partrec.exhaustive_discrete_oracle(plan, list(positions), density, m)
    return _frac(d["exact"]) if d["exact"] is not None else d["value"]


__all__ = [name for name in dir() if not name.startswith("_")]
