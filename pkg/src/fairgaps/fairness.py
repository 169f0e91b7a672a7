"""Fairness gaps over a joint (R, A, Y) table, their decompositions and
normalizations.

Axis conventions: R is the (hard) prediction, A the sensitive attribute and
Y the ground truth.  All gaps are plug-in mutual informations in nats:

  independence  I(R;A)      separation  I(R;A|Y)     sufficiency  I(Y;A|R)
  accuracy      I(Y;R)      balance     I(Y;R|A)

Sufficiency decomposes as -accuracy + balance + I(A;Y) (the "legacy" term,
which no predictor can change) and separation as -accuracy + balance +
independence, which is what makes indirect regularization effects possible.
Normalized variants divide by H(A), H(A|Y) and H(A|R) respectively and are
flagged undefined when the denominator degenerates.
"""

import math
from dataclasses import dataclass
from typing import NamedTuple

from .infotheory import (
    ProbTable,
    conditional_entropy,
    conditional_mutual_information,
    entropy,
    marginalize,
    mutual_information,
)

__all__ = [
    "FairnessReport",
    "independence_gap",
    "separation_gap",
    "sufficiency_gap",
    "accuracy_mi",
    "balance",
    "legacy_term",
    "SufficiencyDecomposition",
    "SeparationDecomposition",
    "sufficiency_decomposition",
    "separation_decomposition",
    "normalized_report",
    "satisfies_degree",
    "maintains_degree",
]

_DENOM_EPS = 1e-12
_MARGINAL_TOL = 1e-6


def _require_axes(t, names):
    for name in names:
        if name not in t.axes:
            raise ValueError(f"table is missing required axis {name!r}; has {t.axes}")


def independence_gap(t):
    """I(R;A): zero iff the prediction is independent of the sensitive attribute."""
    _require_axes(t, ("R", "A"))
    return mutual_information(t, "R", "A")


def separation_gap(t):
    """I(R;A|Y): zero iff prediction and sensitive attribute are independent given truth."""
    _require_axes(t, ("R", "A", "Y"))
    return conditional_mutual_information(t, "R", "A", "Y")


def sufficiency_gap(t):
    """I(Y;A|R): zero iff truth and sensitive attribute are independent given prediction."""
    _require_axes(t, ("R", "A", "Y"))
    return conditional_mutual_information(t, "Y", "A", "R")


def accuracy_mi(t):
    """I(Y;R), the information the prediction carries about the truth."""
    _require_axes(t, ("R", "Y"))
    return mutual_information(t, "Y", "R")


def balance(t):
    """I(Y;R|A), the within-group dependence of prediction on truth."""
    _require_axes(t, ("R", "A", "Y"))
    return conditional_mutual_information(t, "Y", "R", "A")


def legacy_term(t):
    """I(A;Y): depends only on the (A, Y) distribution, never on the predictor."""
    _require_axes(t, ("A", "Y"))
    return mutual_information(t, "A", "Y")


class SufficiencyDecomposition(NamedTuple):
    suf: float
    neg_acc: float
    bal: float
    legacy: float


class SeparationDecomposition(NamedTuple):
    sep: float
    neg_acc: float
    bal: float
    ind: float


def sufficiency_decomposition(t):
    """I(Y;A|R) = -I(Y;R) + I(Y;R|A) + I(A;Y), term by term."""
    _require_axes(t, ("R", "A", "Y"))
    return SufficiencyDecomposition(
        suf=sufficiency_gap(t),
        neg_acc=-accuracy_mi(t),
        bal=balance(t),
        legacy=legacy_term(t),
    )


def separation_decomposition(t):
    """I(R;A|Y) = -I(Y;R) + I(Y;R|A) + I(A;R), term by term."""
    _require_axes(t, ("R", "A", "Y"))
    return SeparationDecomposition(
        sep=separation_gap(t),
        neg_acc=-accuracy_mi(t),
        bal=balance(t),
        ind=independence_gap(t),
    )


@dataclass(frozen=True)
class FairnessReport:
    """All five gaps plus normalized variants and their denominators.

    Raw gaps are always populated.  A normalized value is NaN exactly when
    the matching ``*_defined`` flag is False, which happens iff its
    denominator is below 1e-12 (e.g. H(A|R) = 0 when R determines A).
    """

    ind: float
    sep: float
    suf: float
    acc: float
    bal: float
    n_ind: float
    n_sep: float
    n_suf: float
    n_ind_defined: bool
    n_sep_defined: bool
    n_suf_defined: bool
    h_a: float
    h_a_given_y: float
    h_a_given_r: float


def _normalize(gap, denom):
    if denom < _DENOM_EPS:
        return math.nan, False
    # mathematically gap <= denom; keep float slop out of the [0, 1] contract
    return min(gap / denom, 1.0), True


def normalized_report(t):
    """Evaluate every gap and normalization on a joint (R, A, Y) table."""
    _require_axes(t, ("R", "A", "Y"))
    ind = independence_gap(t)
    sep = separation_gap(t)
    suf = sufficiency_gap(t)
    h_a = entropy(t, "A")
    h_a_given_y = conditional_entropy(t, "A", "Y")
    h_a_given_r = conditional_entropy(t, "A", "R")
    n_ind, ind_ok = _normalize(ind, h_a)
    n_sep, sep_ok = _normalize(sep, h_a_given_y)
    n_suf, suf_ok = _normalize(suf, h_a_given_r)
    return FairnessReport(
        ind=ind,
        sep=sep,
        suf=suf,
        acc=accuracy_mi(t),
        bal=balance(t),
        n_ind=n_ind,
        n_sep=n_sep,
        n_suf=n_suf,
        n_ind_defined=ind_ok,
        n_sep_defined=sep_ok,
        n_suf_defined=suf_ok,
        h_a=h_a,
        h_a_given_y=h_a_given_y,
        h_a_given_r=h_a_given_r,
    )


def satisfies_degree(gap, d):
    """Whether a gap value satisfies fairness degree ``d`` (gap <= d)."""
    if d < 0:
        raise ValueError(f"degree must be nonnegative, got {d!r}")
    return gap <= d


def maintains_degree(t_old, t_new, which):
    """Whether the predictor behind ``t_new`` maintains ``t_old``'s degree.

    For ``"sufficiency"`` this checks I(Y;R'|A) <= I(Y;R|A); for
    ``"separation"`` it checks I(Y;R'|A) + I(A;R') <= I(Y;R|A) + I(A;R).
    Both tables must describe the same population: their (A, Y) marginals
    must agree to 1e-6.
    """
    _require_axes(t_old, ("R", "A", "Y"))
    _require_axes(t_new, ("R", "A", "Y"))
    m_old = marginalize(t_old, ("A", "Y"))
    m_new = marginalize(t_new, ("A", "Y"))
    if abs(m_old.probs - m_new.probs).max() > _MARGINAL_TOL:
        raise ValueError("predictors not comparable: (A, Y) marginals differ")
    if which == "sufficiency":
        return balance(t_new) <= balance(t_old)
    if which == "separation":
        return (balance(t_new) + independence_gap(t_new)
                <= balance(t_old) + independence_gap(t_old))
    raise ValueError(f"which must be 'sufficiency' or 'separation', got {which!r}")
