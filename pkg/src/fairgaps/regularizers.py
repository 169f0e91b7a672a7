"""Differentiable training-time estimates of the fairness gaps.

A predictor's positive-class probabilities r_i are averaged per (A, Y) cell
into a soft 2x2x2 joint over (R, A, Y): the R=1 slice holds mean r, the R=0
slice mean (1 - r).  Every gap is then the plug-in formula on that joint,
which is smooth in each r_i, and the gradient is an exact chain rule:
the value's partials w.r.t. the eight cells, scattered back per sample.

Unlike the evaluation-time estimators in ``infotheory`` (exact 0*log(0)
handling), logs here are clamped at 1e-12 so gradients stay finite when a
cell empties out during training.  On hard 0/1 predictions the soft joint
degenerates to the empirical table and the values agree with the
``fairness`` module.
"""

import enum
from dataclasses import dataclass

import numpy as np

from . import _kernels

__all__ = [
    "RegularizerKind",
    "SoftJoint",
    "soft_joint",
    "reg_value",
    "reg_gradient",
    "reg_value_and_cell_grad",
]

LOG_EPS = 1e-12


class RegularizerKind(enum.Enum):
    """The selectable fairness regularization terms (NONE = unregularized)."""

    IND = "IND"
    SEP = "SEP"
    SUF = "SUF"
    BAL = "BAL"
    NEG_ACC = "NEG_ACC"
    NONE = "NONE"


# Each value is a signed combination of clamped-log entropies of marginals
# of the (R, A, Y) joint; dims: 0 = R, 1 = A, 2 = Y.
#   I(U;V)   =  H(U) + H(V) - H(U,V)
#   I(U;V|W) =  H(U,W) + H(V,W) - H(W) - H(U,V,W)
_ENTROPY_TERMS = {
    RegularizerKind.IND: ((1, (0,)), (1, (1,)), (-1, (0, 1))),
    RegularizerKind.SEP: ((1, (0, 2)), (1, (1, 2)), (-1, (2,)), (-1, (0, 1, 2))),
    RegularizerKind.SUF: ((1, (0, 2)), (1, (0, 1)), (-1, (0,)), (-1, (0, 1, 2))),
    RegularizerKind.BAL: ((1, (1, 2)), (1, (0, 1)), (-1, (1,)), (-1, (0, 1, 2))),
    RegularizerKind.NEG_ACC: ((-1, (2,)), (-1, (0,)), (1, (0, 2))),
}


@dataclass(frozen=True)
class SoftJoint:
    """Soft joint over (R, A, Y) plus what the chain rule needs per sample.

    ``probs[r, a, y]`` sums to one; the (A, Y) marginal equals the empirical
    frequencies by construction.  ``group_index`` is 2*a + y per sample and
    ``n_boundary`` counts inputs at or beyond the log-clamping range (the
    gradient treats those as sitting on the clamp boundary).
    """

    probs: np.ndarray
    group_index: np.ndarray
    n: int
    n_boundary: int

    @property
    def jacobian(self):
        """Dense per-sample partials d(probs)/d(r_i), shape (n, 2, 2, 2).

        Sample i moves mass only between the two R-cells of its own (a, y)
        slice: +1/n for R=1, -1/n for R=0.  Kept as a materialized array for
        inspection and tests; internal code uses the sparse form directly.
        """
        jac = np.zeros((self.n, 2, 2, 2))
        a, y = np.divmod(self.group_index, 2)
        idx = np.arange(self.n)
        jac[idx, 1, a, y] = 1.0 / self.n
        jac[idx, 0, a, y] = -1.0 / self.n
        return jac


def _as_binary(name, v):
    arr = np.asarray(v)
    if not np.isin(arr, (0, 1)).all():
        raise ValueError(f"{name} must be a binary vector")
    return arr.astype(np.intp)


def soft_joint(pred_probs, a, y):
    """Build the soft (R, A, Y) joint from per-sample probabilities.

    ``pred_probs`` must lie in [0, 1]; hard 0/1 inputs are allowed and give
    exactly the empirical joint.
    """
    r = np.ascontiguousarray(pred_probs, dtype=np.float64)
    a = _as_binary("a", a)
    y = _as_binary("y", y)
    if r.ndim != 1 or r.shape[0] == 0:
        raise ValueError("pred_probs must be a nonempty 1-d vector")
    if not (r.shape[0] == a.shape[0] == y.shape[0]):
        raise ValueError(
            f"length mismatch: pred_probs {r.shape[0]}, a {a.shape[0]}, y {y.shape[0]}")
    if np.any(r < 0.0) or np.any(r > 1.0):
        raise ValueError("pred_probs must lie in [0, 1]")
    g = np.ascontiguousarray(2 * a + y)
    n = r.shape[0]
    counts = _kernels.group_counts(g)
    s1 = _kernels.group_prob_sums(r, g)
    cells = np.empty((2, 4))
    cells[1] = s1 / n
    cells[0] = np.maximum(counts - s1, 0.0) / n
    n_boundary = int(np.count_nonzero((r <= LOG_EPS) | (r >= 1.0 - LOG_EPS)))
    probs = cells.reshape(2, 2, 2)
    probs.setflags(write=False)
    return SoftJoint(probs=probs, group_index=g, n=n, n_boundary=n_boundary)


def reg_value_and_cell_grad(kind, probs):
    """Value of a regularizer on a (2, 2, 2) joint and its cell partials.

    Returns ``(value, grad)`` with ``grad[r, a, y] = d(value)/d(probs[r, a, y])``
    treating the eight cells as free variables.  Logs are clamped at
    ``LOG_EPS``; the partial of x * log(max(x, eps)) is log(max(x, eps)) + 1
    above the clamp and log(eps) below it, matching finite differences of
    the clamped value on both sides.
    """
    if kind is RegularizerKind.NONE:
        raise ValueError("no regularizer selected")
    value = 0.0
    grad = np.zeros((2, 2, 2))
    for coef, keep in _ENTROPY_TERMS[kind]:
        drop = tuple(d for d in range(3) if d not in keep)
        m = probs.sum(axis=drop, keepdims=True) if drop else probs
        logm = np.log(np.maximum(m, LOG_EPS))
        value -= coef * float(np.sum(m * logm))
        grad -= coef * (logm + (m > LOG_EPS))
    return value, grad


def reg_value(kind, j):
    """Regularizer value (nats) on a soft joint; NEG_ACC returns -I(Y;R)."""
    value, _ = reg_value_and_cell_grad(kind, j.probs)
    return value


def reg_gradient(kind, j):
    """Analytic gradient of ``reg_value`` w.r.t. each sample's probability.

    Chains the cell partials through the soft-joint construction:
    d(value)/d(r_i) = (grad[1, a_i, y_i] - grad[0, a_i, y_i]) / n.
    """
    _, grad = reg_value_and_cell_grad(kind, j.probs)
    d1 = np.ascontiguousarray(grad[1].ravel())
    d0 = np.ascontiguousarray(grad[0].ravel())
    return _kernels.scatter_cell_diff(d1, d0, j.group_index) / j.n
