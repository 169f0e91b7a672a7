"""Logistic regression with composite loss: fit + L2 + fairness penalty.

The loss is ``l_fit + lam * l2 + mu * l_fair`` where l_fit is the mean
cross-entropy, l2 the squared norm of the feature weights (bias excluded)
and l_fair one of the soft-joint regularizers.  Both the loss and its exact
analytic gradient are cheap single passes over the samples, so the problem
is handed to a quasi-Newton solver (L-BFGS-B) with gradient supplied.

Hard evaluation thresholds probabilities at 0.5 and scores the resulting
(R, A, Y) empirical joint with the ``fairness`` module.
"""

from dataclasses import dataclass
from typing import NamedTuple

import numpy as np
from scipy.optimize import minimize

from . import _kernels
from .fairness import normalized_report
from .infotheory import from_counts
from .regularizers import RegularizerKind, reg_value_and_cell_grad

__all__ = [
    "Weights",
    "TrainConfig",
    "FitDiagnostics",
    "predict_proba",
    "total_loss",
    "total_gradient",
    "fit",
    "evaluate",
]

_ZEROS4 = np.zeros(4)


@dataclass(frozen=True)
class Weights:
    """Model parameters: one weight per feature plus the bias, last."""

    values: np.ndarray

    def __post_init__(self):
        v = np.asarray(self.values, dtype=np.float64)
        if v.ndim != 1 or v.shape[0] < 2:
            raise ValueError("weights must be a 1-d vector of length >= 2 (features + bias)")
        if not np.all(np.isfinite(v)):
            raise ValueError("weights must be finite")
        v = v.copy()
        v.setflags(write=False)
        object.__setattr__(self, "values", v)

    @property
    def features(self):
        return self.values[:-1]

    @property
    def bias(self):
        return float(self.values[-1])


@dataclass(frozen=True)
class TrainConfig:
    """Loss composition and solver settings.

    ``lam`` scales the L2 penalty, ``mu`` the fairness term of ``kind``.
    ``seed`` is carried for provenance; the solver itself is deterministic.
    """

    lam: float = 0.0
    mu: float = 0.0
    kind: RegularizerKind = RegularizerKind.NONE
    max_iter: int = 1000
    grad_tol: float = 1e-6
    seed: int = 0

    def __post_init__(self):
        if self.lam < 0 or self.mu < 0:
            raise ValueError("lam and mu must be nonnegative")
        if self.max_iter < 1:
            raise ValueError("max_iter must be >= 1")
        if self.grad_tol <= 0:
            raise ValueError("grad_tol must be positive")


class FitDiagnostics(NamedTuple):
    converged: bool
    n_iter: int
    n_evals: int
    initial_loss: float
    final_loss: float
    grad_inf_norm: float
    stop_reason: str


class _Problem(NamedTuple):
    X: np.ndarray
    y: np.ndarray        # intp, {0, 1}
    y_f: np.ndarray      # float64 copy of y
    g: np.ndarray        # intp group index 2*a + y
    counts: np.ndarray   # float64 per-group sample counts
    n: int
    p: int


def _binary_vector(name, v, n=None):
    arr = np.asarray(v)
    if arr.ndim != 1:
        raise ValueError(f"{name} must be a 1-d vector")
    if n is not None and arr.shape[0] != n:
        raise ValueError(f"{name} has length {arr.shape[0]}, expected {n}")
    if not np.isin(arr, (0, 1)).all():
        raise ValueError(f"{name} must be a binary vector")
    return arr.astype(np.intp)


def _prepare(X, y, a):
    X = np.ascontiguousarray(X, dtype=np.float64)
    if X.ndim != 2:
        raise ValueError("X must be a 2-d matrix")
    if not np.all(np.isfinite(X)):
        raise ValueError("X must be finite")
    n, p = X.shape
    y = _binary_vector("y", y, n)
    a = _binary_vector("a", a, n)
    g = np.ascontiguousarray(2 * a + y)
    return _Problem(X=X, y=y, y_f=y.astype(np.float64), g=g,
                    counts=_kernels.group_counts(g), n=n, p=p)


def predict_proba(w, X):
    """Sigmoid of the affine score, clamped to [1e-12, 1 - 1e-12]."""
    X = np.ascontiguousarray(X, dtype=np.float64)
    if X.ndim != 2 or X.shape[1] != w.values.shape[0] - 1:
        raise ValueError(
            f"X has shape {X.shape}, expected (*, {w.values.shape[0] - 1})")
    z = X @ w.values[:-1] + w.values[-1]
    return _kernels.sigmoid_clamped(z)


def _loss_grad(wvec, prob, cfg, want_grad):
    z = prob.X @ wvec[:-1] + wvec[-1]
    r, ce, s1 = _kernels.fused_forward(z, prob.y_f, prob.g)
    w_feat = wvec[:-1]
    loss = ce + cfg.lam * float(w_feat @ w_feat)
    mu = cfg.mu if cfg.kind is not RegularizerKind.NONE else 0.0
    if mu != 0.0:
        cells = np.empty((2, 4))
        cells[1] = s1 / prob.n
        cells[0] = np.maximum(prob.counts - s1, 0.0) / prob.n
        value, cell_grad = reg_value_and_cell_grad(cfg.kind, cells.reshape(2, 2, 2))
        loss += mu * value
        d1 = np.ascontiguousarray(cell_grad[1].ravel())
        d0 = np.ascontiguousarray(cell_grad[0].ravel())
    else:
        d1 = d0 = _ZEROS4
    if not want_grad:
        return loss, None
    gz = _kernels.fused_sample_grad(r, prob.y_f, prob.g, d1, d0, mu, 1.0 / prob.n)
    grad = np.empty(wvec.shape[0])
    grad[:-1] = prob.X.T @ gz + 2.0 * cfg.lam * w_feat
    grad[-1] = gz.sum()
    return loss, grad


def _check_dims(w, prob):
    if prob.p != w.values.shape[0] - 1:
        raise ValueError(
            f"X has {prob.p} columns, weights expect {w.values.shape[0] - 1}")


def total_loss(w, X, y, a, cfg):
    """l_fit + lam * l2 + mu * l_fair at the given weights."""
    prob = _prepare(X, y, a)
    _check_dims(w, prob)
    loss, _ = _loss_grad(w.values, prob, cfg, want_grad=False)
    return loss


def total_gradient(w, X, y, a, cfg):
    """Exact gradient of ``total_loss`` w.r.t. the weight vector."""
    prob = _prepare(X, y, a)
    _check_dims(w, prob)
    _, grad = _loss_grad(w.values, prob, cfg, want_grad=True)
    return grad


def fit(X, y, a, cfg):
    """Minimize the composite loss with L-BFGS-B from the all-ones start.

    Returns ``(Weights, FitDiagnostics)``.  Stops when the projected-gradient
    infinity norm drops below ``cfg.grad_tol`` or after ``cfg.max_iter``
    iterations; the diagnostics record which.  The returned point never has
    a higher loss than the starting point.
    """
    prob = _prepare(X, y, a)
    if prob.n < 10:
        raise ValueError(f"need at least 10 samples, got {prob.n}")
    if prob.y.min() == prob.y.max():
        raise ValueError("degenerate labels: y contains a single class")

    def objective(wvec):
        return _loss_grad(wvec, prob, cfg, want_grad=True)

    x0 = np.ones(prob.p + 1)
    initial_loss, _ = _loss_grad(x0, prob, cfg, want_grad=False)
    result = minimize(
        objective,
        x0,
        jac=True,
        method="L-BFGS-B",
        options={
            "maxiter": cfg.max_iter,
            "gtol": cfg.grad_tol,
            # disable the relative-decrease stop so only grad_tol / max_iter
            # terminate a healthy run
            "ftol": 0.0,
            "maxfun": max(15000, 50 * cfg.max_iter),
        },
    )
    xbest = result.x
    final_loss, grad = _loss_grad(xbest, prob, cfg, want_grad=True)
    if not np.isfinite(final_loss) or final_loss > initial_loss:
        xbest = x0
        final_loss, grad = _loss_grad(x0, prob, cfg, want_grad=True)
    grad_inf = float(np.abs(grad).max())
    diag = FitDiagnostics(
        converged=grad_inf <= cfg.grad_tol,
        n_iter=int(result.nit),
        n_evals=int(result.nfev),
        initial_loss=initial_loss,
        final_loss=final_loss,
        grad_inf_norm=grad_inf,
        stop_reason=str(result.message),
    )
    return Weights(values=xbest), diag


def evaluate(w, X, y, a):
    """Score hard 0.5-thresholded predictions on held-out data.

    Returns ``(FairnessReport, accuracy_fraction)`` computed from the
    empirical (R, A, Y) counts.
    """
    r = predict_proba(w, X)
    n = r.shape[0]
    y = _binary_vector("y", y, n)
    a = _binary_vector("a", a, n)
    hard = (r >= 0.5).astype(np.intp)
    counts = np.bincount(4 * hard + 2 * a + y, minlength=8).reshape(2, 2, 2)
    report = normalized_report(from_counts(counts, axes=("R", "A", "Y")))
    return report, float(np.mean(hard == y))
