"""NumPy implementations of the per-sample hot kernels.

This is the fallback backend; ``fairgaps._fastkernels`` (Cython) implements
the same contract with fused single-pass loops.  Every function here receives
pre-validated, C-contiguous float64 / intp arrays (see ``fairgaps._kernels``).

Conventions shared by both backends:
  * predicted probabilities are clamped to [PROB_EPS, 1 - PROB_EPS];
  * ``g`` is the per-sample group index 2*a + y in {0, 1, 2, 3};
  * soft-joint cells are indexed (r, a, y) and flattened group-wise as
    cell[r, g] with g = 2*a + y.
"""

import numpy as np

PROB_EPS = 1e-12

NAME = "python"


def sigmoid_clamped(z):
    """Logistic function of ``z``, clamped to [PROB_EPS, 1 - PROB_EPS]."""
    r = 0.5 * (1.0 + np.tanh(0.5 * z))
    return np.clip(r, PROB_EPS, 1.0 - PROB_EPS)


def mean_cross_entropy(r, y):
    """Mean binary cross-entropy of probabilities ``r`` against labels ``y``."""
    return float(-np.mean(y * np.log(r) + (1.0 - y) * np.log1p(-r)))


def group_prob_sums(r, g):
    """Per-group sums of ``r``: out[k] = sum of r[i] over samples with g[i] = k."""
    return np.bincount(g, weights=r, minlength=4)


def group_counts(g):
    """Per-group sample counts for group indices in {0, 1, 2, 3}."""
    return np.bincount(g, minlength=4).astype(np.float64)


def scatter_cell_diff(d1, d0, g):
    """Per-sample cell-gradient difference: out[i] = d1[g[i]] - d0[g[i]]."""
    return (d1 - d0)[g]


def fused_forward(z, y, g):
    """Sigmoid, cross-entropy and soft-cell sums in one logical pass.

    Returns ``(r, ce, s1)`` where ``r`` are clamped probabilities, ``ce`` is
    the mean cross-entropy against ``y`` and ``s1[k]`` is the sum of ``r``
    over group ``k``.  The cross-entropy is evaluated in logit space
    (softplus form), so it stays finite and exactly differentiable for any
    ``z``; the clamp on ``r`` only affects the soft cells.
    """
    r = sigmoid_clamped(z)
    ce = float(np.mean(y * np.logaddexp(0.0, -z) + (1.0 - y) * np.logaddexp(0.0, z)))
    s1 = group_prob_sums(r, g)
    return r, ce, s1


def fused_sample_grad(r, y, g, d1, d0, mu, inv_n):
    """Gradient of the penalized loss w.r.t. the per-sample logits.

    out[i] = (r[i] - y[i]) * inv_n
             + mu * inv_n * (d1[g[i]] - d0[g[i]]) * r[i] * (1 - r[i])

    The first term is the cross-entropy gradient; the second chains the
    regularizer's cell gradients (``d1`` for the R=1 cells, ``d0`` for R=0)
    through the soft-joint construction and the sigmoid.
    """
    gz = (r - y) * inv_n
    if mu != 0.0:
        gz = gz + (mu * inv_n) * (d1 - d0)[g] * r * (1.0 - r)
    return gz
