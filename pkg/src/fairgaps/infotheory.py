"""Exact plug-in information-theoretic quantities over discrete joints.

All quantities are in nats.  Zero cells follow the 0*log(0) = 0 convention
exactly (no epsilon flooring), so identities like the chain rule hold to
machine precision even on sparse tables.  Tables are dense; the experiments
never need more than a 2x2x2 joint.
"""

from dataclasses import dataclass

import numpy as np

__all__ = [
    "ProbTable",
    "from_counts",
    "marginalize",
    "entropy",
    "conditional_entropy",
    "mutual_information",
    "conditional_mutual_information",
]

_SUM_TOL = 1e-9
_NEG_TOL = 1e-12


@dataclass(frozen=True)
class ProbTable:
    """Dense joint probability table over named axes.

    ``axes`` are unique axis names in storage order; ``probs`` has one
    dimension per axis (each of size >= 2), entries are nonnegative and sum
    to one.  Construction renormalizes sums within 1e-9 of one and rejects
    anything worse.  Instances are immutable (the array is marked read-only).
    """

    axes: tuple
    probs: np.ndarray

    def __post_init__(self):
        axes = tuple(self.axes)
        if len(set(axes)) != len(axes):
            raise ValueError(f"axis names must be unique, got {axes!r}")
        probs = np.asarray(self.probs, dtype=np.float64)
        if probs.ndim != len(axes):
            raise ValueError(
                f"table has {probs.ndim} dimensions but {len(axes)} axis names")
        if any(s < 2 for s in probs.shape):
            raise ValueError(f"every axis needs cardinality >= 2, got shape {probs.shape}")
        if not np.all(np.isfinite(probs)):
            raise ValueError("table entries must be finite")
        if np.any(probs < 0.0):
            raise ValueError("table entries must be nonnegative")
        total = float(probs.sum())
        if abs(total - 1.0) > _SUM_TOL:
            raise ValueError(f"table entries sum to {total!r}, expected 1 within {_SUM_TOL}")
        probs = probs / total
        probs.setflags(write=False)
        object.__setattr__(self, "axes", axes)
        object.__setattr__(self, "probs", probs)

    @property
    def axis_sizes(self):
        """Mapping of axis name to cardinality."""
        return dict(zip(self.axes, self.probs.shape))

    def axis_index(self, name):
        try:
            return self.axes.index(name)
        except ValueError:
            raise ValueError(f"unknown axis {name!r}; table has {self.axes}") from None


def from_counts(counts, axes):
    """Empirical plug-in table: each probability is count / total.

    ``counts`` is a nonnegative integer array with one dimension per axis
    name.  An all-zero table is rejected ("empty distribution").
    """
    arr = np.asarray(counts, dtype=np.float64)
    if np.any(arr < 0):
        raise ValueError("counts must be nonnegative")
    total = arr.sum()
    if total <= 0:
        raise ValueError("empty distribution")
    return ProbTable(axes=tuple(axes), probs=arr / total)


def _axis_tuple(t, names):
    """Normalize an axis selection to a tuple in table storage order."""
    if isinstance(names, str):
        names = (names,)
    names = tuple(names)
    for name in names:
        t.axis_index(name)
    if len(set(names)) != len(names):
        raise ValueError(f"duplicate axis in selection {names!r}")
    return tuple(a for a in t.axes if a in names)


def marginalize(t, keep):
    """Marginal table over the ``keep`` axes (kept in their original order)."""
    keep = _axis_tuple(t, keep)
    if not keep:
        raise ValueError("must keep at least one axis")
    drop = tuple(i for i, a in enumerate(t.axes) if a not in keep)
    return ProbTable(axes=keep, probs=t.probs.sum(axis=drop) if drop else t.probs)


def _marginal_array(t, names):
    names = _axis_tuple(t, names)
    drop = tuple(i for i, a in enumerate(t.axes) if a not in names)
    return t.probs.sum(axis=drop) if drop else t.probs


def _neg_plogp(p):
    """-sum(p log p) with 0*log(0) = 0, exactly."""
    p = p[p > 0.0]
    return float(-np.sum(p * np.log(p)))


def entropy(t, of):
    """Joint entropy H of the selected axes, in nats."""
    return _neg_plogp(_marginal_array(t, of))


def _disjoint(t, *groups):
    flat = []
    normalized = []
    for g in groups:
        g = _axis_tuple(t, g)
        normalized.append(g)
        flat.extend(g)
    if len(set(flat)) != len(flat):
        raise ValueError(f"axis sets must be disjoint, got {groups!r}")
    return normalized


def _clamp_nonneg(v):
    return v if v > 0.0 else 0.0


def conditional_entropy(t, target, given):
    """H(target | given) = H(target, given) - H(given), in nats."""
    target, given = _disjoint(t, target, given)
    return _clamp_nonneg(entropy(t, target + given) - entropy(t, given))


def mutual_information(t, x, y):
    """I(x; y) = H(x) + H(y) - H(x, y), clamped to >= 0 on return."""
    x, y = _disjoint(t, x, y)
    return _clamp_nonneg(entropy(t, x) + entropy(t, y) - entropy(t, x + y))


def conditional_mutual_information(t, x, y, z):
    """I(x; y | z) = H(x,z) + H(y,z) - H(z) - H(x,y,z), clamped to >= 0."""
    x, y, z = _disjoint(t, x, y, z)
    v = (entropy(t, x + z) + entropy(t, y + z)
         - entropy(t, z) - entropy(t, x + y + z))
    return _clamp_nonneg(v)
