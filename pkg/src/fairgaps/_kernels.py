"""Backend selection for the per-sample hot kernels.

The compiled extension (``fairgaps._fastkernels``) is preferred when it was
built; otherwise the NumPy fallback (``fairgaps._purekernels``) is used.
Setting the environment variable ``FAIRGAPS_PUREPY=1`` before import forces
the fallback, which is how the benchmark and the parity tests pin a backend
in a subprocess.  ``set_backend`` switches in-process.

Both backends implement the same functions on the same pre-validated inputs;
see ``fairgaps._purekernels`` for the contract.
"""

import os

from . import _purekernels

PROB_EPS = _purekernels.PROB_EPS

_BACKENDS = {"python": _purekernels}

try:
    from . import _fastkernels

    _BACKENDS["compiled"] = _fastkernels
except ImportError:
    pass


def _initial_backend():
    if os.environ.get("FAIRGAPS_PUREPY") == "1":
        return "python"
    return "compiled" if "compiled" in _BACKENDS else "python"


_active = _BACKENDS[_initial_backend()]


def available_backends():
    """Names of the importable backends ('python' is always present)."""
    return tuple(sorted(_BACKENDS))


def active_backend():
    """Name of the backend the delegators below currently dispatch to."""
    return _active.NAME


def get_backend(name):
    """Return a backend module by name; raises KeyError if not built."""
    return _BACKENDS[name]


def set_backend(name):
    """Switch the active backend in-process ('python' or 'compiled')."""
    global _active
    if name not in _BACKENDS:
        raise ValueError(f"unknown or unavailable backend {name!r}; "
                         f"available: {', '.join(available_backends())}")
    _active = _BACKENDS[name]


def sigmoid_clamped(z):
    return _active.sigmoid_clamped(z)


def mean_cross_entropy(r, y):
    return _active.mean_cross_entropy(r, y)


def group_prob_sums(r, g):
    return _active.group_prob_sums(r, g)


def group_counts(g):
    return _active.group_counts(g)


def scatter_cell_diff(d1, d0, g):
    return _active.scatter_cell_diff(d1, d0, g)


def fused_forward(z, y, g):
    return _active.fused_forward(z, y, g)


def fused_sample_grad(r, y, g, d1, d0, mu, inv_n):
    return _active.fused_sample_grad(r, y, g, d1, d0, mu, inv_n)
