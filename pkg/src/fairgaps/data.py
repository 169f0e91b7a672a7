"""Dataset ingestion, fold splitting and a synthetic biased generator.

CSV loading targets the preprocessed benchmark files (one-hot encoded,
binary sensitive attribute, complete rows): comma-separated UTF-8 with a
mandatory header.  The label and sensitive columns are pulled out of the
feature matrix; columns matching any drop prefix are removed (used to prune
the recidivism charge-description one-hot block).

The synthetic generator produces a binary sensitive attribute, informative
features, a proxy feature whose correlation with the sensitive attribute
scales with ``bias``, and labels from a noisy threshold, so that the
label/attribute dependence is zero at bias 0 and grows with it.
"""

import csv
from dataclasses import dataclass

import numpy as np

__all__ = [
    "Dataset",
    "DatasetSpec",
    "load_csv",
    "write_csv",
    "kfold_split",
    "synthesize",
]


@dataclass(frozen=True)
class Dataset:
    """Feature matrix plus binary label and sensitive vectors."""

    name: str
    X: np.ndarray
    y: np.ndarray
    a: np.ndarray
    feature_names: tuple

    def __post_init__(self):
        X = np.asarray(self.X, dtype=np.float64)
        y = np.asarray(self.y, dtype=np.intp)
        a = np.asarray(self.a, dtype=np.intp)
        if X.ndim != 2:
            raise ValueError("X must be a 2-d matrix")
        n = X.shape[0]
        if y.shape != (n,) or a.shape != (n,):
            raise ValueError("X, y and a must have matching row counts")
        if not np.all(np.isfinite(X)):
            raise ValueError("X contains non-finite entries")
        for name, v in (("y", y), ("a", a)):
            if not np.isin(v, (0, 1)).all():
                raise ValueError(f"{name} must be binary")
            if v.min() == v.max():
                raise ValueError(f"{name} must contain both classes")
        if len(self.feature_names) != X.shape[1]:
            raise ValueError("feature_names must match the number of columns")
        object.__setattr__(self, "X", X)
        object.__setattr__(self, "y", y)
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "feature_names", tuple(self.feature_names))

    @property
    def n(self):
        return self.X.shape[0]


@dataclass(frozen=True)
class DatasetSpec:
    """Where and how to read one preprocessed CSV."""

    csv_path: str
    label_column: str
    sensitive_column: str
    positive_label_value: str | None = None
    drop_column_prefixes: tuple = ()
    name: str = ""


def _parse_binary_column(values, column, positive_value):
    """Map a raw string column to {0, 1}.

    With ``positive_value`` given, cells equal to it (string comparison
    after stripping) become 1 and everything else 0.  Without it, cells
    must already be numeric 0/1.
    """
    out = np.empty(len(values), dtype=np.intp)
    for i, cell in enumerate(values):
        cell = cell.strip()
        if positive_value is not None:
            out[i] = 1 if cell == positive_value else 0
        else:
            try:
                num = float(cell)
            except ValueError:
                raise ValueError(
                    f"column {column!r}, row {i + 2}: {cell!r} is not 0/1") from None
            if num not in (0.0, 1.0):
                raise ValueError(
                    f"column {column!r}, row {i + 2}: {cell!r} is not 0/1")
            out[i] = int(num)
    return out


def load_csv(spec):
    """Read a preprocessed CSV into a Dataset per the spec's column roles."""
    with open(spec.csv_path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise ValueError(f"{spec.csv_path}: empty file, expected a header row") from None
        header = [h.strip() for h in header]
        rows = list(reader)
    if len(rows) < 10:
        raise ValueError(f"{spec.csv_path}: need at least 10 data rows, found {len(rows)}")
    for column in (spec.label_column, spec.sensitive_column):
        if column not in header:
            raise ValueError(f"{spec.csv_path}: missing column {column!r}")
    width = len(header)
    for i, row in enumerate(rows):
        if len(row) != width:
            raise ValueError(
                f"{spec.csv_path}, row {i + 2}: {len(row)} fields, header has {width}")

    drop = set()
    for j, name in enumerate(header):
        if name == spec.label_column or name == spec.sensitive_column:
            drop.add(j)
        elif any(name.startswith(p) for p in spec.drop_column_prefixes):
            drop.add(j)
    feature_idx = [j for j in range(width) if j not in drop]
    if not feature_idx:
        raise ValueError(f"{spec.csv_path}: no feature columns left after dropping")

    label_j = header.index(spec.label_column)
    sens_j = header.index(spec.sensitive_column)
    y = _parse_binary_column([r[label_j] for r in rows], spec.label_column,
                             spec.positive_label_value)
    a = _parse_binary_column([r[sens_j] for r in rows], spec.sensitive_column, None)

    X = np.empty((len(rows), len(feature_idx)))
    for i, row in enumerate(rows):
        for k, j in enumerate(feature_idx):
            cell = row[j].strip()
            try:
                X[i, k] = float(cell)
            except ValueError:
                raise ValueError(
                    f"{spec.csv_path}, row {i + 2}, column {header[j]!r}: "
                    f"cannot parse {cell!r} as a number") from None

    name = spec.name or spec.csv_path
    for vec, column in ((y, spec.label_column), (a, spec.sensitive_column)):
        if vec.min() == vec.max():
            raise ValueError(
                f"{spec.csv_path}: column {column!r} has a single class")
    return Dataset(name=name, X=X, y=y, a=a,
                   feature_names=tuple(header[j] for j in feature_idx))


def write_csv(ds, path, label_column="label", sensitive_column="sensitive"):
    """Write a Dataset back to CSV (inverse of ``load_csv`` for round-trips)."""
    if label_column in ds.feature_names or sensitive_column in ds.feature_names:
        raise ValueError("label/sensitive column names collide with feature names")
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow([label_column, sensitive_column, *ds.feature_names])
        for i in range(ds.n):
            writer.writerow([int(ds.y[i]), int(ds.a[i]),
                             *(repr(v) for v in ds.X[i])])


def kfold_split(n, k, seed):
    """Deterministic shuffled k-fold partition of range(n).

    Returns a list of ``(train_idx, test_idx)`` pairs; test sets are
    disjoint, exhaustive and differ in size by at most one.
    """
    if k < 2:
        raise ValueError(f"k must be >= 2, got {k}")
    if k > n:
        raise ValueError(f"k ({k}) must not exceed n ({n})")
    order = np.random.default_rng(seed).permutation(n)
    sizes = np.full(k, n // k)
    sizes[: n % k] += 1
    folds = []
    stop = np.cumsum(sizes)
    start = stop - sizes
    for i in range(k):
        test = np.sort(order[start[i]:stop[i]])
        train = np.sort(np.concatenate([order[:start[i]], order[stop[i]:]]))
        folds.append((train, test))
    return folds


def synthesize(n, bias, noise, seed, name="synthetic"):
    """Generate a biased binary-classification dataset.

    ``bias`` in [0, 1] scales both the direct label shift between sensitive
    groups and the correlation of the proxy feature with the group, so the
    empirical label/attribute dependence grows from about zero with it.
    ``noise`` in [0, 0.5] is the label-flip probability.
    """
    if n < 20:
        raise ValueError(f"n must be >= 20, got {n}")
    if not 0.0 <= bias <= 1.0:
        raise ValueError(f"bias must lie in [0, 1], got {bias}")
    if not 0.0 <= noise <= 0.5:
        raise ValueError(f"noise must lie in [0, 0.5], got {noise}")
    rng = np.random.default_rng(seed)
    a = rng.integers(0, 2, size=n)
    sign = 2.0 * a - 1.0
    x1 = rng.standard_normal(n)
    x2 = rng.standard_normal(n)
    proxy = 0.9 * bias * sign + 0.8 * rng.standard_normal(n)
    x4 = rng.standard_normal(n)
    latent = 1.0 * x1 + 0.8 * x2 + 0.9 * proxy + 0.6 * bias * sign
    y = (latent > 0).astype(np.intp)
    flip = rng.random(n) < noise
    y = np.where(flip, 1 - y, y)
    # guard against a freak single-class draw at extreme parameters
    if y.min() == y.max() or a.min() == a.max():
        raise ValueError("generated a single-class sample; increase n")
    X = np.column_stack([x1, x2, proxy, x4])
    return Dataset(name=name, X=X, y=y, a=a,
                   feature_names=("x1", "x2", "proxy", "x4"))
