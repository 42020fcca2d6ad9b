"""Loading and encoding of the direct-marketing contact dataset.

The package works against one fixed tabular layout: ten numeric
attributes and ten categorical attributes per contacted client, plus a
yes/no outcome column. Categorical attributes are one-hot expanded
against the hard-coded level lists below ("unknown" is an ordinary
level, never imputed), numerics pass through unscaled, and the result
is a dense 63-column float matrix whose column order is frozen so that
feature indices stay meaningful across runs, files, and reports.
"""

import csv
from dataclasses import dataclass

import numpy as np

NUMERIC_COLUMNS = (
    "age",
    "duration",
    "campaign",
    "pdays",
    "previous",
    "emp.var.rate",
    "cons.price.idx",
    "cons.conf.idx",
    "euribor3m",
    "nr.employed",
)

CATEGORICAL_LEVELS = (
    ("job", ("admin.", "blue-collar", "entrepreneur", "housemaid", "management", "retired",
             "self-employed", "services", "student", "technician", "unemployed", "unknown")),
    ("marital", ("divorced", "married", "single", "unknown")),
    ("education", ("basic.4y", "basic.6y", "basic.9y", "high.school", "illiterate",
                   "professional.course", "university.degree", "unknown")),
    ("default", ("no", "unknown", "yes")),
    ("housing", ("no", "unknown", "yes")),
    ("loan", ("no", "unknown", "yes")),
    ("contact", ("cellular", "telephone")),
    ("month", ("apr", "aug", "dec", "jul", "jun", "mar", "may", "nov", "oct", "sep")),
    ("day_of_week", ("fri", "mon", "thu", "tue", "wed")),
    ("poutcome", ("failure", "nonexistent", "success")),
)

LABEL_COLUMN = "y"


@dataclass(frozen=True)
class SchemaEntry:
    """One encoded column: a numeric passthrough or a single one-hot level."""

    index: int
    name: str
    source: str
    category: str | None  # None for numeric columns


@dataclass(frozen=True)
class FeatureSchema:
    entries: tuple

    @property
    def width(self):
        return len(self.entries)

    def name_of(self, index):
        return self.entries[index].name

    def index_of(self, name):
        for e in self.entries:
            if e.name == name:
                return e.index
        raise KeyError(f"no encoded column named {name!r}")

    def group(self, source):
        """Indices of every encoded column produced by one raw column."""
        out = [e.index for e in self.entries if e.source == source]
        if not out:
            raise KeyError(f"no raw column named {source!r}")
        return out


def _build_schema():
    entries = []
    for name in NUMERIC_COLUMNS:
        entries.append(SchemaEntry(index=len(entries), name=name, source=name, category=None))
    for source, levels in CATEGORICAL_LEVELS:
        for level in levels:
            entries.append(SchemaEntry(index=len(entries), name=f"{source}_{level}",
                                       source=source, category=level))
    return FeatureSchema(entries=tuple(entries))


SCHEMA = _build_schema()


@dataclass
class RawDataset:
    """Parsed but unencoded rows: numerics as floats, categoricals as strings."""

    numeric: np.ndarray      # (n, 10) float64, NUMERIC_COLUMNS order
    categorical: np.ndarray  # (n, 10) object, CATEGORICAL_LEVELS order
    labels: list             # raw outcome strings

    @property
    def n_rows(self):
        return len(self.labels)


@dataclass
class EncodedDataset:
    matrix: np.ndarray  # (n, 63) float64
    labels: np.ndarray  # (n,) int64 in {0, 1}
    schema: FeatureSchema

    @property
    def n_rows(self):
        return self.matrix.shape[0]

    @property
    def feature_names(self):
        return [e.name for e in self.schema.entries]


def _clean(cell):
    return cell.strip().strip('"').strip()


def load_bank_csv(path, delimiter=";"):
    """Parse a delimited export with a header row into a RawDataset.

    The header must contain exactly the 20 known attribute columns plus
    the outcome column, in any order. Numeric fields must parse as
    floats and categorical fields must match the hard-coded level lists;
    violations raise ValueError with the 1-based file line number.
    """
    expected = set(NUMERIC_COLUMNS) | {name for name, _ in CATEGORICAL_LEVELS} | {LABEL_COLUMN}

    with open(path, newline="") as fh:
        reader = csv.reader(fh, delimiter=delimiter, quotechar='"')
        try:
            header = [_clean(c) for c in next(reader)]
        except StopIteration:
            raise ValueError(f"{path}: file is empty, expected a header row") from None

        seen = set(header)
        missing = expected - seen
        if missing:
            raise ValueError(f"{path}: header is missing columns {sorted(missing)} "
                             f"(wrong delimiter? current: {delimiter!r})")
        extra = seen - expected
        if extra:
            raise ValueError(f"{path}: header has unrecognized columns {sorted(extra)}")
        if len(header) != len(expected):
            raise ValueError(f"{path}: header repeats a column name")
        pos = {name: header.index(name) for name in header}

        numeric_rows = []
        categorical_rows = []
        labels = []
        for row in reader:
            line = reader.line_num
            if len(row) != len(header):
                raise ValueError(f"{path}:{line}: expected {len(header)} fields, got {len(row)}")
            cells = [_clean(c) for c in row]
            num = []
            for name in NUMERIC_COLUMNS:
                raw = cells[pos[name]]
                try:
                    num.append(float(raw))
                except ValueError:
                    raise ValueError(f"{path}:{line}: column {name!r} has non-numeric value {raw!r}") from None
            cats = []
            for name, levels in CATEGORICAL_LEVELS:
                raw = cells[pos[name]]
                if raw not in levels:
                    raise ValueError(f"{path}:{line}: column {name!r} has unknown category {raw!r}")
                cats.append(raw)
            numeric_rows.append(num)
            categorical_rows.append(cats)
            labels.append(cells[pos[LABEL_COLUMN]])

    numeric = np.asarray(numeric_rows, dtype=np.float64).reshape(len(labels), len(NUMERIC_COLUMNS))
    categorical = np.empty((len(labels), len(CATEGORICAL_LEVELS)), dtype=object)
    for i, cats in enumerate(categorical_rows):
        categorical[i, :] = cats
    return RawDataset(numeric=numeric, categorical=categorical, labels=labels)


def encode_labels(raw):
    """Map outcome strings to ints: yes -> 1, no -> 0, anything else rejects."""
    out = np.empty(raw.n_rows, dtype=np.int64)
    for i, v in enumerate(raw.labels):
        if v == "yes":
            out[i] = 1
        elif v == "no":
            out[i] = 0
        else:
            raise ValueError(f"label {v!r} at row {i} is not yes/no")
    return out


def one_hot_encode(raw):
    """Expand a RawDataset to the fixed 63-column float matrix plus 0/1 labels."""
    n = raw.n_rows
    matrix = np.zeros((n, SCHEMA.width), dtype=np.float64)
    matrix[:, : len(NUMERIC_COLUMNS)] = raw.numeric
    col = len(NUMERIC_COLUMNS)
    for j, (name, levels) in enumerate(CATEGORICAL_LEVELS):
        values = raw.categorical[:, j]
        seen = np.zeros(n, dtype=bool)
        for k, level in enumerate(levels):
            mask = values == level
            matrix[mask, col + k] = 1.0
            seen |= mask
        if not seen.all():
            bad = int(np.argmin(seen))
            raise ValueError(f"unseen {name} value {values[bad]!r} at row {bad}")
        col += len(levels)
    return EncodedDataset(matrix=matrix, labels=encode_labels(raw), schema=SCHEMA)


def generic_schema(width):
    """Anonymous all-numeric schema f0..f{width-1} for non-CSV matrices."""
    entries = tuple(SchemaEntry(index=i, name=f"f{i}", source=f"f{i}", category=None)
                    for i in range(width))
    return FeatureSchema(entries=entries)


def encoded_from_arrays(matrix, labels):
    """Wrap an arbitrary float matrix + 0/1 labels as an EncodedDataset."""
    m = np.ascontiguousarray(np.asarray(matrix, dtype=np.float64))
    y = np.asarray(labels)
    if m.ndim != 2:
        raise ValueError(f"matrix must be 2-D, got shape {m.shape}")
    if y.shape != (m.shape[0],):
        raise ValueError(f"labels length {y.shape} does not match matrix rows {m.shape[0]}")
    if not np.isin(y, (0, 1)).all():
        raise ValueError("labels must contain only 0/1")
    return EncodedDataset(matrix=m, labels=y.astype(np.int64), schema=generic_schema(m.shape[1]))


def class_distribution_inverse(labels):
    """Majority-over-minority count ratio count(0) / count(1)."""
    arr = np.asarray(labels)
    pos = int(np.sum(arr == 1))
    neg = int(np.sum(arr == 0))
    if pos == 0:
        raise ValueError("class_distribution_inverse undefined: no positive (1) labels")
    if neg == 0:
        raise ValueError("class_distribution_inverse undefined: no negative (0) labels")
    return neg / pos


def write_encoded(dataset, path, delimiter="\t"):
    """Dump the encoded matrix as delimited text with an index:name header."""
    names = [f"{e.index}:{e.name}" for e in dataset.schema.entries]
    with open(path, "w") as fh:
        fh.write(delimiter.join(names + [LABEL_COLUMN]) + "\n")
        for i in range(dataset.n_rows):
            cells = [repr(v) for v in dataset.matrix[i].tolist()]
            cells.append(str(int(dataset.labels[i])))
            fh.write(delimiter.join(cells) + "\n")
