import csv
import os

import numpy as np
import pytest

from teleboost.data import CATEGORICAL_LEVELS, LABEL_COLUMN, NUMERIC_COLUMNS, load_bank_csv, one_hot_encode

REPO_ROOT = os.path.dirname(os.path.dirname(os.path.abspath(__file__)))
BANK_SKIP_MSG = ("bank marketing CSV not found; set TELEBOOST_BANK_CSV or place "
                 "bank-additional-full.csv under data/ (see README)")


def bank_csv_location():
    env = os.environ.get("TELEBOOST_BANK_CSV")
    if env:
        return env if os.path.exists(env) else None
    default = os.path.join(REPO_ROOT, "data", "bank-additional-full.csv")
    return default if os.path.exists(default) else None


@pytest.fixture(scope="session")
def bank_csv_path():
    path = bank_csv_location()
    if path is None:
        pytest.skip(BANK_SKIP_MSG)
    return path


@pytest.fixture(scope="session")
def bank_data(bank_csv_path):
    return one_hot_encode(load_bank_csv(bank_csv_path))


def make_mini_rows(n, seed, quirk=None):
    """Valid raw rows in schema column order plus a label, list of lists."""
    rng = np.random.default_rng(seed)
    rows = []
    for _ in range(n):
        duration = int(rng.integers(0, 2000))
        numeric = [str(int(rng.integers(18, 90))), str(duration), str(int(rng.integers(1, 12))),
                   "999", "0", f"{rng.uniform(-3.4, 1.4):.1f}", f"{rng.uniform(92.2, 94.8):.3f}",
                   f"{rng.uniform(-50.8, -26.9):.1f}", f"{rng.uniform(0.6, 5.1):.3f}",
                   f"{rng.uniform(4963.6, 5228.1):.1f}"]
        cats = [levels[rng.integers(0, len(levels))] for _, levels in CATEGORICAL_LEVELS]
        label = "yes" if (duration > 1100) ^ (rng.random() < 0.10) else "no"
        rows.append(numeric + cats + [label])
    if quirk:
        quirk(rows)
    return rows


def write_mini_csv(path, n=200, seed=0, quirk=None, header=None):
    raw_header = header
    if raw_header is None:
        raw_header = list(NUMERIC_COLUMNS) + [name for name, _ in CATEGORICAL_LEVELS] + [LABEL_COLUMN]
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh, delimiter=";", quoting=csv.QUOTE_ALL)
        writer.writerow(raw_header)
        for row in make_mini_rows(n, seed, quirk):
            writer.writerow(row)
    return path


@pytest.fixture
def mini_csv(tmp_path):
    return write_mini_csv(tmp_path / "mini.csv", n=200, seed=0)


@pytest.fixture
def mini_data(mini_csv):
    return one_hot_encode(load_bank_csv(mini_csv))
