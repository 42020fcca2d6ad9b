import numpy as np
import pytest

from teleboost.data import (CATEGORICAL_LEVELS, LABEL_COLUMN, NUMERIC_COLUMNS, SCHEMA,
                            RawDataset, class_distribution_inverse, encode_labels,
                            encoded_from_arrays, generic_schema, load_bank_csv,
                            one_hot_encode, write_encoded)
from conftest import write_mini_csv

# frozen column map; every index below is load-bearing for experiment configs
GOLDEN_SCHEMA = {
    0: "age", 1: "duration", 2: "campaign", 3: "pdays", 4: "previous",
    5: "emp.var.rate", 6: "cons.price.idx", 7: "cons.conf.idx", 8: "euribor3m",
    9: "nr.employed",
    10: "job_admin.", 11: "job_blue-collar", 12: "job_entrepreneur", 13: "job_housemaid",
    14: "job_management", 15: "job_retired", 16: "job_self-employed", 17: "job_services",
    18: "job_student", 19: "job_technician", 20: "job_unemployed", 21: "job_unknown",
    22: "marital_divorced", 23: "marital_married", 24: "marital_single", 25: "marital_unknown",
    26: "education_basic.4y", 27: "education_basic.6y", 28: "education_basic.9y",
    29: "education_high.school", 30: "education_illiterate",
    31: "education_professional.course", 32: "education_university.degree",
    33: "education_unknown",
    34: "default_no", 35: "default_unknown", 36: "default_yes",
    37: "housing_no", 38: "housing_unknown", 39: "housing_yes",
    40: "loan_no", 41: "loan_unknown", 42: "loan_yes",
    43: "contact_cellular", 44: "contact_telephone",
    45: "month_apr", 46: "month_aug", 47: "month_dec", 48: "month_jul", 49: "month_jun",
    50: "month_mar", 51: "month_may", 52: "month_nov", 53: "month_oct", 54: "month_sep",
    55: "day_of_week_fri", 56: "day_of_week_mon", 57: "day_of_week_thu",
    58: "day_of_week_tue", 59: "day_of_week_wed",
    60: "poutcome_failure", 61: "poutcome_nonexistent", 62: "poutcome_success",
}


def make_raw(rows, labels):
    numeric = np.asarray([r[:10] for r in rows], dtype=np.float64).reshape(len(rows), 10)
    categorical = np.empty((len(rows), 10), dtype=object)
    for i, r in enumerate(rows):
        categorical[i, :] = r[10:]
    return RawDataset(numeric=numeric, categorical=categorical, labels=labels)


def default_raw_row():
    numeric = [30.0, 100.0, 1.0, 999.0, 0.0, 1.1, 93.9, -36.4, 4.857, 5191.0]
    cats = [levels[0] for _, levels in CATEGORICAL_LEVELS]
    return numeric + cats


def test_schema_matches_golden_transcription():
    assert SCHEMA.width == 63
    for index, name in GOLDEN_SCHEMA.items():
        assert SCHEMA.name_of(index) == name, f"index {index}"
        assert SCHEMA.index_of(name) == index
    assert [e.index for e in SCHEMA.entries] == list(range(63))


def test_schema_groups():
    assert SCHEMA.group("job") == list(range(10, 22))
    assert SCHEMA.group("month") == list(range(45, 55))
    assert SCHEMA.group("age") == [0]
    with pytest.raises(KeyError):
        SCHEMA.group("nope")
    with pytest.raises(KeyError):
        SCHEMA.index_of("nope")


def test_load_mini_csv(tmp_path):
    path = write_mini_csv(tmp_path / "m.csv", n=50, seed=1)
    raw = load_bank_csv(path)
    assert raw.n_rows == 50
    assert raw.numeric.shape == (50, 10)
    assert raw.categorical.shape == (50, 10)
    assert set(raw.labels) <= {"yes", "no"}


def test_load_header_only_file(tmp_path):
    path = write_mini_csv(tmp_path / "empty.csv", n=0)
    raw = load_bank_csv(path)
    assert raw.n_rows == 0
    enc = one_hot_encode(raw)
    assert enc.matrix.shape == (0, 63)


def test_load_weekday_fixture(tmp_path):
    def force_days(rows):
        days = ("mon", "tue", "wed", "thu", "fri")
        day_pos = 10 + [name for name, _ in CATEGORICAL_LEVELS].index("day_of_week")
        for row, day in zip(rows, days):
            row[day_pos] = day

    path = write_mini_csv(tmp_path / "week.csv", n=5, seed=2, quirk=force_days)
    raw = load_bank_csv(path)
    assert raw.n_rows == 5
    day_col = [name for name, _ in CATEGORICAL_LEVELS].index("day_of_week")
    assert set(raw.categorical[:, day_col]) == {"mon", "tue", "wed", "thu", "fri"}


def test_load_reports_line_numbers(tmp_path):
    def truncate_row_3(rows):
        rows[2] = rows[2][:5]

    path = write_mini_csv(tmp_path / "short.csv", n=5, seed=3, quirk=truncate_row_3)
    with pytest.raises(ValueError, match=r":4: expected 21 fields"):
        load_bank_csv(path)

    def bad_age(rows):
        rows[0][0] = "forty"

    path = write_mini_csv(tmp_path / "nonnum.csv", n=3, seed=3, quirk=bad_age)
    with pytest.raises(ValueError, match=r":2: column 'age' has non-numeric value 'forty'"):
        load_bank_csv(path)

    def bad_job(rows):
        rows[1][10] = "astronaut"

    path = write_mini_csv(tmp_path / "badcat.csv", n=3, seed=3, quirk=bad_job)
    with pytest.raises(ValueError, match=r":3: column 'job' has unknown category 'astronaut'"):
        load_bank_csv(path)


def test_load_header_validation(tmp_path):
    header = list(NUMERIC_COLUMNS) + [name for name, _ in CATEGORICAL_LEVELS] + [LABEL_COLUMN]

    path = write_mini_csv(tmp_path / "missing.csv", n=1, header=header[:-1] + ["outcome"])
    with pytest.raises(ValueError, match="missing columns.*'y'.*wrong delimiter"):
        load_bank_csv(path)

    path = write_mini_csv(tmp_path / "extra.csv", n=0, header=header + ["bonus"])
    with pytest.raises(ValueError, match="unrecognized columns.*'bonus'"):
        load_bank_csv(path)

    path = write_mini_csv(tmp_path / "dup.csv", n=0, header=header[:-1] + ["age"])
    with pytest.raises(ValueError):
        load_bank_csv(path)

    # a comma file read with the default semicolon delimiter hints at the cause
    comma = tmp_path / "comma.csv"
    comma.write_text(",".join(header) + "\n")
    with pytest.raises(ValueError, match="wrong delimiter"):
        load_bank_csv(comma)
    assert load_bank_csv(comma, delimiter=",").n_rows == 0


def test_load_missing_file():
    with pytest.raises(OSError):
        load_bank_csv("/no/such/file.csv")


def test_encode_labels():
    raw = make_raw([default_raw_row()] * 3, ["yes", "no", "no"])
    assert encode_labels(raw).tolist() == [1, 0, 0]
    raw_empty = make_raw([], [])
    assert encode_labels(raw_empty).tolist() == []
    raw_bad = make_raw([default_raw_row()], ["maybe"])
    with pytest.raises(ValueError, match="'maybe' at row 0"):
        encode_labels(raw_bad)


def test_one_hot_group_sums():
    path_rows = [default_raw_row() for _ in range(4)]
    raw = make_raw(path_rows, ["yes", "no", "yes", "no"])
    enc = one_hot_encode(raw)
    assert enc.matrix.shape == (4, 63)
    onehot = enc.matrix[:, 10:]
    assert set(np.unique(onehot)) <= {0.0, 1.0}
    for source, _ in CATEGORICAL_LEVELS:
        group = SCHEMA.group(source)
        assert np.array_equal(enc.matrix[:, group].sum(axis=1), np.ones(4))
    # exactly one indicator per group, ten groups
    assert np.array_equal(onehot.sum(axis=1), np.full(4, 10.0))


def test_one_hot_named_indicator_example():
    row_no, row_yes, row_unknown = default_raw_row(), default_raw_row(), default_raw_row()
    default_pos = 10 + [name for name, _ in CATEGORICAL_LEVELS].index("default")
    row_no[default_pos] = "no"
    row_yes[default_pos] = "yes"
    row_unknown[default_pos] = "unknown"
    enc = one_hot_encode(make_raw([row_no, row_yes, row_unknown], ["no", "no", "no"]))

    def triple(i):
        return (enc.matrix[i, SCHEMA.index_of("default_no")],
                enc.matrix[i, SCHEMA.index_of("default_yes")],
                enc.matrix[i, SCHEMA.index_of("default_unknown")])

    assert triple(0) == (1, 0, 0)
    assert triple(1) == (0, 1, 0)
    assert triple(2) == (0, 0, 1)


def test_one_hot_round_trip_recovers_categories():
    rng = np.random.default_rng(8)
    rows = []
    cats_chosen = []
    for _ in range(20):
        row = default_raw_row()
        chosen = []
        for j, (_, levels) in enumerate(CATEGORICAL_LEVELS):
            pick = levels[rng.integers(0, len(levels))]
            row[10 + j] = pick
            chosen.append(pick)
        rows.append(row)
        cats_chosen.append(chosen)
    enc = one_hot_encode(make_raw(rows, ["no"] * 20))
    for i, chosen in enumerate(cats_chosen):
        for (source, _), category in zip(CATEGORICAL_LEVELS, chosen):
            group = SCHEMA.group(source)
            hot = [g for g in group if enc.matrix[i, g] == 1.0]
            assert len(hot) == 1
            assert SCHEMA.entries[hot[0]].category == category


def test_one_hot_rejects_unseen_category():
    row = default_raw_row()
    row[10] = "wizard"
    raw = make_raw([row], ["no"])
    with pytest.raises(ValueError, match="'wizard' at row 0"):
        one_hot_encode(raw)


def test_class_distribution_inverse():
    assert class_distribution_inverse([0, 0, 0, 1]) == 3.0
    assert class_distribution_inverse([0, 1, 0, 1]) == 1.0
    with pytest.raises(ValueError, match="no positive"):
        class_distribution_inverse([0, 0])
    with pytest.raises(ValueError, match="no negative"):
        class_distribution_inverse([1, 1])
    rng = np.random.default_rng(4)
    y = rng.integers(0, 2, size=500)
    y[:2] = [0, 1]
    ratio = class_distribution_inverse(y)
    assert ratio * int(np.sum(y == 1)) == int(np.sum(y == 0))


def test_encoded_from_arrays():
    X = np.arange(12.0).reshape(4, 3)
    data = encoded_from_arrays(X, [0, 1, 0, 1])
    assert data.feature_names == ["f0", "f1", "f2"]
    assert data.schema.width == 3
    assert data.matrix.dtype == np.float64
    with pytest.raises(ValueError, match="2-D"):
        encoded_from_arrays(np.arange(3.0), [0, 1, 0])
    with pytest.raises(ValueError, match="labels"):
        encoded_from_arrays(X, [0, 1])
    with pytest.raises(ValueError, match="0/1"):
        encoded_from_arrays(X, [0, 1, 2, 0])
    assert generic_schema(2).name_of(1) == "f1"


def test_write_encoded_round_trip(tmp_path, mini_data):
    path = tmp_path / "enc.tsv"
    write_encoded(mini_data, path)
    lines = path.read_text().strip().split("\n")
    header = lines[0].split("\t")
    assert header[0] == "0:age"
    assert header[62] == "62:poutcome_success"
    assert header[63] == "y"
    assert len(lines) == mini_data.n_rows + 1
    first = lines[1].split("\t")
    values = np.array([float(v) for v in first[:63]])
    assert np.array_equal(values, mini_data.matrix[0])
    assert int(first[63]) == int(mini_data.labels[0])
