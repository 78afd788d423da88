# tests/test_utils.py

import numpy as np

from fracspec.utils import ordered_map, settings
from fracspec.utils.io import format_number, read_column, read_table, write_csv, write_fields


def test_format_number_round_trips():
    for value in (0.1, 1.0 / 3.0, -2.5e-300, 7.0):
        text = format_number(value)
        assert float(text) == value
        assert "," not in text


def test_csv_round_trip(tmp_path):
    x = np.linspace(0.0, 1.0, 5)
    u = np.exp(x)
    path = write_fields(tmp_path / "out" / "fields.csv", x, u, -x)
    assert path.read_text().splitlines()[0] == "x,u,V"
    np.testing.assert_array_equal(read_column(path, "u"), u)
    np.testing.assert_array_equal(read_column(path, 2), -x)


def test_csv_keeps_integers(tmp_path):
    path = write_csv(tmp_path / "history.csv", ("k", "lambda"), [(0, 1.5), (1, 1.25)])
    assert path.read_text().splitlines()[1:] == ["0,1.5", "1,1.25"]


def test_read_table_handles_quotes_and_nan(tmp_path):
    path = tmp_path / "quoted.csv"
    path.write_text('"k","lambda"\n0,"1.5"\n1,nan\n')
    header, data = read_table(path)
    assert header == ["k", "lambda"]
    assert data[0].tolist() == [0.0, 1.5]
    assert np.isnan(data[1, 1])


def test_partial_history_keeps_nan(tmp_path):
    path = write_csv(tmp_path / "history.csv", ("k", "lambda", "opt_residual"), [(0, 2.0, float("nan"))])
    assert path.read_text().splitlines()[1] == "0,2.0,nan"
    assert np.isnan(read_column(path, "opt_residual")[0])


def test_ordered_map_keeps_input_order():
    assert ordered_map(lambda k: k * k, range(10)) == [k * k for k in range(10)]


def test_settings_from_environment():
    assert settings.APP_NAME == "fracspec"
    assert settings.THREADS == 1
