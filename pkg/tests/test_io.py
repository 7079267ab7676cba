import math

import numpy as np
import pytest

from mdhtest import NonPositivePrice, ParseError, ingest_series


def write(tmp_path, text, name="series.txt"):
    path = tmp_path / name
    path.write_text(text)
    return path


def test_lines_with_log_returns(tmp_path):
    x = ingest_series(write(tmp_path, "1\n2\n4\n"), log_returns=True)
    np.testing.assert_allclose(x, [100 * math.log(2)] * 2, rtol=1e-15)


def test_lines_plain_and_squared(tmp_path):
    path = write(tmp_path, "# comment\n1.5\n\n-2\n3e-1\n")
    np.testing.assert_array_equal(ingest_series(path), [1.5, -2.0, 0.3])
    np.testing.assert_allclose(ingest_series(path, square=True), [2.25, 4.0, 0.09])


def test_empty_file(tmp_path):
    with pytest.raises(ParseError):
        ingest_series(write(tmp_path, ""))
    with pytest.raises(ParseError):
        ingest_series(write(tmp_path, "\n# nothing\n"))


def test_bad_value_reports_line(tmp_path):
    with pytest.raises(ParseError) as err:
        ingest_series(write(tmp_path, "1\n2\nabc\n4\n"))
    assert err.value.line == 3
    assert "line 3" in str(err.value)
    with pytest.raises(ParseError) as err:
        ingest_series(write(tmp_path, "1\nnan\n"))
    assert err.value.line == 2


def test_nonpositive_price(tmp_path):
    with pytest.raises(NonPositivePrice):
        ingest_series(write(tmp_path, "10\n0\n12\n"), log_returns=True)
    # squaring alone does not need positive levels
    assert ingest_series(write(tmp_path, "10\n-1\n"), square=True).tolist() == [100.0, 1.0]


def test_csv_by_header_790_rows(tmp_path):
    rng = np.random.default_rng(0)
    values = rng.standard_normal(790)
    body = "date,ret\n" + "".join(f"2000-{i},{v!r}\n" for i, v in enumerate(values.tolist()))
    x = ingest_series(write(tmp_path, body, "sp.csv"), "ret")
    assert x.shape == (790,)
    np.testing.assert_array_equal(x, values)


def test_csv_single_column_header(tmp_path):
    body = "ret\n" + "".join(f"{v}\n" for v in range(790))
    assert ingest_series(write(tmp_path, body, "r.csv"), "ret").size == 790


def test_csv_by_index(tmp_path):
    path = write(tmp_path, "a;b\n1;10\n2;20\n", "semi.csv")
    assert ingest_series(path, 1).tolist() == [10.0, 20.0]
    headerless = write(tmp_path, "1,10\n2,20\n3,40\n", "nohdr.csv")
    assert ingest_series(headerless, 0).tolist() == [1.0, 2.0, 3.0]
    assert ingest_series(headerless, 1, log_returns=True).tolist() == pytest.approx([100 * math.log(2)] * 2)


def test_csv_errors(tmp_path):
    path = write(tmp_path, "a,b\n1,2\n3\n", "short.csv")
    with pytest.raises(ParseError) as err:
        ingest_series(path, "b")
    assert err.value.line == 3
    with pytest.raises(ParseError):
        ingest_series(path, "missing")
    with pytest.raises(ParseError) as err:
        ingest_series(write(tmp_path, "a,b\n1,x\n", "bad.csv"), "b")
    assert err.value.line == 2
