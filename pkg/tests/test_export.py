from __future__ import annotations

import csv
import io
import json
from fractions import Fraction
from pathlib import Path

import pytest
from hypothesis import given, strategies as st

from discrete_wigner import Surd, su2, superposition_wigner, wigner_matrix
from discrete_wigner.export import GridExport, pgm_levels

GOLDEN = Path(__file__).parent / "golden"


def _grid(n=0, two_j=2, backend="exact"):
    return GridExport.from_wigner(wigner_matrix(su2(two_j, backend), n), "su2", two_j)


@pytest.mark.parametrize("n", [0, 1])
def test_pgm_golden_j1(n):
    assert _grid(n).to_pgm() == (GOLDEN / f"su2_2j2_n{n}.pgm").read_text()


def test_pgm_orientation_and_corners():
    levels = _grid(1, two_j=3).to_pgm().split("\n")
    assert levels[:3] == ["P2", "4 4", "255"]
    # top image row is the largest p
    g = _grid(0)
    rows = g.to_pgm().split("\n")[3:6]
    px = [list(map(int, r.split())) for r in rows]
    assert px[0][0] == px[0][2] == px[2][0] == px[2][2]


def test_pgm_orientation_on_asymmetric_grid():
    g = GridExport("t", None, None, "exact", [Fraction(-1), Fraction(1)], [Fraction(0), Fraction(5)],
                   [[Fraction(0), Fraction(1)], [Fraction(2), Fraction(3)]])
    assert g.to_pgm() == "P2\n2 2\n255\n170 255\n0 85\n"


def test_pgm_constant_grid():
    g = GridExport("t", None, None, "float", [0.0], [0.0, 1.0], [[0.5, 0.5]])
    assert g.to_pgm() == "P2\n2 1\n255\n128 128\n"


@given(st.lists(st.fractions(max_denominator=20), min_size=2, max_size=12))
def test_pgm_levels_exact_range(values):
    lv = pgm_levels([values])[0]
    assert all(0 <= v <= 255 for v in lv)
    if min(values) != max(values):
        assert lv[values.index(min(values))] == 0 and lv[values.index(max(values))] == 255


def test_pgm_rounding_is_half_up():
    # 255 * 1/2 = 127.5 -> 128
    assert pgm_levels([[Fraction(0), Fraction(1, 2), Fraction(1)]]) == [[0, 128, 255]]


@pytest.mark.parametrize("two_j", [2, 5, 8])
def test_exact_json_round_trip_is_byte_identical(two_j):
    text = _grid(1, two_j).to_json()
    assert GridExport.from_json(text).to_json() == text
    doc = json.loads(text)
    assert doc["w"][0][0] == str(wigner_matrix(su2(two_j), 1).entries[0, 0])


def test_surd_superposition_round_trip():
    c = Surd.sqrt(Fraction(1, 2))
    W = superposition_wigner(su2(2), [c, c, 0])
    g = GridExport.from_wigner(W, "su2", 2)
    text = g.to_json()
    assert GridExport.from_json(text).to_json() == text
    assert json.loads(text)["w"][1][1] == "-1/4"


def test_float_json_round_trip():
    g = _grid(3, 6, "float")
    again = GridExport.from_json(g.to_json())
    assert again.w == g.w and again.metadata == g.metadata


def test_csv_layout():
    rows = list(csv.reader(io.StringIO(_grid(0, 4).to_csv())))
    assert rows[0] == ["p", "q", "w"]
    assert len(rows) == 1 + 25
    assert rows[1][:2] == ["-2", "-2"] and rows[2][:2] == ["-2", "-1"]


def test_write_and_unknown_format(tmp_path):
    g = _grid()
    path = g.write(tmp_path / "sub" / "w.csv")
    assert path.read_text().startswith("p,q,w\n")
    with pytest.raises(ValueError):
        g.render("png")


def test_shape_mismatch_rejected():
    with pytest.raises(ValueError):
        GridExport("t", None, None, "float", [0.0, 1.0], [0.0], [[1.0]])
