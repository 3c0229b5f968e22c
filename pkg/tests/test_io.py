import json

import pytest

from ellmono import io
from ellmono.errors import ParseError
from ellmono.lattice import make_standard
from ellmono.surfaces import build_surface_model


def test_lattice_round_trip(tmp_path):
    l = make_standard("E", 8, -1)
    p = tmp_path / "e8.json"
    io.write_lattice(l, p)
    assert io.read_lattice(p) == l
    assert io.read_lattice(p).labels == l.labels


def test_standard_lattice_shorthand():
    l = io.loads_lattice('{"standard": {"kind": "E", "param": 8, "scale": -1}}')
    assert l == make_standard("E", 8, -1)


def test_json_syntax_error_position():
    with pytest.raises(ParseError) as exc:
        io.loads_lattice('{"gram": [[0, 1],\n  [1, 0]')
    assert exc.value.line == 2 and exc.value.column is not None


def test_asymmetric_gram_points_at_entry():
    text = '{\n "gram": [\n  [0, 1],\n  [2, 0]\n ]\n}'
    with pytest.raises(ParseError) as exc:
        io.loads_lattice(text)
    assert (exc.value.line, exc.value.column) == (4, 4)
    assert "line 4, column 4" in str(exc.value)


@pytest.mark.parametrize("text", [
    '[1, 2]',
    '{"rank": 2}',
    '{"gram": [[0, 1.5], [1.5, 0]]}',
    '{"gram": [[0, 1], [1]]}',
    '{"rank": 3, "gram": [[0, 1], [1, 0]]}',
    '{"gram": [[0, 1], [1, 0]], "labels": ["a"]}',
])
def test_malformed_lattices(text):
    with pytest.raises(ParseError):
        io.loads_lattice(text)


def test_roots_with_relative_lattice(tmp_path):
    l = make_standard("A", 2, -1)
    io.write_lattice(l, tmp_path / "a2.json")
    (tmp_path / "r.json").write_text('{"lattice": "a2.json", "roots": [[1, 0], [1, 1]]}')
    d = io.read_roots(tmp_path / "r.json")
    assert d.lattice == l and [r.coords for r in d] == [(1, 0), (1, 1)]
    data = io.roots_to_data(d)
    assert data["roots"] == [[1, 0], [1, 1]]


def test_roots_inline_and_invalid(tmp_path):
    p = tmp_path / "r.json"
    p.write_text('{"lattice": {"gram": [[-2]]}, "roots": [[1], [-1]]}')
    assert len(io.read_roots(p)) == 2
    p.write_text('{"lattice": {"gram": [[-2]]}, "roots": [[2]]}')
    with pytest.raises(ParseError):
        io.read_roots(p)
    p.write_text('{"lattice": {"gram": [[-2]]}, "roots": [[1, 0]]}')
    with pytest.raises(ParseError):
        io.read_roots(p)


def test_pattern_file(tmp_path):
    p = tmp_path / "p.json"
    p.write_text(json.dumps({"pattern": [[-2, 1], [1, -2]]}))
    assert io.read_pattern(p).size == 2
    p.write_text(json.dumps({"pattern": [[-2, -1], [-1, -2]]}))
    with pytest.raises(ParseError):
        io.read_pattern(p)


def test_vector_and_matrix(tmp_path):
    l = make_standard("U")
    (tmp_path / "v.json").write_text('{"coords": [1, 2]}')
    assert io.read_vector(tmp_path / "v.json", l).coords == (1, 2)
    (tmp_path / "v.json").write_text('{"coords": [1, 2, 3]}')
    with pytest.raises(ParseError):
        io.read_vector(tmp_path / "v.json", l)
    (tmp_path / "m.json").write_text('{"matrix": [[1, 0], [0]]}')
    with pytest.raises(ParseError):
        io.read_matrix(tmp_path / "m.json")


def test_surface_descriptor_and_export(tmp_path):
    p = tmp_path / "s.json"
    p.write_text('{"pg": 1, "multiplicities": [2, 3]}')
    assert io.read_surface(p) == (1, (2, 3))
    data = io.surface_to_data(build_surface_model(1, (2, 3)))
    assert data["k"][0] == 7 and data["sigma"] is None
    assert data["fibres"] == [{"m": 2, "class": [3] + [0] * 21}, {"m": 3, "class": [2] + [0] * 21}]
    assert json.loads(io.dumps(data)) == data


def test_dumps_is_valid_json():
    d = {"a": [[1, 2], [3, 4]], "b": {"c": None, "d": []}, "e": "x"}
    assert json.loads(io.dumps(d)) == d
