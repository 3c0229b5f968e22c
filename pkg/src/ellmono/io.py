"""JSON file formats for lattices, vectors, isometries, root sets and patterns.

Every reader raises :class:`ParseError` carrying the line and column of the
offending JSON value where it can be located.
"""
from __future__ import annotations

import json
import re
from pathlib import Path
from typing import Any

from .errors import LatticeError, ParseError
from .lattice import Lattice, LatticeVector, make_standard
from .vanishing import DiagramPattern, VanishingSet


def _position(text: str, offset: int) -> tuple[int, int]:
    line = text.count("\n", 0, offset) + 1
    col = offset - (text.rfind("\n", 0, offset) + 1) + 1
    return line, col


def _locate(text: str, key: str | None) -> tuple[int | None, int | None]:
    """Line and column of the value stored under ``key`` (first occurrence)."""
    if key is None:
        return None, None
    m = re.search(r'"%s"\s*:\s*' % re.escape(key), text)
    if not m:
        return None, None
    return _position(text, m.end())


def _locate_entry(text: str, key: str, i: int, j: int) -> tuple[int | None, int | None]:
    """Line and column of entry ``[i][j]`` of the matrix stored under ``key``."""
    m = re.search(r'"%s"\s*:\s*\[' % re.escape(key), text)
    if not m:
        return None, None
    depth, row, col = 1, 0, 0
    start = True
    for pos in range(m.end(), len(text)):
        ch = text[pos]
        if ch.isspace():
            continue
        if ch == "[":
            depth += 1
            start = True
            continue
        if depth == 2 and start and row == i and col == j:
            return _position(text, pos)
        start = False
        if ch == "]":
            depth -= 1
            if depth == 0:
                break
        elif ch == ",":
            if depth == 1:
                row, col = row + 1, 0
            elif depth == 2:
                col += 1
                start = True
    return None, None


class _Doc:
    """Parsed JSON together with its source text for error positions."""

    def __init__(self, text: str, source: str = "<input>"):
        self.text = text
        self.source = source
        try:
            self.data = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ParseError(f"{source}: {exc.msg}", exc.lineno, exc.colno) from None
        if not isinstance(self.data, dict):
            raise ParseError(f"{source}: top-level value must be an object", 1, 1)

    def fail(self, message: str, key: str | None = None):
        line, col = _locate(self.text, key)
        raise ParseError(f"{self.source}: {message}", line, col)

    def get(self, key: str, required: bool = True):
        if key not in self.data:
            if required:
                self.fail(f"missing key {key!r}")
            return None
        return self.data[key]

    def int_matrix(self, key: str, value=None) -> list[list[int]]:
        m = self.get(key) if value is None else value
        if not isinstance(m, list) or not all(isinstance(r, list) for r in m):
            self.fail(f"{key!r} must be a list of rows", key)
        for row in m:
            if not all(isinstance(x, int) and not isinstance(x, bool) for x in row):
                self.fail(f"{key!r} must contain integers only", key)
        return m

    def int_vector(self, value, key: str) -> list[int]:
        if not isinstance(value, list) or not all(
                isinstance(x, int) and not isinstance(x, bool) for x in value):
            self.fail(f"{key!r} entries must be lists of integers", key)
        return value


def _read(path) -> _Doc:
    p = Path(path)
    return _Doc(p.read_text(), str(p))


# ---------------------------------------------------------------------------
# lattices

def lattice_from_data(doc: _Doc, data: dict | None = None) -> Lattice:
    data = doc.data if data is None else data
    if "standard" in data:
        std = data["standard"]
        try:
            return make_standard(std["kind"], std.get("param"), std.get("scale", 1))
        except (KeyError, TypeError, LatticeError) as exc:
            doc.fail(f"bad standard lattice: {exc}", "standard")
    if "gram" not in data:
        doc.fail("missing key 'gram'")
    gram = doc.int_matrix("gram", data["gram"])
    if "rank" in data and data["rank"] != len(gram):
        doc.fail(f"rank {data['rank']} does not match the Gram matrix size {len(gram)}", "rank")
    n = len(gram)
    for i in range(n):
        if len(gram[i]) != n:
            line, col = _locate_entry(doc.text, "gram", i, 0)
            raise ParseError(f"{doc.source}: Gram row {i} has length {len(gram[i])}, expected {n}",
                             line, col)
    for i in range(n):
        for j in range(i + 1, n):
            if gram[i][j] != gram[j][i]:
                line, col = _locate_entry(doc.text, "gram", j, i)
                raise ParseError(f"{doc.source}: Gram matrix is not symmetric: entry ({i},{j}) is "
                                 f"{gram[i][j]} but ({j},{i}) is {gram[j][i]}", line, col)
    labels = data.get("labels")
    try:
        return Lattice(tuple(map(tuple, gram)), tuple(labels) if labels is not None else None)
    except LatticeError as exc:
        doc.fail(str(exc), "gram" if labels is None or "label" not in str(exc) else "labels")


def loads_lattice(text: str, source: str = "<input>") -> Lattice:
    return lattice_from_data(_Doc(text, source))


def read_lattice(path) -> Lattice:
    return lattice_from_data(_read(path))


def lattice_to_data(l: Lattice) -> dict:
    out: dict[str, Any] = {"rank": l.rank, "gram": [list(r) for r in l.gram]}
    if l.labels is not None:
        out["labels"] = list(l.labels)
    return out


def _flat(x) -> bool:
    return isinstance(x, list) and not any(isinstance(y, (list, dict)) for y in x)


def _format(x, indent: int) -> str:
    pad = " " * indent
    if isinstance(x, dict) and x:
        items = [f'{pad} {json.dumps(k)}: {_format(v, indent + 1).lstrip()}' for k, v in x.items()]
        return pad + "{\n" + ",\n".join(items) + "\n" + pad + "}"
    if isinstance(x, list) and x and not _flat(x):
        items = [_format(v, indent + 1) for v in x]
        return pad + "[\n" + ",\n".join(items) + "\n" + pad + "]"
    return pad + json.dumps(x, separators=(", ", ": "))


def dumps(data) -> str:
    """Stable JSON with one vector or matrix row per line."""
    return _format(data, 0) + "\n"


def write_lattice(l: Lattice, path) -> None:
    Path(path).write_text(dumps(lattice_to_data(l)))


# ---------------------------------------------------------------------------
# vectors and isometries

def read_vector(path, lattice: Lattice) -> LatticeVector:
    doc = _read(path)
    coords = doc.int_vector(doc.get("coords"), "coords")
    if len(coords) != lattice.rank:
        doc.fail(f"vector has {len(coords)} coordinates, lattice rank is {lattice.rank}", "coords")
    return lattice.vector(coords)


def read_matrix(path) -> list[list[int]]:
    """The raw ``matrix`` entry of an isometry file; validity is checked by the caller."""
    doc = _read(path)
    m = doc.int_matrix("matrix")
    if any(len(r) != len(m) for r in m):
        doc.fail("matrix must be square", "matrix")
    return m


def matrix_to_data(m) -> dict:
    return {"matrix": [list(r) for r in m]}


# ---------------------------------------------------------------------------
# root sets and patterns

def read_roots(path, lattice: Lattice | None = None) -> VanishingSet:
    """Root-set file; ``lattice`` may be inline, a relative path, or given by the caller."""
    doc = _read(path)
    ref = doc.get("lattice", required=lattice is None)
    if lattice is None:
        if isinstance(ref, str):
            lattice = read_lattice(Path(path).parent / ref)
        elif isinstance(ref, dict):
            lattice = lattice_from_data(doc, ref)
        else:
            doc.fail("'lattice' must be a file name or an inline lattice", "lattice")
    rows = doc.get("roots")
    if not isinstance(rows, list):
        doc.fail("'roots' must be a list", "roots")
    for r in rows:
        doc.int_vector(r, "roots")
        if len(r) != lattice.rank:
            doc.fail(f"root {r} has the wrong length for rank {lattice.rank}", "roots")
    try:
        return VanishingSet.from_coords(lattice, [tuple(r) for r in rows])
    except LatticeError as exc:
        doc.fail(str(exc), "roots")


def roots_to_data(d: VanishingSet, lattice_ref=None) -> dict:
    ref = lattice_ref if lattice_ref is not None else lattice_to_data(d.lattice)
    return {"lattice": ref, "roots": [list(r.coords) for r in d.roots]}


def read_pattern(path) -> DiagramPattern:
    doc = _read(path)
    m = doc.int_matrix("pattern")
    try:
        names = doc.data.get("vertices")
        return DiagramPattern(tuple(map(tuple, m)), tuple(names) if names else None)
    except LatticeError as exc:
        doc.fail(str(exc), "pattern")


def read_surface(path) -> tuple[int, tuple[int, ...]]:
    doc = _read(path)
    pg = doc.get("pg")
    if not isinstance(pg, int) or isinstance(pg, bool):
        doc.fail("'pg' must be an integer", "pg")
    mults = doc.data.get("multiplicities", [])
    doc.int_vector(mults, "multiplicities")
    return pg, tuple(mults)


def surface_to_data(s) -> dict:
    return {
        "pg": s.pg,
        "multiplicities": list(s.multiplicities),
        "lattice": lattice_to_data(s.lattice),
        "f": list(s.f.coords),
        "e": list(s.e.coords),
        "k": list(s.k.coords),
        "sigma": list(s.sigma.coords) if s.sigma is not None else None,
        "fibres": [{"m": m, "class": list(c.coords)} for m, c in s.fibres],
    }
