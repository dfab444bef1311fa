"""JSON file formats: triples, morphisms and built hierarchies.

All rationals are written as canonical "p/q" (or "p") strings.  Output is
produced with sorted keys and fixed separators so that equal objects give
byte-identical files.
"""
from __future__ import annotations

import json
from typing import Any

from .errors import ParseError
from .exactla import RatMatrix, rat, rat_str
from .triple import GAction, LieAlgebra, LieLeibnizTriple, derive_triple


def dumps(obj: Any) -> str:
    return json.dumps(obj, sort_keys=True, indent=1, ensure_ascii=False) + "\n"


def loads(text: str, source: str = "<input>") -> Any:
    try:
        return json.loads(text)
    except json.JSONDecodeError as e:
        raise ParseError(e.msg, where=f"{source}: line {e.lineno} column {e.colno}") from None


def read_json(path: str) -> Any:
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as e:
        raise ParseError(str(e), where=path) from None
    return loads(text, path)


def write_text(path: str, text: str) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(text)


# -- field readers with location context -------------------------------------

def _get(d, key, where):
    if not isinstance(d, dict):
        raise ParseError("expected an object", where=where)
    if key not in d:
        raise ParseError(f"missing field {key!r}", where=where)
    return d[key]


def _count(x, where):
    if not isinstance(x, int) or isinstance(x, bool) or x < 0:
        raise ParseError(f"expected a non-negative integer, got {x!r}", where=where)
    return x


def _rat(x, where):
    if isinstance(x, (int, str)) and not isinstance(x, bool):
        try:
            return rat(x)
        except ParseError as e:
            raise ParseError(str(e), where=where) from None
    raise ParseError(f"expected a rational string, got {x!r}", where=where)


def _matrix(x, rows, cols, where) -> RatMatrix:
    if not isinstance(x, list) or len(x) != rows:
        raise ParseError(f"expected {rows} rows", where=where)
    out = []
    for i, r in enumerate(x):
        if not isinstance(r, list) or len(r) != cols:
            raise ParseError(f"expected {cols} entries", where=f"{where}[{i}]")
        out.append([_rat(v, f"{where}[{i}][{j}]") for j, v in enumerate(r)])
    return RatMatrix.from_rows(out, cols=cols)


def _tensor3(x, n, m, where):
    out = []
    for i, xi in enumerate(_shape_list(x, n, where)):
        layer = []
        for j, xij in enumerate(_shape_list(xi, n, f"{where}[{i}]")):
            if len(xij) != m:
                raise ParseError(f"expected {m} entries", where=f"{where}[{i}][{j}]")
            layer.append([_rat(v, f"{where}[{i}][{j}][{k}]") for k, v in enumerate(xij)])
        out.append(layer)
    return out


def _shape_list(x, n, where):
    if not isinstance(x, list) or len(x) != n or not all(isinstance(e, list) for e in x):
        raise ParseError(f"expected {n} lists", where=where)
    return x


# -- triples --------------------------------------------------------------------

def parse_triple_dict(d: dict, source: str = "<triple>"):
    """Parse a TripleFile object into (g, rho, theta, leibniz, name)."""
    tag = _get(d, "field", source)
    if tag != "rational":
        raise ParseError(f"unsupported field tag {tag!r}", where=f"{source}.field")
    gd = _get(d, "g", source)
    gdim = _count(_get(gd, "dim", f"{source}.g"), f"{source}.g.dim")
    c = _tensor3(_get(gd, "brackets", f"{source}.g"), gdim, gdim, f"{source}.g.brackets")
    vdim = _count(_get(_get(d, "v", source), "dim", f"{source}.v"), f"{source}.v.dim")
    rho_raw = _get(d, "rho", source)
    if not isinstance(rho_raw, list) or len(rho_raw) != gdim:
        raise ParseError(f"expected {gdim} action matrices", where=f"{source}.rho")
    rho = [_matrix(m, vdim, vdim, f"{source}.rho[{a}]") for a, m in enumerate(rho_raw)]
    theta = _matrix(_get(d, "theta", source), gdim, vdim, f"{source}.theta")
    leib = None
    if "leibniz" in d:
        leib = _tensor3(d["leibniz"], vdim, vdim, f"{source}.leibniz")
    name = d.get("name", "")
    if not isinstance(name, str):
        raise ParseError("name must be a string", where=f"{source}.name")
    return LieAlgebra(gdim, c), GAction(vdim, tuple(rho)), theta, leib, name


def triple_from_dict(d: dict, source: str = "<triple>") -> LieLeibnizTriple:
    g, rho, theta, leib, name = parse_triple_dict(d, source)
    return derive_triple(g, rho, theta, leibniz=leib, name=name)


def load_triple(path: str) -> LieLeibnizTriple:
    return triple_from_dict(read_json(path), path)


def triple_to_dict(t: LieLeibnizTriple, description: str = "") -> dict:
    n, m = t.g.dim, t.dimV
    d = {
        "field": "rational",
        "g": {"dim": n, "brackets": [[[rat_str(x) for x in t.g.c[i][j]] for j in range(n)] for i in range(n)]},
        "v": {"dim": m},
        "rho": [[[rat_str(x) for x in r] for r in mat.to_lists()] for mat in t.rho.mats],
        "theta": [[rat_str(x) for x in r] for r in t.theta.to_lists()],
    }
    if t.name:
        d["name"] = t.name
    if description:
        d["description"] = description
    return d


# -- morphisms ------------------------------------------------------------------

def parse_morphism_dict(d: dict, gdim: int, vdim: int, gdim2: int, vdim2: int, source="<morphism>"):
    phi = _matrix(_get(d, "phi", source), gdim2, gdim, f"{source}.phi")
    chi = _matrix(_get(d, "chi", source), vdim2, vdim, f"{source}.chi")
    return phi, chi


def matrix_to_json(m: RatMatrix) -> list:
    return [[rat_str(x) for x in r] for r in m.to_lists()]


def matrix_from_json(x, rows, cols, where="<matrix>") -> RatMatrix:
    return _matrix(x, rows, cols, where)
