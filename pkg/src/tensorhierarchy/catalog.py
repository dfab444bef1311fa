"""Built-in example triples, stored in the TripleFile layout."""
from __future__ import annotations

import copy


def _zeros(*shape):
    if len(shape) == 1:
        return ["0"] * shape[0]
    return [_zeros(*shape[1:]) for _ in range(shape[0])]


def _lie(dim, brackets):
    """Structure constants from {(i, j): {k: coeff}} with i < j."""
    c = _zeros(dim, dim, dim)
    for (i, j), out in brackets.items():
        for k, x in out.items():
            c[i][j][k] = str(x)
            c[j][i][k] = str(-x)
    return c


def _ad_matrices(dim, c):
    # column j of ad(e_i) is [e_i, e_j]
    return [[[c[i][j][k] for j in range(dim)] for k in range(dim)] for i in range(dim)]


def _identity(n):
    return [["1" if i == j else "0" for j in range(n)] for i in range(n)]


def _triple(name, description, gdim, c, vdim, rho, theta):
    return {"field": "rational", "name": name, "description": description,
            "g": {"dim": gdim, "brackets": c}, "v": {"dim": vdim}, "rho": rho, "theta": theta}


def _abelian():
    return _triple("abelian", "one-dimensional V, one-dimensional abelian g, trivial action, Theta = 0",
                   1, _zeros(1, 1, 1), 1, [[["0"]]], [["0"]])


def _aff1():
    c = _lie(2, {(0, 1): {1: 1}})
    return _triple("crossed_module_aff1", "aff(1) -> aff(1), [a,b] = b, adjoint action, Theta = id",
                   2, c, 2, _ad_matrices(2, c), _identity(2))


def _heisenberg():
    # V = span{e, f}, g = span{t}; t.e = f, Theta(e) = t, so e o e = f
    return _triple("heisenberg_leibniz", "V = span{e,f}, g = span{t}, t.e = f, t.f = 0, Theta(e) = t, Theta(f) = 0",
                   1, _zeros(1, 1, 1), 2, [[["0", "0"], ["1", "0"]]], [["1", "0"]])


def _sl2():
    # basis (H, X, Y): [H,X] = 2X, [H,Y] = -2Y, [X,Y] = H
    c = _lie(3, {(0, 1): {1: 2}, (0, 2): {2: -2}, (1, 2): {0: 1}})
    return _triple("sl2_adjoint_crossed", "sl2 -> sl2 in the basis (H, X, Y), adjoint action, Theta = id",
                   3, c, 3, _ad_matrices(3, c), _identity(3))


def _jordan_chain():
    # V = span{e, f1, f2}, g = span{t}; t.e = f1, t.f1 = f2, Theta(e) = t.
    # e o e = f1, e o f1 = f2; the tower does not stop at degree -2.
    rho_t = [["0", "0", "0"], ["1", "0", "0"], ["0", "1", "0"]]
    return _triple("jordan_chain_leibniz", "V = span{e,f1,f2}, g = span{t}, t.e = f1, t.f1 = f2, t.f2 = 0, "
                   "Theta(e) = t, Theta(f1) = Theta(f2) = 0",
                   1, _zeros(1, 1, 1), 3, [rho_t], [["1", "0", "0"]])


def _split_squares():
    # V = span{e1, e2, f}, g = span{s, t1, t2} with [s, t1] = -t1.
    # t1.e1 = f, t2.e2 = f, s.e1 = e1; Theta(e1) = t1, Theta(e2) = t2.
    # Then e1 o e1 = e2 o e2 = f and s moves e1.e1 - e2.e2 out of Ker{,}.
    c = _lie(3, {(0, 1): {1: -1}})
    rho_s = [["1", "0", "0"], ["0", "0", "0"], ["0", "0", "0"]]
    rho_t1 = [["0", "0", "0"], ["0", "0", "0"], ["1", "0", "0"]]
    rho_t2 = [["0", "0", "0"], ["0", "0", "0"], ["0", "1", "0"]]
    theta = [["0", "0", "0"], ["1", "0", "0"], ["0", "1", "0"]]
    return _triple("split_squares_nonstringent",
                   "V = span{e1,e2,f}, g = span{s,t1,t2}, [s,t1] = -t1; t1.e1 = f, t2.e2 = f, s.e1 = e1; "
                   "Theta(e1) = t1, Theta(e2) = t2. Not stringent.",
                   3, c, 3, [rho_s, rho_t1, rho_t2], theta)


_BUILDERS = {
    "abelian": _abelian,
    "crossed_module_aff1": _aff1,
    "heisenberg_leibniz": _heisenberg,
    "sl2_adjoint_crossed": _sl2,
    "jordan_chain_leibniz": _jordan_chain,
    "split_squares_nonstringent": _split_squares,
}


def names() -> list[str]:
    return list(_BUILDERS)


def get(name: str) -> dict:
    try:
        return copy.deepcopy(_BUILDERS[name]())
    except KeyError:
        raise KeyError(f"unknown catalog triple {name!r}; known: {', '.join(_BUILDERS)}") from None


def zero_triple() -> dict:
    return _triple("zero", "the zero triple", 0, [], 0, [], [])
