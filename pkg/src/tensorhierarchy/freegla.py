"""The free graded Lie algebra on V[1], realized inside the tensor algebra of V.

An element of degree -i lives in V^(x)i.  Words are encoded mixed-radix:
the word (w_1, ..., w_i) has index sum w_r * n^(i-r).  The bracket is the
graded commutator, which is a Lie superalgebra bracket on the tensor algebra
when V sits in odd degree; the free algebra F_{-i} is the span of all
brackets of generators, built level by level.

This module also holds the generic machinery for a negatively graded Lie
algebra given in coordinates (:class:`GradedLie`): the graded-symmetric
wedge bases, the unshuffle extension of bilinear maps, and the
Chevalley-Eilenberg maps d2 and d3.  Level ``j`` always means degree -j.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Sequence

from .errors import ActionLeak, DimensionMismatch
from .exactla import ZERO, RatMatrix, Subspace, _axpy, rat
from .triple import GAction


def koszul(j: int, k: int) -> int:
    """(-1)^{|x||y|} for elements of levels j and k."""
    return -1 if (j * k) % 2 else 1


class TensorElem:
    """Element of V^(x)i, stored sparsely; ``coords`` gives the dense vector."""

    __slots__ = ("word_degree", "dim_v", "terms")

    def __init__(self, word_degree: int, dim_v: int, terms: dict | None = None):
        self.word_degree = word_degree
        self.dim_v = dim_v
        self.terms = {k: v for k, v in (terms or {}).items() if v}

    @classmethod
    def generator(cls, dim_v: int, i: int) -> "TensorElem":
        return cls(1, dim_v, {i: rat(1)})

    @classmethod
    def from_coords(cls, word_degree: int, dim_v: int, coords: Sequence) -> "TensorElem":
        if len(coords) != dim_v ** word_degree:
            raise DimensionMismatch("coordinate vector has the wrong length")
        return cls(word_degree, dim_v, {i: rat(x) for i, x in enumerate(coords) if x})

    @property
    def coords(self) -> tuple:
        out = [ZERO] * (self.dim_v ** self.word_degree)
        for k, v in self.terms.items():
            out[k] = v
        return tuple(out)

    def __add__(self, other):
        t = dict(self.terms)
        _axpy(t, rat(1), other.terms)
        return TensorElem(self.word_degree, self.dim_v, t)

    def scale(self, s):
        s = rat(s)
        return TensorElem(self.word_degree, self.dim_v, {k: s * v for k, v in self.terms.items()})

    def __eq__(self, other):
        return (isinstance(other, TensorElem) and self.word_degree == other.word_degree
                and self.dim_v == other.dim_v and self.terms == other.terms)

    def is_zero(self):
        return not self.terms

    def word(self, index: int) -> tuple:
        digits = []
        for _ in range(self.word_degree):
            index, r = divmod(index, self.dim_v)
            digits.append(r)
        return tuple(reversed(digits))


def tensor_product(u: TensorElem, v: TensorElem) -> TensorElem:
    shift = u.dim_v ** v.word_degree
    out: dict = {}
    for a, x in u.terms.items():
        base = a * shift
        for b, y in v.terms.items():
            k = base + b
            out[k] = out.get(k, ZERO) + x * y
    return TensorElem(u.word_degree + v.word_degree, u.dim_v, out)


def graded_bracket(u: TensorElem, v: TensorElem) -> TensorElem:
    """[u, v] = u(x)v - (-1)^{jk} v(x)u for u of degree -j and v of degree -k."""
    if u.dim_v != v.dim_v:
        raise DimensionMismatch("tensors over different spaces")
    j, k = u.word_degree, v.word_degree
    n = u.dim_v
    s = -koszul(j, k)
    su, sv = n ** k, n ** j
    out: dict = {}
    for a, x in u.terms.items():
        for b, y in v.terms.items():
            xy = x * y
            p = a * su + b
            out[p] = out.get(p, ZERO) + xy
            p = b * sv + a
            out[p] = out.get(p, ZERO) + s * xy
    return TensorElem(j + k, n, out)


def tensor_action(mat: RatMatrix, u: TensorElem) -> TensorElem:
    """Diagonal (derivation) action of one endomorphism of V on V^(x)i."""
    n, i = u.dim_v, u.word_degree
    cols = mat.sparse_columns()
    powers = [n ** (i - 1 - r) for r in range(i)]
    out: dict = {}
    for w, x in u.terms.items():
        rest = w
        for p in powers:
            d, rest = divmod(rest, p)
            base = w - d * p
            for k, y in cols[d].items():
                idx = base + k * p
                out[idx] = out.get(idx, ZERO) + x * y
    return TensorElem(i, n, out)


@dataclass
class FreeLevel:
    level: int
    basis: Subspace
    g_action: GAction
    elems: list  # basis rows as TensorElem

    @property
    def degree(self) -> int:
        return -self.level

    @property
    def dim(self) -> int:
        return self.basis.dim

    def coords(self, t: TensorElem, check: bool = True) -> dict:
        return self.basis.coords_sparse(t.terms, check)

    def tensor(self, c: dict) -> TensorElem:
        out: dict = {}
        for r, x in c.items():
            _axpy(out, x, self.elems[r].terms)
        return TensorElem(self.level, self.elems[0].dim_v if self.elems else 0, out)


def _level_action(elems, basis, rho_mats, level) -> GAction:
    mats = []
    for a, m in enumerate(rho_mats):
        cols = []
        for e in elems:
            img = tensor_action(m, e)
            if not basis.contains(img.terms):
                raise ActionLeak(f"g basis element {a} moves level {level} out of the free span")
            cols.append(basis.coords_sparse(img.terms, check=False))
        mats.append(RatMatrix.from_sparse_columns(cols, len(elems)))
    return GAction(len(elems), tuple(mats))


def build_free_level(i: int, lower: Sequence[FreeLevel], n: int, rho_mats: Sequence[RatMatrix] = ()) -> FreeLevel:
    """F_{-i} as the span of [F_{-j}, F_{-(i-j)}] for 1 <= j <= i/2."""
    if i == 1:
        basis = Subspace.full(n)
    else:
        if len(lower) < i - 1:
            raise DimensionMismatch(f"level {i} needs levels 1..{i - 1}")
        vecs = []
        for j in range(1, i // 2 + 1):
            for x in lower[j - 1].elems:
                for y in lower[i - j - 1].elems:
                    b = graded_bracket(x, y)
                    if b.terms:
                        vecs.append(b.terms)
        basis = Subspace.from_vectors(n ** i, vecs)
    elems = [TensorElem(i, n, r) for r in basis.sparse_basis()]
    return FreeLevel(i, basis, _level_action(elems, basis, rho_mats, i), elems)


class FreeAlgebra:
    """Memoized tower F_{-1}, F_{-2}, ... for a fixed V (and optional g-action)."""

    def __init__(self, n: int, rho_mats: Sequence[RatMatrix] = ()):
        self.n = n
        self.rho_mats = tuple(rho_mats)
        self.levels: list[FreeLevel] = []
        self._lie: GradedLie | None = None

    def level(self, i: int) -> FreeLevel:
        while len(self.levels) < i:
            k = len(self.levels) + 1
            self.levels.append(build_free_level(k, self.levels, self.n, self.rho_mats))
        return self.levels[i - 1]

    def dims(self, N: int) -> dict[int, int]:
        return {i: self.level(i).dim for i in range(1, N + 1)}

    def graded_lie(self, N: int) -> "GradedLie":
        """Structure constants of F_{-1..-N} in the level bases."""
        if self._lie is not None and self._lie.max_level >= N:
            return self._lie
        for i in range(1, N + 1):
            self.level(i)
        table = {}
        for j in range(1, N + 1):
            for k in range(j, N + 1 - j):
                target = self.level(j + k)
                rows = []
                for x in self.level(j).elems:
                    rows.append([target.coords(graded_bracket(x, y)) for y in self.level(k).elems])
                table[(j, k)] = rows
        self._lie = GradedLie(self.dims(N), table)
        return self._lie


# ---------------------------------------------------------------------------
# negatively graded Lie algebras in coordinates

class GradedLie:
    """Bracket table of a graded Lie algebra concentrated in levels 1..N.

    ``table[(j, k)][a][b]`` is the sparse vector (level j+k) of the bracket of
    basis element a of level j with basis element b of level k.  Only j <= k
    needs to be supplied; the rest follows from graded antisymmetry.
    """

    def __init__(self, dims: dict[int, int], table: dict):
        self.dims = dict(dims)
        self.max_level = max(self.dims, default=0)
        self.table = dict(table)
        for (j, k), rows in list(self.table.items()):
            if j < k and (k, j) not in self.table:
                s = -koszul(j, k)
                self.table[(k, j)] = [[{c: s * x for c, x in rows[a][b].items()} for a in range(len(rows))]
                                      for b in range(self.dims.get(k, 0))]

    def dim(self, j: int) -> int:
        return self.dims.get(j, 0)

    def bracket(self, j: int, a: int, k: int, b: int) -> dict:
        if j + k > self.max_level:
            raise DimensionMismatch(f"bracket lands in level {j + k} beyond {self.max_level}")
        rows = self.table.get((j, k))
        if rows is None:
            return {}
        return rows[a][b]

    def bracket_vec(self, j: int, u: dict, k: int, v: dict) -> dict:
        out: dict = {}
        for a, x in u.items():
            for b, y in v.items():
                _axpy(out, x * y, self.bracket(j, a, k, b))
        return out


Factor = tuple  # (level, index)


def canonical_wedge(factors: Sequence[Factor]):
    """Sort a wedge monomial into canonical order.

    Returns (sign, sorted factors), or None when the monomial vanishes
    (a repeated factor of even degree).  Swapping neighbours u, v costs
    -(-1)^{|u||v|}.
    """
    f = list(factors)
    sign = 1
    for end in range(len(f) - 1, 0, -1):
        for p in range(end):
            if f[p] > f[p + 1]:
                sign *= -koszul(f[p][0], f[p + 1][0])
                f[p], f[p + 1] = f[p + 1], f[p]
    for p in range(len(f) - 1):
        if f[p] == f[p + 1] and f[p][0] % 2 == 0:
            return None
    return sign, tuple(f)


class WedgeBasis:
    """Basis of Lambda^2 or Lambda^3 of a graded space, at one total level.

    Elements are canonical tuples of (level, index) factors in increasing
    order; repeated factors appear only for odd levels.  ``components`` lists
    (levels, start, count) blocks in order.
    """

    def __init__(self, arity: int, total: int, elements: list, components: list):
        self.arity = arity
        self.total = total
        self.elements = elements
        self.index = {e: s for s, e in enumerate(elements)}
        self.components = components

    @property
    def dim(self) -> int:
        return len(self.elements)

    @property
    def total_degree(self) -> int:
        return -self.total

    def coords_of(self, factors: Sequence[Factor]):
        """(index, sign) of a wedge monomial, or None if it vanishes."""
        c = canonical_wedge(factors)
        if c is None:
            return None
        return self.index[c[1]], c[0]


def _blocks(arity: int, total: int, dims: dict[int, int]):
    # nondecreasing level tuples summing to total
    def rec(prefix, remaining, lo, left):
        if left == 0:
            if remaining == 0:
                yield tuple(prefix)
            return
        for j in range(lo, remaining + 1):
            if dims.get(j, 0) and (left == 1 or j * left <= remaining):
                yield from rec(prefix + [j], remaining - j, j, left - 1)
    yield from rec([], total, 1, arity)


def _block_elements(levels, dims):
    out = [[]]
    for p, j in enumerate(levels):
        nxt = []
        for partial in out:
            lo = 0
            if p > 0 and levels[p - 1] == j:
                prev = partial[-1][1]
                lo = prev if j % 2 else prev + 1
            for a in range(lo, dims[j]):
                nxt.append(partial + [(j, a)])
        out = nxt
    return [tuple(e) for e in out]


def _wedge(arity: int, dims: dict[int, int], total: int) -> WedgeBasis:
    elements, components = [], []
    for levels in _blocks(arity, total, dims):
        els = _block_elements(levels, dims)
        components.append((levels, len(elements), len(els)))
        elements.extend(els)
    return WedgeBasis(arity, total, elements, components)


def wedge2(dims: dict[int, int], total: int) -> WedgeBasis:
    return _wedge(2, dims, total)


def wedge3(dims: dict[int, int], total: int) -> WedgeBasis:
    return _wedge(3, dims, total)


Bilinear = Callable[[Factor, Factor], dict]  # -> {(level, index): coeff}


def unshuffle_extend(b: Bilinear, src: WedgeBasis, dst: WedgeBasis) -> RatMatrix:
    """Matrix of x^y^z -> b(x,y)^z - (-1)^{|y||z|} b(x,z)^y + (-1)^{|x|(|y|+|z|)} b(y,z)^x."""
    cols = []
    for (x, y, z) in src.elements:
        col: dict = {}
        terms = ((1, x, y, z),
                 (-koszul(y[0], z[0]), x, z, y),
                 (koszul(x[0], y[0] + z[0]), y, z, x))
        for s, u, v, w in terms:
            for f, coef in b(u, v).items():
                hit = dst.coords_of((f, w))
                if hit is None:
                    continue
                idx, sign = hit
                val = col.get(idx, ZERO) + s * sign * coef
                if val:
                    col[idx] = val
                else:
                    col.pop(idx, None)
        cols.append(col)
    return RatMatrix.from_sparse_columns(cols, dst.dim)


def _graded_bracket_factor(L: GradedLie) -> Bilinear:
    def b(u, v):
        lvl = u[0] + v[0]
        return {(lvl, c): x for c, x in L.bracket(u[0], u[1], v[0], v[1]).items()}
    return b


def bracket_matrix(L: GradedLie, w2: WedgeBasis) -> RatMatrix:
    """x^y -> [x, y] from Lambda^2 at one level into that level."""
    cols = [dict(L.bracket(x[0], x[1], y[0], y[1])) for (x, y) in w2.elements]
    return RatMatrix.from_sparse_columns(cols, L.dim(w2.total))


def ce_d2(L: GradedLie, total: int) -> RatMatrix:
    """d2(x^y) = -[x, y] on Lambda^2 at the given level."""
    return -bracket_matrix(L, wedge2(L.dims, total))


def bracket_extension(L: GradedLie, total: int) -> RatMatrix:
    """The unshuffle extension of the bracket, Lambda^3 -> Lambda^2 at one level."""
    return unshuffle_extend(_graded_bracket_factor(L), wedge3(L.dims, total), wedge2(L.dims, total))


def ce_d3(L: GradedLie, total: int) -> RatMatrix:
    """d3 = unshuffle extension of d2 = minus the extension of the bracket."""
    return -bracket_extension(L, total)


def jacobi_failures(L: GradedLie, limit: int | None = None) -> tuple[list, int]:
    """Graded Jacobi [x,[y,z]] = [[x,y],z] + (-1)^{|x||y|}[y,[x,z]] on basis triples within range."""
    N = L.max_level
    bad, count = [], 0
    for j in range(1, N + 1):
        for k in range(1, N + 1 - j):
            for l in range(1, N + 1 - j - k):
                for a in range(L.dim(j)):
                    for b in range(L.dim(k)):
                        for c in range(L.dim(l)):
                            count += 1
                            yz = L.bracket(k, b, l, c)
                            lhs = L.bracket_vec(j, {a: 1}, k + l, yz)
                            xy = L.bracket(j, a, k, b)
                            rhs = L.bracket_vec(j + k, xy, l, {c: 1})
                            xz = L.bracket(j, a, l, c)
                            _axpy(rhs, rat(koszul(j, k)), L.bracket_vec(k, {b: 1}, j + l, xz))
                            _axpy(lhs, rat(-1), rhs)
                            if lhs:
                                bad.append(((j, a), (k, b), (l, c)))
                                if limit and len(bad) >= limit:
                                    return bad, count
    return bad, count
