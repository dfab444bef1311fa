"""Exact linear algebra over the rationals.

Rationals are ``gmpy2.mpq`` values (always in lowest terms with positive
denominator).  Matrices are dense and immutable.  Subspaces are stored by the
reduced row-echelon form of a basis, so equal subspaces compare equal.

Elimination internally works on ``{column: value}`` dicts so that rows full
of zeros cost nothing; every public result is dense.
"""
from __future__ import annotations

import re
from fractions import Fraction
from typing import Iterable, Sequence

from gmpy2 import mpq

from .errors import DimensionMismatch, FactorizationFailure, ParseError

Rat = type(mpq())
ZERO = mpq(0)
ONE = mpq(1)

_RAT_RE = re.compile(r"^-?\d+(/\d+)?$")


def rat(x) -> Rat:
    """Coerce ints, Fractions, mpq values and "p/q" strings to a rational."""
    if isinstance(x, Rat):
        return x
    if isinstance(x, bool):
        raise ParseError(f"not a rational: {x!r}")
    if isinstance(x, int):
        return mpq(x)
    if isinstance(x, Fraction):
        return mpq(x.numerator, x.denominator)
    if isinstance(x, str):
        s = x.strip()
        if not _RAT_RE.match(s):
            raise ParseError(f"malformed rational {x!r}")
        try:
            return mpq(s)
        except ZeroDivisionError:
            raise ParseError(f"zero denominator in {x!r}") from None
    raise ParseError(f"not a rational: {x!r}")


def rat_str(q) -> str:
    # mpq already prints "p/q" or "p" in lowest terms with the sign on p
    return str(rat(q))


# ---------------------------------------------------------------------------
# sparse helpers used by the elimination kernels

def _sparse(vec: Sequence) -> dict:
    return {i: rat(v) for i, v in enumerate(vec) if v}


def _dense(d: dict, n: int) -> tuple:
    out = [ZERO] * n
    for i, v in d.items():
        out[i] = v
    return tuple(out)


def _axpy(target: dict, coeff, src: dict) -> None:
    """target += coeff * src, dropping cancelled entries."""
    for k, v in src.items():
        nv = target.get(k, ZERO) + coeff * v
        if nv:
            target[k] = nv
        else:
            target.pop(k, None)


class Echelon:
    """Incrementally maintained reduced echelon basis of sparse rows.

    Every stored row has a 1 in its pivot column and zeros in every other
    pivot column, so reducing a vector takes one pass over its pivots.
    """

    def __init__(self, ncols: int):
        self.ncols = ncols
        self.rows: dict[int, dict] = {}

    def __len__(self):
        return len(self.rows)

    def reduce(self, v: dict) -> dict:
        v = dict(v)
        for p in [p for p in v if p in self.rows]:
            c = v.get(p)
            if c:
                _axpy(v, -c, self.rows[p])
        return v

    def add(self, v: dict) -> bool:
        """Insert v; return True when it enlarged the span."""
        r = self.reduce(v)
        if not r:
            return False
        p = min(r)
        inv = 1 / r[p]
        r = {k: x * inv for k, x in r.items()}
        for row in self.rows.values():
            c = row.get(p)
            if c:
                _axpy(row, -c, r)
        self.rows[p] = r
        return True

    def pivots(self) -> list[int]:
        return sorted(self.rows)

    def sorted_rows(self) -> list[dict]:
        return [self.rows[p] for p in sorted(self.rows)]


# ---------------------------------------------------------------------------

class RatMatrix:
    """Dense immutable matrix of rationals, stored row-major."""

    __slots__ = ("rows", "cols", "_data", "_hash")

    def __init__(self, rows: int, cols: int, entries: Iterable | None = None):
        self.rows, self.cols = rows, cols
        if entries is None:
            data = tuple(tuple(ZERO for _ in range(cols)) for _ in range(rows))
        else:
            flat = [rat(x) for x in entries]
            if len(flat) != rows * cols:
                raise DimensionMismatch(f"{len(flat)} entries for a {rows}x{cols} matrix")
            data = tuple(tuple(flat[i * cols:(i + 1) * cols]) for i in range(rows))
        self._data = data
        self._hash = None

    @classmethod
    def _wrap(cls, rows, cols, data):
        m = cls.__new__(cls)
        m.rows, m.cols, m._data, m._hash = rows, cols, data, None
        return m

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence], cols: int | None = None) -> "RatMatrix":
        rows = [tuple(rat(x) for x in r) for r in rows]
        if cols is None:
            if not rows:
                raise DimensionMismatch("column count needed for an empty row list")
            cols = len(rows[0])
        for r in rows:
            if len(r) != cols:
                raise DimensionMismatch("ragged rows")
        return cls._wrap(len(rows), cols, tuple(rows))

    @classmethod
    def from_columns(cls, columns: Sequence[Sequence], rows: int) -> "RatMatrix":
        cols = [tuple(rat(x) for x in c) for c in columns]
        for c in cols:
            if len(c) != rows:
                raise DimensionMismatch("ragged columns")
        data = tuple(tuple(c[i] for c in cols) for i in range(rows))
        return cls._wrap(rows, len(cols), data)

    @classmethod
    def from_sparse_columns(cls, columns: Sequence[dict], rows: int) -> "RatMatrix":
        data = [[ZERO] * len(columns) for _ in range(rows)]
        for j, col in enumerate(columns):
            for i, v in col.items():
                data[i][j] = v
        return cls._wrap(rows, len(columns), tuple(tuple(r) for r in data))

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "RatMatrix":
        return cls(rows, cols)

    @classmethod
    def identity(cls, n: int) -> "RatMatrix":
        return cls._wrap(n, n, tuple(tuple(ONE if i == j else ZERO for j in range(n)) for i in range(n)))

    # -- access -----------------------------------------------------------
    @property
    def entries(self) -> tuple:
        return tuple(x for r in self._data for x in r)

    @property
    def shape(self):
        return (self.rows, self.cols)

    def row(self, i) -> tuple:
        return self._data[i]

    def column(self, j) -> tuple:
        return tuple(r[j] for r in self._data)

    def to_lists(self) -> list[list]:
        return [list(r) for r in self._data]

    def __getitem__(self, ij):
        i, j = ij
        return self._data[i][j]

    def sparse_rows(self) -> list[dict]:
        return [{j: x for j, x in enumerate(r) if x} for r in self._data]

    def sparse_columns(self) -> list[dict]:
        cols = [dict() for _ in range(self.cols)]
        for i, r in enumerate(self._data):
            for j, x in enumerate(r):
                if x:
                    cols[j][i] = x
        return cols

    # -- algebra ----------------------------------------------------------
    @property
    def T(self) -> "RatMatrix":
        return RatMatrix._wrap(self.cols, self.rows, tuple(zip(*self._data)) if self.rows else
                               tuple(() for _ in range(self.cols)))

    def __matmul__(self, other):
        if isinstance(other, RatMatrix):
            if self.cols != other.rows:
                raise DimensionMismatch(f"{self.shape} @ {other.shape}")
            orows = other.sparse_rows()
            out = []
            for r in self._data:
                acc = [ZERO] * other.cols
                for k, a in enumerate(r):
                    if a:
                        for j, b in orows[k].items():
                            acc[j] += a * b
                out.append(tuple(acc))
            return RatMatrix._wrap(self.rows, other.cols, tuple(out))
        return self.apply(other)

    def apply(self, vec: Sequence) -> tuple:
        if len(vec) != self.cols:
            raise DimensionMismatch(f"matrix with {self.cols} columns applied to length {len(vec)}")
        nz = [(k, rat(v)) for k, v in enumerate(vec) if v]
        return tuple(sum((r[k] * v for k, v in nz), ZERO) for r in self._data)

    def apply_sparse(self, vec: dict) -> dict:
        out = {}
        for i, r in enumerate(self._data):
            s = ZERO
            for k, v in vec.items():
                a = r[k]
                if a:
                    s += a * v
            if s:
                out[i] = s
        return out

    def _zip(self, other, op):
        if self.shape != other.shape:
            raise DimensionMismatch(f"{self.shape} vs {other.shape}")
        return RatMatrix._wrap(self.rows, self.cols, tuple(
            tuple(op(a, b) for a, b in zip(r, s)) for r, s in zip(self._data, other._data)))

    def __add__(self, other):
        return self._zip(other, lambda a, b: a + b)

    def __sub__(self, other):
        return self._zip(other, lambda a, b: a - b)

    def __neg__(self):
        return self.scale(-1)

    def scale(self, s) -> "RatMatrix":
        s = rat(s)
        return RatMatrix._wrap(self.rows, self.cols, tuple(tuple(s * x for x in r) for r in self._data))

    def is_zero(self) -> bool:
        return not any(x for r in self._data for x in r)

    def select_columns(self, idx: Sequence[int]) -> "RatMatrix":
        return RatMatrix._wrap(self.rows, len(idx), tuple(tuple(r[j] for j in idx) for r in self._data))

    def select_rows(self, idx: Sequence[int]) -> "RatMatrix":
        return RatMatrix._wrap(len(idx), self.cols, tuple(self._data[i] for i in idx))

    @staticmethod
    def vstack(ms: Sequence["RatMatrix"], cols: int | None = None) -> "RatMatrix":
        if cols is None:
            cols = ms[0].cols
        for m in ms:
            if m.cols != cols:
                raise DimensionMismatch("vstack column mismatch")
        return RatMatrix._wrap(sum(m.rows for m in ms), cols, tuple(r for m in ms for r in m._data))

    @staticmethod
    def hstack(ms: Sequence["RatMatrix"], rows: int | None = None) -> "RatMatrix":
        if rows is None:
            rows = ms[0].rows
        for m in ms:
            if m.rows != rows:
                raise DimensionMismatch("hstack row mismatch")
        return RatMatrix._wrap(rows, sum(m.cols for m in ms),
                               tuple(tuple(x for m in ms for x in m._data[i]) for i in range(rows)))

    def __eq__(self, other):
        if not isinstance(other, RatMatrix):
            return NotImplemented
        return self.shape == other.shape and self._data == other._data

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.rows, self.cols, self._data))
        return self._hash

    def __repr__(self):
        body = "; ".join(" ".join(rat_str(x) for x in r) for r in self._data)
        return f"RatMatrix({self.rows}x{self.cols}: [{body}])"

    @property
    def rank(self) -> int:
        return rank(self)


# ---------------------------------------------------------------------------

def _echelon_of_rows(rows: Iterable[dict], ncols: int) -> Echelon:
    e = Echelon(ncols)
    for r in rows:
        if r:
            e.add(r)
    return e


def rref(m: RatMatrix) -> tuple[RatMatrix, list[int], int]:
    """Unique reduced row-echelon form; zero rows are kept at the bottom."""
    e = _echelon_of_rows(m.sparse_rows(), m.cols)
    piv = e.pivots()
    rows = [_dense(r, m.cols) for r in e.sorted_rows()]
    rows += [tuple(ZERO for _ in range(m.cols))] * (m.rows - len(rows))
    return RatMatrix._wrap(m.rows, m.cols, tuple(rows)), piv, len(piv)


def rank(m: RatMatrix) -> int:
    # rank of the smaller orientation is cheaper to eliminate
    if m.rows <= m.cols:
        return len(_echelon_of_rows(m.sparse_rows(), m.cols))
    return len(_echelon_of_rows(m.sparse_columns(), m.rows))


def rank_of_vectors(vectors: Iterable[dict], ncols: int) -> int:
    return len(_echelon_of_rows(vectors, ncols))


class Subspace:
    """Subspace of Q^n given by its canonical (rref) basis."""

    __slots__ = ("ambient_dim", "basis", "pivots", "_sparse")

    def __init__(self, ambient_dim: int, basis: RatMatrix, pivots: Sequence[int]):
        self.ambient_dim = ambient_dim
        self.basis = basis
        self.pivots = tuple(pivots)
        self._sparse = None

    @classmethod
    def _from_echelon(cls, e: Echelon) -> "Subspace":
        piv = e.pivots()
        rows = tuple(_dense(e.rows[p], e.ncols) for p in piv)
        s = cls(e.ncols, RatMatrix._wrap(len(rows), e.ncols, rows), piv)
        s._sparse = [dict(e.rows[p]) for p in piv]
        return s

    @classmethod
    def from_vectors(cls, n: int, vectors: Iterable) -> "Subspace":
        e = Echelon(n)
        for v in vectors:
            d = v if isinstance(v, dict) else _sparse(v)
            if d:
                if max(d) >= n:
                    raise DimensionMismatch(f"vector index {max(d)} outside ambient dim {n}")
                e.add(d)
            elif not isinstance(v, dict) and len(v) != n:
                raise DimensionMismatch("vector length mismatch")
        return cls._from_echelon(e)

    @classmethod
    def zero(cls, n: int) -> "Subspace":
        return cls(n, RatMatrix(0, n), ())

    @classmethod
    def full(cls, n: int) -> "Subspace":
        return cls(n, RatMatrix.identity(n), range(n))

    @property
    def dim(self) -> int:
        return self.basis.rows

    def sparse_basis(self) -> list[dict]:
        if self._sparse is None:
            self._sparse = self.basis.sparse_rows()
        return self._sparse

    def echelon(self) -> Echelon:
        e = Echelon(self.ambient_dim)
        for p, r in zip(self.pivots, self.sparse_basis()):
            e.rows[p] = dict(r)
        return e

    def coords_sparse(self, v: dict, check: bool = True) -> dict:
        """Coordinates of v with respect to the rref basis (read at the pivots)."""
        c = {r: v[p] for r, p in enumerate(self.pivots) if v.get(p)}
        if check:
            rest = dict(v)
            basis = self.sparse_basis()
            for r, x in c.items():
                _axpy(rest, -x, basis[r])
            if rest:
                raise DimensionMismatch("vector is not in the subspace")
        return c

    def coords(self, v: Sequence, check: bool = True) -> tuple:
        if len(v) != self.ambient_dim:
            raise DimensionMismatch("vector length mismatch")
        return _dense(self.coords_sparse(_sparse(v), check), self.dim)

    def contains(self, v) -> bool:
        d = v if isinstance(v, dict) else _sparse(v)
        rest = dict(d)
        basis = self.sparse_basis()
        for r, p in enumerate(self.pivots):
            x = rest.get(p)
            if x:
                _axpy(rest, -x, basis[r])
        return not rest

    def contains_subspace(self, other: "Subspace") -> bool:
        return all(self.contains(r) for r in other.sparse_basis())

    def lift(self, c: Sequence) -> tuple:
        """Vector with coordinates c in this basis."""
        out = [ZERO] * self.ambient_dim
        for x, r in zip(c, self.sparse_basis()):
            if x:
                for k, v in r.items():
                    out[k] += x * v
        return tuple(out)

    def vectors(self) -> list[tuple]:
        return [self.basis.row(i) for i in range(self.dim)]

    def __eq__(self, other):
        if not isinstance(other, Subspace):
            return NotImplemented
        return self.ambient_dim == other.ambient_dim and self.basis == other.basis

    def __hash__(self):
        return hash((self.ambient_dim, self.basis))

    def __repr__(self):
        return f"Subspace(dim={self.dim} in Q^{self.ambient_dim})"


def kernel(m: RatMatrix) -> Subspace:
    e = _echelon_of_rows(m.sparse_rows(), m.cols)
    piv = set(e.rows)
    vecs = []
    for f in range(m.cols):
        if f in piv:
            continue
        v = {f: ONE}
        for p, row in e.rows.items():
            c = row.get(f)
            if c:
                v[p] = -c
        vecs.append(v)
    return Subspace.from_vectors(m.cols, vecs)


def image(m: RatMatrix) -> Subspace:
    return Subspace.from_vectors(m.rows, m.sparse_columns())


def annihilator(w: Subspace) -> RatMatrix:
    """Rows spanning the equations of w: w = {v : A v = 0}."""
    k = kernel(w.basis)
    return k.basis


def intersect(a: Subspace, b: Subspace) -> Subspace:
    if a.ambient_dim != b.ambient_dim:
        raise DimensionMismatch(f"ambient dims {a.ambient_dim} and {b.ambient_dim}")
    eqs = RatMatrix.vstack([annihilator(a), annihilator(b)], cols=a.ambient_dim)
    return kernel(eqs)


def preimage(m: RatMatrix, w: Subspace) -> Subspace:
    if m.rows != w.ambient_dim:
        raise DimensionMismatch(f"map into Q^{m.rows}, subspace of Q^{w.ambient_dim}")
    return kernel(annihilator(w) @ m)


class QuotientData:
    """Q^n / k with the pivot-complement section."""

    __slots__ = ("ambient_dim", "kernel", "proj", "sect", "free_columns", "_proj_cols")

    def __init__(self, ambient_dim, kernel, proj, sect, free_columns):
        self.ambient_dim = ambient_dim
        self.kernel = kernel
        self.proj = proj
        self.sect = sect
        self.free_columns = tuple(free_columns)
        self._proj_cols = None

    @property
    def dim(self) -> int:
        return self.proj.rows

    def project_sparse(self, v: dict) -> dict:
        if self._proj_cols is None:
            self._proj_cols = self.proj.sparse_columns()
        out: dict = {}
        for k, x in v.items():
            _axpy(out, x, self._proj_cols[k])
        return out

    def section_sparse(self, c: dict) -> dict:
        return {self.free_columns[s]: x for s, x in c.items() if x}

    def __eq__(self, other):
        if not isinstance(other, QuotientData):
            return NotImplemented
        return (self.ambient_dim, self.kernel, self.proj, self.sect) == \
            (other.ambient_dim, other.kernel, other.proj, other.sect)


def quotient(ambient_dim: int, k: Subspace) -> QuotientData:
    if k.ambient_dim != ambient_dim:
        raise DimensionMismatch(f"kernel lives in Q^{k.ambient_dim}, expected Q^{ambient_dim}")
    piv = set(k.pivots)
    free = [j for j in range(ambient_dim) if j not in piv]
    pos = {j: s for s, j in enumerate(free)}
    basis = k.sparse_basis()
    # proj(v) = coordinates at free columns of v reduced modulo k
    cols = []
    for j in range(ambient_dim):
        if j in pos:
            cols.append({pos[j]: ONE})
        else:
            r = k.pivots.index(j)
            cols.append({pos[c]: -x for c, x in basis[r].items() if c in pos})
    proj = RatMatrix.from_sparse_columns(cols, len(free))
    sect = RatMatrix.from_sparse_columns([{j: ONE} for j in free], ambient_dim)
    return QuotientData(ambient_dim, k, proj, sect, free)


def inverse(m: RatMatrix) -> RatMatrix:
    if m.rows != m.cols:
        raise DimensionMismatch("inverse of a non-square matrix")
    n = m.rows
    aug = RatMatrix.hstack([m, RatMatrix.identity(n)])
    red, piv, _ = rref(aug)
    if piv[:n] != list(range(n)):
        raise ZeroDivisionError("singular matrix")
    return RatMatrix._wrap(n, n, tuple(red.row(i)[n:] for i in range(n)))


def independent_columns(m: RatMatrix) -> list[int]:
    """Lexicographically first set of columns forming a basis of the column space."""
    return rref(m)[1]


def factor_through(j: RatMatrix, q: RatMatrix, columns: Sequence[int] | None = None) -> RatMatrix:
    """The D with D @ q == j, for q surjective.

    ``columns`` picks which preimages are used for the section (default:
    the first independent columns of q).  Raises FactorizationFailure when
    j does not vanish on ker q, i.e. when no such D exists.
    """
    if j.cols != q.cols:
        raise DimensionMismatch(f"{j.shape} vs {q.shape}")
    t = q.rows
    if columns is None:
        columns = independent_columns(q)
    columns = list(columns)
    if len(columns) != t:
        raise FactorizationFailure(f"map is not surjective: rank {len(columns)} < {t}")
    d = j.select_columns(columns) @ inverse(q.select_columns(columns))
    if d @ q != j:
        raise FactorizationFailure("map does not vanish on the kernel")
    return d


class RowBasis:
    """Coordinates with respect to a fixed list of independent row vectors."""

    def __init__(self, rows: RatMatrix):
        self.rows = rows
        self.columns = independent_columns(rows) if rows.rows else []
        if len(self.columns) != rows.rows:
            raise DimensionMismatch("rows are not independent")
        self._inv = inverse(rows.select_columns(self.columns)) if rows.rows else RatMatrix(0, 0)
        self._sparse = rows.sparse_rows()

    @property
    def dim(self):
        return self.rows.rows

    def coords(self, v: Sequence):
        """Coordinates of v, or None when v is outside the span."""
        sv = [v[c] for c in self.columns]
        c = self._inv.T.apply(sv) if self.dim else ()
        rest = _sparse(v)
        for x, r in zip(c, self._sparse):
            if x:
                _axpy(rest, -x, r)
        return None if rest else c
