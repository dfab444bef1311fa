"""Lie-Leibniz triples: validation, derived brackets and classification.

Conventions
-----------
* ``c[i][j][k]`` is the coefficient of e_k in [e_i, e_j] in g.
* ``rho.mats[a][k][j]`` is the coefficient of v_k in a . v_j (columns are images).
* ``theta[a][i]`` is the coefficient of e_a in Theta(v_i), a dim g x dim V matrix.
* Hom(V, g) is flattened row-major: index ``a * dimV + i`` holds xi[a][i].
* S^2 V uses the basis v_i . v_j (i <= j) in index-lexicographic order, with
  v_i . v_j = (v_i (x) v_j + v_j (x) v_i) / 2.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

from .errors import (ActionNotMorphism, DimensionMismatch, InclusionViolation,
                     LeibnizIdentityViolation, LieAlgebraInvalid, ProductMismatch,
                     QuadraticConstraintViolation)
from .exactla import (ONE, ZERO, Echelon, RatMatrix, RowBasis, Subspace, intersect,
                      kernel, preimage, rat)
from .report import VerificationReport


def _vec_add(u, v, s=ONE):
    return tuple(a + s * b for a, b in zip(u, v))


class LieAlgebra:
    def __init__(self, dim: int, c):
        self.dim = dim
        self.c = tuple(tuple(tuple(rat(x) for x in cij) for cij in ci) for ci in c)
        if len(self.c) != dim or any(len(ci) != dim or any(len(cij) != dim for cij in ci) for ci in self.c):
            raise DimensionMismatch(f"structure constants must be {dim}x{dim}x{dim}")
        self._ad = None

    @classmethod
    def abelian(cls, dim: int) -> "LieAlgebra":
        return cls(dim, [[[0] * dim for _ in range(dim)] for _ in range(dim)])

    def bracket(self, u: Sequence, v: Sequence) -> tuple:
        out = [ZERO] * self.dim
        for i, a in enumerate(u):
            if not a:
                continue
            for j, b in enumerate(v):
                if not b:
                    continue
                ab = a * b
                for k, x in enumerate(self.c[i][j]):
                    if x:
                        out[k] += ab * x
        return tuple(out)

    def ad_basis(self) -> tuple[RatMatrix, ...]:
        """ad(e_i) as matrices (column j is [e_i, e_j])."""
        if self._ad is None:
            self._ad = tuple(RatMatrix.from_columns([self.c[i][j] for j in range(self.dim)], self.dim)
                             for i in range(self.dim))
        return self._ad

    def ad(self, u: Sequence) -> RatMatrix:
        m = RatMatrix.zeros(self.dim, self.dim)
        for a, x in zip(self.ad_basis(), u):
            if x:
                m = m + a.scale(x)
        return m

    def __eq__(self, other):
        return isinstance(other, LieAlgebra) and self.c == other.c

    def __hash__(self):
        return hash(self.c)


@dataclass(frozen=True)
class GAction:
    """Representation of g on a vector space, one matrix per basis element of g."""

    target_dim: int
    mats: tuple[RatMatrix, ...]

    def __post_init__(self):
        for m in self.mats:
            if m.shape != (self.target_dim, self.target_dim):
                raise DimensionMismatch(f"action matrix {m.shape}, expected {self.target_dim}-square")

    def act(self, a: Sequence) -> RatMatrix:
        m = RatMatrix.zeros(self.target_dim, self.target_dim)
        for x, mat in zip(a, self.mats):
            if x:
                m = m + mat.scale(x)
        return m

    def morphism_failures(self, g: LieAlgebra) -> list[tuple[int, int]]:
        bad = []
        for a in range(g.dim):
            for b in range(a + 1, g.dim):
                lhs = self.act(g.c[a][b])
                rhs = self.mats[a] @ self.mats[b] - self.mats[b] @ self.mats[a]
                if lhs != rhs:
                    bad.append((a, b))
        return bad


def validate_lie(g: LieAlgebra) -> VerificationReport:
    rep = VerificationReport()
    n = g.dim
    bad = None
    count = 0
    for i in range(n):
        for j in range(n):
            count += 1
            if bad is None and any(x + y for x, y in zip(g.c[i][j], g.c[j][i])):
                bad = (i, j)
    rep.add("antisymmetry", bad is None, bad and f"(i,j)={bad}", checked=count)
    bad = None
    count = 0
    basis = [tuple(ONE if k == i else ZERO for k in range(n)) for i in range(n)]
    for i in range(n):
        for j in range(n):
            for k in range(n):
                count += 1
                if bad is not None:
                    continue
                x, y, z = basis[i], basis[j], basis[k]
                s = g.bracket(x, g.bracket(y, z))
                s = _vec_add(s, g.bracket(y, g.bracket(z, x)))
                s = _vec_add(s, g.bracket(z, g.bracket(x, y)))
                if any(s):
                    bad = (i, j, k)
    rep.add("jacobi", bad is None, bad and f"(i,j,k)={bad}", checked=count)
    return rep


@dataclass(frozen=True)
class Flags:
    is_lie_V: bool
    is_strict: bool
    is_semistrict: bool
    is_stringent: bool
    is_crossed_module: bool

    def as_dict(self):
        return {"lie_V": self.is_lie_V, "strict": self.is_strict, "semistrict": self.is_semistrict,
                "stringent": self.is_stringent, "crossed": self.is_crossed_module}


@dataclass(frozen=True)
class CyclicModule:
    """Orbit closure of one vector under a g-action.

    ``words[r]`` is the word w of the r-th retained generator, whose vector is
    a_{w_1} . (... (a_{w_m} . start)); the retained vectors form the basis that
    orbit coordinates refer to.  ``explored`` lists every word that was tried
    (retained or not) with its vector; relation certificates use it.
    """

    ambient_dim: int
    orbit_basis: Subspace
    words: tuple[tuple[int, ...], ...]
    word_vectors: RatMatrix
    explored: tuple[tuple[tuple[int, ...], tuple], ...] = field(compare=False)

    @property
    def dim(self) -> int:
        return len(self.words)

    def coords(self, v: Sequence):
        """Orbit (word-basis) coordinates of v, None when v is outside the orbit."""
        rb = self.__dict__.get("_rowbasis")
        if rb is None:
            rb = RowBasis(self.word_vectors)
            object.__setattr__(self, "_rowbasis", rb)
        return rb.coords(v)


def orbit_closure(start: Sequence, mats: Sequence[RatMatrix], max_len: int | None = None) -> CyclicModule:
    """Breadth-first orbit closure; candidate words of one length are visited lexicographically."""
    n = len(start)
    start = tuple(rat(x) for x in start)
    if max_len is None:
        max_len = n + 1
    ech = Echelon(n)
    words, vecs, explored = [], [], []
    frontier = []
    if any(start):
        explored.append(((), start))
        ech.add({i: x for i, x in enumerate(start) if x})
        words.append(())
        vecs.append(start)
        frontier = [((), start)]
    length = 0
    while frontier:
        length += 1
        if length > max_len:
            raise AssertionError("orbit closure did not stabilise within the word-length cap")
        nxt = []
        for a, m in enumerate(mats):
            for w, v in frontier:
                u = m.apply(v)
                word = (a,) + w
                explored.append((word, u))
                if ech.add({i: x for i, x in enumerate(u) if x}):
                    words.append(word)
                    vecs.append(u)
                    nxt.append((word, u))
        frontier = nxt
    basis = Subspace._from_echelon(ech)
    wv = RatMatrix.from_rows(vecs, cols=n) if vecs else RatMatrix(0, n)
    return CyclicModule(n, basis, tuple(words), wv, tuple(explored))


def largest_invariant_subspace(act: GAction, w: Subspace) -> Subspace:
    if w.ambient_dim != act.target_dim:
        raise DimensionMismatch("subspace and action live in different spaces")
    cur = w
    for _ in range(w.ambient_dim + 2):
        nxt = cur
        for m in act.mats:
            nxt = intersect(nxt, preimage(m, cur))
        if nxt == cur:
            return cur
        if nxt.dim >= cur.dim:
            raise AssertionError("invariant-subspace iteration failed to shrink")
        cur = nxt
    raise AssertionError("invariant-subspace iteration exceeded its bound")


class LieLeibnizTriple:
    """A validated triple (g, V, Theta) with its derived Leibniz product.

    Build instances with :func:`derive_triple`.
    """

    def __init__(self, g, dimV, rho, theta, leib, name=""):
        self.g: LieAlgebra = g
        self.dimV: int = dimV
        self.rho: GAction = rho
        self.theta: RatMatrix = theta
        self.leib = leib
        self.name = name
        self.sym, self.antisym = _split(leib, dimV)
        self.flags: Flags | None = None
        self._cache: dict = {}

    # -- elementary maps --------------------------------------------------
    def theta_of(self, x: Sequence) -> tuple:
        return self.theta.apply(x)

    def act_V(self, a: Sequence) -> RatMatrix:
        return self.rho.act(a)

    def product(self, x: Sequence, y: Sequence) -> tuple:
        return self.act_V(self.theta_of(x)).apply(y)

    # -- symmetric square -------------------------------------------------
    @property
    def s2_pairs(self) -> list[tuple[int, int]]:
        n = self.dimV
        return [(i, j) for i in range(n) for j in range(i, n)]

    def s2_action(self) -> GAction:
        if "s2" not in self._cache:
            pairs = self.s2_pairs
            idx = {p: s for s, p in enumerate(pairs)}
            mats = []
            for m in self.rho.mats:
                cols = []
                for (i, j) in pairs:
                    col: dict = {}
                    for k in range(self.dimV):
                        for (p, q, x) in ((k, j, m[k, i]), (i, k, m[k, j])):
                            if x:
                                s = idx[(min(p, q), max(p, q))]
                                col[s] = col.get(s, ZERO) + x
                    cols.append({k: v for k, v in col.items() if v})
                mats.append(RatMatrix.from_sparse_columns(cols, len(pairs)))
            self._cache["s2"] = GAction(len(pairs), tuple(mats))
        return self._cache["s2"]

    def sym_map(self) -> RatMatrix:
        """{,}: S^2 V -> V in the S^2 basis."""
        return RatMatrix.from_columns([self.sym[i][j] for (i, j) in self.s2_pairs], self.dimV)

    def ker_sym(self) -> Subspace:
        return kernel(self.sym_map())

    def hom_action(self) -> GAction:
        """The eta action of g on Hom(V, g), flattened row-major."""
        if "hom" not in self._cache:
            self._cache["hom"] = hom_action(self.g.ad_basis(), self.rho.mats)
        return self._cache["hom"]


def hom_action(target_mats: Sequence[RatMatrix], source_mats: Sequence[RatMatrix]) -> GAction:
    """g acting on Hom(S, T) by (a.phi) = a_T phi - phi a_S, flattened row-major."""
    if len(target_mats) != len(source_mats):
        raise DimensionMismatch("actions of different Lie algebras")
    dt = target_mats[0].rows if target_mats else 0
    ds = source_mats[0].rows if source_mats else 0
    mats = []
    for at, as_ in zip(target_mats, source_mats):
        cols = []
        for r in range(dt):
            for c in range(ds):
                # image of the unit matrix E_{rc}: at E - E as_
                col = {}
                for k in range(dt):
                    x = at[k, r]
                    if x:
                        col[k * ds + c] = col.get(k * ds + c, ZERO) + x
                for k in range(ds):
                    x = as_[c, k]
                    if x:
                        col[r * ds + k] = col.get(r * ds + k, ZERO) - x
                cols.append({i: v for i, v in col.items() if v})
        mats.append(RatMatrix.from_sparse_columns(cols, dt * ds))
    return GAction(dt * ds, tuple(mats))


def _split(leib, n):
    half = rat("1/2")
    sym = tuple(tuple(tuple(half * (a + b) for a, b in zip(leib[i][j], leib[j][i])) for j in range(n))
                for i in range(n))
    anti = tuple(tuple(tuple(half * (a - b) for a, b in zip(leib[i][j], leib[j][i])) for j in range(n))
                 for i in range(n))
    return sym, anti


def _unit(n, i):
    return tuple(ONE if k == i else ZERO for k in range(n))


def derive_triple(g: LieAlgebra, rho: GAction, theta: RatMatrix, leibniz=None, name="") -> LieLeibnizTriple:
    rep = validate_lie(g)
    if not rep.ok:
        raise LieAlgebraInvalid("; ".join(f"{c.name} fails at {c.witness}" for c in rep.failures))
    if len(rho.mats) != g.dim:
        raise DimensionMismatch(f"{len(rho.mats)} action matrices for dim g = {g.dim}")
    n = rho.target_dim
    if theta.shape != (g.dim, n):
        raise DimensionMismatch(f"theta has shape {theta.shape}, expected {(g.dim, n)}")
    bad = rho.morphism_failures(g)
    if bad:
        raise ActionNotMorphism(*bad[0])

    leib = tuple(tuple(rho.act(theta.column(i)).column(j) for j in range(n)) for i in range(n))
    if leibniz is not None:
        given = tuple(tuple(tuple(rat(x) for x in leibniz[i][j]) for j in range(n)) for i in range(n))
        if given != leib:
            raise ProductMismatch("supplied Leibniz product differs from rho(Theta(x)) y")
    t = LieLeibnizTriple(g, n, rho, theta, leib, name)

    th_cols = [theta.column(i) for i in range(n)]
    for i in range(n):
        for j in range(n):
            if theta.apply(leib[i][j]) != g.bracket(th_cols[i], th_cols[j]):
                raise QuadraticConstraintViolation(i, j)

    # redundant cross-check: the derived product is a (left) Leibniz algebra
    for i in range(n):
        for j in range(n):
            for k in range(n):
                ek = _unit(n, k)
                lhs = t.product(_unit(n, i), leib[j][k])
                rhs = _vec_add(t.product(leib[i][j], ek), t.product(_unit(n, j), leib[i][k]))
                if lhs != rhs:
                    raise LeibnizIdentityViolation(f"Leibniz identity fails at {(i, j, k)}")

    I, Z, KT = ideal_of_squares(t), center(t), kernel(theta)
    if not KT.contains_subspace(I):
        raise InclusionViolation("ideal of squares is not inside Ker Theta")
    if not Z.contains_subspace(KT):
        raise InclusionViolation("Ker Theta is not inside the center")
    t.flags = classify(t)
    return t


def split_product(t: LieLeibnizTriple):
    """(antisym, sym) with antisym[i][j] = [v_i,v_j], sym[i][j] = {v_i,v_j}."""
    return t.antisym, t.sym


def ideal_of_squares(t: LieLeibnizTriple) -> Subspace:
    return Subspace.from_vectors(t.dimV, [t.sym[i][j] for (i, j) in t.s2_pairs])


def center(t: LieLeibnizTriple) -> Subspace:
    # x -> (y -> x o y), flattened as a dimV^2 x dimV matrix
    n = t.dimV
    cols = [tuple(t.leib[i][j][k] for j in range(n) for k in range(n)) for i in range(n)]
    return kernel(RatMatrix.from_columns(cols, n * n)) if n else Subspace.zero(0)


def ker_theta(t: LieLeibnizTriple) -> Subspace:
    return kernel(t.theta)


def eta(t: LieLeibnizTriple, a: Sequence, xi: RatMatrix) -> RatMatrix:
    """x -> [a, xi(x)] - xi(a . x)."""
    a = [rat(x) for x in a]
    return t.g.ad(a) @ xi - xi @ t.act_V(a)


def flatten_hom(m: RatMatrix) -> tuple:
    return m.entries


def unflatten_hom(v: Sequence, rows: int, cols: int) -> RatMatrix:
    return RatMatrix(rows, cols, v)


def r_theta(t: LieLeibnizTriple) -> CyclicModule:
    if "r_theta" not in t._cache:
        act = t.hom_action()
        t._cache["r_theta"] = orbit_closure(flatten_hom(t.theta), act.mats, max_len=act.target_dim + 1)
    return t._cache["r_theta"]


def is_derivation(t: LieLeibnizTriple, m: RatMatrix) -> bool:
    n = t.dimV
    for i in range(n):
        for j in range(n):
            lhs = m.apply(t.leib[i][j])
            rhs = _vec_add(t.product(m.column(i), _unit(n, j)), t.product(_unit(n, i), m.column(j)))
            if lhs != rhs:
                return False
    return True


def sym_is_equivariant(t: LieLeibnizTriple) -> bool:
    sm = t.sym_map()
    return all(t.rho.mats[a] @ sm == sm @ t.s2_action().mats[a] for a in range(t.g.dim))


def classify(t: LieLeibnizTriple) -> Flags:
    is_lie = not any(x for row in t.sym for v in row for x in v)
    hom = t.hom_action()
    th = flatten_hom(t.theta)
    strict = all(not any(m.apply(th)) for m in hom.mats)
    semistrict = all(is_derivation(t, m) for m in t.rho.mats)
    K = t.ker_sym()
    stringent = largest_invariant_subspace(t.s2_action(), K) == K
    flags = Flags(is_lie, strict, semistrict, stringent, strict and is_lie)
    if strict and not semistrict:
        raise AssertionError("strict triple that is not semi-strict")
    if semistrict and sym_is_equivariant(t) and not stringent:
        raise AssertionError("equivariant symmetric bracket with a non-invariant kernel")
    return flags
