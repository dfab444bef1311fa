"""The negatively graded part T of the tensor hierarchy.

T_{-1} = V, T_{-2} = S^2 V / K_{-2} where K_{-2} is the largest g-submodule
of Ker{,}, and T_{-i} = F_{-i} / K_{-i} for i >= 3 with K_{-i} the span of
brackets [F_{-j}, K_{-(i-j)}].  The bracket q on T is the free bracket pushed
through the quotients, so q(x^y) = [x, y]_F modulo K at every level; on
level 1 that is x(x)y + y(x)x = 2 x.y in S^2 V.

Levels are indexed by their positive level number i (degree -i).
"""
from __future__ import annotations

from dataclasses import dataclass, field

from .errors import ActionLeak, DimensionMismatch, ExactnessFailure
from .exactla import ONE, RatMatrix, Subspace, QuotientData, _axpy, quotient, rank, rat
from .freegla import (FreeAlgebra, FreeLevel, GradedLie, TensorElem, bracket_extension,
                      bracket_matrix, graded_bracket, jacobi_failures, wedge2, wedge3)
from .report import VerificationReport
from .triple import GAction, LieLeibnizTriple, largest_invariant_subspace


@dataclass
class HierarchyLevel:
    level: int
    F: FreeLevel | None  # None for levels skipped by the Lie-valued shortcut
    K: Subspace | None   # in F coordinates; None on level 1 and skipped levels
    T: QuotientData
    g_action_T: GAction
    labels: list = field(default_factory=list)

    @property
    def degree(self) -> int:
        return -self.level

    @property
    def dim(self) -> int:
        return self.T.dim

    def lift(self, c: dict) -> TensorElem:
        """A tensor representative of the class with T coordinates c."""
        return self.F.tensor(self.T.section_sparse(c))

    def project(self, t: TensorElem) -> dict:
        return self.T.project_sparse(self.F.coords(t))


@dataclass
class Hierarchy:
    triple: LieLeibnizTriple
    max_depth: int
    levels: list            # levels[i - 1] is level i
    q: GradedLie            # bracket on T in the quotient bases
    kernel_s2: Subspace     # K_{-2} in S^2 V coordinates
    free: FreeAlgebra
    shortcut: bool = False

    def level(self, i: int) -> HierarchyLevel:
        return self.levels[i - 1]

    def dims(self) -> dict[int, int]:
        return {lv.level: lv.dim for lv in self.levels}

    def action(self, i: int) -> GAction:
        return self.level(i).g_action_T


def _s2_to_free(t: LieLeibnizTriple, F2: FreeLevel) -> RatMatrix:
    """Columns: F_{-2} coordinates of v_i.v_j = (v_i(x)v_j + v_j(x)v_i)/2."""
    n = t.dimV
    half = rat("1/2")
    cols = []
    for (i, j) in t.s2_pairs:
        terms = {i * n + j: ONE} if i == j else {i * n + j: half, j * n + i: half}
        cols.append(F2.coords(TensorElem(2, n, terms)))
    return RatMatrix.from_sparse_columns(cols, F2.dim)


def _induced_action(F: FreeLevel, T: QuotientData, level: int) -> GAction:
    mats = []
    for a, A in enumerate(F.g_action.mats):
        At = T.proj @ A @ T.sect
        if At @ T.proj != T.proj @ A:
            raise ActionLeak(f"g basis element {a} does not preserve K at level {level}")
        mats.append(At)
    return GAction(T.dim, tuple(mats))


def _labels(F: FreeLevel, T: QuotientData) -> list:
    out = []
    for c in T.free_columns:
        t = F.elems[c]
        w = t.word(min(t.terms))
        out.append("[" + " ".join(f"v{d}" for d in w) + "]")
    return out


def _level_one(t: LieLeibnizTriple, F1: FreeLevel) -> HierarchyLevel:
    T = quotient(t.dimV, Subspace.zero(t.dimV))
    return HierarchyLevel(1, F1, None, T, GAction(t.dimV, t.rho.mats), [f"v{i}" for i in range(t.dimV)])


def build_T2(t: LieLeibnizTriple, free: FreeAlgebra) -> tuple[HierarchyLevel, Subspace]:
    """Level 2 and the kernel K_{-2} in S^2 V coordinates."""
    F2 = free.level(2)
    K_s2 = largest_invariant_subspace(t.s2_action(), t.ker_sym())
    emb = _s2_to_free(t, F2)
    K = Subspace.from_vectors(F2.dim, [emb.apply_sparse(r) for r in K_s2.sparse_basis()])
    T = quotient(F2.dim, K)
    return HierarchyLevel(2, F2, K, T, _induced_action(F2, T, 2), _labels(F2, T)), K_s2


def build_K_level(i: int, levels: list, Fi: FreeLevel) -> Subspace:
    vecs = []
    for j in range(1, i - 1):
        low, high = levels[j - 1], levels[i - j - 1]
        for x in low.F.elems:
            for w in high.K.sparse_basis():
                b = graded_bracket(x, high.F.tensor(w))
                if b.terms:
                    vecs.append(Fi.coords(b))
    K = Subspace.from_vectors(Fi.dim, vecs)
    for a, A in enumerate(Fi.g_action.mats):
        for r in K.sparse_basis():
            if not K.contains(A.apply_sparse(r)):
                raise ActionLeak(f"K at level {i} is not stable under g basis element {a}")
    return K


def build_T_level(i: int, levels: list, free: FreeAlgebra) -> HierarchyLevel:
    Fi = free.level(i)
    K = build_K_level(i, levels, Fi)
    T = quotient(Fi.dim, K)
    return HierarchyLevel(i, Fi, K, T, _induced_action(Fi, T, i), _labels(Fi, T))


def _zero_level(i: int, gdim: int) -> HierarchyLevel:
    T = quotient(0, Subspace.zero(0))
    return HierarchyLevel(i, None, None, T, GAction(0, tuple(RatMatrix(0, 0) for _ in range(gdim))), [])


def _bracket_table(levels: list, N: int) -> GradedLie:
    dims = {lv.level: lv.dim for lv in levels}
    table = {}
    for j in range(1, N + 1):
        for k in range(j, N + 1 - j):
            lj, lk, lt = levels[j - 1], levels[k - 1], levels[j + k - 1]
            if not (lj.dim and lk.dim and lt.dim):
                table[(j, k)] = [[{} for _ in range(lk.dim)] for _ in range(lj.dim)]
                continue
            xs = [lj.lift({a: ONE}) for a in range(lj.dim)]
            ys = [lk.lift({b: ONE}) for b in range(lk.dim)]
            table[(j, k)] = [[lt.project(graded_bracket(x, y)) for y in ys] for x in xs]
    return GradedLie(dims, table)


def check_exactness(q: GradedLie, i: int) -> tuple[bool, int, int, int]:
    """Exactness of Lambda^3 -> Lambda^2 -> T at level i >= 3.

    Returns (ok, rank q2, rank of the Lambda^3 map, dim Lambda^2).
    """
    w2 = wedge2(q.dims, i)
    Q2 = bracket_matrix(q, w2)
    Q3 = bracket_extension(q, i)
    r2, r3 = rank(Q2), rank(Q3)
    ok = (Q2 @ Q3).is_zero() and r3 == w2.dim - r2
    return ok, r2, r3, w2.dim


def build_hierarchy(t: LieLeibnizTriple, N: int, shortcut: bool = True) -> Hierarchy:
    """All levels 1..N of T with the bracket q.

    With ``shortcut`` a Lie-valued V gets zero levels below -2 without any
    tensor work; otherwise every level is computed from the free algebra.
    """
    if N < 2:
        raise DimensionMismatch("depth must be at least 2")
    free = FreeAlgebra(t.dimV, t.rho.mats)
    levels = [_level_one(t, free.level(1))]
    lv2, K_s2 = build_T2(t, free)
    levels.append(lv2)
    short = shortcut and t.flags.is_lie_V
    for i in range(3, N + 1):
        levels.append(_zero_level(i, t.g.dim) if short else build_T_level(i, levels, free))
    q = _bracket_table(levels, N)
    h = Hierarchy(t, N, levels, q, K_s2, free, short)
    for i in range(2, N + 1):
        w2 = wedge2(q.dims, i)
        r2 = rank(bracket_matrix(q, w2))
        if r2 != q.dim(i):
            raise ExactnessFailure(-i, q.dim(i) - r2)
        if i >= 3:
            ok, r2, r3, d2 = check_exactness(q, i)
            if not ok:
                raise ExactnessFailure(-i, d2 - r2 - r3)
    return h


# ---------------------------------------------------------------------------
# checks

def q_equivariance_failures(h: Hierarchy) -> tuple[list, int]:
    """a.q(x,y) = q(a.x,y) + q(x,a.y) on basis pairs of levels j <= k."""
    q, N = h.q, h.max_depth
    bad, count = [], 0
    for j in range(1, N + 1):
        for k in range(j, N + 1 - j):
            Aj, Ak, At = h.action(j).mats, h.action(k).mats, h.action(j + k).mats
            for a in range(h.triple.g.dim):
                colj, colk = Aj[a].sparse_columns(), Ak[a].sparse_columns()
                for x in range(q.dim(j)):
                    for y in range(q.dim(k)):
                        count += 1
                        lhs = At[a].apply_sparse(q.bracket(j, x, k, y))
                        _axpy(lhs, rat(-1), q.bracket_vec(j, colj[x], k, {y: ONE}))
                        _axpy(lhs, rat(-1), q.bracket_vec(j, {x: ONE}, k, colk[y]))
                        if lhs:
                            bad.append((a, (j, x), (k, y)))
    return bad, count


def verify_hierarchy(h: Hierarchy) -> VerificationReport:
    rep = VerificationReport()
    q, N, t = h.q, h.max_depth, h.triple
    for i in range(2, N + 1):
        w2 = wedge2(q.dims, i)
        r2 = rank(bracket_matrix(q, w2))
        rep.add(f"q surjective at -{i}", r2 == q.dim(i), f"rank {r2} < dim {q.dim(i)}" if r2 != q.dim(i) else "")
    for i in range(3, N + 1):
        w3 = wedge3(q.dims, i)
        if w3.dim == 0 and wedge2(q.dims, i).dim == 0:
            rep.add(f"exactness at -{i}", True, checked=0, skipped=1)
            continue
        ok, r2, r3, d2 = check_exactness(q, i)
        rep.add(f"exactness at -{i}", ok, "" if ok else f"rank deficit {d2 - r2 - r3}")
    bad, count = jacobi_failures(q, limit=5)
    rep.add("q graded Jacobi", not bad, bad[:1] if bad else "", checked=count)
    bad, count = q_equivariance_failures(h)
    rep.add("q g-equivariance", not bad, bad[:1] if bad else "", checked=count)
    if not h.shortcut:
        for i in range(3, N + 1):
            lv, low = h.level(i), h.level(i - 1)
            gen = [lv.F.coords(graded_bracket(x, low.F.tensor(w)))
                   for x in h.level(1).F.elems for w in low.K.sparse_basis()]
            ok = Subspace.from_vectors(lv.F.dim, gen) == lv.K
            rep.add(f"K at -{i} generated by [F_-1, K]", ok)
    if t.flags.is_lie_V:
        nz = [i for i in range(2, N + 1) if q.dim(i)]
        rep.add("collapse for Lie-valued V", not nz, f"dim T at -{nz[0]} > 0" if nz else "")
    else:
        rep.add("T_-2 nonzero for non-Lie V", q.dim(2) >= 1)
    return rep

