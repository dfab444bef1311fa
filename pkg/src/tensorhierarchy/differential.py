"""The differential of the tensor hierarchy and the modules R_{-i}.

``partial[s]`` maps degree s-1 to degree s:

* ``partial[+1]``: g -> R_Theta (orbit coordinates), a -> -eta(a; Theta);
* ``partial[0]`` = Theta: V -> g;
* ``partial[-i]``: T_{-i-1} -> T_{-i} for 1 <= i <= N-1.

The negative part is built one level at a time.  On Lambda^2(T) at level
n+2 the map j = m + q o d (d extended to Lambda^2 as a degree +1 derivation
that vanishes on T_{-1}) kills the kernel of q, so it factors through q as
the next differential.  ``m`` is 2{,} on V^V and x^y -> Theta(x).y when x is
in V and y sits lower; it vanishes elsewhere.
"""
from __future__ import annotations

from dataclasses import dataclass, field

from .errors import DimensionMismatch, FactorizationFailure, MuIllDefined, WellDefinednessFailure
from .exactla import ZERO, RatMatrix, Subspace, _axpy, factor_through, image, kernel, rank, rat
from .freegla import (Bilinear, GradedLie, WedgeBasis, bracket_extension, bracket_matrix,
                      canonical_wedge, unshuffle_extend, wedge2, wedge3)
from .hierarchy import Hierarchy, _s2_to_free
from .report import VerificationReport
from .triple import (CyclicModule, GAction, LieLeibnizTriple, flatten_hom, hom_action,
                     ideal_of_squares, orbit_closure, r_theta)


def _combo(mats, coeffs):
    """sum_c coeffs[c] * mats[c] (all mats of equal shape)."""
    out = None
    for c, x in enumerate(coeffs):
        if x:
            term = mats[c].scale(x)
            out = term if out is None else out + term
    return out


def level_action_by(h: Hierarchy, level: int, a_vec) -> RatMatrix:
    """Matrix of the g-element with coordinates a_vec acting on T at the given level."""
    mats = h.action(level).mats
    d = h.q.dim(level)
    m = _combo(mats, a_vec)
    return m if m is not None else RatMatrix.zeros(d, d)


# ---------------------------------------------------------------------------
# m

def m_bilinear(h: Hierarchy) -> Bilinear:
    t = h.triple
    theta_cols = [t.theta.column(i) for i in range(t.dimV)]
    cache: dict = {}

    def on_canonical(x, y):
        (j, a), (k, b) = x, y
        if j != 1:
            return {}
        if k == 1:
            return {(1, c): 2 * v for c, v in enumerate(t.sym[a][b]) if v}
        key = (k, a)
        if key not in cache:
            cache[key] = level_action_by(h, k, theta_cols[a]).sparse_columns()
        return {(k, c): v for c, v in cache[key][b].items()}

    def m(x, y):
        c = canonical_wedge((x, y))
        if c is None:
            return {}
        sign, (u, v) = c
        out = on_canonical(u, v)
        return {f: sign * v for f, v in out.items()} if sign != 1 else out

    return m


def _apply_bilinear(b: Bilinear, w2: WedgeBasis, target_level: int, target_dim: int) -> RatMatrix:
    cols = []
    for (x, y) in w2.elements:
        cols.append({c: v for (lvl, c), v in b(x, y).items() if lvl == target_level})
    return RatMatrix.from_sparse_columns(cols, target_dim)


def m_matrix(h: Hierarchy, i: int) -> RatMatrix:
    """m on Lambda^2(T) at level i, landing in T at level i-1."""
    return _apply_bilinear(m_bilinear(h), wedge2(h.q.dims, i), i - 1, h.q.dim(i - 1))


def m_extension(h: Hierarchy, i: int) -> RatMatrix:
    """Unshuffle extension of m: Lambda^3 at level i -> Lambda^2 at level i-1."""
    return unshuffle_extend(m_bilinear(h), wedge3(h.q.dims, i), wedge2(h.q.dims, i - 1))


def derivation_matrix(q: GradedLie, partial: dict, i: int) -> RatMatrix:
    """x^y -> dx^y + (-1)^{|x|} x^dy from Lambda^2 at level i to level i-1 (d = 0 on level 1)."""
    src, dst = wedge2(q.dims, i), wedge2(q.dims, i - 1)
    dcols = {}

    def d(f):
        j, a = f
        if j == 1:
            return {}
        if j not in dcols:
            dcols[j] = partial[-(j - 1)].sparse_columns()
        return dcols[j][a]

    cols = []
    for (x, y) in src.elements:
        col: dict = {}
        for (u, v, s, moving_first) in ((x, y, 1, True), (y, x, -1 if x[0] % 2 else 1, False)):
            for c, val in d(u).items():
                f = (u[0] - 1, c)
                hit = dst.coords_of((f, v) if moving_first else (v, f))
                if hit is not None:
                    idx, sign = hit
                    _axpy(col, rat(s * sign), {idx: val})
        cols.append(col)
    return RatMatrix.from_sparse_columns(cols, dst.dim)


def wedge_action_matrix(h: Hierarchy, a_vec, i: int) -> RatMatrix:
    """a.(x^y) = a.x^y + x^a.y on Lambda^2(T) at level i."""
    w2 = wedge2(h.q.dims, i)
    acts = {}
    cols = []
    for (x, y) in w2.elements:
        col: dict = {}
        for u, v, first in ((x, y, True), (y, x, False)):
            j = u[0]
            if j not in acts:
                acts[j] = level_action_by(h, j, a_vec).sparse_columns()
            for c, val in acts[j][u[1]].items():
                f = (j, c)
                hit = w2.coords_of((f, v) if first else (v, f))
                if hit is not None:
                    _axpy(col, rat(hit[1]), {hit[0]: val})
        cols.append(col)
    return RatMatrix.from_sparse_columns(cols, w2.dim)


# ---------------------------------------------------------------------------
# the tower

@dataclass
class DifferentialTower:
    max_depth: int
    partial: dict            # s -> RatMatrix from degree s-1 to degree s
    m_maps: dict             # level i -> m on Lambda^2 at level i
    r_theta: CyclicModule
    r_action: GAction        # eta on R_Theta in orbit coordinates

    def degree_dim(self, h: Hierarchy, d: int) -> int:
        if d < 0:
            return h.q.dim(-d)
        return h.triple.g.dim if d == 0 else self.r_theta.dim


def orbit_action(cyc: CyclicModule, mats) -> GAction:
    out = []
    for m in mats:
        cols = []
        for r in range(cyc.dim):
            c = cyc.coords(m.apply(cyc.word_vectors.row(r)))
            if c is None:
                raise DimensionMismatch("orbit is not closed under the action")
            cols.append(c)
        out.append(RatMatrix.from_columns(cols, cyc.dim) if cols else RatMatrix(0, 0))
    return GAction(cyc.dim, tuple(out))


def _kernel_sweep(J: RatMatrix, Q: RatMatrix, s: int) -> None:
    for v in kernel(Q).sparse_basis():
        img = J.apply_sparse(v)
        if img:
            raise WellDefinednessFailure(f"j at degree {s} is nonzero on Ker q: vector {sorted(v)}")


def build_partial_level(h: Hierarchy, partial: dict, n: int) -> RatMatrix:
    """d_{-n-1}: T_{-n-2} -> T_{-n-1}, given d_{-1}..d_{-n} in ``partial``."""
    q = h.q
    i = n + 2
    Q = bracket_matrix(q, wedge2(q.dims, i))
    J = m_matrix(h, i)
    if n >= 1:
        J = J + bracket_matrix(q, wedge2(q.dims, i - 1)) @ derivation_matrix(q, partial, i)
    _kernel_sweep(J, Q, -(n + 1))
    if Q.rows == 0:
        return RatMatrix.zeros(q.dim(i - 1), 0)
    try:
        return factor_through(J, Q)
    except FactorizationFailure as e:
        raise WellDefinednessFailure(f"degree {-(n + 1)}: {e}") from None


def build_partial_1(h: Hierarchy) -> RatMatrix:
    return build_partial_level(h, {}, 0)


def extend_top(t: LieLeibnizTriple, partial: dict) -> tuple[CyclicModule, GAction]:
    R = r_theta(t)
    hom = t.hom_action()
    ract = orbit_action(R, hom.mats)
    th = flatten_hom(t.theta)
    cols = []
    for a in range(t.g.dim):
        v = tuple(-x for x in hom.mats[a].apply(th))
        c = R.coords(v)
        if c is None:
            raise DimensionMismatch("eta(a; Theta) left the orbit of Theta")
        cols.append(c)
    partial[0] = t.theta
    partial[1] = RatMatrix.from_columns(cols, R.dim) if cols else RatMatrix(R.dim, 0)
    return R, ract


def build_tower(h: Hierarchy) -> DifferentialTower:
    N = h.max_depth
    partial: dict = {}
    for n in range(0, N - 1):
        partial[-(n + 1)] = build_partial_level(h, partial, n)
    R, ract = extend_top(h.triple, partial)
    m_maps = {i: m_matrix(h, i) for i in range(2, N + 1)}
    return DifferentialTower(N, partial, m_maps, R, ract)


# ---------------------------------------------------------------------------
# R_{-i} and mu

@dataclass
class MuFamily:
    r_theta: CyclicModule
    R: dict                          # s -> CyclicModule in Hom(source, target) of partial[s]
    mu: dict                         # s -> RatMatrix, R_Theta coords -> R_s coords
    hom: dict = field(default_factory=dict)  # s -> GAction on the Hom space


def degree_actions(h: Hierarchy, tower: DifferentialTower, d: int):
    if d < 0:
        return h.action(-d).mats
    if d == 0:
        return h.triple.g.ad_basis()
    return tower.r_action.mats


def _apply_word(mats, word, v):
    for a in reversed(word):
        v = mats[a].apply(v)
    return v


def build_mu(h: Hierarchy, tower: DifferentialTower) -> MuFamily:
    t = h.triple
    R0 = tower.r_theta
    fam = MuFamily(R0, {0: R0}, {0: RatMatrix.identity(R0.dim)}, {0: t.hom_action()})
    for s in [1] + [-k for k in range(1, h.max_depth)]:
        hom = hom_action(degree_actions(h, tower, s), degree_actions(h, tower, s - 1)) if t.g.dim else GAction(0, ())
        start = flatten_hom(tower.partial[s])
        Rs = orbit_closure(start, hom.mats, max_len=hom.target_dim + 1)
        cols = []
        for w in R0.words:
            c = Rs.coords(_apply_word(hom.mats, w, start))
            if c is None:
                raise MuIllDefined(s, w)
            cols.append(c)
        mu = RatMatrix.from_columns(cols, Rs.dim) if cols else RatMatrix(Rs.dim, 0)
        # relation certificate over every explored word of R_Theta
        images = [_apply_word(hom.mats, w, start) for w in R0.words]
        for u, vec in R0.explored:
            c = R0.coords(vec)
            if c is None:
                raise MuIllDefined(s, u)
            expect = _apply_word(hom.mats, u, start)
            got = [ZERO] * len(start)
            for x, img in zip(c, images):
                if x:
                    got = [g + x * y for g, y in zip(got, img)]
            if tuple(got) != tuple(expect):
                raise MuIllDefined(s, u)
        if R0.dim == 0 and any(start):
            raise MuIllDefined(s, ())
        fam.R[s], fam.mu[s], fam.hom[s] = Rs, mu, hom
    return fam


# ---------------------------------------------------------------------------
# checks

def _key(s: int) -> str:
    return f"{s:+d}" if s else "0"


def verify_differential(h: Hierarchy, tower: DifferentialTower, mu: MuFamily | None = None) -> VerificationReport:
    rep = VerificationReport()
    t, q, N, P = h.triple, h.q, h.max_depth, tower.partial

    for s in range(1, -(N - 1), -1):
        prod = P[s] @ P[s - 1]
        rep.add(f"d^2 = 0 at {_key(s)}o{_key(s - 1)}", prod.is_zero(),
                "" if prod.is_zero() else f"nonzero entries {prod.sparse_rows()}")

    # h-equivariance: rho(Theta x) commutes with every partial
    for s in range(1, -N, -1):
        bad = []
        for x in range(t.dimV):
            X = t.theta.column(x)
            tgt = _combo(degree_actions(h, tower, s), X)
            src = _combo(degree_actions(h, tower, s - 1), X)
            if tgt is None:
                continue
            if tgt @ P[s] != P[s] @ src:
                bad.append(x)
        rep.add(f"h-equivariance of d at {_key(s)}", not bad, f"v{bad[0]}" if bad else "", checked=t.dimV)

    # m is h-equivariant
    bad = []
    for i in range(2, N + 1):
        for x in range(t.dimV):
            X = t.theta.column(x)
            lhs = level_action_by(h, i - 1, X) @ tower.m_maps[i]
            rhs = tower.m_maps[i] @ wedge_action_matrix(h, X, i)
            if lhs != rhs:
                bad.append((i, x))
    rep.add("h-equivariance of m", not bad, bad[:1] if bad else "", checked=(N - 1) * t.dimV)

    for d in range(3, N + 1):
        lhs = m_matrix(h, d) @ bracket_extension(q, d) + bracket_matrix(q, wedge2(q.dims, d - 1)) @ m_extension(h, d)
        rep.add(f"m q + q m = 0 on Lambda^3 at -{d}", lhs.is_zero(), "" if lhs.is_zero() else lhs.sparse_rows())
    for d in range(3, N + 1):
        lhs = tower.m_maps[d - 1] @ derivation_matrix(q, P, d) + P[-(d - 2)] @ tower.m_maps[d]
        rep.add(f"m d + d m = 0 on Lambda^2 at -{d}", lhs.is_zero(), "" if lhs.is_zero() else lhs.sparse_rows())
    for d in range(2, N + 1):
        Q = bracket_matrix(q, wedge2(q.dims, d))
        rhs = tower.m_maps[d]
        if d > 2:
            rhs = rhs + bracket_matrix(q, wedge2(q.dims, d - 1)) @ derivation_matrix(q, P, d)
        ok = P[-(d - 1)] @ Q == rhs
        rep.add(f"d q = m + q d on Lambda^2 at -{d}", ok)

    # d_{-1} on classes of v_i.v_j is {v_i, v_j}, computed without the factorization
    lv2 = h.level(2)
    classes = lv2.T.proj @ _s2_to_free(t, lv2.F)
    ok = P[-1] @ classes == t.sym_map()
    rep.add("d_-1 [x.y] = {x,y}", ok)
    im = image(P[-1]) if P[-1].cols else Subspace.zero(t.dimV)
    rep.add("image of d_-1 is the ideal of squares", im == ideal_of_squares(t))

    if mu is not None:
        rep.extend(verify_mu(h, tower, mu))
    return rep


def verify_mu(h: Hierarchy, tower: DifferentialTower, mu: MuFamily) -> VerificationReport:
    rep = VerificationReport()
    R0 = mu.r_theta
    for s in sorted(mu.R, reverse=True):
        if s == 0:
            continue
        Rs, M = mu.R[s], mu.mu[s]
        start = flatten_hom(tower.partial[s])
        if R0.dim:
            col = M.column(0)
            lifted = [ZERO] * len(start)
            for x, r in zip(col, range(Rs.dim)):
                if x:
                    lifted = [a + x * b for a, b in zip(lifted, Rs.word_vectors.row(r))]
            ok = tuple(lifted) == tuple(start)
        else:
            ok = not any(start)
        rep.add(f"mu(Theta) = d at {_key(s)}", ok)
        rk = rank(M) if M.rows and M.cols else 0
        rep.add(f"mu surjective at {_key(s)}", rk == Rs.dim, f"rank {rk} < {Rs.dim}" if rk != Rs.dim else "")
        rep.add(f"dim R at {_key(s)} <= dim R_Theta", Rs.dim <= R0.dim)
        if Rs.dim:
            ract = orbit_action(Rs, mu.hom[s].mats)
            bad = [a for a in range(len(ract.mats)) if M @ tower.r_action.mats[a] != ract.mats[a] @ M]
        else:
            bad = []
        rep.add(f"mu g-equivariant at {_key(s)}", not bad, f"g{bad[0]}" if bad else "",
                checked=h.triple.g.dim)
    return rep

