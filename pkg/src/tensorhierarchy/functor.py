"""Morphisms of triples and the morphisms they induce between hierarchies.

A triple morphism (phi, chi) has phi: g -> g' and chi: V -> V'.  On the
hierarchy it acts as chi in degree -1 and phi in degree 0; lower degrees are
pushed through the quotients via Lambda^2 (q is surjective there, so the map
is forced), and degree +1 sends Theta_w to Theta'_{phi(w)}.
"""
from __future__ import annotations

from dataclasses import dataclass

from .dgla import DgLa, Pipeline
from .errors import DimensionMismatch, KernelNotPreserved, MorphismInvalid, Phi1IllDefined
from .exactla import ONE, ZERO, RatMatrix, _axpy, factor_through, kernel, rat
from .freegla import bracket_matrix, wedge2
from .report import VerificationReport
from .triple import LieLeibnizTriple, flatten_hom


@dataclass(frozen=True)
class TripleMorphism:
    phi: RatMatrix   # g -> g'
    chi: RatMatrix   # V -> V'

    def compose_after(self, first: "TripleMorphism") -> "TripleMorphism":
        """self o first."""
        return TripleMorphism(self.phi @ first.phi, self.chi @ first.chi)


def identity_morphism(t: LieLeibnizTriple) -> TripleMorphism:
    return TripleMorphism(RatMatrix.identity(t.g.dim), RatMatrix.identity(t.dimV))


def validate_morphism(src: LieLeibnizTriple, dst: LieLeibnizTriple, m: TripleMorphism) -> VerificationReport:
    if m.phi.shape != (dst.g.dim, src.g.dim) or m.chi.shape != (dst.dimV, src.dimV):
        raise DimensionMismatch(f"phi {m.phi.shape} / chi {m.chi.shape} do not fit the triples")
    rep = VerificationReport()
    ph, ch = m.phi, m.chi
    gcols = [ph.column(a) for a in range(src.g.dim)]
    bad = []
    for a in range(src.g.dim):
        for b in range(src.g.dim):
            if ph.apply(src.g.c[a][b]) != dst.g.bracket(gcols[a], gcols[b]):
                bad.append((a, b))
    rep.add("phi preserves the bracket", not bad, bad[:1] if bad else "", checked=src.g.dim ** 2)
    vcols = [ch.column(i) for i in range(src.dimV)]
    bad = []
    for i in range(src.dimV):
        for j in range(src.dimV):
            if ch.apply(src.leib[i][j]) != dst.product(vcols[i], vcols[j]):
                bad.append((i, j))
    rep.add("chi preserves the Leibniz product", not bad, bad[:1] if bad else "", checked=src.dimV ** 2)
    ok = dst.theta @ ch == ph @ src.theta
    rep.add("Theta' chi = phi Theta", ok)
    bad = [a for a in range(src.g.dim) if dst.act_V(gcols[a]) @ ch != ch @ src.rho.mats[a]]
    rep.add("phi(a).chi(x) = chi(a.x)", not bad, f"g{bad[0]}" if bad else "", checked=src.g.dim)
    return rep


@dataclass
class DglaMorphism:
    maps: dict   # degree -> matrix from the source degree space to the target one

    def compose_after(self, first: "DglaMorphism") -> "DglaMorphism":
        return DglaMorphism({d: self.maps[d] @ first.maps[d] for d in self.maps})

    def __eq__(self, other):
        return isinstance(other, DglaMorphism) and self.maps == other.maps


def _sym_square(chi: RatMatrix, src: LieLeibnizTriple, dst: LieLeibnizTriple) -> RatMatrix:
    """chi.chi: S^2 V -> S^2 V' in the (i <= j) bases."""
    idx = {p: s for s, p in enumerate(dst.s2_pairs)}
    cols = []
    for (i, j) in src.s2_pairs:
        col: dict = {}
        ci, cj = chi.column(i), chi.column(j)
        for k, x in enumerate(ci):
            if not x:
                continue
            for l, y in enumerate(cj):
                if y:
                    s = idx[(min(k, l), max(k, l))]
                    col[s] = col.get(s, ZERO) + x * y
        cols.append({k: v for k, v in col.items() if v})
    return RatMatrix.from_sparse_columns(cols, len(dst.s2_pairs))


def _wedge_map(maps: dict, src_dims: dict, dst_dims: dict, i: int) -> RatMatrix:
    """x^y -> f(x)^f(y) from Lambda^2(T) to Lambda^2(T') at level i (f even, so no signs)."""
    w, w2 = wedge2(src_dims, i), wedge2(dst_dims, i)
    cols_of = {j: maps[-j].sparse_columns() for j in range(1, i)}
    cols = []
    for (x, y) in w.elements:
        col: dict = {}
        for c1, v1 in cols_of[x[0]][x[1]].items():
            for c2, v2 in cols_of[y[0]][y[1]].items():
                hit = w2.coords_of(((x[0], c1), (y[0], c2)))
                if hit is not None:
                    _axpy(col, rat(hit[1]) * v1 * v2, {hit[0]: ONE})
        cols.append(col)
    return RatMatrix.from_sparse_columns(cols, w2.dim)


def _combo_action(mats, coeffs, dim):
    out = RatMatrix.zeros(dim, dim)
    for c, x in enumerate(coeffs):
        if x:
            out = out + mats[c].scale(x)
    return out


def induce(src: Pipeline, dst: Pipeline, m: TripleMorphism) -> DglaMorphism:
    s, t = src.triple, dst.triple
    rep = validate_morphism(s, t, m)
    if not rep.ok:
        raise MorphismInvalid("; ".join(c.name for c in rep.failures))
    for label, tr in (("source", s), ("target", t)):
        if not tr.flags.is_stringent:
            raise KernelNotPreserved(f"{label} triple is not stringent; Ker{{,}} need not map into Ker{{,}}'")
    N = src.hierarchy.max_depth
    if dst.hierarchy.max_depth != N:
        raise DimensionMismatch("source and target hierarchies have different depths")

    sq = _sym_square(m.chi, s, t)
    K, K2 = src.hierarchy.kernel_s2, dst.hierarchy.kernel_s2
    for r in K.sparse_basis():
        if not K2.contains(sq.apply_sparse(r)):
            raise KernelNotPreserved("chi.chi does not map K into K'")

    q, q2 = src.hierarchy.q, dst.hierarchy.q
    maps = {-1: m.chi, 0: m.phi}
    for i in range(2, N + 1):
        Q = bracket_matrix(q, wedge2(q.dims, i))
        J = bracket_matrix(q2, wedge2(q2.dims, i)) @ _wedge_map(maps, q.dims, q2.dims, i)
        for v in kernel(Q).sparse_basis():
            if J.apply_sparse(v):
                raise KernelNotPreserved(f"Ker q at degree -{i} does not map into Ker q'")
        maps[-i] = factor_through(J, Q) if Q.rows else RatMatrix.zeros(q2.dim(i), 0)

    maps[1] = _phi_plus_one(s, t, m, src.tower.r_theta, dst.tower.r_theta)
    return DglaMorphism(maps)


def _phi_plus_one(s, t, m, R, R2) -> RatMatrix:
    hom2 = t.hom_action()
    th2 = flatten_hom(t.theta)
    acts = [_combo_action(hom2.mats, m.phi.column(a), hom2.target_dim) for a in range(s.g.dim)]

    def image(word):
        v = th2
        for a in reversed(word):
            v = acts[a].apply(v)
        return v

    cols, imgs = [], []
    for w in R.words:
        v = image(w)
        c = R2.coords(v)
        if c is None:
            raise Phi1IllDefined(f"Theta'_phi(w) for w = {w} is outside R_Theta'")
        cols.append(c)
        imgs.append(v)
    for u, vec in R.explored:
        c = R.coords(vec)
        expect = image(u)
        got = [ZERO] * len(th2)
        for x, v in zip(c, imgs):
            if x:
                got = [g + x * y for g, y in zip(got, v)]
        if tuple(got) != tuple(expect):
            raise Phi1IllDefined(f"orbit relation at word {u} is not respected")
    return RatMatrix.from_columns(cols, R2.dim) if cols else RatMatrix(R2.dim, 0)


def check_morphism(f: DglaMorphism, a: DgLa, b: DgLa) -> VerificationReport:
    rep = VerificationReport()
    bad = []
    for d in range(-a.max_depth, 1):
        if b.differential[d] @ f.maps[d] != f.maps[d + 1] @ a.differential[d]:
            bad.append(d)
    rep.add("morphism commutes with d", not bad, f"degree {bad[0]}" if bad else "", checked=a.max_depth + 1)
    bad, checked, skipped = [], 0, 0
    cols = {d: f.maps[d].sparse_columns() for d in a.degrees}
    for x in a.basis():
        for y in a.basis():
            s = x[0] + y[0]
            if not a.in_range(s):
                skipped += 1
                continue
            checked += 1
            lhs = f.maps[s].apply_sparse(a.br(x, y)) if s <= 1 else {}
            rhs = b.br_vec(x[0], cols[x[0]][x[1]], y[0], cols[y[0]][y[1]])
            _axpy(lhs, rat(-1), rhs)
            if lhs:
                bad.append((x, y))
    rep.add("morphism preserves brackets", not bad, bad[:1] if bad else "", checked, skipped)
    return rep


def is_identity(f: DglaMorphism) -> bool:
    return all(m.rows == m.cols and m == RatMatrix.identity(m.rows) for m in f.maps.values())


def functor_laws(objects: dict, arrows: list) -> VerificationReport:
    """Identity, composition and restriction laws over sample morphisms.

    ``objects`` maps names to pipelines; ``arrows`` is a list of
    (source name, target name, TripleMorphism).
    """
    rep = VerificationReport()
    for name, p in objects.items():
        g = induce(p, p, identity_morphism(p.triple))
        rep.add(f"G(id) = id on {name}", is_identity(g))
    induced = []
    for (a, b, m) in arrows:
        g = induce(objects[a], objects[b], m)
        induced.append((a, b, m, g))
        rep.add(f"G(m) restricts to chi and phi for {a} -> {b}", g.maps[-1] == m.chi and g.maps[0] == m.phi)
        rep.extend(check_morphism(g, objects[a].dgla, objects[b].dgla), prefix=f"{a} -> {b}: ")
    count = 0
    for (a, b, m1, g1) in induced:
        for (b2, c, m2, g2) in induced:
            if b2 != b:
                continue
            count += 1
            g = induce(objects[a], objects[c], m2.compose_after(m1))
            rep.add(f"G(m2 m1) = G(m2) G(m1) for {a} -> {b} -> {c}", g == g2.compose_after(g1))
    rep.add("composable pairs exercised", count > 0, checked=count, skipped=0 if count else 1)
    return rep
