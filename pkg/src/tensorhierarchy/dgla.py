"""Assembly and verification of the full hierarchy T_{-N} + ... + T_{-1} + g + R_Theta.

Degrees run from -N to +1: degree -i is T at level i, degree 0 is g and
degree +1 is R_Theta in its orbit word basis.  Elements of the basis are
addressed as (degree, index) pairs.  A bracket landing below -N is out of
range; checks that would need such a bracket are counted as skipped.
"""
from __future__ import annotations

from dataclasses import dataclass, field

from .differential import DifferentialTower, MuFamily, build_mu, build_tower, verify_differential
from .errors import DimensionMismatch, ParseError
from .exactla import ONE, ZERO, RatMatrix, Subspace, _axpy, image, rank, rat, rat_str
from .hierarchy import Hierarchy, build_hierarchy, verify_hierarchy
from .parallel import pmap
from .report import VerificationReport
from .triple import LieLeibnizTriple, eta, flatten_hom, ideal_of_squares, r_theta, unflatten_hom

FORMAT_TAG = "thx-hierarchy"


def _sign(p: int) -> int:
    return -1 if p % 2 else 1


@dataclass
class DgLa:
    name: str
    max_depth: int
    dims: dict                 # degree -> dim
    labels: dict               # degree -> list of basis labels
    bracket: dict              # (dx, ix, dy, iy) -> sparse vector in degree dx + dy
    differential: dict         # degree d -> matrix from degree d to d + 1
    words: list                # R_Theta word basis
    flags: dict = field(default_factory=dict)

    @property
    def degrees(self) -> range:
        return range(-self.max_depth, 2)

    def dim(self, deg: int) -> int:
        return self.dims.get(deg, 0)

    def in_range(self, deg: int) -> bool:
        return deg >= -self.max_depth

    def basis(self) -> list:
        return [(d, i) for d in self.degrees for i in range(self.dim(d))]

    def br(self, x, y) -> dict | None:
        """Bracket of two basis elements; None when it lands below -N."""
        if not self.in_range(x[0] + y[0]):
            return None
        return self.bracket.get((x[0], x[1], y[0], y[1]), {})

    def br_vec(self, dx: int, u: dict, dy: int, v: dict) -> dict | None:
        if not self.in_range(dx + dy):
            return None
        out: dict = {}
        for a, x in u.items():
            for b, y in v.items():
                e = self.bracket.get((dx, a, dy, b))
                if e:
                    _axpy(out, x * y, e)
        return out

    def d_vec(self, deg: int, u: dict) -> dict:
        m = self.differential.get(deg)
        if m is None or not u:
            return {}
        return m.apply_sparse(u)

    def label(self, x) -> str:
        return f"{self.labels[x[0]][x[1]]}@{x[0]}"


def _word_label(w) -> str:
    return ".".join([f"g{a}" for a in w] + ["Theta"])


def _sparse_col(m: RatMatrix, j: int) -> dict:
    return {i: x for i, x in enumerate(m.column(j)) if x}


def _neg(v: dict, s: int = -1) -> dict:
    return {k: s * x for k, x in v.items()}


def _word_apply(mats, word, v):
    for a in reversed(word):
        v = mats[a].apply(v)
    return v


def assemble(h: Hierarchy, tower: DifferentialTower, mu: MuFamily) -> DgLa:
    t, q, N = h.triple, h.q, h.max_depth
    R = tower.r_theta
    dims = {-i: q.dim(i) for i in range(1, N + 1)}
    dims[0], dims[1] = t.g.dim, R.dim
    labels = {-i: list(h.level(i).labels) for i in range(1, N + 1)}
    labels[0] = [f"g{a}" for a in range(t.g.dim)]
    labels[1] = [_word_label(w) for w in R.words]
    br: dict = {}

    def put(key, v):
        if v:
            br[key] = dict(v)

    for j in range(1, N + 1):
        for k in range(1, N + 1 - j):
            for a in range(q.dim(j)):
                for b in range(q.dim(k)):
                    put((-j, a, -k, b), q.bracket(j, a, k, b))
    for a in range(t.g.dim):
        for k in range(1, N + 1):
            m = h.action(k).mats[a]
            for b in range(q.dim(k)):
                v = _sparse_col(m, b)
                put((0, a, -k, b), v)
                put((-k, b, 0, a), _neg(v))
        for b in range(t.g.dim):
            put((0, a, 0, b), {c: x for c, x in enumerate(t.g.c[a][b]) if x})
        for r in range(R.dim):
            v = _sparse_col(tower.r_action.mats[a], r)
            put((0, a, 1, r), v)
            put((1, r, 0, a), _neg(v))
    # R_Theta against T: (w . d)(x) with d the differential leaving degree -k
    for k in range(1, N + 1):
        s = -(k - 1)
        start = flatten_hom(tower.partial[s])
        rows = tower.partial[s].rows
        for r, w in enumerate(R.words):
            img = unflatten_hom(_word_apply(mu.hom[s].mats, w, start), rows, q.dim(k))
            for b in range(q.dim(k)):
                v = _sparse_col(img, b)
                put((1, r, -k, b), v)
                put((-k, b, 1, r), _neg(v, -_sign(k)))
    diff = {d: tower.partial[d + 1] for d in range(-N, 1)}
    return DgLa(t.name, N, dims, labels, br, diff, [tuple(w) for w in R.words], t.flags.as_dict())


# ---------------------------------------------------------------------------
# axioms

def _fmt(d: DgLa, *xs) -> str:
    return ", ".join(d.label(x) for x in xs)


def _jacobi_row(d: DgLa, u):
    bad, checked, skipped = [], 0, 0
    B = d.basis()
    for v in B:
        for w in B:
            du, dv, dw = u[0], v[0], w[0]
            if not all(d.in_range(s) for s in (dv + dw, du + dv, du + dw, du + dv + dw)):
                skipped += 1
                continue
            checked += 1
            vw = d.br(v, w)
            lhs = d.br_vec(du, {u[1]: ONE}, dv + dw, vw)
            r1 = d.br_vec(du + dv, d.br(u, v), dw, {w[1]: ONE})
            r2 = d.br_vec(dv, {v[1]: ONE}, du + dw, d.br(u, w))
            _axpy(lhs, rat(-1), r1)
            _axpy(lhs, rat(-_sign(du * dv)), r2)
            if lhs:
                bad.append((u, v, w, lhs))
    return bad, checked, skipped


def verify_axioms(d: DgLa, threads: int | None = None) -> VerificationReport:
    rep = VerificationReport()
    B = d.basis()

    bad, checked, skipped = [], 0, 0
    for x in B:
        for y in B:
            if not d.in_range(x[0] + y[0]):
                skipped += 1
                continue
            checked += 1
            res = dict(d.br(x, y))
            _axpy(res, rat(_sign(x[0] * y[0])), d.br(y, x))
            if res:
                bad.append((x, y, res))
    rep.add("graded antisymmetry", not bad, _witness(d, bad), checked, skipped)

    rows = pmap(lambda u: _jacobi_row(d, u), B, threads)
    bad = [b for r in rows for b in r[0]]
    rep.add("graded Jacobi", not bad, _witness(d, bad), sum(r[1] for r in rows), sum(r[2] for r in rows))

    bad, checked, skipped = [], 0, 0
    for u in B:
        for v in B:
            du, dv = u[0], v[0]
            if not d.in_range(du + dv):
                skipped += 1
                continue
            checked += 1
            lhs = d.d_vec(du + dv, d.br(u, v))
            r1 = d.br_vec(du + 1, d.d_vec(du, {u[1]: ONE}), dv, {v[1]: ONE}) if du < 1 else {}
            r2 = d.br_vec(du, {u[1]: ONE}, dv + 1, d.d_vec(dv, {v[1]: ONE})) if dv < 1 else {}
            _axpy(lhs, rat(-1), r1)
            _axpy(lhs, rat(-_sign(du)), r2)
            if lhs:
                bad.append((u, v, lhs))
    rep.add("Leibniz rule", not bad, _witness(d, bad), checked, skipped)

    bad = []
    for deg in range(-d.max_depth, 0):
        p = d.differential[deg + 1] @ d.differential[deg]
        if not p.is_zero():
            bad.append(deg)
    rep.add("d^2 = 0", not bad, f"at degree {bad[0]}" if bad else "", checked=d.max_depth)

    bad, checked = [], 0
    for r in range(d.dim(1)):
        for deg in range(-d.max_depth, 0):
            for b in range(d.dim(deg)):
                checked += 1
                lhs = d.d_vec(1 + deg, d.br((1, r), (deg, b)))
                _axpy(lhs, ONE, d.br_vec(1, {r: ONE}, deg + 1, d.d_vec(deg, {b: ONE})))
                if lhs:
                    bad.append(((1, r), (deg, b), lhs))
    rep.add("d[xi, v] = -[xi, dv]", not bad, _witness(d, bad), checked, 0 if d.dim(1) else 1)

    bad, checked = [], 0
    if d.dim(1):
        for deg in range(-d.max_depth, 1):
            for b in range(d.dim(deg)):
                checked += 1
                diff = dict(d.br((1, 0), (deg, b)))
                _axpy(diff, rat(-1), d.d_vec(deg, {b: ONE}))
                if diff:
                    bad.append(((1, 0), (deg, b), diff))
    rep.add("[Theta, -] = d", not bad, _witness(d, bad), checked, 0 if d.dim(1) else 1)
    return rep


def _witness(d: DgLa, bad) -> str:
    if not bad:
        return ""
    *xs, res = bad[0]
    vals = {k: rat_str(v) for k, v in sorted(res.items())}
    return f"({_fmt(d, *xs)}) -> residual {vals}"


# ---------------------------------------------------------------------------
# homology and the resolution question

@dataclass(frozen=True)
class HomologyRow:
    degree: int
    dim: int
    ker: int
    im: int
    h: int | None   # None at the truncated bottom degree


def homology(d: DgLa) -> list[HomologyRow]:
    rows = []
    for deg in d.degrees:
        n = d.dim(deg)
        out = d.differential.get(deg)
        ker = n - (rank(out) if out is not None and out.rows and out.cols else 0)
        if deg == -d.max_depth:
            rows.append(HomologyRow(deg, n, ker, 0, None))
            continue
        inc = d.differential.get(deg - 1)
        im = rank(inc) if inc is not None and inc.rows and inc.cols else 0
        rows.append(HomologyRow(deg, n, ker, im, ker - im))
    return rows


def _sub(n: int) -> str:
    digits = str(abs(n)).translate(str.maketrans("0123456789", "₀₁₂₃₄₅₆₇₈₉"))
    return ("₋" if n < 0 else "") + digits


def conjecture_status(d: DgLa, t: LieLeibnizTriple | None = None) -> dict:
    """Does the negative part resolve the ideal of squares, within depth?  Report only.

    Without the triple the comparison with the ideal of squares is left as None.
    """
    rows = {r.degree: r for r in homology(d)}
    lower = [deg for deg in range(-2, -d.max_depth, -1) if rows[deg].h]
    is_ideal = None
    if t is not None:
        d1 = d.differential[-2]
        im = image(d1) if d1.cols else Subspace.zero(t.dimV)
        is_ideal = im == ideal_of_squares(t)
    return {
        "h_minus2_zero": rows[-2].h == 0 if rows[-2].h is not None else None,
        "d_minus1_injective": rows[-2].ker == 0,
        "image_is_ideal": is_ideal,
        "exact_below": not lower,
        "first_nonzero": lower[0] if lower else None,
    }


def status_lines(d: DgLa, t: LieLeibnizTriple | None = None) -> list[str]:
    st = conjecture_status(d, t)
    yn = {True: "yes", False: "no", None: "n/a"}
    lines = [f"H{_sub(-2)} = 0: {yn[st['h_minus2_zero']]}",
             f"∂{_sub(-1)} injective: {yn[st['d_minus1_injective']]}",
             f"image of ∂{_sub(-1)} = ideal of squares: {yn[st['image_is_ideal']]}"]
    span = f"degrees -2..-{d.max_depth - 1}"
    if st["exact_below"]:
        lines.append(f"homology vanishes in {span}: yes")
    else:
        lines.append(f"homology vanishes in {span}: no (first nonzero at {st['first_nonzero']})")
    return lines


# ---------------------------------------------------------------------------
# direct construction for Lie-valued V

def lie_valued_dgla(t: LieLeibnizTriple, N: int) -> DgLa:
    """The 3-term algebra V[1] + g + R_Theta built straight from the triple.

    Brackets with R_Theta are computed by the recursion on words
    [Theta_{a w}, u] = a.[Theta_w, u] - [Theta_w, a.u]; no free algebra or
    quotient is involved.  Valid only when the symmetric product vanishes.
    """
    if not t.flags.is_lie_V:
        raise DimensionMismatch("the direct construction needs a Lie-valued V")
    R = r_theta(t)
    n, gd = t.dimV, t.g.dim
    unit = lambda k, i: tuple(ONE if j == i else ZERO for j in range(k))

    def on_v(w, x):           # [Theta_w, x] in g
        if not w:
            return t.theta.apply(x)
        a, rest = w[0], w[1:]
        ea = unit(gd, a)
        return tuple(p - m for p, m in zip(t.g.bracket(ea, on_v(rest, x)), on_v(rest, t.act_V(ea).apply(x))))

    def on_g(w, b):           # [Theta_w, b] in Hom(V, g)
        eb = unit(gd, b)
        if not w:
            return eta(t, eb, t.theta).scale(-1)
        a, rest = w[0], w[1:]
        ea = unit(gd, a)
        return eta(t, ea, on_g(rest, b)) - on_g_vec(rest, t.g.bracket(ea, eb))

    def on_g_vec(w, bvec):
        out = RatMatrix.zeros(gd, n)
        for b, x in enumerate(bvec):
            if x:
                out = out + on_g(w, b).scale(x)
        return out

    dims = {-i: 0 for i in range(2, N + 1)}
    dims.update({-1: n, 0: gd, 1: R.dim})
    labels = {-i: [] for i in range(2, N + 1)}
    labels.update({-1: [f"v{i}" for i in range(n)], 0: [f"g{a}" for a in range(gd)],
                   1: [_word_label(w) for w in R.words]})
    br: dict = {}

    def put(key, v):
        v = {i: x for i, x in (v.items() if isinstance(v, dict) else enumerate(v)) if x}
        if v:
            br[key] = v

    for a in range(gd):
        for b in range(n):
            v = t.rho.mats[a].column(b)
            put((0, a, -1, b), v)
            put((-1, b, 0, a), tuple(-x for x in v))
        for b in range(gd):
            put((0, a, 0, b), t.g.c[a][b])
    for r, w in enumerate(R.words):
        for b in range(n):
            v = on_v(w, unit(n, b))
            put((1, r, -1, b), v)
            put((-1, b, 1, r), v)
        for b in range(gd):
            c = R.coords(flatten_hom(on_g(w, b)))
            if c is None:
                raise DimensionMismatch("bracket with g left R_Theta")
            put((1, r, 0, b), c)
            put((0, b, 1, r), tuple(-x for x in c))
    diff = {deg: RatMatrix(dims.get(deg + 1, 0), dims[deg]) for deg in range(-N, -1)}
    diff[-1] = t.theta
    top = [R.coords(flatten_hom(eta(t, unit(gd, a), t.theta).scale(-1))) for a in range(gd)]
    diff[0] = RatMatrix.from_columns(top, R.dim) if top else RatMatrix(R.dim, 0)
    return DgLa(t.name, N, dims, labels, br, diff, [tuple(w) for w in R.words], t.flags.as_dict())


def compare(a: DgLa, b: DgLa) -> list[str]:
    """Human-readable list of differences (empty when equal)."""
    out = []
    for f in ("max_depth", "dims", "labels", "words"):
        if getattr(a, f) != getattr(b, f):
            out.append(f"{f} differ")
    keys = sorted(set(a.bracket) | set(b.bracket))
    for k in keys:
        if a.bracket.get(k, {}) != b.bracket.get(k, {}):
            out.append(f"bracket {k} differs")
    for deg in sorted(set(a.differential) | set(b.differential)):
        if a.differential.get(deg) != b.differential.get(deg):
            out.append(f"differential at {deg} differs")
    return out


# ---------------------------------------------------------------------------
# pipeline and cross-route checks

@dataclass
class Pipeline:
    triple: LieLeibnizTriple
    hierarchy: Hierarchy
    tower: DifferentialTower
    mu: MuFamily
    dgla: DgLa


def run_pipeline(t: LieLeibnizTriple, N: int, shortcut: bool = True) -> Pipeline:
    h = build_hierarchy(t, N, shortcut=shortcut)
    tower = build_tower(h)
    mu = build_mu(h, tower)
    return Pipeline(t, h, tower, mu, assemble(h, tower, mu))


def cross_checks(p: Pipeline) -> VerificationReport:
    """Brackets of R_Theta with g read off through the mu map at degree +1."""
    rep = VerificationReport()
    d, tower, mu = p.dgla, p.tower, p.mu
    bad, checked = [], 0
    if 1 in mu.hom and d.dim(1):
        start = flatten_hom(tower.partial[1])
        for r, w in enumerate(d.words):
            img = unflatten_hom(_word_apply(mu.hom[1].mats, w, start), d.dim(1), d.dim(0))
            for a in range(d.dim(0)):
                checked += 1
                if _sparse_col(img, a) != d.bracket.get((1, r, 0, a), {}):
                    bad.append((r, a))
    rep.add("[xi, a] via mu at +1", not bad, f"word {bad[0][0]}, g{bad[0][1]}" if bad else "", checked,
            0 if checked else 1)
    if p.triple.flags.is_lie_V:
        diffs = compare(d, lie_valued_dgla(p.triple, d.max_depth))
        rep.add("agrees with the direct Lie-valued construction", not diffs, diffs[0] if diffs else "")
    return rep


def full_report(p: Pipeline, threads: int | None = None) -> VerificationReport:
    rep = VerificationReport()
    rep.extend(verify_axioms(p.dgla, threads))
    rep.extend(verify_hierarchy(p.hierarchy))
    rep.extend(verify_differential(p.hierarchy, p.tower, p.mu))
    rep.extend(cross_checks(p))
    return rep


# ---------------------------------------------------------------------------
# serialization

def _mat_json(m: RatMatrix) -> dict:
    return {"rows": m.rows, "cols": m.cols, "entries": [[rat_str(x) for x in r] for r in m.to_lists()]}


def _mat_load(x, where) -> RatMatrix:
    try:
        rows, cols = x["rows"], x["cols"]
        ent = x["entries"]
        if len(ent) != rows or any(len(r) != cols for r in ent):
            raise ParseError("matrix shape does not match its entries", where=where)
        return RatMatrix(rows, cols, [rat(v) for r in ent for v in r]) if rows and cols else RatMatrix(rows, cols)
    except (KeyError, TypeError) as e:
        raise ParseError(f"bad matrix: {e}", where=where) from None


def dgla_to_json(d: DgLa, report: VerificationReport | None = None, extra: dict | None = None) -> dict:
    degs = list(d.degrees)
    bracket = []
    for (dx, ix, dy, iy) in sorted(d.bracket):
        v = d.bracket[(dx, ix, dy, iy)]
        tgt = d.dim(dx + dy)
        bracket.append([dx, ix, dy, iy, [rat_str(v.get(c, ZERO)) for c in range(tgt)]])
    out = {
        "format": FORMAT_TAG,
        "version": 1,
        "name": d.name,
        "max_degree": d.max_depth,
        "flags": dict(d.flags),
        "degrees": degs,
        "dims": [d.dim(x) for x in degs],
        "labels": {str(x): list(d.labels.get(x, [])) for x in degs},
        "r_theta_words": [list(w) for w in d.words],
        "bracket": bracket,
        "differential": {str(x): _mat_json(d.differential[x]) for x in sorted(d.differential)},
    }
    if report is not None:
        out["report"] = report.summary()
    if extra:
        out.update(extra)
    return out


def dgla_from_json(obj: dict, source: str = "<hierarchy>") -> DgLa:
    if not isinstance(obj, dict) or obj.get("format") != FORMAT_TAG:
        raise ParseError("not a hierarchy file", where=source)
    try:
        N = obj["max_degree"]
        degs = obj["degrees"]
        if degs != list(range(-N, 2)):
            raise ParseError("degree list does not match max_degree", where=f"{source}.degrees")
        dims = dict(zip(degs, obj["dims"]))
        labels = {int(k): list(v) for k, v in obj["labels"].items()}
        br = {}
        for n, e in enumerate(obj["bracket"]):
            dx, ix, dy, iy, coeffs = e
            v = {c: rat(x) for c, x in enumerate(coeffs) if rat(x)}
            if len(coeffs) != dims.get(dx + dy, 0):
                raise ParseError("coefficient list has the wrong length", where=f"{source}.bracket[{n}]")
            if v:
                br[(dx, ix, dy, iy)] = v
        diff = {int(k): _mat_load(v, f"{source}.differential.{k}") for k, v in obj["differential"].items()}
        words = [tuple(w) for w in obj["r_theta_words"]]
        return DgLa(obj.get("name", ""), N, dims, labels, br, diff, words, dict(obj.get("flags", {})))
    except (KeyError, TypeError, ValueError) as e:
        raise ParseError(f"malformed hierarchy file: {e!r}", where=source) from None
