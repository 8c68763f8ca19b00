"""Loop-algebra machinery and integrable hierarchies.

Elements of g((z^-1)) tensor V are finite sums b_i z^k P with b_i in the
frame basis and P a differential polynomial; the loop degree of b z^k is
eig(b) - (1 + eig(s)) k, so f + z s is homogeneous of degree -1 and every
fixed-degree slice is finite dimensional.  The dressing equation

    exp(ad U)(d + (f+zs) + q) = d + (f+zs) + h,   U in hperp_{>0}, h in h

is solved degree by degree; pairing h against a central element a(z) of
ker(ad(f+zs)) yields the conserved densities and the hierarchy flows.
"""

from __future__ import annotations

from fractions import Fraction

from . import linalg
from .diffpoly import Context, DiffPoly, functional_equal
from .pva import ReductionFrame
from .scalars import Scalar


class NotSemisimple(ValueError):
    pass


class InvalidCenter(ValueError):
    pass


class WindowOverflow(ValueError):
    pass


def z_degree(frame: ReductionFrame) -> Fraction:
    """Loop degree of z: -(1 + grade of s)."""
    got = getattr(frame, "_loop_z_degree", None)
    if got is None:
        co = frame.to_adapted(frame.s)
        grades = {frame.eig_of[i] for i, c in enumerate(co) if c}
        if len(grades) != 1:
            raise ValueError("s must be homogeneous")
        got = -(Fraction(1) + grades.pop())
        frame._loop_z_degree = got
    return got


class LoopElement:
    """Finite map (basis index, z power) -> DiffPoly coefficient."""

    __slots__ = ("frame", "ctx", "terms")

    def __init__(self, frame: ReductionFrame, ctx: Context, terms: dict | None = None):
        self.frame = frame
        self.ctx = ctx
        self.terms = terms or {}

    def add_term(self, i: int, k: int, p: DiffPoly):
        if not p:
            return
        key = (i, k)
        got = self.terms.get(key)
        got = p if got is None else got + p
        if got:
            self.terms[key] = got
        else:
            self.terms.pop(key, None)

    def __bool__(self):
        return bool(self.terms)

    def __add__(self, other: "LoopElement") -> "LoopElement":
        out = LoopElement(self.frame, self.ctx, dict(self.terms))
        for (i, k), p in other.terms.items():
            out.add_term(i, k, p)
        return out

    def __sub__(self, other: "LoopElement") -> "LoopElement":
        return self + other.scale(Fraction(-1))

    def scale(self, c) -> "LoopElement":
        return LoopElement(
            self.frame, self.ctx,
            {key: p.scale(c) for key, p in self.terms.items()},
        )

    def derivative(self) -> "LoopElement":
        out = LoopElement(self.frame, self.ctx)
        for (i, k), p in self.terms.items():
            out.add_term(i, k, p.total_derivative())
        return out

    def degree_of(self, key) -> Fraction:
        i, k = key
        return self.frame.eig_of[i] + z_degree(self.frame) * k

    def trim(self, max_deg: Fraction) -> "LoopElement":
        zd = z_degree(self.frame)
        return LoopElement(
            self.frame, self.ctx,
            {
                (i, k): p
                for (i, k), p in self.terms.items()
                if self.frame.eig_of[i] + zd * k <= max_deg
            },
        )

    def component(self, deg: Fraction) -> "LoopElement":
        zd = z_degree(self.frame)
        return LoopElement(
            self.frame, self.ctx,
            {
                (i, k): p
                for (i, k), p in self.terms.items()
                if self.frame.eig_of[i] + zd * k == deg
            },
        )

    def bracket(self, other: "LoopElement", max_deg: Fraction | None = None) -> "LoopElement":
        struct = _struct(self.frame)
        zd = z_degree(self.frame)
        eig = self.frame.eig_of
        out = LoopElement(self.frame, self.ctx)
        for (i, k1), p in self.terms.items():
            d1 = eig[i] + zd * k1
            for (j, k2), q in other.terms.items():
                if max_deg is not None and d1 + eig[j] + zd * k2 > max_deg:
                    continue
                co = struct[i][j]
                if co is None:
                    continue
                pq = p * q
                if not pq:
                    continue
                for r, c in co:
                    out.add_term(r, k1 + k2, pq.scale(c))
        return out

    def map_coeffs(self, fn, ctx: Context) -> "LoopElement":
        out = LoopElement(self.frame, ctx)
        for (i, k), p in self.terms.items():
            out.add_term(i, k, fn(p))
        return out

    def pair_with(self, a_z: dict) -> dict:
        """Pairing (a(z) x 1 | self): a_z maps z powers to g vectors."""
        g = self.frame.algebra
        out: dict[int, DiffPoly] = {}
        for (i, k), p in self.terms.items():
            for k2, vec in a_z.items():
                c = g.pair(vec, self.frame.basis[i])
                if c:
                    zp = k + k2
                    got = out.get(zp)
                    add = p.scale(c)
                    got = add if got is None else got + add
                    if got:
                        out[zp] = got
                    else:
                        out.pop(zp, None)
        return out

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for (i, k) in sorted(self.terms):
            p = self.terms[(i, k)]
            zs = "" if k == 0 else (" z" if k == 1 else f" z^{k}")
            parts.append(f"{self.frame.labels[i]}{zs} (x) [{p}]")
        return " + ".join(parts)

    def to_json(self) -> list:
        return [
            {
                "basis": self.frame.labels[i],
                "z_power": k,
                "coeff": self.terms[(i, k)].to_json(),
            }
            for (i, k) in sorted(self.terms)
        ]


def _struct(frame: ReductionFrame):
    got = getattr(frame, "_loop_struct", None)
    if got is None:
        n = len(frame.basis)
        got = [[None] * n for _ in range(n)]
        for i in range(n):
            for j in range(n):
                co = frame.to_adapted(
                    frame.algebra.bracket(frame.basis[i], frame.basis[j]))
                entries = [(r, c) for r, c in enumerate(co) if c]
                got[i][j] = entries or None
        frame._loop_struct = got
    return got


def loop_const(frame: ReductionFrame, ctx: Context, vec, zpow: int = 0) -> LoopElement:
    out = LoopElement(frame, ctx)
    for i, c in enumerate(frame.to_adapted(vec)):
        if c:
            out.add_term(i, zpow, ctx.const(c))
    return out


def loop_fzs(frame: ReductionFrame, ctx: Context) -> LoopElement:
    return loop_const(frame, ctx, frame.setup.f, 0) + loop_const(
        frame, ctx, frame.s, 1)


def build_q(frame: ReductionFrame, projected: bool = True) -> LoopElement:
    """q = sum_i q^i (x) q_i over the coordinate basis and its dual."""
    ctx = frame.w_ctx if projected else frame.coord_ctx
    out = LoopElement(frame, ctx)
    for pos, b in enumerate(frame.coord_idx):
        dual = frame.dual_basis[b]
        coeff = frame.coord_ctx.gen(pos)
        if projected:
            coeff = frame.pi(coeff)
        if not coeff:
            continue
        for i, c in enumerate(frame.to_adapted(dual)):
            if c:
                out.add_term(i, 0, coeff.scale(c))
    return out


# ---------------------------------------------------------------------------
# the kernel / image decomposition of ad(f + zs)
# ---------------------------------------------------------------------------


class HDecomposition:
    """Per-degree kernel/image split of ad(f+zs) on loop-degree slices."""

    def __init__(self, frame: ReductionFrame, min_deg: Fraction, max_deg: Fraction):
        if not frame.setup.is_semisimple(
            linalg.vec_add(frame.setup.f, frame.s)
        ):
            raise NotSemisimple("f + s is not semisimple")
        self.frame = frame
        self.zd = z_degree(frame)
        self.min_deg = Fraction(min_deg)
        self.max_deg = Fraction(max_deg)
        self.slices: dict[Fraction, list[tuple[int, int]]] = {}
        self._mats: dict[Fraction, list[list[Scalar]]] = {}
        self.h_basis: dict[Fraction, list[list[Scalar]]] = {}
        self._p_h: dict[Fraction, list[list[Scalar]]] = {}
        self._inv: dict[Fraction, list[list[Scalar]]] = {}
        deg = self.min_deg
        degs = []
        while deg <= self.max_deg + 2:
            degs.append(deg)
            deg += Fraction(1, 2)
        for d in degs:
            self.slices[d] = self._slice(d)
        for d in degs:
            self._mats[d] = self._ad_matrix(d)
        for d in degs[:-2]:
            self._split(d)

    def _slice(self, deg: Fraction) -> list[tuple[int, int]]:
        out = []
        for i in range(len(self.frame.basis)):
            num = self.frame.eig_of[i] - deg
            k = num / (-self.zd)
            if k.denominator == 1:
                out.append((i, int(k)))
        return out

    def _ad_matrix(self, deg: Fraction):
        """Matrix of ad(f+zs): slice(deg) -> slice(deg - 1) in slice coords."""
        fr = self.frame
        src = self.slices[deg]
        dst = self.slices.get(deg - 1)
        if dst is None:
            dst = self._slice(deg - 1)
            self.slices[deg - 1] = dst
        pos = {key: p for p, key in enumerate(dst)}
        ring = fr.ring
        cols = []
        for (i, k) in src:
            col = [ring.zero()] * len(dst)
            for vec, dz in ((fr.setup.f, 0), (fr.s, 1)):
                br = fr.algebra.bracket(vec, fr.basis[i])
                for r, c in enumerate(fr.to_adapted(br)):
                    if c:
                        col[pos[(r, k + dz)]] = col[pos[(r, k + dz)]] + c
            cols.append(col)
        return linalg.transpose(cols) if cols else []

    def _split(self, deg: Fraction):
        fr = self.frame
        ring = fr.ring
        m = len(self.slices[deg])
        if m == 0:
            self.h_basis[deg] = []
            self._p_h[deg] = []
            self._inv[deg] = []
            return
        M = self._mats[deg]
        K = linalg.kernel(M, ring, m) if M else [
            [ring.one() if j == i else ring.zero() for j in range(m)]
            for i in range(m)
        ]
        Mnext = self._mats[deg + 1]
        msrc = len(self.slices[deg + 1])
        im_cols, im_src = [], []
        if Mnext:
            for j in range(msrc):
                col = [Mnext[r][j] for r in range(m)]
                if linalg.rank(im_cols + [col], ring) > len(im_cols):
                    im_cols.append(col)
                    im_src.append(j)
        basis_mat = linalg.transpose([list(v) for v in K] + im_cols)
        if len(K) + len(im_cols) != m:
            raise NotSemisimple(
                f"slice at degree {deg} does not split (kernel + image)")
        T = linalg.inverse(basis_mat, ring)
        self.h_basis[deg] = K
        # projection onto the kernel part along the image
        Pk = [
            [
                sum((K[a][i] * T[a][j] for a in range(len(K))), ring.zero())
                for j in range(m)
            ]
            for i in range(m)
        ]
        self._p_h[deg] = Pk
        # inverse of ad(f+zs): image coords at deg -> hperp part of slice(deg+1)
        self._inv[deg] = (im_src, T)

    def h_project(self, deg: Fraction, coeffs: list) -> list:
        """Kernel component of a slice coefficient vector (DiffPoly entries)."""
        P = self._p_h[deg]
        z = self._zero_like(coeffs)
        return [
            _lin_comb(P[i], coeffs, z) for i in range(len(coeffs))
        ]

    def _zero_like(self, coeffs):
        for c in coeffs:
            return c.ctx.zero()
        return None

    def solve_for(self, deg: Fraction, coeffs: list) -> list:
        """u in slice(deg+1) with [f+zs, u] = perp part of coeffs.

        The result is normalized to the hperp part of slice(deg+1).
        """
        if deg not in self._inv:
            raise WindowOverflow(
                f"degree {deg} outside the solved window; extend max_deg")
        im_src, T = self._inv[deg]
        nk = len(self.h_basis[deg])
        z = self._zero_like(coeffs)
        msrc = len(self.slices[deg + 1])
        out = [z] * msrc
        for a, j in enumerate(im_src):
            c = _lin_comb(T[nk + a], coeffs, z)
            if c:
                out[j] = out[j] + c
        # remove any kernel component at degree deg + 1
        Pn = self._p_h.get(deg + 1)
        if Pn is None:
            raise WindowOverflow(
                f"degree {deg + 1} outside the solved window; extend max_deg")
        kp = [_lin_comb(Pn[i], out, z) for i in range(msrc)]
        return [o - k for o, k in zip(out, kp)]

    # -- conversions -------------------------------------------------------

    def to_loop(self, deg: Fraction, coeffs: list, ctx: Context) -> LoopElement:
        out = LoopElement(self.frame, ctx)
        for (key, p) in zip(self.slices[deg], coeffs):
            if p:
                out.add_term(key[0], key[1], p)
        return out

    def coeffs_of(self, deg: Fraction, el: LoopElement) -> list:
        z = el.ctx.zero()
        got = dict(el.terms)
        out = []
        for key in self.slices[deg]:
            out.append(got.pop(key, z))
        if any(self.degree_ok(k, deg) for k in got):
            raise WindowOverflow(f"element leaves the degree-{deg} slice")
        return out

    def degree_ok(self, key, deg) -> bool:
        i, k = key
        return self.frame.eig_of[i] + self.zd * k == deg


def _lin_comb(row, coeffs, zero):
    acc = zero
    for c, p in zip(row, coeffs):
        if c and p:
            acc = acc + p.scale(c)
    return acc


# ---------------------------------------------------------------------------
# the dressing recursion
# ---------------------------------------------------------------------------


def exp_ad_apply(U: LoopElement, D: LoopElement, max_deg: Fraction) -> LoopElement:
    """Loop part of exp(ad U)(d + D) - d, truncated above max_deg.

    ad U acts on d by [U, d] = -dU/dx; the series terminates inside the
    window because U has strictly positive loop degree.
    """
    base = (U.bracket(D, max_deg) - U.derivative()).trim(max_deg)
    acc = D.trim(max_deg) + base
    cur = base
    n = 2
    while cur:
        cur = U.bracket(cur, max_deg).scale(Fraction(1, n))
        acc = acc + cur
        n += 1
    return acc


def solve_dressing(
    frame: ReductionFrame,
    max_deg,
    projected: bool = True,
    dec: HDecomposition | None = None,
):
    """Solve the dressing equation up to loop degree max_deg.

    Returns (U_parts, h_parts, dec): U_parts[j] and h_parts[j] are homogeneous
    loop elements keyed by their degree, with U in hperp and h in ker.
    """
    max_deg = Fraction(max_deg)
    if dec is None:
        dec = HDecomposition(frame, Fraction(-1), max_deg)
    ctx = frame.w_ctx if projected else frame.coord_ctx
    D = loop_fzs(frame, ctx) + build_q(frame, projected)
    fzs = loop_fzs(frame, ctx)

    U_parts: dict[Fraction, LoopElement] = {}
    h_parts: dict[Fraction, LoopElement] = {}
    deg = Fraction(-1, 2)
    Usum = LoopElement(frame, ctx)
    while deg <= max_deg:
        if dec.slices.get(deg):
            current = exp_ad_apply(Usum, D, deg)
            R = (current - fzs).component(deg)
            coeffs = dec.coeffs_of(deg, R)
            h_co = dec.h_project(deg, coeffs)
            h_el = dec.to_loop(deg, h_co, ctx)
            if h_el:
                h_parts[deg] = h_el
            u_co = dec.solve_for(deg, coeffs)
            u_el = dec.to_loop(deg + 1, u_co, ctx)
            if u_el:
                U_parts[deg + 1] = u_el
                Usum = Usum + u_el
        deg += Fraction(1, 2)
    return U_parts, h_parts, dec


def dressing_defect(
    frame: ReductionFrame,
    U_parts: dict,
    h_parts: dict,
    max_deg,
    projected: bool = True,
) -> LoopElement:
    """Full-exponential re-expansion oracle.

    Applies exp(ad U) with the complete U to d + (f+zs) + q in one shot and
    subtracts d + (f+zs) + sum(h); exact zero certifies the incremental solve.
    """
    max_deg = Fraction(max_deg)
    ctx = frame.w_ctx if projected else frame.coord_ctx
    D = loop_fzs(frame, ctx) + build_q(frame, projected)
    U = LoopElement(frame, ctx)
    for u in U_parts.values():
        U = U + u
    result = exp_ad_apply(U, D, max_deg)
    want = loop_fzs(frame, ctx)
    for h in h_parts.values():
        want = want + h
    return (result - want.trim(max_deg)).trim(max_deg)


# ---------------------------------------------------------------------------
# centers, densities, flows
# ---------------------------------------------------------------------------


def center_of_h(frame: ReductionFrame, dec: HDecomposition,
                degrees: list) -> dict:
    """Degree-wise center of ker(ad(f+zs)) within the decomposition window."""
    ring = frame.ring
    ctx = frame.w_ctx
    all_h: list[LoopElement] = []
    for d, K in sorted(dec.h_basis.items()):
        for v in K:
            all_h.append(dec.to_loop(d, [ctx.const(c) for c in v], ctx))
    out = {}
    for d in degrees:
        d = Fraction(d)
        K = dec.h_basis.get(d, [])
        if not K:
            out[d] = []
            continue
        cands = [dec.to_loop(d, [ctx.const(c) for c in v], ctx) for v in K]
        rows = []
        for w in all_h:
            brs = [c.bracket(w) for c in cands]
            keys = sorted({key for b in brs for key in b.terms})
            for key in keys:
                rows.append([
                    b.terms.get(key, ctx.zero()).const_term() for b in brs
                ])
        coefs = linalg.kernel(rows, ring, len(cands)) if rows else [
            [ring.one() if j == i else ring.zero() for j in range(len(cands))]
            for i in range(len(cands))
        ]
        basis = []
        for co in coefs:
            el = LoopElement(frame, ctx)
            for c, cand in zip(co, cands):
                el = el + cand.scale(c)
            basis.append(el)
        out[d] = basis
    return out


def loop_from_zmap(frame: ReductionFrame, ctx: Context, zmap: dict) -> LoopElement:
    out = LoopElement(frame, ctx)
    for k, vec in zmap.items():
        out = out + loop_const(frame, ctx, vec, k)
    return out


def check_central(frame: ReductionFrame, dec: HDecomposition, a_z: dict) -> bool:
    ctx = frame.w_ctx
    el = loop_from_zmap(frame, ctx, a_z)
    for d, K in dec.h_basis.items():
        for v in K:
            w = dec.to_loop(d, [ctx.const(c) for c in v], ctx)
            if el.bracket(w):
                return False
    # membership of a(z) itself in ker ad(f+zs)
    return not loop_fzs(frame, ctx).bracket(el)


def conserved_densities(
    frame: ReductionFrame,
    h_parts: dict,
    a_z: dict,
    n_max: int | None = None,
    dec: HDecomposition | None = None,
) -> list[DiffPoly]:
    """Densities g_n from int g(z) = int (a(z) x 1 | h(z)), in V(g^f) coordinates.

    a_z maps z powers to g-vectors; the leading power is read off as the top
    nonzero z power of the pairing.
    """
    if dec is not None and not check_central(frame, dec, a_z):
        raise InvalidCenter("a(z) does not lie in the center of ker ad(f+zs)")
    total: dict[int, DiffPoly] = {}
    for h in h_parts.values():
        for zp, p in h.pair_with(a_z).items():
            got = total.get(zp)
            got = p if got is None else got + p
            if got:
                total[zp] = got
            else:
                total.pop(zp, None)
    if not total:
        return []
    top = max(total)
    ns = range(0, (top - min(total)) + 1 if n_max is None else n_max + 1)
    zero = frame.w_ctx.zero()
    return [total.get(top - n, zero) for n in ns]


def hierarchy_equation(
    frame: ReductionFrame,
    gens,
    density: DiffPoly,
    w_elt: DiffPoly,
    use_k: bool = False,
) -> DiffPoly:
    """dw/dt = {g_n lambda w}_H at lambda = 0, in V(g^f) coordinates."""
    G = gens.pi_inverse(density)
    h, k = frame.w_bracket(G, w_elt)
    return frame.pi((k if use_k else h).at_zero())


def verify_lenard_magri(frame: ReductionFrame, gens, densities: list) -> list[str]:
    """The recursion int{g_n w}_H = int{g_n+1 w}_K, K-exactness of g_0,
    and pairwise involutivity in both structures."""
    bad = []
    named = gens.all_generators()
    zero = frame.w_ctx.zero()
    for name, w in named:
        k0 = hierarchy_equation(frame, gens, densities[0], w, use_k=True)
        if not functional_equal(k0, zero):
            bad.append(f"int({{g_0 , {name}}}_K) != 0")
    for n in range(len(densities) - 1):
        for name, w in named:
            lhs = hierarchy_equation(frame, gens, densities[n], w)
            rhs = hierarchy_equation(frame, gens, densities[n + 1], w, use_k=True)
            if not functional_equal(lhs, rhs):
                bad.append(f"recursion n={n} fails on {name}")
    lifted = [gens.pi_inverse(g) for g in densities]
    for m in range(len(densities)):
        for n in range(m, len(densities)):
            h, k = frame.w_bracket(lifted[m], lifted[n])
            if not functional_equal(frame.pi(h.at_zero()), zero):
                bad.append(f"H-involutivity ({m},{n})")
            if not functional_equal(frame.pi(k.at_zero()), zero):
                bad.append(f"K-involutivity ({m},{n})")
    return bad


def involution_cross(frame: ReductionFrame, gens, da: list, db: list) -> list[str]:
    """Involutivity across two density families (both structures)."""
    bad = []
    zero = frame.w_ctx.zero()
    for m, gm in enumerate(da):
        Gm = gens.pi_inverse(gm)
        for n, gn in enumerate(db):
            h, k = frame.w_bracket(Gm, gens.pi_inverse(gn))
            if not functional_equal(frame.pi(h.at_zero()), zero):
                bad.append(f"H cross-involutivity ({m},{n})")
            if not functional_equal(frame.pi(k.at_zero()), zero):
                bad.append(f"K cross-involutivity ({m},{n})")
    return bad


def reduce_mod_jk(frame: ReductionFrame, p: DiffPoly) -> DiffPoly:
    """Quotient by the ideal of K-central weight-1 generators.

    A weight-1 generator a is K-central iff [a, s] = 0; those generators and
    all their derivatives are set to zero (V(g^f) coordinates).  For s = e
    this kills all of g_0^f.
    """
    images = []
    for pos, b in enumerate(frame.w_idx):
        if frame.eig_of[b] == 0 and not any(
            frame.algebra.bracket(frame.basis[b], frame.s)
        ):
            images.append(frame.w_ctx.zero())
        else:
            images.append(frame.w_ctx.gen(pos))
    return p.map_generators(frame.w_ctx, images)
