"""The lambda-bracket engine.

The affine Poisson vertex algebra bracket {a_l b} = [a,b] + (a|b)l + z(s|[a,b])
is stored on generators as a pair (H, K) with {.}_z = H - z K; the master
formula extends any such generator table to the whole differential polynomial
algebra.  A ReductionFrame packages the coordinate spaces entering the
Hamiltonian reduction: the full algebra V(g), the coordinate ring V(g_<=1/2)
(or V(p) for an isotropic choice), the twist map rho, and the quotient
projection pi onto V(g^f).
"""

from __future__ import annotations

from fractions import Fraction
from . import linalg
from .diffpoly import Context, DiffPoly, LambdaPoly, subst_minus_lambda_d
from .lie import GradedSetup, GradeMismatch, MINIMAL, darboux_split


class NotInW(ValueError):
    pass


class ZDependence(ArithmeticError):
    """The rho-twisted action picked up a z-part; the twist is misplaced."""


class BracketTable:
    """Generator lambda-brackets, entry (i, j) = {u_i lambda u_j} = H - z K."""

    def __init__(self, ctx: Context):
        self.ctx = ctx
        self.entries: dict[tuple[int, int], tuple[LambdaPoly, LambdaPoly]] = {}

    def set(self, i: int, j: int, h: LambdaPoly, k: LambdaPoly):
        if h or k:
            self.entries[(i, j)] = (h, k)

    def get(self, i: int, j: int) -> tuple[LambdaPoly, LambdaPoly]:
        z = LambdaPoly.zero(self.ctx)
        return self.entries.get((i, j), (z, z))


# ---------------------------------------------------------------------------
# master formula
# ---------------------------------------------------------------------------


def _apply_entry(entry: LambdaPoly, arg: LambdaPoly) -> LambdaPoly:
    """T(d + lambda) applied to arg: sum_p T_p (d+lambda)^p arg."""
    out = LambdaPoly.zero(arg.ctx)
    power = arg
    for p, cp in enumerate(entry.coeffs):
        if p:
            power = power.apply_d_plus_lambda()
        if cp:
            out = out + power.mul_poly(cp)
    return out


def master_bracket(
    table: BracketTable, g: DiffPoly, h: DiffPoly
) -> tuple[LambdaPoly, LambdaPoly]:
    """{g_lambda h} from the generator table; returns the (H, K) parts."""
    ctx = table.ctx
    if g.ctx != ctx or h.ctx != ctx:
        raise ValueError("arguments must live in the table's context")
    zero = LambdaPoly.zero(ctx)
    if not g or not h:
        return zero, zero

    # P_i = sum_m (-lambda-d)^m dg/du_i^(m)
    P: dict[int, LambdaPoly] = {}
    for i in sorted(g.gens_used()):
        acc = zero
        for m in range(g.max_order(i) + 1):
            p = g.partial(i, m)
            if not p:
                continue
            term = LambdaPoly.of(p)
            for _ in range(m):
                term = -(term.apply_d_plus_lambda())
            acc = acc + term
        if acc:
            P[i] = acc

    # R_j = sum_i {u_i lambda u_j}(d+lambda) P_i, per part
    h_gens = sorted(h.gens_used())
    R_H: dict[int, LambdaPoly] = {}
    R_K: dict[int, LambdaPoly] = {}
    for j in h_gens:
        accH = accK = zero
        for i, Pi in P.items():
            eh, ek = table.get(i, j)
            if eh:
                accH = accH + _apply_entry(eh, Pi)
            if ek:
                accK = accK + _apply_entry(ek, Pi)
        if accH:
            R_H[j] = accH
        if accK:
            R_K[j] = accK

    outH = outK = zero
    for j in h_gens:
        for which, R, out_is_h in ((0, R_H, True), (1, R_K, False)):
            Rj = R.get(j)
            if Rj is None:
                continue
            power = Rj
            for n in range(h.max_order(j) + 1):
                if n:
                    power = power.apply_d_plus_lambda()
                dh = h.partial(j, n)
                if dh:
                    contrib = power.mul_poly(dh)
                    if out_is_h:
                        outH = outH + contrib
                    else:
                        outK = outK + contrib
    return outH, outK


# ---------------------------------------------------------------------------
# reduction frames
# ---------------------------------------------------------------------------


class ReductionFrame:
    """Coordinate data of one Hamiltonian reduction W(g, f; l).

    Holds the graded setup, the element s defining the z-deformation, the
    generator contexts for V(g), the coordinate ring and V(g^f), and the
    generator-level bracket tables.
    """

    def __init__(self, setup: GradedSetup, s: list, isotropic: bool = False):
        self.setup = setup
        self.algebra = setup.algebra
        self.ring = setup.ring
        self.s = list(s)
        self.isotropic = isotropic

        if isotropic:
            if setup.kind != MINIMAL:
                raise GradeMismatch("isotropic variant needs a minimal grading")
            l_side, lp_side = darboux_split(setup, seed=self._seed_for_l())
            self.l_pairs = (l_side, lp_side)
            basis, labels, eig = [], [], []
            for i, v in enumerate(setup.basis):
                if setup.eig_of[i] == Fraction(1, 2):
                    continue
                basis.append(v)
                labels.append(setup.labels[i])
                eig.append(setup.eig_of[i])
            for k, v in enumerate(l_side):
                basis.append(v)
                labels.append(f"l{k + 1}")
                eig.append(Fraction(1, 2))
            for k, v in enumerate(lp_side):
                basis.append(v)
                labels.append(f"m{k + 1}")
                eig.append(Fraction(1, 2))
            order = sorted(range(len(basis)), key=lambda i: (eig[i], 0))
            self.basis = [basis[i] for i in order]
            self.labels = [labels[i] for i in order]
            self.eig_of = [eig[i] for i in order]
            self._l_indices = [
                i for i, lb in enumerate(self.labels) if lb.startswith("l")
            ]
            self._lp_indices = [
                i for i, lb in enumerate(self.labels) if lb.startswith("m")
            ]
        else:
            self.basis = list(setup.basis)
            self.labels = list(setup.labels)
            self.eig_of = list(setup.eig_of)
            self._l_indices = []
            self._lp_indices = []

        A = linalg.transpose(self.basis)
        self._orig_from_adapted = A
        self._adapted_from_orig = linalg.inverse(A, self.ring)

        half = Fraction(1, 2)
        n = len(self.basis)
        if isotropic:
            self.coord_idx = [
                i for i in range(n)
                if self.eig_of[i] <= 0 or i in self._lp_indices
            ]
            self.ann_idx = [
                i for i in range(n)
                if self.eig_of[i] >= 1 or i in self._l_indices
            ]
        else:
            self.coord_idx = [i for i in range(n) if self.eig_of[i] <= half]
            self.ann_idx = [i for i in range(n) if self.eig_of[i] >= half]

        gf_set = self._gf_index_set()
        self.w_idx = [i for i in self.coord_idx if i in gf_set]

        weights_full = [Fraction(1) - self.eig_of[i] for i in range(n)]
        self.full_ctx = Context(self.ring, self.labels, weights_full)
        self.coord_ctx = Context(
            self.ring,
            [self.labels[i] for i in self.coord_idx],
            [weights_full[i] for i in self.coord_idx],
        )
        self.w_ctx = Context(
            self.ring,
            [self.labels[i] for i in self.w_idx],
            [weights_full[i] for i in self.w_idx],
        )

        self._coord_pos = {b: p for p, b in enumerate(self.coord_idx)}
        self._w_pos = {b: p for p, b in enumerate(self.w_idx)}
        gram = [
            [self.algebra.pair(u, v) for v in self.basis] for u in self.basis
        ]
        ginv = linalg.inverse(gram, self.ring)
        self.dual_basis = [
            [
                sum(
                    (ginv[k][j] * self.basis[k][i] for k in range(n)),
                    self.ring.zero(),
                )
                for i in range(self.algebra.dim)
            ]
            for j in range(n)
        ]
        self._build_maps()
        self.full_table = self._build_table(full=True)
        self.w_table = self._build_table(full=False)

    # -- construction helpers -------------------------------------------

    def _seed_for_l(self):
        return self.s if any(self.s) else None

    def _gf_index_set(self) -> set:
        out = set()
        for i in range(len(self.basis)):
            if self.eig_of[i] < 0:
                out.add(i)
            elif self.eig_of[i] == 0 and linalg.vec_is_zero(
                self.algebra.bracket(self.setup.f, self.basis[i])
            ):
                out.add(i)
        return out

    def to_adapted(self, v: list) -> list:
        return linalg.mat_vec(self._adapted_from_orig, v, self.ring)

    def _build_maps(self):
        g = self.algebra
        # rho on full generators: pi_coord(b) + (f|b)
        self._rho_images = []
        for i in range(len(self.basis)):
            const = g.pair(self.setup.f, self.basis[i])
            if i in self._coord_pos:
                img = self.coord_ctx.gen(self._coord_pos[i])
                if const:
                    img = img + self.coord_ctx.const(const)
            else:
                img = self.coord_ctx.const(const)
            self._rho_images.append(img)
        # pi on coordinate generators: quotient onto V(g^f)
        self._pi_images = []
        for i in self.coord_idx:
            if i in self._w_pos:
                self._pi_images.append(self.w_ctx.gen(self._w_pos[i]))
            elif self.eig_of[i] == 0:
                sh = self.setup.sharp(self.basis[i])
                co = self.to_adapted(sh)
                self._pi_images.append(
                    self.w_ctx.linear(
                        [co[b] for b in self.w_idx]))
            else:
                self._pi_images.append(self.w_ctx.zero())

    def _build_table(self, full: bool) -> BracketTable:
        g = self.algebra
        idx = range(len(self.basis)) if full else self.coord_idx
        ctx = self.full_ctx if full else self.coord_ctx
        table = BracketTable(ctx)
        for i in idx:
            for j in idx:
                br = g.bracket(self.basis[i], self.basis[j])
                co = self.to_adapted(br)
                if full:
                    lin = ctx.linear(co)
                else:
                    lin = ctx.linear([co[b] for b in self.coord_idx])
                    const = g.pair(self.setup.f, br)
                    if const:
                        lin = lin + ctx.const(const)
                pairing = g.pair(self.basis[i], self.basis[j])
                h = LambdaPoly(ctx, [lin, ctx.const(pairing)])
                kconst = -g.pair(self.s, br)
                k = LambdaPoly(ctx, [ctx.const(kconst)])
                table.set(
                    i if full else self._coord_pos[i],
                    j if full else self._coord_pos[j],
                    h,
                    k,
                )
        return table

    # -- element builders --------------------------------------------------

    def full_lin(self, v: list) -> DiffPoly:
        return self.full_ctx.linear(self.to_adapted(v))

    def coord_lin(self, v: list, order: int = 0) -> DiffPoly:
        """v in g_<=1/2 (resp. p) as a linear coordinate polynomial."""
        co = self.to_adapted(v)
        for i, c in enumerate(co):
            if c and i not in self._coord_pos:
                raise GradeMismatch("vector leaves the coordinate subspace")
        return self.coord_ctx.linear([co[b] for b in self.coord_idx], order)

    def w_lin(self, v: list, order: int = 0) -> DiffPoly:
        co = self.to_adapted(v)
        for i, c in enumerate(co):
            if c and i not in self._w_pos:
                raise GradeMismatch("vector leaves g^f")
        return self.w_ctx.linear([co[b] for b in self.w_idx], order)

    # -- the reduction maps -------------------------------------------------

    def rho(self, p: DiffPoly) -> DiffPoly:
        return p.map_generators(self.coord_ctx, self._rho_images)

    def pi(self, p: DiffPoly) -> DiffPoly:
        return p.map_generators(self.w_ctx, self._pi_images)

    def embed_coord(self, p: DiffPoly) -> DiffPoly:
        images = [self.full_ctx.gen(i) for i in self.coord_idx]
        return p.map_generators(self.full_ctx, images)

    def embed_w(self, p: DiffPoly) -> DiffPoly:
        """V(g^f) into the coordinate ring along the subspace inclusion."""
        images = [self.coord_ctx.gen(self._coord_pos[i]) for i in self.w_idx]
        return p.map_generators(self.coord_ctx, images)

    def rho_action(self, a: list, p: DiffPoly) -> LambdaPoly:
        """a^rho_lambda p = rho {a_lambda p}_z for a annihilating generator."""
        co = self.to_adapted(a)
        for i, c in enumerate(co):
            if c and i not in self.ann_idx:
                raise GradeMismatch("action vector must lie in the annihilator")
        h, k = master_bracket(
            self.full_table, self.full_lin(a), self.embed_coord(p))
        if k:
            raise ZDependence("rho-twisted action depends on z")
        return h.map_coeffs(self.rho, self.coord_ctx)

    def is_in_w(self, p: DiffPoly) -> bool:
        return all(
            not self.rho_action(self.basis[i], p) for i in self.ann_idx
        )

    def w_bracket(
        self, p: DiffPoly, q: DiffPoly, check: bool = False
    ) -> tuple[LambdaPoly, LambdaPoly]:
        if check and not (self.is_in_w(p) and self.is_in_w(q)):
            raise NotInW("w_bracket arguments must pass membership")
        return master_bracket(self.w_table, p, q)


def affine_bracket(frame: ReductionFrame, a: list, b: list):
    """{a_lambda b}_z = [a,b] + (a|b) lambda + z (s|[a,b]) for g-vectors.

    Returned as the (H, K) pair with {.}_z = H - z K, coefficients linear in
    the full coordinate ring.
    """
    return master_bracket(frame.full_table, frame.full_lin(a),
                          frame.full_lin(b))


# ---------------------------------------------------------------------------
# PVA axiom checking
# ---------------------------------------------------------------------------


def skew_defect(table: BracketTable, g: DiffPoly, h: DiffPoly):
    """{g_l h} + {h_-l-d g} per part; zero iff skew-symmetry holds."""
    gh_H, gh_K = master_bracket(table, g, h)
    hg_H, hg_K = master_bracket(table, h, g)
    return (
        gh_H + subst_minus_lambda_d(hg_H),
        gh_K + subst_minus_lambda_d(hg_K),
    )


BiLambda = dict  # {(lambda_power, mu_power): DiffPoly}


def _bi_add(a: BiLambda, b: BiLambda) -> BiLambda:
    out = dict(a)
    for k, v in b.items():
        w = out.get(k)
        w = v if w is None else w + v
        if w:
            out[k] = w
        else:
            out.pop(k, None)
    return out


def _bi_neg(a: BiLambda) -> BiLambda:
    return {k: -v for k, v in a.items()}


def _binom_rows(n: int) -> list[list[int]]:
    rows = [[1]]
    for _ in range(n):
        prev = rows[-1]
        rows.append([1] + [prev[i] + prev[i + 1] for i in range(len(prev) - 1)] + [1])
    return rows


def jacobi_defect(
    table: BracketTable,
    g1: DiffPoly,
    g2: DiffPoly,
    h: DiffPoly,
    parts: tuple[int, int] = (0, 0),
) -> BiLambda:
    """Jacobi defect {g1 l {g2 m h}} - {g2 m {g1 l h}} - {{g1 l g2} l+m h}.

    parts = (outer, inner) selects the H (0) or K (1) structure in each slot;
    symmetrised over the two orders so (0, 1) is the H/K compatibility check.
    """
    zero: BiLambda = {}

    def outer_on_lambda(first: DiffPoly, inner: LambdaPoly, part: int,
                        mu_slot: bool) -> BiLambda:
        out: BiLambda = {}
        for k, ck in enumerate(inner.coeffs):
            if not ck:
                continue
            res = master_bracket(table, first, ck)[part]
            for a, c in enumerate(res.coeffs):
                if c:
                    key = (a, k) if mu_slot else (a + k, 0)
                    out = _bi_add(out, {key: c})
        return out

    def shifted_bracket(inner: LambdaPoly, part: int) -> BiLambda:
        out: BiLambda = {}
        for k, ck in enumerate(inner.coeffs):
            if not ck:
                continue
            res = master_bracket(table, ck, h)[part]
            for m, c in enumerate(res.coeffs):
                if not c:
                    continue
                row = _binom_rows(m)[m]
                for a in range(m + 1):
                    out = _bi_add(out, {(a + k, m - a): c.scale(row[a])})
        return out

    po, pi_ = parts
    combos = [(po, pi_)] if po == pi_ else [(po, pi_), (pi_, po)]
    total: BiLambda = zero
    for outer, inner in combos:
        g2h = master_bracket(table, g2, h)[inner]
        t1 = outer_on_lambda(g1, g2h, outer, mu_slot=True)
        g1h = master_bracket(table, g1, h)[inner]
        t2 = outer_on_lambda(g2, g1h, outer, mu_slot=True)
        # swap lambda and mu in t2
        t2 = {(b, a): v for (a, b), v in t2.items()}
        g1g2 = master_bracket(table, g1, g2)[inner]
        t3 = shifted_bracket(g1g2, outer)
        total = _bi_add(total, _bi_add(t1, _bi_add(_bi_neg(t2), _bi_neg(t3))))
    return total


def check_pva_axioms(
    table: BracketTable,
    seed: int = 1729,
    samples: int = 40,
    gens_cap: int | None = None,
) -> list[str]:
    """Generator-level skew/Jacobi scan plus randomized composite checks."""
    import random

    ctx = table.ctx
    n = ctx.ngens if gens_cap is None else min(ctx.ngens, gens_cap)
    bad: list[str] = []
    gens = [ctx.gen(i) for i in range(n)]
    for i in range(n):
        for j in range(i, n):
            dh, dk = skew_defect(table, gens[i], gens[j])
            if dh or dk:
                bad.append(f"skew ({ctx.labels[i]},{ctx.labels[j]})")
    for i in range(n):
        for j in range(n):
            for k in range(n):
                for parts in ((0, 0), (1, 1), (0, 1)):
                    if jacobi_defect(table, gens[i], gens[j], gens[k], parts):
                        bad.append(
                            "jacobi "
                            f"({ctx.labels[i]},{ctx.labels[j]},{ctx.labels[k]})"
                            f" parts={parts}"
                        )
    rng = random.Random(seed)
    for t in range(samples):
        g1 = random_element(ctx, rng)
        g2 = random_element(ctx, rng)
        # sesquilinearity
        lhsH, lhsK = master_bracket(table, g1.total_derivative(), g2)
        rhsH, rhsK = master_bracket(table, g1, g2)
        if lhsH + rhsH.shift() or lhsK + rhsK.shift():
            bad.append(f"sesquilinearity-left sample {t}")
        lhsH, lhsK = master_bracket(table, g1, g2.total_derivative())
        if lhsH - rhsH.apply_d_plus_lambda() or lhsK - rhsK.apply_d_plus_lambda():
            bad.append(f"sesquilinearity-right sample {t}")
        # left Leibniz {g1 (g2*g3)} = {g1 g2} g3 + {g1 g3} g2
        g3 = random_element(ctx, rng)
        lhsH, lhsK = master_bracket(table, g1, g2 * g3)
        bH, bK = master_bracket(table, g1, g2)
        cH, cK = master_bracket(table, g1, g3)
        if lhsH - (bH.mul_poly(g3) + cH.mul_poly(g2)) or lhsK - (
            bK.mul_poly(g3) + cK.mul_poly(g2)
        ):
            bad.append(f"leibniz sample {t}")
        dh, dk = skew_defect(table, g1, g2)
        if dh or dk:
            bad.append(f"skew sample {t}")
    return bad


def random_element(ctx: Context, rng, max_degree: int = 2,
                   max_order: int = 2, terms: int = 3) -> DiffPoly:
    """Seeded random differential polynomial with small integer coefficients."""
    out = ctx.zero()
    for _ in range(rng.randint(1, terms)):
        deg = rng.randint(0, max_degree)
        mono = ctx.one()
        for _ in range(deg):
            mono = mono * ctx.gen(
                rng.randrange(ctx.ngens), rng.randint(0, max_order))
        out = out + mono.scale(rng.choice([-2, -1, 1, 2]))
    return out
