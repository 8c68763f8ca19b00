"""Finite-dimensional Lie algebras over an exact scalar field.

Provides sl_n / sp_n with their trace forms, sl2-triple completion through
a nilpotent element, the ad(x)-eigenspace grading with all cached dual
bases, projections, Jordan products on the +-1 eigenspaces of a short
nilpotent, and embeddable elements of the half eigenspace.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Sequence

from . import linalg
from .scalars import ParamRing, Q, Scalar, ScalarLike

Vec = list  # coordinate vector over the algebra's ordered basis


class InvalidDimension(ValueError):
    pass


class NotNilpotent(ValueError):
    pass


class WrongKind(ValueError):
    pass


class GradeMismatch(ValueError):
    pass


class SingularPairing(ValueError):
    pass


class LieAlgebra:
    """Ordered basis, sparse structure constants and an invariant form."""

    def __init__(self, ring: ParamRing, labels: Sequence[str],
                 brackets: list[list[Vec]], form: list[list[Scalar]]):
        self.ring = ring
        self.labels = tuple(labels)
        self.dim = len(labels)
        self.brackets = brackets  # brackets[i][j] = [e_i, e_j] as a Vec
        self.form = form

    # -- bilinear operations ------------------------------------------

    def zero_vec(self) -> Vec:
        return linalg.zeros(self.ring, self.dim)

    def basis_vec(self, i: int) -> Vec:
        v = self.zero_vec()
        v[i] = self.ring.one()
        return v

    def bracket(self, u: Vec, v: Vec) -> Vec:
        out = self.zero_vec()
        for i, ci in enumerate(u):
            if not ci:
                continue
            for j, cj in enumerate(v):
                if not cj:
                    continue
                w = self.brackets[i][j]
                c = ci * cj
                out = [a + c * b for a, b in zip(out, w)]
        return out

    def pair(self, u: Vec, v: Vec) -> Scalar:
        acc = self.ring.zero()
        for i, ci in enumerate(u):
            if not ci:
                continue
            row = self.form[i]
            for j, cj in enumerate(v):
                if cj and row[j]:
                    acc = acc + ci * cj * row[j]
        return acc

    def ad(self, u: Vec) -> list[list[Scalar]]:
        """Matrix of ad(u) acting on coordinate columns."""
        cols = [self.bracket(u, self.basis_vec(j)) for j in range(self.dim)]
        return [[cols[j][i] for j in range(self.dim)] for i in range(self.dim)]

    def killing(self, u: Vec, v: Vec) -> Scalar:
        au, av = self.ad(u), self.ad(v)
        acc = self.ring.zero()
        for i in range(self.dim):
            for k in range(self.dim):
                if au[i][k] and av[k][i]:
                    acc = acc + au[i][k] * av[k][i]
        return acc

    # -- structural checks ---------------------------------------------

    def check_axioms(self) -> list[str]:
        """Antisymmetry, Jacobi and invariance on all basis triples."""
        bad = []
        n = self.dim
        br = self.brackets
        for i in range(n):
            for j in range(n):
                if any(x + y for x, y in zip(br[i][j], br[j][i])):
                    bad.append(f"antisymmetry [{self.labels[i]},{self.labels[j]}]")
        for i in range(n):
            for j in range(i + 1, n):
                bij = br[i][j]
                for k in range(j, n):
                    jac = linalg.vec_add(
                        self.bracket(bij, self.basis_vec(k)),
                        linalg.vec_add(
                            self.bracket(br[j][k], self.basis_vec(i)),
                            self.bracket(br[k][i], self.basis_vec(j)),
                        ),
                    )
                    if any(jac):
                        bad.append(
                            f"jacobi ({self.labels[i]},{self.labels[j]},{self.labels[k]})"
                        )
        for i in range(n):
            for j in range(n):
                for k in range(n):
                    lhs = self.pair(br[i][j], self.basis_vec(k))
                    rhs = self.pair(self.basis_vec(j), br[i][k])
                    if lhs + rhs:
                        bad.append(
                            f"invariance ({self.labels[i]},{self.labels[j]},{self.labels[k]})"
                        )
        if linalg.rank(self.form, self.ring) != n:
            bad.append("degenerate form")
        return bad

    def vec_str(self, v: Vec) -> str:
        parts = []
        for i, c in enumerate(v):
            if not c:
                continue
            if c == 1:
                parts.append(self.labels[i])
            elif c == -1:
                parts.append(f"-{self.labels[i]}")
            else:
                parts.append(f"({c})*{self.labels[i]}")
        return " + ".join(parts).replace("+ -", "- ") if parts else "0"

    def parse(self, expr: dict[str, ScalarLike]) -> Vec:
        v = self.zero_vec()
        for label, c in expr.items():
            v[self.labels.index(label)] = (
                c if isinstance(c, Scalar) else self.ring.const(c)
            )
        return v

    def to_json(self) -> dict:
        entries = {}
        for i in range(self.dim):
            for j in range(self.dim):
                for k, c in enumerate(self.brackets[i][j]):
                    if c:
                        entries[f"{self.labels[i]},{self.labels[j]},{self.labels[k]}"] = str(c)
        return {
            "dim": self.dim,
            "basis": list(self.labels),
            "structure": entries,
            "form": [[str(c) for c in row] for row in self.form],
        }


# ---------------------------------------------------------------------------
# matrix realizations
# ---------------------------------------------------------------------------


def _matrix_algebra(ring: ParamRing, labels: list[str],
                    mats: list[list[list[Fraction]]],
                    coords_of, form_scale: Scalar) -> LieAlgebra:
    n = len(mats[0])

    def mul(a, b):
        return [
            [sum((a[i][k] * b[k][j] for k in range(n)), Fraction(0)) for j in range(n)]
            for i in range(n)
        ]

    def comm(a, b):
        ab, ba = mul(a, b), mul(b, a)
        return [[ab[i][j] - ba[i][j] for j in range(n)] for i in range(n)]

    dim = len(labels)
    brackets = [[None] * dim for _ in range(dim)]
    for i in range(dim):
        for j in range(dim):
            brackets[i][j] = [ring.const(c) for c in coords_of(comm(mats[i], mats[j]))]
    form = [[None] * dim for _ in range(dim)]
    for i in range(dim):
        for j in range(dim):
            tr = sum((mul(mats[i], mats[j])[k][k] for k in range(n)), Fraction(0))
            form[i][j] = form_scale * ring.const(tr)
    return LieAlgebra(ring, labels, brackets, form)


def build_sl(n: int, params: Sequence[str] = (), form_scale: str | None = None) -> LieAlgebra:
    """Traceless n x n matrices; basis E_ij (i != j) and H_i = E_ii - E_i+1,i+1.

    The bilinear form is tr(ab), optionally scaled by a named parameter so
    that (E_ij|E_ji) equals that symbol instead of 1.
    """
    if n < 2:
        raise InvalidDimension(f"sl_{n} needs n >= 2")
    names = list(params)
    if form_scale is not None and form_scale not in names:
        names.append(form_scale)
    ring = ParamRing(names)
    scale = ring.param(form_scale) if form_scale is not None else ring.one()

    labels, mats = [], []
    for i in range(n):
        for j in range(n):
            if i != j:
                labels.append(f"E{i + 1}{j + 1}")
                m = [[Fraction(0)] * n for _ in range(n)]
                m[i][j] = Fraction(1)
                mats.append(m)
    for i in range(n - 1):
        labels.append(f"H{i + 1}")
        m = [[Fraction(0)] * n for _ in range(n)]
        m[i][i], m[i + 1][i + 1] = Fraction(1), Fraction(-1)
        mats.append(m)

    def coords_of(mat) -> list[Fraction]:
        out = []
        for i in range(n):
            for j in range(n):
                if i != j:
                    out.append(mat[i][j])
        # diagonal over H_i: coefficient of H_i is the partial sum d_1+...+d_i
        acc = Fraction(0)
        for i in range(n - 1):
            acc += mat[i][i]
            out.append(acc)
        return out

    return _matrix_algebra(ring, labels, mats, coords_of, scale)


def build_sp(n: int, params: Sequence[str] = ()) -> LieAlgebra:
    """sp_n (n even) as block matrices [[A, B], [C, -A^T]], B and C symmetric."""
    if n < 2 or n % 2:
        raise InvalidDimension(f"sp_{n} needs even n >= 2")
    m = n // 2
    ring = ParamRing(params)

    labels, mats = [], []

    def emb(block_r, block_c, i, j, val=Fraction(1)):
        return (block_r * m + i, block_c * m + j, val)

    def mat_from(entries):
        M = [[Fraction(0)] * n for _ in range(n)]
        for r, c, v in entries:
            M[r][c] += v
        return M

    for i in range(m):
        for j in range(m):
            labels.append(f"A{i + 1}{j + 1}")
            mats.append(mat_from([emb(0, 0, i, j), emb(1, 1, j, i, Fraction(-1))]))
    for i in range(m):
        for j in range(i, m):
            labels.append(f"B{i + 1}{j + 1}")
            ent = [emb(0, 1, i, j)]
            if i != j:
                ent.append(emb(0, 1, j, i))
            mats.append(mat_from(ent))
    for i in range(m):
        for j in range(i, m):
            labels.append(f"C{i + 1}{j + 1}")
            ent = [emb(1, 0, i, j)]
            if i != j:
                ent.append(emb(1, 0, j, i))
            mats.append(mat_from(ent))

    def coords_of(mat) -> list[Fraction]:
        out = []
        for i in range(m):
            for j in range(m):
                out.append(mat[i][j])
        for i in range(m):
            for j in range(i, m):
                out.append(mat[i][m + j])
        for i in range(m):
            for j in range(i, m):
                out.append(mat[m + i][j])
        return out

    return _matrix_algebra(ring, labels, mats, coords_of, ring.one())


# ---------------------------------------------------------------------------
# gradings from sl2-triples
# ---------------------------------------------------------------------------

MINIMAL = "minimal"
SHORT = "short"

_ALLOWED = {
    MINIMAL: {Fraction(-1), Fraction(-1, 2), Fraction(0), Fraction(1, 2), Fraction(1)},
    SHORT: {Fraction(-1), Fraction(0), Fraction(1)},
}


class GradedSetup:
    """An sl2-triple {f, 2x, e}, the ad(x)-grading and cached dual bases."""

    def __init__(self, algebra: LieAlgebra, f: Vec, kind: str):
        if kind not in (MINIMAL, SHORT):
            raise WrongKind(kind)
        self.algebra = algebra
        self.ring = algebra.ring
        self.kind = kind
        self.f = list(f)
        self._complete_triple()
        self._grade()
        self._build_adapted_basis()
        self._build_duals()

    # -- sl2 completion -------------------------------------------------

    def _complete_triple(self):
        g, ring = self.algebra, self.ring
        adf = g.ad(self.f)
        adf2 = [linalg.mat_vec(adf, col, ring) for col in linalg.transpose(adf)]
        adf2 = linalg.transpose(adf2)
        target = linalg.vec_scale(self.f, ring.const(2))
        y = linalg.solve(adf2, target, ring)
        if y is None:
            raise NotNilpotent("no sl2-completion: ad(f)^2 y = 2f unsolvable")
        h = g.bracket(self.f, y)
        self.x = linalg.vec_scale(h, ring.const(Fraction(1, 2)))
        # e: [x, e] = e and [f, e] = -2x, free components set to zero
        adx = g.ad(self.x)
        rows = [
            [adx[i][j] - (ring.one() if i == j else ring.zero()) for j in range(g.dim)]
            for i in range(g.dim)
        ] + [[adf[i][j] for j in range(g.dim)] for i in range(g.dim)]
        rhs = linalg.zeros(ring, g.dim) + linalg.vec_scale(self.x, ring.const(-2))
        e = linalg.solve(rows, rhs, ring)
        if e is None:
            raise NotNilpotent("no sl2-completion: e equations unsolvable")
        self.e = e
        assert self._is_triple(), "sl2-triple relations failed"

    def _is_triple(self) -> bool:
        g = self.algebra
        ok1 = linalg.vec_is_zero(
            linalg.vec_sub(g.bracket(self.x, self.e), self.e))
        ok2 = linalg.vec_is_zero(
            linalg.vec_add(g.bracket(self.x, self.f), self.f))
        ok3 = linalg.vec_is_zero(
            linalg.vec_sub(g.bracket(self.e, self.f),
                           linalg.vec_scale(self.x, self.ring.const(2))))
        return ok1 and ok2 and ok3

    # -- eigenspaces ------------------------------------------------------

    def _grade(self):
        g, ring = self.algebra, self.ring
        adx = g.ad(self.x)
        spaces: dict[Fraction, list[Vec]] = {}
        total = 0
        for k in range(-8, 9):
            ev = Fraction(k, 2)
            rows = [
                [adx[i][j] - (ring.const(ev) if i == j else ring.zero())
                 for j in range(g.dim)]
                for i in range(g.dim)
            ]
            ker = linalg.kernel(rows, ring, g.dim)
            if ker:
                spaces[ev] = ker
                total += len(ker)
        if total != g.dim:
            raise WrongKind("ad(x) not diagonalizable over half-integers")
        if not set(spaces) <= _ALLOWED[self.kind]:
            raise WrongKind(
                f"eigenvalues {sorted(spaces)} invalid for kind {self.kind}")
        if self.kind == MINIMAL and (
            len(spaces.get(Fraction(1), ())) != 1
            or len(spaces.get(Fraction(-1), ())) != 1
        ):
            raise WrongKind("minimal kind needs dim g_{+-1} = 1")
        self._eigenspaces = spaces
        self.depth = max(ev for ev in spaces)

    # -- adapted basis ------------------------------------------------------

    def _extend_echelon(self, seed: list[Vec], pool: list[Vec]) -> list[Vec]:
        out = list(seed)
        for v in pool:
            if linalg.rank(out + [v], self.ring) > len(out):
                out.append(v)
        return out

    def _build_adapted_basis(self):
        g, ring = self.algebra, self.ring
        spaces = self._eigenspaces
        basis: list[Vec] = []
        eig_of: list[Fraction] = []
        grading: dict[Fraction, list[int]] = {}
        self.gf_indices: list[int] = []
        self.g0f_indices: list[int] = []
        self.g0c_indices: list[int] = []  # complement [e, g_-1] inside g_0

        def push(v: Vec, ev: Fraction, in_gf: bool):
            basis.append(v)
            eig_of.append(ev)
            grading.setdefault(ev, []).append(len(basis) - 1)
            if in_gf:
                self.gf_indices.append(len(basis) - 1)

        for ev in sorted(spaces):
            vecs = spaces[ev]
            if ev < 0:
                if ev == -1 and self.kind == MINIMAL:
                    vecs = [self.f]
                elif ev == -1:
                    vecs = self._extend_echelon([self.f], vecs)
                for v in vecs:
                    push(v, ev, True)
            elif ev == 0:
                adf = g.ad(self.f)
                rows_gf = [linalg.mat_vec(adf, v, ring) for v in vecs]
                coef = linalg.kernel(
                    linalg.transpose(rows_gf), ring, len(vecs))
                g0f = [
                    [sum((c * v[i] for c, v in zip(cs, vecs)), ring.zero())
                     for i in range(g.dim)]
                    for cs in coef
                ]
                neg1 = grading.get(Fraction(-1), [])
                comp = [g.bracket(self.e, basis[i]) for i in neg1]
                if self.kind == MINIMAL:
                    comp = [self.x]
                for v in g0f:
                    push(v, ev, True)
                    self.g0f_indices.append(len(basis) - 1)
                for v in comp:
                    push(v, ev, False)
                    self.g0c_indices.append(len(basis) - 1)
                assert len(g0f) + len(comp) == len(vecs)
            else:
                if ev == 1 and self.kind == MINIMAL:
                    vecs = [self.e]
                for v in vecs:
                    push(v, ev, False)

        self.basis = basis
        self.eig_of = eig_of
        self.grading = grading
        A = linalg.transpose(basis)  # columns are the adapted vectors
        self._orig_from_adapted = A
        self._adapted_from_orig = linalg.inverse(A, ring)
        self.labels = self._make_labels()

    def _make_labels(self) -> list[str]:
        g = self.algebra
        labels = []
        counters: dict[str, int] = {}
        for idx, v in enumerate(self.basis):
            nz = [(i, c) for i, c in enumerate(v) if c]
            if len(nz) == 1 and nz[0][1] == 1:
                labels.append(g.labels[nz[0][0]])
                continue
            ev = self.eig_of[idx]
            if self.kind == MINIMAL and idx == self.grading[Fraction(-1)][0]:
                name = "f"
            elif ev == 1 and self.kind == MINIMAL:
                name = "e"
            elif idx in getattr(self, "g0c_indices", ()) and self.kind == MINIMAL:
                name = "x"
            else:
                stem = (
                    "a" if idx in self.g0f_indices
                    else "t" if idx in self.g0c_indices
                    else "u" if ev < 0
                    else "v"
                )
                counters[stem] = counters.get(stem, 0) + 1
                name = f"{stem}{counters[stem]}"
            labels.append(name)
        # disambiguate against original labels
        seen = {}
        for i, name in enumerate(labels):
            if labels.count(name) > 1:
                seen[name] = seen.get(name, 0) + 1
                labels[i] = f"{name}_{seen[name]}"
        return labels

    # -- coordinates ----------------------------------------------------

    def to_adapted(self, v: Vec) -> Vec:
        return linalg.mat_vec(self._adapted_from_orig, v, self.ring)

    def from_adapted(self, coeffs: Vec) -> Vec:
        return linalg.mat_vec(self._orig_from_adapted, coeffs, self.ring)

    def eig_indices(self, ev) -> list[int]:
        return self.grading.get(Fraction(ev), [])

    def component(self, v: Vec, ev) -> Vec:
        """Projection of v onto the ad(x)-eigenspace of eigenvalue ev."""
        co = self.to_adapted(v)
        keep = set(self.eig_indices(ev))
        out = self.algebra.zero_vec()
        for i in keep:
            if co[i]:
                out = linalg.vec_add(
                    out, linalg.vec_scale(self.basis[i], co[i]))
        return out

    # -- dual bases --------------------------------------------------------

    def _dual_in(self, vecs_p: list[Vec], vecs_q: list[Vec], pairing) -> list[Vec]:
        ring = self.ring
        M = [[pairing(p, q) for q in vecs_q] for p in vecs_p]
        if len(vecs_p) != len(vecs_q) or (
            vecs_p and linalg.rank(M, ring) != len(vecs_p)
        ):
            raise SingularPairing("degenerate pairing between subspaces")
        if not vecs_p:
            return []
        Minv = linalg.inverse(M, ring)
        out = []
        for h in range(len(vecs_p)):
            col = [Minv[s][h] for s in range(len(vecs_q))]
            v = self.algebra.zero_vec()
            for c, q in zip(col, vecs_q):
                v = linalg.vec_add(v, linalg.vec_scale(q, c))
            out.append(v)
        return out

    def omega_minus(self, u: Vec, u1: Vec) -> Scalar:
        return self.algebra.pair(self.e, self.algebra.bracket(u, u1))

    def omega_plus(self, v: Vec, v1: Vec) -> Scalar:
        return self.algebra.pair(self.f, self.algebra.bracket(v, v1))

    def _build_duals(self):
        g = self.algebra
        # full dual basis of the adapted basis w.r.t. the invariant form
        self.dual_basis_full = self._dual_in(self.basis, self.basis, g.pair)
        self.a_pairs = (
            [self.basis[i] for i in self.g0f_indices],
            self._dual_in(
                [self.basis[i] for i in self.g0f_indices],
                [self.basis[i] for i in self.g0f_indices],
                g.pair,
            ),
        )
        g0 = [self.basis[i] for i in self.eig_indices(0)]
        self.g0_pairs = (g0, self._dual_in(g0, g0, g.pair))
        if self.kind == MINIMAL:
            vs = [self.basis[i] for i in self.eig_indices(Fraction(1, 2))]
            self.v_pairs = (vs, self._dual_in(vs, vs, self.omega_plus))
        else:
            us = [self.basis[i] for i in self.eig_indices(-1)]
            g1 = [self.basis[i] for i in self.eig_indices(1)]
            self.u_pairs = (us, self._dual_in(us, g1, g.pair))

    # -- derived structure ---------------------------------------------

    def xx(self) -> Scalar:
        return self.algebra.pair(self.x, self.x)

    def dual_coxeter(self) -> Scalar:
        """kappa(x|x) with kappa the Killing form."""
        return self.algebra.killing(self.x, self.x)

    def sharp(self, a: Vec) -> Vec:
        """Projection of a in g_0 onto g_0^f (orthogonal complement split)."""
        co = self.to_adapted(a)
        if any(
            co[i]
            for i in range(len(co))
            if i not in self.eig_indices(0)
        ):
            raise GradeMismatch("sharp projection needs a in g_0")
        a_basis, a_dual = self.a_pairs
        out = self.algebra.zero_vec()
        for b, bd in zip(a_basis, a_dual):
            out = linalg.vec_add(
                out, linalg.vec_scale(b, self.algebra.pair(a, bd)))
        return out

    def jordan(self, a: Vec, b: Vec, eigen: int = -1) -> Vec:
        """a o b = [[e,a],b] on g_-1, or a * b = [[f,a],b] on g_+1."""
        if self.kind != SHORT:
            raise GradeMismatch("Jordan products need a short grading")
        for w in (a, b):
            co = self.to_adapted(w)
            if any(co[i] for i in range(len(co))
                   if i not in self.eig_indices(eigen)):
                raise GradeMismatch(f"arguments must lie in g_{eigen}")
        mid = self.e if eigen == -1 else self.f
        return self.algebra.bracket(self.algebra.bracket(mid, a), b)

    def find_embeddable(self, s: Vec) -> Vec | None:
        """Solve [s, s*] = 2x for s* in g_-1/2; None when unsolvable.

        A solution makes {2s*, 4x, s} an sl2-triple; the structural
        decompositions that follow are verified before returning.
        """
        if self.kind != MINIMAL:
            raise GradeMismatch("embeddable elements live in a minimal grading")
        half = self.eig_indices(Fraction(-1, 2))
        cols = [self.algebra.bracket(s, self.basis[i]) for i in half]
        rows = linalg.transpose(cols)
        rhs = linalg.vec_scale(self.x, self.ring.const(2))
        co = linalg.solve(rows, rhs, self.ring)
        if co is None:
            return None
        out = self.algebra.zero_vec()
        for c, i in zip(co, half):
            out = linalg.vec_add(out, linalg.vec_scale(self.basis[i], c))
        bad = embeddable_structure(self, s, out).check()
        assert not bad, f"embeddable structure checks failed: {bad}"
        return out

    def is_semisimple(self, v: Vec) -> bool:
        """Rank test: ker(ad v) and im(ad v) intersect trivially."""
        ad = self.algebra.ad(v)
        ad2 = [
            linalg.mat_vec(ad, col, self.ring)
            for col in linalg.transpose(ad)
        ]
        return linalg.rank(ad, self.ring) == linalg.rank(
            linalg.transpose(ad2), self.ring)

    def to_json(self) -> dict:
        g = self.algebra
        return {
            "kind": self.kind,
            "depth": str(self.depth),
            "e": g.vec_str(self.e),
            "x": g.vec_str(self.x),
            "f": g.vec_str(self.f),
            "grading": {
                str(ev): [self.labels[i] for i in idxs]
                for ev, idxs in sorted(self.grading.items())
            },
            "adapted_basis": {
                self.labels[i]: g.vec_str(v) for i, v in enumerate(self.basis)
            },
        }


def dual_basis(setup: GradedSetup, vecs_a: list, vecs_b: list,
               pairing: str = "form"):
    """Bases (one per subspace) with pairing(v_h, v^k) = delta_hk.

    pairing is one of form / omega_plus / omega_minus; raises
    SingularPairing when the pairing between the two spans degenerates.
    """
    fn = {
        "form": setup.algebra.pair,
        "omega_plus": setup.omega_plus,
        "omega_minus": setup.omega_minus,
    }[pairing]
    return list(vecs_a), setup._dual_in(vecs_a, vecs_b, fn)


def darboux_split(setup: GradedSetup, seed: Vec | None = None):
    """Split g_1/2 into omega_+-dual maximal isotropic halves (l, l').

    Symplectic Gram-Schmidt; a seed vector, when given, becomes the first
    basis vector of l.
    """
    if setup.kind != MINIMAL:
        raise GradeMismatch("isotropic splits need a minimal grading")
    ring = setup.ring
    pool = [setup.basis[i] for i in setup.eig_indices(Fraction(1, 2))]
    if seed is not None:
        pool = setup._extend_echelon([seed], pool)
    l_side, lp_side = [], []
    while pool:
        v1 = pool[0]
        rest = pool[1:]
        wi = next((i for i, u in enumerate(rest) if setup.omega_plus(v1, u)), None)
        if wi is None:
            raise SingularPairing("omega_+ degenerate on remaining space")
        w = linalg.vec_scale(rest[wi], setup.omega_plus(v1, rest[wi]).inv())
        l_side.append(v1)
        lp_side.append(w)
        new_pool = []
        for i, u in enumerate(rest):
            if i == wi:
                continue
            u1 = linalg.vec_sub(u, linalg.vec_scale(v1, setup.omega_plus(u, w)))
            u1 = linalg.vec_add(u1, linalg.vec_scale(w, setup.omega_plus(u, v1)))
            if any(u1):
                new_pool.append(u1)
        pool = new_pool
    return l_side, lp_side


def embeddable_structure(setup: GradedSetup, s: Vec, s_star: Vec) -> "EmbeddableData":
    return EmbeddableData(setup, s, s_star)


class EmbeddableData:
    """Caches attached to an embeddable s: centralizer bases and the form chi.

    g_0^s and g^s_1/2 come with dual bases ((.|.) resp. chi-dual), so every
    orthonormal-basis sum can be written basis/dual pairwise over Q.
    """

    def __init__(self, setup: GradedSetup, s: Vec, s_star: Vec):
        self.setup = setup
        self.s = list(s)
        self.s_star = list(s_star)
        g, ring = setup.algebra, setup.ring
        half = Fraction(1, 2)

        def centralizer(indices, v):
            vecs = [setup.basis[i] for i in indices]
            rows = [g.bracket(v, w) for w in vecs]
            coef = linalg.kernel(linalg.transpose(rows), ring, len(vecs))
            return [
                [sum((c * w[i] for c, w in zip(cs, vecs)), ring.zero())
                 for i in range(g.dim)]
                for cs in coef
            ]

        self.g0s = centralizer(setup.g0f_indices, s)
        self.gs_half = centralizer(setup.eig_indices(half), s)
        self.g0s_dual = setup._dual_in(self.g0s, self.g0s, g.pair)
        self.gs_half_dual = setup._dual_in(
            self.gs_half, self.gs_half, self.chi)

    def chi(self, u: Vec, v: Vec) -> Scalar:
        g, setup = self.setup.algebra, self.setup
        a = g.bracket(self.s, g.bracket(setup.f, u))
        b = g.bracket(self.s, g.bracket(setup.f, v))
        return g.pair(a, b)

    def check(self) -> list[str]:
        """The structural decompositions attached to an embeddable element."""
        bad = []
        setup, g, ring = self.setup, self.setup.algebra, self.setup.ring
        s, st = self.s, self.s_star
        half = Fraction(1, 2)
        two_x = linalg.vec_scale(setup.x, ring.const(2))
        if g.bracket(s, st) != two_x:
            bad.append("[s, s*] != 2x")
        # sl2-triple {2s*, 4x, s}
        if g.bracket(two_x, s) != s:
            bad.append("[2x, s] != s")
        # (a) g_0^s inside g_0^f
        for v in self.g0s:
            if any(g.bracket(setup.f, v)):
                bad.append("g_0^s not inside g_0^f")
        # (b) bijectivity of ad f, ad s ad f, ad s ad s ad f on g^s_1/2
        imgs = [
            [g.bracket(setup.f, u) for u in self.gs_half],
            [g.bracket(s, g.bracket(setup.f, u)) for u in self.gs_half],
            [g.bracket(s, g.bracket(s, g.bracket(setup.f, u)))
             for u in self.gs_half],
        ]
        for m, im in enumerate(imgs):
            if im and linalg.rank(im, ring) != len(self.gs_half):
                bad.append(f"ad-map {m} not injective on g^s_1/2")
        # (e) g_0^f = g_0^s + [s, [f, g^s_1/2]], orthogonal direct sum
        comp = imgs[1]
        span = [list(v) for v in self.g0s] + [list(v) for v in comp]
        if span and linalg.rank(span, ring) != len(setup.g0f_indices):
            bad.append("g_0^f does not split as g_0^s + [s,[f,g^s_1/2]]")
        for a in self.g0s:
            for b in comp:
                if g.pair(a, b):
                    bad.append("g_0^s not orthogonal to [s,[f,g^s_1/2]]")
        # (f) dual decompositions of the half eigenspaces
        top = [list(v) for v in imgs[2]] + [list(s)]
        if linalg.rank(top, ring) != len(setup.eig_indices(half)):
            bad.append("g_1/2 != [s,[s,[f,g^s_1/2]]] + F s")
        bottom = [list(g.bracket(setup.f, u)) for u in self.gs_half] + [list(st)]
        if linalg.rank(bottom, ring) != len(setup.eig_indices(half)):
            bad.append("g_-1/2 != [f, g^s_1/2] + F s*")
        for u in imgs[2]:
            if g.pair(u, st):
                bad.append("[s,[s,[f,g^s_1/2]]] not orthogonal to s*")
        # (h) chi nondegenerate and g_0^s invariant
        M = [[self.chi(u, v) for v in self.gs_half] for u in self.gs_half]
        if self.gs_half and linalg.rank(M, ring) != len(self.gs_half):
            bad.append("chi degenerate")
        for c in self.g0s:
            for u in self.gs_half:
                for v in self.gs_half:
                    lhs = self.chi(g.bracket(c, u), v)
                    rhs = self.chi(u, g.bracket(c, v))
                    if lhs + rhs:
                        bad.append("chi not g_0^s invariant")
        return bad


class SubspaceMap:
    """A linear map between index-labelled subspaces, stored as a matrix."""

    def __init__(self, setup: GradedSetup, name: str, fn):
        self.setup = setup
        self.name = name
        self._fn = fn

    def __call__(self, v: Vec) -> Vec:
        return self._fn(v)

    def is_idempotent(self, vecs: list[Vec]) -> bool:
        return all(self._fn(self._fn(v)) == self._fn(v) for v in vecs)


def project(setup: GradedSetup, target: str, frame=None) -> SubspaceMap:
    """Named projections: g_f_sharp, perp, p_leq_half, pi_gf, pi_l.

    pi_l (the quotient p -> g^f with kernel F x + l') needs the isotropic
    reduction frame that fixes l.
    """
    if target == "pi_l":
        if frame is None or not frame.isotropic:
            raise ValueError("pi_l needs an isotropic reduction frame")

        def pi_l(v: Vec) -> Vec:
            co = frame.to_adapted(v)
            out = setup.algebra.zero_vec()
            for i, c in enumerate(co):
                if not c:
                    continue
                if i in frame._w_pos:
                    out = linalg.vec_add(
                        out, linalg.vec_scale(frame.basis[i], c))
                elif frame.eig_of[i] == 0:
                    out = linalg.vec_add(out, linalg.vec_scale(
                        setup.sharp(frame.basis[i]), c))
            return out
        return SubspaceMap(setup, target, pi_l)

    if target == "g_f_sharp":
        return SubspaceMap(setup, target, setup.sharp)
    if target == "perp":
        return SubspaceMap(
            setup, target, lambda v: linalg.vec_sub(v, setup.sharp(v)))
    if target == "p_leq_half":
        def leq_half(v: Vec) -> Vec:
            co = setup.to_adapted(v)
            out = setup.algebra.zero_vec()
            for i, c in enumerate(co):
                if c and setup.eig_of[i] <= Fraction(1, 2):
                    out = linalg.vec_add(
                        out, linalg.vec_scale(setup.basis[i], c))
            return out
        return SubspaceMap(setup, target, leq_half)
    if target == "pi_gf":
        def pi_gf(v: Vec) -> Vec:
            co = setup.to_adapted(v)
            keep = set(setup.gf_indices)
            out = setup.algebra.zero_vec()
            for i, c in enumerate(co):
                if not c:
                    continue
                if i in keep:
                    out = linalg.vec_add(
                        out, linalg.vec_scale(setup.basis[i], c))
                elif setup.eig_of[i] == 0:
                    out = linalg.vec_add(out, linalg.vec_scale(
                        setup.sharp(setup.basis[i]), c))
                # half-eigenspace components die
            return out
        return SubspaceMap(setup, target, pi_gf)
    raise ValueError(f"unknown projection {target}")
