import random
from fractions import Fraction

import pytest

from wds import linalg
from wds.diffpoly import LambdaPoly
from wds.lie import GradeMismatch
from wds.pva import random_element
from wds.walgebra import verify_table

HALF = Fraction(1, 2)


def test_virasoro_membership_and_weight(sl3_min, sl4_min, sl4_short):
    for cfg in (sl3_min, sl4_min, sl4_short):
        assert cfg.frame.is_in_w(cfg.gens.L)
        assert cfg.gens.L.conformal_weight() == 2


def test_all_generators_in_w(sl3_min, sl4_min, sl4_short):
    for cfg in (sl3_min, sl4_min, sl4_short):
        for name, p in cfg.gens.all_generators():
            assert cfg.frame.is_in_w(p), name


def test_generator_weights(sl3_min, sl4_short):
    gens = sl3_min.gens
    assert all(p.conformal_weight() == 1 for p in gens.phis)
    assert all(p.conformal_weight() == Fraction(3, 2) for p in gens.psis)
    sgens = sl4_short.gens
    assert all(p.conformal_weight() == 1 for p in sgens.phis)
    assert all(p.conformal_weight() == 2 for p in sgens.psis)


def test_phi_psi_linearity_and_grade_errors(sl3_min):
    cfg = sl3_min
    g, s, gens = cfg.algebra, cfg.setup, cfg.gens
    u1, u2 = g.parse({"E21": 1}), g.parse({"E32": 1})
    both = linalg.vec_add(u1, u2)
    assert gens.psi(both) == gens.psi(u1) + gens.psi(u2)
    assert gens.phi(g.zero_vec()) == cfg.frame.coord_ctx.zero()
    with pytest.raises(GradeMismatch):
        gens.phi(s.x)
    with pytest.raises(GradeMismatch):
        gens.psi(s.f)


def test_short_psi_of_f(sl4_short):
    """psi(f) = f + x' - 1/4 sum [f,u^k][e,u_k] for a short nilpotent."""
    cfg = sl4_short
    g, s, fr = cfg.algebra, cfg.setup, cfg.frame
    us, uds = s.u_pairs
    want = fr.coord_lin(s.f) + fr.coord_lin(s.x, order=1)
    for uk, ukd in zip(us, uds):
        want -= fr.coord_lin(g.bracket(s.f, ukd)) * fr.coord_lin(
            g.bracket(s.e, uk)) * Fraction(1, 4)
    assert cfg.gens.psi(s.f) == want


def test_short_virasoro_decomposition(sl4_short):
    """L = psi(f) + 1/2 sum a_i a^i."""
    cfg = sl4_short
    fr, gens = cfg.frame, cfg.gens
    a_basis, a_dual = cfg.setup.a_pairs
    want = gens.psi(cfg.setup.f)
    for b, bd in zip(a_basis, a_dual):
        want += fr.coord_lin(b) * fr.coord_lin(bd) * Fraction(1, 2)
    assert gens.L == want


def test_pi_of_generators(sl3_min):
    cfg = sl3_min
    fr, gens = cfg.frame, cfg.gens
    for a, p in zip(gens.phi_args, gens.phis):
        assert fr.pi(p) == fr.w_lin(a)
    for u, p in zip(gens.psi_args, gens.psis):
        assert fr.pi(p) == fr.w_lin(u)
    assert fr.pi(gens.Ltilde) == fr.w_lin(cfg.setup.f)


def test_pi_inverse_roundtrip(sl3_min, sl4_short):
    rng = random.Random(31)
    for cfg in (sl3_min, sl4_short):
        fr, gens = cfg.frame, cfg.gens
        assert gens.pi_inverse(fr.w_ctx.one()) == fr.coord_ctx.one()
        for _ in range(6):
            p = random_element(fr.w_ctx, rng, max_degree=2, max_order=1)
            lifted = gens.pi_inverse(p)
            assert fr.pi(lifted) == p
            assert fr.is_in_w(lifted)


def test_ltilde_formula(sl3_min):
    cfg = sl3_min
    gens = cfg.gens
    a_basis, a_dual = cfg.setup.a_pairs
    want = gens.L
    for b, bd in zip(a_basis, a_dual):
        want -= gens.phi(b) * gens.phi(bd) * Fraction(1, 2)
    assert gens.Ltilde == want
    assert cfg.frame.is_in_w(gens.Ltilde)


def test_generator_leading_terms_are_free(sl3_min, sl4_short):
    """Each generator has the g^f coordinate as its linear leading part."""
    for cfg in (sl3_min, sl4_short):
        fr = cfg.frame
        seen = set()
        for name, p in cfg.gens.all_generators():
            linear = [
                m for m in p.terms
                if len(m) == 1 and m[0][1] == 0
                and fr.coord_idx[m[0][0]] in fr._w_pos
            ]
            lead = {m[0][0] for m in linear}
            assert lead, name
            assert not (lead & seen) or name == "L", name
            if name != "L":
                seen |= lead


def test_weight_one_and_three_half_uniqueness(sl3_min):
    """Two membership-passing lifts of the same v agree at weights 1, 3/2."""
    cfg = sl3_min
    fr, gens = cfg.frame, cfg.gens
    s = cfg.setup
    phi = gens.phi(s.basis[s.g0f_indices[0]])
    vs = s.eig_indices(HALF)
    # perturb by every weight-1 monomial supported off g^f
    candidates = []
    for i in vs:
        for j in vs:
            candidates.append(fr.coord_lin(s.basis[i]) * fr.coord_lin(s.basis[j]))
    candidates.append(fr.coord_lin(s.x))
    for c in candidates:
        if fr.is_in_w(phi + c):
            assert not c, "nonzero perturbation kept membership"
    psi = gens.psis[0]
    for i in vs:
        pert = fr.coord_lin(s.basis[i], order=1)
        assert not fr.is_in_w(psi + pert)


def test_minimal_tables_sl3_sl4(sl3_min, sl4_min):
    for cfg in (sl3_min, sl4_min):
        assert verify_table(cfg.frame, cfg.gens, "minimal_generators") == []
        assert verify_table(cfg.frame, cfg.gens, "psi_psi_minimal") == []


def test_short_tables_sl4(sl4_short):
    assert verify_table(sl4_short.frame, sl4_short.gens,
                        "short_generators") == []
    assert verify_table(sl4_short.frame, sl4_short.gens,
                        "psi_psi_short") == []
    assert verify_table(sl4_short.frame, sl4_short.gens,
                        "L_brackets_short") == []


def test_isotropic_tables_sl3(sl3_iso):
    assert verify_table(sl3_iso.frame, sl3_iso.gens,
                        "isotropic_h_brackets") == []
    assert verify_table(sl3_iso.frame, sl3_iso.gens,
                        "isotropic_k_brackets") == []


def test_short_psi_psi_skew_symmetry(sl4_short):
    """The psi-psi bracket is skew under exchanging arguments and
    lambda -> -lambda-d; equivalent to the quadratic tensor identity."""
    from wds.diffpoly import subst_minus_lambda_d
    cfg = sl4_short
    fr, gens = cfg.frame, cfg.gens
    for u in gens.psi_args[:2]:
        for u1 in gens.psi_args[:2]:
            h, k = fr.w_bracket(gens.psi(u), gens.psi(u1))
            h2, k2 = fr.w_bracket(gens.psi(u1), gens.psi(u))
            assert h == -(subst_minus_lambda_d(h2))
            assert k == -(subst_minus_lambda_d(k2))


def test_short_jordan_tensor_identity(sl4_short):
    """sum_k [[e,u],[e,u_k]] (x) [u1,u^k]# = sum_k [u,u^k]# (x) [[e,u1],[e,u_k]]."""
    cfg = sl4_short
    g, s = cfg.algebra, cfg.setup
    us, uds = s.u_pairs
    for iu in s.eig_indices(-1):
        for iu1 in s.eig_indices(-1):
            u, u1 = s.basis[iu], s.basis[iu1]
            lhs = {}
            rhs = {}
            for uk, ukd in zip(us, uds):
                a = g.bracket(g.bracket(s.e, u), g.bracket(s.e, uk))
                b = s.sharp(g.bracket(u1, ukd))
                c = s.sharp(g.bracket(u, ukd))
                d = g.bracket(g.bracket(s.e, u1), g.bracket(s.e, uk))
                for i, ca in enumerate(a):
                    for j, cb in enumerate(b):
                        if ca and cb:
                            lhs[(i, j)] = lhs.get(i, j) if False else \
                                lhs.get((i, j), g.ring.zero()) + ca * cb
                for i, cc in enumerate(c):
                    for j, cd in enumerate(d):
                        if cc and cd:
                            rhs[(i, j)] = rhs.get((i, j), g.ring.zero()) + cc * cd
            keys = set(lhs) | set(rhs)
            for key in keys:
                zl = lhs.get(key, g.ring.zero())
                zr = rhs.get(key, g.ring.zero())
                assert zl == zr


def test_primary_fields_isotropic(sl3_iso):
    cfg = sl3_iso
    fr, gens = cfg.frame, cfg.gens
    for w, delta in [(gens.phis[0], Fraction(1)),
                     (gens.psis[0], Fraction(3, 2))]:
        h, _ = fr.w_bracket(gens.L, w)
        assert h == LambdaPoly(fr.coord_ctx,
                               [w.total_derivative(), w.scale(delta)])
