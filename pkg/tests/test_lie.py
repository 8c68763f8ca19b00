import itertools
import random
from fractions import Fraction

import pytest

from wds import linalg
from wds.lie import (GradedSetup, GradeMismatch, InvalidDimension, MINIMAL,
                     NotNilpotent, SHORT, SingularPairing, WrongKind,
                     build_sl, build_sp, darboux_split, dual_basis,
                     embeddable_structure, project)


def test_build_sl2_relations():
    g = build_sl(2)
    e, f, h = g.parse({"E12": 1}), g.parse({"E21": 1}), g.parse({"H1": 1})
    assert g.bracket(e, f) == h
    assert g.pair(e, f) == g.ring.one()


def test_build_sl3_form_convention():
    g = build_sl(3)
    assert g.pair(g.parse({"E13": 1}), g.parse({"E31": 1})) == g.ring.one()


def test_build_sl4_dimension_and_axioms():
    g = build_sl(4)
    assert g.dim == 15
    assert g.check_axioms() == []


def test_invalid_dimensions():
    with pytest.raises(InvalidDimension):
        build_sl(1)
    with pytest.raises(InvalidDimension):
        build_sp(3)


def test_sp2_is_sl2():
    sp = build_sp(2)
    sl = build_sl(2)
    # identification A11 -> H1/... : structure constants match under
    # (A11, B11, C11) -> (H1, E12, E21)
    m = {"A11": "H1", "B11": "E12", "C11": "E21"}
    for la, lb in itertools.product(sp.labels, sp.labels):
        br = sp.bracket(sp.parse({la: 1}), sp.parse({lb: 1}))
        want = sl.bracket(sl.parse({m[la]: 1}), sl.parse({m[lb]: 1}))
        got = sl.zero_vec()
        for i, c in enumerate(br):
            got = linalg.vec_add(
                got, linalg.vec_scale(sl.parse({m[sp.labels[i]]: 1}), c))
        assert got == want


def test_sp4_dimension_and_invariance():
    sp = build_sp(4)
    assert sp.dim == 10
    assert sp.check_axioms() == []


@pytest.fixture(scope="module")
def sl3():
    g = build_sl(3)
    return g, GradedSetup(g, g.parse({"E31": 1}), MINIMAL)


def test_sl3_minimal_grading(sl3):
    g, s = sl3
    # x = (E11 - E33)/2, dim g_{+-1/2} = 2
    x2 = linalg.vec_scale(s.x, g.ring.const(2))
    assert x2 == g.parse({"H1": 1, "H2": 1})
    assert len(s.eig_indices(Fraction(1, 2))) == 2
    assert len(s.eig_indices(Fraction(-1, 2))) == 2
    assert s.depth == 1


def test_dual_coxeter_number_counts():
    for n in (3, 4, 5):
        g = build_sl(n)
        s = GradedSetup(g, g.parse({f"E{n}1": 1}), MINIMAL)
        hv = s.dual_coxeter()
        assert hv == g.ring.const(n)
        assert len(s.eig_indices(Fraction(1, 2))) == 2 * n - 4
    sp = build_sp(4)
    s = GradedSetup(sp, sp.parse({"C11": 1}), MINIMAL)
    assert s.dual_coxeter() == sp.ring.const(3)
    assert len(s.eig_indices(Fraction(1, 2))) == 2 * 3 - 4


def test_grading_is_compatible_with_brackets(sl3):
    g, s = sl3
    for i, vi in enumerate(s.basis):
        for j, vj in enumerate(s.basis):
            br = g.bracket(vi, vj)
            if not any(br):
                continue
            target = s.eig_of[i] + s.eig_of[j]
            co = s.to_adapted(br)
            for k, c in enumerate(co):
                if c:
                    assert s.eig_of[k] == target


def test_xx_equals_half_ef(sl3):
    g, s = sl3
    assert s.xx() == g.pair(s.e, s.f) / 2


def test_omega_dual_bases(sl3):
    g, s = sl3
    vs, vds = s.v_pairs
    # v^1 = v2/(2(x|x)), v^2 = -v1/(2(x|x)) in the worked example
    assert vds[0] == g.parse({"E23": 1})
    assert vds[1] == [-c for c in g.parse({"E12": 1})]
    for h in range(2):
        for k in range(2):
            want = g.ring.const(1 if h == k else 0)
            assert s.omega_plus(vs[h], vds[k]) == want
    # induced bases [f, v_k], [f, v^k] are dual w.r.t. -omega_minus
    for h in range(2):
        for k in range(2):
            lhs = s.omega_minus(g.bracket(s.f, vs[h]), g.bracket(s.f, vds[k]))
            assert lhs == g.ring.const(-1 if h == k else 0)


def test_completeness_relations(sl3):
    g, s = sl3
    vs, vds = s.v_pairs
    for i in s.eig_indices(Fraction(1, 2)):
        v = s.basis[i]
        acc = g.zero_vec()
        for vk, vdk in zip(vs, vds):
            acc = linalg.vec_add(
                acc, linalg.vec_scale(vk, s.omega_plus(v, vdk)))
        assert acc == v
        acc2 = g.zero_vec()
        for vk, vdk in zip(vs, vds):
            acc2 = linalg.vec_sub(
                acc2, linalg.vec_scale(vdk, s.omega_plus(v, vk)))
        assert acc2 == v
    for i in s.eig_indices(Fraction(-1, 2)):
        u = s.basis[i]
        acc = g.zero_vec()
        for vk, vdk in zip(vs, vds):
            acc = linalg.vec_add(acc, linalg.vec_scale(vk, g.pair(u, vdk)))
        assert acc == g.bracket(s.e, u)


def test_omega_invariance_identities(sl3):
    """omega(u, [a, u1]) = omega([u, a], u1) + pairing correction, both signs."""
    g, s = sl3
    neg = s.eig_indices(Fraction(-1, 2))
    pos = s.eig_indices(Fraction(1, 2))
    zero = s.eig_indices(0)
    for iu, iu1, ia in itertools.product(neg, neg, zero):
        u, u1, a = s.basis[iu], s.basis[iu1], s.basis[ia]
        lhs = s.omega_minus(u, g.bracket(a, u1))
        rhs = s.omega_minus(g.bracket(u, a), u1) + g.pair(
            g.bracket(s.e, a), g.bracket(u, u1))
        assert lhs == rhs
    for iv, iv1, ia in itertools.product(pos, pos, zero):
        v, v1, a = s.basis[iv], s.basis[iv1], s.basis[ia]
        lhs = s.omega_plus(v, g.bracket(a, v1))
        rhs = s.omega_plus(g.bracket(v, a), v1) + g.pair(
            g.bracket(s.f, a), g.bracket(v, v1))
        assert lhs == rhs


def test_dual_basis_op_and_errors(sl3):
    g, s = sl3
    vs = [s.basis[i] for i in s.eig_indices(Fraction(1, 2))]
    _, dual = dual_basis(s, vs, vs, "omega_plus")
    assert s.omega_plus(vs[0], dual[0]) == g.ring.one()
    with pytest.raises(SingularPairing):
        dual_basis(s, vs, vs, "form")  # (g_1/2 | g_1/2) = 0
    a_basis = [s.basis[i] for i in s.g0f_indices]
    _, ad = dual_basis(s, a_basis, a_basis, "form")
    assert g.pair(a_basis[0], ad[0]) == g.ring.one()


def test_projections(sl3):
    g, s = sl3
    sharp = project(s, "g_f_sharp")
    assert sharp(s.x) == g.zero_vec()
    h1 = g.parse({"H1": 1})
    got = sharp(h1)
    want = linalg.vec_sub(
        h1, linalg.vec_scale(s.x, g.pair(h1, s.x) / s.xx()))
    assert got == want
    g0 = [s.basis[i] for i in s.eig_indices(0)]
    assert sharp.is_idempotent(g0)
    pi = project(s, "pi_gf")
    assert pi(s.f) == s.f
    assert pi(s.basis[s.eig_indices(Fraction(1, 2))[0]]) == g.zero_vec()
    assert pi.is_idempotent([s.x, s.f, h1])
    leq = project(s, "p_leq_half")
    assert leq(s.e) == g.zero_vec()
    assert leq(s.f) == s.f


def test_sl2_completion_failure_on_non_nilpotent():
    g = build_sl(3)
    with pytest.raises(NotNilpotent):
        GradedSetup(g, g.parse({"H1": 1}), MINIMAL)


def test_wrong_kind_rejection():
    g = build_sl(3)
    with pytest.raises(WrongKind):
        GradedSetup(g, g.parse({"E31": 1}), SHORT)  # has half-integer grades
    g4 = build_sl(4)
    with pytest.raises(WrongKind):
        # the short element has dim g_{+-1} = 4, so it is not minimal
        GradedSetup(g4, g4.parse({"E31": 1, "E42": 1}), MINIMAL)
    with pytest.raises(WrongKind):
        # the principal nilpotent of sl3 has an ad(x)-eigenvalue 2
        GradedSetup(g, g.parse({"E21": 1, "E32": 1}), MINIMAL)


@pytest.fixture(scope="module")
def sl4s():
    g = build_sl(4)
    return g, GradedSetup(g, g.parse({"E31": 1, "E42": 1}), SHORT)


def test_sl4_short_grading(sl4s):
    g, s = sl4s
    assert sorted(s.grading) == [Fraction(-1), Fraction(0), Fraction(1)]
    assert len(s.eig_indices(1)) == 4
    assert len(s.eig_indices(-1)) == 4
    assert len(s.g0f_indices) == 3


def test_sl4_short_sharp_example(sl4s):
    g, s = sl4s
    v = g.parse({"H1": 1, "H2": 1})  # E11 - E33 lies in [f, g_1]
    assert s.sharp(v) == g.zero_vec()


def test_short_complement_z2_grading(sl4s):
    """[[f,g_1],[f,g_1]] lands back in g_0^f."""
    g, s = sl4s
    comp = [s.basis[i] for i in s.g0c_indices]
    gf = set()
    for a in comp:
        for b in comp:
            br = g.bracket(a, b)
            assert s.sharp(br) == br
    for a in [s.basis[i] for i in s.g0f_indices]:
        for b in comp:
            br = g.bracket(a, b)
            if any(br):
                assert s.sharp(br) == g.zero_vec()


def test_jordan_products(sl4s):
    g, s = sl4s
    rng = random.Random(17)
    us = [s.basis[i] for i in s.eig_indices(-1)]

    def rand(space):
        v = g.zero_vec()
        for b in space:
            v = linalg.vec_add(
                v, linalg.vec_scale(b, g.ring.const(rng.randint(-2, 2))))
        return v

    for _ in range(6):
        a, b = rand(us), rand(us)
        assert s.jordan(a, b) == s.jordan(b, a)
        a2 = s.jordan(a, a)
        assert s.jordan(s.jordan(a2, b), a) == s.jordan(a2, s.jordan(b, a))
    u = rand(us)
    assert s.jordan(s.f, u) == [(-2) * c for c in u]
    vs = [s.basis[i] for i in s.eig_indices(1)]
    v, w = rand(vs), rand(vs)
    assert s.jordan(v, w, eigen=1) == s.jordan(w, v, eigen=1)
    with pytest.raises(GradeMismatch):
        s.jordan(s.f, s.e)


def test_find_embeddable_sl3():
    g = build_sl(3)
    s = GradedSetup(g, g.parse({"E31": 1}), MINIMAL)
    sv = g.parse({"E12": 1, "E23": 1})
    st = s.find_embeddable(sv)
    assert st == g.parse({"E21": 1, "E32": 1})
    assert g.bracket(sv, st) == linalg.vec_scale(s.x, g.ring.const(2))
    assert s.find_embeddable(g.zero_vec()) is None
    data = embeddable_structure(s, sv, st)
    assert data.check() == []
    assert data.g0s == []  # trivial s-centralizer in g_0^f for sl3
    assert len(data.gs_half) == 1


def test_sp4_admits_no_embeddable():
    sp = build_sp(4)
    s = GradedSetup(sp, sp.parse({"C11": 1}), MINIMAL)
    rng = random.Random(106)
    half = s.eig_indices(Fraction(1, 2))
    for i in half:
        assert s.find_embeddable(s.basis[i]) is None
    for _ in range(100):
        v = sp.zero_vec()
        for i in half:
            v = linalg.vec_add(v, linalg.vec_scale(
                s.basis[i], sp.ring.const(rng.randint(-3, 3))))
        assert s.find_embeddable(v) is None


def test_semisimple_rank_criterion():
    g = build_sl(3)
    s = GradedSetup(g, g.parse({"E31": 1}), MINIMAL)
    lam = linalg.vec_add(s.f, g.parse({"E12": 1, "E23": 1}))
    assert s.is_semisimple(lam)
    assert not s.is_semisimple(s.f)
    assert s.is_semisimple(linalg.vec_add(s.f, s.e))


def test_darboux_split_sl3():
    g = build_sl(3)
    s = GradedSetup(g, g.parse({"E31": 1}), MINIMAL)
    seed = g.parse({"E12": 1, "E23": 1})
    l, lp = darboux_split(s, seed=seed)
    assert l == [seed]
    assert s.omega_plus(l[0], lp[0]) == g.ring.one()
    assert s.omega_plus(l[0], l[0]) == g.ring.zero()
    # l and l' assemble the omega_+-dual structure of the full half space
    l4, lp4 = darboux_split(GradedSetup(build_sl(4),
                                        build_sl(4).parse({"E41": 1}),
                                        MINIMAL))
    assert len(l4) == len(lp4) == 2
    s4 = GradedSetup(build_sl(4), build_sl(4).parse({"E41": 1}), MINIMAL)


def test_setup_serialization(sl3):
    g, s = sl3
    doc = s.to_json()
    assert doc["kind"] == MINIMAL
    assert doc["grading"]["1/2"] == ["E12", "E23"]
    assert "structure" in g.to_json()


def test_loop_kernel_image_split(sl3):
    """ker + im of ad(f+s) is direct exactly for semisimple f+s."""
    g, s = sl3
    ring = g.ring
    lam = linalg.vec_add(s.f, s.e)
    ad = g.ad(lam)
    ad2 = linalg.transpose(
        [linalg.mat_vec(ad, col, ring) for col in linalg.transpose(ad)])
    assert linalg.rank(ad, ring) == linalg.rank(ad2, ring)
    adf = g.ad(s.f)
    adf2 = linalg.transpose(
        [linalg.mat_vec(adf, col, ring) for col in linalg.transpose(adf)])
    assert linalg.rank(adf, ring) != linalg.rank(adf2, ring)
