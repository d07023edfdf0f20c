import pytest

from kq.chain_algebra import (
    ChainAlgebra,
    GradedModule,
    ModElem,
    NatSystem,
    homology,
    pair_basis,
    truncate,
)
from kq.errors import UserInputError

from conftest import make_massey_algebra


def test_unit_algebra_is_valid(unit_algebra):
    assert unit_algebra.validate() == []
    h0 = homology(unit_algebra, 0)
    assert h0.size(0) == 2  # H_0 in degree 0 is Z/2
    assert homology(unit_algebra, 1).size(0) == 1


def test_massey_algebra_is_valid(massey_algebra):
    assert massey_algebra.validate() == []


def test_z4_algebra_is_valid(z4_algebra):
    assert z4_algebra.validate() == []


def test_broken_differential_reports_witness(massey_algebra):
    # d(ay) = 0 breaks Leibniz for the pair (a, y)
    q = make_massey_algebra()
    q.diff["ay"] = {}
    report = q.validate()
    assert any(v["axiom"] == "leibniz" and v["witness"] == ("a", "y") for v in report)


def test_dsquared_violation_witness():
    elements = [("1", 0, 0), ("u", 1, 0), ("v", 1, 1), ("w", 1, 2)]
    diff = {"v": {"u": 1}, "w": {"v": 1}}
    q = ChainAlgebra(2, 2, 2, elements, "1", diff, {})
    report = q.validate()
    assert any(v["axiom"] == "d_squared" and v["witness"] == ("w",) for v in report)


def test_homology_of_massey_algebra(massey_algebra):
    h0 = homology(massey_algebra, 0)
    # degree 0: the unit survives; degree 1: a, b, c survive
    assert h0.size(0) == 2
    assert h0.size(1) == 8
    # degree 2: ab and bc are killed by x and y
    assert h0.size(2) == 1
    assert h0.size(3) == 1
    h1 = homology(massey_algebra, 1)
    assert h1.size(2) == 1
    assert h1.size(3) == 2
    cls = h1.class_of({"ay": 1, "xc": 1}, 3)
    assert not cls.is_zero()
    assert h1.class_of({}, 3).is_zero()
    # ay alone is not a cycle
    with pytest.raises(Exception):
        h1.presentation(3).coords([1, 0])


def test_homology_z4_torsion(z4_algebra):
    h0 = homology(z4_algebra, 0)
    # degree 2: <b> / <2b> is Z/2
    assert h0.size(2) == 2
    assert h0.rank_data(2) == (1,)
    h1 = homology(z4_algebra, 1)
    # degree 2: cycles <2x> with no boundaries
    assert h1.size(2) == 2
    cls = h1.class_of({"x": 2}, 2)
    assert not cls.is_zero()


def test_truncate_identity(massey_algebra):
    assert truncate(massey_algebra, 1) is massey_algebra


def test_truncate_kills_named_boundary():
    # Q2 = <w> with dw = v: the level-1 part of Q(1) is Q1/<v>
    elements = [("1", 0, 0), ("u", 1, 0), ("v", 1, 1), ("t", 1, 1), ("w", 1, 2)]
    diff = {"t": {"u": 1}, "w": {"v": 1}}
    q = ChainAlgebra(2, 2, 2, elements, "1", diff, {})
    assert q.validate() == []
    q1 = truncate(q, 1)
    assert q1.validate() == []
    assert len(q1.basis_at(1, 1)) == 1  # only one class survives
    assert set(q1.basis_at(1, 0)) == {"u"}


def test_truncate_massey_to_homology(massey_algebra):
    q0 = truncate(massey_algebra, 0)
    assert q0.validate() == []
    h0 = homology(massey_algebra, 0)
    for r in range(massey_algebra.r_max + 1):
        assert len(q0.basis_at(r, 0)) == len(h0.rank_data(r))
    # multiplication agrees with the H0 algebra: [a][b] = [ab] = 0
    prod, _ = q0.elem_mul({"a": 1}, {"b": 1})
    assert prod == {}
    # and H0 of the truncation is the same as level-0 homology of q0 itself
    h0_trunc = homology(q0, 0)
    for r in range(q0.r_max + 1):
        assert h0_trunc.size(r) == h0.size(r)


def test_truncate_twice_matches_direct():
    elements = [("1", 0, 0), ("u", 1, 0), ("v", 1, 1), ("t", 1, 1), ("w", 1, 2)]
    diff = {"t": {"u": 1}, "w": {"v": 1}}
    q = ChainAlgebra(2, 2, 2, elements, "1", diff, {})
    a = truncate(truncate(q, 1), 0)
    b = truncate(q, 0)
    for r in range(q.r_max + 1):
        assert len(a.basis_at(r, 0)) == len(b.basis_at(r, 0))


def test_truncation_homology_stable_below_top():
    elements = [("1", 0, 0), ("u", 1, 0), ("v", 1, 1), ("t", 1, 1), ("w", 1, 2)]
    diff = {"t": {"u": 1}, "w": {"v": 1}}
    q = ChainAlgebra(2, 2, 2, elements, "1", diff, {})
    q1 = truncate(q, 1)
    for k in range(1):
        h_full = homology(q, k)
        h_trunc = homology(q1, k)
        for r in range(q.r_max + 1):
            assert h_full.size(r) == h_trunc.size(r)


def test_torsion_truncation_rejected():
    # over Z/4, d(w) = 2v leaves a Z/2 class at the top level
    elements = [("1", 0, 0), ("v", 1, 1), ("w", 1, 2)]
    diff = {"w": {"v": 2}}
    q = ChainAlgebra(4, 2, 2, elements, "1", diff, {})
    assert q.validate() == []
    with pytest.raises(UserInputError):
        truncate(q, 1)


def test_pair_basis_and_modelem(massey_algebra):
    L = GradedModule.of([("l0", 0), ("l1", 1)])
    basis = pair_basis(L, massey_algebra, 2, 1)
    # degree-2 lower-1 slots: l0 x {x,y}, l1 x nothing at r=1
    assert basis == [(0, "x"), (0, "y")]
    e = ModElem(L, massey_algebra, {(0, "x"): 1})
    assert e.d().coeffs == {(0, "ab"): 1}
    f = e.rmul({"c": 1})
    assert f.coeffs == {(0, "xc"): 1}
    assert not f.tainted


def test_modelem_taint_on_window_escape(massey_algebra):
    L = GradedModule.of([("l0", 0)])
    e = ModElem(L, massey_algebra, {(0, "abc"): 1})
    f = e.rmul({"ab": 1})  # degree 5 > r_max = 4
    assert f.is_zero()
    assert f.tainted


def test_nat_system_actions(massey_algebra):
    L0 = GradedModule.of([("w", 0)])
    L2 = GradedModule.of([("z", 2)])
    L3 = GradedModule.of([("t", 3)])
    nat = NatSystem(massey_algebra, 1)
    # the class of y as an entry L2 -> L0 hits H_1 in degree 2 which is 0
    assert nat.size(L2, L0) == 1
    # entries L3 -> L0 live in H_1 degree 3 of size 2
    assert nat.size(L3, L0) == 2
    elem = nat.from_cycles(L3, L0, {(0, 0): {"ay": 1, "xc": 1}})
    assert not elem.is_zero()
    # acting by the identity and by zero
    ident = {(0, 0): {"1": 1}}
    assert nat.act_post(ident, L0, elem).coords_key() == elem.coords_key()
    assert nat.act_post({}, L0, elem).is_zero()
    # acting by [a] on the class of [y] in D^1(L3, L1) gives [ay] which is
    # the class of ay = abc-boundary partner; check via representatives
    L1 = GradedModule.of([("u", 1)])
    ymap = nat.from_cycles(L3, L1, {(0, 0): {"y": 1}})
    # y is not a cycle, so this must raise through the presentation
    assert ymap.is_zero() or True  # y has trivial H_1 degree-2 image? no:
    # H_1 in degree (3-1)=2 is zero, so the class collapses
    assert ymap.is_zero()


def test_nat_bilinearity_small(z4_algebra):
    nat = NatSystem(z4_algebra, 1)
    L0 = GradedModule.of([("w", 0)])
    L2 = GradedModule.of([("z", 2)])
    elems = list(nat.enumerate(L2, L0))
    assert len(elems) == nat.size(L2, L0) == 2
    a, b = elems
    s = nat.add(a, b)
    assert s.coords_key() == nat.add(b, a).coords_key()
    # (e + e) = 2e and the entries have order 2
    twice = nat.add(a, a)
    assert twice.is_zero()


def test_composite_action_law(massey_algebra):
    # (ab)^* = b^* a^* on representatives
    nat = NatSystem(massey_algebra, 1)
    L0 = GradedModule.of([("w", 0)])
    L3 = GradedModule.of([("t", 3)])
    elem = nat.from_cycles(L3, L0, {(0, 0): {"ay": 1, "xc": 1}})
    Lm = GradedModule.of([("u", 3)])
    ident = {(0, 0): {"1": 1}}
    one_step = nat.act_pre(elem, ident, Lm)
    two_step = nat.act_pre(nat.act_pre(elem, ident, L3), ident, Lm)
    assert one_step.coords_key() == two_step.coords_key()
