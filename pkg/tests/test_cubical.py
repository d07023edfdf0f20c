import itertools

import pytest

from kq.errors import UserInputError
from kq.cubical import (
    AttachedCylinder,
    CylinderComplex,
    boundary_matrix,
    boundary_word,
    cell_dim,
    complex_basis,
    corner_ball,
    corner_faces_complex,
    cube_ball,
    cube_boundary_complex,
    cube_complex,
    CubicalComplex,
    facet_ball,
    facet_complex,
    is_chain_map,
    is_regular_sequence,
    opposite_face,
    orientation_sign,
    point_ball,
    product_complex,
    serre_diagonal_word,
)
from kq.exact_linalg import smith_normal_form


def chain_add(acc, chain, scale=1):
    for c, v in chain.items():
        acc[c] = acc.get(c, 0) + scale * v
    return {c: v for c, v in acc.items() if v}


def dd_is_zero(basis):
    for c in basis.cells():
        acc = {}
        for x, v in basis.boundary_of(c).items():
            chain_addable = basis.boundary_of(x)
            for y, w in chain_addable.items():
                acc[y] = acc.get(y, 0) + v * w
        if any(acc.values()):
            return False
    return True


def diagonal_is_chain_map(basis):
    # d(diag c) with Koszul signs equals diag(d c), as integer chains
    for c in basis.cells():
        lhs = {}
        for s, a, b in basis.diag_of(c):
            for x, v in basis.boundary_of(a).items():
                key = (x, b)
                lhs[key] = lhs.get(key, 0) + s * v
            sign = 1 if basis.dim(a) % 2 == 0 else -1
            for y, v in basis.boundary_of(b).items():
                key = (a, y)
                lhs[key] = lhs.get(key, 0) + s * sign * v
        rhs = {}
        for x, v in basis.boundary_of(c).items():
            for s, a, b in basis.diag_of(x):
                key = (a, b)
                rhs[key] = rhs.get(key, 0) + v * s
        lhs = {k: v for k, v in lhs.items() if v}
        rhs = {k: v for k, v in rhs.items() if v}
        if lhs != rhs:
            return False
    return True


def diagonal_is_coassociative(basis):
    for c in basis.cells():
        left = {}
        for s, a, b in basis.diag_of(c):
            for t, x, y in basis.diag_of(a):
                key = (x, y, b)
                left[key] = left.get(key, 0) + s * t
        right = {}
        for s, a, b in basis.diag_of(c):
            for t, x, y in basis.diag_of(b):
                key = (a, x, y)
                right[key] = right.get(key, 0) + s * t
        left = {k: v for k, v in left.items() if v}
        right = {k: v for k, v in right.items() if v}
        if left != right:
            return False
    return True


def diagonal_is_counital(basis):
    for c in basis.cells():
        lhs = {}
        rhs = {}
        for s, a, b in basis.diag_of(c):
            if basis.dim(a) == 0:
                lhs[b] = lhs.get(b, 0) + s
            if basis.dim(b) == 0:
                rhs[a] = rhs.get(a, 0) + s
        lhs = {k: v for k, v in lhs.items() if v}
        rhs = {k: v for k, v in rhs.items() if v}
        if lhs != {c: 1} or rhs != {c: 1}:
            return False
    return True


def test_interval_boundary():
    assert sorted(boundary_word("*")) == [(-1, "0"), (1, "1")]


def test_dd_zero_on_cubes_up_to_4():
    for n in range(5):
        assert dd_is_zero(complex_basis(cube_complex(n)))


def test_boundary_rank_on_square_boundary():
    bd = cube_boundary_complex(2)
    d1 = boundary_matrix(bd, 1, 2)
    assert d1.rows == 4 and d1.cols == 4
    _, d, _ = smith_normal_form(d1)
    rank = sum(1 for i, j, v in d.entries if i == j and v)
    assert rank == 3


def test_interval_diagonal_matches_convention():
    assert serre_diagonal_word("0") == [(1, "0", "0")]
    assert serre_diagonal_word("1") == [(1, "1", "1")]
    terms = sorted(serre_diagonal_word("*"))
    assert terms == [(1, "*", "0"), (1, "1", "*")]


def test_diagonal_supported_in_lower_upper_halves():
    # every term of diag(*) lies in I x 0 union 1 x I
    for s, a, b in serre_diagonal_word("*"):
        assert b == "0" or a == "1"


def test_vertices_are_grouplike():
    basis = complex_basis(cube_complex(3))
    for v in basis.cells_of_dim(0):
        assert basis.diag_of(v) == [(1, v, v)]


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_diagonal_axioms_on_cubes(n):
    basis = complex_basis(cube_complex(n))
    assert diagonal_is_chain_map(basis)
    assert diagonal_is_coassociative(basis)
    assert diagonal_is_counital(basis)


def test_diagonal_restricts_to_subcomplexes():
    big = complex_basis(cube_complex(3))
    sub = complex_basis(corner_faces_complex(3, 0))
    for c in sub.cells():
        assert sub.diag_of(c) == big.diag_of(c)


def test_corner_complex_cell_counts():
    t2 = corner_faces_complex(3, 0)
    assert len(t2.cells_of_dim(2)) == 3
    assert len(t2.cells_of_dim(1)) == 9
    assert len(t2.cells_of_dim(0)) == 7
    t1 = corner_faces_complex(2, 0)
    assert len(t1.cells_of_dim(1)) == 2
    assert len(t1.cells_of_dim(0)) == 3


def test_corner_union_is_cube_boundary():
    for n in (2, 3, 4):
        lo = corner_faces_complex(n, 0)
        hi = corner_faces_complex(n, 1)
        assert lo.union(hi).cells == cube_boundary_complex(n).cells


def test_downward_closure_rejected():
    with pytest.raises(UserInputError):
        CubicalComplex.from_cells(2, {"**"})


def test_regular_sequence_validation():
    faces = [facet_complex(3, i, 0) for i in range(3)]
    for perm in itertools.permutations(faces):
        assert is_regular_sequence(list(perm))
    # two opposite facets of the square do not glue
    assert not is_regular_sequence([facet_complex(2, 0, 0), facet_complex(2, 0, 1)])


def test_orientation_signs_on_cube_facets():
    for n in (1, 2, 3):
        b = cube_ball(n)
        for pos in range(n):
            for digit in (0, 1):
                f = facet_ball(n, pos, digit)
                expected = (-1) ** ((pos + 1) + digit)
                assert orientation_sign(b, f) == expected
    # opposite facets of the interval carry opposite signs
    b = cube_ball(1)
    s0 = orientation_sign(b, facet_ball(1, 0, 0))
    s1 = orientation_sign(b, facet_ball(1, 0, 1))
    assert s0 * s1 == -1


def test_orientation_sign_rejects_non_facet():
    b = cube_ball(2)
    with pytest.raises(UserInputError):
        orientation_sign(b, point_ball())


def test_opposite_face():
    b = cube_ball(2)
    face = facet_complex(2, 0, 0).cells  # {0*, 00, 01}
    op = opposite_face(b, face)
    assert op == frozenset({"1*", "*0", "*1", "00", "01", "10", "11"})
    # the face and its opposite meet exactly in the face's rim
    assert op & face == frozenset({"00", "01"})


def test_cylinder_of_interval():
    ball = cube_ball(1)
    cyl = CylinderComplex(ball.basis, ball.boundary)
    basis = cyl.basis
    assert len(basis.cells_of_dim(2)) == 1  # one sleeve square
    assert dd_is_zero(basis)
    assert diagonal_is_chain_map(basis)
    assert diagonal_is_coassociative(basis)
    assert diagonal_is_counital(basis)
    # projection and inclusions are chain maps with proj . incl = id
    proj = cyl.projection()
    for incl in (cyl.include_bottom(), cyl.include_top()):
        assert is_chain_map(incl, ball.basis, basis)
        for c in ball.basis.cells():
            composed = {}
            for x, v in incl[c].items():
                for y, w in proj[x].items():
                    composed[y] = composed.get(y, 0) + v * w
            assert composed == {c: 1}
    assert is_chain_map(proj, basis, ball.basis)


def test_cylinder_of_point_is_interval_shaped():
    ball = point_ball()
    cyl = CylinderComplex(ball.basis, frozenset())
    names = cyl.basis.cells()
    assert sorted(names) == ["+:", "-:", "e:"]
    assert cyl.basis.boundary_of("e:") == {"+:": 1, "-:": -1}


@pytest.mark.parametrize("n", [1, 2])
def test_cylinder_axioms_on_cubes(n):
    ball = cube_ball(n)
    cyl = CylinderComplex(ball.basis, ball.boundary)
    assert dd_is_zero(cyl.basis)
    assert diagonal_is_chain_map(cyl.basis)
    assert diagonal_is_coassociative(cyl.basis)
    assert diagonal_is_counital(cyl.basis)


def test_attached_cylinder_action_map_is_chain_map():
    for n in (1, 2, 3):
        ball = cube_ball(n)
        for pos in range(n):
            for digit in (0, 1):
                face = facet_complex(n, pos, digit).cells
                att = AttachedCylinder(ball, face)
                assert dd_is_zero(att.basis)
                phi = att.action_map()
                assert is_chain_map(phi, ball.basis, att.basis)


def test_product_complex_concatenates():
    sq = product_complex(cube_complex(1), cube_complex(1))
    assert sq.cells == cube_complex(2).cells
    mixed = product_complex(facet_complex(1, 0, 1), cube_complex(1))
    assert mixed.cells == facet_complex(2, 0, 1).cells


def test_named_wrappers():
    from kq.cubical import cylinder_chains, serre_diagonal

    diag = serre_diagonal(cube_complex(1))
    assert sorted(diag["*"]) == [(1, "*", "0"), (1, "1", "*")]
    cyl = cylinder_chains(cube_complex(1))
    assert len(cyl.basis.cells_of_dim(2)) == 1
    with pytest.raises(UserInputError):
        complex_basis(cube_complex(1)).diag_of("**")


def test_corner_ball_boundary():
    t1 = corner_ball(2, 0)
    assert t1.boundary == frozenset({"01", "10"})
    t2 = corner_ball(3, 0)
    assert all(("0" in w and "1" in w) for w in t2.boundary)
