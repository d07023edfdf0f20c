import itertools
import random

import pytest
from hypothesis import given, settings, strategies as st

from kq.errors import ModulusMismatchError, UserInputError
from kq.exact_linalg import (
    AffineSolutionSet,
    SparseMatrix,
    howell_form,
    howell_reduce,
    in_span,
    prime_power,
    quotient_basis,
    quotient_presentation,
    smith_normal_form,
    solve,
    solve_dense,
    subquotient_presentation,
)


def brute_solutions(A, b, m, cols=None):
    rows = len(A)
    if cols is None:
        cols = len(A[0]) if rows else 0
    out = []
    for x in itertools.product(range(m), repeat=cols):
        if all(sum(A[i][j] * x[j] for j in range(cols)) % m == b[i] % m for i in range(rows)):
            out.append(x)
    return set(out)


def affine_members(sol, m):
    members = set()
    for coeffs in itertools.product(range(m), repeat=sol.kernel_rank):
        members.add(sol.member(coeffs))
    return members


def test_prime_power():
    assert prime_power(2) == (2, 1)
    assert prime_power(4) == (2, 2)
    assert prime_power(27) == (3, 3)
    with pytest.raises(UserInputError):
        prime_power(6)
    with pytest.raises(UserInputError):
        prime_power(1)


def test_modulus_mismatch_rejected():
    a = SparseMatrix.identity(2, 2)
    b = SparseMatrix.identity(2, 4)
    with pytest.raises(ModulusMismatchError):
        a.matmul(b)


def test_snf_already_diagonal_z4():
    a = SparseMatrix.from_dense([[2]], 4)
    u, d, v = smith_normal_form(a)
    assert d.to_dense() == [[2]]
    assert u.to_dense() == [[1]]
    assert v.to_dense() == [[1]]


def test_snf_zero_matrix():
    a = SparseMatrix.zeros(2, 2, 2)
    _, d, _ = smith_normal_form(a)
    assert d.to_dense() == [[0, 0], [0, 0]]


def test_snf_identity_example_z2():
    a = SparseMatrix.from_dense([[1, 1], [1, 0]], 2)
    u, d, v = smith_normal_form(a)
    assert d.to_dense() == [[1, 0], [0, 1]]
    assert u.matmul(a).matmul(v).to_dense() == d.to_dense()


def invertible_mod(mat, m):
    n = mat.rows
    sol = [solve(mat, [int(i == j) for i in range(n)]) for j in range(n)]
    return all(s is not None for s in sol)


@pytest.mark.parametrize("m", [2, 3, 4, 8, 9])
def test_snf_random_uav_equals_d(m):
    rng = random.Random(1000 + m)
    for _ in range(25):
        rows = rng.randrange(1, 5)
        cols = rng.randrange(1, 5)
        a = SparseMatrix.from_dense(
            [[rng.randrange(m) for _ in range(cols)] for _ in range(rows)], m
        )
        u, d, v = smith_normal_form(a)
        assert u.matmul(a).matmul(v).to_dense() == d.to_dense()
        assert d.is_diagonal()
        assert invertible_mod(u, m)
        assert invertible_mod(v, m)
        # successive divisibility of the integer lifts
        diag = [d.to_dense()[i][i] for i in range(min(rows, cols))]
        diag = [x for x in diag if x]
        for x, y in zip(diag, diag[1:]):
            assert y % x == 0


def test_solve_examples_from_contract():
    # A = 0, b = 0: kernel is the full space
    sol = solve(SparseMatrix.zeros(2, 2, 2), [0, 0])
    assert sol.particular == (0, 0)
    assert affine_members(sol, 2) == {(0, 0), (0, 1), (1, 0), (1, 1)}
    # [[2]] x = 2 over Z/4: solutions {1, 3}
    sol = solve(SparseMatrix.from_dense([[2]], 4), [2])
    assert sol.particular == (1,)
    assert sol.kernel_basis == ((2,),)
    assert affine_members(sol, 4) == {(1,), (3,)}
    # [[2]] x = 1 over Z/4: no solution
    assert solve(SparseMatrix.from_dense([[2]], 4), [1]) is None


@pytest.mark.parametrize("m,dim", [(2, 4), (4, 3), (3, 3), (8, 2)])
def test_solve_matches_enumeration(m, dim):
    rng = random.Random(77 * m + dim)
    for _ in range(30):
        rows = rng.randrange(0, dim + 1)
        A = [[rng.randrange(m) for _ in range(dim)] for _ in range(rows)]
        b = [rng.randrange(m) for _ in range(rows)]
        sol = solve_dense(A, b, m, cols=dim)
        expected = brute_solutions(A, b, m, cols=dim)
        if sol is None:
            assert expected == set()
        else:
            assert affine_members(sol, m) == expected


@given(st.integers(0, 3), st.data())
@settings(max_examples=60, deadline=None)
def test_solution_members_always_solve(rows, data):
    m = data.draw(st.sampled_from([2, 3, 4, 9]))
    cols = data.draw(st.integers(1, 4))
    A = [[data.draw(st.integers(0, m - 1)) for _ in range(cols)] for _ in range(rows)]
    b = [data.draw(st.integers(0, m - 1)) for _ in range(rows)]
    sol = solve_dense(A, b, m, cols=cols)
    if sol is None:
        assert brute_solutions(A, b, m, cols=cols) == set()
        return
    coeffs = [data.draw(st.integers(0, m - 1)) for _ in range(sol.kernel_rank)]
    x = sol.member(coeffs)
    for i in range(rows):
        assert sum(A[i][j] * x[j] for j in range(cols)) % m == b[i] % m
    assert sol.contains(x)


def test_determinism_bit_identical():
    A = [[2, 1, 0], [0, 2, 2], [1, 1, 3]]
    b = [1, 2, 3]
    s1 = solve_dense(A, b, 4)
    s2 = solve_dense([row[:] for row in A], list(b), 4)
    assert s1 == s2
    a = SparseMatrix.from_dense(A, 4)
    assert smith_normal_form(a) == smith_normal_form(a)


def test_howell_canonical_under_permutation():
    m = 4
    gens = [(2, 0, 2), (0, 2, 0), (2, 2, 2)]
    h1 = howell_form(gens, 3, m)
    h2 = howell_form(list(reversed(gens)), 3, m)
    assert h1 == h2
    # span equality with brute force
    def span(rows):
        out = set()
        for coeffs in itertools.product(range(m), repeat=len(rows)):
            v = [0, 0, 0]
            for c, r in zip(coeffs, rows):
                for t in range(3):
                    v[t] = (v[t] + c * r[t]) % m
            out.add(tuple(v))
        return out

    assert span(h1) == span(gens)
    for v in span(gens):
        assert in_span(v, h1, m)
        assert not any(howell_reduce(v, h1, m))


def test_quotient_basis_trivial_and_examples():
    # no generators: quotient is the ambient module
    reps, proj = quotient_basis([], 2, 2)
    assert len(reps) == 2
    assert proj((1, 0)) != proj((0, 1))
    # Z/2 rank 2 mod (1,1): both standard vectors map to the same class
    reps, proj = quotient_basis([(1, 1)], 2, 2)
    assert len(reps) == 1
    assert proj((1, 0)) == proj((0, 1)) != proj((0, 0))
    # Z/4 rank 1 mod (2): quotient is Z/2
    pres = quotient_presentation(1, [(2,)], 4)
    assert pres.order_exps == (1,)
    assert pres.size == 2
    assert pres.coords((1,)) != pres.coords((0,))
    assert pres.coords((2,)) == pres.coords((0,))


def test_quotient_presentation_counts_by_enumeration():
    rng = random.Random(5)
    for m in (2, 4, 9):
        for _ in range(10):
            n = rng.randrange(1, 4)
            g = rng.randrange(0, 3)
            gens = [tuple(rng.randrange(m) for _ in range(n)) for _ in range(g)]
            pres = quotient_presentation(n, gens, m)
            # count classes by brute force
            span = set()
            for coeffs in itertools.product(range(m), repeat=len(gens) or 1):
                v = [0] * n
                for c, r in zip(coeffs, gens):
                    for t in range(n):
                        v[t] = (v[t] + c * r[t]) % m
                span.add(tuple(v))
            classes = set()
            for v in itertools.product(range(m), repeat=n):
                classes.add(frozenset(tuple((a + b) % m for a, b in zip(v, s)) for s in span))
            assert pres.size == len(classes)
            # coords constant on classes, separating across classes
            seen = {}
            for v in itertools.product(range(m), repeat=n):
                cls = frozenset(tuple((a + b) % m for a, b in zip(v, s)) for s in span)
                c = pres.coords(v)
                if cls in seen:
                    assert seen[cls] == c
                else:
                    seen[cls] = c
            assert len(set(seen.values())) == len(classes)


def test_subquotient_presentation_z4():
    # submodule of (Z/4)^2 generated by (2,0) and (0,1), relations (0,2)
    pres = subquotient_presentation([(2, 0), (0, 1)], [(0, 2)], 2, 4)
    # classes: (2,0) has order 2, (0,1) has order 2 after the relation
    assert sorted(pres.order_exps) == [1, 1]
    assert pres.size == 4
    assert pres.coords((2, 0)) != (0,) * pres.rank
    assert pres.coords((0, 2)) == (0,) * pres.rank


def test_subquotient_rejects_outside_vectors():
    pres = subquotient_presentation([(2, 0)], [], 2, 4)
    with pytest.raises(UserInputError):
        pres.coords((1, 1))
