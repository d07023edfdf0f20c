"""Exact linear algebra over Z/m with m a prime power.

Everything in the engine reduces to affine systems over Z/p^k.  Over a local
ring like Z/p^k Smith reduction needs no gcd iteration: once a pivot of
minimal p-adic valuation is chosen, every remaining entry is an exact
multiple of it.  The pivot rule is fixed (first unit in row-major order,
otherwise the entry of minimal valuation at lowest index) so that every
result, including particular solutions and kernel bases, is reproducible
bit for bit.

Kernel bases and submodule generators are canonicalized through the Howell
form, the analogue of reduced row echelon form for Z/m, which is unique for
a given row span.
"""

from dataclasses import dataclass, field

from .errors import ModulusMismatchError, UserInputError


def prime_power(m):
    """Split m as p**k, raising if m is not a prime power."""
    if m < 2:
        raise UserInputError(f"modulus must be >= 2, got {m}")
    p = None
    n = m
    for cand in range(2, m + 1):
        if cand * cand > n:
            p = n
            break
        if n % cand == 0:
            p = cand
            break
    k = 0
    while n > 1:
        if n % p != 0:
            raise UserInputError(f"modulus {m} is not a prime power")
        n //= p
        k += 1
    return p, k


def padic_val(x, p, k):
    """p-adic valuation of x mod p^k; the zero residue gets valuation k."""
    x = x % (p**k)
    if x == 0:
        return k
    v = 0
    while x % p == 0:
        x //= p
        v += 1
    return v


# ---------------------------------------------------------------------------
# matrices


@dataclass(frozen=True)
class SparseMatrix:
    """Immutable sparse matrix over Z/m with canonical row-major entry order."""

    rows: int
    cols: int
    m: int
    entries: tuple  # tuple of (row, col, value), sorted, no zeros

    @staticmethod
    def from_entries(rows, cols, m, entries):
        cleaned = {}
        for i, j, v in entries:
            if not (0 <= i < rows and 0 <= j < cols):
                raise UserInputError(f"entry ({i},{j}) outside {rows}x{cols}")
            v = v % m
            if v:
                if (i, j) in cleaned:
                    raise UserInputError(f"duplicate entry at ({i},{j})")
                cleaned[(i, j)] = v
        ordered = tuple((i, j, cleaned[(i, j)]) for (i, j) in sorted(cleaned))
        return SparseMatrix(rows, cols, m, ordered)

    @staticmethod
    def from_dense(dense, m):
        rows = len(dense)
        cols = len(dense[0]) if rows else 0
        ent = [(i, j, dense[i][j]) for i in range(rows) for j in range(cols)]
        return SparseMatrix.from_entries(rows, cols, m, ent)

    @staticmethod
    def identity(n, m):
        return SparseMatrix.from_entries(n, n, m, [(i, i, 1) for i in range(n)])

    @staticmethod
    def zeros(rows, cols, m):
        return SparseMatrix(rows, cols, m, ())

    def to_dense(self):
        dense = [[0] * self.cols for _ in range(self.rows)]
        for i, j, v in self.entries:
            dense[i][j] = v
        return dense

    def _check(self, other):
        if self.m != other.m:
            raise ModulusMismatchError(f"moduli {self.m} and {other.m} differ")

    def matmul(self, other):
        self._check(other)
        if self.cols != other.rows:
            raise UserInputError("dimension mismatch in matmul")
        acc = {}
        by_row = {}
        for i, j, v in other.entries:
            by_row.setdefault(i, []).append((j, v))
        for i, j, v in self.entries:
            for jj, w in by_row.get(j, ()):
                acc[(i, jj)] = (acc.get((i, jj), 0) + v * w) % self.m
        return SparseMatrix.from_entries(
            self.rows, other.cols, self.m, [(i, j, v) for (i, j), v in acc.items()]
        )

    def apply(self, vec):
        """Matrix times column vector."""
        if len(vec) != self.cols:
            raise UserInputError("dimension mismatch in apply")
        out = [0] * self.rows
        for i, j, v in self.entries:
            out[i] = (out[i] + v * vec[j]) % self.m
        return tuple(out)

    def is_diagonal(self):
        return all(i == j for i, j, _ in self.entries)


# ---------------------------------------------------------------------------
# Smith normal form


def _swap_rows(M, a, b):
    M[a], M[b] = M[b], M[a]


def _swap_cols(M, a, b):
    for row in M:
        row[a], row[b] = row[b], row[a]


def _snf_dense(A, rows, cols, m):
    """Dense SNF over Z/p^k.

    Returns (U, D, V, Uinv, Vinv) as dense lists with U*A*V = D, the diagonal
    of D consisting of p-powers in nondecreasing valuation.
    """
    p, k = prime_power(m)
    D = [[A[i][j] % m for j in range(cols)] for i in range(rows)]
    U = [[int(i == j) for j in range(rows)] for i in range(rows)]
    Ui = [[int(i == j) for j in range(rows)] for i in range(rows)]
    V = [[int(i == j) for j in range(cols)] for i in range(cols)]
    Vi = [[int(i == j) for j in range(cols)] for i in range(cols)]

    t = 0
    while t < min(rows, cols):
        best = None  # (val, i, j)
        for i in range(t, rows):
            for j in range(t, cols):
                v = D[i][j]
                if v:
                    val = padic_val(v, p, k)
                    if best is None or val < best[0]:
                        best = (val, i, j)
                        if val == 0:
                            break
            if best is not None and best[0] == 0:
                break
        if best is None:
            break
        val, pi, pj = best
        if pi != t:
            _swap_rows(D, t, pi)
            _swap_rows(U, t, pi)
            _swap_cols(Ui, t, pi)
        if pj != t:
            _swap_cols(D, t, pj)
            _swap_cols(V, t, pj)
            _swap_rows(Vi, t, pj)
        # normalize the unit part so the pivot becomes exactly p**val
        piv = D[t][t]
        w = piv // (p**val)
        winv = pow(w, -1, m)
        for j in range(cols):
            D[t][j] = (D[t][j] * winv) % m
        for j in range(rows):
            U[t][j] = (U[t][j] * winv) % m
        for i in range(rows):
            Ui[i][t] = (Ui[i][t] * w) % m
        pv = p**val
        # clear the pivot column; exact division since val is minimal
        for i in range(rows):
            if i == t or D[i][t] == 0:
                continue
            q = D[i][t] // pv
            for j in range(cols):
                D[i][j] = (D[i][j] - q * D[t][j]) % m
            for j in range(rows):
                U[i][j] = (U[i][j] - q * U[t][j]) % m
            for ii in range(rows):
                Ui[ii][t] = (Ui[ii][t] + q * Ui[ii][i]) % m
        # clear the pivot row
        for j in range(cols):
            if j == t or D[t][j] == 0:
                continue
            q = D[t][j] // pv
            for i in range(rows):
                D[i][j] = (D[i][j] - q * D[i][t]) % m
            for i in range(cols):
                V[i][j] = (V[i][j] - q * V[i][t]) % m
            for jj in range(cols):
                Vi[t][jj] = (Vi[t][jj] + q * Vi[j][jj]) % m
        t += 1
    return U, D, V, Ui, Vi


def smith_normal_form(A):
    """U, D, V over Z/m with U*A*V = D diagonal, U and V invertible mod m."""
    U, D, V, _, _ = _snf_dense(A.to_dense(), A.rows, A.cols, A.m)
    return (
        SparseMatrix.from_dense(U, A.m) if A.rows else SparseMatrix.zeros(0, 0, A.m),
        SparseMatrix.from_dense(D, A.m) if A.rows and A.cols else SparseMatrix.zeros(A.rows, A.cols, A.m),
        SparseMatrix.from_dense(V, A.m) if A.cols else SparseMatrix.zeros(0, 0, A.m),
    )


# ---------------------------------------------------------------------------
# Howell canonical form for submodules of (Z/m)^n


def _leading(row):
    for j, v in enumerate(row):
        if v:
            return j
    return None


def howell_form(vectors, width, m):
    """Unique canonical generating set for the span of the given row vectors."""
    p, k = prime_power(m)
    pool = [list(v) for v in vectors]
    pool = [[x % m for x in r] for r in pool]
    result = []
    for j in range(width):
        cands = [r for r in pool if _leading(r) == j]
        rest = [r for r in pool if _leading(r) is not None and _leading(r) > j]
        if not cands:
            pool = rest
            continue
        cands.sort(key=lambda r: (padic_val(r[j], p, k), tuple(r)))
        piv = cands[0]
        a = padic_val(piv[j], p, k)
        w = piv[j] // (p**a)
        winv = pow(w, -1, m)
        piv = [(x * winv) % m for x in piv]
        for r in cands[1:]:
            q = r[j] // (p**a)
            red = [(x - q * y) % m for x, y in zip(r, piv)]
            if _leading(red) is not None:
                rest.append(red)
        if a > 0:
            shadow = [(x * p ** (k - a)) % m for x in piv]
            if _leading(shadow) is not None:
                rest.append(shadow)
        result.append(piv)
        pool = rest
    # back-reduction: entries above each pivot are reduced modulo the pivot
    for idx in range(len(result) - 1, -1, -1):
        row = result[idx]
        for lower in result[idx + 1 :]:
            j = _leading(lower)
            a = padic_val(lower[j], p, k)
            q = row[j] // (p**a)
            if q:
                for t in range(len(row)):
                    row[t] = (row[t] - q * lower[t]) % m
    return tuple(tuple(r) for r in result)


def howell_reduce(vec, basis, m):
    """Canonical coset representative of vec modulo the span of a Howell basis."""
    p, k = prime_power(m)
    v = [x % m for x in vec]
    for row in basis:
        j = _leading(row)
        a = padic_val(row[j], p, k)
        q = v[j] // (p**a)
        if q:
            for t in range(len(v)):
                v[t] = (v[t] - q * row[t]) % m
    return tuple(v)


def in_span(vec, basis, m):
    return not any(howell_reduce(vec, basis, m))


# ---------------------------------------------------------------------------
# affine systems


@dataclass(frozen=True)
class AffineSolutionSet:
    """All solutions of A x = b: particular + Z-span of the kernel basis."""

    particular: tuple
    kernel_basis: tuple
    m: int

    @property
    def kernel_rank(self):
        return len(self.kernel_basis)

    def contains(self, vec):
        diff = tuple((a - b) % self.m for a, b in zip(vec, self.particular))
        return in_span(diff, self.kernel_basis, self.m)

    def member(self, coeffs):
        """particular + sum coeffs[i] * kernel_basis[i]."""
        out = list(self.particular)
        for c, row in zip(coeffs, self.kernel_basis):
            for t in range(len(out)):
                out[t] = (out[t] + c * row[t]) % self.m
        return tuple(out)


def solve_dense(A, b, m, cols=None):
    """Solve A x = b over Z/m for dense A; returns AffineSolutionSet or None.

    cols must be passed explicitly when A has no rows.
    """
    rows = len(A)
    if cols is None:
        cols = len(A[0]) if rows else 0
    if len(b) != rows:
        raise UserInputError("dimension mismatch in solve")
    if rows == 0:
        basis = howell_form([tuple(int(i == j) for i in range(cols)) for j in range(cols)], cols, m)
        return AffineSolutionSet(tuple([0] * cols), basis, m)
    if cols == 0:
        if any(x % m for x in b):
            return None
        return AffineSolutionSet((), (), m)
    p, k = prime_power(m)
    U, D, V, _, _ = _snf_dense(A, rows, cols, m)
    ub = [sum(U[i][j] * b[j] for j in range(rows)) % m for i in range(rows)]
    npiv = 0
    while npiv < min(rows, cols) and D[npiv][npiv]:
        npiv += 1
    for i in range(npiv, rows):
        if ub[i] % m:
            return None
    y = [0] * cols
    kernel = []
    for t in range(npiv):
        a = padic_val(D[t][t], p, k)
        if ub[t] % (p**a):
            return None
        y[t] = (ub[t] // (p**a)) % (p ** (k - a))
        if a > 0:
            kernel.append([(p ** (k - a)) if i == t else 0 for i in range(cols)])
    for j in range(npiv, cols):
        kernel.append([int(i == j) for i in range(cols)])
    x = [sum(V[i][j] * y[j] for j in range(cols)) % m for i in range(cols)]
    kern_vecs = [
        tuple(sum(V[i][j] * g[j] for j in range(cols)) % m for i in range(cols))
        for g in kernel
    ]
    basis = howell_form(kern_vecs, cols, m)
    part = howell_reduce(x, basis, m)
    return AffineSolutionSet(part, basis, m)


def solve(A, b):
    """solve_dense for SparseMatrix inputs."""
    return solve_dense(A.to_dense(), list(b), A.m)


# ---------------------------------------------------------------------------
# presentations of finite Z/p^k modules


@dataclass(frozen=True)
class Presentation:
    """A finite Z/p^k module given by generators inside an ambient free module.

    reps[i] is an ambient vector representing the i-th generator, whose
    annihilator is p**order_exps[i].  coords() projects an ambient vector
    (assumed to represent a class) to canonical coordinates.
    """

    m: int
    ambient_rank: int
    order_exps: tuple
    reps: tuple
    _proj: tuple = field(repr=False)  # rows of the coordinate map
    _embed: tuple = field(repr=False, default=None)  # sub-generators, or None

    @property
    def rank(self):
        return len(self.order_exps)

    @property
    def size(self):
        p, _ = prime_power(self.m)
        n = 1
        for e in self.order_exps:
            n *= p**e
        return n

    def coords(self, vec):
        p, k = prime_power(self.m)
        if self._embed is not None:
            sol = solve_dense(
                [[self._embed[g][i] for g in range(len(self._embed))] for i in range(self.ambient_rank)],
                list(vec),
                self.m,
            )
            if sol is None:
                raise UserInputError("vector does not lie in the presented submodule")
            vec = sol.particular
        out = []
        for row, e in zip(self._proj, self.order_exps):
            c = sum(r * v for r, v in zip(row, vec)) % self.m
            out.append(c % (p**e))
        return tuple(out)

    def element(self, coords):
        out = [0] * self.ambient_rank
        for c, rep in zip(coords, self.reps):
            for t in range(self.ambient_rank):
                out[t] = (out[t] + c * rep[t]) % self.m
        return tuple(out)

    def is_zero_class(self, vec):
        return not any(self.coords(vec))

    def classes_equal(self, v1, v2):
        return self.coords(v1) == self.coords(v2)

    def all_coords(self):
        """Deterministic enumeration of all coordinate tuples."""
        p, _ = prime_power(self.m)
        def rec(i):
            if i == len(self.order_exps):
                yield ()
                return
            for rest in rec(i + 1):
                for c in range(p ** self.order_exps[i]):
                    yield (c,) + rest
        return rec(0)


def quotient_presentation(ambient_rank, relation_vectors, m):
    """Present (Z/m)^ambient_rank modulo the span of the relation vectors."""
    p, k = prime_power(m)
    rels = [list(v) for v in relation_vectors]
    if ambient_rank == 0:
        return Presentation(m, 0, (), (), ())
    if not rels:
        rels = [[0] * ambient_rank]
    R = [[rels[g][i] % m for g in range(len(rels))] for i in range(ambient_rank)]
    U, D, V, Ui, Vi = _snf_dense(R, ambient_rank, len(rels), m)
    order_exps = []
    reps = []
    proj = []
    for i in range(ambient_rank):
        d = D[i][i] if i < min(ambient_rank, len(rels)) else 0
        a = padic_val(d, p, k) if d else k
        if a == 0:
            continue
        order_exps.append(a)
        reps.append(tuple(Ui[t][i] for t in range(ambient_rank)))
        proj.append(tuple(U[i][t] for t in range(ambient_rank)))
    return Presentation(m, ambient_rank, tuple(order_exps), tuple(reps), tuple(proj))


def quotient_basis(subspace_gens, ambient_rank, m):
    """(representatives, projection) for ambient/(span of gens), per the contract."""
    pres = quotient_presentation(ambient_rank, subspace_gens, m)
    return list(pres.reps), pres.coords


def subquotient_presentation(sub_gens, relation_vectors, ambient_rank, m):
    """Present span(sub_gens)/span(relation_vectors) inside (Z/m)^ambient_rank.

    Relations must lie in the span of the sub-generators; class coordinates of
    an ambient vector are computed by first expressing it in the sub-generators.
    """
    subs = [tuple(x % m for x in g) for g in sub_gens]
    subs = [g for g in subs if any(g)]
    if not subs:
        return Presentation(m, ambient_rank, (), (), (), _embed=None)
    s = len(subs)
    K = [[subs[g][i] for g in range(s)] for i in range(ambient_rank)]
    inner_rels = []
    ker = solve_dense(K, [0] * ambient_rank, m)
    inner_rels.extend(list(v) for v in ker.kernel_basis)
    for b in relation_vectors:
        sol = solve_dense(K, list(b), m)
        if sol is None:
            raise UserInputError("relation vector outside the submodule span")
        inner_rels.append(list(sol.particular))
    inner = quotient_presentation(s, inner_rels, m)
    reps = []
    for r in inner.reps:
        amb = [0] * ambient_rank
        for c, g in zip(r, subs):
            for t in range(ambient_rank):
                amb[t] = (amb[t] + c * g[t]) % m
        reps.append(tuple(amb))
    return Presentation(
        m,
        ambient_rank,
        inner.order_exps,
        tuple(reps),
        inner._proj,
        _embed=tuple(subs),
    )
