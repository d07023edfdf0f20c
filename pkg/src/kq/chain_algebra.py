"""Bigraded truncated chain algebras over Z/p^k and their homology.

A chain algebra here is a finite bigraded basis with differential and
multiplication structure constants.  The upper degree r is bounded by a
window r_max; products escaping the window are zeroed and flagged so that
downstream computations can report when a result depended on the cutoff.
The lower (chain) degree is bounded by the truncation level n, and products
landing above it vanish by definition.

Homology in each lower degree k is presented per upper degree as a finite
Z/p^k-module: cycle representatives with annihilator exponents, computed by
exact Smith reduction.  Natural-system elements (matrices over H_k between
free graded modules) live here as well.
"""

from dataclasses import dataclass

from .errors import InternalInvariantError, ModulusMismatchError, UserInputError
from .exact_linalg import (
    Presentation,
    prime_power,
    quotient_presentation,
    solve_dense,
    subquotient_presentation,
)


def vec_add(a, b, scale=1, m=None):
    out = dict(a)
    for key, v in b.items():
        out[key] = out.get(key, 0) + scale * v
    if m is not None:
        out = {k: v % m for k, v in out.items()}
    return {k: v for k, v in out.items() if v}


def vec_scale(a, c, m):
    return {k: (v * c) % m for k, v in a.items() if (v * c) % m}


# ---------------------------------------------------------------------------
# the algebra


class ChainAlgebra:
    """Finite bigraded basis with differential and multiplication constants.

    names: ordered basis names; bidegree[name] = (r, s); unit is the name of
    the degree (0,0) unit.  diff[name] and mul[(a,b)] are sparse vectors over
    the basis.  Structure constants omitted from the tables are zero, except
    that products with the unit default to the unit law.
    """

    def __init__(self, m, n, r_max, elements, unit, diff, mul):
        prime_power(m)
        self.m = m
        self.n = n
        self.r_max = r_max
        self.names = tuple(name for name, _, _ in elements)
        if len(set(self.names)) != len(self.names):
            raise UserInputError("duplicate basis names")
        self.bidegree = {name: (r, s) for name, r, s in elements}
        self.unit = unit
        if unit not in self.bidegree:
            raise UserInputError(f"unit {unit!r} is not a basis element")
        self.diff = {
            a: {x: v % m for x, v in row.items() if v % m} for a, row in diff.items()
        }
        self.mul = {
            pair: {x: v % m for x, v in row.items() if v % m} for pair, row in mul.items()
        }
        for a in list(self.diff):
            if a not in self.bidegree:
                raise UserInputError(f"differential on unknown element {a!r}")
            for x in self.diff[a]:
                if x not in self.bidegree:
                    raise UserInputError(f"differential of {a!r} hits unknown {x!r}")
        for (a, b), row in self.mul.items():
            if a not in self.bidegree or b not in self.bidegree:
                raise UserInputError(f"product on unknown pair ({a!r},{b!r})")
            for x in row:
                if x not in self.bidegree:
                    raise UserInputError(f"product ({a!r},{b!r}) hits unknown {x!r}")
        self._index = {name: i for i, name in enumerate(self.names)}
        self._at = {}
        for name in self.names:
            self._at.setdefault(self.bidegree[name], []).append(name)

    def basis_at(self, r, s):
        return tuple(self._at.get((r, s), ()))

    def d_of(self, name):
        return self.diff.get(name, {})

    def mul_of(self, a, b):
        """Structure constants of a*b and whether the window cut them off."""
        ra, sa = self.bidegree[a]
        rb, sb = self.bidegree[b]
        if ra + rb > self.r_max:
            return {}, True
        if sa + sb > self.n:
            return {}, False
        if (a, b) in self.mul:
            return self.mul[(a, b)], False
        if a == self.unit:
            return {b: 1}, False
        if b == self.unit:
            return {a: 1}, False
        return {}, False

    def elem_d(self, vec):
        out = {}
        for a, c in vec.items():
            for x, v in self.d_of(a).items():
                out[x] = (out.get(x, 0) + c * v) % self.m
        return {x: v for x, v in out.items() if v}

    def elem_mul(self, v1, v2):
        out = {}
        flagged = False
        for a, c1 in v1.items():
            for b, c2 in v2.items():
                row, flag = self.mul_of(a, b)
                flagged = flagged or flag
                for x, v in row.items():
                    out[x] = (out.get(x, 0) + c1 * c2 * v) % self.m
        return {x: v for x, v in out.items() if v}, flagged

    # -- validation --------------------------------------------------------

    def validate(self):
        """All axiom violations, each with the witnessing basis tuple."""
        report = []

        def bad(axiom, witness, detail):
            report.append({"axiom": axiom, "witness": witness, "detail": detail})

        for name in self.names:
            r, s = self.bidegree[name]
            if r < 0 or r > self.r_max or s < 0:
                bad("degree", (name,), f"bidegree ({r},{s}) outside the window")
            if s > self.n:
                bad("truncation", (name,), f"lower degree {s} exceeds truncation {self.n}")
        if self.bidegree.get(self.unit) != (0, 0):
            bad("unit", (self.unit,), "unit must sit in bidegree (0,0)")

        for a, row in self.diff.items():
            r, s = self.bidegree[a]
            for x in row:
                if self.bidegree[x] != (r, s - 1):
                    bad("degree", (a, x), "differential does not drop the chain degree by one")
        for (a, b), row in self.mul.items():
            ra, sa = self.bidegree[a]
            rb, sb = self.bidegree[b]
            if ra + rb > self.r_max and row:
                bad("degree", (a, b), "declared product escapes the upper-degree window")
                continue
            if sa + sb > self.n and row:
                bad("truncation", (a, b), "declared product lands above the truncation level")
                continue
            for x in row:
                if self.bidegree[x] != (ra + rb, sa + sb):
                    bad("degree", (a, b, x), "product does not add bidegrees")

        for a in self.names:
            dd = self.elem_d(self.elem_d({a: 1}))
            if dd:
                bad("d_squared", (a,), f"d(d({a})) = {dd}")

        for x in self.names:
            got, _ = self.mul_of(self.unit, x)
            if got != {x: 1}:
                bad("unit", (x,), f"1*{x} = {got}")
            got, _ = self.mul_of(x, self.unit)
            if got != {x: 1}:
                bad("unit", (x,), f"{x}*1 = {got}")

        for a in self.names:
            ra, sa = self.bidegree[a]
            for b in self.names:
                rb, sb = self.bidegree[b]
                if ra + rb > self.r_max or sa + sb > self.n + 1:
                    continue
                ab, _ = self.mul_of(a, b)
                lhs = self.elem_d(ab)
                da_b, _ = self.elem_mul(self.d_of(a), {b: 1})
                a_db, _ = self.elem_mul({a: 1}, self.d_of(b))
                sign = -1 if sa % 2 else 1
                rhs = vec_add(da_b, a_db, scale=sign, m=self.m)
                if lhs != rhs:
                    bad("leibniz", (a, b), f"d({a}*{b}) = {lhs} but Leibniz gives {rhs}")

        for a in self.names:
            ra, sa = self.bidegree[a]
            for b in self.names:
                rb, sb = self.bidegree[b]
                if ra + rb > self.r_max or sa + sb > self.n:
                    continue
                ab, _ = self.mul_of(a, b)
                for c in self.names:
                    rc, sc = self.bidegree[c]
                    if ra + rb + rc > self.r_max or sa + sb + sc > self.n:
                        continue
                    bc, _ = self.mul_of(b, c)
                    left, _ = self.elem_mul(ab, {c: 1})
                    right, _ = self.elem_mul({a: 1}, bc)
                    if left != right:
                        bad("associativity", (a, b, c), f"({a}*{b})*{c} = {left} but {a}*({b}*{c}) = {right}")
        return report

    def is_valid(self):
        return not self.validate()


# ---------------------------------------------------------------------------
# homology


@dataclass(frozen=True)
class HClass:
    """A homology class: canonical coordinates plus its canonical cycle."""

    k: int
    r: int
    coords: tuple
    rep: tuple  # pairs (basis name, coeff), sorted

    def is_zero(self):
        return not any(self.coords)

    def rep_vec(self):
        return dict(self.rep)


class Homology:
    """H_k of a chain algebra, presented per upper degree."""

    def __init__(self, Q, k):
        self.Q = Q
        self.k = k
        self._pres = {}
        for r in range(Q.r_max + 1):
            basis = Q.basis_at(r, k)
            rank = len(basis)
            if rank == 0:
                self._pres[r] = None
                continue
            below = Q.basis_at(r, k - 1)
            if k == 0 or not below:
                cycles = [tuple(int(i == j) for i in range(rank)) for j in range(rank)]
            else:
                bi = {x: i for i, x in enumerate(below)}
                mat = [[0] * rank for _ in below]
                for j, a in enumerate(basis):
                    for x, v in Q.d_of(a).items():
                        mat[bi[x]][j] = v % Q.m
                cycles = list(solve_dense(mat, [0] * len(below), Q.m).kernel_basis)
            bdries = []
            for a in Q.basis_at(r, k + 1):
                img = Q.d_of(a)
                vec = [0] * rank
                for x, v in img.items():
                    vec[basis.index(x)] = v % Q.m
                if any(vec):
                    bdries.append(tuple(vec))
            self._pres[r] = subquotient_presentation(cycles, bdries, rank, Q.m)

    def presentation(self, r):
        return self._pres.get(r)

    def rank_data(self, r):
        pres = self.presentation(r)
        return () if pres is None else pres.order_exps

    def size(self, r):
        pres = self.presentation(r)
        return 1 if pres is None else pres.size

    def class_of(self, vec, r):
        """Class of a cycle given as a sparse vector over the algebra basis."""
        basis = self.Q.basis_at(r, self.k)
        for name in vec:
            if self.Q.bidegree[name] != (r, self.k):
                raise UserInputError(f"{name!r} is not in bidegree ({r},{self.k})")
        pres = self.presentation(r)
        if pres is None or pres.rank == 0:
            return HClass(self.k, r, (), ())
        dense = [vec.get(name, 0) % self.Q.m for name in basis]
        coords = pres.coords(dense)
        canon = pres.element(coords)
        rep = tuple(sorted((basis[i], c) for i, c in enumerate(canon) if c))
        return HClass(self.k, r, coords, rep)

    def zero_class(self, r):
        pres = self.presentation(r)
        rank = 0 if pres is None else pres.rank
        return HClass(self.k, r, (0,) * rank, ())

    def class_from_coords(self, r, coords):
        pres = self.presentation(r)
        if pres is None or pres.rank == 0:
            return HClass(self.k, r, (), ())
        basis = self.Q.basis_at(r, self.k)
        canon = pres.element(coords)
        coords = pres.coords(canon)
        rep = tuple(sorted((basis[i], c) for i, c in enumerate(canon) if c))
        return HClass(self.k, r, coords, rep)

    def all_classes(self, r):
        pres = self.presentation(r)
        if pres is None or pres.rank == 0:
            return [HClass(self.k, r, (), ())]
        return [self.class_from_coords(r, c) for c in pres.all_coords()]

    def is_boundary(self, vec, r):
        return self.class_of(vec, r).is_zero()


def homology(Q, k):
    if k > Q.n:
        raise UserInputError(f"homology level {k} exceeds truncation {Q.n}")
    return Homology(Q, k)


# ---------------------------------------------------------------------------
# truncation


def _class_name(basis, rep_vec):
    terms = []
    for name, c in zip(basis, rep_vec):
        if c == 0:
            continue
        terms.append(name if c == 1 else f"{c}*{name}")
    return "+".join(terms) if terms else "0"


def truncate(Q, n2):
    """The lower truncation: the top level becomes Q_n2 / d(Q_{n2+1}).

    Requires every quotient level to be a free Z/m module; a torsion quotient
    (possible over Z/p^2) is reported as an error carrying the presentation.
    """
    if n2 > Q.n:
        raise UserInputError(f"cannot truncate {Q.n}-truncated algebra to level {n2}")
    if n2 == Q.n:
        return Q
    _, k = prime_power(Q.m)
    elements = []
    rename = {}
    for name in Q.names:
        r, s = Q.bidegree[name]
        if s < n2:
            elements.append((name, r, s))
            rename[name] = {name: 1}
    projections = {}
    for r in range(Q.r_max + 1):
        basis = Q.basis_at(r, n2)
        if not basis:
            continue
        rels = []
        for a in Q.basis_at(r, n2 + 1):
            img = Q.d_of(a)
            vec = [img.get(x, 0) % Q.m for x in basis]
            if any(vec):
                rels.append(vec)
        pres = quotient_presentation(len(basis), rels, Q.m)
        if any(e != k for e in pres.order_exps):
            raise UserInputError(
                f"truncation level {n2} is not free in upper degree {r}",
                detail={"r": r, "order_exponents": list(pres.order_exps)},
            )
        projections[r] = (basis, pres)
        for idx, rep in enumerate(pres.reps):
            cname = _class_name(basis, rep)
            if cname in rename:
                cname = f"{cname}@{r}.{idx}"
            elements.append((cname, r, n2))

    names_at = {}
    for name, r, s in elements:
        names_at.setdefault((r, s), []).append(name)

    def project(vec, r, s):
        """Express a vector of the original algebra in the new basis."""
        out = {}
        if s < n2:
            for x, v in vec.items():
                out[x] = (out.get(x, 0) + v) % Q.m
        elif s == n2 and r in projections:
            basis, pres = projections[r]
            dense = [vec.get(x, 0) % Q.m for x in basis]
            for idx, c in enumerate(pres.coords(dense)):
                if c:
                    name = names_at[(r, n2)][idx]
                    out[name] = c
        return {x: v for x, v in out.items() if v}

    def lift(name):
        """A representative of a new basis element in the original algebra."""
        r, s = next((rr, ss) for nn, rr, ss in elements if nn == name)
        if s < n2:
            return {name: 1}, r, s
        basis, pres = projections[r]
        idx = names_at[(r, n2)].index(name)
        rep = pres.reps[idx]
        return {basis[i]: c for i, c in enumerate(rep) if c}, r, s

    diff = {}
    mul = {}
    new_names = [e[0] for e in elements]
    for name in new_names:
        vec, r, s = lift(name)
        if s == 0:
            continue
        img = Q.elem_d(vec)
        row = project(img, r, s - 1)
        if row:
            diff[name] = row
    for a in new_names:
        va, ra, sa = lift(a)
        for b in new_names:
            vb, rb, sb = lift(b)
            if ra + rb > Q.r_max or sa + sb > n2:
                continue
            prod, _ = Q.elem_mul(va, vb)
            row = project(prod, ra + rb, sa + sb)
            if row and not (a == Q.unit or b == Q.unit):
                mul[(a, b)] = row
    out = ChainAlgebra(Q.m, n2, Q.r_max, elements, Q.unit, diff, mul)
    bad = out.validate()
    if bad:
        raise InternalInvariantError(f"truncation produced an invalid algebra: {bad[:3]}")
    return out


# ---------------------------------------------------------------------------
# graded modules and their elements


@dataclass(frozen=True)
class GradedModule:
    """Finitely generated free graded module, concentrated in chain degree 0."""

    generators: tuple  # pairs (name, upper degree)

    @staticmethod
    def of(pairs):
        return GradedModule(tuple((str(n), int(r)) for n, r in pairs))

    @property
    def size(self):
        return len(self.generators)

    def degree(self, i):
        return self.generators[i][1]

    def name(self, i):
        return self.generators[i][0]


def pair_basis(module, Q, upper, lower):
    """Ordered basis of (module tensor Q) in the given bidegree."""
    out = []
    for j in range(module.size):
        r = upper - module.degree(j)
        if r < 0:
            continue
        for qname in Q.basis_at(r, lower):
            out.append((j, qname))
    return out


@dataclass
class ModElem:
    """Homogeneous element of (module tensor Q); taint marks window cutoffs."""

    module: GradedModule
    Q: ChainAlgebra
    coeffs: dict  # (gen index, algebra basis name) -> residue
    tainted: bool = False

    def clean(self):
        m = self.Q.m
        self.coeffs = {k: v % m for k, v in self.coeffs.items() if v % m}
        return self

    def is_zero(self):
        return not self.coeffs

    def copy(self):
        return ModElem(self.module, self.Q, dict(self.coeffs), self.tainted)

    def add(self, other, scale=1):
        if other.Q.m != self.Q.m:
            raise ModulusMismatchError("mixing moduli")
        out = dict(self.coeffs)
        for key, v in other.coeffs.items():
            out[key] = out.get(key, 0) + scale * v
        return ModElem(self.module, self.Q, out, self.tainted or other.tainted).clean()

    def scale(self, c):
        return ModElem(
            self.module, self.Q, {k: v * c for k, v in self.coeffs.items()}, self.tainted
        ).clean()

    def d(self):
        out = {}
        for (j, a), c in self.coeffs.items():
            for x, v in self.Q.d_of(a).items():
                out[(j, x)] = out.get((j, x), 0) + c * v
        return ModElem(self.module, self.Q, out, self.tainted).clean()

    def rmul(self, qvec):
        """Right multiplication by an algebra element (sparse vector)."""
        out = {}
        tainted = self.tainted
        for (j, a), c in self.coeffs.items():
            for b, cb in qvec.items():
                row, flag = self.Q.mul_of(a, b)
                tainted = tainted or flag
                for x, v in row.items():
                    out[(j, x)] = out.get((j, x), 0) + c * cb * v
        return ModElem(self.module, self.Q, out, tainted).clean()

    def to_vector(self, basis):
        return [self.coeffs.get(key, 0) % self.Q.m for key in basis]

    @staticmethod
    def from_vector(module, Q, basis, vec, tainted=False):
        coeffs = {key: v % Q.m for key, v in zip(basis, vec) if v % Q.m}
        return ModElem(module, Q, coeffs, tainted)

    @staticmethod
    def zero(module, Q):
        return ModElem(module, Q, {})

    @staticmethod
    def generator(module, Q, j):
        return ModElem(module, Q, {(j, Q.unit): 1})

    def __eq__(self, other):
        return (
            isinstance(other, ModElem)
            and self.module == other.module
            and {k: v % self.Q.m for k, v in self.coeffs.items() if v % self.Q.m}
            == {k: v % other.Q.m for k, v in other.coeffs.items() if v % other.Q.m}
        )


# ---------------------------------------------------------------------------
# natural system elements


@dataclass(frozen=True)
class NatElem:
    """Matrix over H_k from one free graded module to another."""

    k: int
    src: GradedModule
    dst: GradedModule
    entries: tuple  # ((j, i, HClass), ...) sorted by (j, i), nonzero classes

    @staticmethod
    def build(k, src, dst, entry_map):
        ent = tuple(
            (j, i, h)
            for (j, i), h in sorted(entry_map.items())
            if h is not None and not h.is_zero()
        )
        return NatElem(k, src, dst, ent)

    def entry_dict(self):
        return {(j, i): h for j, i, h in self.entries}

    def is_zero(self):
        return not self.entries

    def coords_key(self):
        return tuple((j, i, h.r, h.coords) for j, i, h in self.entries)


class NatSystem:
    """The level-k coefficient system: matrices over H_k with H_0 actions."""

    def __init__(self, Q, k, hom=None, h0=None):
        self.Q = Q
        self.k = k
        self.hom = hom if hom is not None else homology(Q, k)
        self.h0 = h0 if h0 is not None else homology(Q, 0)

    def slots(self, src, dst):
        """Entry positions (j, i, r) with a nontrivial coefficient module."""
        out = []
        for j in range(dst.size):
            for i in range(src.size):
                r = src.degree(i) - dst.degree(j)
                if r < 0 or r > self.Q.r_max:
                    continue
                if self.hom.size(r) > 1:
                    out.append((j, i, r))
        return out

    def zero(self, src, dst):
        return NatElem.build(self.k, src, dst, {})

    def from_cycles(self, src, dst, cycles):
        """cycles: dict (j, i) -> sparse algebra vector of the right bidegree."""
        entries = {}
        for (j, i), vec in cycles.items():
            r = src.degree(i) - dst.degree(j)
            entries[(j, i)] = self.hom.class_of(vec, r)
        return NatElem.build(self.k, src, dst, entries)

    def add(self, a, b, scale=1):
        out = {}
        for j, i, h in a.entries:
            out[(j, i)] = dict(h.rep)
        for j, i, h in b.entries:
            cur = out.get((j, i), {})
            out[(j, i)] = vec_add(cur, dict(h.rep), scale=scale, m=self.Q.m)
        return self.from_cycles(a.src, a.dst, out)

    def neg(self, a):
        return self.scale(a, -1)

    def scale(self, a, c):
        out = {(j, i): vec_scale(dict(h.rep), c, self.Q.m) for j, i, h in a.entries}
        return self.from_cycles(a.src, a.dst, out)

    def act_post(self, matrix, new_dst, elem):
        """Post-compose with an H0 matrix given by degree-0 cycle entries.

        matrix: dict (t, j) -> algebra vector, a map elem.dst -> new_dst.
        """
        out = {}
        for j, i, h in elem.entries:
            for (t, jj), q in matrix.items():
                if jj != j:
                    continue
                prod, flag = self.Q.elem_mul(q, dict(h.rep))
                if flag:
                    raise UserInputError("window cutoff inside a natural-system action")
                cur = out.get((t, i), {})
                out[(t, i)] = vec_add(cur, prod, m=self.Q.m)
        return self.from_cycles(elem.src, new_dst, out)

    def act_pre(self, elem, matrix, new_src):
        """Pre-compose with an H0 matrix: matrix maps new_src -> elem.src."""
        out = {}
        for j, i, h in elem.entries:
            for (ii, t), q in matrix.items():
                if ii != i:
                    continue
                prod, flag = self.Q.elem_mul(dict(h.rep), q)
                if flag:
                    raise UserInputError("window cutoff inside a natural-system action")
                cur = out.get((j, t), {})
                out[(j, t)] = vec_add(cur, prod, m=self.Q.m)
        return self.from_cycles(new_src, elem.dst, out)

    def size(self, src, dst):
        total = 1
        for _, _, r in self.slots(src, dst):
            total *= self.hom.size(r)
        return total

    def enumerate(self, src, dst):
        slots = self.slots(src, dst)

        def rec(idx):
            if idx == len(slots):
                yield {}
                return
            j, i, r = slots[idx]
            for rest in rec(idx + 1):
                for h in self.hom.all_classes(r):
                    cur = dict(rest)
                    if not h.is_zero():
                        cur[(j, i)] = dict(h.rep)
                    yield cur

        for cyc in rec(0):
            yield self.from_cycles(src, dst, cyc)
