"""Cubical cells, complexes, and chain-level coalgebra structure.

Cells of the N-cube are words over {0,1,*} of length N; the dimension of a
cell is its number of free (*) positions.  Complexes are downward closed
cell sets.  Every complex yields a based chain complex with the fixed
boundary convention

    d(c) = sum_j (-1)^(j-1) * ( c[i_j := 1] - c[i_j := 0] )

over the free positions i_1 < ... < i_d of c, together with the standard
cubical diagonal (front face tensor back face with shuffle signs), which is
coassociative, counital, and a chain map.

Chain-level cylinders (with a chosen collapsed subcomplex), cylinders
attached along a face, and pastings are built here as generic based chain
complexes so that homotopies and actions reduce to plain linear algebra.
"""

from dataclasses import dataclass, field
from itertools import product as iproduct

from .errors import InternalInvariantError, UserInputError
from .exact_linalg import SparseMatrix

FREE = "*"


# ---------------------------------------------------------------------------
# cells


def cell_dim(word):
    return word.count(FREE)


def free_positions(word):
    return [i for i, ch in enumerate(word) if ch == FREE]


def cell_faces(word):
    """All codimension-one faces of a cell."""
    out = []
    for i in free_positions(word):
        out.append(word[:i] + "0" + word[i + 1 :])
        out.append(word[:i] + "1" + word[i + 1 :])
    return out


def boundary_word(word):
    """Boundary chain of a cell as a list of (coefficient, face)."""
    out = []
    for j, i in enumerate(free_positions(word)):
        sign = -1 if j % 2 else 1
        out.append((sign, word[:i] + "1" + word[i + 1 :]))
        out.append((-sign, word[:i] + "0" + word[i + 1 :]))
    return out


def serre_diagonal_word(word):
    """Diagonal of a cell as a list of (sign, front, back).

    On the interval: diag(0) = 0 x 0, diag(1) = 1 x 1,
    diag(*) = * x 0  +  1 x *.  Higher cubes take the product formula with
    the graded interchange; the sign counts the transpositions of a free
    back-coordinate past a later free front-coordinate.
    """
    free = free_positions(word)
    d = len(free)
    out = []
    for mask in range(1 << d):
        stays = [free[t] for t in range(d) if mask & (1 << t)]
        moved = [free[t] for t in range(d) if not mask & (1 << t)]
        front = list(word)
        back = list(word)
        for i in stays:
            back[i] = "0"
        for i in moved:
            front[i] = "1"
        sign = 1
        for i in moved:
            for j in stays:
                if i < j:
                    sign = -sign
        out.append((sign, "".join(front), "".join(back)))
    return out


# ---------------------------------------------------------------------------
# complexes


def closure(words):
    seen = set()
    stack = list(words)
    while stack:
        w = stack.pop()
        if w in seen:
            continue
        seen.add(w)
        stack.extend(cell_faces(w))
    return frozenset(seen)


@dataclass(frozen=True)
class CubicalComplex:
    """A downward closed set of cells of the N-cube."""

    ambient: int
    cells: frozenset

    @staticmethod
    def from_cells(ambient, cells, check=True):
        cells = frozenset(cells)
        for w in cells:
            if len(w) != ambient or any(ch not in "01*" for ch in w):
                raise UserInputError(f"bad cell word {w!r} for ambient {ambient}")
        if check:
            for w in cells:
                for f in cell_faces(w):
                    if f not in cells:
                        raise UserInputError(f"cell set not downward closed at {w!r} -> {f!r}")
        return CubicalComplex(ambient, cells)

    def sorted_cells(self):
        return sorted(self.cells, key=lambda w: (cell_dim(w), w))

    def cells_of_dim(self, k):
        return sorted(w for w in self.cells if cell_dim(w) == k)

    @property
    def dim(self):
        return max((cell_dim(w) for w in self.cells), default=-1)

    def maximal_cells(self):
        non_max = set()
        for w in self.cells:
            non_max.update(cell_faces(w))
        return sorted((w for w in self.cells if w not in non_max), key=lambda w: (cell_dim(w), w))

    def has_subcomplex(self, other):
        return other.ambient == self.ambient and other.cells <= self.cells

    def union(self, other):
        self._same_ambient(other)
        return CubicalComplex(self.ambient, self.cells | other.cells)

    def intersection(self, other):
        self._same_ambient(other)
        return CubicalComplex(self.ambient, self.cells & other.cells)

    def _same_ambient(self, other):
        if self.ambient != other.ambient:
            raise UserInputError("ambient cube dimensions differ")


def cube_complex(n):
    """The full n-cube."""
    if n == 0:
        return CubicalComplex(0, frozenset({""}))
    words = ("".join(w) for w in iproduct("01*", repeat=n))
    return CubicalComplex(n, frozenset(words))


def cube_boundary_complex(n):
    """All proper faces of the n-cube."""
    full = cube_complex(n)
    return CubicalComplex(n, frozenset(w for w in full.cells if any(ch != FREE for ch in w)))


def facet_complex(n, pos, digit):
    """The facet {x_pos = digit} of the n-cube; pos is 0-based."""
    full = cube_complex(n)
    d = str(digit)
    return CubicalComplex(n, frozenset(w for w in full.cells if w[pos] == d))


def corner_faces_complex(n, digit):
    """Union of the facets of the n-cube through the all-<digit> vertex.

    For digit 0 this is the union of all (n-1)-faces containing the origin.
    """
    full = cube_complex(n)
    d = str(digit)
    return CubicalComplex(n, frozenset(w for w in full.cells if d in w))


def product_complex(a, b):
    cells = frozenset(x + y for x in a.cells for y in b.cells)
    return CubicalComplex(a.ambient + b.ambient, cells)


def is_regular_sequence(pieces):
    """Combinatorial check that a sequence of same-dimensional pieces glues.

    Each prefix union must meet the next piece in a nonempty pure complex of
    one dimension lower.  This is the engine's proxy for the regular sequence
    condition; it does not attempt homeomorphism checking.
    """
    if not pieces:
        return False
    d = pieces[0].dim
    if any(p.dim != d for p in pieces):
        return False
    acc = pieces[0]
    for nxt in pieces[1:]:
        inter = acc.intersection(nxt)
        if not inter.cells:
            return False
        if any(cell_dim(w) != d - 1 for w in inter.maximal_cells()):
            return False
        acc = acc.union(nxt)
    return True


def boundary_matrix(complex_, k, m):
    """Matrix of the degree-k boundary in the canonical cell order, mod m."""
    rows = complex_.cells_of_dim(k - 1)
    cols = complex_.cells_of_dim(k)
    idx = {w: i for i, w in enumerate(rows)}
    entries = []
    for j, w in enumerate(cols):
        acc = {}
        for coeff, f in boundary_word(w):
            acc[f] = acc.get(f, 0) + coeff
        for f, c in acc.items():
            if c % m:
                entries.append((idx[f], j, c))
    return SparseMatrix.from_entries(len(rows), len(cols), m, entries)


# ---------------------------------------------------------------------------
# generic based chain complexes with optional diagonal


class ChainBasis:
    """A finite based chain complex; boundary coefficients are integers.

    diagonal, when present, maps a cell to a list of (sign, front, back)
    and is required to be coassociative, counital, and a chain map (checked
    in the test suite, not on every construction).
    """

    def __init__(self, dims, boundary, diagonal=None, label=""):
        self.dims = dict(dims)
        self.bnd = {c: {x: v for x, v in row.items() if v} for c, row in boundary.items()}
        self.diagonal = diagonal
        self.label = label
        for c, row in self.bnd.items():
            for x in row:
                if x not in self.dims:
                    raise InternalInvariantError(f"boundary of {c!r} hits unknown cell {x!r}")

    def cells(self):
        return sorted(self.dims, key=lambda c: (self.dims[c], c))

    def cells_of_dim(self, k):
        return sorted(c for c, d in self.dims.items() if d == k)

    @property
    def max_dim(self):
        return max(self.dims.values(), default=-1)

    def dim(self, c):
        return self.dims[c]

    def boundary_of(self, c):
        return self.bnd.get(c, {})

    def diag_of(self, c):
        if self.diagonal is None:
            raise UserInputError(f"no diagonal available on {self.label or 'this complex'}")
        if c not in self.diagonal:
            raise UserInputError(f"cell {c!r} is not in this complex")
        return self.diagonal[c]

    @property
    def has_diagonal(self):
        return self.diagonal is not None

    def has_cells(self, cells):
        return all(c in self.dims for c in cells)

    def is_closed(self, cells):
        cells = set(cells)
        return all(x in cells for c in cells for x in self.boundary_of(c))

    def subbasis(self, cells, label=""):
        cells = set(cells)
        if not self.is_closed(cells):
            raise UserInputError("cell set is not a subcomplex")
        dims = {c: self.dims[c] for c in cells}
        bnd = {c: dict(self.boundary_of(c)) for c in cells}
        diag = None
        if self.diagonal is not None:
            diag = {c: list(self.diagonal[c]) for c in cells}
        return ChainBasis(dims, bnd, diag, label or self.label)

    def union(self, other, label=""):
        dims = dict(self.dims)
        bnd = {c: dict(r) for c, r in self.bnd.items()}
        for c, d in other.dims.items():
            if c in dims:
                if dims[c] != d or self.boundary_of(c) != other.boundary_of(c):
                    raise InternalInvariantError(f"incompatible cell {c!r} in union")
            dims[c] = d
            bnd[c] = dict(other.boundary_of(c))
        diag = None
        if self.diagonal is not None and other.diagonal is not None:
            diag = {c: list(t) for c, t in self.diagonal.items()}
            diag.update({c: list(t) for c, t in other.diagonal.items()})
        return ChainBasis(dims, bnd, diag, label)

    # chain utilities (chains are dicts cell -> integer coefficient)

    def apply_boundary(self, chain):
        out = {}
        for c, v in chain.items():
            for x, w in self.boundary_of(c).items():
                out[x] = out.get(x, 0) + v * w
        return {x: v for x, v in out.items() if v}


def serre_diagonal(complex_):
    """The diagonal of every cell of a cubical complex, as a dict."""
    return {w: serre_diagonal_word(w) for w in complex_.cells}


def complex_basis(complex_, label=""):
    dims = {w: cell_dim(w) for w in complex_.cells}
    bnd = {}
    diag = {}
    for w in complex_.cells:
        acc = {}
        for coeff, f in boundary_word(w):
            acc[f] = acc.get(f, 0) + coeff
        bnd[w] = acc
        diag[w] = serre_diagonal_word(w)
    return ChainBasis(dims, bnd, diag, label)


# ---------------------------------------------------------------------------
# balls


@dataclass(frozen=True)
class Ball:
    """A based chain complex together with its designated boundary cells."""

    basis: ChainBasis
    boundary: frozenset
    complex: CubicalComplex = field(default=None, compare=False)
    label: str = ""

    def interior_cells(self):
        return [c for c in self.basis.cells() if c not in self.boundary]

    def boundary_subbasis(self):
        return self.basis.subbasis(self.boundary, label=self.label + ".boundary")


def point_ball():
    cc = cube_complex(0)
    return Ball(complex_basis(cc, "pt"), frozenset(), cc, "pt")


def cube_ball(n):
    cc = cube_complex(n)
    bd = cube_boundary_complex(n).cells
    return Ball(complex_basis(cc, f"I^{n}"), frozenset(bd), cc, f"I^{n}")


def corner_ball(n, digit=0):
    """The (n-1)-ball formed by the facets of the n-cube through a corner."""
    cc = corner_faces_complex(n, digit)
    other = corner_faces_complex(n, 1 - digit)
    bd = cc.intersection(other).cells
    return Ball(complex_basis(cc, f"corner({n},{digit})"), frozenset(bd), cc, f"corner({n},{digit})")


def facet_ball(n, pos, digit):
    cc = facet_complex(n, pos, digit)
    bd = frozenset(
        w for w in cc.cells if any(i != pos and w[i] != FREE for i in range(n))
    )
    return Ball(complex_basis(cc, f"facet({n},{pos},{digit})"), bd, cc, f"facet({n},{pos},{digit})")


def subcomplex_ball(ambient_ball, cells, boundary, label=""):
    """A ball carried by a subcomplex of an existing ball's complex."""
    sub = ambient_ball.basis.subbasis(cells, label=label)
    cc = None
    if ambient_ball.complex is not None:
        cc = CubicalComplex(ambient_ball.complex.ambient, frozenset(cells))
    return Ball(sub, frozenset(boundary), cc, label)


def opposite_face(ball, face_cells):
    """Closure of the boundary cells not in the given face."""
    rest = set(ball.boundary) - set(face_cells)
    out = set()
    stack = list(rest)
    while stack:
        c = stack.pop()
        if c in out:
            continue
        out.add(c)
        stack.extend(ball.basis.boundary_of(c))
    return frozenset(out)


def orientation_sign(ball, facet):
    """Incidence sign of a facet in the boundary of a single-top-cell ball.

    For the facet {x_j = delta} of the standard cube this is (-1)^(j+delta)
    with j counted from 1.  Raises if the ball has several top cells or the
    facet's top cell does not occur in the boundary of the ball's top cell.
    """
    tops = ball.basis.cells_of_dim(ball.basis.max_dim)
    if len(tops) != 1:
        raise UserInputError("orientation sign needs a unique top cell")
    ftops = facet.basis.cells_of_dim(facet.basis.max_dim)
    if len(ftops) != 1:
        raise UserInputError("facet must have a unique top cell")
    coeff = ball.basis.boundary_of(tops[0]).get(ftops[0], 0)
    if coeff not in (1, -1):
        raise UserInputError("not a facet of this ball")
    return coeff


# ---------------------------------------------------------------------------
# chain-level cylinders


class CylinderComplex:
    """Chain-level relative cylinder on a based complex.

    The cylinder over the collapsed subcomplex is squashed: for a collapsed
    cell both end copies coincide and there is no sleeve cell.
    """

    def __init__(self, base, collapse, label=""):
        collapse = frozenset(collapse)
        if not base.is_closed(collapse):
            raise UserInputError("collapse set must be a subcomplex")
        if base.diagonal is not None:
            for c in collapse:
                for _, a, b in base.diag_of(c):
                    if a not in collapse or b not in collapse:
                        raise InternalInvariantError("collapse set is not a subcoalgebra")
        self.base = base
        self.collapse = collapse
        dims = {}
        bnd = {}
        for c in base.cells():
            d = base.dim(c)
            if c in collapse:
                dims["=:" + c] = d
                bnd["=:" + c] = {self.bottom(x): v for x, v in base.boundary_of(c).items()}
            else:
                dims["-:" + c] = d
                dims["+:" + c] = d
                dims["e:" + c] = d + 1
                bnd["-:" + c] = self._push(base.boundary_of(c), self.bottom)
                bnd["+:" + c] = self._push(base.boundary_of(c), self.top)
                row = {self.top(c): 1, self.bottom(c): -1}
                for x, v in base.boundary_of(c).items():
                    if x not in collapse:
                        row["e:" + x] = row.get("e:" + x, 0) - v
                bnd["e:" + c] = row
        diag = None
        if base.diagonal is not None:
            diag = {}
            for c in base.cells():
                terms = base.diag_of(c)
                if c in collapse:
                    diag["=:" + c] = [(s, "=:" + a, "=:" + b) for s, a, b in terms]
                else:
                    diag["-:" + c] = [(s, self.bottom(a), self.bottom(b)) for s, a, b in terms]
                    diag["+:" + c] = [(s, self.top(a), self.top(b)) for s, a, b in terms]
                    rows = []
                    for s, a, b in terms:
                        if a not in collapse:
                            rows.append((s, "e:" + a, self.bottom(b)))
                        if b not in collapse:
                            sign = s if base.dim(a) % 2 == 0 else -s
                            rows.append((sign, self.top(a), "e:" + b))
                    diag["e:" + c] = rows
        self.basis = ChainBasis(dims, bnd, diag, label or ("J(" + base.label + ")"))

    @staticmethod
    def _push(row, namer):
        return {namer(x): v for x, v in row.items()}

    def bottom(self, c):
        return ("=:" if c in self.collapse else "-:") + c

    def top(self, c):
        return ("=:" if c in self.collapse else "+:") + c

    def sleeve(self, c):
        return None if c in self.collapse else "e:" + c

    def include_bottom(self):
        return {c: {self.bottom(c): 1} for c in self.base.cells()}

    def include_top(self):
        return {c: {self.top(c): 1} for c in self.base.cells()}

    def projection(self):
        out = {}
        for c in self.base.cells():
            if c in self.collapse:
                out["=:" + c] = {c: 1}
            else:
                out["-:" + c] = {c: 1}
                out["+:" + c] = {c: 1}
                out["e:" + c] = {}
        return out


def cylinder_ball(ball, rel=None):
    """J(ball) relative to rel (defaults to the ball's boundary)."""
    collapse = ball.boundary if rel is None else frozenset(rel)
    cyl = CylinderComplex(ball.basis, collapse)
    bd = frozenset(c for c in cyl.basis.cells() if not c.startswith("e:"))
    return Ball(cyl.basis, bd, None, "J(" + ball.label + ")"), cyl


def cylinder_chains(complex_, rel=None):
    """Chain-level relative cylinder of a cubical complex.

    The cylinder over rel (default: every cell with a fixed coordinate,
    i.e. the boundary) is collapsed; the result carries the end inclusions
    and the projection as chain maps.
    """
    basis = complex_basis(complex_)
    if rel is None:
        rel = frozenset(w for w in complex_.cells if any(ch != FREE for ch in w))
    return CylinderComplex(basis, frozenset(rel))


class AttachedCylinder:
    """A ball with a cylinder glued onto one boundary face.

    Carries the deterministic chain map from the ball into the glued complex
    that is the identity on the rest of the boundary and sweeps the face
    across the cylinder:  phi(c) = c - sleeve(face part of dc), phi(a) = far
    copy of a for face cells a.
    """

    def __init__(self, ball, face_cells):
        face_cells = frozenset(face_cells)
        if not face_cells <= ball.boundary:
            raise UserInputError("face must lie in the ball boundary")
        if not ball.basis.is_closed(face_cells):
            raise UserInputError("face must be a subcomplex")
        self.ball = ball
        self.face = face_cells
        # rim = face cells shared with the closure of the opposite boundary;
        # the cylinder over the rim is collapsed
        opp = set(ball.boundary) - set(face_cells)
        clos = set()
        stack = list(opp)
        while stack:
            c = stack.pop()
            if c in clos:
                continue
            clos.add(c)
            stack.extend(ball.basis.boundary_of(c))
        self.rim = face_cells & frozenset(clos)
        self.face_interior = frozenset(c for c in face_cells if c not in self.rim)
        dims = dict(ball.basis.dims)
        bnd = {c: dict(ball.basis.boundary_of(c)) for c in ball.basis.dims}
        for a in self.face_interior:
            d = ball.basis.dim(a)
            dims["0:" + a] = d
            dims["e:" + a] = d + 1
            row0 = {}
            for x, v in ball.basis.boundary_of(a).items():
                row0[self.far(x)] = row0.get(self.far(x), 0) + v
            bnd["0:" + a] = row0
            rowe = {a: 1, "0:" + a: -1}
            for x, v in ball.basis.boundary_of(a).items():
                if x in self.face_interior:
                    rowe["e:" + x] = rowe.get("e:" + x, 0) - v
            bnd["e:" + a] = rowe
        self.basis = ChainBasis(dims, bnd, None, ball.label + "+cyl")

    def far(self, a):
        return "0:" + a if a in self.face_interior else a

    def action_map(self):
        """Chain map from the ball into the glued complex, identity on the
        opposite boundary, sending the face to the far cylinder end."""
        phi = {}
        for c in self.ball.basis.cells():
            if c in self.face:
                phi[c] = {self.far(c): 1}
            else:
                row = {c: 1}
                for x, v in self.ball.basis.boundary_of(c).items():
                    if x in self.face_interior:
                        row["e:" + x] = row.get("e:" + x, 0) - v
                phi[c] = row
        return phi


def is_chain_map(phi, src, dst, m=None):
    """Check that phi commutes with boundaries, integrally or mod m."""
    for c in src.cells():
        lhs = dst.apply_boundary(phi.get(c, {}))
        rhs = {}
        for x, v in src.boundary_of(c).items():
            for y, w in phi.get(x, {}).items():
                rhs[y] = rhs.get(y, 0) + v * w
        keys = set(lhs) | set(rhs)
        for y in keys:
            diff = lhs.get(y, 0) - rhs.get(y, 0)
            if diff if m is None else diff % m:
                return False
    return True
