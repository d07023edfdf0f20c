"""Morphisms over based chain coalgebras with free graded module coefficients.

A morphism assigns to each cell c of a ball and each source generator l an
element of (target module tensor algebra) in bidegree (deg l, dim c),
subject to the chain condition d(f(c,l)) = f(dc, l).  Composition goes
through the diagonal of the base, restriction along chain maps is
pullback of values, gluing is union of value tables, and homotopies live
over chain-level cylinders.  Nullhomotopies, extensions, and homotopy tests
are all instances of one linear solver over Z/p^k whose free parameters are
reported for reproducibility and enumeration.
"""

from dataclasses import dataclass, field

from .chain_algebra import GradedModule, ModElem, NatElem, pair_basis
from .cubical import AttachedCylinder, Ball, CylinderComplex, cylinder_ball, orientation_sign
from .errors import InternalInvariantError, UserInputError
from .exact_linalg import solve_dense


@dataclass
class TrackMorphism:
    ball: Ball
    src: GradedModule
    dst: GradedModule
    Q: object
    values: dict  # (cell, generator index) -> ModElem, nonzero entries only
    window_tainted: bool = False  # a window cutoff occurred while building

    def clean(self):
        self.values = {k: v for k, v in self.values.items() if not v.clean().is_zero()}
        return self

    def value(self, cell, i):
        v = self.values.get((cell, i))
        if v is None:
            return ModElem.zero(self.dst, self.Q)
        return v

    def eval_chain(self, chain, i):
        out = ModElem.zero(self.dst, self.Q)
        for cell, coeff in chain.items():
            v = self.values.get((cell, i))
            if v is not None:
                out = out.add(v, scale=coeff)
        return out

    @property
    def tainted(self):
        return self.window_tainted or any(v.tainted for v in self.values.values())

    def is_zero(self):
        return not self.values

    def equal(self, other):
        if self.src != other.src or self.dst != other.dst:
            return False
        keys = set(self.values) | set(other.values)
        return all(self.value(c, i) == other.value(c, i) for c, i in keys)

    def check(self):
        """Exact chain-condition check; returns the offending (cell, gen) list."""
        bad = []
        for cell in self.ball.basis.cells():
            bnd = self.ball.basis.boundary_of(cell)
            for i in range(self.src.size):
                lhs = self.value(cell, i).d()
                rhs = self.eval_chain(bnd, i)
                if lhs != rhs:
                    bad.append((cell, i))
        return bad


def zero_morphism(ball, src, dst, Q):
    return TrackMorphism(ball, src, dst, Q, {})


def identity_morphism(ball, module, Q):
    values = {}
    for cell in ball.basis.cells_of_dim(0):
        for i in range(module.size):
            values[(cell, i)] = ModElem.generator(module, Q, i)
    return TrackMorphism(ball, module, module, Q, values)


def pt_morphism(ball, Q, src, dst, entries):
    """Morphism over the point from a matrix of degree-0 algebra vectors.

    entries: dict (target index j, source index i) -> sparse algebra vector.
    """
    cells = ball.basis.cells_of_dim(0)
    if len(ball.basis.cells()) != 1:
        raise UserInputError("pt_morphism needs the one-cell base")
    cell = cells[0]
    values = {}
    for i in range(src.size):
        coeffs = {}
        for (j, ii), vec in entries.items():
            if ii != i:
                continue
            for q, c in vec.items():
                coeffs[(j, q)] = (coeffs.get((j, q), 0) + c) % Q.m
        elem = ModElem(dst, Q, coeffs).clean()
        if not elem.is_zero():
            values[(cell, i)] = elem
    return TrackMorphism(ball, src, dst, Q, values)


def lift_from_point(ball, f):
    """The base-change of a point morphism along the counit (constant lift)."""
    values = {}
    pt_cell = f.ball.basis.cells()[0]
    for cell in ball.basis.cells_of_dim(0):
        for i in range(f.src.size):
            v = f.value(pt_cell, i)
            if not v.is_zero():
                values[(cell, i)] = v.copy()
    return TrackMorphism(ball, f.src, f.dst, f.Q, values)


def apply_q_linear(g, cell, elem):
    """g(cell x -) applied Q-linearly to an element of g's source module."""
    out = ModElem.zero(g.dst, g.Q)
    for (j, q), c in elem.coeffs.items():
        gv = g.value(cell, j)
        if gv.is_zero():
            continue
        out = out.add(gv.rmul({q: 1}), scale=c)
    if elem.tainted:
        out = ModElem(out.module, out.Q, out.coeffs, True)
    return out


def compose(g, f):
    """Composite through the diagonal of the common base."""
    if f.dst != g.src:
        raise UserInputError("composition needs matching modules")
    if f.ball.basis is not g.ball.basis and f.ball.basis.dims != g.ball.basis.dims:
        raise UserInputError("composition needs a common base")
    basis = f.ball.basis
    values = {}
    flag = f.tainted or g.tainted
    for cell in basis.cells():
        for i in range(f.src.size):
            out = ModElem.zero(g.dst, g.Q)
            for sign, front, back in basis.diag_of(cell):
                fv = f.values.get((back, i))
                if fv is None:
                    continue
                out = out.add(apply_q_linear(g, front, fv), scale=sign)
            flag = flag or out.tainted
            if not out.is_zero():
                values[(cell, i)] = out
    return TrackMorphism(f.ball, f.src, g.dst, g.Q, values, flag).clean()


def restrict(f, cells, boundary=(), label=""):
    """Restriction to a subcomplex of the base."""
    from .cubical import CubicalComplex

    cc = None
    if f.ball.complex is not None:
        cc = CubicalComplex(f.ball.complex.ambient, frozenset(cells))
    sub = Ball(
        f.ball.basis.subbasis(cells, label=label or (f.ball.label + "|sub")),
        frozenset(boundary),
        cc,
        label or (f.ball.label + "|sub"),
    )
    values = {(c, i): v.copy() for (c, i), v in f.values.items() if c in sub.basis.dims}
    return TrackMorphism(sub, f.src, f.dst, f.Q, values, f.window_tainted)


def restrict_to_ball(f, ball):
    values = {(c, i): v.copy() for (c, i), v in f.values.items() if c in ball.basis.dims}
    return TrackMorphism(ball, f.src, f.dst, f.Q, values, f.window_tainted)


def pullback(f, phi, new_ball):
    """f composed with a chain map phi from new_ball's basis into f's base."""
    values = {}
    for cell in new_ball.basis.cells():
        row = phi.get(cell, {})
        for i in range(f.src.size):
            v = f.eval_chain(row, i)
            if not v.is_zero():
                values[(cell, i)] = v
    return TrackMorphism(new_ball, f.src, f.dst, f.Q, values, f.window_tainted)


def glue(pieces, ball):
    """Union of value tables over a union base; overlaps must agree exactly."""
    if not pieces:
        raise UserInputError("nothing to glue")
    src, dst, Q = pieces[0].src, pieces[0].dst, pieces[0].Q
    values = {}
    owner = {}
    for f in pieces:
        if f.src != src or f.dst != dst:
            raise UserInputError("glued pieces must share modules")
        for cell in f.ball.basis.cells():
            if cell not in ball.basis.dims:
                raise UserInputError(f"piece cell {cell!r} outside the glued ball")
            for i in range(src.size):
                v = f.value(cell, i)
                if (cell, i) in owner:
                    if not (values.get((cell, i), ModElem.zero(dst, Q)) == v):
                        raise UserInputError(f"face mismatch when gluing at {cell!r}")
                else:
                    owner[(cell, i)] = True
                    if not v.is_zero():
                        values[(cell, i)] = v.copy()
    covered = set()
    for f in pieces:
        covered.update(f.ball.basis.dims)
    if covered != set(ball.basis.dims):
        raise UserInputError("glued pieces do not cover the target ball")
    flag = any(f.window_tainted for f in pieces)
    return TrackMorphism(ball, src, dst, Q, values, flag)


def product_ball(b1, b2):
    from .cubical import complex_basis, product_complex

    if b1.complex is None or b2.complex is None:
        raise UserInputError("tensor products need cubical bases")
    prod = product_complex(b1.complex, b2.complex)
    bd = frozenset(
        x + y
        for x in b1.complex.cells
        for y in b2.complex.cells
        if x in b1.boundary or y in b2.boundary
    )
    return Ball(complex_basis(prod), bd, prod, f"{b1.label}x{b2.label}")


def tensor(g, f):
    """The product morphism over B' x B: apply f in the back factor, then g."""
    if f.dst != g.src:
        raise UserInputError("tensor needs matching modules")
    ball = product_ball(g.ball, f.ball)
    values = {}
    flag = f.tainted or g.tainted
    for c1 in g.ball.complex.sorted_cells():
        for c2 in f.ball.complex.sorted_cells():
            for i in range(f.src.size):
                fv = f.values.get((c2, i))
                if fv is None:
                    continue
                out = apply_q_linear(g, c1, fv)
                flag = flag or out.tainted
                if not out.is_zero():
                    values[(c1 + c2, i)] = out
    return TrackMorphism(ball, f.src, g.dst, g.Q, values, flag)


def inject_cubical(f, position, digit, ambient_ball):
    """Pushforward along the face inclusion inserting a fixed digit."""
    d = str(digit)
    values = {}
    cells = []
    for (c, i), v in f.values.items():
        values[(c[:position] + d + c[position:], i)] = v.copy()
    for c in f.ball.basis.cells():
        cells.append(c[:position] + d + c[position:])
    sub = Ball(
        ambient_ball.basis.subbasis(cells),
        frozenset(),
        None,
        f"{f.ball.label}@{position}:{digit}",
    )
    return TrackMorphism(sub, f.src, f.dst, f.Q, values, f.window_tainted)


# ---------------------------------------------------------------------------
# homotopies


@dataclass
class HomotopyWitness:
    mor: TrackMorphism
    cyl: CylinderComplex
    base_ball: Ball

    def _face(self, namer):
        values = {}
        for c in self.base_ball.basis.cells():
            for i in range(self.mor.src.size):
                v = self.mor.value(namer(c), i)
                if not v.is_zero():
                    values[(c, i)] = v.copy()
        return TrackMorphism(
            self.base_ball, self.mor.src, self.mor.dst, self.mor.Q, values, self.mor.window_tainted
        )

    def bottom(self):
        return self._face(self.cyl.bottom)

    def top(self):
        return self._face(self.cyl.top)

    def sleeve_value(self, cell, i):
        name = self.cyl.sleeve(cell)
        if name is None:
            return ModElem.zero(self.mor.dst, self.mor.Q)
        return self.mor.value(name, i)


def constant_homotopy(f, rel=None):
    jball, cyl = cylinder_ball(f.ball, rel)
    values = {}
    for c in f.ball.basis.cells():
        for i in range(f.src.size):
            v = f.value(c, i)
            if v.is_zero():
                continue
            values[(cyl.bottom(c), i)] = v.copy()
            if cyl.bottom(c) != cyl.top(c):
                values[(cyl.top(c), i)] = v.copy()
    mor = TrackMorphism(jball, f.src, f.dst, f.Q, values, f.window_tainted)
    return HomotopyWitness(mor, cyl, f.ball)


def opposite(w):
    values = {}
    for c in w.base_ball.basis.cells():
        for i in range(w.mor.src.size):
            bot = w.mor.value(w.cyl.bottom(c), i)
            top = w.mor.value(w.cyl.top(c), i)
            if not top.is_zero():
                values[(w.cyl.bottom(c), i)] = top.copy()
            if w.cyl.bottom(c) != w.cyl.top(c) and not bot.is_zero():
                values[(w.cyl.top(c), i)] = bot.copy()
            s = w.cyl.sleeve(c)
            if s is not None:
                sv = w.mor.value(s, i)
                if not sv.is_zero():
                    values[(s, i)] = sv.scale(-1)
    mor = TrackMorphism(w.mor.ball, w.mor.src, w.mor.dst, w.mor.Q, values, w.mor.window_tainted)
    return HomotopyWitness(mor, w.cyl, w.base_ball)


def paste(w1, w2):
    """w1: f ~ g then w2: g ~ h, pulled back along the subdivision map."""
    if w1.cyl.collapse != w2.cyl.collapse:
        raise UserInputError("pasting needs homotopies relative to the same subcomplex")
    if not w1.top().equal(w2.bottom()):
        raise UserInputError("pasting needs matching middle faces")
    values = {}
    for c in w1.base_ball.basis.cells():
        for i in range(w1.mor.src.size):
            bot = w1.mor.value(w1.cyl.bottom(c), i)
            top = w2.mor.value(w2.cyl.top(c), i)
            if not bot.is_zero():
                values[(w1.cyl.bottom(c), i)] = bot.copy()
            if w1.cyl.bottom(c) != w1.cyl.top(c) and not top.is_zero():
                values[(w1.cyl.top(c), i)] = top.copy()
            s = w1.cyl.sleeve(c)
            if s is not None:
                sv = w1.mor.value(s, i).add(w2.mor.value(s, i))
                if not sv.is_zero():
                    values[(s, i)] = sv
    flag = w1.mor.window_tainted or w2.mor.window_tainted
    mor = TrackMorphism(w1.mor.ball, w1.mor.src, w1.mor.dst, w1.mor.Q, values, flag)
    return HomotopyWitness(mor, w1.cyl, w1.base_ball)


# ---------------------------------------------------------------------------
# the solver


@dataclass
class SolveBlock:
    generator: int
    slots: list  # (cell, (target gen, algebra name)) in solver column order
    solutions: object  # AffineSolutionSet
    chosen: tuple


@dataclass
class SolveResult:
    morphism: TrackMorphism
    blocks: list = field(default_factory=list)

    def choice_log(self, label):
        out = []
        for b in self.blocks:
            out.append(
                {
                    "stage": label,
                    "generator": b.generator,
                    "free_parameters": len(b.solutions.kernel_basis),
                    "chosen": list(b.chosen),
                }
            )
        return out


def solve_for_values(ball, Q, src, dst, prescribed, unknown_cells, choices=None):
    """Fill in values on unknown cells so the chain condition holds everywhere.

    prescribed: dict (cell, generator) -> ModElem on the known cells.
    choices: dict generator -> coefficient tuple over that block's kernel.
    Returns SolveResult or (None, certificate).
    """
    unknown_cells = sorted(unknown_cells, key=lambda c: (ball.basis.dim(c), c))
    unknown_set = set(unknown_cells)
    known = {}
    tainted = False
    for (c, i), v in prescribed.items():
        if c in unknown_set:
            raise InternalInvariantError("prescribed value on an unknown cell")
        known[(c, i)] = v
        tainted = tainted or v.tainted

    values = {k: v.copy() for k, v in known.items() if not v.is_zero()}
    blocks = []
    for i in range(src.size):
        deg = src.degree(i)
        slots = []
        offset = {}
        for c in unknown_cells:
            pb = pair_basis(dst, Q, deg, ball.basis.dim(c))
            offset[c] = len(slots)
            slots.extend((c, key) for key in pb)
        rows = []
        rhs = []
        for cell in ball.basis.cells():
            s = ball.basis.dim(cell)
            if s == 0:
                continue
            row_basis = pair_basis(dst, Q, deg, s - 1)
            if not row_basis:
                continue
            row_index = {key: t for t, key in enumerate(row_basis)}
            block = [[0] * len(slots) for _ in row_basis]
            const = [0] * len(row_basis)
            touched = False

            def add_value(cell2, scale, via_d):
                nonlocal touched
                if cell2 in unknown_set:
                    base = offset[cell2]
                    pb2 = pair_basis(dst, Q, deg, ball.basis.dim(cell2))
                    for t2, (j, q) in enumerate(pb2):
                        if via_d:
                            for x, v in Q.d_of(q).items():
                                r = row_index.get((j, x))
                                if r is not None:
                                    block[r][base + t2] = (block[r][base + t2] + scale * v) % Q.m
                                    touched = True
                        else:
                            r = row_index.get((j, q))
                            if r is not None:
                                block[r][base + t2] = (block[r][base + t2] + scale) % Q.m
                                touched = True
                else:
                    v = known.get((cell2, i))
                    if v is None:
                        return
                    use = v.d() if via_d else v
                    for key, cv in use.coeffs.items():
                        r = row_index.get(key)
                        if r is not None:
                            const[r] = (const[r] + scale * cv) % Q.m
                            touched = True

            add_value(cell, 1, True)
            for face, coeff in ball.basis.boundary_of(cell).items():
                add_value(face, -coeff, False)
            if touched or cell in unknown_set:
                rows.extend(block)
                rhs.extend((-c2) % Q.m for c2 in const)
        sol = solve_dense(rows, rhs, Q.m, cols=len(slots))
        if sol is None:
            cert = {
                "generator": src.name(i),
                "unknowns": len(slots),
                "reason": "no solution to the chain conditions",
            }
            return None, cert
        pick = tuple((choices or {}).get(i, ()))
        if pick and len(pick) != len(sol.kernel_basis):
            raise UserInputError("choice vector has the wrong number of parameters")
        x = sol.member(pick) if pick else sol.particular
        blocks.append(SolveBlock(i, slots, sol, pick if pick else (0,) * len(sol.kernel_basis)))
        for t, (c, key) in enumerate(slots):
            if x[t] % Q.m:
                cur = values.get((c, i), ModElem.zero(dst, Q))
                cur = cur.add(ModElem(dst, Q, {key: x[t]}, tainted))
                values[(c, i)] = cur
    mor = TrackMorphism(ball, src, dst, Q, values, tainted).clean()
    return SolveResult(mor, blocks), None


def extend(ball, partial, zero_cells, choices=None):
    """Extension of a partial morphism by zero on the opposite subcomplex.

    partial is a morphism over a subcomplex of ball; zero_cells carry the
    prescribed zero.  Returns (SolveResult, None) or (None, certificate).
    """
    prescribed = {}
    for c in partial.ball.basis.cells():
        for i in range(partial.src.size):
            prescribed[(c, i)] = partial.value(c, i)
    for c in zero_cells:
        for i in range(partial.src.size):
            if (c, i) in prescribed:
                if not prescribed[(c, i)].is_zero():
                    return None, {
                        "generator": partial.src.name(i),
                        "reason": f"prescribed zero conflicts with partial data at {c!r}",
                    }
            prescribed[(c, i)] = ModElem.zero(partial.dst, partial.Q)
    unknown = [c for c in ball.basis.cells() if c not in partial.ball.basis.dims and c not in set(zero_cells)]
    return solve_for_values(ball, partial.Q, partial.src, partial.dst, prescribed, unknown, choices)


def homotopic(f, g, rel=None, choices=None):
    """A homotopy witness f ~ g relative to rel (default: the ball boundary).

    Returns (HomotopyWitness, SolveResult) or (None, certificate).  The
    morphisms must agree on the rel subcomplex.
    """
    if f.src != g.src or f.dst != g.dst:
        raise UserInputError("homotopy needs matching modules")
    collapse = f.ball.boundary if rel is None else frozenset(rel)
    for c in collapse:
        for i in range(f.src.size):
            if not (f.value(c, i) == g.value(c, i)):
                raise UserInputError(f"morphisms differ on the rel subcomplex at {c!r}")
    jball, cyl = cylinder_ball(f.ball, collapse)
    prescribed = {}
    for c in f.ball.basis.cells():
        for i in range(f.src.size):
            prescribed[(cyl.bottom(c), i)] = f.value(c, i)
            if cyl.top(c) != cyl.bottom(c):
                prescribed[(cyl.top(c), i)] = g.value(c, i)
    unknown = [c for c in jball.basis.cells() if c.startswith("e:")]
    res, cert = solve_for_values(jball, f.Q, f.src, f.dst, prescribed, unknown, choices)
    if res is None:
        return None, cert
    return HomotopyWitness(res.morphism, cyl, f.ball), res


def nullhomotopy(f, choices=None):
    return homotopic(f, zero_morphism(f.ball, f.src, f.dst, f.Q), choices=choices)


# ---------------------------------------------------------------------------
# actions and obstructions


def face_ball_of(ball, cells, label=""):
    """The face as a ball: boundary = cells shared with the rest of the boundary."""
    from .cubical import opposite_face

    rim = frozenset(cells) & opposite_face(ball, cells)
    return Ball(ball.basis.subbasis(cells, label=label), rim, None, label or "face")


def sigma_homotopy(f, alpha, orientation=1):
    """The boundary-trivial self-homotopy of f over J(face) classified by alpha.

    f lives over a face ball with a unique interior top cell; the sleeve value
    over the top cell is minus the representative of alpha (scaled by the
    requested orientation), which normalizes obstructions so that acting on
    the zero morphism produces obstruction class exactly alpha.
    """
    w = constant_homotopy(f)
    tops = [c for c in f.ball.basis.cells_of_dim(f.ball.basis.max_dim) if c not in w.cyl.collapse]
    if len(tops) != 1:
        raise UserInputError("sigma needs a unique interior top cell")
    top = tops[0]
    entry = {(j, i): h for j, i, h in alpha.entries}
    for i in range(f.src.size):
        add = {}
        for (j, ii), h in entry.items():
            if ii != i:
                continue
            for name, c in h.rep:
                add[(j, name)] = (add.get((j, name), 0) - c * orientation) % f.Q.m
        if add:
            cur = w.mor.values.get((w.cyl.sleeve(top), i), ModElem.zero(f.dst, f.Q))
            w.mor.values[(w.cyl.sleeve(top), i)] = cur.add(ModElem(f.dst, f.Q, add))
    w.mor.clean()
    return w


def act(F, witness, face_cells):
    """Glue a cylinder carrying the witness onto the face and sweep across it."""
    att = AttachedCylinder(F.ball, face_cells)
    cyl = witness.cyl
    base_cells = set(witness.base_ball.basis.dims)
    if base_cells != set(face_cells):
        raise UserInputError("witness base must be the face being acted on")
    for c in face_cells:
        for i in range(F.src.size):
            if not (witness.mor.value(cyl.top(c), i) == F.value(c, i)):
                raise UserInputError("witness top face must equal the restriction of F")
    phi = att.action_map()
    values = {}
    flag = F.tainted or witness.mor.tainted
    for c in F.ball.basis.cells():
        for i in range(F.src.size):
            if c in att.face_interior:
                acc = witness.mor.value(cyl.bottom(c), i)
            else:
                row = phi[c]
                acc = ModElem.zero(F.dst, F.Q)
                for x, coeff in row.items():
                    if x.startswith("e:"):
                        acc = acc.add(witness.mor.value("e:" + x[2:], i), scale=coeff)
                    elif x.startswith("0:"):
                        acc = acc.add(witness.mor.value(cyl.bottom(x[2:]), i), scale=coeff)
                    else:
                        acc = acc.add(F.value(x, i), scale=coeff)
            flag = flag or acc.tainted
            if not acc.is_zero():
                values[(c, i)] = acc
    return TrackMorphism(F.ball, F.src, F.dst, F.Q, values, flag)


def act_nat(F, alpha, face_ball, nat, orientation=1):
    """The normalized action of a natural-system element through a face."""
    eps = orientation_sign(F.ball, face_ball) * orientation
    f_face = restrict_to_ball(F, face_ball)
    w = sigma_homotopy(f_face, alpha, orientation=eps)
    return act(F, w, set(face_ball.basis.dims))


def _corner_data(ball):
    """If the ball is a union of cube facets through a corner, return
    (ambient dimension, [(top cell, position of its fixed 0)])."""
    tops = ball.basis.cells_of_dim(ball.basis.max_dim)
    data = []
    for t in tops:
        fixed = [(i, ch) for i, ch in enumerate(t) if ch != "*"]
        if len(fixed) != 1 or fixed[0][1] != "0":
            return None
        data.append((t, fixed[0][0]))
    if len(data) < 2:
        return None
    return len(tops[0]), data


def obstruction(F, nat, orientation=1):
    """Obstruction class of a morphism vanishing on its ball boundary.

    For a cube the class of the top-cell value; for a union of facets through
    a corner the signed sum of facet classes, normalized to agree with the
    cube convention when all but one facet vanish.
    """
    for c in F.ball.boundary:
        for i in range(F.src.size):
            if not F.value(c, i).is_zero():
                raise UserInputError("obstruction needs a boundary-trivial morphism")
    corner = _corner_data(F.ball)
    contributions = []  # (coefficient, top cell)
    if corner is None:
        tops = F.ball.basis.cells_of_dim(F.ball.basis.max_dim)
        if len(tops) != 1:
            raise UserInputError("obstruction needs a cube or a corner-faces ball")
        contributions.append((1, tops[0]))
        dim = F.ball.basis.max_dim
    else:
        ambient, data = corner
        dim = F.ball.basis.max_dim
        for top, pos in data:
            coeff = -1 if (dim + pos) % 2 else 1
            contributions.append((coeff, top))
    entries = {}
    for i in range(F.src.size):
        acc = ModElem.zero(F.dst, F.Q)
        for coeff, top in contributions:
            acc = acc.add(F.value(top, i), scale=coeff * orientation)
        for j in range(F.dst.size):
            vec = {q: c for (jj, q), c in acc.coeffs.items() if jj == j}
            if not vec:
                continue
            r = F.src.degree(i) - F.dst.degree(j)
            entries[(j, i)] = nat.hom.class_of(vec, r)
    return NatElem.build(nat.k, F.src, F.dst, entries)


def h0_matrix(f, h0):
    """Homology classes of a point morphism's entries."""
    cell = f.ball.basis.cells()[0]
    out = {}
    for i in range(f.src.size):
        v = f.value(cell, i)
        for j in range(f.dst.size):
            vec = {q: c for (jj, q), c in v.coeffs.items() if jj == j}
            r = f.src.degree(i) - f.dst.degree(j)
            if 0 <= r <= f.Q.r_max:
                out[(j, i)] = h0.class_of(vec, r)
    return out
