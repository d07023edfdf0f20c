"""Higher Toda brackets, higher chain complexes, and Adams differentials.

Given a composable sequence of maps with vanishing consecutive composites,
nullhomotopy data is built level by level: the level-k datum for index i is
a morphism over the k-cube extending the glued assembly of lower data over
the union of the cube facets through the origin, with zero prescribed on
the facets through the opposite corner.  The obstruction class of the final
assembly is the bracket representative.  Every solver choice is logged and
can be replayed, and the oracle walks the whole choice tree to produce the
exact bracket set.
"""

from dataclasses import dataclass, field

from .chain_algebra import NatSystem
from .cubical import corner_ball, cube_ball
from .errors import InternalInvariantError, UserInputError
from .oracle_support import EnumerationBudget, enumerate_block_choices
from .track import (
    extend,
    glue,
    inject_cubical,
    obstruction,
    pt_morphism,
    tensor,
)

DEFINED = "defined"
NOT_CONSTRUCTIBLE = "not_constructible"
WINDOW_UNSOUND = "degree_window_unsound"


@dataclass(frozen=True)
class MorphismSequence:
    """Maps X_N -> ... -> X_1 -> X_0 over the point, with chosen cycle lifts.

    maps[t] is the (t+1)-st map, from modules[t+1] to modules[t].
    """

    modules: tuple
    maps: tuple

    @staticmethod
    def of(modules, maps):
        seq = MorphismSequence(tuple(modules), tuple(maps))
        for t, f in enumerate(seq.maps):
            if f.src != seq.modules[t + 1] or f.dst != seq.modules[t]:
                raise UserInputError(f"map {t + 1} does not match the module chain")
            if len(f.ball.basis.cells()) != 1:
                raise UserInputError("sequence maps must live over the point")
        return seq

    @property
    def length(self):
        return len(self.maps)


@dataclass
class BracketResult:
    status: str
    representative: object = None
    step: int = None
    index: int = None
    certificate: dict = None
    choice_log: list = field(default_factory=list)


@dataclass
class HigherChainComplex:
    """Coherent nullhomotopy data for a sequence through a given order."""

    seq: MorphismSequence
    order: int
    data: dict  # (index i, level k) -> TrackMorphism over the k-cube
    choice_log: list = field(default_factory=list)


class _Tower:
    """Shared induction: level-k data for each index, with choice logging."""

    def __init__(self, Q, seq, order, prescribed=None, choices=None):
        self.Q = Q
        self.seq = seq
        self.order = order
        self.prescribed = dict(prescribed or {})
        self.choices = dict(choices or {})
        self.data = {}
        self.log = []
        for i in range(1, seq.length + 1):
            self.data[(i, 0)] = seq.maps[i - 1]

    def glued_assembly(self, i, k):
        """The union over the corner facets of the (k+1)-cube for index i.

        Face r (the facet with a 0 in slot r+1) carries the product of the
        level-r datum at i with the level-(k-r) datum at i+r+1.
        """
        ball = corner_ball(k + 1, 0)
        pieces = []
        for r in range(k + 1):
            left = self.data[(i, r)]
            right = self.data[(i + r + 1, k - r)]
            piece = inject_cubical(tensor(left, right), r, 0, ball)
            pieces.append(piece)
        try:
            return glue(pieces, ball)
        except UserInputError as exc:
            raise InternalInvariantError(
                f"face compatibility failed while assembling index {i} level {k}: {exc}"
            ) from exc

    def build_level(self, i, k):
        """Extend the glued assembly across the k-cube, zero on the far corner."""
        if (i, k) in self.data:
            return None
        if (i, k) in self.prescribed:
            self.data[(i, k)] = self.prescribed[(i, k)]
            return None
        partial = self.glued_assembly(i, k - 1)
        ball = cube_ball(k)
        zero_cells = [c for c in ball.basis.cells() if "1" in c]
        res, cert = extend(ball, partial, zero_cells, self.choices.get((i, k)))
        if res is None:
            return {"step": k, "index": i, "certificate": cert}
        self.data[(i, k)] = res.morphism
        self.log.extend(res.choice_log(f"level {k} index {i}"))
        return None

    def solve_result(self, i, k):
        """Solver blocks for the level-(i,k) extension given current data."""
        partial = self.glued_assembly(i, k - 1)
        ball = cube_ball(k)
        zero_cells = [c for c in ball.basis.cells() if "1" in c]
        return extend(ball, partial, zero_cells, self.choices.get((i, k)))

    def tainted(self):
        return any(m.tainted for m in self.data.values())


def _final_assembly(tower, n):
    F = tower.glued_assembly(1, n)
    return F


def toda_bracket(Q, seq, n, choices=None, nat=None):
    """Deterministic representative of the order-n bracket of an (n+2)-sequence."""
    if Q.n != n:
        raise UserInputError(f"the algebra is {Q.n}-truncated but order {n} was requested")
    if seq.length != n + 2:
        raise UserInputError(f"order-{n} brackets need {n + 2} maps, got {seq.length}")
    bad = Q.validate()
    if bad:
        raise UserInputError("the algebra is invalid", detail={"violations": bad[:5]})
    nat = nat or NatSystem(Q, n)
    tower = _Tower(Q, seq, n, choices=choices)
    for k in range(1, n + 1):
        for i in range(1, seq.length - k + 1):
            fail = tower.build_level(i, k)
            if fail is not None:
                return BracketResult(
                    NOT_CONSTRUCTIBLE,
                    step=fail["step"],
                    index=fail["index"],
                    certificate=fail["certificate"],
                    choice_log=tower.log,
                )
    F = _final_assembly(tower, n)
    rep = obstruction(F, nat)
    status = WINDOW_UNSOUND if (tower.tainted() or F.tainted) else DEFINED
    return BracketResult(status, representative=rep, choice_log=tower.log)


def oracle_bracket_set(Q, seq, n, budget=None, nat=None):
    """The exact bracket set by exhaustive enumeration of every choice."""
    if Q.n != n:
        raise UserInputError(f"the algebra is {Q.n}-truncated but order {n} was requested")
    if seq.length != n + 2:
        raise UserInputError(f"order-{n} brackets need {n + 2} maps, got {seq.length}")
    nat = nat or NatSystem(Q, n)
    budget = budget if budget is not None else EnumerationBudget()
    stages = [(k, i) for k in range(1, n + 1) for i in range(1, seq.length - k + 1)]
    found = {}

    def rec(idx, tower):
        budget.charge()
        if idx == len(stages):
            F = _final_assembly(tower, n)
            if tower.tainted() or F.tainted:
                raise UserInputError("bracket enumeration crossed the degree window")
            rep = obstruction(F, nat)
            found.setdefault(rep.coords_key(), rep)
            return
        k, i = stages[idx]
        res, cert = tower.solve_result(i, k)
        if res is None:
            return
        for choice in enumerate_block_choices(res, budget):
            sub = _Tower(Q, seq, n, choices={(i, k): choice})
            sub.data = dict(tower.data)
            fail = sub.build_level(i, k)
            if fail is not None:
                continue
            rec(idx + 1, sub)

    rec(0, _Tower(Q, seq, n))
    return [found[key] for key in sorted(found)]


def triple_indeterminacy(Q, seq, nat=None):
    """Generators of the indeterminacy subgroup of a triple bracket.

    The subgroup of D^1(X3, X0) generated by precomposition of D^1(X2, X0)
    with the last map and postcomposition of D^1(X3, X1) with the first.
    """
    if seq.length != 3:
        raise UserInputError("triple indeterminacy needs exactly 3 maps")
    if Q.n != 1:
        raise UserInputError("triple indeterminacy is defined for 1-truncated algebras")
    nat = nat or NatSystem(Q, 1)
    X0, X1, X2, X3 = seq.modules
    first = _pt_entries(seq.maps[0])
    last = _pt_entries(seq.maps[2])
    gens = []
    for j, i, r in nat.slots(X2, X0):
        pres = nat.hom.presentation(r)
        for t in range(pres.rank):
            coords = tuple(int(s == t) for s in range(pres.rank))
            h = nat.hom.class_from_coords(r, coords)
            elem = nat.from_cycles(X2, X0, {(j, i): dict(h.rep)})
            img = nat.act_pre(elem, last, X3)
            if not img.is_zero():
                gens.append(img)
    for j, i, r in nat.slots(X3, X1):
        pres = nat.hom.presentation(r)
        for t in range(pres.rank):
            coords = tuple(int(s == t) for s in range(pres.rank))
            h = nat.hom.class_from_coords(r, coords)
            elem = nat.from_cycles(X3, X1, {(j, i): dict(h.rep)})
            img = nat.act_post(first, X0, elem)
            if not img.is_zero():
                gens.append(img)
    seen = {}
    for g in gens:
        seen.setdefault(g.coords_key(), g)
    return [seen[k] for k in sorted(seen)]


def _pt_entries(f):
    cell = f.ball.basis.cells()[0]
    out = {}
    for i in range(f.src.size):
        v = f.value(cell, i)
        for (j, q), c in v.coeffs.items():
            out.setdefault((j, i), {})[q] = c
    return out


def build_chain_complex(Q, seq, n, choices=None, search_budget=None, nat=None):
    """Coherent data with every window obstruction vanishing, if it exists.

    The pinned deterministic choices are tried first; on failure a bounded
    exhaustive search over all solver choices looks for a coherent
    assignment.  Returns (HigherChainComplex, None) or (None, failure).
    """
    if Q.n != n:
        raise UserInputError(f"the algebra is {Q.n}-truncated but order {n} was requested")
    nat = nat or NatSystem(Q, n)
    budget = search_budget if search_budget is not None else EnumerationBudget(2**14)
    stages = [(k, i) for k in range(1, n + 1) for i in range(1, seq.length - k + 1)]
    windows = list(range(1, seq.length - n))  # F_i^n needs maps i .. i+n+1
    last_failure = {}

    def rec(idx, tower):
        budget.charge()
        if idx == len(stages):
            for i in windows:
                F = tower.glued_assembly(i, n)
                rep = obstruction(F, nat)
                if not rep.is_zero():
                    last_failure.update(
                        {"step": n + 1, "index": i, "certificate": {"obstruction": rep.coords_key()}}
                    )
                    return None
            return tower
        k, i = stages[idx]
        res, cert = tower.solve_result(i, k)
        if res is None:
            last_failure.update({"step": k, "index": i, "certificate": cert})
            return None
        if choices and (i, k) in choices:
            options = [choices[(i, k)]]
        else:
            options = enumerate_block_choices(res, budget)
        for choice in options:
            sub = _Tower(Q, seq, n)
            sub.data = dict(tower.data)
            sub.choices = {(i, k): choice}
            sub.log = list(tower.log)
            fail = sub.build_level(i, k)
            if fail is not None:
                last_failure.update(fail)
                continue
            done = rec(idx + 1, sub)
            if done is not None:
                return done
        return None

    tower = rec(0, _Tower(Q, seq, n))
    if tower is None:
        return None, dict(last_failure)
    data = {key: mor for key, mor in tower.data.items() if key[1] >= 1}
    return HigherChainComplex(seq, n, data, tower.log), None


def adams_d(Q, complex_, beta, n, choices=None, nat=None):
    """Representative of the next differential on a class given by beta.

    complex_ carries coherent data for the resolution window; the sequence is
    augmented by beta as its last map, the missing nullhomotopy tower for
    beta is built at levels 1..n reusing the window data, and the obstruction
    of the final corner assembly is returned.
    """
    if Q.n != n:
        raise UserInputError(f"the algebra is {Q.n}-truncated but order {n} was requested")
    if complex_.order != n:
        raise UserInputError("the chain complex must be built at the same order")
    if complex_.seq.length < n + 1:
        raise UserInputError(f"resolution window too short: need {n + 1} maps")
    if beta.dst != complex_.seq.modules[n + 1]:
        raise UserInputError("the class lift must land in the end of the window")
    nat = nat or NatSystem(Q, n)
    modules = list(complex_.seq.modules[: n + 2]) + [beta.src]
    maps = list(complex_.seq.maps[: n + 1]) + [beta]
    aug = MorphismSequence.of(modules, maps)
    prescribed = {
        (i, k): complex_.data[(i, k)]
        for (i, k) in complex_.data
        if i + k <= n + 1 and k >= 1
    }
    tower = _Tower(Q, aug, n, prescribed=prescribed, choices=choices)
    for k in range(1, n + 1):
        for i in range(1, aug.length - k + 1):
            fail = tower.build_level(i, k)
            if fail is not None:
                return BracketResult(
                    NOT_CONSTRUCTIBLE,
                    step=fail["step"],
                    index=fail["index"],
                    certificate=fail["certificate"],
                    choice_log=tower.log,
                )
    F = _final_assembly(tower, n)
    rep = obstruction(F, nat)
    status = WINDOW_UNSOUND if (tower.tainted() or F.tainted) else DEFINED
    return BracketResult(status, representative=rep, choice_log=tower.log)
