"""Automata-based consistency over the rational timeline.

Time is tiled by ruler cells at spacing d (the instance gcd): points k*d and
open segments (k*d, (k+1)*d).  A window assigns each covered cell a letter,
the set of ground atoms holding there.  A cell is *committed* once the window
contains its whole z-neighbourhood; committed cells must satisfy every ground
rule exactly.  Consistency = a satisfiable assignment of the span
Q = [-x-z, x+z] that extends to infinite runs in both directions, found by
depth-first search with cycle detection on shift-invariant window states.

Unbounded operator intervals are supported where the shipped pipeline
produces them: the entailment reduction's rule BOTTOM :- anchor, BOX[0,inf)M
with a punctual anchor fact.  Such a rule is equivalent to the obligation
"some model makes M fail on the box side of the anchor", a one-shot
eventuality tracked as a sticky discharge flag in the search state.  Other
unbounded-interval literals in rules are rejected.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Iterator, Optional, Sequence

from .dense_grid import instance_granularity, total_reach
from .evaluation import apply_operator, merge_intervals, reverse_head
from .intervals import interval_op
from .intervals import (
    Interval,
    POS_INF,
    intersect,
    is_finite,
    make,
    normalize,
    point,
    subset,
)
from .materialisation import apply_rules
from .store import AtomKey, FactStore
from .syntax import (
    BinaryOp,
    Bottom,
    Fact,
    MetricAtom,
    Program,
    Rel,
    RelationalAtom,
    Rule,
    Top,
    UnaryOp,
    atom_variables,
    ground,
    relational_atoms,
    substitute,
)


class Cancelled(Exception):
    """Raised when a cancellation token fires mid-search."""


class SearchBudgetExceeded(RuntimeError):
    """The state budget ran out before a definitive answer."""


# ---------------------------------------------------------------- reduction


@dataclass(frozen=True)
class ReductionOutput:
    program: Program
    dataset: tuple[Fact, ...]
    fresh_predicate: str


def _fresh_predicate(program: Program, dataset: Sequence[Fact]) -> str:
    used = program.predicates() | {f.atom.predicate for f in dataset}
    if "QF" not in used:
        return "QF"
    n = 1
    while f"QF{n}" in used:
        n += 1
    return f"QF{n}"


def entail_to_inconsist(
    program: Program, dataset: Sequence[Fact], query: Fact
) -> ReductionOutput:
    """Reduce fact entailment to inconsistency of an extended instance.

    Adds BOTTOM :- Q_f, B and Q_f@[p,p], where B holds at the anchor p iff
    the query atom holds throughout the query interval.  Query intervals
    unbounded on both sides are rejected.
    """
    rho = query.interval
    m = Rel(query.atom)
    if is_finite(rho.left) and is_finite(rho.right):
        if rho.is_punctual:
            p, b = rho.left, m
        else:
            p = rho.right
            # box openness mirrors the query openness: excluding an endpoint
            # of rho drops the corresponding end of the covering requirement
            box = make(Fraction(0), rho.right - rho.left, rho.right_open, rho.left_open)
            b = UnaryOp("BOXMINUS", box, m)
    elif is_finite(rho.left):
        p = rho.left
        b = UnaryOp("BOXPLUS", make(Fraction(0), POS_INF, rho.left_open, True), m)
    elif is_finite(rho.right):
        p = rho.right
        b = UnaryOp("BOXMINUS", make(Fraction(0), POS_INF, rho.right_open, True), m)
    else:
        raise ValueError("query intervals unbounded on both sides are unsupported")
    fresh = _fresh_predicate(program, dataset)
    qf = RelationalAtom(fresh, ())
    rule = Rule(Bottom(), (Rel(qf), b))
    return ReductionOutput(
        Program(program.rules + (rule,)),
        tuple(dataset) + (Fact(qf, point(p)),),
        fresh,
    )


# ---------------------------------------------------------------- universe


def literal_universe(program: Program, dataset: Sequence[Fact]) -> set[MetricAtom]:
    """Ground literals whose subsets label ruler cells: TOP, all groundings
    of the program's head and body literals, and the four unbounded box
    forms over each dataset atom."""
    consts = sorted(
        program.constants() | {a.name for f in dataset for a in f.atom.args}
    )
    out: set[MetricAtom] = {Top()}
    for r in program.rules:
        for lit in (r.head, *r.body):
            if isinstance(lit, (Top, Bottom)):
                continue
            vs = sorted(atom_variables(lit), key=lambda v: v.name)
            if not vs:
                out.add(lit)
                continue
            from .syntax import Constant

            for combo in itertools.product(consts, repeat=len(vs)):
                sigma = {v: Constant(c) for v, c in zip(vs, combo)}
                out.add(substitute(lit, sigma))
    inf_iv = lambda lo_open: make(Fraction(0), POS_INF, lo_open, True)
    for f in dataset:
        a = Rel(f.atom)
        for op in ("BOXMINUS", "BOXPLUS"):
            for lo_open in (False, True):
                out.add(UnaryOp(op, inf_iv(lo_open), a))
    return out


# ---------------------------------------------------------------- ruler grid


def _literal_reach(m: MetricAtom) -> Fraction:
    """How far (in time) the truth of m at a point can depend on atoms."""
    if isinstance(m, UnaryOp):
        return _op_extent(m.interval) + _literal_reach(m.sub)
    if isinstance(m, BinaryOp):
        return _op_extent(m.interval) + max(
            _literal_reach(m.left), _literal_reach(m.right)
        )
    return Fraction(0)


def _op_extent(iv: Interval) -> Fraction:
    vals = [abs(b) for b in (iv.left, iv.right) if is_finite(b)]
    return max(vals, default=Fraction(0))


@dataclass(frozen=True)
class RulerGrid:
    d: Fraction
    x: Fraction
    z: Fraction
    span: Interval  # Q = [-x-z, x+z]

    # cell c: even -> point (c/2)*d, odd -> segment between neighbour points
    def cell_interval(self, c: int) -> Interval:
        if c % 2 == 0:
            return point((c // 2) * self.d)
        k = (c - 1) // 2
        return normalize(k * self.d, (k + 1) * self.d, True, True)

    def point_cell(self, t: Fraction) -> int:
        q = Fraction(t) / self.d
        if q.denominator != 1:
            raise ValueError(f"{t} is not on the d={self.d} grid")
        return 2 * q.numerator

    @property
    def span_lo_cell(self) -> int:
        return self.point_cell(self.span.left)

    @property
    def span_hi_cell(self) -> int:
        return self.point_cell(self.span.right)

    @property
    def z_cells(self) -> int:
        return int(2 * self.z / self.d)

    def cells_in(self, iv: Interval) -> list[int]:
        """Cells intersecting a bounded interval."""
        if iv.is_empty:
            return []
        if not (is_finite(iv.left) and is_finite(iv.right)):
            raise ValueError("cells_in requires a bounded interval")
        kmin = (Fraction(iv.left) / self.d).__floor__()
        kmax = (Fraction(iv.right) / self.d).__floor__() + 1
        out = []
        for c in range(2 * kmin - 1, 2 * kmax + 2):
            if not intersect(self.cell_interval(c), iv).is_empty:
                out.append(c)
        return out

    def covered_cells(self, iv: Interval) -> list[int]:
        return [c for c in self.cells_in(iv) if subset(self.cell_interval(c), iv)]


def ruler_grid(program: Program, dataset: Sequence[Fact]) -> RulerGrid:
    d = instance_granularity(program, list(dataset))
    endpoints = [
        abs(b)
        for f in dataset
        for b in (f.interval.left, f.interval.right)
        if is_finite(b)
    ]
    x = max(endpoints, default=Fraction(0))
    reaches = [
        _literal_reach(lit) for r in program.rules for lit in (r.head, *r.body)
    ]
    z = max(reaches, default=Fraction(0))
    return RulerGrid(d, x, z, make(-x - z, x + z, False, False))


# ---------------------------------------------------------------- window


Letter = frozenset  # of AtomKey


@dataclass(frozen=True)
class Window:
    grid: RulerGrid
    lo: int
    letters: tuple[Letter, ...]

    @property
    def hi(self) -> int:
        return self.lo + len(self.letters) - 1

    def interval(self) -> Interval:
        a = self.grid.cell_interval(self.lo)
        b = self.grid.cell_interval(self.hi)
        return normalize(a.left, b.right, a.left_open, b.right_open)

    def assignment(self) -> dict[int, Letter]:
        return {self.lo + i: l for i, l in enumerate(self.letters)}


def _letters_store(grid: RulerGrid, lo: int, letters: Sequence[Letter]) -> FactStore:
    s = FactStore()
    for i, letter in enumerate(letters):
        civ = grid.cell_interval(lo + i)
        for key in letter:
            s.insert_interval(key, civ)
    return s


def _check_window(
    grid: RulerGrid,
    ground_rules: Sequence[Rule],
    lo: int,
    letters: Sequence[Letter],
    committed: set[int],
) -> tuple[bool, bool]:
    """Validate rules over a window.

    Committed cells get the full check (head must be installed over its whole
    required region).  All other cells get the definite-violation check:
    bodies are monotone in the letters, so a body already true with its head
    missing inside the fixed window can never be repaired.  Returns
    (ok, fixable): fixable means the failure was a missing head overlapping
    the span, which a different span assignment might supply.
    """
    store = _letters_store(grid, lo, letters)
    hi = lo + len(letters) - 1
    wiv = normalize(
        grid.cell_interval(lo).left,
        grid.cell_interval(hi).right,
        grid.cell_interval(lo).left_open,
        grid.cell_interval(hi).right_open,
    )
    for rule in ground_rules:
        lists = []
        dead = False
        for lit in rule.body:
            t = apply_operator(lit, store)
            if not t:
                dead = True
                break
            lists.append(t)
        if dead:
            continue
        for iv in merge_intervals(lists):
            body_part = intersect(iv, wiv)
            if body_part.is_empty:
                continue
            for c in grid.cells_in(body_part):
                civ = grid.cell_interval(c)
                if c < lo or c > hi or intersect(civ, body_part).is_empty:
                    continue
                req = reverse_head(rule.head, civ)
                if isinstance(req, tuple):  # BOTTOM fired; never repairable
                    return False, False
                if c in committed:
                    if not store.entails_fact(req):
                        fixable = not intersect(req.interval, grid.span).is_empty
                        return False, fixable
                else:
                    part = intersect(req.interval, wiv)
                    if not part.is_empty and not store.entails_fact(
                        Fact(req.atom, part)
                    ):
                        fixable = not intersect(part, grid.span).is_empty
                        return False, fixable
    return True, False


# ---------------------------------------------------------------- obligations


@dataclass(frozen=True)
class Obligation:
    """One-shot eventuality: some cell on `direction`'s side of min_cell must
    lack `atom` (discharging the reduction's unbounded box)."""

    atom: AtomKey
    min_cell: int
    direction: int  # +1 right, -1 left


AcceptingConditions = tuple  # of Obligation


def _contains_unbounded(m: MetricAtom) -> bool:
    if isinstance(m, UnaryOp):
        return not (
            is_finite(m.interval.left) and is_finite(m.interval.right)
        ) or _contains_unbounded(m.sub)
    if isinstance(m, BinaryOp):
        return (
            not (is_finite(m.interval.left) and is_finite(m.interval.right))
            or _contains_unbounded(m.left)
            or _contains_unbounded(m.right)
        )
    return False


def _extract_obligations(
    program: Program, dataset: Sequence[Fact], grid: RulerGrid
) -> list[Obligation]:
    """Recognise the reduction pattern; reject other unbounded literals."""
    head_preds = {r.head_predicate() for r in program.rules} - {None}
    out = []
    for rule in program.rules:
        if _contains_unbounded(rule.head):
            raise NotImplementedError(
                "unbounded operator intervals in rule heads are unsupported"
            )
        unbounded = [b for b in rule.body if _contains_unbounded(b)]
        if not unbounded:
            continue
        ok = (
            rule.head_predicate() is None
            and isinstance(rule.head, Bottom)
            and len(rule.body) == 2
            and len(unbounded) == 1
        )
        if not ok:
            raise NotImplementedError(
                "unbounded operator intervals in rule bodies are only supported "
                "in the entailment-reduction pattern (BOTTOM :- anchor, box M)"
            )
        box = unbounded[0]
        anchor = next(b for b in rule.body if b is not box)
        ok = (
            ok
            and isinstance(box, UnaryOp)
            and box.op in ("BOXMINUS", "BOXPLUS")
            and isinstance(box.sub, Rel)
            and box.sub.atom.is_ground()
            and is_finite(box.interval.left)
            and isinstance(anchor, Rel)
            and anchor.atom.is_ground()
            and anchor.atom.predicate not in head_preds
        )
        anchor_facts = (
            [f for f in dataset if f.atom.key() == anchor.atom.key()] if ok else []
        )
        ok = ok and len(anchor_facts) == 1 and anchor_facts[0].interval.is_punctual
        if not ok:
            raise NotImplementedError(
                "unbounded operator intervals in rule bodies are only supported "
                "in the entailment-reduction pattern (BOTTOM :- anchor, box M)"
            )
        p = anchor_facts[0].interval.left
        direction = 1 if box.op == "BOXPLUS" else -1
        base = grid.point_cell(p + direction * box.interval.left)
        if box.interval.left_open:
            base += direction  # strict: the anchor point itself cannot discharge
        out.append(Obligation(box.sub.atom.key(), base, direction))
    return out


# ---------------------------------------------------------------- engine


def _clip_store(store: FactStore, horizon: Interval) -> FactStore:
    s = FactStore()
    for key, lst in store.atoms.items():
        for iv in lst:
            part = intersect(iv, horizon)
            if not part.is_empty:
                s.insert_interval(key, part)
    for iv in store.bottom_intervals:
        s.mark_bottom(iv)
    return s


class _Engine:
    def __init__(
        self,
        program: Program,
        dataset: Sequence[Fact],
        *,
        prune_letters: bool = True,
        cancelled=None,
        trace=None,
        max_states: int = 200_000,
    ):
        self.program = program
        # facts on predicates never read by any body cannot influence
        # consistency (they feed no rule), so drop them up front
        body_preds = set()
        for r in program.rules:
            body_preds |= r.body_predicates()
        self.facts = [f for f in dataset if f.atom.predicate in body_preds]
        self.grid = ruler_grid(program, self.facts)
        self.obligations = _extract_obligations(program, self.facts, self.grid)
        self.cancelled = cancelled
        self.trace = trace
        self.states_left = max_states
        self.span_fixable = False

        consts = program.constants() | {
            a.name for f in self.facts for a in f.atom.args
        }
        self.ground_rules = tuple(ground(program, consts))

        # atoms worth guessing: head-predicate groundings (facts of other
        # predicates can be removed from any model without breaking it)
        head_sigs = set()
        for r in program.rules:
            for a in relational_atoms(r.head):
                head_sigs.add((a.predicate, len(a.args)))
        if not prune_letters:
            for r in program.rules:
                for b in r.body:
                    for a in relational_atoms(b):
                        head_sigs.add((a.predicate, len(a.args)))
        keys = set()
        for pred, arity in head_sigs:
            for combo in itertools.product(sorted(consts), repeat=arity):
                keys.add((pred, combo))
        self.free_atoms: tuple[AtomKey, ...] = tuple(sorted(keys))
        self.prune_letters = prune_letters

        # head key -> [(rule, box chain outermost-first, body reaches)]
        self.rules_by_head: dict[AtomKey, list] = {}
        for rule in self.ground_rules:
            m = rule.head
            boxes = []
            while isinstance(m, UnaryOp):
                boxes.append((m.op, m.interval))
                m = m.sub
            if not isinstance(m, Rel):
                continue
            reaches = tuple(_literal_reach(b) for b in rule.body)
            self.rules_by_head.setdefault(m.atom.key(), []).append(
                (rule, tuple(boxes), reaches)
            )

        g = self.grid
        reach = total_reach(program)
        horizon = make(g.span.left - reach, g.span.right + reach, False, False)
        self.base_store = self._span_materialise(horizon)
        self.inconsistent_in_span = self.base_store is None

        self.must: dict[int, Letter] = {}
        if self.base_store is not None:
            for c in range(g.span_lo_cell, g.span_hi_cell + 1):
                civ = g.cell_interval(c)
                atoms = set()
                for key, lst in self.base_store.atoms.items():
                    if any(subset(civ, iv) for iv in lst):
                        atoms.add(key)
                self.must[c] = frozenset(atoms)
        # unbounded dataset tails force atoms on every cell beyond the span
        self.tail_must = {1: set(), -1: set()}
        for f in self.facts:
            if not is_finite(f.interval.right):
                self.tail_must[1].add(f.atom.key())
            if not is_finite(f.interval.left):
                self.tail_must[-1].add(f.atom.key())
        self.tail_must = {k: frozenset(v) for k, v in self.tail_must.items()}

    def _poll(self):
        if self.cancelled is not None and self.cancelled():
            raise Cancelled()
        self.states_left -= 1
        if self.states_left < 0:
            raise SearchBudgetExceeded("automata state budget exhausted")

    def _span_materialise(self, horizon: Interval) -> Optional[FactStore]:
        store = _clip_store(FactStore.from_facts(self.facts), horizon)
        # bounded horizon + endpoints on the d-grid => finitely many stores
        while True:
            self._poll()
            new = _clip_store(apply_rules(self.program, store), horizon)
            if new.contains_bottom:
                return None
            if new.equals(store):
                return store
            store = new

    # -- letters

    def _justifiable(
        self, key: AtomKey, new_cell: int, lo: int, letters, store: FactStore
    ) -> bool:
        """Could any rule still derive `key` over the new cell?

        Only the least model matters for consistency (extra atoms can only
        fire more rules), so atoms no rule can derive are never worth
        guessing.  A rule counts as possible unless some body literal whose
        whole evaluation region lies on already-fixed cells is false there.
        """
        rules = self.rules_by_head.get(key)
        if not rules:
            return False
        g = self.grid
        hi = lo + len(letters) - 1
        cell_iv = g.cell_interval(new_cell)
        for rule, boxes, reaches in rules:
            fire_iv = cell_iv
            for op, biv in boxes:
                # firing points whose head region can cover the new cell
                kind = "plus" if op == "BOXMINUS" else "minus"
                fire_iv = interval_op(kind, fire_iv, biv)
            for t in g.cells_in(fire_iv):
                tiv = g.cell_interval(t)
                if intersect(tiv, fire_iv).is_empty:
                    continue
                possible = True
                for lit, reach in zip(rule.body, reaches):
                    rc = int(2 * reach / g.d)
                    if t - rc < lo or t + rc > hi:
                        continue  # region leaves the fixed window: unknown
                    holds = any(
                        not intersect(tiv, iv).is_empty
                        for iv in apply_operator(lit, store)
                    )
                    if not holds:
                        possible = False
                        break
                if possible:
                    return True
        return False

    def _letters(
        self, must: Letter, new_cell=None, lo=None, letters=None
    ) -> Iterator[Letter]:
        free = [a for a in self.free_atoms if a not in must]
        if self.prune_letters and new_cell is not None and free:
            store = _letters_store(self.grid, lo, letters)
            free = [
                a
                for a in free
                if self._justifiable(a, new_cell, lo, letters, store)
            ]
        for size in range(len(free) + 1):
            for extra in itertools.combinations(free, size):
                yield must | frozenset(extra)

    def _cell_must(self, c: int, direction: int) -> Letter:
        if self.grid.span_lo_cell <= c <= self.grid.span_hi_cell:
            return self.must.get(c, frozenset())
        return self.tail_must[direction]

    # -- span assignments

    def span_assignments(self) -> Iterator[tuple[Letter, ...]]:
        g = self.grid
        cells = list(range(g.span_lo_cell, g.span_hi_cell + 1))
        zc = g.z_cells

        def rec(chosen: list[Letter]) -> Iterator[tuple[Letter, ...]]:
            idx = len(chosen)
            if idx == len(cells):
                yield tuple(chosen)
                return
            for letter in self._letters(
                self._cell_must(cells[idx], 1),
                new_cell=cells[idx],
                lo=cells[0],
                letters=tuple(chosen),
            ):
                self._poll()
                cand = chosen + [letter]
                committed = set()
                newly = len(cand) - 1 - zc
                if newly >= zc:
                    committed.add(cells[newly])
                ok, fixable = _check_window(
                    g, self.ground_rules, cells[0], cand, committed
                )
                if ok:
                    yield from rec(cand)
                elif fixable:
                    self.span_fixable = True

        yield from rec([])

    # -- infinite tails

    def tail_ok(
        self,
        init_lo: int,
        init_letters: tuple[Letter, ...],
        direction: int,
        pending: frozenset,
    ) -> bool:
        g = self.grid
        zc = g.z_cells
        width = len(init_letters)

        def key(lo, letters, pend):
            if direction == 1 and lo > g.span_hi_cell:
                return ("free", letters, pend)
            if direction == -1 and lo + len(letters) - 1 < g.span_lo_cell:
                return ("free", letters, pend)
            return (lo, letters, pend)

        start = (init_lo, init_letters, pending)
        on_path: set = {key(*start)}
        dead: set = set()
        stack: list = [(start, self._tail_steps(start, direction))]
        while stack:
            self._poll()
            state, it = stack[-1]
            nxt = next(it, None)
            if nxt is None:
                stack.pop()
                k = key(*state)
                on_path.discard(k)
                dead.add(k)
                continue
            k = key(*nxt)
            if k in on_path:
                if not nxt[2]:  # a cycle with no pending obligation: accept
                    return True
                continue
            if k in dead:
                continue
            on_path.add(k)
            stack.append((nxt, self._tail_steps(nxt, direction)))
        return False

    def _tail_steps(self, state, direction) -> Iterator:
        g = self.grid
        zc = g.z_cells
        lo, letters, pending = state
        hi = lo + len(letters) - 1
        new_cell = hi + 1 if direction == 1 else lo - 1
        must = self._cell_must(new_cell, direction)
        for letter in self._letters(must, new_cell=new_cell, lo=lo, letters=letters):
            if direction == 1:
                nlo = lo + 1
                nletters = letters[1:] + (letter,)
                committed_cell = new_cell - zc
            else:
                nlo = new_cell
                nletters = (letter,) + letters[:-1]
                committed_cell = new_cell + zc
            ok, fixable = _check_window(
                g, self.ground_rules, nlo, nletters, {committed_cell}
            )
            if not ok:
                if fixable:
                    self.span_fixable = True
                continue
            npending = pending
            for ob in pending:
                if ob.direction != direction:
                    continue
                eligible = (
                    new_cell >= ob.min_cell if direction == 1 else new_cell <= ob.min_cell
                )
                if eligible and ob.atom not in letter:
                    npending = npending - {ob}
            yield (nlo, nletters, npending)

    def edge_window(self, span_letters: tuple[Letter, ...], direction: int):
        g = self.grid
        width = min(len(span_letters), 2 * g.z_cells + 1)
        if direction == 1:
            return g.span_hi_cell - width + 1, span_letters[-width:]
        return g.span_lo_cell, span_letters[:width]

    def span_discharged(self, ob: Obligation, span_letters) -> bool:
        g = self.grid
        for i, letter in enumerate(span_letters):
            c = g.span_lo_cell + i
            hit = c >= ob.min_cell if ob.direction == 1 else c <= ob.min_cell
            if hit and ob.atom not in letter:
                return True
        return False


def _has_bottom_head(program: Program) -> bool:
    return any(r.head_predicate() is None for r in program.rules)


def consistent(
    program: Program,
    dataset: Sequence[Fact],
    *,
    prune_letters: bool = True,
    cancelled=None,
    trace=None,
    max_states: int = 200_000,
) -> bool:
    """True iff the program and dataset have a model."""
    if not _has_bottom_head(program):
        return True
    eng = _Engine(
        program,
        dataset,
        prune_letters=prune_letters,
        cancelled=cancelled,
        trace=trace,
        max_states=max_states,
    )
    if eng.inconsistent_in_span:
        if trace is not None:
            trace.append("BOTTOM derived during span materialisation")
        return False
    first = True
    for span_letters in eng.span_assignments():
        if trace is not None:
            trace.append(f"span assignment over {len(span_letters)} cells")
        sides_ok = True
        for direction in (1, -1):
            pend = frozenset(
                ob
                for ob in eng.obligations
                if ob.direction == direction
                and not eng.span_discharged(ob, span_letters)
            )
            lo, letters = eng.edge_window(span_letters, direction)
            if not eng.tail_ok(lo, letters, direction, pend):
                sides_ok = False
                break
        if sides_ok:
            return True
        if first and not eng.span_fixable:
            # every failure so far was a fired BOTTOM or a pending
            # obligation; larger span assignments only fire more rules
            return False
        first = False
    return False


# ---------------------------------------------------------------- spec API


def check_satisfiability(
    window: Window, program: Program, dataset: Sequence[Fact]
) -> bool:
    """Dataset facts installed where they overlap the window, and every rule
    satisfied on cells whose whole z-neighbourhood lies inside the window."""
    g = window.grid
    assign = window.assignment()
    wiv = window.interval()
    for f in dataset:
        ov = intersect(f.interval, wiv)
        if ov.is_empty:
            continue
        for c in g.cells_in(ov):
            if window.lo <= c <= window.hi:
                if not intersect(g.cell_interval(c), ov).is_empty:
                    if f.atom.key() not in assign[c]:
                        return False
    consts = program.constants() | {a.name for f in dataset for a in f.atom.args}
    rules = tuple(
        r for r in ground(program, consts) if not any(map(_contains_unbounded, r.body))
    )
    zc = g.z_cells
    committed = {
        c for c in assign if c - zc >= window.lo and c + zc <= window.hi
    }
    ok, _ = _check_window(g, rules, window.lo, window.letters, committed)
    return ok


def search_window(
    window: Window, program: Program, dataset: Sequence[Fact]
) -> tuple[bool, Window]:
    """Extend the window rightward, one ruler cell at a time, until it
    reaches x+z; returns the first satisfiable full-span window."""
    eng = _Engine(program, dataset)
    if eng.inconsistent_in_span:
        return False, window
    g = eng.grid
    zc = g.z_cells

    def rec(letters: list[Letter]):
        hi = window.lo + len(letters) - 1
        if hi >= g.span_hi_cell:
            return tuple(letters)
        nxt = hi + 1
        for letter in eng._letters(
            eng._cell_must(nxt, 1), new_cell=nxt, lo=window.lo, letters=tuple(letters)
        ):
            cand = letters + [letter]
            committed = set()
            c = nxt - zc
            if c - zc >= window.lo:
                committed.add(c)
            ok, _ = _check_window(g, eng.ground_rules, window.lo, cand, committed)
            if ok:
                found = rec(cand)
                if found is not None:
                    return found
        return None

    found = rec(list(window.letters))
    if found is None:
        return False, window
    return True, Window(g, window.lo, found)


def buchi_emptiness(
    direction: str,
    w0: Window,
    program: Program,
    dataset: Sequence[Fact],
    conditions: AcceptingConditions = (),
) -> bool:
    """True iff an accepting infinite run extends w0 in the given direction."""
    eng = _Engine(program, dataset)
    if eng.inconsistent_in_span:
        return False
    d = 1 if direction == "right" else -1
    pend = frozenset(ob for ob in conditions if ob.direction == d)
    return eng.tail_ok(w0.lo, w0.letters, d, pend)
