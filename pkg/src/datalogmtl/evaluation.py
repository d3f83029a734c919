"""Semantics of ground metric atoms over a fact store.

apply_operator computes where a ground literal holds in the least model of
the store alone; merge_intervals is the n-way sorted intersection used for
temporal joins; evaluate_rule combines both with an index-nested-loop
substitution search and reverse head application.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Optional

from .intervals import (
    EMPTY,
    FULL_LINE,
    Interval,
    NEG_INF,
    POS_INF,
    coalesce,
    intersect,
    interval_op,
    normalize,
)
from .store import FactStore
from .syntax import (
    BinaryOp,
    Bottom,
    Constant,
    Fact,
    MetricAtom,
    Rel,
    RelationalAtom,
    Rule,
    Top,
    UnaryOp,
    Variable,
    relational_atoms,
    substitute,
)

IntervalList = list[Interval]

# ApplyOperator kind per unary operator (past diamond shifts forward, etc.)
_UNARY_KIND = {
    "DIAMONDMINUS": "plus",
    "BOXMINUS": "circleplus",
    "DIAMONDPLUS": "minus",
    "BOXPLUS": "circleminus",
}


def apply_operator(literal: MetricAtom, store: FactStore) -> IntervalList:
    """Coalesced intervals where the ground literal holds over the store."""
    if isinstance(literal, Top):
        return [FULL_LINE]
    if isinstance(literal, Bottom):
        return list(store.bottom_intervals)
    if isinstance(literal, Rel):
        return list(store.intervals_for(literal.atom.key()))
    if isinstance(literal, UnaryOp):
        sub = apply_operator(literal.sub, store)
        kind = _UNARY_KIND[literal.op]
        out = [interval_op(kind, t, literal.interval) for t in sub]
        return coalesce(out)
    if isinstance(literal, BinaryOp):
        left = apply_operator(literal.left, store)
        right = apply_operator(literal.right, store)
        if literal.op == "SINCE":
            return _since(literal.interval, left, right)
        return _until(literal.interval, left, right)
    raise TypeError(f"not a metric atom: {literal!r}")


def _positive_part(rho: Interval) -> Interval:
    """rho restricted to strictly positive values."""
    return intersect(rho, normalize(Fraction(0), POS_INF, True, True))


def _since(rho: Interval, left: IntervalList, right: IntervalList) -> IntervalList:
    """t holds iff some t' with t - t' in rho satisfies the right side and
    the left side holds throughout (t', t)."""
    out: IntervalList = []
    if not rho.left_open and rho.left == 0:
        # witness t' = t: the open gap (t', t) is empty
        out.extend(right)
    rho_pos = _positive_part(rho)
    if not rho_pos.is_empty:
        for t1 in left:
            # witnesses may sit at the (possibly excluded) left endpoint of
            # t1 but strictly before its right endpoint; the result point may
            # coincide with t1's right endpoint even when t1 is right-open
            w_range = normalize(t1.left, t1.right, _inf_open(t1.left), True)
            upper = normalize(NEG_INF, t1.right, True, _inf_open(t1.right))
            for t2 in right:
                w = intersect(t2, w_range)
                if w.is_empty:
                    continue
                cand = interval_op("plus", w, rho_pos)
                cand = intersect(cand, upper)
                if not cand.is_empty:
                    out.append(cand)
    return coalesce(out)


def _until(rho: Interval, left: IntervalList, right: IntervalList) -> IntervalList:
    """Mirror of _since towards the future: witness t' with t' - t in rho."""
    out: IntervalList = []
    if not rho.left_open and rho.left == 0:
        out.extend(right)
    rho_pos = _positive_part(rho)
    if not rho_pos.is_empty:
        for t1 in left:
            w_range = normalize(t1.left, t1.right, True, _inf_open(t1.right))
            lower = normalize(t1.left, POS_INF, _inf_open(t1.left), True)
            for t2 in right:
                w = intersect(t2, w_range)
                if w.is_empty:
                    continue
                cand = interval_op("minus", w, rho_pos)
                cand = intersect(cand, lower)
                if not cand.is_empty:
                    out.append(cand)
    return coalesce(out)


def _inf_open(bound) -> bool:
    """Boundary endpoints of the witness/result ranges are inclusive when
    finite (the open gap tolerates touching them) and open at infinities."""
    from .intervals import _Infinity

    return isinstance(bound, _Infinity)


def merge_intervals(lists: list[IntervalList]) -> IntervalList:
    """Set intersection of n sorted disjoint interval lists."""
    if not lists:
        return []
    result = lists[0]
    for other in lists[1:]:
        result = _intersect_lists(result, other)
        if not result:
            return []
    return coalesce(result)


def _intersect_lists(a: IntervalList, b: IntervalList) -> IntervalList:
    """Linear two-cursor sweep over sorted disjoint lists."""
    out: IntervalList = []
    i = j = 0
    while i < len(a) and j < len(b):
        x = intersect(a[i], b[j])
        if not x.is_empty:
            out.append(x)
        # advance the cursor whose interval ends first
        ka = (a[i].sort_key()[2], a[i].sort_key()[3])
        kb = (b[j].sort_key()[2], b[j].sort_key()[3])
        if ka <= kb:
            i += 1
        else:
            j += 1
    return out


def reverse_head(head: MetricAtom, interval: Interval):
    """Map a body-satisfaction interval through the head's box operators.

    Returns a Fact, or None to flag a BOTTOM derivation at `interval`.
    Raises on heads outside the grammar's head restriction.
    """
    if interval.is_empty:
        raise ValueError("reverse_head requires a non-empty interval")
    m = head
    iv = interval
    while isinstance(m, UnaryOp):
        if m.op == "BOXMINUS":
            iv = interval_op("minus", iv, m.interval)
        elif m.op == "BOXPLUS":
            iv = interval_op("plus", iv, m.interval)
        else:
            raise ValueError(f"forbidden operator in head: {m.op}")
        m = m.sub
    if isinstance(m, Bottom):
        return ("bottom", iv)
    if isinstance(m, Rel):
        return Fact(m.atom, iv)
    raise ValueError(f"invalid head atom: {head}")


def _join_order(body: tuple[MetricAtom, ...]) -> list[MetricAtom]:
    """Written order, with constant-only literals first (cheap selectivity)."""
    fixed = [b for b in body if not any(a.variables() for a in relational_atoms(b))]
    open_ = [b for b in body if any(a.variables() for a in relational_atoms(b))]
    return fixed + open_


def substitutions(rule: Rule, store: FactStore) -> Iterable[dict[Variable, Constant]]:
    """Backtracking index-nested-loop search over the body's relational atoms."""
    patterns: list[RelationalAtom] = []
    for literal in _join_order(rule.body):
        patterns.extend(relational_atoms(literal))

    def search(idx: int, sigma: dict[Variable, Constant]):
        if idx == len(patterns):
            yield dict(sigma)
            return
        for extended, _intervals in store.match(patterns[idx], sigma):
            yield from search(idx + 1, extended)

    yield from search(0, {})


def evaluate_rule(rule: Rule, store: FactStore) -> list:
    """One-step consequences of a rule over a store snapshot.

    Returns a list of Facts and ("bottom", interval) markers.
    """
    out = []
    for sigma in substitutions(rule, store):
        lists = []
        empty = False
        for literal in rule.body:
            t = apply_operator(substitute(literal, sigma), store)
            if not t:
                empty = True
                break
            lists.append(t)
        if empty:
            continue
        head = substitute(rule.head, sigma)
        for iv in merge_intervals(lists):
            out.append(reverse_head(head, iv))
    return out
