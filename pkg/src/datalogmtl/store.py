"""Coalesced, indexed fact store.

Per ground relational atom a sorted list of pairwise non-coalescable
intervals, plus a per-argument index for joins and an inconsistency flag for
derived BOTTOM intervals.  The store is always fully coalesced, so fact
entailment reduces to single-interval containment.
"""

from __future__ import annotations

from bisect import bisect_right
from typing import Iterable, Iterator, Optional

from .intervals import Interval, coalesce, subset, union_if_coalescable
from .syntax import Constant, Fact, Program, RelationalAtom, Variable

AtomKey = tuple[str, tuple[str, ...]]


class FactStore:
    def __init__(self):
        # atom key -> sorted list of disjoint, non-coalescable intervals
        self.atoms: dict[AtomKey, list[Interval]] = {}
        # predicate -> set of atom keys
        self.by_predicate: dict[str, set[AtomKey]] = {}
        # (predicate, position, constant) -> set of atom keys
        self.arg_index: dict[tuple[str, int, str], set[AtomKey]] = {}
        self.bottom_intervals: list[Interval] = []

    @property
    def contains_bottom(self) -> bool:
        return bool(self.bottom_intervals)

    # -- mutation

    def insert(self, fact: Fact) -> bool:
        """Insert and coalesce; True iff coverage strictly grew."""
        return self.insert_interval(fact.atom.key(), fact.interval)

    def insert_interval(self, key: AtomKey, interval: Interval) -> bool:
        if interval.is_empty:
            raise ValueError("cannot insert an empty interval")
        lst = self.atoms.get(key)
        if lst is None:
            self.atoms[key] = [interval]
            self._index(key)
            return True
        changed, merged = _merge_into(lst, interval)
        return changed

    def insert_intervals(self, key: AtomKey, intervals: Iterable[Interval]) -> bool:
        """Bulk insert: coalesce the union into the stored list in one pass."""
        extra = [iv for iv in intervals if not iv.is_empty]
        if not extra:
            return False
        old = self.atoms.get(key, [])
        merged = coalesce(old + extra)
        if merged == old:
            return False
        self.atoms[key] = merged
        self._index(key)
        return True

    def mark_bottom(self, interval: Interval) -> bool:
        changed, _ = _merge_into(self.bottom_intervals, interval)
        return changed

    def _index(self, key: AtomKey):
        pred, consts = key
        self.by_predicate.setdefault(pred, set()).add(key)
        for pos, c in enumerate(consts):
            self.arg_index.setdefault((pred, pos, c), set()).add(key)

    def bulk_insert(self, facts: Iterable[Fact]) -> bool:
        changed = False
        for f in facts:
            changed |= self.insert(f)
        return changed

    # -- queries

    def intervals_for(self, key: AtomKey) -> list[Interval]:
        return self.atoms.get(key, [])

    def entails_fact(self, fact: Fact) -> bool:
        lst = self.atoms.get(fact.atom.key())
        if not lst:
            return False
        # binary search: the only candidate is the last interval whose sort
        # key is <= the fact's (store is coalesced and sorted)
        keys = [iv.sort_key() for iv in lst]
        i = bisect_right(keys, fact.interval.sort_key())
        for j in (i - 1, i):
            if 0 <= j < len(lst) and subset(fact.interval, lst[j]):
                return True
        return False

    def match(
        self,
        pattern: RelationalAtom,
        partial: Optional[dict[Variable, Constant]] = None,
    ) -> Iterator[tuple[dict[Variable, Constant], list[Interval]]]:
        """Extensions of `partial` grounding `pattern` to a stored atom."""
        partial = dict(partial or {})
        bound: list[tuple[int, str]] = []
        for pos, term in enumerate(pattern.args):
            if isinstance(term, Constant):
                bound.append((pos, term.name))
            elif term in partial:
                bound.append((pos, partial[term].name))

        if len(bound) == len(pattern.args):
            key = (pattern.predicate, tuple(c for _, c in bound))
            if key in self.atoms:
                yield partial, self.atoms[key]
            return

        if bound:
            candidate_sets = [
                self.arg_index.get((pattern.predicate, pos, c), set()) for pos, c in bound
            ]
            candidates = set.intersection(*candidate_sets)
        else:
            candidates = self.by_predicate.get(pattern.predicate, set())

        for key in sorted(candidates):
            sigma = dict(partial)
            ok = True
            for term, const in zip(pattern.args, key[1]):
                if isinstance(term, Constant):
                    if term.name != const:
                        ok = False
                        break
                else:
                    prev = sigma.get(term)
                    if prev is None:
                        sigma[term] = Constant(const)
                    elif prev.name != const:
                        ok = False
                        break
            if ok:
                yield sigma, self.atoms[key]

    def constants(self) -> set[str]:
        out = set()
        for _, consts in self.atoms:
            out |= set(consts)
        return out

    def facts(self) -> Iterator[Fact]:
        for key in sorted(self.atoms):
            pred, consts = key
            atom = RelationalAtom(pred, tuple(Constant(c) for c in consts))
            for iv in self.atoms[key]:
                yield Fact(atom, iv)

    def fact_count(self) -> int:
        return sum(len(lst) for lst in self.atoms.values())

    # -- structural operations

    def snapshot(self) -> "FactStore":
        """Independent copy; interval lists are copied, intervals shared."""
        s = FactStore.__new__(FactStore)
        s.atoms = {k: list(v) for k, v in self.atoms.items()}
        s.by_predicate = {k: set(v) for k, v in self.by_predicate.items()}
        s.arg_index = {k: set(v) for k, v in self.arg_index.items()}
        s.bottom_intervals = list(self.bottom_intervals)
        return s

    def restrict_to_body_predicates(self, program: Program) -> "FactStore":
        preds = set()
        for r in program.rules:
            preds |= r.body_predicates()
        s = FactStore()
        for key, lst in self.atoms.items():
            if key[0] in preds:
                s.atoms[key] = list(lst)
                s._index(key)
        s.bottom_intervals = list(self.bottom_intervals)
        return s

    def equals(self, other: "FactStore") -> bool:
        """Point-set equality; valid because coalesced lists are canonical."""
        return (
            self.atoms == other.atoms and self.bottom_intervals == other.bottom_intervals
        )

    def check_invariants(self):
        """Full-scan validation: sorted, non-coalescable, index-consistent."""
        for key, lst in self.atoms.items():
            assert lst, f"empty interval list for {key}"
            for a, b in zip(lst, lst[1:]):
                assert a.sort_key() < b.sort_key(), f"unsorted list for {key}"
                assert union_if_coalescable(a, b) is None, f"coalescable pair in {key}"
            pred, consts = key
            assert key in self.by_predicate.get(pred, set())
            for pos, c in enumerate(consts):
                assert key in self.arg_index.get((pred, pos, c), set())
        for pred, keys in self.by_predicate.items():
            for key in keys:
                assert key in self.atoms and key[0] == pred

    # -- I/O

    def dump(self) -> str:
        """Canonical .dtf form: sorted atoms, coalesced sorted intervals."""
        lines = [str(f) for f in self.facts()]
        return "\n".join(lines) + ("\n" if lines else "")

    @classmethod
    def from_facts(cls, facts: Iterable[Fact]) -> "FactStore":
        s = cls()
        s.bulk_insert(facts)
        return s


def _merge_into(lst: list[Interval], interval: Interval) -> tuple[bool, Interval]:
    """Insert `interval` into a sorted coalesced list, in place.

    Returns (strictly_grew, resulting_interval_covering_it).
    """
    keys = [iv.sort_key() for iv in lst]
    i = bisect_right(keys, interval.sort_key())
    # containment check against the neighbours
    for j in (i - 1, i):
        if 0 <= j < len(lst) and subset(interval, lst[j]):
            return False, lst[j]
    # coalesce leftwards then rightwards
    lo = i
    merged = interval
    while lo > 0:
        u = union_if_coalescable(lst[lo - 1], merged)
        if u is None:
            break
        merged = u
        lo -= 1
    hi = i
    while hi < len(lst):
        u = union_if_coalescable(lst[hi], merged)
        if u is None:
            break
        merged = u
        hi += 1
    lst[lo:hi] = [merged]
    return True, merged
