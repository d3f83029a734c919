"""End-to-end fact entailment.

Fast path over the stored dataset, relevant-rule extraction, a plain
materialisation loop for non-recursive subprograms, and for recursive ones a
pre-materialisation followed by either a two-worker race (continued
materialisation vs. the automata decision) or, in sequential test mode, a
bounded materialisation run with an automata fallback.

Fact types mirror the answering code path: T1 dataset fast path, T2
non-recursive loop, T3 fixpoint during recursive materialisation, T4 target
hit during recursive materialisation, T5 automata.
"""

from __future__ import annotations

import queue
import threading
import time
from dataclasses import dataclass, field

from .analysis import dependency_info, is_recursive, relevant_rules
from .automata import Cancelled, consistent, entail_to_inconsist
from .materialisation import apply_rules, materialise
from .store import FactStore
from .syntax import Fact, Program


@dataclass
class EntailmentResult:
    answer: bool
    fact_type: str  # T1 | T2 | T3 | T4 | T5
    rounds: int
    winner: str  # fastpath | materialisation | automata
    timings: dict = field(default_factory=dict)
    inconsistent: bool = False  # BOTTOM derived from the instance itself


def pre_materialise(
    program: Program,
    store: FactStore,
    target: Fact | None = None,
    cancelled=None,
) -> tuple[FactStore, str, int]:
    """Advance materialisation until a round adds nothing over non-recursive
    predicates; target, fixpoint and inconsistency exits still apply.

    Returns (store, status, rounds) with status one of PreDone, Fixpoint,
    TargetEntailed, Inconsistent, Cancelled.
    """
    recursive = dependency_info(program).recursive
    rounds = 0
    while True:
        if cancelled is not None and cancelled():
            return store, "Cancelled", rounds
        new = apply_rules(program, store)
        rounds += 1
        if new.contains_bottom:
            return new, "Inconsistent", rounds
        if target is not None and new.entails_fact(target):
            return new, "TargetEntailed", rounds
        if new.equals(store):
            return new, "Fixpoint", rounds
        if not _grew_on_nonrecursive(store, new, recursive):
            return new, "PreDone", rounds
        store = new


def _grew_on_nonrecursive(old: FactStore, new: FactStore, recursive) -> bool:
    for key, lst in new.atoms.items():
        if key[0] in recursive:
            continue
        if old.atoms.get(key) != lst:
            return True
    return False


def check_entailment(
    program: Program,
    store: FactStore,
    query: Fact,
    *,
    sequential: bool = False,
    round_budget: int = 1000,
    max_states: int = 200_000,
) -> EntailmentResult:
    timings: dict = {}
    t0 = time.perf_counter()
    if store.entails_fact(query):
        timings["fastpath"] = time.perf_counter() - t0
        return EntailmentResult(True, "T1", 0, "fastpath", timings)
    timings["fastpath"] = time.perf_counter() - t0

    t0 = time.perf_counter()
    sub = relevant_rules(program, query.atom.predicate)
    recursive = is_recursive(sub)
    timings["analysis"] = time.perf_counter() - t0

    if not recursive:
        t0 = time.perf_counter()
        out = materialise(sub, store.snapshot(), target=query)
        timings["materialisation"] = time.perf_counter() - t0
        if out.status == "Inconsistent":
            return EntailmentResult(True, "T2", out.rounds, "materialisation", timings, True)
        return EntailmentResult(
            out.status == "TargetEntailed", "T2", out.rounds, "materialisation", timings
        )

    t0 = time.perf_counter()
    dpre, status, pre_rounds = pre_materialise(sub, store.snapshot(), target=query)
    timings["pre_materialisation"] = time.perf_counter() - t0
    if status == "Inconsistent":
        return EntailmentResult(True, "T4", pre_rounds, "materialisation", timings, True)
    if status == "TargetEntailed":
        return EntailmentResult(True, "T4", pre_rounds, "materialisation", timings)
    if status == "Fixpoint":
        return EntailmentResult(False, "T3", pre_rounds, "materialisation", timings)

    if sequential:
        return _sequential_finish(
            sub, dpre, query, pre_rounds, timings, round_budget, max_states
        )
    return _race_finish(sub, dpre, query, pre_rounds, timings, max_states)


def _sequential_finish(sub, dpre, query, pre_rounds, timings, round_budget, max_states):
    t0 = time.perf_counter()
    out = materialise(sub, dpre.snapshot(), max_rounds=round_budget, target=query)
    timings["materialisation"] = time.perf_counter() - t0
    rounds = pre_rounds + out.rounds
    if out.status == "Inconsistent":
        return EntailmentResult(True, "T4", rounds, "materialisation", timings, True)
    if out.status == "TargetEntailed":
        return EntailmentResult(True, "T4", rounds, "materialisation", timings)
    if out.status == "Fixpoint":
        return EntailmentResult(False, "T3", rounds, "materialisation", timings)
    t0 = time.perf_counter()
    red = entail_to_inconsist(sub, list(dpre.facts()), query)
    answer = not consistent(red.program, list(red.dataset), max_states=max_states)
    timings["automata"] = time.perf_counter() - t0
    return EntailmentResult(answer, "T5", rounds, "automata", timings)


def _race_finish(sub, dpre, query, pre_rounds, timings, max_states):
    """Race continued materialisation against the automata decision; the
    first definitive answer wins and cancels the other worker."""
    stop = threading.Event()
    results: queue.Queue = queue.Queue()

    def run_materialisation():
        out = materialise(
            sub, dpre.snapshot(), target=query, cancelled=stop.is_set
        )
        if out.status == "Inconsistent":
            results.put((True, "T4", pre_rounds + out.rounds, "materialisation", True))
        elif out.status == "TargetEntailed":
            results.put((True, "T4", pre_rounds + out.rounds, "materialisation", False))
        elif out.status == "Fixpoint":
            results.put((False, "T3", pre_rounds + out.rounds, "materialisation", False))
        # Cancelled: no answer

    def run_automata():
        try:
            red = entail_to_inconsist(sub, list(dpre.facts()), query)
            answer = not consistent(
                red.program,
                list(red.dataset),
                cancelled=stop.is_set,
                max_states=max_states,
            )
            results.put((answer, "T5", pre_rounds, "automata", False))
        except Cancelled:
            pass

    t0 = time.perf_counter()
    threads = [
        threading.Thread(target=run_materialisation, daemon=True),
        threading.Thread(target=run_automata, daemon=True),
    ]
    for t in threads:
        t.start()
    answer, fact_type, rounds, winner, inconsistent = results.get()
    stop.set()
    for t in threads:
        t.join()
    timings["race"] = time.perf_counter() - t0
    return EntailmentResult(answer, fact_type, rounds, winner, timings, inconsistent)
