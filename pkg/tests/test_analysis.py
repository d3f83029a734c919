"""Dependency graph, recursive predicates, and relevant subprograms."""

from datalogmtl.analysis import (
    dependency_info,
    is_recursive,
    nonrecursive_head_rules,
    relevant_rules,
    to_dot,
)
from datalogmtl.syntax import parse_program

from helpers import load_program


def test_professor_recursive_set():
    info = dependency_info(load_program("professor"))
    assert info.recursive == {"FullProfessor", "Chair"}


def test_immune_not_recursive():
    prog = load_program("immune")
    assert dependency_info(prog).recursive == set()
    assert not is_recursive(prog)


def test_birthday_self_loop():
    prog = load_program("birthday")
    assert dependency_info(prog).recursive == {"Bday"}
    assert is_recursive(prog)


def test_recursive_closed_under_reachability():
    # Down is fed by the Loop cycle, so it is recursive too
    prog = parse_program(
        "Loop(X) :- DIAMONDMINUS[0,1] Loop(X) .\nDown(X) :- Loop(X) ."
    )
    assert dependency_info(prog).recursive == {"Loop", "Down"}


def test_relevant_rules_assistant_professor():
    sub = relevant_rules(load_program("professor"), "AssistantProfessor")
    assert len(sub.rules) == 1
    assert sub.rules[0].head_predicate() == "AssistantProfessor"


def test_relevant_rules_full_professor():
    prog = load_program("professor")
    sub = relevant_rules(prog, "FullProfessor")
    heads = sorted(r.head_predicate() for r in sub.rules)
    # everything feeding FullProfessor, including the Chair cycle; the
    # downstream-only AssociateProfessor<-AssistantProfessor chain is kept
    # because it feeds FullProfessor, so only nothing is dropped here
    assert "FullProfessor" in heads and "Chair" in heads


def test_relevant_rules_absent_predicate():
    prog = parse_program("P(X) :- Q(X) .")
    assert relevant_rules(prog, "Zzz").rules == ()


def test_relevant_rules_always_include_bottom_heads():
    prog = parse_program("P(X) :- Q(X) .\nBOTTOM :- R(X) .")
    sub = relevant_rules(prog, "P")
    assert any(r.head_predicate() is None for r in sub.rules)


def test_relevant_rules_pull_in_bottom_feeders():
    prog = parse_program("R(X) :- S(X) .\nBOTTOM :- R(X) .\nU(X) :- V(X) .")
    sub = relevant_rules(prog, "U")
    heads = sorted(str(r.head_predicate()) for r in sub.rules)
    assert heads == ["None", "R", "U"]


def test_nonrecursive_head_rules():
    prog = load_program("professor")
    sub = nonrecursive_head_rules(prog)
    heads = sorted(r.head_predicate() for r in sub.rules)
    assert heads == ["AssistantProfessor", "AssociateProfessor"]
    acyclic = load_program("immune")
    assert nonrecursive_head_rules(acyclic).rules == acyclic.rules
    loop = parse_program("P(X) :- P(X) .")
    assert nonrecursive_head_rules(loop).rules == ()


def test_to_dot_marks_recursive_nodes():
    dot = to_dot(dependency_info(load_program("professor")))
    assert '"Chair" [shape=doublecircle]' in dot
    assert '"Lecturer" [shape=ellipse]' in dot


def test_empty_program():
    prog = parse_program("")
    assert not is_recursive(prog)
    assert dependency_info(prog).recursive == set()
