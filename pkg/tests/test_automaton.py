"""Kernel operations against independent brute-force oracles."""
import random

import pytest

import netdes.events as ev
from netdes.automaton import (Automaton, AutomatonError, accepts, compose,
                              canonical_form, coreachable, empty_automaton,
                              is_nonblocking, isomorphic, isomorphic_by,
                              reachable, subset_construction,
                              synchronous_product, trim, unobservable_reach)

A, B, C, U, O = (ev.plant(x) for x in "abcuo")


def aut(states, alphabet, trans, initial, marked=()):
    return Automaton(states, alphabet, trans, initial, marked)


# -- oracles -----------------------------------------------------------------

def closure_oracle(a, q, observed):
    """Breadth-first closure over unobserved events, written independently."""
    todo, seen = [q], {q}
    while todo:
        cur = todo.pop()
        for (s, e, t) in a.transitions:
            if s == cur and e not in observed and t not in seen:
                seen.add(t)
                todo.append(t)
    return frozenset(seen)


def can_project_to(a, observed, word):
    """Is there a run of ``a`` whose observed projection equals ``word``?
    Brute-force search over (state, position) pairs."""
    frontier = {(a.initial, 0)}
    seen = set(frontier)
    while frontier:
        nxt = set()
        for (q, i) in frontier:
            if i == len(word):
                return True
            for (s, e, t) in a.transitions:
                if s != q:
                    continue
                if e in observed:
                    if i < len(word) and word[i] == e and (t, i + 1) not in seen:
                        nxt.add((t, i + 1))
                else:
                    if (t, i) not in seen:
                        nxt.add((t, i))
        seen |= nxt
        frontier = nxt
    return any(i == len(word) for (_q, i) in seen)


def random_automaton(rng, max_states=6, nondet=True):
    n = rng.randint(1, max_states)
    alphabet = [A, B, C][: rng.randint(2, 3)]
    states = [f"s{i}" for i in range(n)]
    trans = set()
    for _ in range(rng.randint(0, 3 * n)):
        trans.add((rng.choice(states), rng.choice(alphabet), rng.choice(states)))
    if not nondet:
        seen = {}
        trans = {(s, e, t) for (s, e, t) in trans
                 if seen.setdefault((s, e), t) == t}
    marked = [s for s in states if rng.random() < 0.5]
    return Automaton(states, alphabet, trans, "s0", marked)


# -- unobservable reach --------------------------------------------------------

def test_reach_empty_closure():
    a = aut(["q"], [U], [], "q")
    assert unobservable_reach(a, "q", []) == frozenset({"q"})


def test_reach_chain_stops_at_observed():
    a = aut(["q0", "q1", "q2"], [U, O],
            [("q0", U, "q1"), ("q1", O, "q2")], "q0")
    got = unobservable_reach(a, "q0", [O])
    assert got == closure_oracle(a, "q0", {O}) == frozenset({"q0", "q1"})


def test_reach_full_observation_is_identity():
    a = aut(["q0", "q1"], [U], [("q0", U, "q1")], "q0")
    for q in a.states:
        assert unobservable_reach(a, q, [U]) == frozenset({q})


def test_reach_validates_inputs():
    a = aut(["q"], [U], [], "q")
    with pytest.raises(AutomatonError):
        unobservable_reach(a, "nope", [])
    with pytest.raises(AutomatonError):
        unobservable_reach(a, "q", [O])


# -- subset construction -------------------------------------------------------

def test_observer_of_deterministic_automaton_is_isomorphic():
    a = aut(["q0", "q1"], [A, B], [("q0", A, "q1"), ("q1", B, "q0")], "q0",
            marked=["q0", "q1"])
    obs = subset_construction(a, [A, B])
    assert isomorphic(a, obs)


def test_observer_initial_is_closure():
    a = aut(["q0", "q1"], [U, O], [("q0", U, "q1")], "q0")
    obs = subset_construction(a, [O])
    assert obs.initial == frozenset({"q0", "q1"})


def test_observer_selfloops_unobserved_everywhere():
    a = aut(["q0", "q1"], [U, O], [("q0", O, "q1")], "q0")
    obs = subset_construction(a, [O])
    for x in obs.states:
        assert obs.successors(x, U) == (x,)


def test_observer_deterministic_on_random_instances():
    rng = random.Random(1)
    for _ in range(60):
        a = random_automaton(rng)
        observed = [e for e in sorted(a.alphabet) if rng.random() < 0.6]
        obs = subset_construction(a, observed)
        assert obs.deterministic


def test_observer_projection_language_matches_oracle():
    rng = random.Random(2)
    from netdes.automaton import bounded_traces
    for _ in range(40):
        a = random_automaton(rng)
        observed = frozenset(e for e in sorted(a.alphabet) if rng.random() < 0.5)
        obs = subset_construction(a, observed)
        for t in bounded_traces(a, 6):
            proj = tuple(e for e in t if e in observed)
            assert accepts(obs, proj)
        for t in bounded_traces(obs, 6):
            proj = tuple(e for e in t if e in observed)
            assert can_project_to(a, observed, list(proj))


# -- synchronous product ---------------------------------------------------------

def test_product_neutral_partner():
    a = aut(["q0", "q1"], [A, B], [("q0", A, "q1"), ("q1", B, "q0")], "q0",
            marked=["q1"])
    neutral = aut(["n"], [A, B], [("n", A, "n"), ("n", B, "n")], "n", marked=["n"])
    prod = synchronous_product(a, neutral)
    assert isomorphic_by(a, prod, lambda q: (q, "n"))


def test_product_disjoint_alphabets_is_interleaving_diamond():
    a1 = aut(["p0", "p1"], [A], [("p0", A, "p1")], "p0")
    a2 = aut(["r0", "r1"], [B], [("r0", B, "r1")], "r0")
    prod = synchronous_product(a1, a2)
    # oracle: explicit four-state enumeration
    want_states = {(p, r) for p in ("p0", "p1") for r in ("r0", "r1")}
    want_trans = {(("p0", r), A, ("p1", r)) for r in ("r0", "r1")}
    want_trans |= {((p, "r0"), B, (p, "r1")) for p in ("p0", "p1")}
    assert set(prod.states) == want_states
    assert set(prod.transitions) == want_trans


def test_product_blocks_shared_event_enabled_on_one_side():
    a1 = aut(["p0", "p1"], [A], [("p0", A, "p1")], "p0")
    a2 = aut(["r0"], [A], [], "r0")
    prod = synchronous_product(a1, a2)
    assert len(prod.states) == 1 and not prod.transitions


def test_product_commutative_associative_up_to_renaming():
    rng = random.Random(3)
    for _ in range(40):
        a1, a2, a3 = (random_automaton(rng, max_states=4) for _ in range(3))
        p12 = synchronous_product(a1, a2)
        p21 = synchronous_product(a2, a1)
        assert isomorphic_by(p12, p21, lambda q: (q[1], q[0]))
        left = synchronous_product(p12, a3)
        right = synchronous_product(a1, synchronous_product(a2, a3))
        assert isomorphic_by(left, right, lambda q: (q[0][0], (q[0][1], q[1])))


def test_nary_compose_matches_binary():
    rng = random.Random(4)
    for _ in range(20):
        a1, a2 = random_automaton(rng, 4), random_automaton(rng, 4)
        flat = compose([a1, a2])
        assert isomorphic_by(flat, synchronous_product(a1, a2), lambda q: q)


# -- reachability family -----------------------------------------------------------

def test_nonblocking_when_everything_marked():
    a = aut(["q0", "q1"], [A], [("q0", A, "q1")], "q0", marked=["q0", "q1"])
    assert is_nonblocking(a)


def test_dead_end_blocks():
    a = aut(["q0", "q1"], [A], [("q0", A, "q1")], "q0", marked=["q0"])
    assert not is_nonblocking(a)
    t = trim(a)
    assert set(t.states) == {"q0"} and not t.transitions


def test_trim_nonblocking_on_random_instances():
    rng = random.Random(5)
    for _ in range(60):
        a = random_automaton(rng)
        t = trim(a)
        if t.states:
            assert is_nonblocking(t)
        assert reachable(a) >= set(t.states)
        assert coreachable(a) >= set(t.states)


def test_trim_to_empty():
    a = aut(["q0"], [A], [], "q0", marked=[])
    t = trim(a)
    assert t.is_empty() and t.initial is None


# -- accepts ------------------------------------------------------------------------

def test_accepts_empty_sequence():
    a = aut(["q"], [A], [], "q")
    assert accepts(a, [])


def test_accepts_rejects_undefined_event():
    a = aut(["q"], [A, B], [("q", A, "q")], "q")
    assert not accepts(a, [B])
    with pytest.raises(AutomatonError):
        accepts(a, [ev.plant("zz")])


def test_accepts_existential_over_nondeterminism():
    a = aut(["q0", "dead", "live"], [A, B],
            [("q0", A, "dead"), ("q0", A, "live"), ("live", B, "live")],
            "q0", marked=["live"])
    assert accepts(a, [A, B])
    assert accepts(a, [A, B, B])
    assert accepts(a, [A], marked=True)


def test_marked_acceptance_mode():
    a = aut(["q0", "q1"], [A], [("q0", A, "q1")], "q0", marked=["q1"])
    assert not accepts(a, [], marked=True)
    assert accepts(a, [A], marked=True)


def test_canonical_form_requires_determinism():
    a = aut(["q0", "q1"], [A], [("q0", A, "q0"), ("q0", A, "q1")], "q0")
    with pytest.raises(AutomatonError):
        canonical_form(a)


def test_empty_automaton_behaves():
    e = empty_automaton([A])
    assert not accepts(e, [])
    assert reachable(e) == frozenset()
