"""Finite-state automaton kernel.

Automata here are possibly nondeterministic, immutable after construction,
and safe to share. States are opaque hashable identifiers; composite
operations (products, observers) produce canonical encodings (tuples,
frozensets) so results hash and compare deterministically.
"""
from __future__ import annotations

from collections import deque
from typing import Callable, Dict, FrozenSet, Hashable, Iterable, List, Optional, Sequence, Set, Tuple

from .events import EventLabel, sorted_events

State = Hashable
Transition = Tuple[State, EventLabel, State]


class AutomatonError(ValueError):
    """Raised when an automaton or an operation argument is ill-formed."""


def state_name(q: State) -> str:
    """Canonical, whitespace-free rendering of a state identifier.

    Used both for serialization and as a total order on heterogeneous
    state types, so every composite encoding must render deterministically.
    """
    if isinstance(q, str):
        return q
    canon = getattr(q, "canonical_name", None)
    if canon is not None:
        return canon()
    if isinstance(q, EventLabel):
        return q.spell()
    if isinstance(q, bool):
        return "true" if q else "false"
    if isinstance(q, int):
        return str(q)
    if isinstance(q, tuple):
        return "(" + ",".join(state_name(x) for x in q) + ")"
    if isinstance(q, (frozenset, set)):
        return "{" + ",".join(sorted(state_name(x) for x in q)) + "}"
    return repr(q)


def _state_key(q: State) -> str:
    return state_name(q)


class Automaton:
    """A 5-tuple (states, alphabet, transition relation, initial, marked).

    ``initial`` may be None only for the empty automaton (no states), which
    arises from trimming. The transition relation is stored both as a set of
    triples and as a successor map for traversal.
    """

    __slots__ = ("name", "states", "alphabet", "transitions", "initial",
                 "marked", "_delta", "_enabled")

    def __init__(self, states: Iterable[State], alphabet: Iterable[EventLabel],
                 transitions: Iterable[Transition], initial: Optional[State],
                 marked: Iterable[State] = (), name: str = "") -> None:
        self.name = name
        seen: Dict[State, None] = {}
        for q in states:
            if q not in seen:
                seen[q] = None
        self.states: Tuple[State, ...] = tuple(seen)
        self.alphabet: FrozenSet[EventLabel] = frozenset(alphabet)
        self.transitions: FrozenSet[Transition] = frozenset(transitions)
        self.initial = initial
        self.marked: FrozenSet[State] = frozenset(marked)

        state_set = set(self.states)
        if initial is None:
            if self.states:
                raise AutomatonError("initial state required for a nonempty automaton")
        elif initial not in state_set:
            raise AutomatonError(f"initial state {state_name(initial)} not declared")
        if not self.marked <= state_set:
            extra = next(iter(self.marked - state_set))
            raise AutomatonError(f"marked state {state_name(extra)} not declared")

        delta: Dict[State, Dict[EventLabel, Tuple[State, ...]]] = {q: {} for q in self.states}
        tmp: Dict[State, Dict[EventLabel, Set[State]]] = {}
        for (src, ev, dst) in self.transitions:
            if src not in state_set or dst not in state_set:
                raise AutomatonError(f"transition references unknown state: "
                                     f"{state_name(src)} -{ev.spell()}-> {state_name(dst)}")
            if ev not in self.alphabet:
                raise AutomatonError(f"transition event {ev.spell()} not in alphabet")
            tmp.setdefault(src, {}).setdefault(ev, set()).add(dst)
        for src, by_ev in tmp.items():
            for ev, dsts in by_ev.items():
                delta[src][ev] = tuple(sorted(dsts, key=_state_key))
        self._delta = delta
        self._enabled: Dict[State, Tuple[EventLabel, ...]] = {
            q: tuple(sorted_events(delta[q])) for q in self.states
        }

    # -- basic queries -------------------------------------------------

    def successors(self, q: State, ev: EventLabel) -> Tuple[State, ...]:
        return self._delta[q].get(ev, ())

    def enabled(self, q: State) -> Tuple[EventLabel, ...]:
        return self._enabled[q]

    def step(self, q: State, ev: EventLabel) -> Optional[State]:
        """Deterministic single successor, or None when undefined."""
        dsts = self._delta[q].get(ev, ())
        if not dsts:
            return None
        if len(dsts) > 1:
            raise AutomatonError(f"nondeterministic on {ev.spell()} at {state_name(q)}")
        return dsts[0]

    @property
    def deterministic(self) -> bool:
        return all(len(dsts) == 1 for by_ev in self._delta.values()
                   for dsts in by_ev.values())

    def is_empty(self) -> bool:
        return not self.states

    def sorted_states(self) -> List[State]:
        return sorted(self.states, key=_state_key)

    def renamed(self, mapping: Dict[State, State], name: str = "") -> "Automaton":
        return Automaton(
            [mapping[q] for q in self.states], self.alphabet,
            [(mapping[s], e, mapping[t]) for (s, e, t) in self.transitions],
            None if self.initial is None else mapping[self.initial],
            [mapping[q] for q in self.marked], name or self.name)

    def with_marked(self, marked: Iterable[State], name: str = "") -> "Automaton":
        return Automaton(self.states, self.alphabet, self.transitions,
                         self.initial, marked, name or self.name)

    def __repr__(self) -> str:
        return (f"Automaton({self.name or '?'}: {len(self.states)} states, "
                f"{len(self.alphabet)} events, {len(self.transitions)} transitions)")


def empty_automaton(alphabet: Iterable[EventLabel], name: str = "") -> Automaton:
    return Automaton((), alphabet, (), None, (), name)


# -- reachability ------------------------------------------------------

def unobservable_reach(a: Automaton, q: State,
                       observed: Iterable[EventLabel]) -> FrozenSet[State]:
    """States reachable from q along events outside ``observed`` only."""
    obs = frozenset(observed)
    if q not in a._delta:
        raise AutomatonError(f"unknown state {state_name(q)}")
    if not obs <= a.alphabet:
        bad = next(iter(obs - a.alphabet))
        raise AutomatonError(f"observed event {bad.spell()} not in alphabet")
    return _closure(a, (q,), obs)


def _closure(a: Automaton, seed: Iterable[State],
             observed: FrozenSet[EventLabel]) -> FrozenSet[State]:
    seen: Set[State] = set(seed)
    frontier = deque(seen)
    while frontier:
        cur = frontier.popleft()
        for ev, dsts in a._delta[cur].items():
            if ev in observed:
                continue
            for dst in dsts:
                if dst not in seen:
                    seen.add(dst)
                    frontier.append(dst)
    return frozenset(seen)


def reachable(a: Automaton) -> FrozenSet[State]:
    if a.initial is None:
        return frozenset()
    seen: Set[State] = {a.initial}
    frontier = deque(seen)
    while frontier:
        cur = frontier.popleft()
        for dsts in a._delta[cur].values():
            for dst in dsts:
                if dst not in seen:
                    seen.add(dst)
                    frontier.append(dst)
    return frozenset(seen)


def coreachable(a: Automaton) -> FrozenSet[State]:
    """States from which some marked state can be reached."""
    back: Dict[State, List[State]] = {q: [] for q in a.states}
    for (src, _ev, dst) in a.transitions:
        back[dst].append(src)
    seen: Set[State] = set(a.marked)
    frontier = deque(seen)
    while frontier:
        cur = frontier.popleft()
        for src in back[cur]:
            if src not in seen:
                seen.add(src)
                frontier.append(src)
    return frozenset(seen)


def is_nonblocking(a: Automaton) -> bool:
    return reachable(a) <= coreachable(a)


def trim(a: Automaton, name: str = "") -> Automaton:
    keep = reachable(a) & coreachable(a)
    if a.initial not in keep:
        return empty_automaton(a.alphabet, name or a.name)
    kept_states = [q for q in a.states if q in keep]
    kept_trans = [(s, e, t) for (s, e, t) in a.transitions if s in keep and t in keep]
    return Automaton(kept_states, a.alphabet, kept_trans, a.initial,
                     a.marked & keep, name or a.name)


def restrict_reachable(a: Automaton, name: str = "") -> Automaton:
    keep = reachable(a)
    if a.initial is None:
        return a
    kept_states = [q for q in a.states if q in keep]
    kept_trans = [(s, e, t) for (s, e, t) in a.transitions if s in keep and t in keep]
    return Automaton(kept_states, a.alphabet, kept_trans, a.initial,
                     a.marked & keep, name or a.name)


# -- language membership ----------------------------------------------

def accepts(a: Automaton, seq: Sequence[EventLabel], marked: bool = False) -> bool:
    """Existential run semantics; with ``marked`` require a marked end state."""
    for ev in seq:
        if ev not in a.alphabet:
            raise AutomatonError(f"event {ev.spell()} not in alphabet")
    if a.initial is None:
        return False
    current: Set[State] = {a.initial}
    for ev in seq:
        nxt: Set[State] = set()
        for q in current:
            nxt.update(a.successors(q, ev))
        if not nxt:
            return False
        current = nxt
    return bool(current & a.marked) if marked else True


# -- observer / subset construction ------------------------------------

def subset_construction(a: Automaton, observed: Iterable[EventLabel],
                        name: str = "") -> Automaton:
    """Determinize w.r.t. ``observed`` over the full alphabet of ``a``.

    Unobserved events self-loop at every observer state. Observed events
    map an estimate to the unobservable reach of its successor set; empty
    successors yield no transition (the empty estimate is materialized only
    by the monitor construction, which routes inconsistencies explicitly).
    """
    obs = frozenset(observed)
    if not obs <= a.alphabet:
        bad = next(iter(obs - a.alphabet))
        raise AutomatonError(f"observed event {bad.spell()} not in alphabet")
    if a.initial is None:
        return empty_automaton(a.alphabet, name)
    unobs = sorted_events(a.alphabet - obs)
    obs_sorted = sorted_events(obs)

    init = _closure(a, (a.initial,), obs)
    states: List[FrozenSet[State]] = [init]
    index: Set[FrozenSet[State]] = {init}
    transitions: List[Transition] = []
    frontier = deque([init])
    while frontier:
        cur = frontier.popleft()
        for ev in unobs:
            transitions.append((cur, ev, cur))
        for ev in obs_sorted:
            raw: Set[State] = set()
            for q in cur:
                raw.update(a.successors(q, ev))
            if not raw:
                continue
            nxt = _closure(a, sorted(raw, key=_state_key), obs)
            transitions.append((cur, ev, nxt))
            if nxt not in index:
                index.add(nxt)
                states.append(nxt)
                frontier.append(nxt)
    return Automaton(states, a.alphabet, transitions, init, states, name)


# -- composition -------------------------------------------------------

def synchronous_product(a1: Automaton, a2: Automaton, name: str = "") -> Automaton:
    """Binary synchronous product with pair states.

    Shared events synchronize when both sides enable them, private events
    interleave, and a shared event enabled on one side only is blocked.
    Only the reachable part is constructed; marked states are pairs of
    marked states.
    """
    return compose([a1, a2], name=name)


def compose(components: Sequence[Automaton], name: str = "",
            forbidden: Optional[Callable[[Tuple[State, ...]], bool]] = None) -> Automaton:
    """N-ary synchronous product with flat tuple states.

    ``forbidden`` prunes composite states during exploration (used by the
    plant pruning step); a forbidden state is neither kept nor expanded.
    """
    if not components:
        raise AutomatonError("compose needs at least one component")
    alphabet: Set[EventLabel] = set()
    for c in components:
        alphabet.update(c.alphabet)
    participants: Dict[EventLabel, Tuple[int, ...]] = {
        ev: tuple(i for i, c in enumerate(components) if ev in c.alphabet)
        for ev in alphabet
    }
    if any(c.initial is None for c in components):
        return empty_automaton(alphabet, name)
    init = tuple(c.initial for c in components)
    if forbidden is not None and forbidden(init):
        return empty_automaton(alphabet, name)
    events = sorted_events(alphabet)
    states: List[Tuple[State, ...]] = [init]
    index: Set[Tuple[State, ...]] = {init}
    transitions: List[Transition] = []
    frontier = deque([init])
    while frontier:
        cur = frontier.popleft()
        for ev in events:
            parts = participants[ev]
            target_lists = []
            blocked = False
            for i in parts:
                dsts = components[i].successors(cur[i], ev)
                if not dsts:
                    blocked = True
                    break
                target_lists.append((i, dsts))
            if blocked:
                continue
            for combo in _combinations(target_lists):
                nxt = list(cur)
                for i, dst in combo:
                    nxt[i] = dst
                nxt_t = tuple(nxt)
                if forbidden is not None and forbidden(nxt_t):
                    continue
                transitions.append((cur, ev, nxt_t))
                if nxt_t not in index:
                    index.add(nxt_t)
                    states.append(nxt_t)
                    frontier.append(nxt_t)
    marked = [q for q in states
              if all(q[i] in c.marked for i, c in enumerate(components))]
    return Automaton(states, alphabet, transitions, init, marked, name)


def _combinations(target_lists: List[Tuple[int, Tuple[State, ...]]]):
    if not target_lists:
        yield ()
        return
    (i, dsts), rest = target_lists[0], target_lists[1:]
    for dst in dsts:
        for tail in _combinations(rest):
            yield ((i, dst),) + tail


# -- comparison helpers ------------------------------------------------

def canonical_form(a: Automaton):
    """BFS-canonical encoding of a deterministic automaton, for isomorphism
    checks up to state renaming."""
    if not a.deterministic:
        raise AutomatonError("canonical_form requires a deterministic automaton")
    if a.initial is None:
        return (tuple(sorted_events(a.alphabet)), (), ())
    order: Dict[State, int] = {a.initial: 0}
    queue = deque([a.initial])
    edges = []
    while queue:
        cur = queue.popleft()
        for ev in a.enabled(cur):
            dst = a.successors(cur, ev)[0]
            if dst not in order:
                order[dst] = len(order)
                queue.append(dst)
            edges.append((order[cur], ev.spell(), order[dst]))
    marked = tuple(sorted(order[q] for q in a.marked if q in order))
    return (tuple(sorted_events(a.alphabet)), tuple(edges), marked)


def isomorphic(a1: Automaton, a2: Automaton) -> bool:
    """Reachable-part isomorphism for deterministic automata."""
    return canonical_form(a1) == canonical_form(a2)


def isomorphic_by(a1: Automaton, a2: Automaton,
                  mapping: Callable[[State], State]) -> bool:
    """Check that ``mapping`` is a transition-preserving bijection from the
    states of a1 onto the states of a2 (works for nondeterministic automata
    when the bijection is known, e.g. tuple reordering)."""
    image = {mapping(q) for q in a1.states}
    if image != set(a2.states) or len(image) != len(a1.states):
        return False
    if a1.initial is None or a2.initial is None:
        return a1.initial is None and a2.initial is None
    if mapping(a1.initial) != a2.initial:
        return False
    if {mapping(q) for q in a1.marked} != set(a2.marked):
        return False
    mapped = {(mapping(s), e, mapping(t)) for (s, e, t) in a1.transitions}
    return mapped == set(a2.transitions)


def shortest_path_to(a: Automaton, targets: Iterable[State]) -> Optional[List[EventLabel]]:
    """Shortest event sequence from the initial state into ``targets``."""
    target_set = set(targets)
    if a.initial is None:
        return None
    if a.initial in target_set:
        return []
    parent: Dict[State, Tuple[State, EventLabel]] = {}
    seen: Set[State] = {a.initial}
    frontier = deque([a.initial])
    while frontier:
        cur = frontier.popleft()
        for ev in a.enabled(cur):
            for dst in a.successors(cur, ev):
                if dst in seen:
                    continue
                seen.add(dst)
                parent[dst] = (cur, ev)
                if dst in target_set:
                    path: List[EventLabel] = []
                    node = dst
                    while node != a.initial:
                        node, e = parent[node]
                        path.append(e)
                    path.reverse()
                    return path
                frontier.append(dst)
    return None


def same_closed_language(a1: Automaton, a2: Automaton,
                         events: Iterable[EventLabel]) -> bool:
    """Equality of closed behaviors restricted to ``events``.

    Both automata must be deterministic on the compared events (observers
    are); transitions on other events are followed as silent self-loops only,
    so callers project first when anything else moves state.
    """
    evs = sorted_events(events)
    if a1.initial is None or a2.initial is None:
        return (a1.initial is None) == (a2.initial is None)
    seen = {(a1.initial, a2.initial)}
    frontier = deque(seen)
    while frontier:
        q1, q2 = frontier.popleft()
        en1 = {e for e in a1.enabled(q1) if e in evs}
        en2 = {e for e in a2.enabled(q2) if e in evs}
        if en1 != en2:
            return False
        for e in sorted_events(en1):
            nxt = (a1.step(q1, e), a2.step(q2, e))
            if nxt not in seen:
                seen.add(nxt)
                frontier.append(nxt)
    return True


def bounded_traces(a: Automaton, depth: int) -> Set[Tuple[EventLabel, ...]]:
    """All traces of the closed behavior up to the given length.

    Tracks the state estimate per trace so nondeterminism does not blow up
    the frontier beyond the number of distinct traces.
    """
    out: Set[Tuple[EventLabel, ...]] = set()
    if a.initial is None:
        return out
    level: Dict[Tuple[EventLabel, ...], FrozenSet[State]] = {(): frozenset((a.initial,))}
    out.add(())
    for _ in range(depth):
        nxt: Dict[Tuple[EventLabel, ...], FrozenSet[State]] = {}
        for trace, states in level.items():
            evs = sorted_events({e for q in states for e in a._delta[q]})
            for ev in evs:
                targets = frozenset(t for q in states for t in a.successors(q, ev))
                if targets:
                    t2 = trace + (ev,)
                    nxt[t2] = targets
                    out.add(t2)
        level = nxt
        if not level:
            break
    return out
