"""Non-FIFO bounded-delay channel automata.

Both channels hold a bounded multiset of (message, remaining-delay) pairs.
A message enters with the channel's full delay bound attached; ``tick``
decrements every remaining delay and is blocked while any message is at
delay zero (it must leave first); any resident message may exit at any
time, which is what makes the channel non-FIFO and the automaton
nondeterministic.

Capacities come from the closed-form rate analysis: the observation channel
holds at most ``n_f * u * (delta_o + 1)`` messages and the control channel at
most ``n_f * u * v * (delta_o + delta_c + 1) + v * (delta_c + 1)``.
"""
from __future__ import annotations

from collections import deque
from typing import Dict, Iterable, List, Tuple

from . import events as ev
from .automaton import Automaton, AutomatonError
from .config import SystemConfig

Entry = Tuple[Tuple[str, int], int]  # ((message, delay), multiplicity)


class ChannelState:
    """Canonical bounded multiset of (message, remaining-delay) pairs.

    Entries are kept sorted by (message, delay) with positive multiplicities,
    so equal multisets are identical objects for hashing purposes.
    """

    __slots__ = ("entries", "_hash")

    def __init__(self, entries: Iterable[Entry] = ()):
        cleaned = tuple(sorted((pair, m) for (pair, m) in entries if m > 0))
        self.entries: Tuple[Entry, ...] = cleaned
        self._hash = hash(cleaned)

    def __eq__(self, other) -> bool:
        return isinstance(other, ChannelState) and self.entries == other.entries

    def __hash__(self) -> int:
        return self._hash

    def __lt__(self, other: "ChannelState") -> bool:
        return self.entries < other.entries

    def canonical_name(self) -> str:
        if not self.entries:
            return "{}"
        parts = []
        for (msg, delay), mult in self.entries:
            suffix = f"^{mult}" if mult > 1 else ""
            parts.append(f"({msg},{delay}){suffix}")
        return "{" + ",".join(parts) + "}"

    def __repr__(self) -> str:
        return self.canonical_name()

    def total(self) -> int:
        return sum(m for _, m in self.entries)

    def has_zero_delay(self) -> bool:
        return any(delay == 0 for (_, delay), _ in self.entries)

    def tick(self) -> "ChannelState":
        return ChannelState((((msg, delay - 1), m) for (msg, delay), m in self.entries))

    def add(self, msg: str, delay: int) -> "ChannelState":
        out: Dict[Tuple[str, int], int] = dict(self.entries)
        out[(msg, delay)] = out.get((msg, delay), 0) + 1
        return ChannelState(out.items())

    def remove(self, msg: str, delay: int) -> "ChannelState":
        out: Dict[Tuple[str, int], int] = dict(self.entries)
        if out.get((msg, delay), 0) < 1:
            raise ValueError(f"no ({msg},{delay}) entry to remove")
        out[(msg, delay)] -= 1
        return ChannelState(out.items())

    def delays_of(self, msg: str) -> List[int]:
        return [delay for (m, delay), _ in self.entries if m == msg]


EMPTY_CHANNEL = ChannelState()


# -- capacity formulas ---------------------------------------------------

def capacity_observation(n_f: int, u: int, delta_o: int) -> int:
    return n_f * u * (delta_o + 1)


def capacity_control(n_f: int, u: int, v: int, delta_o: int, delta_c: int) -> int:
    return n_f * u * v * (delta_o + delta_c + 1) + v * (delta_c + 1)


def enumerate_channel_states(n_kinds: int, delta: int, capacity: int) -> int:
    """Number of bounded multisets over n_kinds messages and delays [0:delta].

    Geometric sum of multiset counts by size; the empty channel counts too.
    """
    if n_kinds <= 0:
        raise ValueError("need a positive number of message kinds")
    if capacity < 0:
        raise ValueError("capacity must be nonnegative")
    base = n_kinds * (delta + 1)
    if base == 1:
        return capacity + 1
    return (base ** (capacity + 1) - 1) // (base - 1)


# -- channel construction --------------------------------------------------

def _build_channel(messages: List[str], delta: int, capacity: int,
                   in_label, out_label, name: str) -> Automaton:
    alphabet = [in_label(m) for m in messages] + [out_label(m) for m in messages]
    alphabet.append(ev.tick)
    states: List[ChannelState] = [EMPTY_CHANNEL]
    seen = {EMPTY_CHANNEL}
    transitions = []
    frontier = deque([EMPTY_CHANNEL])

    def visit(q: ChannelState) -> None:
        if q not in seen:
            seen.add(q)
            states.append(q)
            frontier.append(q)

    while frontier:
        q = frontier.popleft()
        if not q.has_zero_delay():
            nxt = q.tick()
            transitions.append((q, ev.tick, nxt))
            visit(nxt)
        if q.total() < capacity:
            for m in messages:
                nxt = q.add(m, delta)
                transitions.append((q, in_label(m), nxt))
                visit(nxt)
        for m in messages:
            for d in q.delays_of(m):
                nxt = q.remove(m, d)
                transitions.append((q, out_label(m), nxt))
                visit(nxt)
    return Automaton(states, alphabet, transitions, EMPTY_CHANNEL, name=name)


def build_observation_channel(cfg: SystemConfig) -> Automaton:
    """Channel between the attack point and the supervisor.

    Uncompromised observables enter as plant sends (``x_in``); compromised
    ones enter only as attacker sends (``x#``); each exit yields one
    successor per distinct resident delay of that message.
    """
    capacity = capacity_observation(cfg.rates.n_f, cfg.rates.u, cfg.delta_o)
    sa = set(cfg.sigma_sa)

    def in_label(m: str):
        return ev.compromised(m) if m in sa else ev.entry(m)

    return _build_channel(cfg.sigma_o, cfg.delta_o, capacity,
                          in_label, ev.exit_, "OC")


def build_control_channel(cfg: SystemConfig) -> Automaton:
    capacity = capacity_control(cfg.rates.n_f, cfg.rates.u, cfg.rates.v,
                                cfg.delta_o, cfg.delta_c)
    return _build_channel(cfg.gamma, cfg.delta_c, capacity,
                          ev.command_entry, ev.command_exit, "CC")


def relabel_to_attack_free(oc: Automaton) -> Automaton:
    """Rewrite channel entries to the plain plant events for the monitor's
    attack-free reference model: ``x#`` and ``x_in`` both become ``x``."""
    plain_bases = {l.base for l in oc.alphabet if l.role == ev.PLAIN}
    mapped_bases = {l.base for l in oc.alphabet
                    if l.role in (ev.IN, ev.COMPROMISED)}
    clash = plain_bases & mapped_bases
    if clash:
        raise AutomatonError(
            f"plain event {sorted(clash)[0]} already present; relabeling would collide")

    def relabel(label):
        if label.role in (ev.IN, ev.COMPROMISED):
            return ev.plant(label.base)
        return label

    alphabet = {relabel(l) for l in oc.alphabet}
    transitions = [(s, relabel(e), t) for (s, e, t) in oc.transitions]
    return Automaton(oc.states, alphabet, transitions, oc.initial,
                     oc.marked, name=(oc.name or "OC") + "^T")
