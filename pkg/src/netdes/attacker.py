"""Sensor-attack constraints and attack-automaton validation.

The constraints automaton bounds what any sensor attack may do: after each
event it can observe, the attacker inserts at most a bounded burst of
compromised events into the observation channel and then stops; events it
cannot observe pass straight through. A candidate attack automaton is valid
when it never disables an event outside its own control set and never
changes state on an event it cannot observe.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import FrozenSet, List, Tuple

from . import events as ev
from .automaton import Automaton, AutomatonError, state_name
from .config import ConfigError, SystemConfig
from .events import EventLabel, sorted_events

AC_INIT = "qinit"


@dataclass(frozen=True)
class AttackConstraint:
    observable: FrozenSet[str]     # event names the attacker can see
    compromised: FrozenSet[str]    # the subset it can forge
    bound: int                     # max events sent per observation

    def __post_init__(self) -> None:
        if not self.compromised <= self.observable:
            raise ConfigError("compromised events must be attacker-observable")
        if self.bound < 0:
            raise ConfigError("attack bound must be nonnegative")


@dataclass(frozen=True)
class AttackControlConstraint:
    controllable: FrozenSet[EventLabel]
    observable: FrozenSet[EventLabel]

    def __post_init__(self) -> None:
        if not self.controllable <= self.observable:
            raise ConfigError("attacker-controllable events must be observable "
                              "(required for normality to equal observability)")


def attack_constraint(cfg: SystemConfig) -> AttackConstraint:
    return AttackConstraint(frozenset(cfg.sigma_oa), frozenset(cfg.sigma_sa),
                            cfg.rates.u)


def attack_control_constraint(cfg: SystemConfig) -> AttackControlConstraint:
    sa = set(cfg.sigma_sa)
    controllable = {ev.compromised(n) for n in cfg.sigma_sa} | {ev.stop}
    observable = {ev.plant(n) for n in cfg.sigma_oa}
    observable |= {ev.entry(n) for n in cfg.sigma_oa if n not in sa}
    observable |= {ev.compromised(n) for n in cfg.sigma_sa}
    observable |= {ev.tick, ev.stop}
    return AttackControlConstraint(frozenset(controllable), frozenset(observable))


def build_attack_constraints(cfg: SystemConfig,
                             count_forwarded_event: bool = True) -> Automaton:
    """The template automaton every sensor attack is synchronized with.

    ``count_forwarded_event`` selects whether forwarding an uncompromised
    observation already spends one unit of the per-observation budget; the
    alternative starts the insertion counter at zero instead.
    """
    u = cfg.rates.u
    oa, sa = set(cfg.sigma_oa), set(cfg.sigma_sa)
    obs_only = [n for n in cfg.sigma_o if n in oa and n not in sa]
    unobs_to_attacker = [n for n in cfg.sigma_o if n not in oa]
    if count_forwarded_event and obs_only and u < 1:
        raise ConfigError("u must be at least 1 when forwarded events count "
                          "toward the attack budget")

    states: List[str] = [AC_INIT]
    states += [f"qobs_{n}" for n in obs_only]
    states += [f"quo_{n}" for n in unobs_to_attacker]
    states += [f"q{i}" for i in range(u + 1)]

    alphabet = cfg.full_alphabet()
    t: List[Tuple[str, EventLabel, str]] = []
    # case 1: events invisible to the attacker and the clock loop at init
    for n in cfg.sigma_uo:
        t.append((AC_INIT, ev.plant(n), AC_INIT))
    for n in cfg.sigma_o:
        t.append((AC_INIT, ev.exit_(n), AC_INIT))
    for g in cfg.gamma:
        t.append((AC_INIT, ev.command_entry(g), AC_INIT))
        t.append((AC_INIT, ev.command_exit(g), AC_INIT))
        t.append((AC_INIT, ev.command(g), AC_INIT))
    t.append((AC_INIT, ev.tick, AC_INIT))
    # cases 2-3: observable to the supervisor only; forwarded untouched
    for n in unobs_to_attacker:
        t.append((AC_INIT, ev.plant(n), f"quo_{n}"))
        t.append((f"quo_{n}", ev.entry(n), AC_INIT))
    # case 4: a compromised observation opens an attack round
    for n in sorted(sa):
        t.append((AC_INIT, ev.plant(n), "q0"))
    # cases 5-6: attacker-observable but untamperable; forwarding may or may
    # not count toward the budget
    after_forward = "q1" if count_forwarded_event else "q0"
    for n in obs_only:
        t.append((AC_INIT, ev.plant(n), f"qobs_{n}"))
        t.append((f"qobs_{n}", ev.entry(n), after_forward))
    # case 7: the attacker may end the round at any counter value
    for i in range(u + 1):
        t.append((f"q{i}", ev.stop, AC_INIT))
    # case 8: insertions up to the budget
    for i in range(u):
        for n in sorted(sa):
            t.append((f"q{i}", ev.compromised(n), f"q{i + 1}"))
    return Automaton(states, alphabet, t, AC_INIT, name="AC")


def ac_state_count(cfg: SystemConfig) -> int:
    return cfg.rates.u + 2 + len(set(cfg.sigma_o) - set(cfg.sigma_sa))


# -- validation -------------------------------------------------------------


@dataclass(frozen=True)
class Violation:
    state: str
    event: str
    rule: str

    def render(self) -> str:
        return f"{self.rule} {self.state} {self.event}"


@dataclass
class ValidationReport:
    subject: str
    violations: List[Violation]

    @property
    def ok(self) -> bool:
        return not self.violations

    def render(self) -> str:
        if self.ok:
            return f"{self.subject}: valid"
        lines = [f"{self.subject}: {len(self.violations)} violation(s)"]
        lines += ["  " + v.render() for v in self.violations]
        return "\n".join(lines)


def validate_attack(a: Automaton, constraint: AttackControlConstraint,
                    expected_alphabet: FrozenSet[EventLabel]) -> ValidationReport:
    """Check SA-controllability and SA-observability of an attack automaton."""
    if a.alphabet != expected_alphabet:
        raise AutomatonError("attack alphabet differs from the constraints alphabet")
    uncontrollable = sorted_events(a.alphabet - constraint.controllable)
    unobservable = a.alphabet - constraint.observable
    violations: List[Violation] = []
    for q in a.states:
        for e in uncontrollable:
            if not a.successors(q, e):
                violations.append(Violation(state_name(q), e.spell(),
                                            "sa-controllability"))
        for e in sorted_events(unobservable):
            for dst in a.successors(q, e):
                if dst != q:
                    violations.append(Violation(state_name(q), e.spell(),
                                                "sa-observability"))
    return ValidationReport(a.name or "attack", violations)


def complete_with_selfloops(a: Automaton, uncontrollable: FrozenSet[EventLabel],
                            name: str = "") -> Automaton:
    """Add self-loops for missing uncontrollable events at every state.

    Sound for synthesized supervisors: a missing uncontrollable event is
    infeasible at every plant state compatible with the estimate, so the
    loop's behavior is unchanged while the totality requirement is met.
    """
    transitions = set(a.transitions)
    for q in a.states:
        for e in sorted_events(uncontrollable & a.alphabet):
            if not a.successors(q, e):
                transitions.add((q, e, q))
    return Automaton(a.states, a.alphabet, transitions, a.initial,
                     a.marked, name or a.name)


def faithful_attacker(cfg: SystemConfig) -> Automaton:
    """The attacker that forwards every observation untouched.

    Observing a compromised event, it re-emits exactly that event and stops;
    observing an untamperable one, it lets the plant's forward pass and
    stops. Everything else self-loops. Serves as the sound no-op fixture:
    composed with the loop it must never trigger detection.
    """
    alphabet = cfg.full_alphabet()
    oa, sa = set(cfg.sigma_oa), set(cfg.sigma_sa)
    obs_only = sorted(oa - sa)
    f0, fstop = "f0", "fstop"
    states = [f0] + [f"fsig_{n}" for n in sorted(sa)] \
        + [f"fobs_{n}" for n in obs_only] + [fstop]
    t: List[Tuple[str, EventLabel, str]] = []
    for n in sorted(sa):
        t.append((f0, ev.plant(n), f"fsig_{n}"))
        t.append((f"fsig_{n}", ev.compromised(n), fstop))
    for n in obs_only:
        t.append((f0, ev.plant(n), f"fobs_{n}"))
        t.append((f"fobs_{n}", ev.entry(n), fstop))
    t.append((fstop, ev.stop, f0))
    base = Automaton(states, alphabet, t, f0, marked=states, name="A_faithful")
    constraint = attack_control_constraint(cfg)
    return complete_with_selfloops(base, frozenset(base.alphabet)
                                   - constraint.controllable, name="A_faithful")
