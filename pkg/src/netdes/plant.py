"""Plant with command storage and execution.

The plant assembly has three parts: a FIFO command store (commands arrive
from the control channel, expire after a bounded number of ticks), a
command-execution stage (uses one fetched command at a time, fires an event
once its per-event countdown reaches zero, abandons the command when an
uncontrollable event preempts it), and the plant proper. Their product is
pruned so the execution stage never holds a command that is useless at the
current plant state, and never idles over a tick while the store holds a
usable command.
"""
from __future__ import annotations

from typing import Dict, FrozenSet, List, Optional, Set, Tuple

from . import events as ev
from .automaton import (Automaton, AutomatonError, compose, restrict_reachable,
                        state_name)
from .config import SystemConfig
from .textio import load_automaton, parse_automaton

StorageState = Tuple[Tuple[str, int], ...]   # reception-ordered (command, time-left)
ExecState = FrozenSet[Tuple[str, int]]       # (event, countdown); empty = idle

IDLE: ExecState = frozenset()
EMPTY_QUEUE: StorageState = ()


def capacity_storage(n_f: int, u: int, v: int, delta_o: int, delta_c: int,
                     delta_s: int) -> int:
    return (n_f * u * v * (delta_o + delta_c + delta_s + 1)
            + v * (delta_c + delta_s + 1))


# -- command storage -----------------------------------------------------

def _queue_tick(q: StorageState) -> StorageState:
    return tuple((g, t - 1) for (g, t) in q if t > 0)


def _queue_commands(q: StorageState) -> List[str]:
    out = []
    for g, _ in q:
        if g not in out:
            out.append(g)
    return out


def _queue_remove_first(q: StorageState, cmd: str) -> StorageState:
    for i, (g, _) in enumerate(q):
        if g == cmd:
            return q[:i] + q[i + 1:]
    raise ValueError(f"command {cmd} not stored")


def build_command_storage(cfg: SystemConfig) -> Automaton:
    """FIFO queue of received commands; each entry survives delta_s ticks.

    ``v_out`` (arrival from the control channel) appends; the plain command
    event (a fetch by the execution stage) removes the earliest matching
    entry; ``tick`` decrements storage times and silently drops expired
    entries, so tick is defined everywhere.
    """
    cap = capacity_storage(cfg.rates.n_f, cfg.rates.u, cfg.rates.v,
                           cfg.delta_o, cfg.delta_c, cfg.delta_s)
    alphabet = [ev.command_exit(g) for g in cfg.gamma]
    alphabet += [ev.command(g) for g in cfg.gamma]
    alphabet.append(ev.tick)

    states: List[StorageState] = [EMPTY_QUEUE]
    seen: Set[StorageState] = {EMPTY_QUEUE}
    transitions = []
    frontier = [EMPTY_QUEUE]

    def visit(q: StorageState) -> None:
        if q not in seen:
            seen.add(q)
            states.append(q)
            frontier.append(q)

    while frontier:
        q = frontier.pop(0)
        nxt = _queue_tick(q)
        transitions.append((q, ev.tick, nxt))
        visit(nxt)
        if len(q) < cap:
            for g in cfg.gamma:
                nxt = q + ((g, cfg.delta_s),)
                transitions.append((q, ev.command_exit(g), nxt))
                visit(nxt)
        for g in _queue_commands(q):
            nxt = _queue_remove_first(q, g)
            transitions.append((q, ev.command(g), nxt))
            visit(nxt)
    return Automaton(states, alphabet, transitions, EMPTY_QUEUE, name="CS")


# -- command execution ----------------------------------------------------

def build_command_execution(cfg: SystemConfig) -> Automaton:
    """One command in use at a time.

    Fetching a command loads each of its events with that event's execution
    delay; tick decrements all countdowns while any is still positive; an
    event fires exactly when its countdown is zero; uncontrollable events
    fire at any time and reset the stage to idle, abandoning the command.
    """
    uncontrollable = [ev.plant(n) for n in cfg.sigma_uc]
    alphabet = [ev.command(g) for g in cfg.gamma]
    alphabet += cfg.plant_labels()
    alphabet.append(ev.tick)

    numbered: Dict[str, ExecState] = {
        g: frozenset((name, cfg.exec_delay(name)) for name in cfg.commands[g])
        for g in cfg.gamma
    }

    states: List[ExecState] = [IDLE]
    seen: Set[ExecState] = {IDLE}
    transitions = []
    frontier = [IDLE]

    def visit(q: ExecState) -> None:
        if q not in seen:
            seen.add(q)
            states.append(q)
            frontier.append(q)

    while frontier:
        q = frontier.pop(0)
        if q == IDLE:
            transitions.append((q, ev.tick, IDLE))
            for g in cfg.gamma:
                nxt = numbered[g]
                transitions.append((q, ev.command(g), nxt))
                visit(nxt)
        else:
            if any(t > 0 for _, t in q):
                nxt = frozenset((s, t - 1) for (s, t) in q)
                transitions.append((q, ev.tick, nxt))
                visit(nxt)
            for (s, t) in sorted(q):
                if t == 0:
                    transitions.append((q, ev.plant(s), IDLE))
        for u in uncontrollable:
            transitions.append((q, u, IDLE))
    return Automaton(states, alphabet, transitions, IDLE, name="CE")


# -- plant loading ---------------------------------------------------------

def load_plant(path: str, cfg: SystemConfig) -> Automaton:
    return _check_plant(load_automaton(path, name="G"), cfg)


def plant_from_text(text: str, cfg: SystemConfig) -> Automaton:
    return _check_plant(parse_automaton(text, name="G"), cfg)


def _check_plant(g: Automaton, cfg: SystemConfig) -> Automaton:
    sigma = set(cfg.plant_labels())
    extra = g.alphabet - sigma
    if extra:
        raise AutomatonError(
            f"plant event {sorted(extra)[0].spell()} is not declared in the config")
    missing_damage = cfg.damage - set(map(state_name, g.states))
    if missing_damage:
        raise AutomatonError(
            f"damage state {sorted(missing_damage)[0]} does not exist in the plant")
    marked = [q for q in g.states if state_name(q) in cfg.damage]
    return Automaton(g.states, sigma, g.transitions, g.initial, marked, name="G")


# -- composition and pruning ------------------------------------------------

def compose_and_prune_plant(cs: Automaton, ce: Automaton, g: Automaton,
                            cfg: SystemConfig) -> Automaton:
    """Product of storage, execution and plant with the two pruning rules.

    Rule 1 deletes composite states whose active command shares no event with
    the plant's enabled set (the fetch was useless). Rule 2 removes tick from
    states where the execution stage idles while the store holds a usable
    command: the fetch preempts time.
    """
    sigma_cs = {ev.command_exit(x) for x in cfg.gamma} \
        | {ev.command(x) for x in cfg.gamma} | {ev.tick}
    sigma_ce = {ev.command(x) for x in cfg.gamma} | set(cfg.plant_labels()) | {ev.tick}
    if set(cs.alphabet) != sigma_cs or set(ce.alphabet) != sigma_ce:
        raise AutomatonError("command storage/execution alphabet mismatch with config")
    if set(g.alphabet) != set(cfg.plant_labels()):
        raise AutomatonError("plant alphabet mismatch with config")

    enabled_g: Dict[object, Set[str]] = {
        q: {e.base for e in g.enabled(q)} for q in g.states
    }
    command_events = {name: set(members) for name, members in cfg.commands.items()}

    def useless_fetch(state: Tuple) -> bool:
        s, e, q = state
        if e == IDLE:
            return False
        denum = {name for (name, _) in e}
        return not (enabled_g[q] & denum)

    temp = compose([cs, ce, g], name="G_new", forbidden=useless_fetch)

    def preempted(state: Tuple) -> bool:
        s, e, q = state
        if e != IDLE:
            return False
        en = enabled_g[q]
        return any(command_events[g_] & en for g_ in _queue_commands(s))

    kept = [(src, label, dst) for (src, label, dst) in temp.transitions
            if not (label == ev.tick and preempted(src))]
    pruned = Automaton(temp.states, temp.alphabet, kept, temp.initial,
                       (), name="G_new")
    return restrict_reachable(pruned, name="G_new")


# -- structural checks -------------------------------------------------------

def check_pruned_invariants(g_new: Automaton, g: Automaton,
                            cfg: SystemConfig) -> List[str]:
    """Re-assert both pruning rules on the finished composition."""
    problems = []
    enabled_g = {q: {e.base for e in g.enabled(q)} for q in g.states}
    command_events = {name: set(members) for name, members in cfg.commands.items()}
    for state in g_new.states:
        s, e, q = state
        if e != IDLE:
            denum = {name for (name, _) in e}
            if not (enabled_g[q] & denum):
                problems.append(f"useless active command at {state_name(state)}")
        else:
            usable = any(command_events[g_] & enabled_g[q]
                         for g_ in _queue_commands(s))
            if usable and g_new.successors(state, ev.tick):
                problems.append(f"tick not preempted at {state_name(state)}")
    return problems


def check_uncontrollable_liveness(g_new: Automaton, g: Automaton,
                                  cfg: SystemConfig) -> List[str]:
    problems = []
    for state in g_new.states:
        _s, _e, q = state
        for name in cfg.sigma_uc:
            if ev.plant(name) in g.enabled(q) and \
                    not g_new.successors(state, ev.plant(name)):
                problems.append(
                    f"uncontrollable {name} blocked at {state_name(state)}")
    return problems


def check_activity_loop_free(a: Automaton) -> bool:
    """No cycle made solely of non-tick events."""
    adj: Dict[object, List[object]] = {q: [] for q in a.states}
    for (s, e, t) in a.transitions:
        if e != ev.tick:
            adj[s].append(t)
    color: Dict[object, int] = {}
    for root in a.states:
        if color.get(root):
            continue
        stack = [(root, iter(adj[root]))]
        color[root] = 1
        while stack:
            node, it = stack[-1]
            advanced = False
            for nxt in it:
                c = color.get(nxt, 0)
                if c == 1:
                    return False
                if c == 0:
                    color[nxt] = 1
                    stack.append((nxt, iter(adj[nxt])))
                    advanced = True
                    break
            if not advanced:
                color[node] = 2
                stack.pop()
    return True


def max_plant_events_between_ticks(a: Automaton) -> Optional[int]:
    """Longest run of plant events on any tick-free path; None if the
    tick-free subgraph is cyclic."""
    if not check_activity_loop_free(a):
        return None
    order: List[object] = []
    indeg: Dict[object, int] = {q: 0 for q in a.states}
    adj: Dict[object, List[Tuple[object, int]]] = {q: [] for q in a.states}
    for (s, e, t) in a.transitions:
        if e == ev.tick:
            continue
        weight = 1 if (e.role == ev.PLAIN) else 0
        adj[s].append((t, weight))
        indeg[t] += 1
    ready = [q for q in a.states if indeg[q] == 0]
    while ready:
        q = ready.pop()
        order.append(q)
        for t, _ in adj[q]:
            indeg[t] -= 1
            if indeg[t] == 0:
                ready.append(t)
    best: Dict[object, int] = {q: 0 for q in a.states}
    for q in reversed(order):
        for t, w in adj[q]:
            best[q] = max(best[q], w + best[t])
    return max(best.values(), default=0)


def rate_bound_warnings(g_new: Automaton, cfg: SystemConfig) -> List[str]:
    """The per-tick firing bound is validated, not enforced: the plant is
    user input."""
    warnings = []
    if not check_activity_loop_free(g_new):
        warnings.append("composed plant has an activity loop (cycle without tick)")
        return warnings
    burst = max_plant_events_between_ticks(g_new)
    if burst is not None and burst > cfg.rates.n_f:
        warnings.append(
            f"plant assembly alone can fire {burst} events within one tick, "
            f"above n_f={cfg.rates.n_f} (the closed loop is tighter: supervisor "
            f"sends are bounded per observation)")
    return warnings
