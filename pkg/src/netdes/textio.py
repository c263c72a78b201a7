"""Line-oriented text format for automata, plus DOT export.

Format (bit-exact, UTF-8, ``#`` comments)::

    .automaton NAME
    .alphabet  a1:plain b1#:compromised v1:command tick stop
    .initial   S0
    .marked    S5 S10
    .trans     S0 a1 S1

Event spelling: plain ``x``; entry ``x_in``; compromised ``x#``; exit
``x_out``; commands ``v``, ``v_in``, ``v_out``; literals ``tick``, ``stop``.
A ``#`` token starts a comment; the compromised suffix never does because it
ends, not begins, its token.
"""
from __future__ import annotations

from collections import deque
from typing import Dict, List, Optional

from . import events as ev
from .automaton import Automaton, State, state_name
from .events import EventLabel, sorted_events


class ParseError(ValueError):
    def __init__(self, message: str, line: Optional[int] = None):
        self.line = line
        super().__init__(f"line {line}: {message}" if line else message)


def _tokens(line: str) -> List[str]:
    out = []
    for tok in line.split():
        if tok.startswith("#"):
            break
        out.append(tok)
    return out


def _role_suffix(label: EventLabel) -> str:
    return f"{label.spell()}:{label.role}" if label.role not in (ev.TICK, ev.STOP) \
        else label.spell()


def serialize_automaton(a: Automaton, rename: bool = False) -> str:
    """Render an automaton; ``rename`` maps states to S0.. in BFS order."""
    naming: Dict[State, str]
    if rename:
        # BFS numbering; the empty monitor estimate keeps its literal name so
        # DOT export can still highlight it after a round trip
        naming = {}

        def fresh(q: State) -> str:
            if isinstance(q, frozenset) and not q:
                return "{}"
            return f"S{len(naming)}"

        if a.initial is not None:
            order = deque([a.initial])
            naming[a.initial] = fresh(a.initial)
            while order:
                cur = order.popleft()
                for e in a.enabled(cur):
                    for dst in a.successors(cur, e):
                        if dst not in naming:
                            naming[dst] = fresh(dst)
                            order.append(dst)
        for q in a.states:
            if q not in naming:
                naming[q] = fresh(q)
    else:
        naming = {q: state_name(q) for q in a.states}
        if len(set(naming.values())) != len(naming):
            raise ValueError("state names collide; serialize with rename=True")

    spellings = {}
    for label in a.alphabet:
        sp = label.spell()
        if sp in spellings:
            raise ValueError(f"event spelling {sp!r} is ambiguous in this alphabet")
        spellings[sp] = label

    lines = [f".automaton {a.name or 'A'}"]
    lines.append(".alphabet " + " ".join(_role_suffix(l) for l in sorted_events(a.alphabet)))
    if a.initial is not None:
        lines.append(f".initial {naming[a.initial]}")
    if a.marked:
        lines.append(".marked " + " ".join(sorted(naming[q] for q in a.marked)))
    trans = sorted((naming[s], e, naming[t]) for (s, e, t) in a.transitions)
    for (s, e, t) in trans:
        lines.append(f".trans {s} {e.spell()} {t}")
    return "\n".join(lines) + "\n"


def parse_automaton(text: str, name: str = "") -> Automaton:
    alphabet: Dict[str, EventLabel] = {}
    initial: Optional[str] = None
    marked: List[str] = []
    trans: List[tuple] = []
    states: List[str] = []
    seen_states: set = set()
    auto_name = name

    def note_state(s: str) -> None:
        if s not in seen_states:
            seen_states.add(s)
            states.append(s)

    for lineno, raw in enumerate(text.splitlines(), 1):
        toks = _tokens(raw)
        if not toks:
            continue
        directive, args = toks[0], toks[1:]
        if directive == ".automaton":
            if args:
                auto_name = args[0]
        elif directive == ".alphabet":
            for tok in args:
                spelling, _, role = tok.partition(":")
                try:
                    label = ev.parse_spelling(spelling, role or None)
                except ev.EventError as exc:
                    raise ParseError(str(exc), lineno)
                if label.spell() in alphabet:
                    raise ParseError(f"duplicate event spelling {label.spell()!r}", lineno)
                alphabet[label.spell()] = label
        elif directive == ".initial":
            if len(args) != 1:
                raise ParseError(".initial takes exactly one state", lineno)
            initial = args[0]
            note_state(initial)
        elif directive == ".marked":
            for s in args:
                marked.append(s)
                note_state(s)
        elif directive == ".trans":
            if len(args) != 3:
                raise ParseError(".trans takes `src event dst`", lineno)
            src, spelling, dst = args
            label = alphabet.get(spelling)
            if label is None:
                raise ParseError(f"undeclared event {spelling!r}", lineno)
            note_state(src)
            note_state(dst)
            trans.append((src, label, dst))
        else:
            raise ParseError(f"unknown directive {directive!r}", lineno)

    if initial is None and states:
        raise ParseError("missing .initial for a nonempty automaton")
    return Automaton(states, alphabet.values(), trans, initial, marked, auto_name)


def load_automaton(path: str, name: str = "") -> Automaton:
    with open(path, "r", encoding="utf-8") as fh:
        return parse_automaton(fh.read(), name=name)


def save_automaton(a: Automaton, path: str, rename: bool = False) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(serialize_automaton(a, rename=rename))


# -- DOT export ---------------------------------------------------------

def to_dot(a: Automaton, graph_name: str = "") -> str:
    """DOT digraph: initial state double-bordered, marked states shaded,
    the empty monitor state highlighted."""
    naming = {q: state_name(q) for q in a.states}
    if len(set(naming.values())) != len(naming):
        naming = {q: f"S{i}" for i, q in enumerate(a.states)}
    lines = [f'digraph "{graph_name or a.name or "A"}" {{', "  rankdir=LR;"]
    for q in a.states:
        attrs = []
        if q == a.initial:
            attrs.append("peripheries=2")
        if q in a.marked:
            attrs.append('style=filled fillcolor=gray85')
        if (isinstance(q, frozenset) and not q) or naming[q] == "{}":
            attrs.append('style=filled fillcolor=salmon')
        attr_txt = (" [" + " ".join(attrs) + "]") if attrs else ""
        lines.append(f'  "{naming[q]}"{attr_txt};')
    grouped: Dict[tuple, List[str]] = {}
    for (s, e, t) in sorted(a.transitions,
                            key=lambda x: (naming[x[0]], x[1].sort_key(), naming[x[2]])):
        grouped.setdefault((naming[s], naming[t]), []).append(e.spell())
    for (s, t), labels in grouped.items():
        lines.append(f'  "{s}" -> "{t}" [label="{",".join(labels)}"];')
    lines.append("}")
    return "\n".join(lines) + "\n"
