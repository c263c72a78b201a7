"""System configuration: alphabet partitions, commands, delays, rate bounds.

Text format (line-oriented; continuation lines extend the current section)::

    [parameters] delta_o=1 delta_c=0 delta_s=0 n_f=1 u=1 v=1
    [events]     a1 c o ao comp te=0
                 a2 uc uo - - -
    [commands]   v1 = a1
    [damage]     5 10

Event columns: name, c/uc, o/uo, ao/-, comp/-, te=N or -.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, FrozenSet, List, Optional

from . import events as ev
from .events import EventLabel


class ConfigError(ValueError):
    def __init__(self, message: str, line: Optional[int] = None):
        self.line = line
        super().__init__(f"line {line}: {message}" if line else message)


@dataclass(frozen=True)
class RateBounds:
    """Per-tick rate bounds: plant firings, attacker sends, supervisor sends."""
    n_f: int
    u: int
    v: int

    def __post_init__(self) -> None:
        for label, val in (("n_f", self.n_f), ("u", self.u), ("v", self.v)):
            if val < 0:
                raise ConfigError(f"rate bound {label} must be nonnegative")


@dataclass(frozen=True)
class EventSpec:
    name: str
    controllable: bool
    observable: bool
    attacker_observable: bool
    compromised: bool
    exec_delay: Optional[int] = None


@dataclass(frozen=True)
class SystemConfig:
    events: tuple  # tuple of EventSpec, declaration order
    commands: Dict[str, FrozenSet[str]]
    delta_o: int
    delta_c: int
    delta_s: int
    rates: RateBounds
    damage: FrozenSet[str] = field(default_factory=frozenset)

    def __post_init__(self) -> None:
        names = [e.name for e in self.events]
        if len(set(names)) != len(names):
            raise ConfigError("duplicate event name")
        for name in names + list(self.commands):
            if (not name or name in ("tick", "stop") or "#" in name
                    or name.endswith("_in") or name.endswith("_out")):
                raise ConfigError(f"name {name!r} collides with event spelling rules")
        for d, label in ((self.delta_o, "delta_o"), (self.delta_c, "delta_c"),
                         (self.delta_s, "delta_s")):
            if d < 0:
                raise ConfigError(f"{label} must be nonnegative")
        by_name = {e.name: e for e in self.events}
        for e in self.events:
            if e.compromised and not e.attacker_observable:
                raise ConfigError(f"{e.name}: compromised events must be attacker-observable")
            if e.attacker_observable and not e.observable:
                raise ConfigError(f"{e.name}: attacker-observable events must be observable")
            if e.controllable and e.exec_delay is None:
                raise ConfigError(f"{e.name}: controllable events need an execution delay te")
            if not e.controllable and e.exec_delay is not None:
                raise ConfigError(f"{e.name}: te only applies to controllable events")
            if e.exec_delay is not None and e.exec_delay < 0:
                raise ConfigError(f"{e.name}: te must be nonnegative")
        if not self.commands:
            raise ConfigError("at least one command is required")
        for cmd, members in self.commands.items():
            if not members:
                raise ConfigError(f"command {cmd} must be a nonempty set of events")
            for m in members:
                spec = by_name.get(m)
                if spec is None:
                    raise ConfigError(f"command {cmd} references unknown event {m}")
                if not spec.controllable:
                    raise ConfigError(f"command {cmd} contains uncontrollable event {m}")
        if set(self.commands) & set(names):
            clash = sorted(set(self.commands) & set(names))[0]
            raise ConfigError(f"name {clash} used for both an event and a command")

    # -- alphabet views --------------------------------------------------

    @property
    def sigma(self) -> List[str]:
        return [e.name for e in self.events]

    @property
    def sigma_c(self) -> List[str]:
        return [e.name for e in self.events if e.controllable]

    @property
    def sigma_uc(self) -> List[str]:
        return [e.name for e in self.events if not e.controllable]

    @property
    def sigma_o(self) -> List[str]:
        return [e.name for e in self.events if e.observable]

    @property
    def sigma_uo(self) -> List[str]:
        return [e.name for e in self.events if not e.observable]

    @property
    def sigma_oa(self) -> List[str]:
        return [e.name for e in self.events if e.attacker_observable]

    @property
    def sigma_sa(self) -> List[str]:
        return [e.name for e in self.events if e.compromised]

    @property
    def gamma(self) -> List[str]:
        return sorted(self.commands)

    def exec_delay(self, name: str) -> int:
        for e in self.events:
            if e.name == name:
                assert e.exec_delay is not None
                return e.exec_delay
        raise ConfigError(f"unknown event {name}")

    def max_exec_delay(self) -> int:
        return max((e.exec_delay for e in self.events if e.exec_delay is not None),
                   default=0)

    # -- composite alphabets ----------------------------------------------

    def plant_labels(self) -> List[EventLabel]:
        return [ev.plant(n) for n in self.sigma]

    def observation_channel_alphabet(self) -> List[EventLabel]:
        sa = set(self.sigma_sa)
        labels = [ev.entry(n) for n in self.sigma_o if n not in sa]
        labels += [ev.compromised(n) for n in self.sigma_sa]
        labels += [ev.exit_(n) for n in self.sigma_o]
        labels.append(ev.tick)
        return labels

    def control_channel_alphabet(self) -> List[EventLabel]:
        labels = [ev.command_entry(g) for g in self.gamma]
        labels += [ev.command_exit(g) for g in self.gamma]
        labels.append(ev.tick)
        return labels

    def full_alphabet(self) -> List[EventLabel]:
        """The common alphabet of AC, NS and the composed plant."""
        sa = set(self.sigma_sa)
        labels = [ev.plant(n) for n in self.sigma]
        labels += [ev.entry(n) for n in self.sigma_o if n not in sa]
        labels += [ev.compromised(n) for n in self.sigma_sa]
        labels += [ev.exit_(n) for n in self.sigma_o]
        labels += [ev.command_entry(g) for g in self.gamma]
        labels += [ev.command_exit(g) for g in self.gamma]
        labels += [ev.command(g) for g in self.gamma]
        labels += [ev.tick, ev.stop]
        return labels


def _parse_int(tok: str, what: str, lineno: int) -> int:
    try:
        return int(tok)
    except ValueError:
        raise ConfigError(f"{what} expects an integer, got {tok!r}", lineno)


def parse_config(text: str) -> SystemConfig:
    params: Dict[str, int] = {}
    specs: List[EventSpec] = []
    commands: Dict[str, FrozenSet[str]] = {}
    damage: List[str] = []
    section: Optional[str] = None

    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].rstrip()
        if not line.strip():
            continue
        toks = line.split()
        if toks[0].startswith("["):
            section = toks[0].strip("[]").lower()
            toks = toks[1:]
            if section not in ("parameters", "events", "commands", "damage"):
                raise ConfigError(f"unknown section [{section}]", lineno)
        if section is None:
            raise ConfigError("content before any section header", lineno)
        if not toks:
            continue
        if section == "parameters":
            for tok in toks:
                key, _, val = tok.partition("=")
                if not val:
                    raise ConfigError(f"malformed parameter {tok!r}", lineno)
                params[key] = _parse_int(val, key, lineno)
        elif section == "events":
            if len(toks) != 6:
                raise ConfigError("event line needs: name c|uc o|uo ao|- comp|- te=N|-",
                                  lineno)
            name, ctl, obs, ao, comp, te = toks
            if ctl not in ("c", "uc") or obs not in ("o", "uo"):
                raise ConfigError(f"bad flags for event {name}", lineno)
            if ao not in ("ao", "-") or comp not in ("comp", "-"):
                raise ConfigError(f"bad flags for event {name}", lineno)
            delay: Optional[int] = None
            if te != "-":
                if not te.startswith("te="):
                    raise ConfigError(f"bad te column {te!r}", lineno)
                delay = _parse_int(te[3:], "te", lineno)
            specs.append(EventSpec(name, ctl == "c", obs == "o",
                                   ao == "ao", comp == "comp", delay))
        elif section == "commands":
            if "=" not in toks:
                joined = " ".join(toks)
                if "=" not in joined:
                    raise ConfigError("command line needs: name = event ...", lineno)
                lhs, rhs = joined.split("=", 1)
                name, members = lhs.split()[0], rhs.split()
            else:
                i = toks.index("=")
                name, members = toks[0], toks[i + 1:]
                if i != 1:
                    raise ConfigError("command line needs: name = event ...", lineno)
            if name in commands:
                raise ConfigError(f"duplicate command {name}", lineno)
            commands[name] = frozenset(members)
        elif section == "damage":
            damage.extend(toks)

    missing = [k for k in ("delta_o", "delta_c", "delta_s", "n_f", "u", "v")
               if k not in params]
    if missing:
        raise ConfigError(f"missing parameters: {', '.join(missing)}")
    try:
        return SystemConfig(
            events=tuple(specs), commands=commands,
            delta_o=params["delta_o"], delta_c=params["delta_c"],
            delta_s=params["delta_s"],
            rates=RateBounds(params["n_f"], params["u"], params["v"]),
            damage=frozenset(damage))
    except ConfigError:
        raise


def load_config(path: str) -> SystemConfig:
    with open(path, "r", encoding="utf-8") as fh:
        return parse_config(fh.read())


def serialize_config(cfg: SystemConfig) -> str:
    lines = [f"[parameters] delta_o={cfg.delta_o} delta_c={cfg.delta_c} "
             f"delta_s={cfg.delta_s} n_f={cfg.rates.n_f} u={cfg.rates.u} v={cfg.rates.v}"]
    first = True
    for e in cfg.events:
        head = "[events]    " if first else "            "
        first = False
        te = f"te={e.exec_delay}" if e.exec_delay is not None else "-"
        lines.append(f"{head} {e.name} {'c' if e.controllable else 'uc'} "
                     f"{'o' if e.observable else 'uo'} "
                     f"{'ao' if e.attacker_observable else '-'} "
                     f"{'comp' if e.compromised else '-'} {te}")
    first = True
    for name in sorted(cfg.commands):
        head = "[commands]  " if first else "            "
        first = False
        lines.append(f"{head} {name} = " + " ".join(sorted(cfg.commands[name])))
    if cfg.damage:
        lines.append("[damage]     " + " ".join(sorted(cfg.damage)))
    return "\n".join(lines) + "\n"
