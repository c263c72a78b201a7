"""Command-line front end.

Commands: ``capacity``, ``build``, ``synthesize``, ``verify``, ``export-dot``.
Exit statuses: 0 success, 1 usage or parse error, 2 validation failure,
3 no covert attack exists.
"""
from __future__ import annotations

import argparse
import os
import sys
from dataclasses import dataclass
from typing import Optional

from .attacker import validate_attack
from .automaton import AutomatonError
from .channels import (capacity_control, capacity_observation,
                       enumerate_channel_states)
from .config import ConfigError, SystemConfig, load_config
from .fixtures import BuiltSystem, build_system
from .plant import capacity_storage, load_plant, rate_bound_warnings
from .supervision import validate_networked_supervisor
from .synthesis import (SynthesisMode, build_problem, render_size_report,
                        state_size_report, synthesize_supremal_attack,
                        verify_covert, verify_damage_nonblocking,
                        verify_damage_reachable)
from .textio import ParseError, load_automaton, save_automaton, to_dot

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_VALIDATION = 2
EXIT_NO_ATTACK = 3


@dataclass
class Workspace:
    cfg: SystemConfig
    plant_file: str
    ns_file: str
    out_dir: str
    mode: SynthesisMode = SynthesisMode.DAMAGE_NONBLOCKING
    count_forwarded_event: bool = True


def _capacities(cfg: SystemConfig):
    c_oc = capacity_observation(cfg.rates.n_f, cfg.rates.u, cfg.delta_o)
    c_cc = capacity_control(cfg.rates.n_f, cfg.rates.u, cfg.rates.v,
                            cfg.delta_o, cfg.delta_c)
    c_cs = capacity_storage(cfg.rates.n_f, cfg.rates.u, cfg.rates.v,
                            cfg.delta_o, cfg.delta_c, cfg.delta_s)
    return c_oc, c_cc, c_cs


def cmd_capacity(args) -> int:
    cfg = load_config(args.config)
    c_oc, c_cc, c_cs = _capacities(cfg)
    print(f"C_oc={c_oc} C_cc={c_cc} C_cs={c_cs}")
    n_oc = enumerate_channel_states(max(len(cfg.sigma_o), 1), cfg.delta_o, c_oc)
    n_cc = enumerate_channel_states(max(len(cfg.gamma), 1), cfg.delta_c, c_cc)
    n_cs = enumerate_channel_states(max(len(cfg.gamma), 1), cfg.delta_s, c_cs)
    print(f"states_oc={n_oc} states_cc={n_cc} states_cs<={n_cs}")
    return EXIT_OK


def _assemble(ws: Workspace) -> BuiltSystem:
    plant = load_plant(ws.plant_file, ws.cfg)
    ns = load_automaton(ws.ns_file, name="NS")
    report = validate_networked_supervisor(ns, ws.cfg)
    if not report.ok:
        raise AutomatonError(report.render())
    return build_system(ws.cfg, plant, ns, ws.count_forwarded_event)


def _write_components(system: BuiltSystem, out_dir: str) -> None:
    os.makedirs(out_dir, exist_ok=True)
    save_automaton(system.ac, os.path.join(out_dir, "ac.aut"))
    save_automaton(system.oc, os.path.join(out_dir, "oc.aut"))
    save_automaton(system.oc_t, os.path.join(out_dir, "oc_t.aut"))
    save_automaton(system.cc, os.path.join(out_dir, "cc.aut"))
    save_automaton(system.cs, os.path.join(out_dir, "cs.aut"))
    save_automaton(system.ce, os.path.join(out_dir, "ce.aut"))
    save_automaton(system.g_new, os.path.join(out_dir, "g_new.aut"), rename=True)
    save_automaton(system.monitor, os.path.join(out_dir, "monitor.aut"), rename=True)
    rows = state_size_report(system.cfg, ac=system.ac, oc=system.oc,
                             cc=system.cc, cs=system.cs, ce=system.ce,
                             g=system.plant, ns=system.ns, m=system.monitor)
    lines = [render_size_report(rows)]
    for w in rate_bound_warnings(system.g_new, system.cfg):
        lines.append(f"warning: {w}\n")
    with open(os.path.join(out_dir, "state_counts.txt"), "w",
              encoding="utf-8") as fh:
        fh.write("".join(lines))


def cmd_build(args) -> int:
    ws = _workspace(args)
    system = _assemble(ws)
    _write_components(system, ws.out_dir)
    print(f"wrote 8 automata and state_counts.txt to {ws.out_dir}")
    return EXIT_OK


def cmd_synthesize(args) -> int:
    ws = _workspace(args)
    system = _assemble(ws)
    _write_components(system, ws.out_dir)
    problem = build_problem(system.g_new, system.ac, system.oc, system.ns,
                            system.cc, system.monitor, system.cfg)
    attack = synthesize_supremal_attack(problem, ws.mode)
    cert_path = os.path.join(ws.out_dir, "certificate.txt")
    if attack is None:
        with open(cert_path, "w", encoding="utf-8") as fh:
            fh.write(f"mode: {ws.mode.value}\nresult: no covert attack exists\n")
        print("no covert attack exists")
        return EXIT_NO_ATTACK
    save_automaton(attack, os.path.join(ws.out_dir, "attack.aut"), rename=True)
    lines = [f"mode: {ws.mode.value}",
             f"attack-states: {len(attack.states)}"]
    lines.append(f"validates: {validate_attack(attack, problem.constraint, problem.plant.alphabet).ok}")
    cov = verify_covert(problem, attack)
    lines.append(f"covert: {cov.ok}")
    if not cov.ok:
        lines.append(f"covertness-witness: {cov.render_witness()}")
    if ws.mode is SynthesisMode.DAMAGE_NONBLOCKING:
        check = verify_damage_nonblocking(problem, attack)
        lines.append(f"damage-nonblocking: {check.ok}")
        if not check.ok:
            lines.append(f"blocking-witness: {check.render_witness()}")
    reach = verify_damage_reachable(problem, attack)
    lines.append(f"damage-reachable: {reach.ok}")
    if reach.ok:
        lines.append(f"damage-witness: {reach.render_witness()}")
    with open(cert_path, "w", encoding="utf-8") as fh:
        fh.write("\n".join(lines) + "\n")
    print("\n".join(lines))
    return EXIT_OK


def cmd_verify(args) -> int:
    ws = _workspace(args)
    system = _assemble(ws)
    problem = build_problem(system.g_new, system.ac, system.oc, system.ns,
                            system.cc, system.monitor, system.cfg)
    attack = load_automaton(args.attack, name="A")
    report = validate_attack(attack, problem.constraint, problem.plant.alphabet)
    print(report.render())
    if not report.ok:
        return EXIT_VALIDATION
    cov = verify_covert(problem, attack)
    print(f"covert: {cov.ok}" + ("" if cov.ok else
                                 f"\ncovertness-witness: {cov.render_witness()}"))
    dnb = verify_damage_nonblocking(problem, attack)
    print(f"damage-nonblocking: {dnb.ok}" + ("" if dnb.ok else
                                             f"\nblocking-witness: {dnb.render_witness()}"))
    dr = verify_damage_reachable(problem, attack)
    print(f"damage-reachable: {dr.ok}" + (f"\ndamage-witness: {dr.render_witness()}"
                                          if dr.ok else ""))
    return EXIT_OK


def cmd_export_dot(args) -> int:
    a = load_automaton(args.file)
    dot = to_dot(a)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(dot)
    else:
        sys.stdout.write(dot)
    return EXIT_OK


def _workspace(args) -> Workspace:
    mode = SynthesisMode.DAMAGE_NONBLOCKING
    if getattr(args, "mode", None) == "reachable":
        mode = SynthesisMode.DAMAGE_REACHABLE
    return Workspace(
        cfg=load_config(args.config),
        plant_file=args.plant,
        ns_file=args.ns,
        out_dir=getattr(args, "out", ".") or ".",
        mode=mode,
        count_forwarded_event=(getattr(args, "count_forwarded_event", "on") != "off"))


def _parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="netdes",
        description="Covert sensor-attack synthesis for networked DES "
                    "with non-FIFO channels")
    sub = p.add_subparsers(dest="command", required=True)

    cap = sub.add_parser("capacity", help="print channel/storage capacities")
    cap.add_argument("--config", required=True)
    cap.set_defaults(fn=cmd_capacity)

    def io_args(sp, needs_out=True):
        sp.add_argument("--config", required=True)
        sp.add_argument("--plant", required=True)
        sp.add_argument("--ns", required=True)
        if needs_out:
            sp.add_argument("--out", required=True)
        sp.add_argument("--count-forwarded-event", choices=("on", "off"),
                        default="on", dest="count_forwarded_event")

    b = sub.add_parser("build", help="build and export all loop components")
    io_args(b)
    b.set_defaults(fn=cmd_build)

    s = sub.add_parser("synthesize", help="synthesize the supremal covert attack")
    io_args(s)
    s.add_argument("--mode", choices=("nonblocking", "reachable"),
                   default="nonblocking")
    s.set_defaults(fn=cmd_synthesize)

    v = sub.add_parser("verify", help="verify a candidate attack automaton")
    io_args(v, needs_out=False)
    v.add_argument("--attack", required=True)
    v.set_defaults(fn=cmd_verify)

    d = sub.add_parser("export-dot", help="render an automaton file as DOT")
    d.add_argument("file")
    d.add_argument("--out")
    d.set_defaults(fn=cmd_export_dot)
    return p


def main(argv: Optional[list] = None) -> int:
    parser = _parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code not in (0, None) else 0
    try:
        return args.fn(args)
    except (ParseError, ConfigError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (AutomatonError, ValueError) as exc:
        print(f"validation error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
