"""``room`` command line: run presets, single traced episodes, or the server."""

from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path
from typing import Optional, Sequence

from . import harness
from .environment import EnvConfig, load_config
from .knowledge import load_kb
from .memory import dump_stores
from .policies import KINDS, MODES, PolicyConfig


def _env_from_args(args: argparse.Namespace, **extra) -> EnvConfig:
    overrides = {}
    for item in args.set or []:
        key, sep, value = item.partition("=")
        if not sep:
            raise SystemExit(f"--set expects key=value, got {item!r}")
        overrides[key.strip()] = value.strip()
    overrides.update(extra)
    if args.config:
        return load_config(args.config, **overrides)
    return EnvConfig.from_mapping(overrides)


def _add_env_options(p: argparse.ArgumentParser) -> None:
    p.add_argument("--config", type=Path, help="key=value or flat JSON environment config")
    p.add_argument("--set", action="append", metavar="KEY=VALUE", help="override one config field")
    p.add_argument("--kb", type=Path, help="knowledge base file (default: bundled subset)")


def cmd_run(args: argparse.Namespace) -> int:
    kb = load_kb(args.kb)
    env = _env_from_args(args)
    spec = harness.preset(args.preset, args.seeds, env)
    spec.output = args.out
    results = harness.run_experiment(spec, kb, workers=args.workers)
    if args.summary:
        args.summary.write_text(harness.summary_json(results), encoding="utf-8")
    for key, stats in harness.summarize(results).items():
        print("\t".join(map(str, key)), f"{stats['mean']:.1f}", f"{stats['std']:.1f}", sep="\t")
    return 0


def cmd_episode(args: argparse.Namespace) -> int:
    kb = load_kb(args.kb)
    env = _env_from_args(args, seed=args.seed, n_agents=args.agents)
    policy = PolicyConfig(args.policy, args.capacity, args.forget, args.answer)
    agents = harness.make_agents(policy, env, kb)
    if args.trace:
        with open(args.trace, "w", newline="", encoding="utf-8") as fh:
            result = harness.run_episode(env, policy, kb, trace=fh, agents=agents)
    else:
        result = harness.run_episode(env, policy, kb, agents=agents)
    if args.dump:
        args.dump.write_text(
            "".join(dump_stores(a.episodic, a.semantic) for a in agents), encoding="utf-8"
        )
    print(result.total_reward)
    return 0


def cmd_serve(args: argparse.Namespace) -> int:
    from .envd import serve

    server = serve(args.host, args.port, load_kb(args.kb), args.max_sessions, args.idle_timeout_secs)
    logging.info("listening on %s:%d", args.host, server.port)
    try:
        server.serve_forever()
    except KeyboardInterrupt:
        pass
    finally:
        server.server_close()
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="room", description=__doc__)
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="run an experiment preset and write CSV")
    run.add_argument("--preset", choices=("fig1", "fig2", "fig3"), required=True)
    run.add_argument("--seeds", type=int, default=10, help="number of experiment seeds")
    run.add_argument("--out", type=Path, required=True)
    run.add_argument("--summary", type=Path, help="also write per-cell summary JSON")
    run.add_argument("--workers", type=int, default=1)
    _add_env_options(run)
    run.set_defaults(func=cmd_run)

    ep = sub.add_parser("episode", help="run one episode, optionally writing a trace")
    ep.add_argument("--policy", choices=KINDS, required=True)
    ep.add_argument("--capacity", type=int, required=True, help="total capacity per agent")
    ep.add_argument("--seed", type=int, default=0)
    ep.add_argument("--forget", choices=MODES, default="handcrafted")
    ep.add_argument("--answer", choices=MODES, default="handcrafted")
    ep.add_argument("--agents", type=int, default=1)
    ep.add_argument("--trace", type=Path)
    ep.add_argument("--dump", type=Path, help="write final memory stores")
    _add_env_options(ep)
    ep.set_defaults(func=cmd_episode)

    srv = sub.add_parser("serve", help="serve the environment over line-delimited JSON")
    srv.add_argument("--host", default="127.0.0.1")
    srv.add_argument("--port", type=int, default=7878)
    srv.add_argument("--max-sessions", type=int, default=64)
    srv.add_argument("--idle-timeout-secs", type=float, default=600.0)
    srv.add_argument("--kb", type=Path)
    srv.set_defaults(func=cmd_serve)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
