"""Command line: ``theta-forge verify | eval | list-identities``."""

from __future__ import annotations

import argparse
import json
import sys

from ..errors import ConfigError, DslError, PoleError, SamplerExhaustedError, ThetaForgeError
from ..thetanum import ThetaContext
from . import registry
from .campaign import EXIT_CONFIG, EXIT_FAIL, EXIT_PASS, EXIT_SAMPLER, run_campaign, to_json
from .dsl import eval_dsl, parse


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_CONFIG)


def _complex(text: str) -> complex:
    t = text.strip().replace(" ", "")
    if t.endswith("i"):
        t = t[:-1] + "j"
    return complex(t)


def _binding(text: str):
    """``k=v`` with v a number, or a comma-separated vector of numbers."""
    if "=" not in text:
        raise ConfigError(f"binding {text!r} is not of the form name=value")
    name, value = text.split("=", 1)
    try:
        if "," in value:
            return name.strip(), [_complex(v) for v in value.split(",")]
        return name.strip(), _complex(value)
    except ValueError:
        raise ConfigError(f"cannot read {value!r} as a number") from None


def _param(text: str):
    """``k=v`` with v parsed as JSON when possible (so m=[2,1] and n=3 work)."""
    if "=" not in text:
        raise ConfigError(f"parameter {text!r} is not of the form name=value")
    name, value = text.split("=", 1)
    try:
        return name.strip(), json.loads(value)
    except json.JSONDecodeError:
        return name.strip(), value


def build_parser() -> argparse.ArgumentParser:
    ap = _Parser(prog="theta-forge", description=__doc__)
    sub = ap.add_subparsers(dest="command", required=True, parser_class=_Parser)

    v = sub.add_parser("verify", help="run a campaign file or a single identity")
    src = v.add_mutually_exclusive_group(required=True)
    src.add_argument("--config", help="campaign JSON file")
    src.add_argument("--id", help="identity id (see list-identities)")
    v.add_argument("--trials", type=int, default=50)
    v.add_argument("--seed", type=int, default=0)
    v.add_argument("--tol", type=float, default=1e-9)
    v.add_argument("--mode", default="both", choices=("numeric", "exact", "both"))
    v.add_argument("--param", action="append", default=[], metavar="K=V",
                   help="identity parameter, value parsed as JSON (e.g. n=3, m=[2,1])")

    e = sub.add_parser("eval", help="evaluate a DSL expression")
    e.add_argument("--expr", required=True)
    e.add_argument("--bind", action="append", default=[], metavar="K=V",
                   help="binding; p sets the nome, comma-separated values bind a vector")

    sub.add_parser("list-identities", help="print every registered identity")
    return ap


def _verify(args) -> int:
    if args.config:
        try:
            with open(args.config) as fh:
                config = json.load(fh)
        except (OSError, json.JSONDecodeError) as exc:
            raise ConfigError(f"cannot read campaign {args.config}: {exc}") from None
    else:
        config = {"id": args.id, "trials": args.trials, "seed": args.seed, "tol": args.tol,
                  "mode": args.mode, **dict(_param(p) for p in args.param)}
    _, code = run_campaign(config, emit=lambda line: print(line, flush=True))
    return code


def _eval(args) -> int:
    env = dict(_binding(b) for b in args.bind)
    ctx = ThetaContext(env.pop("p", 0j))
    value = eval_dsl(parse(args.expr), env, ctx)
    print(to_json({"expr": args.expr, "value": [value.real, value.imag]}))
    return EXIT_PASS


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "verify":
            return _verify(args)
        if args.command == "eval":
            return _eval(args)
        for item in registry.describe():
            print(to_json(item))
        return EXIT_PASS
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except DslError as exc:
        print(f"expression error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (SamplerExhaustedError, PoleError) as exc:
        print(f"sampler error: {exc}", file=sys.stderr)
        return EXIT_SAMPLER
    except ThetaForgeError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
