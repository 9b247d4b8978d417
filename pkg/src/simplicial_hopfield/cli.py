"""Command-line interface.

Subcommands mirror the harness experiments plus small utilities:

* ``gen-complex``   sample a diluted complex and write it as JSON
* ``homology``      Betti numbers and Euler characteristic of a complex file
* ``capacity``      closed-form capacity report as JSON
* ``run-binary``    binary overlap experiment (optionally with homology)
* ``run-continuous``continuous recall experiment
* ``energy-grid``   energy landscape over the principal pattern plane

Experiment subcommands accept ``--config config.json`` plus flag
overrides. Exit codes: 0 success, 2 configuration error, 1 runtime
error.
"""

from __future__ import annotations

import argparse
import json
import sys

from .complexes import (
    CONDITION_NAMES,
    condition_spec,
    downward_closure,
    functional_euler_characteristic,
    load_complex,
    sample_diluted,
    save_complex,
)
from .harness import ConfigError, RunConfig, emit_outputs, run
from .homology import betti_numbers
from .theory import capacity_report


def _add_override_flags(sub: argparse.ArgumentParser) -> None:
    sub.add_argument("--config", help="JSON config file (flags override its fields)")
    sub.add_argument("--seed", type=int)
    sub.add_argument("--n", type=int)
    sub.add_argument("--condition", action="append", dest="conditions", metavar="NAME",
                     help="condition key; repeat for several")
    sub.add_argument("--loading", action="append", dest="loadings", type=float,
                     metavar="P", help="pattern count (>=1) or fraction of N (<1)")
    sub.add_argument("--trials", type=int)
    sub.add_argument("--measure", action="append", dest="measures", metavar="NAME",
                     help="similarity measure; repeat for several")
    sub.add_argument("--inv-t", type=float, dest="inv_t")
    sub.add_argument("--max-steps", type=int, dest="max_steps")
    sub.add_argument("--dynamics", choices=["traditional", "modern"])
    sub.add_argument("--dataset")
    sub.add_argument("--out", dest="out_dir", help="output directory")


def _build_config(args, experiment: str) -> RunConfig:
    base = RunConfig.from_json_file(args.config).to_dict() if args.config else {}
    base["experiment"] = experiment
    for key in ("seed", "n", "conditions", "loadings", "trials", "measures",
                "inv_t", "max_steps", "dynamics", "dataset", "out_dir"):
        value = getattr(args, key, None)
        if value is not None:
            base[key] = value
    cfg = RunConfig.from_dict(base)
    cfg.validate()
    return cfg


def _cmd_gen_complex(args) -> int:
    if args.condition not in CONDITION_NAMES:
        raise ConfigError(
            f"unknown condition {args.condition!r}; known: {', '.join(CONDITION_NAMES)}"
        )
    cx = sample_diluted(args.n, condition_spec(args.condition), args.seed)
    save_complex(cx, args.out)
    print(f"wrote {args.out}: N={args.n} condition={args.condition} "
          f"counts={cx.counts()}")
    return 0


def _cmd_homology(args) -> int:
    cx = load_complex(args.complex)
    chi = functional_euler_characteristic(cx)
    closed = downward_closure(cx)
    betti = betti_numbers(closed, max_dim=2, method=args.method)
    out = {"beta0": betti[0], "beta1": betti[1], "beta2": betti[2], "chi": chi}
    print(json.dumps(out))
    return 0


def _cmd_capacity(args) -> int:
    print(json.dumps(capacity_report(args.n, args.max_degree, args.patterns), indent=2))
    return 0


def _run_experiment(args, experiment: str) -> int:
    cfg = _build_config(args, experiment)
    result = run(cfg)
    paths = emit_outputs(result, cfg.out_dir)
    print(f"{experiment}: {len(result.rows)} rows -> {paths['rows']}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="simplicial-hopfield",
        description="Simplicial Hopfield network experiments and diagnostics",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    gen = sub.add_parser("gen-complex", help="sample a diluted complex to JSON")
    gen.add_argument("--n", type=int, required=True)
    gen.add_argument("--condition", required=True)
    gen.add_argument("--seed", type=int, default=0)
    gen.add_argument("--out", required=True)
    gen.set_defaults(func=_cmd_gen_complex)

    hom = sub.add_parser("homology", help="Betti numbers of a complex file")
    hom.add_argument("complex", help="complex JSON file")
    hom.add_argument("--method", choices=["exact", "gf2"], default="exact")
    hom.set_defaults(func=_cmd_homology)

    cap = sub.add_parser("capacity", help="closed-form capacity report")
    cap.add_argument("--n", type=int, required=True)
    cap.add_argument("--max-degree", type=int, default=2)
    cap.add_argument("--patterns", type=int, default=None)
    cap.set_defaults(func=_cmd_capacity)

    for name, experiment in (
        ("run-binary", "binary_overlap"),
        ("run-continuous", "continuous_recall"),
        ("run-homology", "homology_correlation"),
        ("energy-grid", "energy_grid"),
    ):
        sp = sub.add_parser(name, help=f"run the {experiment} experiment")
        _add_override_flags(sp)
        sp.set_defaults(func=lambda a, e=experiment: _run_experiment(a, e))

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
