"""Command-line entry point: ``hcnsim run | oracle | plotdata``."""
from __future__ import annotations

import argparse
import sys

import numpy as np

from .errors import HcnError
from .harness import (
    ExperimentSpec,
    brute_force_oracle,
    emit_plotdata,
    run_experiment,
    scenario_params_from_config,
    spec_from_config,
)
from .model import generate_scenario


def _seeds(raw: str) -> tuple:
    """``"1,2,5"`` or a range ``"1-20"``."""
    out = []
    for part in raw.split(","):
        part = part.strip()
        if "-" in part[1:]:
            a, b = part.split("-", 1)
            out.extend(range(int(a), int(b) + 1))
        elif part:
            out.append(int(part))
    return tuple(out)


def _read(path: str) -> str:
    with open(path) as fh:
        return fh.read()


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="hcnsim", description="EE resource allocation experiments for two-tier HCNs")
    sub = ap.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="run an experiment and write its CSV")
    run.add_argument("--experiment", help="experiment kind (overrides the config)")
    run.add_argument("--config", required=True, help="flat 'key = value' config file")
    run.add_argument("--out", required=True, help="CSV output path")
    run.add_argument("--seeds", type=_seeds, help="e.g. 1-20 or 1,4,9")
    run.add_argument("--mode", choices=("underlay", "overlay", "both"))
    run.add_argument("--workers", type=int)

    orc = sub.add_parser("oracle", help="brute-force a tiny instance")
    orc.add_argument("--config", required=True)
    orc.add_argument("--grid-steps", type=int, default=32)
    orc.add_argument("--seed", type=int, default=1)

    pd = sub.add_parser("plotdata", help="turn an experiment CSV into gnuplot data files")
    pd.add_argument("--in", dest="inp", required=True)
    pd.add_argument("--outdir", required=True)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "run":
            spec: ExperimentSpec = spec_from_config(_read(args.config), kind=args.experiment, seeds=args.seeds,
                                                    mode=args.mode, workers=args.workers, output=args.out)
            rows = run_experiment(spec)
            print(f"wrote {len(rows)} rows to {args.out}")
        elif args.command == "oracle":
            scenario = generate_scenario(args.seed, scenario_params_from_config(_read(args.config)))
            res = brute_force_oracle(scenario, args.grid_steps)
            print(f"feasible {res.feasible}")
            print(f"ee_bits_per_joule {res.ee!r}")
            print(f"search_size {res.search_size}")
            if res.feasible:
                with np.printoptions(precision=6):
                    print(f"assignment {res.assignment.tolist()}")
                    print(f"power_w {res.power.tolist()}")
        else:
            for path in emit_plotdata(args.inp, args.outdir):
                print(path)
    except (HcnError, OSError) as exc:
        print(f"hcnsim: error: {exc}", file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
