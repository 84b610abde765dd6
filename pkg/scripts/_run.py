"""Shared driver for the figure scripts: config -> CSV -> plot data."""
import argparse
import dataclasses
from pathlib import Path

from hcnsim.cli import _seeds
from hcnsim.harness import emit_plotdata, run_experiment, spec_from_config

ROOT = Path(__file__).resolve().parent.parent


def run(config_name, stem, description, params=None):
    ap = argparse.ArgumentParser(description=description)
    ap.add_argument("--seeds", type=_seeds, help="override the config's seeds, e.g. 1-10")
    ap.add_argument("--workers", type=int, default=1)
    ap.add_argument("--outdir", default=str(ROOT / "results"))
    args = ap.parse_args()
    out = Path(args.outdir)
    out.mkdir(parents=True, exist_ok=True)
    csv_path = out / f"{stem}.csv"
    spec = spec_from_config((ROOT / "configs" / config_name).read_text(),
                            seeds=args.seeds, workers=args.workers, output=str(csv_path))
    if params:
        spec = dataclasses.replace(spec, params=dataclasses.replace(spec.params, **params))
    rows = run_experiment(spec)
    print(f"{csv_path}: {len(rows)} rows")
    for path in emit_plotdata(str(csv_path), str(out / stem)):
        print(path)
    return rows
