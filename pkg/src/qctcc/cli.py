"""Command-line front end: run, scan, stats, fixtures verify.

Options may come from a JSON config file (--config); explicit flags win over
file values, which win over defaults.  Exit code 0 on full success, 2 when
any requested item failed.
"""
from __future__ import annotations

import json
import sys

import click

from .cc import CcConfig
from .hamio import verify_fixture
from .pipeline import (METHODS, RunConfig, StageError, run_scan, run_single,
                       run_statistics)
from .tomography import ShotBudget


def _parse_shots(text: str) -> tuple[int, int, int]:
    parts = [int(float(p)) for p in text.split(",")]
    if len(parts) == 1:
        return (parts[0],) * 3
    if len(parts) != 3:
        raise click.BadParameter("expected NSAMPLE,NU,NV")
    return tuple(parts)


def _load_config(path):
    if path is None:
        return {}
    with open(path) as fh:
        doc = json.load(fh)
    if not isinstance(doc, dict):
        raise click.BadParameter("config file must hold a JSON object")
    return doc


def _merged(cfg_file, flags):
    """File values fill in flags the user left at None."""
    merged = dict(cfg_file)
    merged.update({k: v for k, v in flags.items() if v is not None})
    return merged


def _build_run_config(fcidump, opts) -> RunConfig:
    shots = _parse_shots(str(opts.get("shots", "1000000")))
    budget = ShotBudget(*shots, int(opts.get("r", 100)))
    active = opts.get("active")
    if isinstance(active, str):
        n_orb, n_elec = (int(x) for x in active.split(","))
        active = (n_orb, n_elec)
    elif isinstance(active, list):
        active = tuple(int(x) for x in active)
    methods = opts.get("methods", "tcc_c")
    if isinstance(methods, str):
        methods = tuple(m.strip() for m in methods.split(","))
    else:
        methods = tuple(methods)
    return RunConfig(
        fcidump=fcidump,
        active=active,
        solver=opts.get("solver", "casci"),
        cbt_mode=opts.get("cbt_mode", "exact"),
        budget=budget,
        methods=methods,
        seed=int(opts.get("seed", 0)),
        repetitions=int(opts.get("reps", 1)),
        cc=CcConfig(),
    )


common_options = [
    click.option("--config", type=click.Path(exists=True), default=None,
                 help="JSON file with defaults for the flags below."),
    click.option("--fcidump", multiple=True, type=click.Path(exists=True)),
    click.option("--active", default=None, help="N_ORB,N_ELEC (default: full space)"),
    click.option("--solver", type=click.Choice(["casci", "vqe"]), default=None),
    click.option("--cbt-mode", type=click.Choice(["exact", "sampled"]), default=None),
    click.option("--shots", default=None, help="NSAMPLE,NU,NV or a single count"),
    click.option("--r", type=int, default=None, help="tomography truncation rank"),
    click.option("--methods", default=None,
                 help=f"comma list from {{{','.join(METHODS)}}}"),
    click.option("--seed", type=int, default=None),
    click.option("--reps", type=int, default=None),
    click.option("--out", type=click.Path(), default=None),
]


def _with_common(f):
    for opt in reversed(common_options):
        f = opt(f)
    return f


@click.group()
def main():
    """Tailored coupled cluster with simulated quantum readout."""


@main.command()
@_with_common
def run(config, fcidump, out, **flags):
    """Single end-to-end pipeline run; prints an energy report as JSON."""
    opts = _merged(_load_config(config), flags)
    paths = list(fcidump) or ([opts["fcidump"]] if "fcidump" in opts else [])
    if len(paths) != 1:
        raise click.UsageError("run needs exactly one --fcidump")
    try:
        res = run_single(_build_run_config(paths[0], opts))
    except StageError as ex:
        click.echo(json.dumps(ex.to_record()), err=True)
        sys.exit(2)
    text = res.to_json()
    if out:
        with open(out, "w") as fh:
            fh.write(text)
    click.echo(text)


@main.command()
@_with_common
def scan(config, fcidump, out, **flags):
    """Run the pipeline over a fixture series; emits one CSV row per file."""
    opts = _merged(_load_config(config), flags)
    paths = list(fcidump) or list(opts.get("fcidump", []))
    if not paths:
        raise click.UsageError("scan needs at least one --fcidump")
    cfgs = [_build_run_config(p, opts) for p in paths]
    rows = run_scan(cfgs, out_path=out)
    for row in rows:
        click.echo(json.dumps(row, sort_keys=True))
    sys.exit(2 if any(r["error"] for r in rows) else 0)


@main.command()
@_with_common
@click.option("--budgets", default=None,
              help="semicolon list of shot budgets, e.g. '1e4;1e5;1e6'")
def stats(config, fcidump, out, budgets, **flags):
    """Repeat sampled runs per shot budget and print box-plot summaries."""
    opts = _merged(_load_config(config), flags)
    paths = list(fcidump) or ([opts["fcidump"]] if "fcidump" in opts else [])
    if len(paths) != 1:
        raise click.UsageError("stats needs exactly one --fcidump")
    opts.setdefault("cbt_mode", "sampled")
    cfg = _build_run_config(paths[0], opts)
    budget_text = budgets or opts.get("budgets", "1e4;1e5;1e6")
    r = cfg.budget.r
    blist = [ShotBudget(*_parse_shots(b), r) for b in budget_text.split(";")]
    reps = int(opts.get("reps", 1000))
    summaries = run_statistics(cfg, blist, repetitions=reps, out_prefix=out)
    for s in summaries:
        click.echo(s.to_json())


@main.group()
def fixtures():
    """Fixture utilities."""


@fixtures.command()
@click.argument("paths", nargs=-1, type=click.Path(exists=True))
@click.option("--tol", type=float, default=1e-8,
              help="allowed |recomputed HF - sidecar HF| (hartree)")
def verify(paths, tol):
    """Recompute reference energies for FCIDUMP files against sidecars."""
    if not paths:
        raise click.UsageError("give at least one FCIDUMP path")
    failed = 0
    for p in paths:
        try:
            rec = verify_fixture(p, tol=tol)
        except Exception as ex:
            click.echo(f"FAIL {p}: {type(ex).__name__}: {ex}")
            failed += 1
            continue
        status = "ok" if rec["ok"] else "FAIL"
        failed += 0 if rec["ok"] else 1
        click.echo(f"{status:4s} {p}  |dE_hf| = {rec['abs_error']:.3e}")
    sys.exit(2 if failed else 0)


if __name__ == "__main__":
    main()
