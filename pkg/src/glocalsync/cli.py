"""glocalsync command line: validate | scope | audit | plan | analyze | simulate.

Exit codes are uniform across subcommands: 0 success, 1 audit found
inconsistencies, 2 input or validation error. File outputs are
byte-stable for identical inputs (key-sorted JSON, fixed formatting).
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path
from typing import Optional

from . import analysis, simulate
from .errors import GlocalsyncError
from .network import SiteNetwork, load_network_file
from .patterns import (
    Catalog,
    ContentCategory,
    load_catalog_file,
    scope_of_item,
)
from .sync import InconsistencyReport, SyncState, replay_log


def _write_json(path: Path, payload: dict) -> None:
    path.write_text(json.dumps(payload, indent=2, sort_keys=True) + "\n", encoding="utf-8")


def _out_dir(args) -> Optional[Path]:
    out = args.out or os.environ.get("GLOCALSYNC_OUT")
    if out is None:
        return None
    path = Path(out)
    path.mkdir(parents=True, exist_ok=True)
    return path


def _load_network(args) -> SiteNetwork:
    if not args.network:
        raise GlocalsyncError("--network is required")
    return load_network_file(args.network)


def _load_catalog(args, net: SiteNetwork) -> Catalog:
    if not args.catalog:
        raise GlocalsyncError("--catalog is required")
    catalog = load_catalog_file(args.catalog)
    catalog.validate(net)
    return catalog


def _replay(args, net: SiteNetwork, catalog: Catalog) -> SyncState:
    if not args.log:
        raise GlocalsyncError("--log is required")
    with open(args.log, encoding="utf-8") as handle:
        return replay_log(net, catalog, handle)


def _render_report(report: InconsistencyReport) -> str:
    if not report.findings:
        return "no findings\n"
    lines = [f"{len(report.findings)} finding(s)"]
    for f in report.findings:
        lines.append(
            f"{f.item_id}/{f.component_id} {f.replica.as_key()} "
            f"{f.kind.value} {f.language_relation.value}: {f.details}"
        )
    return "\n".join(lines) + "\n"


def cmd_validate(args) -> int:
    net = _load_network(args)
    print(f"network ok: {len(net.countries)} sites, {len(net.all_replicas())} replicas")
    if args.catalog:
        catalog = load_catalog_file(args.catalog)
        catalog.validate(net)
        print(f"catalog ok: {len(catalog.items)} items")
    return 0


def cmd_scope(args) -> int:
    net = _load_network(args)
    catalog = _load_catalog(args, net)
    item = catalog.item(args.item_id)
    per_component, union = scope_of_item(net, item)
    for component_id in sorted(per_component):
        scope = per_component[component_id]
        pattern = item.component(component_id).pattern.value
        print(f"# component {component_id} ({pattern})")
        for replica in scope.sorted():
            print(f"{replica.country}\t{replica.language}")
    print("# union")
    for replica in union.sorted():
        print(f"{replica.country}\t{replica.language}")
    return 0


def cmd_audit(args) -> int:
    net = _load_network(args)
    catalog = _load_catalog(args, net)
    state = _replay(args, net, catalog)
    report = state.audit(net, catalog)
    text = _render_report(report)
    sys.stdout.write(text)
    out = _out_dir(args)
    if out is not None:
        _write_json(out / "report.json", report.to_json())
        (out / "report.txt").write_text(text, encoding="utf-8")
        _write_json(out / "state.json", state.snapshot())
    return 1 if report.findings else 0


def cmd_plan(args) -> int:
    net = _load_network(args)
    catalog = _load_catalog(args, net)
    state = _replay(args, net, catalog)
    for task in state.plan():
        deadline = "-" if task.deadline is None else str(task.deadline)
        print(
            f"{task.task_id}\t{task.level.value}\t{task.target.as_key()}\t"
            f"{task.item_id}/{task.component_id}\tr{task.revision.counter}\t{deadline}"
        )
    return 0


def cmd_analyze(args) -> int:
    if not args.dataset:
        raise GlocalsyncError("--dataset is required")
    with open(args.dataset, encoding="utf-8") as handle:
        records = analysis.load_dataset(handle.read())
    thresholds = analysis.Thresholds(
        theta_global=args.theta_global,
        theta_local=args.theta_local,
        theta_comparable=args.theta_comparable,
        theta_neutral=args.theta_neutral,
    )
    result = analysis.analyze_dataset(records, thresholds)
    text = analysis.render_text(result)
    sys.stdout.write(text)
    out = _out_dir(args)
    if out is not None:
        _write_json(out / "analysis.json", result.to_json())
        (out / "analysis.txt").write_text(text, encoding="utf-8")
    return 0


def _load_scenario(path: str):
    base = Path(path).parent
    with open(path, encoding="utf-8") as handle:
        doc = json.load(handle)
    net = load_network_file(base / doc["network"])
    catalog = load_catalog_file(base / doc["catalog"])
    catalog.validate(net)
    raw_workload = doc["workload"]
    workload = simulate.Workload(
        seed=int(raw_workload["seed"]),
        horizon=int(raw_workload["horizon"]),
        rates={
            ContentCategory(category): float(rate)
            for category, rate in raw_workload.get("rates", {}).items()
        },
    )
    raw_faults = doc.get("faults", {})
    faults = simulate.FaultModel(
        bounded_delay=tuple(raw_faults.get("bounded_delay", (0, 0))),
        lazy_delay=tuple(raw_faults.get("lazy_delay", (0, 0))),
        drop_probability=float(raw_faults.get("drop_probability", 0.0)),
        retry_interval=int(raw_faults.get("retry_interval", 5)),
        retries=bool(raw_faults.get("retries", True)),
    )
    return net, catalog, workload, faults


def _render_metrics(metrics: simulate.SimulationMetrics) -> str:
    lines = [f"updates applied: {metrics.updates_applied}"]
    lines.append(f"converged at horizon: {'yes' if metrics.converged else 'no'}")
    if metrics.windows:
        lines.append(f"{'category/kind':<46}{'window':>8}{'peak':>6}")
        for key in sorted(metrics.windows):
            label = "/".join(key)
            lines.append(
                f"{label:<46}{metrics.windows[key]:>8}{metrics.peaks.get(key, 0):>6}"
            )
    else:
        lines.append("no findings observed")
    return "\n".join(lines) + "\n"


def cmd_simulate(args) -> int:
    if not args.scenario:
        raise GlocalsyncError("--scenario is required")
    net, catalog, workload, faults = _load_scenario(args.scenario)
    if args.seed is not None:
        workload.seed = args.seed
    metrics, _, log_text = simulate.run(net, catalog, workload, faults)
    text = _render_metrics(metrics)
    sys.stdout.write(text)
    out = _out_dir(args)
    if out is not None:
        _write_json(out / "metrics.json", metrics.to_json())
        (out / "metrics.txt").write_text(text, encoding="utf-8")
        (out / "events.ndjson").write_text(log_text, encoding="utf-8")
    if args.baseline:
        base_metrics, _, _ = simulate.baseline_no_policy(net, catalog, workload)
        base_text = _render_metrics(base_metrics)
        sys.stdout.write("baseline (no propagation):\n" + base_text)
        if out is not None:
            _write_json(out / "metrics_baseline.json", base_metrics.to_json())
            (out / "metrics_baseline.txt").write_text(base_text, encoding="utf-8")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="glocalsync",
        description="Scoped content propagation and consistency engine",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p):
        p.add_argument("--network", help="network config JSON")
        p.add_argument("--catalog", help="item catalog JSON")
        p.add_argument("--log", help="event log (NDJSON)")
        p.add_argument("--dataset", help="comparison dataset TSV")
        p.add_argument("--out", help="output directory (or $GLOCALSYNC_OUT)")
        p.add_argument("--theta-global", type=int, default=50)
        p.add_argument("--theta-local", type=int, default=60)
        p.add_argument("--theta-comparable", type=int, default=15)
        p.add_argument("--theta-neutral", type=int, default=40)
        p.add_argument("--seed", type=int, default=None)
        p.add_argument("--baseline", action="store_true")

    p_validate = sub.add_parser("validate", help="check network and catalog invariants")
    add_common(p_validate)
    p_validate.set_defaults(func=cmd_validate)

    p_scope = sub.add_parser("scope", help="print an item's replica scopes")
    add_common(p_scope)
    p_scope.add_argument("item_id")
    p_scope.set_defaults(func=cmd_scope)

    p_audit = sub.add_parser("audit", help="replay a log and report inconsistencies")
    add_common(p_audit)
    p_audit.set_defaults(func=cmd_audit)

    p_plan = sub.add_parser("plan", help="replay a log and print pending tasks in order")
    add_common(p_plan)
    p_plan.set_defaults(func=cmd_plan)

    p_analyze = sub.add_parser("analyze", help="run propagation analysis on a dataset")
    add_common(p_analyze)
    p_analyze.set_defaults(func=cmd_analyze)

    p_sim = sub.add_parser("simulate", help="run a scenario through the simulator")
    add_common(p_sim)
    p_sim.add_argument("--scenario", help="scenario JSON")
    p_sim.set_defaults(func=cmd_simulate)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except GlocalsyncError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (json.JSONDecodeError, KeyError, ValueError) as exc:
        print(f"error: invalid input: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
