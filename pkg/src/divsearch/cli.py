"""Command-line harness: layer dumps, bound tables, sweeps, duels, exact solves."""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from dataclasses import asdict, dataclass, field
from pathlib import Path

import numpy as np

from . import adversary, exact, poset, search, tablegen
from .oracle import TableOracle
from .poset import Regime

BOUNDS_HEADER = ["n", "s1", "s2", "f_rs1", "f_rs2", "f_rs2s", "r_s2", "r_rs2s"]
C2 = 55 / 72
# 3/4 plus the summed densities 1/540 + 1/180 + 1/4320 of the refined special sets
C1 = 3 / 4 + 11 / 1440


@dataclass
class ExperimentManifest:
    """Everything a bounds/bench run depends on; equal manifests give identical files."""

    n_list: list[int] = field(default_factory=lambda: [1000, 10000, 100000, 1000000])
    regimes: list[str] = field(default_factory=lambda: [r.value for r in Regime])
    algorithms: list[str] = field(default_factory=lambda: ["chains", "table"])
    seeds: list[int] = field(default_factory=lambda: [0])
    caps: dict[str, int] = field(default_factory=lambda: {"exact": exact.DEFAULT_CAP})
    upper_slack_scale: float = 10.0
    upper_slack_const: float = 20.0
    forced_slack: float = 50.0
    probes_per_table: int = 1000
    outputs: dict[str, str] = field(default_factory=dict)

    @classmethod
    def load(cls, path: str | Path) -> ExperimentManifest:
        return cls(**json.loads(Path(path).read_text()))

    def dump(self) -> str:
        return json.dumps(asdict(self), indent=2, sort_keys=True) + "\n"


def _emit(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _int_list(text: str) -> list[int]:
    return [int(float(tok)) for tok in text.split(",") if tok.strip()]


def _positive(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text}")
    return value


def _csv(header: list[str], rows: list[list]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    w.writerows(rows)
    return buf.getvalue()


# ---------------------------------------------------------------------------
# layers


def render_grid(grid: poset.LayerGrid) -> str:
    width = len(str(max(map(max, grid.rows))))
    lines = [f"L_{grid.base}  shape {list(grid.shape)}"]
    for row in grid.rows:
        lines.append("  " + " ".join(str(i).rjust(width) for i in row))
    return "\n".join(lines) + "\n"


def cmd_layers(args) -> int:
    grids = poset.layer_decomposition(args.n)
    if args.base is not None:
        grids = tuple(g for g in grids if g.base == args.base)
        if not grids:
            print(f"error: no layer with base {args.base} for n={args.n}", file=sys.stderr)
            return 2
    if args.format == "json":
        text = json.dumps([g.to_json() for g in grids]) + "\n"
    elif args.format == "csv":
        rows = [[g.base, s, k, i] for g in grids for s, row in enumerate(g.rows)
                for k, i in enumerate(row)]
        text = _csv(["base", "row", "col", "subscript"], rows)
    else:
        text = "\n".join(render_grid(g) for g in grids)
    _emit(text, args.out)
    return 0


# ---------------------------------------------------------------------------
# bounds


def bounds_row(n: int) -> list:
    s2 = search.budget_s2(n)
    f = [adversary.forced_comparison_count(n, r) for r in Regime]
    return [n, search.budget_s1(n), s2, *f, f"{s2 / n:.6f}", f"{f[2] / n:.6f}"]


def bounds_failures(row: list, manifest: ExperimentManifest) -> list[dict]:
    n, _, s2, f1, f2, f3 = row[:6]
    fails = []
    slack = manifest.upper_slack_scale * math.log(n) ** 2 + manifest.upper_slack_const
    if s2 > C2 * n + slack:
        fails.append({"n": n, "check": "s2-upper", "value": s2, "limit": C2 * n + slack})
    if not f1 <= s2 or not f2 <= s2 or not f3 <= s2:
        fails.append({"n": n, "check": "forced-exceeds-s2", "value": max(f1, f2, f3), "limit": s2})
    if n >= 1000 and abs(f3 - C1 * n) > manifest.forced_slack:
        fails.append({"n": n, "check": "forced-density", "value": f3, "target": C1 * n})
    return fails


def cmd_bounds(args) -> int:
    manifest = ExperimentManifest.load(args.manifest) if args.manifest else ExperimentManifest()
    if args.n_list:
        manifest.n_list = _int_list(args.n_list)
    if any(n < 1 for n in manifest.n_list):
        print("error: every n must be >= 1", file=sys.stderr)
        return 2
    rows = [bounds_row(n) for n in sorted(set(manifest.n_list))]
    fails = [f for row in rows for f in bounds_failures(row, manifest)]
    if args.format == "json":
        text = json.dumps({"rows": [dict(zip(BOUNDS_HEADER, r)) for r in rows],
                           "failures": fails}, indent=1) + "\n"
    else:
        text = _csv(BOUNDS_HEADER, rows)
    _emit(text, args.out or manifest.outputs.get("bounds"))
    if fails:
        print(json.dumps({"failures": fails}), file=sys.stderr)
    return 1 if fails else 0


# ---------------------------------------------------------------------------
# verify

SUITES = ("structural", "essential", "quotient", "witness")


def run_suite(suite: str, n_max: int) -> list[poset.Violation]:
    if suite == "structural":
        return poset.structural_sweep(n_max)
    if suite == "quotient":
        report = poset.quotient_violations(n_max)
        for n in range(1, n_max + 1):
            report += poset.special_first_violations(n)
        return report
    if suite == "essential":
        return adversary.essentiality_sweep(n_max)
    if suite == "witness":
        return adversary.witness_sweep(n_max)
    raise ValueError(f"unknown suite {suite}")


def cmd_verify(args) -> int:
    suites = SUITES if args.suite == "all" else (args.suite,)
    report = {}
    for suite in suites:
        violations = run_suite(suite, args.n_max)
        report[suite] = {"n_max": args.n_max, "passed": not violations,
                         "violations": [v.to_json() for v in violations[:1000]],
                         "count": len(violations)}
    ok = all(r["passed"] for r in report.values())
    _emit(json.dumps({"passed": ok, "suites": report}, indent=1) + "\n", args.out)
    return 0 if ok else 1


# ---------------------------------------------------------------------------
# duel


def cmd_duel(args) -> int:
    try:
        result = adversary.duel(args.n, args.regime, args.algo)
    except adversary.LowerBoundViolation as err:
        print(json.dumps({"passed": False, "error": str(err)}))
        return 1
    if args.trace:
        Path(args.trace).write_text(result.transcript.to_jsonl())
    _emit(json.dumps(result.summary()) + "\n", args.out)
    return 0


# ---------------------------------------------------------------------------
# exact


def sandwich_row(n: int, cap: int) -> tuple[int, int, int]:
    tau = exact.tau_exact(n, cap)
    lower = max(adversary.forced_comparison_count(n, r) for r in Regime)
    chains = search.answer_tree_depth(lambda o: search.search_chains(n, o), n)
    upper = min(search.worst_case_search_table(n), chains, n)
    return tau, lower, upper


def cmd_exact(args) -> int:
    if args.n_max > args.cap:
        print(f"error: --n-max {args.n_max} exceeds --cap {args.cap}", file=sys.stderr)
        return 2
    rows, bad = [], []
    for n in range(1, args.n_max + 1):
        tau, lower, upper = sandwich_row(n, args.cap)
        rows.append([n, tau, lower, upper])
        if not lower <= tau <= upper:
            bad.append(n)
        if args.emit_trees:
            out = Path(args.emit_trees)
            out.mkdir(parents=True, exist_ok=True)
            (out / f"tree_{n}.json").write_text(exact.tree_to_json(exact.optimal_tree(n, args.cap)) + "\n")
    _emit(_csv(["n", "tau", "lower", "upper"], rows), args.out)
    if bad:
        print(json.dumps({"sandwich_broken": bad}), file=sys.stderr)
    return 1 if bad else 0


# ---------------------------------------------------------------------------
# bench

BENCH_HEADER = ["n", "algo", "seed", "probes", "mean_cmp", "max_cmp", "adversary_cmp", "budget"]


def bench_rows(n: int, algo: str, seed: int, probes_per_table: int) -> list:
    run = adversary.ALGORITHMS[algo]
    table = tablegen.random_table(n, seed)
    probes = table.probes()
    if len(probes) > probes_per_table:
        rng = np.random.default_rng(seed)
        probes = sorted(rng.choice(probes, probes_per_table, replace=False).tolist())
    counts = []
    for x in probes:
        oracle = TableOracle(table, x)
        outcome = run(n, oracle)
        if outcome.match != table.contains(x):
            raise AssertionError(f"{algo} wrong on n={n}, x={x}")
        counts.append(outcome.comparisons)
    duel = adversary.duel(n, Regime.RS2STAR, algo, check=False)
    budget = {"chains": search.budget_s1, "table": search.budget_s2,
              "grid": search.budget_grid_only}[algo](n)
    return [n, algo, seed, len(probes), f"{np.mean(counts):.3f}", max(counts),
            duel.comparisons, budget]


def cmd_bench(args) -> int:
    manifest = ExperimentManifest.load(args.manifest) if args.manifest else ExperimentManifest(
        n_list=[100, 1000, 10000])
    if args.n_list:
        manifest.n_list = _int_list(args.n_list)
    if args.algo:
        manifest.algorithms = [args.algo]
    if args.seed is not None:
        manifest.seeds = [args.seed]
    rows = [bench_rows(n, a, s, manifest.probes_per_table)
            for n in sorted(set(manifest.n_list))
            for a in sorted(manifest.algorithms)
            for s in sorted(manifest.seeds)]
    over = [r for r in rows if r[5] > r[7]]
    _emit(_csv(BENCH_HEADER, rows), args.out or manifest.outputs.get("bench"))
    return 1 if over else 0


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="divsearch", description=__doc__)
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("layers", help="print the layer decomposition of {1..n}")
    s.add_argument("--n", type=_positive, required=True)
    s.add_argument("--base", type=int)
    s.add_argument("--format", choices=["text", "csv", "json"], default="text")
    s.add_argument("--out")
    s.set_defaults(func=cmd_layers)

    s = sub.add_parser("bounds", help="budgets and forced counts as CSV")
    s.add_argument("--n-list", help="comma-separated sizes, e.g. 1e3,1e4")
    s.add_argument("--manifest")
    s.add_argument("--format", choices=["csv", "json"], default="csv")
    s.add_argument("--out")
    s.set_defaults(func=cmd_bounds)

    s = sub.add_parser("verify", help="structural / essentiality / quotient / witness sweeps")
    s.add_argument("--suite", choices=[*SUITES, "all"], default="all")
    s.add_argument("--n-max", type=_positive, required=True)
    s.add_argument("--out")
    s.set_defaults(func=cmd_verify)

    s = sub.add_parser("duel", help="run a search against an adversary")
    s.add_argument("--n", type=_positive, required=True)
    s.add_argument("--regime", choices=[r.value for r in Regime], default="rs2star")
    s.add_argument("--algo", choices=sorted(adversary.ALGORITHMS), default="table")
    s.add_argument("--trace", help="write the transcript as JSON lines here")
    s.add_argument("--out")
    s.set_defaults(func=cmd_duel)

    s = sub.add_parser("exact", help="exact optimal cost for small n, with the sandwich")
    s.add_argument("--n-max", type=_positive, required=True)
    s.add_argument("--cap", type=_positive, default=exact.DEFAULT_CAP)
    s.add_argument("--emit-trees", metavar="DIR")
    s.add_argument("--out")
    s.set_defaults(func=cmd_exact)

    s = sub.add_parser("bench", help="comparison counts on random tables and against RS2*")
    s.add_argument("--n-list")
    s.add_argument("--algo", choices=sorted(adversary.ALGORITHMS))
    s.add_argument("--seed", type=int)
    s.add_argument("--manifest")
    s.add_argument("--out")
    s.set_defaults(func=cmd_bench)
    return p


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
