"""Command-line entry point: ``collatz-phase <command> [options]``.

Each command writes its tables (CSV), a JSON document, optional plot-data
files and exactly one ``manifest-<command>.json`` into the output directory.
Settings resolve as flags, then the ``--config`` JSON file, then defaults;
only the output directory and worker count also read the environment.
"""
from __future__ import annotations

import argparse
import json
import math
import os
import sys
from pathlib import Path

from . import analytics, core, cumulative, flow, published, survey
from .phase import family_params
from .reports import Column, RunManifest, TableSchema, emit_plot_data, write_csv, write_json

DEFAULTS = {
    "verify": dict(lo=1, hi=10**7, family="3,1", n=0, seed=0, scheme="exhaustive"),
    "scan": dict(a_range=[2.0, 10.0], b_range=[0.0, 1.0], coarse=0.1, fine=0.01,
                 sample_lo=100, sample_hi=10_000, objective="sup", alpha_mode="empirical"),
    "trajectory": dict(x=27, cap=core.DEFAULT_CAP, follow_cycle=False),
    "cumulative": dict(lo=1, hi=10**4, cap=core.SWEEP_CAP, follow_cycle=False,
                       depths=list(survey.DEFAULT_DEPTHS)),
    "zones": dict(lo=1, hi=10**6, cap=core.SWEEP_CAP,
                  deltas=[0.01, 0.02, 0.03, 0.04, 0.05, 0.06, 0.07, 0.08, 0.09, 0.10]),
    "cycles": dict(pmax=8, bound=analytics.CYCLE_BOUND),
    "stats": dict(lo=1, hi=10**6, mode="total", cap=core.SWEEP_CAP, tail_b=analytics.DEFAULT_TAIL_B,
                  growth=[27, 703, 9663, 83779, 459759]),
    "spectrum": dict(lo=1, hi=10**6, n=0, seed=0, scheme="exhaustive", kmax=10,
                     m=analytics.WORD_LENGTH),
    "flow": dict(xs=[1, 2, 3, 5, 10, 100, 1000], grid=100),
    "compare-paper": dict(hi=10**6, seed=0),
}
COMMON = dict(out="out", workers=None, digits=7)

_SEED_CMDS = {"verify", "spectrum", "compare-paper"}


class UsageError(Exception):
    pass


# ---------------------------------------------------------------- parsing

def _pair(s: str) -> list[float]:
    parts = s.split(",")
    if len(parts) != 2:
        raise argparse.ArgumentTypeError(f"expected two comma-separated numbers, got {s!r}")
    return [float(p) for p in parts]


def _ints(s: str) -> list[int]:
    return [int(p) for p in s.split(",") if p]


def _floats(s: str) -> list[float]:
    return [float(p) for p in s.split(",") if p]


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--out", help="output directory (env COLLATZ_PHASE_OUT, default ./out)")
    common.add_argument("--workers", type=int, help="worker processes (env COLLATZ_PHASE_WORKERS)")
    common.add_argument("--config", type=Path, help="JSON file with option values")
    common.add_argument("--digits", type=int, help="significant digits in CSV output")

    p = argparse.ArgumentParser(prog="collatz-phase", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("verify", parents=[common], help="|eps| statistics over a range")
    s.add_argument("--lo", type=int)
    s.add_argument("--hi", type=int)
    s.add_argument("--family", help="a,b of the map family (default 3,1)")
    s.add_argument("--scheme", choices=survey.SCHEMES)
    s.add_argument("-n", "--n", type=int, help="sample size for sampling schemes")
    s.add_argument("--seed", type=int)

    s = sub.add_parser("scan", parents=[common], help="(a, b) transform grid scan")
    s.add_argument("--a-range", type=_pair, metavar="LO,HI")
    s.add_argument("--b-range", type=_pair, metavar="LO,HI")
    s.add_argument("--coarse", type=float)
    s.add_argument("--fine", type=float)
    s.add_argument("--sample-lo", type=int)
    s.add_argument("--sample-hi", type=int)
    s.add_argument("--objective", choices=survey.OBJECTIVES)
    s.add_argument("--alpha-mode", choices=("empirical", "analytic"))

    s = sub.add_parser("trajectory", parents=[common], help="phase record of one orbit")
    s.add_argument("--x", type=int)
    s.add_argument("--cap", type=int)
    s.add_argument("--follow-cycle", action="store_true", default=None)

    s = sub.add_parser("cumulative", parents=[common], help="sup |E_n| over a range of starts")
    s.add_argument("--lo", type=int)
    s.add_argument("--hi", type=int)
    s.add_argument("--cap", type=int)
    s.add_argument("--depths", type=_ints)
    s.add_argument("--follow-cycle", action="store_true", default=None)

    s = sub.add_parser("zones", parents=[common], help="termination-zone membership and steps")
    s.add_argument("--lo", type=int)
    s.add_argument("--hi", type=int)
    s.add_argument("--cap", type=int)
    s.add_argument("--deltas", type=_floats)

    s = sub.add_parser("cycles", parents=[common], help="cycle-length feasibility table")
    s.add_argument("--pmax", type=int)
    s.add_argument("--bound", type=float)

    s = sub.add_parser("stats", parents=[common], help="stopping times and growth factors")
    s.add_argument("--lo", type=int)
    s.add_argument("--hi", type=int)
    s.add_argument("--mode", choices=("total", "terras"))
    s.add_argument("--cap", type=int)
    s.add_argument("--tail-b", type=float)
    s.add_argument("--growth", type=_ints)

    s = sub.add_parser("spectrum", parents=[common], help="autocorrelation and Walsh coefficients")
    s.add_argument("--lo", type=int)
    s.add_argument("--hi", type=int)
    s.add_argument("--scheme", choices=survey.SCHEMES)
    s.add_argument("-n", "--n", type=int)
    s.add_argument("--seed", type=int)
    s.add_argument("--kmax", type=int)
    s.add_argument("--m", type=int)

    s = sub.add_parser("flow", parents=[common], help="continuous flow versus the map")
    s.add_argument("--xs", type=_ints)
    s.add_argument("--grid", type=int, help="points per axis of the conjugacy grid")

    s = sub.add_parser("compare-paper", parents=[common],
                       help="recompute the published tables and list discrepancies")
    s.add_argument("--hi", type=int, help="upper end of the range-based checks")
    s.add_argument("--seed", type=int)
    return p


def resolve(args: argparse.Namespace) -> dict:
    """Merge defaults, the config file and explicit flags, in that order."""
    cfg = dict(COMMON)
    cfg.update(DEFAULTS[args.command])
    env_out = os.environ.get("COLLATZ_PHASE_OUT")
    if env_out:
        cfg["out"] = env_out
    env_w = os.environ.get("COLLATZ_PHASE_WORKERS")
    if env_w:
        cfg["workers"] = int(env_w)
    if args.config is not None:
        try:
            data = json.loads(args.config.read_text(encoding="utf-8"))
        except json.JSONDecodeError as e:
            raise UsageError(f"config {args.config}: {e}") from e
        section = data.get(args.command, {}) if isinstance(data.get(args.command), dict) else {}
        flat = {k: v for k, v in data.items() if not isinstance(v, dict)}
        for src in (flat, section):
            for k, v in src.items():
                key = k.replace("-", "_")
                if key not in cfg:
                    raise UsageError(f"config {args.config}: unknown option {k!r}")
                cfg[key] = v
    for k, v in vars(args).items():
        if k in ("command", "config") or v is None:
            continue
        cfg[k] = v
    return cfg


# ---------------------------------------------------------------- commands

class Run:
    def __init__(self, command: str, cfg: dict):
        self.cfg = cfg
        self.out = Path(cfg["out"])
        self.out.mkdir(parents=True, exist_ok=True)
        self.digits = int(cfg["digits"])
        seed = int(cfg.get("seed", 0) or 0) if command in _SEED_CMDS else 0
        self.manifest = RunManifest(command, dict(cfg), seed=seed,
                                    partition=f"contiguous blocks of {survey.BLOCK}, merged in block order")

    def csv(self, name, schema, rows):
        self.manifest.record(write_csv(self.out / name, schema, rows, self.digits))

    def json(self, name, obj):
        self.manifest.record(write_json(self.out / name, obj))

    def plot(self, name, columns, title, figure=""):
        self.manifest.record(emit_plot_data(columns, self.out / name, title=title, figure=figure,
                                            digits=self.digits))

    def finish(self):
        return self.manifest.write(self.out)


RANGE_SCHEMA = TableSchema("range_report", (
    Column("lo", "", "d"), Column("hi", "", "d"), Column("family", "", "s"), Column("count", "", "d"),
    Column("max_abs_eps"), Column("argmax_x", "", "d"), Column("min_abs_eps"), Column("argmin_x", "", "d"),
    Column("mean_abs_eps"), Column("std_abs_eps"), Column("overflow_count", "", "d"),
))
QUANTILE_SCHEMA = TableSchema("quantiles", (Column("q"), Column("abs_eps_upper_edge")))
SCAN_SCHEMA = TableSchema("scan", (
    Column("a"), Column("b"), Column("alpha_hat"), Column("sup_dev"), Column("mean_dev"),
    Column("spread"), Column("resultant"), Column("degenerate", "", "b"),
))
TRAJ_SCHEMA = TableSchema("trajectory", (
    Column("n", "", "d"), Column("value", "", "d"), Column("parity", "", "s"), Column("phase", "turn"),
    Column("eps", "turn"), Column("cum_error", "turn"),
))
CUM_SCHEMA = TableSchema("cumulative", (
    Column("max_n", "", "s"), Column("max_abs_cum", "turn"), Column("attained_at_x", "", "s"),
))
ZONE_SCHEMA = TableSchema("zones", (
    Column("delta", "turn"), Column("members", "", "d"), Column("member_fraction"),
    Column("weighted_fraction"), Column("max_steps_to_1", "", "d"), Column("argmax_member", "", "d"),
    Column("mean_steps_to_1"), Column("unresolved", "", "d"),
))
CYCLE_SCHEMA = TableSchema("cycles", (
    Column("p", "", "d"), Column("p_alpha"), Column("m", "", "d"), Column("residue"),
    Column("bound"), Column("feasible", "", "b"),
))
SURVIVAL_SCHEMA = TableSchema("survival", (Column("k", "", "d"), Column("survival"), Column("model")))
GROWTH_SCHEMA = TableSchema("growth", (
    Column("x", "", "d"), Column("max_odd_run", "", "d"), Column("peak", "", "d"), Column("peak_ratio"),
    Column("total_steps", "", "s"), Column("terras_steps", "", "s"), Column("overflow", "", "b"),
))
AUTO_SCHEMA = TableSchema("autocorrelation", (Column("k", "", "d"), Column("R")))
WALSH_SCHEMA = TableSchema("walsh", (
    Column("set", "", "s"), Column("size", "", "d"), Column("a"), Column("abs_a_times_2_pow_size"),
))
FLOW_SCHEMA = TableSchema("flow", (
    Column("x", "", "d"), Column("C_x", "", "d"), Column("flow1_corrected"), Column("flow1_printed"),
    Column("gap_corrected"), Column("published_flow1"), Column("flagged", "", "b"),
))
DISC_SCHEMA = TableSchema("discrepancies", (
    Column("table", "", "s"), Column("key", "", "s"), Column("column", "", "s"), Column("published"),
    Column("computed"), Column("abs_diff"), Column("tolerance"), Column("match", "", "b"),
    Column("citation", "", "s"),
))


def _count(v) -> str:
    return str(v) if isinstance(v, int) else ("overflow" if v.overflow else f">{v.cap}")


def _range_rows(r: survey.RangeReport):
    return [(r.lo, r.hi, r.family, r.count, r.max_abs_eps, r.argmax_x, r.min_abs_eps, r.argmin_x,
             r.mean_abs_eps, r.std_abs_eps, r.overflow_count)]


def cmd_verify(run: Run, c: dict) -> str:
    parts = c["family"].split(",") if isinstance(c["family"], str) else c["family"]
    if len(parts) != 2:
        raise UsageError(f"family must be 'a,b', got {c['family']!r}")
    fam = family_params(*(str(v).strip() for v in parts))
    if c["scheme"] == "exhaustive":
        r = survey.exhaustive_verify(c["lo"], c["hi"], fam, workers=c["workers"])
    else:
        spec = survey.SampleSpec(c["lo"], c["hi"], c["n"], c["seed"], c["scheme"])
        r = survey.sample_verify(spec, fam)
    run.csv("verify.csv", RANGE_SCHEMA, _range_rows(r))
    qs = (0.01, 0.05, 0.1, 0.25, 0.5, 0.75, 0.9, 0.95, 0.99, 0.999, 1.0)
    run.csv("verify-quantiles.csv", QUANTILE_SCHEMA, zip(qs, r.sketch.quantiles(qs)))
    run.json("verify.json", r.to_dict())
    edges = [i * r.sketch.width for i in range(len(r.sketch.counts))]
    run.plot("verify-histogram.dat", {"abs_eps_bin_lo": edges, "count": r.sketch.counts},
             "histogram of |eps| in bins of width 1e-3", "distribution of |eps|")
    if r.count and r.hi - r.lo <= 10**6 and c["scheme"] == "exhaustive" and fam.is_classic:
        xs = list(range(r.lo, r.hi + 1, max(1, (r.hi - r.lo) // 2000)))
        run.plot("verify-decay.dat", {"x": xs, "abs_eps": [abs(v) for v in survey.sample_eps(xs).tolist()]},
                 "|eps(x)| against x (log-log)", "error decay")
    return (f"[{r.lo}, {r.hi}] {fam.label()}: max|eps| = {r.max_abs_eps:.7g} at x = {r.argmax_x}, "
            f"mean {r.mean_abs_eps:.7g}, overflow {r.overflow_count}")


def cmd_scan(run: Run, c: dict) -> str:
    spec = survey.SampleSpec(c["sample_lo"], c["sample_hi"])
    first, second = survey.coarse_to_fine_scan(tuple(c["a_range"]), tuple(c["b_range"]), c["coarse"],
                                               c["fine"], spec, c["objective"], c["alpha_mode"],
                                               workers=c["workers"])
    rows = lambda res: [(x.a, x.b, x.alpha_hat, x.sup_dev, x.mean_dev, x.spread, x.resultant,  # noqa: E731
                         x.degenerate) for x in res.cells]
    run.csv("scan-coarse.csv", SCAN_SCHEMA, rows(first))
    run.csv("scan-fine.csv", SCAN_SCHEMA, rows(second))
    run.json("scan.json", {"coarse": first.to_dict(), "fine": second.to_dict()})
    run.plot("scan-landscape.dat", {"a": [x.a for x in first.cells], "b": [x.b for x in first.cells],
                                    c["objective"]: [x.score(c["objective"]) for x in first.cells]},
             f"deviation landscape ({c['objective']} objective)", "parameter landscape")
    best = second.best
    if best is None:
        return "scan: every cell degenerate"
    return (f"argmin ({best.a:.2f}, {best.b:.2f}) {c['objective']} = {best.score(c['objective']):.6g}, "
            f"alpha_hat = {best.alpha_hat:.6f}")


def cmd_trajectory(run: Run, c: dict) -> str:
    rec = cumulative.track(c["x"], c["cap"], follow_cycle=bool(c["follow_cycle"]))
    rows = [(r["n"], r["value"], r["parity"], r["phase"], r["eps"], r["cum_error"])
            for r in cumulative.record_rows(rec)]
    run.csv(f"trajectory-{c['x']}.csv", TRAJ_SCHEMA, rows)
    mx, argn = cumulative.max_abs_cum(rec)
    summary = dict(start=rec.start, steps=rec.n_steps, resolved=rec.resolved, overflow=rec.overflow,
                   final_cum_error=rec.final_cum, max_abs_cum=mx, argmax_n=argn,
                   max_telescope_residual=rec.max_residual, monotone=rec.monotone)
    run.json(f"trajectory-{c['x']}.json", summary)
    run.plot(f"trajectory-{c['x']}.dat", {"n": list(range(len(rec))), "E_n": rec.cum_errors},
             f"cumulative error E_n along the orbit of {c['x']}", "cumulative error growth")
    state = "reached 1" if rec.resolved else ("overflow" if rec.overflow else "cap hit")
    return f"x = {c['x']}: {rec.n_steps} steps ({state}), E = {rec.final_cum:.7g}, residual {rec.max_residual:.2e}"


def cmd_cumulative(run: Run, c: dict) -> str:
    r = survey.trajectory_sweep(c["lo"], c["hi"], c["cap"], follow_cycle=bool(c["follow_cycle"]),
                                workers=c["workers"], depths=c["depths"])
    rows = [(str(d), v, str(x)) for d, v, x in r.depth_sups]
    rows.append(("all", r.sup_abs_cum, str(r.argmax_x)))
    run.csv("cumulative.csv", CUM_SCHEMA, rows)
    run.json("cumulative.json", r.to_dict())
    return (f"[{r.lo}, {r.hi}]: sup|E_n| = {r.sup_abs_cum:.7g} at x = {r.argmax_x} (n = {r.argmax_n}), "
            f"max residual {r.max_residual:.2e}, unresolved {r.unresolved}")


def cmd_zones(run: Run, c: dict) -> str:
    reps = analytics.termination_zone_report(c["deltas"], c["lo"], c["hi"], c["cap"],
                                             claimed=_claimed_zone_steps())
    run.csv("zones.csv", ZONE_SCHEMA, [(z.delta, z.members, z.member_fraction, z.weighted_fraction,
                                       z.max_steps_to_1, z.argmax_member, z.mean_steps_to_1,
                                       z.unresolved) for z in reps])
    run.json("zones.json", [z.to_dict() for z in reps])
    disc = published.compare_paper(reps)
    run.csv("zones-discrepancies.csv", DISC_SCHEMA, disc.rows())
    return "; ".join(f"delta {z.delta:g}: {z.member_fraction:.4f}" for z in reps)


def _claimed_zone_steps() -> dict[float, int]:
    return {float(v.key): int(v.value) for (k, col), v in published.published_table("termination-zone").items()
            if col == "max_steps"}


def cmd_cycles(run: Run, c: dict) -> str:
    rows = analytics.cycle_feasibility(c["pmax"], c["bound"])
    run.csv("cycles.csv", CYCLE_SCHEMA, [(r.p, r.p_alpha, r.m, r.residue, r.bound, r.feasible) for r in rows])
    s, res = analytics.cycle_eps_sum([1, 4, 2])
    run.json("cycles.json", {"rows": rows, "trivial_cycle_eps_sum": s, "trivial_cycle_residual": res})
    return f"{sum(r.feasible for r in rows)} of {len(rows)} lengths pass the bound; sum eps over 1-4-2 = {s:.7f}"


def cmd_stats(run: Run, c: dict) -> str:
    h = analytics.stopping_histogram(c["lo"], c["hi"], c["mode"], c["cap"], c["tail_b"])
    table = h.table()
    run.csv("stopping-survival.csv", SURVIVAL_SCHEMA, [(k, s, m if math.isfinite(m) else None)
                                                      for k, s, m in table])
    run.plot("stopping-survival.dat", {"k": [t[0] for t in table[1:]], "survival": [t[1] for t in table[1:]],
                                       "model": [t[2] for t in table[1:]]},
             f"P({c['mode']} stopping time > k) and 2B/(k alpha), B = {c['tail_b']}",
             "stopping-time distribution")
    rows = analytics.growth_table(c["growth"])
    run.csv("growth.csv", GROWTH_SCHEMA, [(r.start, r.max_odd_run, r.peak, r.peak_ratio, _count(r.total_steps),
                                          _count(r.terras_steps), r.overflow) for r in rows])
    run.json("stats.json", {"counts": {str(k): v for k, v in h.counts.items()}, "unresolved": h.unresolved,
                            "overflow": h.overflow, "mode": h.mode, "tail_b": h.tail_b})
    return f"{h.resolved} resolved {c['mode']} stopping times, max {max(h.counts)}, unresolved {h.unresolved}"


def cmd_spectrum(run: Run, c: dict) -> str:
    spec = survey.SampleSpec(c["lo"], c["hi"], c["n"], c["seed"], c["scheme"])
    est = analytics.spectral_estimates(spec, c["kmax"], c["m"])
    run.csv("autocorrelation.csv", AUTO_SCHEMA, est.autocorr)
    run.csv("walsh.csv", WALSH_SCHEMA, [("{" + ",".join(map(str, s)) + "}", len(s), v, abs(v) * 2 ** len(s))
                                        for s, v in est.walsh])
    run.json("spectrum.json", {"autocorr": est.autocorr, "walsh": [[list(s), v] for s, v in est.walsh],
                               "sample": est.sample_spec, "word_length": est.word_length})
    run.plot("autocorrelation.dat", {"k": [k for k, _ in est.autocorr], "R": [v for _, v in est.autocorr]},
             "autocorrelation of eps along orbits", "autocorrelation decay")
    return f"R(0) = {est.autocorr[0][1]:.4g}, a_empty = {est.walsh[0][1]:.4g}"


def cmd_flow(run: Run, c: dict) -> str:
    pub = {int(k): v.value for (k, col), v in published.published_table("continuous-comparison").items()
           if col == "flow1"}
    rows = flow.flow_table(c["xs"], pub)
    run.csv("flow.csv", FLOW_SCHEMA, [(r.x, r.cx, r.corrected, r.printed, r.corrected - r.cx, r.published,
                                       r.flagged) for r in rows])
    g = int(c["grid"])
    worst = {"corrected": 0.0, "printed": 0.0}
    for i in range(g):
        x = 10 ** (6 * i / max(g - 1, 1))
        for j in range(g):
            t = -2 + 4 * j / max(g - 1, 1)
            for v in worst:
                worst[v] = max(worst[v], flow.flow_conjugacy_residual(x, t, v))
    run.json("flow.json", {"rows": rows, "conjugacy_grid_points": g * g, "max_residual": worst})
    flagged = sum(r.flagged for r in rows if r.published is not None)
    return (f"conjugacy residual corrected {worst['corrected']:.2e}, printed {worst['printed']:.2e}; "
            f"{flagged} of {sum(r.published is not None for r in rows)} published rows flagged")


def compare_battery(hi: int, seed: int = 0, workers=None) -> published.DiscrepancyReport:
    """Recompute every table with a published counterpart."""
    rep = published.DiscrepancyReport()
    rep.extend(published.compare_paper(analytics.cycle_feasibility(8)))
    rep.extend(published.compare_paper(flow.flow_table([1, 2, 3, 5, 10, 100, 1000])))
    rep.extend(published.compare_paper([family_params(a, b) for a, b in
                                        ((3, 1), (5, 1), (7, 1), (3, 5), (1, 1), ("1.5", 1))]))
    rep.extend(published.compare_paper(published.eps_table(1, 100)))
    rep.extend(published.compare_paper(published.phase_points([27, 82, 41, 97, 292, 220, 703, 265])))
    rep.extend(published.compare_paper(published.asymptotic_coefficients()))
    rep.extend(published.compare_paper(cumulative.track(27)))
    rep.extend(published.compare_paper(cumulative.track(97)))
    rep.extend(published.compare_paper(analytics.growth_table([27, 703, 9663, 83779, 459759])))
    rep.extend(published.compare_paper(survey.exhaustive_verify(1, hi, workers=workers)))
    top = len(str(hi)) - 1
    for k in range(3, top + 1):
        sweep = published.compare_paper(survey.trajectory_sweep(1, 10**k, workers=workers))
        # the depth-only table is matched once, against the widest range
        rep.cells.extend(c for c in sweep.cells if k == top or c.table != "cumulative-error")
    zone_deltas = sorted({float(v.key) for v in published.load_published()
                          if v.table in ("termination-zone", "basin-parameters")})
    rep.extend(published.compare_paper(analytics.termination_zone_report(zone_deltas, 1, hi)))
    scan = survey.grid_scan((5.9, 6.1), (0.1, 0.3), 0.01, 0.01, survey.SampleSpec(100, 10_000),
                            workers=workers)
    rep.extend(published.compare_paper(scan))
    rep.extend(published.compare_paper(analytics.spectral_estimates(survey.SampleSpec(1, min(hi, 10**5)), 1)))
    for lo_exp, hi_exp in ((3, 6), (6, 9), (9, 12), (12, 15), (15, 18), (18, 20)):
        spec = survey.SampleSpec(10**lo_exp, 10**hi_exp - 1, 10**4, seed, "uniform")
        rep.extend(published.compare_paper(survey.sample_verify(spec)))
    return rep


def cmd_compare(run: Run, c: dict) -> str:
    rep = compare_battery(int(c["hi"]), int(c["seed"]), c["workers"])
    run.csv("discrepancies.csv", DISC_SCHEMA, rep.rows())
    run.json("discrepancies.json", rep.to_dict())
    lines = [f"{t}: {s['matched']}/{s['cells']} reproduced" for t, s in rep.summary()["tables"].items()]
    return "\n".join(lines + [f"total: {rep.matched} reproduced, {rep.mismatched} discrepancies"])


COMMANDS = {
    "verify": cmd_verify, "scan": cmd_scan, "trajectory": cmd_trajectory, "cumulative": cmd_cumulative,
    "zones": cmd_zones, "cycles": cmd_cycles, "stats": cmd_stats, "spectrum": cmd_spectrum,
    "flow": cmd_flow, "compare-paper": cmd_compare,
}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = resolve(args)
        run = Run(args.command, cfg)
        text = COMMANDS[args.command](run, cfg)
        manifest = run.finish()
    except (UsageError, ValueError) as e:
        print(f"collatz-phase {args.command}: {e}", file=sys.stderr)
        return 2
    except (core.Overflow, OSError) as e:
        print(f"collatz-phase {args.command}: {type(e).__name__}: {e}", file=sys.stderr)
        return 1
    print(text)
    print(f"manifest: {manifest}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
