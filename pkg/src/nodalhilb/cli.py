"""Command-line verification driver.

Every check is a registered callable returning a JSON-friendly details dict.
Identity failures mark a check ``fail``; an exhausted step budget marks it
``skipped`` so that it is never mistaken for a mathematical failure.
"""

from __future__ import annotations

import argparse
import json
import random
import re
import sys
import time
from dataclasses import asdict, dataclass, field
from math import factorial
from typing import Callable

from . import charts, euler, punctual, tautological, vandermonde
from .errors import BudgetError, NodalHilbError, RelationFailure
from .groebner import DEFAULT_BUDGET

MODULES = ("punctual", "charts", "vdm", "euler", "taut")


@dataclass
class SuiteConfig:
    m_max: int = 4
    seed: int = 0
    spec_count: int = 20
    budget: int = DEFAULT_BUDGET
    output: str = "text"
    modules: tuple[str, ...] = MODULES
    timings: bool = False

    def __post_init__(self):
        if self.m_max < 1:
            raise ValueError("m_max must be at least 1")
        unknown = set(self.modules) - set(MODULES)
        if unknown:
            raise ValueError(f"unknown modules: {sorted(unknown)}")


@dataclass
class Check:
    id: str
    module: str
    params: dict
    run: Callable[[], dict]


@dataclass
class CheckResult:
    id: str
    module: str
    params: dict
    status: str
    details: dict
    elapsed_ms: float | None = None


@dataclass
class Report:
    config: dict
    checks: list[CheckResult] = field(default_factory=list)

    @property
    def summary(self) -> dict:
        out = {"pass": 0, "fail": 0, "skipped": 0}
        for c in self.checks:
            out[c.status] += 1
        return out

    @property
    def ok(self) -> bool:
        return self.summary["fail"] == 0

    def to_dict(self) -> dict:
        return {"config": self.config, "checks": [asdict(c) for c in self.checks], "summary": self.summary}


# ---------------------------------------------------------------------------
# check registry


def _sub_seed(seed: int, tag: str) -> int:
    return random.Random(f"{seed}:{tag}").getrandbits(63)


def punctual_checks(ms, cfg: SuiteConfig) -> list[Check]:
    out = []
    for m in ms:
        out.append(Check(f"punctual.chain.m{m}", "punctual", {"m": m}, lambda m=m: _chain_details(m, cfg)))
        if m <= 5:
            for i in range(1, m + 1):
                out.append(
                    Check(f"punctual.deformation.m{m}.i{i}", "punctual", {"m": m, "i": i}, lambda m=m, i=i: _deformation_details(m, i, cfg))
                )
    return out


def _chain_details(m: int, cfg: SuiteConfig) -> dict:
    chain = punctual.punctual_chain(m, seed=_sub_seed(cfg.seed, f"chain{m}"), samples=5, budget=cfg.budget)
    return {"m": m, "components": len(chain.components), "nodes": [str(n) for n in chain.nodes()]}


def _deformation_details(m: int, i: int, cfg: SuiteConfig) -> dict:
    pair = punctual.universal_deformation(m, i, cfg.budget)
    if len(pair.free) != m + 1:
        raise RelationFailure(f"{len(pair.free)} free parameters, expected {m + 1}")
    res = pair.flatness_residuals()
    if any(not r.is_zero() for r in res):
        raise RelationFailure("flatness relations leave nonzero residuals")
    return {
        "f": str(pair.f),
        "g": str(pair.g),
        "free": list(pair.free),
        "constraints": [str(c) for c in pair.constraints],
    }


def chart_checks(ms, cfg: SuiteConfig) -> list[Check]:
    out = []
    for m in ms:
        seed = _sub_seed(cfg.seed, f"charts{m}")
        if m >= 3:
            out.append(Check(f"charts.z_relations.m{m}", "charts", {"m": m}, lambda m=m: charts.verify_z_relations(m, cfg.budget)))
        for i in range(1, m + 1):
            out.append(Check(f"charts.reduction.m{m}.i{i}", "charts", {"m": m, "i": i}, lambda m=m, i=i: charts.verify_chart_reduction(m, i, cfg.budget)))
            out.append(
                Check(
                    f"charts.flatness.m{m}.i{i}",
                    "charts",
                    {"m": m, "i": i, "spec_count": cfg.spec_count},
                    lambda m=m, i=i: charts.verify_flatness_chart(m, i, cfg.spec_count, seed, cfg.budget),
                )
            )
        out.append(Check(f"charts.smoothness.m{m}", "charts", {"m": m}, lambda m=m: charts.smoothness_check(m, seeds=50, seed=seed)))
        if m >= 2:
            out.append(Check(f"charts.fibers.m{m}", "charts", {"m": m}, lambda m=m: charts.verify_fibers(m, 50, seed)))
            out.append(Check(f"charts.z_restriction.m{m}", "charts", {"m": m}, lambda m=m: charts.z_restriction_degrees(m)))
    return out


def vdm_checks(ms, cfg: SuiteConfig) -> list[Check]:
    out = []
    for m in ms:
        if not 2 <= m <= 5:
            continue
        out.append(Check(f"vdm.syzygies.m{m}", "vdm", {"m": m}, lambda m=m: vandermonde.verify_syzygies(m)))
        out.append(Check(f"vdm.transfer.m{m}", "vdm", {"m": m}, lambda m=m: _transfer_details(m)))
        out.append(Check(f"vdm.orders.m{m}", "vdm", {"m": m}, lambda m=m: vandermonde.verify_discriminant_pullback(m)))
        out.append(Check(f"vdm.additivity.m{m}", "vdm", {"m": m}, lambda m=m: vandermonde.verify_order_additivity(m)))
        out.append(Check(f"vdm.confluence.m{m}", "vdm", {"m": m}, lambda m=m: _confluence_details(m, cfg)))
    return out


def _transfer_details(m: int) -> dict:
    signs = vandermonde.find_sign_assignment(m)
    return {"m": m, "signs": list(signs), "identities": [vandermonde.g1_transfer_identity(m, i, signs) for i in range(2, m + 1)]}


def _confluence_details(m: int, cfg: SuiteConfig, samples: int = 100) -> dict:
    cr = vandermonde.cycle_ring(m)
    gb = cr.groebner_basis()
    rng = random.Random(_sub_seed(cfg.seed, f"confluence{m}"))
    for _ in range(samples):
        p = vandermonde.random_cycle_poly(cr, rng)
        if cr.normal_form(p) != gb.normal_form(p, cfg.budget):
            raise RelationFailure(f"rewriting and Groebner normal forms differ on {p}")
    return {"m": m, "samples": samples}


def euler_checks(cfg: SuiteConfig, sweep: dict | None = None) -> list[Check]:
    sweep = sweep or {}
    return [
        Check("euler.sweep", "euler", {k: list(v) for k, v in sweep.items()}, lambda: _euler_sweep_details(sweep)),
        Check("euler.alternating_binomial", "euler", {"a": [-20, 20], "b": [0, 20]}, _alternating_details),
        Check("euler.blowup_model", "euler", {"m": [1, 10], "gB": [0, 3], "sigma": [0, 5]}, _blowup_details),
        Check("euler.macdonald_series", "euler", {"eX": [-6, 6], "m": [0, 8]}, _series_details),
        Check("euler.chain_euler", "euler", {"r": [0, 10]}, _chain_euler_details),
    ]


def _euler_sweep_details(sweep: dict) -> dict:
    g = sweep.get("g", range(0, 9))
    gB = sweep.get("gB", range(0, 4))
    m = sweep.get("m", range(1, 11))
    sigma = sweep.get("sigma", (0, 1, 2, 5))
    rows = []
    for gv in g:
        for gBv in gB:
            for mv in m:
                for s in sigma:
                    vals = euler.euler_all_modes(euler.FamilyParams(gv, gBv, s, mv))
                    rows.append({"g": gv, "gB": gBv, "m": mv, "sigma": s, **vals, "agree": len(set(vals.values())) == 1})
    bad = [r for r in rows if not r["agree"]]
    if bad:
        raise RelationFailure(f"{len(bad)} parameter sets disagree, first {bad[0]}")
    return {"cases": len(rows), "rows": rows}


def _alternating_details() -> dict:
    for a in range(-20, 21):
        for b in range(21):
            lhs, rhs = euler.alternating_binomial_identity(a, b)
            if lhs != rhs:
                raise RelationFailure(f"alternating sum fails at a={a}, b={b}")
    return {"cases": 41 * 21}


def _blowup_details() -> dict:
    n = 0
    for m in range(1, 11):
        for gB in range(4):
            for s in range(6):
                if euler.euler_blowup_model(m, gB, s) != euler.euler_hilb(euler.FamilyParams(0, gB, s, m)):
                    raise RelationFailure(f"blow-up model differs at m={m}, gB={gB}, sigma={s}")
                n += 1
    return {"cases": n}


def _series_details() -> dict:
    for e in range(-6, 7):
        for m in range(9):
            if euler.euler_sym(e, m) != euler.euler_sym_series(e, m):
                raise RelationFailure(f"symmetric power Euler number differs at eX={e}, m={m}")
    return {"cases": 13 * 9}


def _chain_euler_details() -> dict:
    vals = [euler.chain_euler(r) for r in range(11)]
    if vals != [r + 1 for r in range(11)]:
        raise RelationFailure(f"chain Euler numbers {vals}")
    return {"values": vals}


def taut_checks(ms, cfg: SuiteConfig, compare: str | None = None) -> list[Check]:
    out = []
    for m in ms:
        if 1 <= m <= 6:
            out.append(Check(f"taut.equivalence.m{m}", "taut", {"m": m}, lambda m=m: _equivalence_details(m)))
    if compare is None:
        out.append(Check("taut.count_trees", "taut", {"k": [1, 7]}, _trees_details))
        for m in range(1, 5):
            for conv in ("literal", "padded"):
                out.append(Check(f"taut.theorem2.{conv}.m{m}", "taut", {"m": m, "convention": conv}, lambda m=m, c=conv: _theorem2_details(m, c)))
    else:
        for m in ms:
            out.append(Check(f"taut.theorem2.{compare}.m{m}", "taut", {"m": m, "convention": compare}, lambda m=m: _theorem2_details(m, compare)))
    return out


def _equivalence_details(m: int) -> dict:
    lehn = tautological.lehn_expansion(m)
    geo = tautological.geo_expansion(m)
    part = tautological.partition_formula(m)
    if not lehn == geo == part:
        raise RelationFailure(f"expansions differ at m = {m}")
    if lehn.degrees() != {m}:
        raise RelationFailure("expansion is not homogeneous of degree m")
    return {"m": m, "terms": len(lehn.terms), "expansion": str(lehn)}


def _trees_details() -> dict:
    counts = {}
    for k in range(1, 8):
        c = tautological.count_trees(range(3, 3 + 2 * k, 2))
        if c != factorial(k - 1):
            raise RelationFailure(f"{c} trees on {k} labels")
        counts[k] = c
    return {"counts": counts}


def _theorem2_details(m: int, convention: str) -> dict:
    report = tautological.theorem2_compare(m, convention)
    out = report.to_json()
    out.pop("lhs")
    out.pop("rhs")
    return out


# ---------------------------------------------------------------------------
# running and reporting


def run_checks(checks: list[Check], cfg: SuiteConfig, config_echo: dict) -> Report:
    report = Report(config_echo)
    for check in sorted(checks, key=lambda c: c.id):
        start = time.perf_counter()
        try:
            details, status = check.run(), "pass"
        except BudgetError as exc:
            details, status = {"reason": str(exc)}, "skipped"
        except Exception as exc:  # any other exception is a failed identity or a defect
            details, status = {"error": f"{type(exc).__name__}: {exc}"}, "fail"
        elapsed = round((time.perf_counter() - start) * 1000, 1) if cfg.timings else None
        report.checks.append(CheckResult(check.id, check.module, check.params, status, details, elapsed))
    return report


def build_suite(cfg: SuiteConfig) -> list[Check]:
    ms = range(1, cfg.m_max + 1)
    checks: list[Check] = []
    if "punctual" in cfg.modules:
        checks += punctual_checks(ms, cfg)
    if "charts" in cfg.modules:
        checks += chart_checks(ms, cfg)
    if "vdm" in cfg.modules:
        checks += vdm_checks(ms, cfg)
    if "euler" in cfg.modules:
        checks += euler_checks(cfg)
    if "taut" in cfg.modules:
        checks += taut_checks(range(1, max(cfg.m_max, 6) + 1), cfg)
    return checks


def run_suite(cfg: SuiteConfig) -> Report:
    return run_checks(build_suite(cfg), cfg, _echo(cfg))


def _echo(cfg: SuiteConfig, **extra) -> dict:
    out = {
        "m_max": cfg.m_max,
        "seed": cfg.seed,
        "spec_count": cfg.spec_count,
        "budget": cfg.budget,
        "modules": list(cfg.modules),
    }
    out.update(extra)
    return out


def emit_report(report: Report, fmt: str = "text") -> str:
    if fmt == "json":
        return json.dumps(report.to_dict(), indent=2, sort_keys=True, default=str) + "\n"
    lines = []
    width = max((len(c.id) for c in report.checks), default=10)
    for c in report.checks:
        note = ""
        if c.status != "pass":
            note = c.details.get("error") or c.details.get("reason", "")
        timing = f" {c.elapsed_ms:>9.1f} ms" if c.elapsed_ms is not None else ""
        lines.append(f"{c.id:<{width}}  {c.status.upper():<7}{timing}  {note}".rstrip())
    s = report.summary
    lines.append(f"pass {s['pass']}  fail {s['fail']}  skipped {s['skipped']}")
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# argument parsing


def _parse_range(text: str) -> range | tuple[int, ...]:
    m = re.fullmatch(r"(-?\d+)\.\.(-?\d+)", text)
    if m:
        lo, hi = int(m.group(1)), int(m.group(2))
        if hi < lo:
            raise argparse.ArgumentTypeError(f"empty range {text}")
        return range(lo, hi + 1)
    try:
        return tuple(int(v) for v in text.split("|"))
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad range {text!r}") from None


def parse_sweep(text: str) -> dict:
    """``g=0..8,m=1..10,sigma=0|1|2|5`` -> {name: values}."""
    out = {}
    for part in filter(None, text.split(",")):
        if "=" not in part:
            raise argparse.ArgumentTypeError(f"sweep item {part!r} needs name=range")
        key, val = part.split("=", 1)
        key = key.strip()
        if key not in ("g", "gB", "m", "sigma"):
            raise argparse.ArgumentTypeError(f"unknown sweep variable {key!r}")
        out[key] = _parse_range(val.strip())
    return out


def _positive(text: str) -> int:
    v = int(text)
    if v < 1:
        raise argparse.ArgumentTypeError("must be at least 1")
    return v


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--spec-count", type=int, default=20)
    common.add_argument("--budget", type=_positive, default=DEFAULT_BUDGET)
    common.add_argument("--json", action="store_true", help="emit the JSON report")
    common.add_argument("--timings", action="store_true", help="record elapsed milliseconds (breaks byte-identical output)")

    parser = argparse.ArgumentParser(prog="nodalhilb", description="Exact verification suite for nodal Hilbert scheme models.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("verify-all", parents=[common], help="run every module's checks")
    p.add_argument("--m-max", type=_positive, default=4)
    p.add_argument("--module", action="append", choices=MODULES, help="restrict to a module (repeatable)")

    for name in ("punctual", "charts", "vdm"):
        p = sub.add_parser(name, parents=[common], help=f"{name} checks for a single m")
        p.add_argument("--m", type=_positive, required=True)

    p = sub.add_parser("euler", parents=[common], help="Euler number formulas")
    p.add_argument("--sweep", type=parse_sweep, default=None, help="e.g. g=0..8,m=1..10")

    p = sub.add_parser("taut", parents=[common], help="tautological class expansions")
    p.add_argument("--m", type=_positive, required=True)
    p.add_argument("--compare-theorem2", choices=("literal", "padded"), default=None)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    fmt = "json" if args.json else "text"
    try:
        if args.command == "verify-all":
            cfg = SuiteConfig(args.m_max, args.seed, args.spec_count, args.budget, fmt, tuple(args.module or MODULES), args.timings)
            report = run_suite(cfg)
        else:
            m = getattr(args, "m", None)
            cfg = SuiteConfig(m or 1, args.seed, args.spec_count, args.budget, fmt, (args.command,), args.timings)
            if args.command == "punctual":
                checks = punctual_checks([m], cfg)
            elif args.command == "charts":
                checks = chart_checks([m], cfg)
            elif args.command == "vdm":
                if not 2 <= m <= 5:
                    parser.error("vdm needs 2 <= --m <= 5")
                checks = vdm_checks([m], cfg)
            elif args.command == "euler":
                checks = euler_checks(cfg, args.sweep)
                if args.sweep is not None:
                    checks = checks[:1]
            else:
                checks = taut_checks([m], cfg, args.compare_theorem2)
            extra = {"command": args.command}
            if m is not None:
                extra["m"] = m
            if getattr(args, "sweep", None) is not None:
                extra["sweep"] = {k: list(v) for k, v in args.sweep.items()}
            if getattr(args, "compare_theorem2", None):
                extra["compare_theorem2"] = args.compare_theorem2
            report = run_checks(checks, cfg, _echo(cfg, **extra))
    except (ValueError, NodalHilbError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    sys.stdout.write(emit_report(report, fmt))
    return 0 if report.ok else 1


if __name__ == "__main__":
    sys.exit(main())
