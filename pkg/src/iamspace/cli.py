"""Command-line front end: ``iamspace {run,type,weigh,tiam,verify,bench}``.

JSON is the canonical output; text is a rendering of it.  Exit codes: 0 on
success, 1 when a verification fails, 2 on parse errors and 3 when fuel
runs out (including terms without a weak head normal form).
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Callable, Iterable

from .corpus import fix_schema, gen_theta, gen_tn, random_corpus, tn_derivation
from .derivation import RuleViolation, check, derivation_to_json
from .expansion import NotNormalizing, infer, infer_with_trace
from .extraction import verify_bisimulation
from .iam import (
    FINAL, code_x, iam_init, iam_run, iam_transition, lemma1_violations, run_space_fast, state_space,
)
from .measure import SpaceMeasure, smax
from .terms import DEFAULT_FUEL, Code, FreeVariableError, FuelExhausted, ParseError, Term, parse, pretty, whnf
from .tiam import Tiam
from .ttypes import show, spine_height, tree_height
from .weights import bsize, verify_exact_bound, weigh

EXIT_OK, EXIT_FAIL, EXIT_PARSE, EXIT_FUEL = 0, 1, 2, 3


@dataclass(frozen=True)
class Config:
    fuel: int = DEFAULT_FUEL
    x: int | None = None
    json: bool = False
    trace: bool = False
    seed: int = 0

    def __post_init__(self):
        if self.fuel <= 0:
            raise ValueError("--fuel must be positive")
        if self.x is not None and self.x < 1:
            raise ValueError("--x must be at least 1")


class _Exit(Exception):
    def __init__(self, code: int, message: str):
        super().__init__(message)
        self.code = code


def _measure(m: SpaceMeasure, prefix: str) -> dict:
    return {f"{prefix}_units": m.units, f"{prefix}_x": m.x_count, prefix: str(m)}


def _emit(cfg: Config, obj: dict, text: Iterable[str] | None = None) -> None:
    if cfg.json or text is None:
        print(json.dumps(obj))
    else:
        for line in text:
            print(line)


def _read_term(ns: argparse.Namespace) -> Term:
    if ns.file:
        with open(ns.file, encoding="utf-8") as fh:
            src = fh.read()
    elif ns.term is not None:
        src = ns.term
    else:
        raise _Exit(EXIT_PARSE, "no term given (positional literal or --file)")
    try:
        return parse(src)
    except (ParseError, FreeVariableError) as e:
        raise _Exit(EXIT_PARSE, f"parse error: {e}") from None


def _infer(t: Term, cfg: Config):
    try:
        return infer(t, cfg.fuel)
    except NotNormalizing as e:
        raise _Exit(EXIT_FUEL, str(e)) from None


# ---------------------------------------------------------------------------
# run


def cmd_run(t: Term, cfg: Config) -> int:
    code = Code.of(t)
    xv = code_x(code, cfg.x)
    if cfg.trace:
        s = iam_init(code)
        print(json.dumps({"rule": None, **s.to_json(code, 0, xv)}))
        steps = 0
        final = False
        best = SpaceMeasure(0, 0)
        while True:
            r = iam_transition(code, s)
            if r is FINAL:
                final = True
                break
            if steps >= cfg.fuel:
                break
            rule, s = r
            steps += 1
            print(json.dumps({"rule": rule, **s.to_json(code, steps, xv)}))
            best = smax((best, state_space(s)), xv)
        space = best
    else:
        steps, final, space = run_space_fast(code, cfg.fuel, xv)
    report = {"term": pretty(t), "x": xv, "steps": steps,
              "outcome": "final" if final else "fuel-exhausted", **_measure(space, "space")}
    _emit(cfg, report, [f"steps={steps}", f"outcome={report['outcome']}",
                        f"space={space} ({space.eval(xv)} at X={xv})"])
    return EXIT_OK if final else EXIT_FUEL


# ---------------------------------------------------------------------------
# type / weigh


def cmd_type(t: Term, cfg: Config) -> int:
    d = _infer(t, cfg)
    check(d)
    out = derivation_to_json(d)
    _emit(cfg, out, [json.dumps(out, indent=2)])
    return EXIT_OK


def cmd_weigh(t: Term, cfg: Config) -> int:
    d = _infer(t, cfg)
    w = weigh(d, cfg.x)
    rows = [{"path": ".".join(map(str, p)), "rule": d.node_at(p).rule,
             "type": show(d.node_at(p).type), **_measure(m, "weight")}
            for p, m in sorted(w.by_path.items())]
    out = {"term": pretty(t), "x": w.x, "size": d.size(), **_measure(w.root, "weight"),
           "judgments": rows}
    text = [f"weight={w.root} ({w.root.eval(w.x)} at X={w.x})", f"size={d.size()}"]
    text += [f"  {r['path'] or '.'}\t{r['rule']}\t{r['type']}\t{r['weight']}" for r in rows]
    _emit(cfg, out, text)
    return EXIT_OK


# ---------------------------------------------------------------------------
# tiam


def cmd_tiam(t: Term, cfg: Config) -> int:
    d = _infer(t, cfg)
    m = Tiam(d)
    run = m.run()
    xv = code_x(m.code, cfg.x)
    if cfg.trace:
        for k, s in enumerate(run.states):
            b = bsize(m, s)
            print(json.dumps({**m.state_json(s, k), "rule": run.rules[k - 1] if k else None,
                              "bsize_units": b.units, "bsize_x": b.x_count}))
    census = m.census_json(run.census)
    ones = all(c == 1 for c in run.census.values())
    out = {"term": pretty(t), "x": xv, "states": len(run.states), "outcome": run.outcome,
           "census_all_ones": ones, "census": census}
    _emit(cfg, out, [f"states={len(run.states)}", f"outcome={run.outcome}", f"census_all_ones={ones}"])
    return EXIT_OK if run.final and ones else EXIT_FAIL


# ---------------------------------------------------------------------------
# verify


def verify_term(t: Term, fuel: int = DEFAULT_FUEL, x: int | None = None) -> dict:
    """Full pipeline on one term; ``ok`` is the conjunction of all checks."""
    try:
        d, trace = infer_with_trace(t, fuel)
    except NotNormalizing as e:
        return {"term": pretty(t), "ok": False, "normalizes": False, "error": str(e)}
    code = Code.of(t)
    xv = code_x(code, x)
    checks: dict[str, bool] = {}
    steps, final, _ = run_space_fast(code, fuel, xv)
    if not final:
        # the λIAM may need exponentially more transitions than β-steps; the
        # derivation's types are then too large to index, so stop here
        return {"term": pretty(t), "x": xv, "normalizes": True, "beta_steps": trace.step_count,
                "iam_steps": steps, "checks": {"iam_final": False}, "ok": False,
                "error": f"λIAM not final within {fuel} transitions"}
    try:
        check(d)
        checks["derivation_checks"] = True
    except RuleViolation:
        checks["derivation_checks"] = False
    w = weigh(d, xv).root
    run = iam_run(code, fuel, xv)
    checks["iam_final"] = run.final
    checks["lemma1"] = all(not lemma1_violations(code, s) for s in run.states)
    tr = Tiam(d, code=code).run()
    checks["tiam_final"] = tr.final
    checks["census_all_ones"] = all(c == 1 for c in tr.census.values())
    checks["same_length"] = tr.steps == run.steps
    bis = verify_bisimulation(t, d, fuel)
    checks["bisimulation"] = bis.ok
    bound = verify_exact_bound(t, fuel, xv, d)
    checks["exact_bound"] = bound.ok
    return {"term": pretty(t), "x": xv, "normalizes": True, "beta_steps": trace.step_count,
            "iam_steps": run.steps, "tiam_states": len(tr.states), "derivation_size": d.size(),
            **_measure(w, "weight"), **_measure(run.space, "space"),
            "checks": checks, "bisimulation": bis.to_json(), "exact_bound": bound.to_json(),
            "ok": all(checks.values())}


def verify_tn(n: int, fuel: int = DEFAULT_FUEL, x: int | None = None) -> dict:
    """t_n at ⋆ through the pipeline, plus its arrow-type derivation and β count."""
    t = gen_tn(n)
    base = verify_term(t, fuel, x)
    xv = base.get("x", code_x(Code.of(t), x))
    d = tn_derivation(n)
    ty = d.root.type
    checks = dict(base.get("checks", {}))
    try:
        check(d)
        checks["arrow_derivation_checks"] = True
    except RuleViolation:
        checks["arrow_derivation_checks"] = False
    w = weigh(d, xv, atom=ty).root
    checks["arrow_weight_2nX"] = w == SpaceMeasure(0, 2 * n)
    gen = Tiam(d, atom=ty)
    grun = gen.run()
    peak = smax((bsize(gen, s) for s in grun.states), xv)
    checks["generalized_run_peak_equals_weight"] = grun.final and peak.eval(xv) == w.eval(xv)
    beta = base.get("beta_steps")
    checks["beta_formula"] = beta == 2 ** (n + 1) - 2
    return {**base, "family": f"tn:{n}", "arrow_type": show(ty), **_measure(w, "arrow_weight"),
            "checks": checks, "ok": all(checks.values())}


def verify_theta(n: int, fuel: int = DEFAULT_FUEL, x: int | None = None) -> dict:
    """The fixed-point schema at level n: checks, weight lower bound, sparse tree."""
    fs = fix_schema(n)
    xv = code_x(Code.of(gen_theta()), x)
    checks: dict[str, bool] = {}
    for name, d in (("unfolded_checks", fs.derivation), ("theta_checks", fs.theta)):
        try:
            check(d)
            checks[name] = True
        except RuleViolation:
            checks[name] = False
    w = weigh(fs.theta, xv).root
    checks["weight_lower_bound"] = w.eval(xv) >= (2 * n + 1) * xv
    checks["tree_height"] = spine_height(fs.T) == n + 1
    return {"family": f"theta:{n}", "x": xv, "F": show(fs.F), "T": show(fs.T),
            **_measure(w, "weight"), "tree_height": spine_height(fs.T),
            "tree_nesting": tree_height(fs.T), "checks": checks, "ok": all(checks.values())}


def _verify_one(args: tuple) -> dict:
    t, fuel, x = args
    return verify_term(t, fuel, x)


def cmd_verify(ns: argparse.Namespace, cfg: Config) -> int:
    if ns.family:
        fam, _, arg = ns.family.partition(":")
        try:
            n = int(arg)
        except ValueError:
            raise _Exit(EXIT_PARSE, f"bad family {ns.family!r}; use tn:N or theta:N") from None
        if fam == "tn":
            rep = verify_tn(n, cfg.fuel, cfg.x)
        elif fam == "theta":
            rep = verify_theta(n, cfg.fuel, cfg.x)
        else:
            raise _Exit(EXIT_PARSE, f"unknown family {fam!r}")
        _emit(cfg, rep, _verify_text(rep))
        return EXIT_OK if rep["ok"] else EXIT_FAIL
    if ns.random:
        count, seed = ns.random
        terms = random_corpus(count, seed, fuel=cfg.fuel)
        work = [(t, cfg.fuel, cfg.x) for t in terms]
        if ns.jobs > 1:
            with ProcessPoolExecutor(ns.jobs) as pool:
                reports = list(pool.map(_verify_one, work, chunksize=8))
        else:
            reports = [_verify_one(w) for w in work]
        failed = [r for r in reports if not r["ok"]]
        per_check: dict[str, int] = {}
        for r in reports:
            for k, v in r.get("checks", {}).items():
                per_check[k] = per_check.get(k, 0) + (0 if v else 1)
        out = {"count": len(reports), "seed": seed, "passed": len(reports) - len(failed),
               "failed": len(failed), "failures_by_check": per_check,
               "failed_terms": [r["term"] for r in failed]}
        _emit(cfg, out, [f"count={out['count']} passed={out['passed']} failed={out['failed']}"]
              + [f"  {k}: {v} failed" for k, v in per_check.items() if v])
        return EXIT_OK if not failed else EXIT_FAIL
    t = _read_term(ns)
    rep = verify_term(t, cfg.fuel, cfg.x)
    if not rep["normalizes"]:
        raise _Exit(EXIT_FUEL, rep["error"])
    _emit(cfg, rep, _verify_text(rep))
    return EXIT_OK if rep["ok"] else EXIT_FAIL


def _verify_text(rep: dict) -> list[str]:
    lines = [f"{k}={rep[k]}" for k in ("term", "family", "x", "beta_steps", "iam_steps",
                                          "weight", "space", "arrow_weight", "F", "T",
                                          "tree_height") if k in rep]
    lines += [f"  {'PASS' if v else 'FAIL'} {k}" for k, v in rep["checks"].items()]
    lines.append("ok" if rep["ok"] else "FAILED")
    return lines


# ---------------------------------------------------------------------------
# bench


def bench_rows(max_n: int, x: int | None = None, fuel: int = 10**9) -> list[tuple[int, int, int, int]]:
    rows = []
    for n in range(1, max_n + 1):
        t = gen_tn(n)
        beta = whnf(t, fuel).step_count
        _, final, space = run_space_fast(t, fuel, x)
        if not final:
            raise FuelExhausted(t, ())
        rows.append((n, beta, space.units, space.x_count))
    return rows


def cmd_bench(ns: argparse.Namespace, cfg: Config) -> int:
    if ns.family != "tn":
        raise _Exit(EXIT_PARSE, f"unknown family {ns.family!r}; only tn is benchmarked")
    w = csv.writer(sys.stdout, lineterminator="\n")
    w.writerow(["n", "beta_steps", "space_units", "space_x"])
    for row in bench_rows(ns.max, cfg.x, max(cfg.fuel, 10**9)):
        w.writerow(row)
    return EXIT_OK


# ---------------------------------------------------------------------------
# entry point


def _global_flags(p: argparse.ArgumentParser, suppress: bool) -> None:
    d = (lambda v: argparse.SUPPRESS) if suppress else (lambda v: v)
    p.add_argument("--fuel", type=int, default=d(DEFAULT_FUEL), help="step budget (default %(default)s)")
    p.add_argument("--x", type=int, default=d(None), help="override the bit length X")
    p.add_argument("--json", action="store_true", default=d(False), help="emit JSON")
    p.add_argument("--trace", action="store_true", default=d(False), help="stream per-state records")
    p.add_argument("--seed", type=int, default=d(0), help="seed for random corpora")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="iamspace", description=__doc__.splitlines()[0])
    _global_flags(ap, suppress=False)
    sub = ap.add_subparsers(dest="cmd", required=True)

    def term_cmd(name: str, help_: str) -> argparse.ArgumentParser:
        p = sub.add_parser(name, help=help_)
        _global_flags(p, suppress=True)
        p.add_argument("term", nargs="?", help="term literal, e.g. '(\\x.x)(\\y.y)'")
        p.add_argument("--file", help="read the term from a file")
        return p

    term_cmd("run", "run the λIAM and report steps and space")
    term_cmd("type", "infer a tree-type derivation and print it as JSON")
    term_cmd("weigh", "weigh the inferred derivation")
    term_cmd("tiam", "run the TIAM over the inferred derivation")
    v = term_cmd("verify", "run every check of the pipeline")
    v.add_argument("--family", help="tn:N or theta:N")
    v.add_argument("--random", nargs=2, type=int, metavar=("COUNT", "SEED"))
    v.add_argument("--jobs", type=int, default=1, help="worker processes for --random")
    b = sub.add_parser("bench", help="CSV sweep over a witness family")
    _global_flags(b, suppress=True)
    b.add_argument("--family", default="tn")
    b.add_argument("--max", type=int, default=10)
    return ap


def main(argv: list[str] | None = None) -> int:
    ap = build_parser()
    ns = ap.parse_args(argv)
    try:
        cfg = Config(ns.fuel, ns.x, ns.json, ns.trace, ns.seed)
    except ValueError as e:
        ap.error(str(e))
    handlers: dict[str, Callable[[Term, Config], int]] = {
        "run": cmd_run, "type": cmd_type, "weigh": cmd_weigh, "tiam": cmd_tiam,
    }
    try:
        if ns.cmd in handlers:
            return handlers[ns.cmd](_read_term(ns), cfg)
        if ns.cmd == "verify":
            return cmd_verify(ns, cfg)
        return cmd_bench(ns, cfg)
    except _Exit as e:
        print(f"iamspace: {e}", file=sys.stderr)
        return e.code
    except FuelExhausted as e:
        print(f"iamspace: {e}", file=sys.stderr)
        return EXIT_FUEL


if __name__ == "__main__":  # pragma: no cover
    raise SystemExit(main())
