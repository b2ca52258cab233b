"""Command line interface.

Exit codes: 0 success, 1 a definition was rejected, 2 malformed input,
3 an internal invariant failed.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from concurrent.futures import ProcessPoolExecutor

from . import calculus as pc
from .analysis import analyze
from .derivation import CheckError, check_derivation, erase
from .dynamics import NoWitness
from .measures import measure
from .program import load, resolve
from .syntax import DerivationDecl, ProcessDecl, SstSyntaxError

__all__ = ["run_cli", "main"]

EXIT_OK, EXIT_REJECTED, EXIT_MALFORMED, EXIT_INTERNAL = 0, 1, 2, 3
DEFAULT_BUDGET = 10_000


class _Malformed(Exception):
    pass


def _budget(value):
    if value is not None:
        return value
    raw = os.environ.get("SST_BUDGET")
    if raw is None:
        return DEFAULT_BUDGET
    try:
        return int(raw, 10)
    except ValueError:
        raise _Malformed(f"SST_BUDGET must be a decimal number, got {raw!r}") from None


def _mode_label(mode):
    return "dill (reference mode)" if mode == "dill" else mode


def _diag_dict(d):
    out = {"kind": d.kind, "channel": d.channel, "position": list(d.position), "explanation": d.explanation}
    if d.count is not None:
        out["count"] = d.count
    return out


def _resolved(src, name, mode):
    try:
        return resolve(src, name, mode)
    except KeyError as err:
        raise _Malformed(f"no definition {err.args[0]!r}") from None


def _check_one(path, name, mode):
    r = resolve(load(path), name, mode)
    return {
        "name": r.name,
        "mode": r.mode,
        "ok": r.ok,
        "judgment": str(r.judgment) if r.judgment else None,
        "diagnostics": [_diag_dict(d) for d in r.diagnostics],
    }


def cmd_check(args, out):
    src = load(args.file)
    names = [d.name for d in src.definitions()]
    if args.jobs > 1 and len(names) > 1:
        with ProcessPoolExecutor(max_workers=args.jobs) as pool:
            results = list(pool.map(_check_one, [args.file] * len(names), names, [args.mode] * len(names)))
    else:
        results = [_check_one(args.file, n, args.mode) for n in names]
    if args.json:
        out.append(json.dumps({"file": args.file, "definitions": results}, indent=2))
    else:
        for r in results:
            label = _mode_label(r["mode"])
            if r["ok"]:
                out.append(f"{r['name']}: ok [{label}]  {r['judgment']}")
            else:
                out.append(f"{r['name']}: rejected [{label}]")
                for d in r["diagnostics"]:
                    count = f" (count {d['count']})" if "count" in d else ""
                    out.append(f"  {d['kind']} on {d['channel']} at {d['position']}{count}: {d['explanation']}")
    return EXIT_OK if all(r["ok"] for r in results) else EXIT_REJECTED


def _derivation(args, out):
    src = load(args.file)
    r = _resolved(src, args.defn, args.mode)
    if not r.ok:
        if args.json:
            out.append(json.dumps({"name": r.name, "mode": r.mode, "diagnostics": [_diag_dict(d) for d in r.diagnostics]}, indent=2))
        else:
            out.append(f"{r.name}: rejected [{_mode_label(r.mode)}]")
            out.extend(f"  {d}" for d in r.diagnostics)
        return None
    return r


def cmd_measures(args, out):
    r = _derivation(args, out)
    if r is None:
        return EXIT_REJECTED
    rep = measure(r.derivation, r.mode)
    if args.json:
        out.append(json.dumps({"name": r.name, "mode": r.mode, **rep.as_dict()}, indent=2))
    else:
        out.append(f"{r.name} [{_mode_label(r.mode)}]")
        for k, v in rep.as_dict().items():
            out.append(f"  {k}: {v}")
    return EXIT_OK


def cmd_analyze(args, out):
    r = _derivation(args, out)
    if r is None:
        return EXIT_REJECTED
    rep = analyze(r.derivation, _budget(args.budget), r.mode)
    if args.json:
        out.append(json.dumps(rep.as_dict(), indent=2))
    else:
        out.append(f"{r.name} [{_mode_label(r.mode)}]")
        for k, v in rep.as_dict().items():
            if k == "withinBounds" and v is None:
                v = "no verdict (reference mode)"
            out.append(f"  {k}: {v}")
    return EXIT_OK


def _process(src, args):
    """The process of a definition; reduction does not need it to be typable."""
    try:
        decl = src.named(args.defn)
    except KeyError:
        raise _Malformed(f"no definition {args.defn!r}") from None
    if isinstance(decl, ProcessDecl):
        return decl.process
    if isinstance(decl, DerivationDecl):
        return erase(decl.derivation)
    r = _resolved(src, args.defn, args.mode)
    return erase(r.derivation) if r.ok else None


def cmd_reduce(args, out):
    src = load(args.file)
    p = _process(src, args)
    if p is None:
        out.append(f"{args.defn}: composition rejected, nothing to reduce")
        return EXIT_REJECTED
    budget = _budget(args.budget)
    trace = []
    if args.trace:
        q = pc.canonical_form(p)
        sizes, steps = [], 0
        rs = pc.find_redexes(q)
        while rs and steps < budget:
            q = pc.reduce_step(q, rs[0])
            steps += 1
            sizes.append(pc.size(q))
            trace.append({"step": steps, "kind": rs[0].kind, "channel": rs[0].channel, "size": sizes[-1], "process": str(q)})
            rs = pc.find_redexes(q)
        res = pc.TraceResult(steps, sizes, pc.garbage_collect(q), bool(rs))
    else:
        res = pc.reduce_trace(p, budget)
    report = {
        "name": args.defn,
        "steps": res.steps,
        "initialSize": pc.size(p),
        "maxSize": max([pc.size(p), *res.sizes]),
        "finalSize": pc.size(res.final),
        "exhausted": res.exhausted,
        "final": str(res.final),
    }
    if args.trace:
        report["trace"] = trace
    if args.json:
        out.append(json.dumps(report, indent=2))
    else:
        for t in trace:
            out.append(f"  {t['step']:>5} {t['kind']:<16} on {t['channel']:<8} size {t['size']:<6} {t['process']}")
        for k, v in report.items():
            if k != "trace":
                out.append(f"{k}: {v}")
    return EXIT_OK


def cmd_kernel(args, out):
    src = load(args.file)
    results = []
    for d in src.declarations:
        if not isinstance(d, DerivationDecl):
            continue
        mode = args.mode or d.mode
        try:
            j = check_derivation(d.derivation, mode)
            results.append({"name": d.name, "mode": mode, "ok": True, "judgment": str(j)})
        except CheckError as err:
            results.append({
                "name": d.name, "mode": mode, "ok": False, "rule": err.rule,
                "reason": err.reason, "location": list(err.location), "message": str(err),
            })
    if args.json:
        out.append(json.dumps({"file": args.file, "derivations": results}, indent=2))
    else:
        for r in results:
            if r["ok"]:
                out.append(f"{r['name']}: ok [{_mode_label(r['mode'])}]  {r['judgment']}")
            else:
                out.append(f"{r['name']}: rejected by the kernel: {r['message']}")
    return EXIT_OK if all(r["ok"] for r in results) else EXIT_REJECTED


def _parser():
    ap = argparse.ArgumentParser(prog="softsession", description="Soft session types: checker, measures and bound analyzer.")
    sub = ap.add_subparsers(dest="command", required=True)

    def common(p, defn=False, budget=False):
        p.add_argument("file")
        p.add_argument("--mode", choices=["dsll", "dill"], default=None, help="override the mode written in the file")
        p.add_argument("--json", action="store_true", help="emit a machine-readable report")
        if defn:
            p.add_argument("--def", dest="defn", required=True, metavar="NAME")
        if budget:
            p.add_argument("--budget", type=int, default=None, help="step budget (default: $SST_BUDGET or 10000)")
        return p

    p = common(sub.add_parser("check", help="elaborate every definition"))
    p.add_argument("--jobs", type=int, default=1, help="check definitions in parallel")
    p.set_defaults(func=cmd_check)
    common(sub.add_parser("measures", help="print the measures of a definition"), defn=True).set_defaults(func=cmd_measures)
    p = common(sub.add_parser("reduce", help="reduce the process of a definition"), defn=True, budget=True)
    p.add_argument("--trace", action="store_true", help="show every step (leftmost strategy)")
    p.set_defaults(func=cmd_reduce)
    common(sub.add_parser("analyze", help="compare observed reductions with the bounds"), defn=True, budget=True).set_defaults(func=cmd_analyze)
    common(sub.add_parser("kernel", help="validate derivation literals")).set_defaults(func=cmd_kernel)
    return ap


def run_cli(argv=None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    try:
        args = _parser().parse_args(argv)
    except SystemExit as e:
        return EXIT_OK if e.code == 0 else EXIT_MALFORMED
    out = []
    try:
        code = args.func(args, out)
    except SstSyntaxError as err:
        print(f"{args.file}: syntax error: {err}", file=stderr)
        return EXIT_MALFORMED
    except (_Malformed, OSError) as err:
        print(f"{args.file}: {err}", file=stderr)
        return EXIT_MALFORMED
    except (NoWitness, AssertionError) as err:
        print(f"internal invariant failed: {err}", file=stderr)
        return EXIT_INTERNAL
    print("\n".join(out), file=stdout)
    return code


def main():
    sys.exit(run_cli())
