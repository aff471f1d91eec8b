"""Command-line front end.

    supercech --problem FILE --command NAME [--q N] [--bound N]
              [--seed N] [--trials N] [--format text|machine] [--out FILE]

Commands: check-cocycle, r4, r6, propp, extend, equiv, hdims, suite.
Exit codes: 0 = checks pass / construction found, 1 = definitive
negative, 2 = undecided within bound, 3 = usage/input error,
4 = internal error.  Reports are deterministic: the same problem and
seed produce byte-identical output.
"""

from __future__ import annotations

import argparse
import json
import sys

from .cech import CechError, d1, d2, exp_cochain, nonabelian_cocycle
from .obstruction import (
    LineBundleSpec,
    R2q,
    equiv_solve,
    extend,
    h_dims_p1,
    prop_p_verify,
    r4_closed,
    r6_closed,
)
from .parsing import ParseError, Problem, parse_problem
from .suite import run_suite

COMMANDS = ("check-cocycle", "r4", "r6", "propp", "extend", "equiv", "hdims", "suite")

EXIT_OK = 0
EXIT_NEGATIVE = 1
EXIT_UNDECIDED = 2
EXIT_USAGE = 3
EXIT_INTERNAL = 4


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="supercech",
        description="Exact Cech calculus for nilpotent derivation cochains",
    )
    p.add_argument("--problem", required=True, help="problem file")
    p.add_argument("--command", required=True, choices=COMMANDS)
    p.add_argument("--q", type=int, help="degree parameter (overrides task.q)")
    p.add_argument("--bound", type=int, help="solver bound (overrides task.bound)")
    p.add_argument("--seed", type=int, help="suite seed (overrides task.seed)")
    p.add_argument("--trials", type=int, help="suite trials (overrides task.trials)")
    p.add_argument("--format", choices=("text", "machine"), default="text")
    p.add_argument("--out", help="write the report here instead of stdout")
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        with open(args.problem, encoding="utf-8") as fh:
            problem = parse_problem(fh.read())
    except OSError as exc:
        print(f"supercech: cannot read problem: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ParseError as exc:
        print(f"supercech: {args.problem}: {exc}", file=sys.stderr)
        return EXIT_USAGE

    task = dict(problem.task)
    for key in ("q", "bound", "seed", "trials"):
        val = getattr(args, key)
        if val is not None:
            task[key] = val

    try:
        report, code = run_command(args.command, problem, task)
    except ParseError as exc:
        print(f"supercech: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except CechError as exc:
        print(f"supercech: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except Exception as exc:  # pragma: no cover - internal failures
        print(f"supercech: internal error: {exc}", file=sys.stderr)
        return EXIT_INTERNAL

    report = {"command": args.command, "problem": args.problem, **report,
              "exit_code": code}
    text = render_report(report, args.format)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return code


def render_report(report: dict, fmt: str) -> str:
    if fmt == "machine":
        return json.dumps(report, sort_keys=True, indent=2) + "\n"
    lines = [f"supercech {report['command']} on {report['problem']}"]
    lines.extend(_render_items(report, indent="  ", skip={"command", "problem"}))
    return "\n".join(lines) + "\n"


def _render_items(obj, indent: str, skip=frozenset()):
    lines = []
    for key in sorted(obj):
        if key in skip:
            continue
        val = obj[key]
        if isinstance(val, dict):
            if val:
                lines.append(f"{indent}{key}:")
                lines.extend(_render_items(val, indent + "  "))
        elif isinstance(val, list):
            if not val:
                continue
            lines.append(f"{indent}{key}:")
            for item in val:
                if isinstance(item, dict):
                    lines.extend(_render_items(item, indent + "  "))
                elif (
                    isinstance(item, (list, tuple))
                    and len(item) == 2
                    and isinstance(item[0], str)
                ):
                    lines.append(f"{indent}  {item[0]}: {item[1]}")
                else:
                    lines.append(f"{indent}  {item}")
        else:
            lines.append(f"{indent}{key}: {val}")
    return lines


def run_command(command: str, problem: Problem, task: dict):
    if command == "check-cocycle":
        return cmd_check_cocycle(problem)
    if command == "r4":
        return cmd_r4(problem)
    if command == "r6":
        return cmd_r6(problem)
    if command == "propp":
        return cmd_propp(problem)
    if command == "extend":
        return cmd_extend(problem, task)
    if command == "equiv":
        return cmd_equiv(problem, task)
    if command == "hdims":
        return cmd_hdims(problem)
    if command == "suite":
        return cmd_suite(task)
    raise ParseError(f"unknown command {command!r}")


def _require(problem: Problem, name: str):
    if name not in problem.cochains1:
        raise ParseError(f"command needs a 1-cochain named {name!r} in the problem file")
    return problem.cochains1[name]


def cmd_check_cocycle(problem: Problem):
    results = {}
    ok = True
    for name in sorted(problem.cochains1):
        u = problem.cochains1[name]
        abelian = d1(u).is_zero()
        nonab = nonabelian_cocycle(exp_cochain(u))
        results[name] = {"abelian (d1 = 0)": abelian, "non-abelian (nab_d = Id)": nonab}
        ok = ok and abelian and nonab
    if not results:
        raise ParseError("problem file declares no 1-cochains")
    return {"cocycle": results}, EXIT_OK if ok else EXIT_NEGATIVE


def cmd_r4(problem: Problem):
    u2 = _require(problem, "u2").project_shift(2)
    closed = r4_closed(u2)
    definitional = R2q(u2, 2)
    same = closed == definitional
    cob = d2(closed)
    report = {
        "closed form equals definition": same,
        "d(R4) = 0": not cob,
        "values": {str(t): str(op) for t, op in sorted(closed.values.items())},
        "derivation_valued": {
            str(t): op.is_derivation() for t, op in sorted(closed.values.items())
        },
    }
    return {"r4": report}, EXIT_OK if same and not cob else EXIT_NEGATIVE


def cmd_r6(problem: Problem):
    u2 = _require(problem, "u2").project_shift(2)
    u4 = problem.cochain1_or_zero("u4").project_shift(4)
    closed = r6_closed(u2, u4)
    definitional = R2q(u2 + u4, 3)
    same = closed == definitional
    report = {
        "closed form equals definition": same,
        "values": {str(t): str(op) for t, op in sorted(closed.values.items())},
        "derivation_valued": {
            str(t): op.is_derivation() for t, op in sorted(closed.values.items())
        },
    }
    return {"r6": report}, EXIT_OK if same else EXIT_NEGATIVE


def cmd_propp(problem: Problem):
    if "u" in problem.cochains1:
        u = problem.cochains1["u"]
    else:
        u = _require(problem, "u2")
        for name in ("u4", "u6"):
            u = u + problem.cochain1_or_zero(name)
    rep = prop_p_verify(u)
    return {"report": rep.to_dict()}, EXIT_OK if rep.verdict == "pass" else EXIT_NEGATIVE


_VERDICT_CODE = {
    "extends": EXIT_OK,
    "equivalent": EXIT_OK,
    "pass": EXIT_OK,
    "rejected": EXIT_NEGATIVE,
    "distinct": EXIT_NEGATIVE,
    "fail": EXIT_NEGATIVE,
    "undecided": EXIT_UNDECIDED,
}


def cmd_extend(problem: Problem, task: dict):
    u2 = _require(problem, "u2")
    u, rep = extend(u2, task["bound"])
    out = {"report": rep.to_dict()}
    if u is not None:
        out["u"] = {str(k): str(op) for k, op in sorted(u.values.items())}
    return out, _VERDICT_CODE[rep.verdict]


def cmd_equiv(problem: Problem, task: dict):
    u = _require(problem, "u")
    uprime = problem.cochain1_or_zero("uprime")
    v, rep = equiv_solve(u, uprime, task["bound"])
    out = {"report": rep.to_dict()}
    if v is not None:
        out["v"] = {str(i): str(op) for i, op in sorted(v.values.items())}
    return out, _VERDICT_CODE[rep.verdict]


def cmd_hdims(problem: Problem):
    if not problem.cover.is_p1:
        raise ParseError("hdims needs a p1 cover")
    spec = LineBundleSpec(problem.cover.degrees)
    dims = {}
    for k in (1, 2, 3):
        h0, h1 = h_dims_p1(spec, k)
        dims[f"Der_{2 * k}"] = {"h0": h0, "h1": h1}
    h0_total = sum(d["h0"] for d in dims.values())
    return (
        {"degrees": list(problem.cover.degrees), "dims": dims,
         "H0(Der^(2)) = 0": h0_total == 0},
        EXIT_OK,
    )


def cmd_suite(task: dict):
    rep = run_suite(task["seed"], task["trials"])
    return {"suite": rep}, EXIT_OK if rep["all_pass"] else EXIT_NEGATIVE


if __name__ == "__main__":
    sys.exit(main())
