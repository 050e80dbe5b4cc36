"""Command-line front end: one subcommand per module, JSON reports by default.

Exit codes: 0 when every check passes, 1 when a check fails, 2 for usage
errors and size-limit refusals. Reports contain no timing unless --timing is
given, so identical invocations print identical bytes.
"""

from __future__ import annotations

import argparse
import json
import random
import sys
import time

from . import beta as bt
from . import brown as br
from . import groupring as gr
from . import johnson_b3 as jb
from . import magnus as mg
from . import reproduce as rp
from . import symplectic as sp
from .errors import DegenerateEnhancement, MCGLevelError
from .z2homology import SpinForm, Z2Class


class UsageError(Exception):
    pass


def _structure(inv) -> list[list[int]]:
    return [[n, m] for n, m in inv.counts()]


def _vector(text: str) -> tuple[int, ...]:
    try:
        return tuple(int(v) for v in text.split(","))
    except ValueError as exc:
        raise UsageError(f"expected comma-separated integers, got {text!r}") from exc


def _load_json(path: str) -> dict:
    try:
        with open(path) as fh:
            return json.load(fh)
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from exc
    except json.JSONDecodeError as exc:
        raise UsageError(f"{path} is not valid JSON: {exc}") from exc


def _need(args, *names):
    missing = [n for n in names if getattr(args, n) is None]
    if missing:
        raise UsageError(f"{args.command} {getattr(args, 'action', '')} needs " + ", ".join("--" + n for n in missing))


# ---------------------------------------------------------------- symp


def cmd_symp(args):
    act = args.action
    if act == "verify-lemma-matrix":
        _need(args, "g", "d")
        if None not in (args.a1, args.b1, args.a2):
            cases = [(args.a1, args.b1, args.a2)]
        else:
            vals = range(-3, 4)
            cases = [(x, y, z) for x in vals for y in vals for z in vals]
        bad = [list(c) for c in cases if not sp.verify_transvection_power(*c, args.d, args.g, literal=args.literal)]
        res = {"cases": len(cases), "literal": args.literal, "failure_count": len(bad), "failures": bad[:10]}
        return res, {"identity": not bad}
    if act == "verify-lantern":
        if args.x and args.y:
            x, y = _vector(args.x), _vector(args.y)
            ok = sp.verify_lantern(x, y)
            return {"x": list(x), "y": list(y), "holds": ok}, {"lantern": ok}
        _need(args, "g")
        rng = random.Random(args.seed)
        n = args.trials or 1000
        bad = sum(1 for _ in range(n) if not sp.verify_lantern(*sp.random_orthogonal_pair(args.g, rng)))
        return {"trials": n, "failures": bad}, {"lantern": bad == 0}
    if act == "abelianization":
        _need(args, "g", "d")
        inv = sp.abelianization_formula(args.g, args.d)
        return {"invariant_factors": _structure(inv), "group": str(inv)}, {}
    # the remaining actions read a matrix
    _need(args, "input", "d")
    a = sp.SympElement.from_json(_load_json(args.input))
    if act == "membership":
        res = {"in_level": sp.in_level(a, args.d)}
        if args.d % 2 == 0:
            res["in_igusa"] = sp.in_igusa(a, args.d)
        return res, {}
    fn = {"m": sp.m_map, "m1": sp.m1_map, "m2": sp.m2_map}[act]
    return {act: list(fn(a, args.d))}, {}


# ---------------------------------------------------------------- brown


def cmd_brown(args):
    _need(args, "input")
    e = br.Enhancement.from_json(_load_json(args.input))
    gs = br.gauss_sum(e)
    try:
        b: int | str = br.brown_invariant(e)
    except DegenerateEnhancement:
        b = "degenerate"
    return {"gauss_sum": gs.tolist(), "brown": b}, {}


# ---------------------------------------------------------------- module


def cmd_module(args):
    _need(args, "g")
    if args.action == "quotient":
        pres = gr.quotient_presentation(args.g, args.closed)
        inv = gr.quotient_structure(args.g, args.closed)
        res = {
            "g": args.g,
            "closed": args.closed,
            "generators": 1 << (2 * args.g),
            "relations": len(pres.rows),
            "invariant_factors": _structure(inv),
            "order_log2": inv.order.bit_length() - 1,
        }
        if args.closed:
            checks = {"order_divides_open": gr.expected_open_structure(args.g).order % inv.order == 0}
        else:
            checks = {"matches_expected": inv == gr.expected_open_structure(args.g)}
        return res, checks
    rng = random.Random(args.seed)
    r = gr.check_recurrence(args.g, args.trials or 500, rng)
    return r, {"recurrence": r["holds"]}


# ---------------------------------------------------------------- beta


def cmd_beta(args):
    _need(args, "g")
    g = args.g
    sigma = SpinForm.parse(args.spin) if args.spin else SpinForm.zero(g)
    if sigma.genus != g:
        raise UsageError(f"--spin has genus {sigma.genus}, --g is {g}")
    if args.action == "eval":
        if not args.cls:
            raise UsageError("beta eval needs --class")
        c = Z2Class.parse(args.cls)
        if c.genus != g:
            raise UsageError(f"--class has genus {c.genus}, --g is {g}")
        v = bt.beta_generator(sigma, c)
        values = {Z2Class(x, g).format(): int(v[x]) for x in range(1 << (2 * g))}
        return {"spin": sigma.format(), "class": c.format(), "values": values}, {}
    if args.action == "image":
        got = bt.image_of_psi_beta(g, sigma)
        want = bt.expected_psi_image(g)
        lit = bt.psi_difference_image_check(g, sigma)
        res = {
            "invariant_factors": _structure(got),
            "expected": _structure(want),
            "difference_coordinates": {"contained": lit["contained"], "equal": lit["equal"]},
        }
        return res, {"matches_expected": got == want, "literal_in_differences": lit["equal"]}
    rng = random.Random(args.seed)
    r = bt.kernel_contains_L(sigma, trials=args.trials or 50, rng=rng)
    return r, {"L_in_kernel": r["holds"]}


# ---------------------------------------------------------------- b3


def cmd_b3(args):
    _need(args, "g")
    g = args.g
    res = {"g": g, "dimension": jb.b3_dimension(g), "closed_dimension": jb.closed_b3_dimension(g)}
    checks = {}
    if g >= 2:
        ci = gr.counting_identity(g)
        res["counting_identity"] = {"lhs_log2": ci["lhs"].bit_length() - 1, "rhs_log2": ci["rhs"].bit_length() - 1}
        checks["counting_identity"] = ci["holds"]
    return res, checks


# ---------------------------------------------------------------- johnson


def cmd_johnson(args):
    if args.action == "rank":
        _need(args, "g", "d")
        r = mg.odd_level_rank_formula(args.g, args.d, args.closed)
        return r, {"formula": r["agrees"]}
    _need(args, "input")
    phi, d_file = mg.load_endo_json(args.input)
    d = args.d or d_file
    if d is None:
        raise UsageError("johnson tau needs --d or a d field in the input")
    v = mg.tau(phi, d)
    res = {"g": phi.genus, "d": d, "tau": v.tolist(), "zero": v.is_zero(),
           "boundary_preserved": mg.boundary_preserved(phi)}
    checks = {"boundary_preserved": res["boundary_preserved"]}
    if d % 2:
        res["in_lambda3"] = mg.in_lambda3(v)
        checks["in_lambda3"] = res["in_lambda3"]
    return res, checks


# ---------------------------------------------------------------- reproduce


def cmd_reproduce(args):
    only = [int(v) for v in args.only.split(",")] if args.only else None
    if only and any(k not in rp.REGISTRY for k in only):
        raise UsageError(f"criteria are numbered 1..{len(rp.REGISTRY)}")
    results = rp.run_all(args.seed, args.trials, only)
    res = {
        "manifest": rp.MANIFEST | {"seed": args.seed, "trials_override": args.trials},
        "criteria": [r.to_json(args.timing) for r in results],
        "table": rp.summary_table(results, args.timing).splitlines(),
    }
    checks = {f"criterion_{r.number}": r.passed and r.within_limit for r in results}
    return res, checks


HANDLERS = {
    "symp": cmd_symp,
    "brown": cmd_brown,
    "module": cmd_module,
    "beta": cmd_beta,
    "b3": cmd_b3,
    "johnson": cmd_johnson,
    "reproduce": cmd_reproduce,
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--g", type=int, help="genus")
    common.add_argument("--d", type=int, help="level / modulus")
    common.add_argument("--closed", action="store_true", help="closed-surface variant")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--trials", type=int, help="sample count for randomized checks")
    common.add_argument("--input", help="JSON input file")
    fmt = common.add_mutually_exclusive_group()
    fmt.add_argument("--json", dest="fmt", action="store_const", const="json", help="JSON report (default)")
    fmt.add_argument("--text", dest="fmt", action="store_const", const="text", help="plain-text report")
    common.add_argument("--timing", action="store_true", help="include wall-clock durations")

    parser = argparse.ArgumentParser(prog="mcglevel", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("symp", parents=[common], help="Sp(2g, Z) congruence checks")
    p.add_argument(
        "action",
        choices=["verify-lemma-matrix", "verify-lantern", "membership", "m", "m1", "m2", "abelianization"],
    )
    p.add_argument("--a1", type=int)
    p.add_argument("--b1", type=int)
    p.add_argument("--a2", type=int)
    p.add_argument("--literal", action="store_true", help="use the uncorrected exponent")
    p.add_argument("--x", help="vector, comma separated")
    p.add_argument("--y", help="vector, comma separated")

    sub.add_parser("brown", parents=[common], help="Gauss sum and Brown invariant of an enhancement")

    p = sub.add_parser("module", parents=[common], help="the Z_8[H] quotient by L")
    p.add_argument("action", choices=["quotient", "check-recurrence"])

    p = sub.add_parser("beta", parents=[common], help="the map beta_sigma")
    p.add_argument("action", choices=["eval", "image", "check-L"])
    p.add_argument("--spin", help="spin form bits, e.g. 10|01")
    p.add_argument("--class", dest="cls", help="class bits, e.g. 10|00")

    p = sub.add_parser("b3", parents=[common], help="Boolean polynomial module dimensions")
    p.add_argument("action", choices=["dims"])

    p = sub.add_parser("johnson", parents=[common], help="mod-d Johnson map and rank formulas")
    p.add_argument("action", choices=["tau", "rank"])

    p = sub.add_parser("reproduce", parents=[common], help="run the acceptance suite")
    p.add_argument("--only", help="comma-separated criterion numbers")
    return parser


def _text(report: dict) -> str:
    lines = [f"$ {report['command']}"]
    res = report["results"]
    if "table" in res:
        lines.extend(res["table"])
    else:
        for k, v in res.items():
            lines.append(f"{k}: {json.dumps(v, sort_keys=True)}")
        for name, ok in report["checks"].items():
            lines.append(f"check {name}: {'pass' if ok else 'FAIL'}")
    if "seconds" in report:
        lines.append(f"time: {report['seconds']:.3f}s")
    lines.append("PASS" if report["passed"] else "FAIL")
    return "\n".join(lines)


def main(argv=None) -> int:
    parser = build_parser()
    argv = sys.argv[1:] if argv is None else list(argv)
    args = parser.parse_args(argv)
    t0 = time.perf_counter()
    try:
        results, checks = HANDLERS[args.command](args)
    except UsageError as exc:
        parser.print_usage(sys.stderr)
        print(f"mcglevel: error: {exc}", file=sys.stderr)
        return 2
    except MCGLevelError as exc:
        print(f"mcglevel: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 2
    except ValueError as exc:
        print(f"mcglevel: error: {exc}", file=sys.stderr)
        return 2
    report = {
        "command": " ".join(["mcglevel"] + argv),
        "parameters": {k: v for k, v in sorted(vars(args).items()) if k not in ("fmt", "timing")},
        "results": results,
        "checks": checks,
        "passed": all(checks.values()),
    }
    if args.timing:
        report["seconds"] = round(time.perf_counter() - t0, 3)
    if args.fmt == "text":
        print(_text(report))
    else:
        print(json.dumps(report, indent=2, sort_keys=True))
    return 0 if report["passed"] else 1


if __name__ == "__main__":
    sys.exit(main())
