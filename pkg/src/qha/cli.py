"""The ``qha`` command line."""
from __future__ import annotations

import argparse
import json
import os
import sys

from .cartan import PRESETS, CartanError, WeylElement, is_w_dominant, parse_weight, preset
from .crystal import CrystalError, crystal_label, in_Bw
from .modules import ModuleError, ResourceError
from .rewrite import default_q_table

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_RESOURCE = 0, 1, 2, 3


class UsageError(Exception):
    pass


def _word(text: str) -> tuple:
    t = text.strip()
    if not (t.startswith("s[") and t.endswith("]")):
        raise UsageError(f"expected a reduced word like s[1,2], got {text!r}")
    body = t[2:-1].strip()
    try:
        return tuple(int(x) for x in body.split(",")) if body else ()
    except ValueError:
        raise UsageError(f"bad reduced word {text!r}") from None


def _weyl(cartan, text: str) -> WeylElement:
    word = _word(text)
    w = WeylElement.from_word(cartan, word)
    if len(w) != len(word):
        raise UsageError(f"{text} is not reduced")
    return w


def _qtable(args):
    cartan = preset(args.preset)
    override = None
    if args.q_table:
        from .suites import load_q_overrides
        with open(args.q_table) as fh:
            table = load_q_overrides(fh.read())
        override = table.get(cartan.name)
    return default_q_table(cartan, override)


def _module_summary(M) -> dict:
    return {"n": M.n, "dim": M.dim, "weight": M.cartan.format_weight(M.wt),
            "character": M.character.to_text()}


def _emit(args, data: dict, lines: list[str]):
    if args.json:
        print(json.dumps(data, sort_keys=True, indent=1))
    else:
        print("\n".join(lines))


def cmd_cartan(args) -> int:
    c = preset(args.name)
    data = {"name": c.name, "labels": list(c.labels), "matrix": [list(r) for r in c.matrix],
            "symmetrizer": list(c.sym)}
    lines = [f"{c.name}  labels {list(c.labels)}  symmetrizer {list(c.sym)}"]
    lines += ["  " + " ".join(f"{a:3d}" for a in row) for row in c.matrix]
    _emit(args, data, lines)
    return EXIT_OK


def cmd_eval(args) -> int:
    from .expr import evaluate
    q = _qtable(args)
    M = evaluate(args.expr, q)
    data = {"expr": args.expr, "preset": q.cartan.name, **_module_summary(M)}
    if args.basis:
        data["basis"] = [[list(w), d] for w, d in M.basis]
    lines = [f"{args.expr}: dim {M.dim}, weight {data['weight']}", f"  ch = {data['character']}"]
    if args.basis:
        lines += [f"  {list(w)} deg {d}" for w, d in M.basis]
    _emit(args, data, lines)
    return EXIT_OK


def cmd_lambda(args) -> int:
    from .expr import evaluate
    from .rmatrix import lambda_
    q = _qtable(args)
    M, N = evaluate(args.left, q), evaluate(args.right, q)
    ld = lambda_(M, N)
    data = {"Lambda": ld.lam, "Lambda_reverse": ld.lam_reverse, "tilde_Lambda": ld.lam_tilde, "d": ld.d}
    _emit(args, data, [f"Lambda = {ld.lam}", f"Lambda (reversed) = {ld.lam_reverse}",
                       f"tilde Lambda = {ld.lam_tilde}", f"d = {ld.d}"])
    return EXIT_OK


def cmd_detmod(args) -> int:
    from .detmod import detmod_pair, gen_detmod
    q = _qtable(args)
    c = q.cartan
    w = _weyl(c, args.w)
    lam = parse_weight(c, args.weight)
    if args.v is not None:
        v = _weyl(c, args.v)
        M = detmod_pair(q, w, v, lam)
        head = f"M({w} {c.format_weight(lam)}, {v} {c.format_weight(lam)})"
    else:
        if not is_w_dominant(lam, w):
            raise UsageError(f"{args.weight} is not {w}-dominant")
        M = gen_detmod(q, w, lam)
        head = f"M_{w}({w} {c.format_weight(lam)}, {c.format_weight(lam)})"
    data = {**_module_summary(M), "crystal_label": list(crystal_label(M)) if M.n else []}
    _emit(args, data, [f"{head}: dim {M.dim}, weight {data['weight']}", f"  ch = {data['character']}",
                       f"  label {tuple(data['crystal_label'])}"])
    return EXIT_OK


def cmd_bw(args) -> int:
    from .expr import evaluate
    q = _qtable(args)
    M = evaluate(args.expr, q)
    w = _weyl(q.cartan, args.w)
    res = in_Bw(M, w)
    _emit(args, {"expr": args.expr, "w": str(w), "in_Bw": res}, [f"{args.expr} in B_{w}: {res}"])
    return EXIT_OK


def cmd_verify(args) -> int:
    from .suites import SUITES, SuiteConfig, load_q_overrides, run_suite
    overrides = {}
    if args.q_table:
        with open(args.q_table) as fh:
            overrides = load_q_overrides(fh.read())
    cfg = SuiteConfig(ht_max=args.ht_max, q_overrides=overrides)
    names = list(SUITES) if args.suite == "all" else [args.suite]
    # the relation suite reads every module built by the others, so it runs last
    if "relations" in names and len(names) > 1:
        names = [n for n in names if n != "relations"] + ["relations"]
    reports = [run_suite(n, cfg) for n in names]
    if args.json:
        print(json.dumps({"header": {"wall_time": {r.suite: round(r.wall_time, 3) for r in reports}},
                          "reports": [r.body() for r in reports]}, sort_keys=True, indent=1))
    else:
        print("\n".join(r.to_text() for r in reports))
    return EXIT_OK if all(r.ok for r in reports) else EXIT_FAIL


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="qha", description="Quiver Hecke algebra module computations.")
    p.add_argument("--json", action="store_true", help="machine-readable output")
    p.add_argument("--ht-max", type=int, default=None, help="height cap (default $QHA_HT_MAX or 7)")
    p.add_argument("--q-table", default=None, help="JSON file of Q-polynomial overrides by preset")
    sub = p.add_subparsers(dest="command", required=True)

    def with_preset(sp):
        sp.add_argument("--preset", default="A2", choices=sorted(PRESETS), help="Cartan datum")

    sp = sub.add_parser("cartan", help="show a Cartan preset")
    sp.add_argument("name", choices=sorted(PRESETS))
    sp.set_defaults(func=cmd_cartan)

    sp = sub.add_parser("eval", help="evaluate a module expression")
    sp.add_argument("expr")
    sp.add_argument("--basis", action="store_true", help="list basis words and degrees")
    with_preset(sp)
    sp.set_defaults(func=cmd_eval)

    sp = sub.add_parser("lambda", help="Lambda, tilde Lambda and d of two simples")
    sp.add_argument("left")
    sp.add_argument("right")
    with_preset(sp)
    sp.set_defaults(func=cmd_lambda)

    sp = sub.add_parser("detmod", help="determinantial modules M_w(w lam, lam) or M(w lam, v lam)")
    sp.add_argument("w", help="reduced word, e.g. s[1,2]")
    sp.add_argument("weight", help="weight, e.g. L1+L2-2*L0")
    sp.add_argument("--v", default=None, help="second reduced word for M(w lam, v lam)")
    with_preset(sp)
    sp.set_defaults(func=cmd_detmod)

    sp = sub.add_parser("bw", help="membership of a self-dual simple in B_w(infinity)")
    sp.add_argument("expr")
    sp.add_argument("w")
    with_preset(sp)
    sp.set_defaults(func=cmd_bw)

    sp = sub.add_parser("verify", help="run a verification suite")
    sp.add_argument("suite", choices=["all", "relations", "shuffle", "lambda", "strong", "detmod", "crystal",
                                      "localization", "braider-wv", "paper-examples"])
    sp.set_defaults(func=cmd_verify)
    return p


def main(argv: list[str] | None = None) -> int:
    from .expr import ExprError
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    saved = os.environ.get("QHA_HT_MAX")
    if args.ht_max is not None:
        os.environ["QHA_HT_MAX"] = str(args.ht_max)
    try:
        return args.func(args)
    except ResourceError as exc:
        print(f"qha: resource cap: {exc}", file=sys.stderr)
        return EXIT_RESOURCE
    except (UsageError, ExprError, CartanError, OSError, json.JSONDecodeError) as exc:
        print(f"qha: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (ModuleError, CrystalError) as exc:
        print(f"qha: {exc}", file=sys.stderr)
        return EXIT_FAIL
    finally:
        # the override is scoped to this call
        if saved is None:
            os.environ.pop("QHA_HT_MAX", None)
        else:
            os.environ["QHA_HT_MAX"] = saved


if __name__ == "__main__":
    sys.exit(main())
