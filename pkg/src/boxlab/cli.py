"""``boxlab`` command line: JSON in, JSON out, exit 0 ok / 2 violation / 1 error."""
from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import box_model as bm
from . import chsh_optimizer as co
from . import event_logic as el
from . import game_sim as gs
from . import io
from . import operator_algebra as oa
from . import toy_model as tm

EXIT_OK, EXIT_ERROR, EXIT_VIOLATION = 0, 1, 2
DEFAULT_SEED = 0


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


@dataclass
class CommandResult:
    status: str          # "ok", "violation" or "error"
    payload: dict
    text: str | None = None

    @property
    def exit_code(self) -> int:
        return {"ok": EXIT_OK, "violation": EXIT_VIOLATION}.get(self.status, EXIT_ERROR)


def _ok(payload, text=None, violation=False):
    return CommandResult("violation" if violation else "ok", payload, text)


# -- argument helpers -----------------------------------------------------------

def _common(p):
    p.add_argument("--seed", type=int, default=None, help=f"random seed (default {DEFAULT_SEED})")
    p.add_argument("--tol", type=float, default=None, help="numerical tolerance")
    p.add_argument("--out", default=None, help="write the JSON payload to this file")
    p.add_argument("--json", action="store_true", help="print JSON instead of text")


def _box_source(p, flag="--in"):
    g = p.add_mutually_exclusive_group()
    g.add_argument(flag, dest="box_file", default=None, help="box JSON file")
    g.add_argument("--pr", action="store_true", help="the PR box")
    g.add_argument("--uniform", action="store_true", help="the uniform box")
    g.add_argument("--signaling", action="store_true", help="the b = x signaling box")
    g.add_argument("--deterministic", metavar="FA0,FA1,FB0,FB1",
                   help="local deterministic strategy")
    g.add_argument("--table", metavar="P0,...,P15", help="16 entries in [x][y][a][b] order")


def _load_box(args) -> bm.BipartiteBox:
    if args.box_file:
        return io.read_box(args.box_file)
    if args.uniform:
        return bm.uniform_box()
    if args.signaling:
        return bm.signaling_box()
    if args.deterministic:
        f = [int(v) for v in args.deterministic.split(",")]
        if len(f) != 4 or any(v not in (0, 1) for v in f):
            raise UsageError("--deterministic needs four bits")
        return bm.deterministic_box(f[:2], f[2:])
    if args.table:
        vals = [float(v) for v in args.table.split(",")]
        if len(vals) != 16:
            raise UsageError("--table needs 16 numbers")
        return bm.new_box(vals)
    return bm.pr_box()


def _seed(args) -> int:
    return DEFAULT_SEED if args.seed is None else args.seed


def _tol(args, default):
    return default if args.tol is None else args.tol


# -- box ---------------------------------------------------------------------------

def _box_new(args):
    box = _load_box(args)
    return _ok(io.box_to_json(box))


def _box_check(args):
    tol = _tol(args, bm.DEFAULT_TOL)
    try:
        box = _load_box(args)
    except bm.BoxError as exc:
        return _ok({"valid": False, "error": f"{type(exc).__name__}: {exc}"}, violation=True)
    ok, witness = bm.is_nonsignaling(box, tol)
    sym_ok, resid = bm.sequential_symmetry_check(box, max(tol, bm.NORM_TOL))
    payload = {
        "valid": True,
        "nonsignaling": ok,
        "violations": [{"party": v.party, "output": v.output, "input": v.input,
                        "other_inputs": list(v.other_inputs), "gap": v.gap}
                       for v in witness.violations],
        "sequential_symmetry_ok": sym_ok,
        "sequential_symmetry_residual": resid,
        "tol": tol,
    }
    return _ok(payload, violation=not ok)


def _box_chsh(args):
    box = _load_box(args)
    val = bm.Valuation.parse(args.valuation)
    return _ok({"valuation": val.value, "value": bm.chsh(box, val),
                "correlators": bm.correlators(box, val).tolist()})


def _box_marginals(args):
    box = _load_box(args)
    return _ok({"marginals": bm.marginals(box)})


# -- op ----------------------------------------------------------------------------

def _bundle(args, form="signed"):
    return io.read_bundle(args.file) if args.file else io.default_bundle(form)


def _signed_observables(bundle):
    if bundle["form"] == "zero_one":
        return [oa.signed_from_01(bundle[k]) for k in io.OBSERVABLE_KEYS]
    return [bundle[k] for k in io.OBSERVABLE_KEYS]


def _op_landau(args):
    tol = _tol(args, 1e-9)
    b = _bundle(args)
    try:
        rep = oa.landau_check(*_signed_observables(b), tol=max(tol, oa.EIG_TOL))
    except oa.SpectrumError as exc:
        return _ok({"error": str(exc)}, violation=True)
    payload = {"identity_residual": rep.identity_residual, "psd_margin": rep.psd_margin,
               "mirror_identity_residual": rep.mirror_identity_residual,
               "mirror_psd_margin": rep.mirror_psd_margin, "holds": rep.holds(tol)}
    return _ok(payload, violation=not rep.holds(tol))


def _op_tsirelson(args):
    b = _bundle(args)
    if "state" not in b:
        raise UsageError("operator file needs a state for tsirelson")
    try:
        value = oa.tsirelson_check(*_signed_observables(b), b["state"])
    except oa.BoundViolation as exc:
        return _ok({"error": str(exc), "bound": oa.TSIRELSON}, violation=True)
    return _ok({"value": value, "bound": oa.TSIRELSON,
                "gap": oa.TSIRELSON - value})


def _op_born(args):
    b = _bundle(args, "zero_one")
    if "state" not in b:
        raise UsageError("operator file needs a state for born")
    if b["form"] == "signed":
        obs = {k: 0.5 * (np.eye(b[k].shape[0]) - b[k]) for k in io.OBSERVABLE_KEYS}
    else:
        obs = {k: b[k] for k in io.OBSERVABLE_KEYS}
    box = oa.box_from_quantum(b["state"], [obs["A0"], obs["A1"]], [obs["B0"], obs["B1"]])
    ok, _ = bm.is_nonsignaling(box)
    return _ok({"box": io.box_to_json(box), "chsh_signed": bm.chsh(box),
                "nonsignaling": ok})


# -- opt ---------------------------------------------------------------------------

def _opt(args):
    if args.kind == "classical":
        rep = co.classical_max()
    elif args.kind == "quantum":
        rep = co.seesaw_quantum_max(dim=args.dim, restarts=args.restarts,
                                    max_iters=args.max_iters, seed=_seed(args))
    else:
        rep = co.nonsignaling_max()
    payload = rep.to_dict()
    payload.pop("history", None)
    return _ok(payload)


# -- game --------------------------------------------------------------------------

def _game_play(args):
    box = _load_box(args)
    tr = gs.play(box, args.rounds, seed=_seed(args))
    summary = {"box_id": tr.box_id, "rounds": len(tr), "seed": tr.seed,
               "input_counts": tr.input_counts().tolist()}
    if args.out:
        tr.to_jsonl(args.out)
        summary["transcript"] = str(args.out)
    return CommandResult("ok", summary)


def _game_analyze(args):
    tr = gs.GameTranscript.from_jsonl(args.transcript)
    tests = [t.strip() for t in args.tests.split(",") if t.strip()]
    unknown = set(tests) - {"signaling", "independence", "correlators"}
    if unknown:
        raise UsageError(f"unknown tests {sorted(unknown)}")
    val = bm.Valuation.parse(args.valuation)
    payload = {"rounds": len(tr), "box_id": tr.box_id}
    violation = False
    if "correlators" in tests:
        payload["correlators"] = gs.estimate_correlators(tr, val).to_dict()
    if "signaling" in tests:
        rep = gs.signaling_test(tr, args.significance)
        payload["signaling"] = rep.to_dict()
        violation |= rep.reject
    if "independence" in tests:
        rep = gs.independence_test(tr, val)
        payload["independence"] = rep.to_dict()
    return _ok(payload, violation=violation)


# -- toy ---------------------------------------------------------------------------

def _toy_report(args):
    rep = tm.paper_inconsistency_report()
    return _ok(rep.to_dict(), text=rep.render())


def _toy_feasibility(args):
    try:
        t = [float(v) for v in args.targets.split(",")]
    except ValueError:
        raise UsageError("--targets needs four numbers") from None
    if len(t) != 4:
        raise UsageError("--targets needs four numbers t00,t01,t10,t11")
    res = tm.separable_feasibility(np.array(t).reshape(2, 2), _tol(args, tm.DEFAULT_TOL))
    payload = {"targets": t, "verdict": res.verdict}
    if isinstance(res, tm.Feasible):
        payload.update(u=list(res.u), v=list(res.v), residual=res.residual)
    else:
        payload.update(test=res.test, detail=res.detail, value=res.value)
    return _ok(payload, violation=isinstance(res, tm.Infeasible))


# -- logic -------------------------------------------------------------------------

def _logic_demo(args):
    rep = el.distributivity_counterexample(_load_box(args))
    return _ok(rep.to_dict(), text=rep.render())


def _logic_eval(args):
    prop = el.parse(args.prop)
    res = el.probability(prop, _load_box(args))
    payload = {"proposition": str(prop), "status": type(res).__name__}
    if isinstance(res, el.Defined):
        payload["value"] = res.value
    else:
        payload["reason"] = res.reason
    return _ok(payload, text=f"P[{prop}] = {res}")


# -- parser ------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    root = _Parser(prog="boxlab", description="Bipartite correlation boxes: "
                   "construction, checks, CHSH optimization, simulation.")
    groups = root.add_subparsers(dest="group", required=True, parser_class=_Parser)

    box = groups.add_parser("box", help="box tables").add_subparsers(dest="cmd", required=True)
    for name, fn, hlp in (("new", _box_new, "emit a box as JSON"),
                          ("check", _box_check, "validate and test non-signaling"),
                          ("chsh", _box_chsh, "CHSH value and correlators"),
                          ("marginals", _box_marginals, "all conditional marginals")):
        p = box.add_parser(name, help=hlp)
        _box_source(p)
        p.add_argument("--valuation", default="signed", choices=["signed", "raw"])
        _common(p)
        p.set_defaults(func=fn)

    op = groups.add_parser("op", help="operator checks").add_subparsers(dest="cmd", required=True)
    for name, fn, hlp in (("landau", _op_landau, "Landau operator inequality"),
                          ("tsirelson", _op_tsirelson, "|<C>| against 2*sqrt(2)"),
                          ("born", _op_born, "box from state and 0/1 observables")):
        p = op.add_parser(name, help=hlp)
        p.add_argument("--file", default=None,
                       help="operator bundle JSON (default: optimal qubit configuration)")
        _common(p)
        p.set_defaults(func=fn)

    opt = groups.add_parser("opt", help="CHSH maxima").add_subparsers(dest="kind", required=True)
    for name in ("classical", "quantum", "ns"):
        p = opt.add_parser(name)
        p.add_argument("--dim", type=int, default=2)
        p.add_argument("--restarts", type=int, default=5)
        p.add_argument("--max-iters", type=int, default=500)
        _common(p)
        p.set_defaults(func=_opt)

    game = groups.add_parser("game", help="Monte Carlo play").add_subparsers(dest="cmd", required=True)
    p = game.add_parser("play")
    _box_source(p, "--box")
    p.add_argument("--rounds", type=int, required=True)
    _common(p)
    p.set_defaults(func=_game_play)
    p = game.add_parser("analyze")
    p.add_argument("--in", dest="transcript", required=True)
    p.add_argument("--tests", default="signaling,independence,correlators")
    p.add_argument("--significance", type=float, default=0.05)
    p.add_argument("--valuation", default="signed", choices=["signed", "raw"])
    _common(p)
    p.set_defaults(func=_game_analyze)

    toy = groups.add_parser("toy", help="angle toy model").add_subparsers(dest="cmd", required=True)
    p = toy.add_parser("report")
    _common(p)
    p.set_defaults(func=_toy_report)
    p = toy.add_parser("feasibility")
    p.add_argument("--targets", required=True, help="t00,t01,t10,t11")
    _common(p)
    p.set_defaults(func=_toy_feasibility)

    logic = groups.add_parser("logic", help="proposition logic").add_subparsers(dest="cmd", required=True)
    p = logic.add_parser("demo")
    _box_source(p, "--box")
    _common(p)
    p.set_defaults(func=_logic_demo)
    p = logic.add_parser("eval")
    p.add_argument("--prop", required=True)
    _box_source(p, "--box")
    _common(p)
    p.set_defaults(func=_logic_eval)
    return root


def dispatch(argv) -> tuple[CommandResult, argparse.Namespace | None]:
    try:
        args = build_parser().parse_args(argv)
        return args.func(args), args
    except UsageError as exc:
        return CommandResult("error", {"error": str(exc)}), None
    except (ValueError, KeyError, OSError, json.JSONDecodeError) as exc:
        return CommandResult("error", {"error": f"{type(exc).__name__}: {exc}"}), None


def main(argv=None) -> int:
    argv = sys.argv[1:] if argv is None else argv
    result, args = dispatch(argv)
    payload = {"status": result.status, **result.payload}
    if result.status == "error":
        print(result.payload["error"], file=sys.stderr)
        return result.exit_code
    text = io.dumps(payload)
    out = getattr(args, "out", None)
    writes_transcript = getattr(args, "func", None) is _game_play
    if out and not writes_transcript:
        Path(out).write_text(text + "\n")
    print(text if args.json or result.text is None else result.text)
    return result.exit_code


if __name__ == "__main__":
    sys.exit(main())
