"""Command-line front end.

Exit codes: 0 true / provable / valid, 1 false / refuted / invalid,
2 unreadable or malformed input, 3 input of the wrong shape or type.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .calculus import (AssemblyError, Countermodel, find_invalid, format_proof,
                       prove)
from .functor import FunctorError, base_bruteforce, base_inductive, lift_generic, lift_inductive, normalize_dual
from .logic import LanguageError, show_value
from .model import ModelError, enumerate_models
from .poset import PosetError
from .simulation import distinguishing_formula, greatest_simulation, modally_stronger_upto
from . import syntax as sx

EXIT_TRUE, EXIT_FALSE, EXIT_PARSE, EXIT_TYPE = 0, 1, 2, 3


class _Fail(Exception):
    def __init__(self, code, msg):
        super().__init__(msg)
        self.code = code


def _read(path: str) -> str:
    try:
        return Path(path).read_text()
    except OSError as e:
        raise _Fail(EXIT_PARSE, f"cannot read {path}: {e.strerror}")


def _workspace(path: str, functor: str | None = None) -> sx.Workspace:
    return sx.parse_workspace(_read(path), functor)


def _emit(args, text: str, data: dict):
    print(json.dumps(data, indent=2) if args.json else text)


def _verdict(ok: bool) -> int:
    return EXIT_TRUE if ok else EXIT_FALSE


def cmd_lift(args) -> int:
    ws = _workspace(args.file, args.functor)
    if ws.functor is None:
        raise sx.ShapeError("no functor given")
    r = sx.workspace_relation(ws)
    f = normalize_dual(ws.functor)
    gen = lift_generic(f, r)
    ind = lift_inductive(f, r)
    agree = gen == ind
    text = "\n".join([f"# lifting along {sx.show_functor(f)}: {len(ind.pairs)} pairs",
                      sx.show_relation(ind),
                      f"# engines agree: {'yes' if agree else 'no'}"])
    _emit(args, text, {"functor": sx.show_functor(f), "agree": agree,
                       "inductive": sorted([show_value(x), show_value(y)] for y, x in ind.pairs),
                       "generic": sorted([show_value(x), show_value(y)] for y, x in gen.pairs)})
    return _verdict(agree)


def cmd_base(args) -> int:
    ws = _workspace(args.file, args.functor)
    if ws.functor is None or ws.carrier is None or ws.element is None:
        raise sx.ShapeError("base needs functor, carrier and element")
    f = normalize_dual(ws.functor)
    x = ws.carrier

    def leaf(r):
        if r[0] != "name" or r[1] not in x:
            raise sx.ShapeError(f"{r[1] if r[0] == 'name' else r[0]!r} is not a point of the carrier")
        return r[1]

    from .functor import check_element, normalize
    t = normalize(f, sx.resolve_element(f, ws.element, leaf), x.leq)
    why = check_element(f, t, lambda s: s in x, x.leq)
    if why:
        raise sx.ShapeError(why)
    ind = base_inductive(f, t, x)
    brute = base_bruteforce(f, t, x)
    members = [e for e in x.elements if e in ind.members]
    agree = ind == brute
    text = f"base {{{', '.join(map(str, members))}}}\n# brute force agrees: {'yes' if agree else 'no'}"
    _emit(args, text, {"element": show_value(t), "base": members, "agree": agree})
    return _verdict(agree)


def _load_model(path):
    return sx.workspace_model(_workspace(path))


def _state(m, s):
    if s is None:
        if m.point is None:
            raise sx.ShapeError("no state given and the model has no point")
        return m.point
    if s not in m.carrier:
        raise sx.ShapeError(f"unknown state {s!r}")
    return s


def cmd_eval(args) -> int:
    m = _load_model(args.model)
    x = _state(m, args.state)
    a = sx.parse_formula(args.formula, m.lang)
    ok = m.satisfies(x, a)
    _emit(args, "true" if ok else "false", {"state": x, "formula": m.lang.show(a), "holds": ok})
    return _verdict(ok)


def cmd_simulate(args) -> int:
    m, n = _load_model(args.model), _load_model(args.other)
    s = greatest_simulation(m, n)
    pairs = sorted(s.pairs, key=lambda p: (str(p[0]), str(p[1])))
    lines = ["# greatest simulation: x <= y means y simulates x"]
    lines += [f"{x} <= {y}" for x, y in pairs]
    data: dict = {"simulation": [[x, y] for x, y in pairs]}
    ok = True
    if m.point is not None and n.point is not None:
        ok = (m.point, n.point) in s.pairs
        lines.append(f"# points: {'simulated' if ok else 'not simulated'}")
        data["points_simulated"] = ok
        if args.depth is not None:
            stronger = modally_stronger_upto(m, m.point, n, n.point, args.depth)
            lines.append(f"# modally stronger up to depth {args.depth}: {'yes' if stronger else 'no'}")
            data["modally_stronger"] = stronger
    _emit(args, "\n".join(lines), data)
    return _verdict(ok)


def cmd_distinguish(args) -> int:
    m, n = _load_model(args.model), _load_model(args.other)
    x, y = _state(m, args.x), _state(n, args.y)
    a = distinguishing_formula(m, x, n, y)
    if a is None:
        _emit(args, "none: the second state simulates the first", {"formula": None})
        return EXIT_FALSE
    _emit(args, m.lang.show(a), {"formula": m.lang.show(a), "depth": m.lang.depth(a)})
    return EXIT_TRUE


def cmd_prove(args) -> int:
    ws = _workspace(args.file, args.functor)
    lang, s = sx.workspace_sequent(ws)
    try:
        r = prove(lang, s)
    except AssemblyError as e:
        raise _Fail(EXIT_TYPE, str(e))
    if isinstance(r, Countermodel):
        text = "# refuted at x0 in\n" + sx.show_model(r.model).rstrip()
        _emit(args, text, {"provable": False, "countermodel": sx.model_to_json(r.model)})
        return EXIT_FALSE
    lines = [format_proof(lang, r) if args.trace else f"provable ({r.size()} nodes)"]
    data: dict = {"provable": True, **sx.proof_document(lang, r)}
    if args.max_states:
        bad = sum(1 for m in enumerate_models(lang.functor, args.max_states, lang.atoms)
                  for x in m.states() if m.refutes(x, s.lhs, s.rhs))
        lines.append(f"# models with <= {args.max_states} states refuting it: {bad}")
        data["refuting_states"] = bad
    _emit(args, "\n".join(lines), data)
    return EXIT_TRUE


def cmd_check_proof(args) -> int:
    try:
        doc = json.loads(_read(args.file))
    except json.JSONDecodeError as e:
        raise _Fail(EXIT_PARSE, f"{args.file}: {e}")
    lang, tree = sx.proof_from_document(doc)
    bad = find_invalid(lang, tree)
    if bad is None:
        _emit(args, "valid", {"valid": True})
        return EXIT_TRUE
    text = f"invalid at {bad.node.rule}: {lang.show_sequent(bad.node.sequent)}\n  {bad.reason}"
    _emit(args, text, {"valid": False, "rule": bad.node.rule,
                       "sequent": lang.show_sequent(bad.node.sequent), "reason": bad.reason})
    return EXIT_FALSE


def cmd_selftest(args) -> int:
    from .regression import run_all
    results = run_all()
    lines = [f"{'PASS' if why is None else 'FAIL'} {name} ({dt * 1000:.0f} ms)"
             + ("" if why is None else f"\n  {why}") for name, why, dt in results]
    ok = all(why is None for _, why, _ in results)
    _emit(args, "\n".join(lines), {"cases": [{"name": n, "ok": w is None, "reason": w} for n, w, _ in results]})
    return _verdict(ok)


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="ordmoss", description="Cover-modality logic for ordered coalgebras.")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="structured output")
    common.add_argument("--allow-nontame", action="store_true",
                        help="accepted for compatibility; every finite functor here is tame")
    sub = p.add_subparsers(dest="cmd", required=True)

    s = sub.add_parser("lift", parents=[common], help="lift a relation along a functor (both engines)")
    s.add_argument("file")
    s.add_argument("--functor")
    s.set_defaults(run=cmd_lift)

    s = sub.add_parser("base", parents=[common], help="base of an element")
    s.add_argument("file")
    s.add_argument("--functor")
    s.set_defaults(run=cmd_base)

    s = sub.add_parser("eval", parents=[common], help="truth of a formula at a state")
    s.add_argument("model")
    s.add_argument("formula")
    s.add_argument("--state")
    s.set_defaults(run=cmd_eval)

    s = sub.add_parser("simulate", parents=[common], help="greatest simulation between two models")
    s.add_argument("model")
    s.add_argument("other")
    s.add_argument("--depth", type=int, help="also compare the points on formulas up to this depth")
    s.set_defaults(run=cmd_simulate)

    s = sub.add_parser("distinguish", parents=[common], help="formula true at x and false at y")
    s.add_argument("model")
    s.add_argument("other")
    s.add_argument("--x")
    s.add_argument("--y")
    s.set_defaults(run=cmd_distinguish)

    s = sub.add_parser("prove", parents=[common], help="decide a sequent")
    s.add_argument("file")
    s.add_argument("--functor")
    s.add_argument("--trace", action="store_true", help="print the whole proof tree")
    s.add_argument("--max-states", type=int, default=0,
                   help="cross-check against all models up to this size")
    s.set_defaults(run=cmd_prove)

    s = sub.add_parser("check-proof", parents=[common], help="validate a proof in JSON form")
    s.add_argument("file")
    s.set_defaults(run=cmd_check_proof)

    s = sub.add_parser("selftest", parents=[common], help="run the worked examples")
    s.set_defaults(run=cmd_selftest)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_PARSE if e.code else EXIT_TRUE
    try:
        return args.run(args)
    except _Fail as e:
        print(f"error: {e}", file=sys.stderr)
        return e.code
    except sx.ParseError as e:
        print(f"parse error: {e}", file=sys.stderr)
        return EXIT_PARSE
    except (sx.ShapeError, ModelError, PosetError, FunctorError, LanguageError) as e:
        print(f"type error: {e}", file=sys.stderr)
        return EXIT_TYPE


if __name__ == "__main__":
    sys.exit(main())
