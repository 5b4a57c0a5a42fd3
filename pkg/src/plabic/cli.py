"""Command line interface.

Exit codes: 0 success, 1 a check failed, 2 bad input, 3 degenerate geometry
or a singular system.
"""
from __future__ import annotations

import argparse
import json
import random
import sys
from fractions import Fraction

from . import io
from .core_model import face_weights, faces, is_pbdtp, positroid_dimension_hint, validate
from .errors import (AdmissibilityError, ConvergenceError, DegeneracyError, InvalidNetworkError,
                     SingularSystemError)
from .flows import (boundary_matrix, path_sum_edge_vectors, scale_to_contract, talaska_edge_vectors,
                    tnn_check)
from .geometry import check_frame, find_generic_frame
from .le_networks import build_le_network, master_signature, near_horizontal_frame, random_le_tableau
from .linear_system import boundary_matrix_linear, edge_vectors
from .rational import fmt
from .signatures import (check_face_theorem, falsify_signature, find_gauge_equivalence,
                         geometric_signature, solve_lam)
from .svg import render_svg

EXIT_OK, EXIT_FAILED, EXIT_INPUT, EXIT_DEGENERATE = 0, 1, 2, 3


class Report:
    """Collects a JSON-serialisable result and a plain-text rendering of it."""

    def __init__(self, command: str):
        self.data = {"command": command, "ok": True}
        self.lines: list[str] = []

    def put(self, key, value):
        self.data[key] = value

    def say(self, line: str = ""):
        self.lines.append(line)

    def fail(self, message: str):
        self.data["ok"] = False
        self.data.setdefault("messages", []).append(message)
        self.lines.append(message)


def _vec(v) -> list:
    return [fmt(Fraction(x)) for x in v]


def _matrix(m) -> list:
    return [_vec(r) for r in m.rows]


def _load(args, path=None):
    doc = io.read_network(path or args.network, allow_nonpositive=getattr(args, "allow_nonpositive", False))
    frame = doc.frame
    if frame is None:
        frame = find_generic_frame(doc.network)
    else:
        check_frame(doc.network, frame)
    return doc.network, frame, doc.signature


def _signature_arg(network, path):
    """A signature file is either a bare {edge: bit} object or a network document."""
    with open(path, encoding="utf-8") as fh:
        try:
            data = json.load(fh)
        except json.JSONDecodeError as exc:
            raise InvalidNetworkError(f"{path}: malformed JSON: {exc}") from None
    if isinstance(data, dict) and "signature" in data and "edges" in data:
        data = data["signature"]
    return io.signature_from_dict(network, data)


def _emit_document(args, rep, network, frame, signature):
    text = io.dumps_network(network, frame, signature)
    rep.put("document", json.loads(text))
    if getattr(args, "output", None):
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(text)
        rep.say(f"wrote {args.output}")
    elif not args.json:
        rep.say(text.rstrip("\n"))


# -----------------------------------------------------------------------------------
# subcommands


def cmd_validate(args, rep):
    doc = io.read_network(args.network, check=False)
    diags = validate(doc.network, allow_nonpositive=args.allow_nonpositive)
    rep.put("diagnostics", [{"code": d.code, "message": d.message, "items": list(d.items)} for d in diags])
    if diags:
        for d in diags:
            rep.fail(f"{d.code}: {d.message}")
        return EXIT_FAILED
    net = doc.network
    rep.put("n", net.n)
    rep.put("k", net.k)
    rep.put("pbdtp", is_pbdtp(net))
    rep.say(f"valid: n={net.n} k={net.k} sources={list(net.source_labels)} pbdtp={is_pbdtp(net)}")
    return EXIT_OK


def cmd_faces(args, rep):
    net, _frame, _sig = _load(args)
    fs = faces(net)
    ws = face_weights(net)
    out = []
    for f, w in zip(fs, ws):
        walk = [f"{'+' if s == 1 else '-'}{e}" for e, s in f.walk]
        out.append({"index": f.index, "kind": f.kind, "walk": walk, "corners": list(f.corners), "weight": fmt(w)})
        rep.say(f"face {f.index} [{f.kind}] weight {fmt(w)}: {' '.join(walk)}")
    rep.put("faces", out)
    hint = positroid_dimension_hint(net)
    rep.put("dimension_hint", hint.value)
    rep.say(f"{len(fs)} faces; faces - 1 = {hint.value}")
    return EXIT_OK


def cmd_measure(args, rep):
    net, frame, _sig = _load(args)
    m = boundary_matrix_linear(net, frame) if args.method == "linear" else boundary_matrix(net)
    rep.put("base", list(m.base))
    rep.put("matrix", _matrix(m))
    for r in _matrix(m):
        rep.say("  ".join(r))
    if args.tnn:
        t = tnn_check(m)
        rep.put("tnn", t.ok)
        if not t.ok:
            rep.fail(f"negative minor {list(t.witness)} = {fmt(t.minimum)}")
            return EXIT_FAILED
        rep.say("all maximal minors are non-negative")
    return EXIT_OK


def cmd_edge_vectors(args, rep):
    net, frame, _sig = _load(args)
    rep.put("method", args.method)
    rep.put("gauge", {"dx": fmt(frame.dx), "dy": fmt(frame.dy)})
    if args.method == "path-sum":
        if args.contract:
            net = scale_to_contract(net, frame)
            rep.put("scaled_weights", {e: fmt(net.weight(e)) for e in net.edges})
        res = path_sum_edge_vectors(net, frame, max_len=args.max_len, tol=args.tol)
        vecs = {e: [repr(float(x)) for x in v] for e, v in res.vectors.items()}
        rep.put("terms", res.terms)
        rep.put("tail_bound", res.tail_bound)
        rep.put("tolerance", args.tol)
        rep.put("backend", res.backend)
        rep.put("vectors", vecs)
        for e, v in vecs.items():
            rep.say(f"{e}: ({', '.join(v)})")
        rep.say(f"{res.terms} terms, tail bound {res.tail_bound:.3g} (tolerance {args.tol:g})")
        return EXIT_OK
    vectors = talaska_edge_vectors(net, frame) if args.method == "talaska" else edge_vectors(net, frame)
    out = {e: _vec(vectors[e]) for e in net.edges}
    rep.put("vectors", out)
    for e, v in out.items():
        rep.say(f"{e}: ({', '.join(v)})")
    return EXIT_OK


def cmd_signature(args, rep):
    net, frame, _sig = _load(args)
    sig = geometric_signature(net, frame)
    rep.put("signature", sig)
    if args.document:
        _emit_document(args, rep, net, frame, sig)
    else:
        rep.say(" ".join(f"{e}={b}" for e, b in sig.items()))
    return EXIT_OK


def _signature_or_geometric(args, net, frame, sig):
    if getattr(args, "signature", None):
        return _signature_arg(net, args.signature)
    return sig if sig is not None else geometric_signature(net, frame)


def cmd_lam_solve(args, rep):
    net, frame, sig = _load(args)
    sig = _signature_or_geometric(args, net, frame, sig)
    sol = solve_lam(net, sig)
    z = {f"{v},{e}": _vec(x) for (v, e), x in sol.z.items()}
    rep.put("z", z)
    rep.put("matrix", _matrix(sol.matrix))
    for key, x in z.items():
        rep.say(f"z[{key}] = ({', '.join(x)})")
    rep.say("boundary matrix:")
    for r in _matrix(sol.matrix):
        rep.say("  " + "  ".join(r))
    return EXIT_OK


def cmd_gauge_equiv(args, rep):
    net, _frame, _sig = _load(args)
    s1, s2 = _signature_arg(net, args.sig1), _signature_arg(net, args.sig2)
    res = find_gauge_equivalence(net, s1, s2)
    rep.put("equivalent", res.equivalent)
    if res.equivalent:
        rep.put("gauge", res.gauge)
        rep.say("equivalent; gauge " + " ".join(f"{v}={b}" for v, b in res.gauge.items()))
        return EXIT_OK
    rep.put("witness", {"kind": res.witness.kind, "edges": list(res.witness.edges)})
    rep.fail(f"not equivalent: odd {res.witness.kind} {' '.join(res.witness.edges)}")
    return EXIT_FAILED


def cmd_check_face_theorem(args, rep):
    net, frame, sig = _load(args)
    sig = _signature_or_geometric(args, net, frame, sig)
    checks = check_face_theorem(net, sig)
    rep.put("faces", [{"face": c.face, "kind": c.kind, "bit": c.bit, "white": c.white,
                       "expected": c.expected, "ok": c.ok} for c in checks])
    bad = [c for c in checks if not c.ok]
    for c in checks:
        rep.say(f"face {c.face} [{c.kind}]: bit {c.bit}, white {c.white}, expected {c.expected}"
                f"{'' if c.ok else '  FAIL'}")
    if bad:
        rep.fail(f"{len(bad)} of {len(checks)} faces violate the face relation")
        return EXIT_FAILED
    return EXIT_OK


def cmd_falsify(args, rep):
    net, frame, sig = _load(args)
    sig = _signature_or_geometric(args, net, frame, sig)
    res = falsify_signature(net, sig, frame)
    rep.put("kind", res.kind)
    if res.kind == "geometric":
        rep.fail("signature is gauge equivalent to the geometric one; nothing to falsify")
        return EXIT_FAILED
    rep.put("weights", {e: fmt(w) for e, w in res.weights.items()})
    rep.put("columns", list(res.columns))
    rep.put("witness", {"kind": res.witness.kind, "edges": list(res.witness.edges)})
    if res.kind == "negative-minor":
        rep.put("minor", fmt(res.value))
        rep.say(f"minor {list(res.columns)} = {fmt(res.value)} < 0 at the weights below")
    else:
        rep.say("Lam's system is singular at the weights below")
    rep.say(" ".join(f"{e}={fmt(w)}" for e, w in res.weights.items()))
    return EXIT_OK


def cmd_le_build(args, rep):
    if args.random:
        k, n = args.random
        tableau = random_le_tableau(random.Random(args.seed), k, n)
    elif args.tableau:
        tableau = io.read_tableau(args.tableau)
    else:
        raise InvalidNetworkError("give a tableau file or --random K N")
    net = build_le_network(tableau)
    frame = near_horizontal_frame(net)
    sig = master_signature(net) if args.master else geometric_signature(net, frame)
    rep.put("tableau", io.dumps_tableau(tableau))
    rep.put("dimension", tableau.dimension)
    _emit_document(args, rep, net, frame, sig)
    return EXIT_OK


def _int_or_str(text):
    try:
        return int(text)
    except ValueError:
        return text


def cmd_move(args, rep):
    from . import transforms as tr

    net, frame, sig = _load(args)
    sig = sig if sig is not None else geometric_signature(net, frame)
    if args.kind == "square":
        target = args.target.split(",") if "," in args.target else _int_or_str(args.target)
        rec = tr.square_move(net, sig, target)
    elif args.kind == "flip":
        rec = tr.flip_move(net, sig, args.target)
    elif args.kind == "mid":
        if args.insert:
            rec = tr.insert_middle_vertex(net, sig, args.target, args.color, args.bit)
        else:
            rec = tr.remove_middle_vertex(net, sig, args.target)
    else:
        rec = tr.parallel_reduction(net, sig, args.target)
    rep.put("move", rec.kind)
    rep.put("info", {k: v for k, v in rec.info.items() if isinstance(v, (str, int, bool, list, tuple))})
    _report_transform(args, rep, rec, frame)
    return EXIT_OK


def _report_transform(args, rep, rec, frame):
    before = boundary_matrix(rec.before) if rec.kind not in ("union",) else None
    after = boundary_matrix(rec.after)
    if before is not None and rec.before.n == rec.after.n:
        from .flows import plucker_ratio

        ratio = plucker_ratio(before, after)
        rep.put("plucker_ratio", None if ratio is None else fmt(ratio))
        rep.say(f"Pluecker ratio after/before: {'not proportional' if ratio is None else fmt(ratio)}")
    checks = check_face_theorem(rec.after, rec.sig_after)
    bad = sum(1 for c in checks if not c.ok)
    rep.put("face_theorem", bad == 0)
    rep.say(f"face relation holds on {len(checks) - bad} of {len(checks)} faces")
    fr = rec.frame_after or rec.frame_before or frame
    if fr is not None:
        try:
            check_frame(rec.after, fr)
        except DegeneracyError:
            fr = find_generic_frame(rec.after)
    _emit_document(args, rep, rec.after, fr, rec.sig_after)


def cmd_amalgamate(args, rep):
    from . import transforms as tr

    net, frame, sig = _load(args)
    sig = sig if sig is not None else geometric_signature(net, frame)
    if args.kind == "union":
        if not args.second:
            raise InvalidNetworkError("union needs a second network document")
        net2, frame2, sig2 = _load(args, args.second)
        sig2 = sig2 if sig2 is not None else geometric_signature(net2, frame2)
        rec = tr.disjoint_union(net, sig, net2, sig2, placement=args.placement, gap=args.gap)
    else:
        if args.source is None or args.sink is None:
            raise InvalidNetworkError("defrost needs --source and --sink")
        rec = tr.defrost(net, sig, args.source, args.sink, frame)
        rep.put("relabel", {str(k): v for k, v in rec.info["relabel"].items()})
    rep.put("operation", rec.kind)
    rep.put("flipped", list(rec.info.get("flipped", [])))
    _report_transform(args, rep, rec, frame)
    return EXIT_OK


def cmd_render(args, rep):
    doc = io.read_network(args.network)
    net, frame, sig = doc.network, doc.frame, doc.signature
    if args.signature:
        sig = _signature_arg(net, args.signature) if args.signature != "geometric" else None
        if args.signature == "geometric":
            frame = frame or find_generic_frame(net)
            sig = geometric_signature(net, frame)
    vectors = None
    if args.vectors:
        frame = frame or find_generic_frame(net)
        vectors = edge_vectors(net, frame)
    text = render_svg(net, sig, vectors, frame)
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(text)
        rep.say(f"wrote {args.output}")
    else:
        rep.say(text.rstrip("\n"))
    rep.put("svg", text)
    return EXIT_OK


# -----------------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    def flags(parser, suppress):
        def d(value):
            return argparse.SUPPRESS if suppress else value

        parser.add_argument("--json", action="store_true", default=d(False), help="print a machine-readable JSON report")
        parser.add_argument("--seed", type=int, default=d(0), help="seed for random choices")
        parser.add_argument("--tol", type=float, default=d(1e-12), help="tolerance for truncated path sums")
        parser.add_argument("--max-len", type=int, default=d(2000), help="maximal path length in path sums")
        return parser

    # the flags may stand before or after the subcommand
    common = flags(argparse.ArgumentParser(add_help=False), True)
    p = flags(argparse.ArgumentParser(prog="plabic",
                                      description="Geometric signatures and edge vectors on plabic networks."), False)
    sub = p.add_subparsers(dest="command", required=True)

    def cmd(name, fn, help_):
        s = sub.add_parser(name, parents=[common], help=help_)
        s.set_defaults(func=fn)
        return s

    s = cmd("validate", cmd_validate, "check a network document")
    s.add_argument("network")
    s.add_argument("--allow-nonpositive", action="store_true")
    s = cmd("faces", cmd_faces, "list faces with their weights")
    s.add_argument("network")
    s = cmd("measure", cmd_measure, "boundary measurement matrix")
    s.add_argument("network")
    s.add_argument("--method", choices=["flows", "linear"], default="flows")
    s.add_argument("--tnn", action="store_true", help="also check all maximal minors")
    s = cmd("edge-vectors", cmd_edge_vectors, "edge vectors per edge")
    s.add_argument("network")
    s.add_argument("--method", choices=["talaska", "linear", "path-sum"], default="linear")
    s.add_argument("--contract", action="store_true",
                   help="rescale weights so that the path sum converges (path-sum only)")
    s = cmd("signature", cmd_signature, "geometric signature")
    s.add_argument("network")
    s.add_argument("--document", action="store_true", help="emit the document with the signature")
    s.add_argument("-o", "--output")
    s = cmd("lam-solve", cmd_lam_solve, "solve Lam's relations")
    s.add_argument("network")
    s.add_argument("--signature", help="signature file (defaults to the document's or the geometric one)")
    s = cmd("gauge-equiv", cmd_gauge_equiv, "decide gauge equivalence of two signatures")
    s.add_argument("network")
    s.add_argument("sig1")
    s.add_argument("sig2")
    s = cmd("check-face-theorem", cmd_check_face_theorem, "check the face relation of a signature")
    s.add_argument("network")
    s.add_argument("--signature")
    s = cmd("falsify", cmd_falsify, "weights showing a signature is not geometric")
    s.add_argument("network")
    s.add_argument("--signature")
    s = cmd("le-build", cmd_le_build, "network of a Le-tableau")
    s.add_argument("tableau", nargs="?")
    s.add_argument("--random", nargs=2, type=int, metavar=("K", "N"))
    s.add_argument("--master", action="store_true", help="attach the master signature")
    s.add_argument("-o", "--output")
    s = cmd("move", cmd_move, "apply a local move")
    s.add_argument("kind", choices=["square", "flip", "mid", "reduce"])
    s.add_argument("network")
    s.add_argument("target", help="face index or four vertices (square), edge (flip, mid --insert), vertex")
    s.add_argument("--insert", action="store_true", help="insert a bivalent vertex instead of removing one")
    s.add_argument("--color", choices=["black", "white"], default="black")
    s.add_argument("--bit", type=int, choices=[0, 1], default=0)
    s.add_argument("-o", "--output")
    s = cmd("amalgamate", cmd_amalgamate, "disjoint union or defrosting")
    s.add_argument("kind", choices=["union", "defrost"])
    s.add_argument("network")
    s.add_argument("second", nargs="?")
    s.add_argument("--placement", choices=["side-by-side", "nested"], default="side-by-side")
    s.add_argument("--gap", type=int)
    s.add_argument("--source", type=int)
    s.add_argument("--sink", type=int)
    s.add_argument("-o", "--output")
    s = cmd("render", cmd_render, "draw the network as SVG")
    s.add_argument("network")
    s.add_argument("--signature", help="signature file, or 'geometric'")
    s.add_argument("--vectors", action="store_true", help="label edges with their edge vectors")
    s.add_argument("-o", "--output")
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    rep = Report(args.command)
    try:
        code = args.func(args, rep)
    except (InvalidNetworkError, AdmissibilityError, FileNotFoundError, IsADirectoryError,
            ValueError, KeyError) as exc:
        code = EXIT_INPUT
        rep.fail(f"input error: {exc}")
    except (DegeneracyError, SingularSystemError, ConvergenceError) as exc:
        code = EXIT_DEGENERATE
        rep.fail(f"degenerate: {exc}")
    rep.put("exit", code)
    if args.json:
        if args.command == "render" and args.output:
            rep.data.pop("svg", None)
        print(json.dumps(rep.data, indent=2, sort_keys=False, default=str))
    else:
        stream = sys.stdout if code in (EXIT_OK, EXIT_FAILED) else sys.stderr
        for line in rep.lines:
            print(line, file=stream)
    return code


if __name__ == "__main__":
    sys.exit(main())
