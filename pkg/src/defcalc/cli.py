"""Command line front-end.

Exit codes: 0 pass, 1 mathematical failure, 2 input error, 3 resource guard.
"""

from __future__ import annotations

import argparse
import json
import os
import random
from importlib import resources
import sys
from fractions import Fraction

from .algebras import KINDS, InputError, parse_algebra, verify
from .linalg import SparseMatrix, fraction_str
from .operads import SizeError

COMPLEXES = ("hochschild", "gs", "pois", "convolution", "plus")
VARIANTS = ("full", "ge1", "ge2", "gt0", "gt1")
IDENTIFICATIONS = ("ass-plus", "ass-semidirect", "pois-truncation", "fiber-seq", "di-end")
COOPERADS = {"ass": "Ass", "com": "Com", "lie": "Lie", "pois1": "Pois1", "di": "Di"}
MAX_BRANCHES = 32


class MathFailure(Exception):
    """Carries a report whose checks failed (exit code 1)."""

    def __init__(self, report):
        super().__init__("mathematical check failed")
        self.report = report


def _jsonable(obj):
    if isinstance(obj, Fraction):
        return fraction_str(obj)
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    return obj


def _load(args):
    if not args.input:
        raise InputError("--input is required")
    try:
        with open(args.input, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise InputError(f"cannot read {args.input}: {exc.strerror}") from None
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"malformed JSON: {exc}") from None
    if isinstance(obj, dict) and args.kind:
        obj = dict(obj, kind=args.kind)
    return parse_algebra(obj)


def _require_valid(alg):
    from .defcomplexes import StructureError

    bad = verify(alg)
    if bad:
        raise StructureError(f"{bad[0]['relation']} fails on {tuple(bad[0]['basis'])}", bad)


def _table(d: dict) -> dict:
    return {str(k): v for k, v in sorted(d.items())}


# ---------------------------------------------------------------------------
# commands

def cmd_verify(args) -> dict:
    alg = _load(args)
    bad = verify(alg)
    report = {"command": "verify", "name": alg.name, "kind": alg.kind, "dim": alg.dim,
              "valid": not bad, "violations": bad}
    if bad:
        raise MathFailure(report)
    return report


def _deformation_algebra(alg, args, plus: bool = False):
    """The L-infinity algebra controlling deformations of ``alg``."""
    from .convolution import ConvolutionAlgebra, structure_element
    from .defcomplexes import HochschildComplex, hochschild_linfty
    from .linfty import twist
    from .operads import koszul_dual_cooperad

    if alg.kind == "ass" and args.complex in (None, "hochschild"):
        H = HochschildComplex(alg, "ge1" if plus else "ge2", args.weight_cap, args.size_budget)
        return hochschild_linfty(H)
    if alg.kind not in COOPERADS:
        raise InputError(f"no deformation L-infinity algebra for kind {alg.kind}")
    cap = 1 if alg.kind == "di" else args.arity_cap
    C = koszul_dual_cooperad(COOPERADS[alg.kind], max(cap, 2))
    g = ConvolutionAlgebra(C, alg.X, cap=cap, plus=plus, budget=args.size_budget)
    return twist(g, structure_element(g, alg))


def cmd_cohomology(args) -> dict:
    from .defcomplexes import GSComplex, HochschildComplex, PoisComplex

    alg = _load(args)
    _require_valid(alg)
    complex_ = args.complex or {"ass": "hochschild", "bialg": "gs", "pois1": "pois"}.get(alg.kind, "convolution")
    stable = None
    graded_zero = all(d == 0 for d in alg.degrees)
    if complex_ == "hochschild":
        variant = args.variant or "full"
        if variant not in ("full", "ge1", "ge2"):
            raise InputError(f"variant {variant} does not apply to the Hochschild complex")
        H = HochschildComplex(alg, variant, args.weight_cap, args.size_budget)
        dims, coh, stable = H.dims(), H.cohomology(), H.stable_degree()
        grading = "hochschild"
    elif complex_ == "gs":
        variant = "full"
        G = GSComplex(alg, args.weight_cap, args.size_budget)
        dims, coh, stable = G.dims(), G.cohomology(), G.stable_degree()
        grading = "total"
    elif complex_ == "pois":
        variant = args.variant or "gt0"
        if variant not in ("full", "gt0", "gt1"):
            raise InputError(f"variant {variant} does not apply to the Pois complex")
        P = PoisComplex(alg, 1, variant, args.weight_cap, args.size_budget)
        dims, coh, stable = P.dims(), P.cohomology(), P.stable_degree()
        grading = "convolution"
    else:
        variant = "plus" if complex_ == "plus" else "twisted"
        g = _deformation_algebra(alg, argparse.Namespace(**{**vars(args), "complex": "convolution"}),
                                 plus=complex_ == "plus")
        dims = {}
        for d in g.degrees:
            dims[d] = dims.get(d, 0) + 1
        coh = g.cohomology()
        cap = 1 if alg.kind == "di" else args.arity_cap
        stable = cap - 2 if graded_zero and alg.kind != "di" else None
        grading = "convolution"
    return {"command": "cohomology", "name": alg.name, "kind": alg.kind, "complex": complex_,
            "variant": variant, "grading": grading,
            "caps": {"arity": args.arity_cap, "weight": args.weight_cap},
            "dims": _table(dims), "cohomology": _table(coh), "stable_degree": stable}


def cmd_deform(args) -> dict:
    from .artinian import tensor_with_ideal, truncated_polynomial
    from .mc import CohomologyClasses, formal_deformation, homotopy_classes, mc_report

    alg = _load(args)
    _require_valid(alg)
    # the plus version: gauge equivalences include linear automorphisms of A
    g = _deformation_algebra(alg, args, plus=True)
    if args.order < 1:
        raise InputError("--order must be >= 1")
    h1 = CohomologyClasses(g, 1)
    if h1.dim > MAX_BRANCHES:
        raise SizeError(f"{h1.dim} first-order branches exceed the guard {MAX_BRANCHES}")
    res = formal_deformation(g, args.order)
    G = tensor_with_ideal(g, truncated_polynomial(args.order + 1))
    vertices, vertex_branches = [], []
    for n, b in enumerate(res["branches"]):
        if b["lift"] is not None:
            vertex_branches.append(n)
            tau = {}
            for k, vec in b["lift"].items():
                tau.update({G.index[(i, k - 1)]: c for i, c in vec.items()})
            vertices.append(tau)
    classes = homotopy_classes(G, vertices, args.sullivan_degree) if vertices else {
        "classes": [], "conclusive": True, "inconclusive": []}
    report = mc_report(res["ring"], vertices, classes["classes"], res["obstructions"])
    report.update({
        "command": "deform", "name": alg.name, "kind": alg.kind, "order": args.order,
        "h1": res["h1"], "h2": res["h2"], "conclusive": classes["conclusive"],
        "vertex_branches": vertex_branches,
        "branches": [{"first_order": [[i, fraction_str(c)] for i, c in sorted(b["first_order"].items())],
                      "reached": b["reached"],
                      "obstructed_at": b["obstruction"]["order"] if b["obstruction"] else None,
                      "orders": b["orders"]} for b in res["branches"]]})
    return report


def _random_complex(seed: int):
    from .graded import ChainComplex, GradedSpace

    rng = random.Random(seed)
    n = rng.randint(1, 3)
    degrees = sorted(rng.choice([0, 1, 2]) for _ in range(n))
    comps: dict = {}
    for i, d in enumerate(degrees):
        comps.setdefault(d, []).append(f"e{i}")
    entries = []
    # a random differential of degree 1 with d^2 = 0: d = rank-one pieces between consecutive degrees
    for i in range(n):
        for j in range(n):
            if degrees[i] == degrees[j] + 1 and degrees[j] == 0 and rng.random() < 0.5:
                entries.append((i, j, rng.choice([-1, 1, 2])))
    return ChainComplex(GradedSpace(comps), SparseMatrix.from_entries(n, n, entries))


def cmd_crosscheck(args) -> dict:
    from .defcomplexes import PoisComplex, hochschild_vs_convolution, semidirect_vs_hochschild
    from .fibration import algebra_fiber_sequence, di_convolution_is_end

    ident = args.identification
    details: dict = {}
    if ident == "di-end":
        X = _load(args).X if args.input else _random_complex(args.seed)
        rep = di_convolution_is_end(X)
        ok = rep["match"]
        details = rep
    else:
        alg = _load(args)
        _require_valid(alg)
        if ident == "ass-plus":
            if alg.kind != "ass":
                raise InputError("ass-plus needs an associative algebra")
            a = hochschild_vs_convolution(alg, "ge2", args.weight_cap, args.size_budget)
            b = hochschild_vs_convolution(alg, "ge1", args.weight_cap, args.size_budget)
            details = {"ge2_vs_convolution": a, "ge1_vs_plus": b}
            ok = a["match"] and b["match"]
        elif ident == "ass-semidirect":
            if alg.kind != "ass":
                raise InputError("ass-semidirect needs an associative algebra")
            details = semidirect_vs_hochschild(alg, args.weight_cap, args.size_budget)
            ok = details["match"]
        elif ident == "pois-truncation":
            details = PoisComplex(alg, 1, "gt0", args.weight_cap, args.size_budget).truncation_report()
            ok = details["ok"]
        else:
            if alg.kind not in ("ass", "com", "lie", "pois1"):
                raise InputError("fiber-seq needs an algebra of kind ass, com, lie or pois1")
            details = algebra_fiber_sequence(alg, args.arity_cap).report()
            ok = details["ok"]
    report = {"command": "crosscheck", "identification": ident, "pass": bool(ok), "details": _jsonable(details)}
    if not ok:
        raise MathFailure(report)
    return report


COMMANDS = {"verify": cmd_verify, "cohomology": cmd_cohomology, "deform": cmd_deform, "crosscheck": cmd_crosscheck}


# ---------------------------------------------------------------------------
# output

def _text(report: dict) -> str:
    cmd = report.get("command")
    lines = []
    if "error" in report:
        return f"error ({report['exit_code']}): {report['error']}"
    if cmd == "verify":
        lines.append(f"{report['name']} ({report['kind']}, dim {report['dim']}): "
                     + ("valid" if report["valid"] else "INVALID"))
        for v in report["violations"]:
            lines.append(f"  {v['relation']} on {tuple(v['basis'])}: {v['defect']}")
    elif cmd == "cohomology":
        lines.append(f"{report['complex']} ({report['variant']}) of {report['name']}")
        lines.append(f"{'degree':>8} {'dim C':>8} {'dim H':>8}")
        for d, n in report["dims"].items():
            lines.append(f"{d:>8} {n:>8} {report['cohomology'].get(d, 0):>8}")
        stable = report["stable_degree"]
        lines.append("stable through degree " + (str(stable) if stable is not None else "unknown"))
    elif cmd == "deform":
        lines.append(f"formal deformations of {report['name']} over {report['ring']}")
        lines.append(f"H^1 = {report['h1']}, H^2 = {report['h2']}")
        for b, info in enumerate(report["branches"]):
            state = "unobstructed" if info["obstructed_at"] is None else f"obstructed at order {info['obstructed_at']}"
            dims = ", ".join(f"{o['order']}:{o['solution_dim']}" for o in info["orders"])
            lines.append(f"  branch {b}: reached order {info['reached']}, {state}; solution dims {dims or '-'}")
        for ob in report["obstructions"]:
            lines.append(f"  obstruction space at order {ob['order']}: dim {ob['class_dim']}")
        named = [[report["vertex_branches"][v] for v in cls] for cls in report["classes"]]
        lines.append(f"  homotopy classes of lifts (by branch): {named}"
                     + ("" if report["conclusive"] else " (inconclusive)"))
    else:
        lines.append(f"{report['identification']}: " + ("pass" if report["pass"] else "FAIL"))
    return "\n".join(lines)


def schema(name: str) -> dict:
    """JSON schema shipped with the package (``verify``, ``cohomology``, ``deform``, ``crosscheck``, ``error``)."""
    text = resources.files("defcalc").joinpath("schemas", f"{name}.schema.json").read_text(encoding="utf-8")
    return json.loads(text)


def emit(report: dict, fmt: str, stream=None) -> None:
    stream = stream or sys.stdout
    if fmt == "json":
        stream.write(json.dumps(_jsonable(report), indent=2, sort_keys=True) + "\n")
    else:
        stream.write(_text(report) + "\n")


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--input", help="algebra specification (JSON)")
    common.add_argument("--kind", choices=KINDS, help="override the kind given in the input")
    common.add_argument("--complex", choices=COMPLEXES, help="deformation complex to build")
    common.add_argument("--variant", choices=VARIANTS, help="truncation variant")
    common.add_argument("--arity-cap", type=int, default=4, help="arity cap N (default 4)")
    common.add_argument("--weight-cap", type=int, default=4, help="weight cap W (default 4)")
    common.add_argument("--order", type=int, default=3, help="deformation order n (default 3)")
    common.add_argument("--sullivan-degree", type=int, default=4, help="polynomial degree D of forms (default 4)")
    common.add_argument("--format", choices=("json", "text"), default="json")
    common.add_argument("--seed", type=int, default=0, help="seed for randomized inputs")
    common.add_argument("--size-budget", type=int, default=None,
                        help="largest matrix dimension attempted (default: $DEFCALC_SIZE_BUDGET)")
    parser = argparse.ArgumentParser(prog="defcalc", description="Exact operadic deformation complexes.")
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("verify", parents=[common], help="check the defining relations of an algebra")
    sub.add_parser("cohomology", parents=[common], help="cohomology table of a deformation complex")
    sub.add_parser("deform", parents=[common], help="order-by-order formal deformations")
    cc = sub.add_parser("crosscheck", parents=[common], help="verify an identification of complexes")
    cc.add_argument("identification", choices=IDENTIFICATIONS)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code else 0
    for name in ("arity_cap", "weight_cap", "sullivan_degree"):
        if getattr(args, name) < 1:
            parser.print_usage(sys.stderr)
            sys.stderr.write(f"--{name.replace('_', '-')} must be positive\n")
            return 2
    saved = os.environ.get("DEFCALC_SIZE_BUDGET")
    if args.size_budget is not None:
        os.environ["DEFCALC_SIZE_BUDGET"] = str(args.size_budget)
    try:
        report, code = _run(args)
    finally:
        if saved is None:
            os.environ.pop("DEFCALC_SIZE_BUDGET", None)
        else:
            os.environ["DEFCALC_SIZE_BUDGET"] = saved
    emit(report, args.format)
    return code


def _run(args) -> tuple[dict, int]:
    from .defcomplexes import StructureError

    try:
        report = COMMANDS[args.command](args)
        code = 0
    except MathFailure as exc:
        report, code = exc.report, 1
    except StructureError as exc:
        report = {"command": args.command, "error": str(exc), "exit_code": 1, "violations": exc.violations}
        code = 1
    except InputError as exc:
        report, code = {"command": args.command, "error": str(exc), "exit_code": 2}, 2
    except (SizeError, RecursionError, MemoryError) as exc:
        report, code = {"command": args.command, "error": str(exc) or type(exc).__name__, "exit_code": 3}, 3
    return report, code


if __name__ == "__main__":
    sys.exit(main())
