"""Command-line front end: JSON workspaces, subcommands, deterministic reports.

Exit codes: 0 all checks pass, 1 a mathematical verification failed,
2 input or usage error.
"""

import argparse
import json
import sys
from dataclasses import dataclass
from typing import Dict, List, Optional

import numpy as np

from .linalg import SUPPORTED_PRIMES, Subspace
from .quiver import Quiver, RepMorphism, Representation, hom_basis, is_projective
from .ext import ext_space
from .endo import EnumerationCapError, ext_as_gamma_module, submodule_lattice
from .arduality import ar_pairing, stable_hom, tau
from .triangle import (
    delta,
    determined_oracle,
    eta,
    gamma,
    indecomposables,
    is_right_minimal,
    present_objects_check,
    right_minimal_version,
    ringel_F,
    universal_extension,
    verify_triangle,
)


class InputError(Exception):
    pass


@dataclass
class Workspace:
    p: int
    quiver: Quiver
    modules: Dict[str, Representation]
    morphisms: Dict[str, RepMorphism]

    def module(self, name: str) -> Representation:
        if name not in self.modules:
            raise InputError(f"unknown module {name!r}")
        return self.modules[name]

    def morphism(self, name: str) -> RepMorphism:
        if name not in self.morphisms:
            raise InputError(f"unknown morphism {name!r}")
        return self.morphisms[name]


def load_workspace(path: str) -> Workspace:
    try:
        with open(path) as fh:
            doc = json.load(fh)
    except OSError as exc:
        raise InputError(f"cannot read workspace: {exc}")
    except json.JSONDecodeError as exc:
        raise InputError(f"workspace is not valid JSON: {exc}")
    try:
        p = int(doc["field"]["p"])
    except (KeyError, TypeError, ValueError):
        raise InputError("workspace needs field.p")
    if p not in SUPPORTED_PRIMES:
        raise InputError(f"modulus {p} not supported; choose one of {SUPPORTED_PRIMES}")
    qdoc = doc.get("quiver")
    if not isinstance(qdoc, dict):
        raise InputError("workspace needs a quiver section")
    try:
        quiver = Quiver(
            tuple(str(v) for v in qdoc.get("vertices", [])),
            tuple((a["name"], str(a["from"]), str(a["to"]))
                  for a in qdoc.get("arrows", [])),
        )
    except (KeyError, TypeError) as exc:
        raise InputError(f"malformed quiver: {exc}")
    except ValueError as exc:
        raise InputError(str(exc))
    modules: Dict[str, Representation] = {}
    for name, mdoc in (doc.get("modules") or {}).items():
        dims = {str(v): int(d) for v, d in (mdoc.get("dims") or {}).items()}
        maps = {}
        for arrow, rows in (mdoc.get("maps") or {}).items():
            if arrow not in {a[0] for a in quiver.arrows}:
                raise InputError(f"module {name!r} maps unknown arrow {arrow!r}")
            _, s, t = quiver.arrow(arrow)
            arr = np.array(rows, dtype=np.int64).reshape(
                dims.get(t, 0), dims.get(s, 0)
            ) if rows else np.zeros((dims.get(t, 0), dims.get(s, 0)), dtype=np.int64)
            maps[arrow] = arr
        try:
            modules[name] = Representation(quiver, p, dims, maps)
        except ValueError as exc:
            raise InputError(f"module {name!r}: {exc}")
    morphisms: Dict[str, RepMorphism] = {}
    for name, fdoc in (doc.get("morphisms") or {}).items():
        try:
            src = modules[fdoc["from"]]
            tgt = modules[fdoc["to"]]
        except KeyError as exc:
            raise InputError(f"morphism {name!r} references unknown module {exc}")
        comps = {
            str(v): np.array(rows, dtype=np.int64).reshape(tgt.dims[str(v)], src.dims[str(v)])
            if rows else np.zeros((tgt.dims[str(v)], src.dims[str(v)]), dtype=np.int64)
            for v, rows in (fdoc.get("maps") or {}).items()
        }
        try:
            morphisms[name] = RepMorphism(src, tgt, comps)
        except ValueError as exc:
            raise InputError(f"morphism {name!r}: {exc}")
    return Workspace(p, quiver, modules, morphisms)


# ---------------------------------------------------------------------------
# helpers


def _subspace_doc(s: Subspace) -> dict:
    return {"dim": s.dim, "ambient_dim": s.ambient_dim,
            "basis": [[int(x) for x in row] for row in s.basis]}


def _dims_doc(x: Representation) -> dict:
    return {v: x.dims[v] for v in x.quiver.vertices}


def _resolve_universe(ws: Workspace, args) -> List[Representation]:
    if args.universe:
        return [ws.module(n) for n in args.universe.split(",")]
    return indecomposables(ws.quiver, ws.p, max_total_dim=args.max_dim)


def _lattice_member(ws: Workspace, y: Representation, k: Representation, spec: str) -> Subspace:
    module = ext_as_gamma_module(y, k)
    if spec == "zero":
        return Subspace.zero(module.dim, ws.p)
    if spec == "full":
        return Subspace.full(module.dim, ws.p)
    members = submodule_lattice(module).members
    try:
        idx = int(spec)
    except ValueError:
        raise InputError(f"submodule spec {spec!r} is not an index, 'zero' or 'full'")
    if not 0 <= idx < len(members):
        raise InputError(f"submodule index {idx} out of range (lattice size {len(members)})")
    return members[idx]


# ---------------------------------------------------------------------------
# command handlers: each returns (exit_code, report dict, text lines)


def cmd_hom(ws, args):
    x, y = ws.module(args.X), ws.module(args.Y)
    d = len(hom_basis(x, y))
    return 0, {"command": "hom", "dim": d}, [f"dim Hom({args.X}, {args.Y}) = {d}"]


def cmd_ext(ws, args):
    y, z = ws.module(args.Y), ws.module(args.Z)
    d = ext_space(y, z).dimension
    return 0, {"command": "ext", "dim": d}, [f"dim Ext1({args.Y}, {args.Z}) = {d}"]


def cmd_tau(ws, args):
    t = tau(ws.module(args.X))
    lines = ([f"tau {args.X} = 0 (zero object)"] if t.total_dim == 0
             else [f"tau {args.X}: dims " + " ".join(f"{v}:{t.dims[v]}" for v in ws.quiver.vertices)])
    return 0, {"command": "tau", "dims": _dims_doc(t), "zero": t.total_dim == 0}, lines


def cmd_stablehom(ws, args):
    sh = stable_hom(ws.module(args.C), ws.module(args.Y))
    return 0, {"command": "stablehom", "dim": sh.dimension,
               "hom_dim": len(sh.hom_basis)}, \
        [f"dim stable Hom({args.C}, {args.Y}) = {sh.dimension}"]


def cmd_pairing(ws, args):
    form = ar_pairing(ws.module(args.C), ws.module(args.Y))
    lines = [f"pairing between Ext1({args.Y}, tau {args.C}) and stable Hom({args.C}, {args.Y})",
             f"dimension {form.ext.dimension}"]
    for row in form.matrix:
        lines.append("  " + " ".join(str(int(v)) for v in row))
    return 0, {"command": "pairing", "dim": form.ext.dimension,
               "matrix": [[int(v) for v in row] for row in form.matrix]}, lines


def cmd_lattice(ws, args):
    y, k = ws.module(args.Y), ws.module(args.K)
    lat = submodule_lattice(ext_as_gamma_module(y, k))
    lines = [f"submodule lattice of Ext1({args.Y}, {args.K}): {len(lat.members)} members"]
    for i, s in enumerate(lat.members):
        lines.append(f"  [{i}] dim {s.dim} basis " +
                     ("|".join(" ".join(str(int(x)) for x in row) for row in s.basis) or "-"))
    return 0, {"command": "lattice", "size": len(lat.members),
               "members": [_subspace_doc(s) for s in lat.members],
               "inclusions": [list(e) for e in lat.inclusions]}, lines


def cmd_universal_ext(ws, args):
    y, k = ws.module(args.Y), ws.module(args.K)
    l = _lattice_member(ws, y, k, args.L)
    ue = universal_extension(y, k, l)
    lines = [f"universal extension of {args.Y} by add {args.K} with submodule dim {l.dim}",
             "kernel dims " + " ".join(f"{v}:{ue.ses.sub.dims[v]}" for v in ws.quiver.vertices),
             "middle dims " + " ".join(f"{v}:{ue.ses.middle.dims[v]}" for v in ws.quiver.vertices)]
    return 0, {"command": "universal-ext", "L": _subspace_doc(l),
               "kernel_dims": _dims_doc(ue.ses.sub),
               "middle_dims": _dims_doc(ue.ses.middle)}, lines


def cmd_delta(ws, args):
    image = delta(ws.morphism(args.alpha), ws.module(args.K))
    return 0, {"command": "delta", "image": _subspace_doc(image)}, \
        [f"delta({args.alpha}, {args.K}): submodule of dim {image.dim}"]


def cmd_gamma(ws, args):
    c, y = ws.module(args.C), ws.module(args.Y)
    l = _lattice_member(ws, y, tau(c), args.L)
    perp = gamma(c, y, l)
    return 0, {"command": "gamma", "L": _subspace_doc(l), "perp": _subspace_doc(perp)}, \
        [f"gamma({args.C}, {args.Y}, L dim {l.dim}) has dim {perp.dim}"]


def cmd_eta(ws, args):
    image = eta(ws.module(args.C), ws.morphism(args.alpha))
    return 0, {"command": "eta", "image": _subspace_doc(image)}, \
        [f"eta({args.C}, {args.alpha}): submodule of dim {image.dim}"]


def cmd_minimal(ws, args):
    alpha = ws.morphism(args.alpha)
    minimal = is_right_minimal(alpha)
    doc = {"command": "minimal", "right_minimal": minimal}
    lines = [f"{args.alpha} is{'' if minimal else ' not'} right minimal"]
    if alpha.is_epi() and not minimal:
        amin = right_minimal_version(alpha)
        doc["minimal_version_source_dims"] = _dims_doc(amin.source)
        lines.append("minimal version source dims " +
                     " ".join(f"{v}:{amin.source.dims[v]}" for v in ws.quiver.vertices))
    return 0, doc, lines


def cmd_determined(ws, args):
    alpha, c = ws.morphism(args.alpha), ws.module(args.C)
    universe = _resolve_universe(ws, args)
    ok = determined_oracle(alpha, c, universe, cap=args.max_enum)
    return 0, {"command": "determined", "determined": ok,
               "universe_size": len(universe)}, \
        [f"{args.alpha} is{'' if ok else ' not'} right {args.C}-determined "
         f"(universe of {len(universe)})"]


def cmd_triangle(ws, args):
    c, y = ws.module(args.C), ws.module(args.Y)
    universe = _resolve_universe(ws, args) if args.universe else None
    report = verify_triangle(c, y, universe=universe)
    lines = [f"triangle C={args.C} Y={args.Y}: lattice size {report.lattice_size}"]
    rows = []
    for i, r in enumerate(report.records):
        lines.append(
            f"  [{i}] L dim {r.l.dim} middle {r.middle_dims} kernel {r.kernel_dims} "
            f"delta={'ok' if r.delta_ok else 'FAIL'} minimal={'ok' if r.minimal_ok else 'FAIL'} "
            f"kernel={'ok' if r.kernel_ok else 'FAIL'} commute={'ok' if r.commute_ok else 'FAIL'}"
        )
        if not r.passed:
            lines.append("  offending submodule basis: " +
                         ("|".join(" ".join(str(int(x)) for x in row) for row in r.l.basis) or "-"))
        rows.append({"L": _subspace_doc(r.l), "middle_dims": list(r.middle_dims),
                     "kernel_dims": list(r.kernel_dims), "delta_ok": r.delta_ok,
                     "minimal_ok": r.minimal_ok, "kernel_ok": r.kernel_ok,
                     "commute_ok": r.commute_ok, "compat_ok": r.compat_ok,
                     "determined_ok": r.determined_ok})
    lines.append(f"order checks: {'ok' if report.order_ok else 'FAIL'}")
    lines.append(f"verdict: {'pass' if report.passed else 'FAIL'}")
    return (0 if report.passed else 1), \
        {"command": "triangle", "lattice_size": report.lattice_size,
         "records": rows, "order_ok": report.order_ok, "passed": report.passed}, lines


def cmd_ringel(ws, args):
    cp, c, y = ws.module(args.Cprime), ws.module(args.C), ws.module(args.Y)
    theta = np.array([int(t) for t in args.theta.split(",")] if args.theta else [],
                     dtype=np.int64)
    value = ringel_F(cp, c, y, theta)
    return 0, {"command": "ringel", "value": _subspace_doc(value)}, \
        [f"F(theta) has dim {value.dim} inside stable Hom({args.C}, {args.Y})"]


def cmd_present(ws, args):
    report = present_objects_check(ws.module(args.C), ws.module(args.Y))
    lines = [f"present objects for C={args.C}, Y={args.Y} (bound n = {report.bound})"]
    for r in report.records:
        lines.append(f"  L dim {r.l.dim}: middle {r.middle_dims} "
                     f"{'certified' if r.passed else 'FAIL'}")
    lines.append(f"verdict: {'pass' if report.passed else 'FAIL'}")
    return (0 if report.passed else 1), \
        {"command": "present", "bound": report.bound, "passed": report.passed,
         "records": [{"L": _subspace_doc(r.l), "middle_dims": list(r.middle_dims),
                      "passed": r.passed} for r in report.records]}, lines


def cmd_indecomposables(ws, args):
    cat = indecomposables(ws.quiver, ws.p, max_total_dim=args.max_dim)
    lines = [f"{len(cat)} indecomposables"]
    for x in cat:
        flags = []
        if is_projective(x):
            flags.append("projective")
        lines.append("  dims " + " ".join(f"{v}:{x.dims[v]}" for v in ws.quiver.vertices)
                     + (" (" + ", ".join(flags) + ")" if flags else ""))
    return 0, {"command": "indecomposables", "count": len(cat),
               "dims": [_dims_doc(x) for x in cat]}, lines


# ---------------------------------------------------------------------------
# dispatch


def _common_options(parser: argparse.ArgumentParser, suppress: bool) -> None:
    # the same flags are legal before and after the subcommand
    d = argparse.SUPPRESS if suppress else None
    parser.add_argument("--workspace", default=d, help="path to a JSON workspace")
    parser.add_argument("--json", action="store_true",
                        default=argparse.SUPPRESS if suppress else False,
                        help="machine-readable output")
    parser.add_argument("--max-enum", type=int,
                        default=argparse.SUPPRESS if suppress else 2 ** 16,
                        help="cap for element enumerations")
    parser.add_argument("--universe", default=d,
                        help="comma-separated module names used as test universe")
    parser.add_argument("--max-dim", type=int, default=d,
                        help="total-dimension bound for indecomposable catalogs")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="quiverrep",
        description="exact verification workbench for quiver representations over F_p",
    )
    _common_options(parser, suppress=False)
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, handler, *specs):
        sp = sub.add_parser(name)
        _common_options(sp, suppress=True)
        for spec in specs:
            sp.add_argument(spec)
        sp.set_defaults(handler=handler)
        return sp

    add("hom", cmd_hom, "--X", "--Y")
    add("ext", cmd_ext, "--Y", "--Z")
    add("tau", cmd_tau, "--X")
    add("stablehom", cmd_stablehom, "--C", "--Y")
    add("pairing", cmd_pairing, "--C", "--Y")
    add("lattice", cmd_lattice, "--Y", "--K")
    add("universal-ext", cmd_universal_ext, "--Y", "--K", "--L")
    add("delta", cmd_delta, "--alpha", "--K")
    add("gamma", cmd_gamma, "--C", "--Y", "--L")
    add("eta", cmd_eta, "--C", "--alpha")
    add("minimal", cmd_minimal, "--alpha")
    add("determined", cmd_determined, "--alpha", "--C")
    add("triangle", cmd_triangle, "--C", "--Y")
    sp = add("ringel", cmd_ringel, "--Cprime", "--C", "--Y")
    sp.add_argument("--theta", default="")
    add("present", cmd_present, "--C", "--Y")
    add("indecomposables", cmd_indecomposables)
    return parser


def emit_report(doc: dict, lines: List[str], as_json: bool) -> None:
    if as_json:
        sys.stdout.write(json.dumps(doc, sort_keys=True, indent=2) + "\n")
    else:
        sys.stdout.write("\n".join(lines) + "\n")


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code else 0
    if not args.workspace:
        sys.stderr.write("error: --workspace is required\n")
        return 2
    try:
        ws = load_workspace(args.workspace)
        code, doc, lines = args.handler(ws, args)
    except InputError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 2
    except (KeyError, ValueError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 2
    except EnumerationCapError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 2
    except AssertionError as exc:
        sys.stderr.write(f"verification failure: {exc}\n")
        return 1
    emit_report(doc, lines, args.json)
    return code


if __name__ == "__main__":
    sys.exit(main())
