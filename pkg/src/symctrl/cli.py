"""Command-line front end: ingest a network spec, run the analysis pipeline,
emit human-readable or machine-readable reports.

Exit codes: 0 success (and, for design/check, controllable/observable);
1 usage or parse error; 2 design exhaustion or negative verdict;
3 enumeration cap exceeded.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from .control import (EnumerationCapError, RANK_METHODS, design_input_matrix,
                      design_output_matrix, enumerate_input_configs,
                      geometric_multiplicity, is_controllable, n_gamma)
from .isotypic import (block_diagonalize, decompose, decomposition_to_json,
                       basis_matrix_from_json, with_imported_basis)
from .network import EquivariantSystem, NetworkError, network_from_json
from .permgroup import EnumerationOverflowError
from .representations import (IrrepInfo, RepresentationError, cyclic_irreps,
                              dihedral_irreps, import_irreps, symmetric_irreps)
from .tolerances import DEFAULT_POLICY

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_NEGATIVE = 2
EXIT_CAP = 3


class CliError(Exception):
    """Input problem that should surface as exit code 1."""


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # argparse defaults to exit code 2
        self.print_usage(sys.stderr)
        raise SystemExit(EXIT_USAGE)


def _build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="symctrl",
                     description="Symmetry-aware controllability analysis "
                                 "and sparse input/output design")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("spec", help="network spec JSON file")
        p.add_argument("--tol", type=float, default=None,
                       help="override the entrywise zero tolerance")
        p.add_argument("--irreps", default=None, metavar="FILE",
                       help="import irreps from a JSON file instead of the "
                            "built-in family")
        p.add_argument("--format", choices=("text", "json"), default="text")

    p = sub.add_parser("analyze", help="group, irrep table, actuator bound, "
                                       "block spectrum")
    common(p)

    p = sub.add_parser("design", help="sparse input (or sensor) selection")
    common(p)
    p.add_argument("--observe", action="store_true",
                   help="design a sensor matrix instead of an input matrix")
    p.add_argument("--rank-greedy", action="store_true",
                   help="skip unit vectors that do not grow the reachable subspace")
    p.add_argument("--method", choices=RANK_METHODS, default="subspace")
    p.add_argument("--basis", default=None, metavar="FILE",
                   help="run the selection on an imported transformation "
                        "matrix (golden-basis reproduction)")

    p = sub.add_parser("check", help="rank tests for a given input set")
    common(p)
    p.add_argument("--inputs", required=True,
                   help="comma-separated 1-based state indices")

    p = sub.add_parser("enumerate", help="test every k-subset of states")
    common(p)
    p.add_argument("-k", type=int, required=True, help="number of inputs")
    p.add_argument("--cap", type=int, default=1_000_000)
    p.add_argument("--method", choices=RANK_METHODS, default="subspace")
    p.add_argument("--output", default=None, metavar="FILE",
                   help="write the CSV here instead of stdout")
    return parser


def _policy(args):
    if args.tol is None:
        return DEFAULT_POLICY
    if args.tol <= 0:
        raise CliError("--tol must be positive")
    return DEFAULT_POLICY.with_overrides(entry_abs=args.tol,
                                         column_zero=args.tol)


def _resolve_irreps(group, meta: dict, irreps_file: str | None) -> list[IrrepInfo]:
    if irreps_file:
        return import_irreps(irreps_file, group)
    family_info = meta.get("irreps")
    if not family_info:
        if group.order == 1:
            family_info = {"family": "trivial"}
        else:
            raise CliError("spec declares no irrep family; pass --irreps FILE "
                           "or add group.irreps to the spec")
    family = str(family_info.get("family", "")).lower()
    if family == "trivial":
        from .permgroup import closure
        from .representations import MatrixRep
        rep = MatrixRep.from_generators(group, [np.eye(1)] * len(group.generators),
                                        "trivial", dim=1)
        return [IrrepInfo.from_rep(rep)]
    order = int(family_info.get("order", 0))
    builders = {"cyclic": cyclic_irreps, "dihedral": dihedral_irreps,
                "symmetric": symmetric_irreps}
    if family not in builders:
        raise CliError(f"unknown irrep family {family!r}")
    return builders[family](order)


def _load(args):
    path = Path(args.spec)
    if not path.exists():
        raise CliError(f"spec file not found: {path}")
    try:
        spec, group, meta = network_from_json(path)
    except (NetworkError, ValueError, json.JSONDecodeError) as exc:
        raise CliError(f"cannot parse {path}: {exc}") from exc
    policy = _policy(args)
    irreps = _resolve_irreps(group, meta, args.irreps)
    system = EquivariantSystem.from_spec(spec, group, policy)
    return system, irreps


def _decompose(system, irreps):
    return decompose(system, irreps)


def cmd_analyze(args) -> int:
    system, irreps = _load(args)
    dec = _decompose(system, irreps)
    transformed, blocks, off = block_diagonalize(system.a, dec)
    bound = n_gamma(dec)
    equiv = system.equivariance_report()
    spectrum = [{"label": dec.components[s.component].label, "mu": s.mu,
                 "eigenvalues": _format_eigs(np.linalg.eigvals(block))}
                for s, block in zip(dec.spans, blocks)]
    if args.format == "json":
        out = decomposition_to_json(dec, system.a)
        out["group_order"] = system.group.order
        out["n_gamma"] = bound
        out["equivariance_residual"] = equiv.max_violation
        out["block_spectrum"] = spectrum
        print(json.dumps(out, indent=2))
        return EXIT_OK
    print(f"group order: {system.group.order}")
    print(f"equivariance residual: {equiv.max_violation:.3e}")
    print(f"state dimension: {system.state_dim}")
    print("irreps (label, n_i, d_i, m_i, type):")
    for comp in dec.components:
        print(f"  {comp.label:<16} {comp.irrep.dim:>3} {comp.multiplicity:>4} "
              f"{comp.iso_dim:>4}  {comp.irrep.fs_type}")
    print(f"n_gamma: {bound}")
    print(f"off-block residual: {off:.3e}")
    print("block spectrum:")
    for entry in spectrum:
        eigs = ", ".join(entry["eigenvalues"])
        print(f"  {entry['label']} mu={entry['mu']}: {eigs}")
    return EXIT_OK


def _format_eigs(values) -> list[str]:
    out = []
    for v in sorted(values, key=lambda z: (round(z.real, 9), round(z.imag, 9))):
        if abs(v.imag) < 1e-9:
            out.append(f"{v.real:.6g}")
        else:
            out.append(f"{v.real:.6g}{v.imag:+.6g}j")
    return out


def cmd_design(args) -> int:
    system, irreps = _load(args)
    if args.observe:
        design = design_output_matrix(system, irreps, args.method,
                                      args.rank_greedy)
    else:
        dec = _decompose(system, irreps)
        if args.basis:
            dec = with_imported_basis(dec, basis_matrix_from_json(args.basis))
        design = design_input_matrix(system, dec, args.method,
                                     args.rank_greedy)
    payload = design.to_json()
    if args.format == "json":
        print(json.dumps(payload, indent=2))
    else:
        kind = "sensors" if args.observe else "inputs"
        verdict = ("observable" if design.controllable else "NOT observable") \
            if args.observe else \
            ("controllable" if design.controllable else "NOT controllable")
        print(f"n_gamma: {design.n_gamma}")
        print(f"selected state indices ({kind}, in order): "
              f"{', '.join(str(i) for i in design.selected_states)}")
        print(f"verdict: {verdict} (rank {design.rank}/{system.state_dim}, "
              f"method {design.method})")
        for step in design.trace:
            mark = "+" if step.added else "skip"
            print(f"  [{mark}] {step.irrep_label} mu={step.mu} "
                  f"column {step.column} -> state {step.row}")
    return EXIT_OK if design.controllable else EXIT_NEGATIVE


def cmd_check(args) -> int:
    system, irreps = _load(args)
    try:
        indices = [int(tok) for tok in args.inputs.replace(" ", "").split(",") if tok]
    except ValueError as exc:
        raise CliError(f"cannot parse --inputs: {exc}") from exc
    n = system.state_dim
    if any(i < 1 or i > n for i in indices):
        raise CliError(f"--inputs indices must be in 1..{n}")
    b = np.zeros((n, len(indices)))
    for col, idx in enumerate(indices):
        b[idx - 1, col] = 1.0
    dec = _decompose(system, irreps)
    reports = [is_controllable(system.a, b, method, system.policy,
                               dec if method == "pbh" else None)
               for method in RANK_METHODS]
    all_ok = all(r.controllable for r in reports)
    if args.format == "json":
        print(json.dumps({
            "inputs": indices,
            "n": n,
            "controllable": all_ok,
            "reports": [{"method": r.method, "rank": r.rank,
                         "controllable": r.controllable} for r in reports],
        }, indent=2))
    else:
        print(f"inputs: {', '.join(map(str, indices))}")
        for r in reports:
            print(f"  {r}")
        print(f"verdict: {'controllable' if all_ok else 'NOT controllable'}")
    return EXIT_OK if all_ok else EXIT_NEGATIVE


def cmd_enumerate(args) -> int:
    system, _ = _load(args)
    try:
        results = enumerate_input_configs(system, args.k, args.method, args.cap)
    except EnumerationCapError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CAP
    lines = ["subset,controllable"]
    good = 0
    for subset, flag in results:
        good += flag
        lines.append(f"{' '.join(map(str, subset))},{'true' if flag else 'false'}")
    lines.append(f"# controllable {good} of {len(results)}")
    text = "\n".join(lines) + "\n"
    if args.output:
        Path(args.output).write_text(text, encoding="utf-8")
        print(f"wrote {len(results)} rows to {args.output} "
              f"({good} controllable)")
    else:
        sys.stdout.write(text)
    return EXIT_OK


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    handlers = {"analyze": cmd_analyze, "design": cmd_design,
                "check": cmd_check, "enumerate": cmd_enumerate}
    try:
        return handlers[args.command](args)
    except (CliError, NetworkError, RepresentationError,
            EnumerationOverflowError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


def entrypoint():  # console-script target
    sys.exit(main())


if __name__ == "__main__":
    entrypoint()
