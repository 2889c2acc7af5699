"""Command-line front end.

Exit codes: 0 all checks pass (or the answer is Trivial); 1 a check fails
(or the triviality question answers NonTrivial); 2 inconclusive from a
window boundary; 3 parse or usage errors.
"""

from __future__ import annotations

import argparse
import json
import random
import sys

from .bar import NotOneConnectedError, bar_basis, bar_presentation, homology, hga_relations_check
from .demos import RunReport, demo_example4, demo_loopspace
from .gs import (
    GSContext,
    decide_triviality,
    is_gs_2cocycle,
    parse_cochain,
    random_cochain,
    total_D,
)
from .presentation import (
    PresentationError,
    parse_presentation,
    render_presentation,
    validate_dgha,
)
from .reporting import Report
from .tensor import WindowViolation


def _load_presentation(path: str):
    with open(path) as fh:
        return parse_presentation(fh.read(), name=path)


def _report_from_checks(command: str, rep: Report) -> RunReport:
    out = RunReport(command)
    for c in rep.checks:
        out.check(c.name, c.passed, c.witness)
    for n in rep.notes:
        out.note(n)
    return out


def _emit(report: RunReport, as_json: bool) -> int:
    if as_json:
        print(json.dumps(report.to_json_dict(), indent=2, sort_keys=True))
    else:
        print(report.to_text(), end="")
    return report.exit_code


def cmd_validate(args) -> int:
    p = _load_presentation(args.presentation)
    rep = validate_dgha(p)
    return _emit(_report_from_checks("validate", rep), args.json)


def cmd_bar(args) -> int:
    p = _load_presentation(args.presentation)
    bc = bar_basis(p, cap=args.cap)
    report = RunReport("bar")
    counts = [len(w) for w in bc.words]
    report.note(f"words per degree: {counts}")
    report.check("d is a differential in window", all(
        bc.d.apply(bc.d.value((nm,))).is_zero()
        for deg in range(bc.cap - 1) for nm in
        (bc.basis.names[i] for i in range(len(bc.basis.names))
         if bc.basis.degrees[i] == deg)))
    if args.emit:
        with open(args.emit, "w") as fh:
            fh.write(render_presentation(bar_presentation(bc)))
        report.artifacts.append(args.emit)
    return _emit(report, args.json)


def cmd_homology(args) -> int:
    p = _load_presentation(args.presentation)
    bc = bar_basis(p, cap=args.cap)
    H = homology(bc)
    report = RunReport("homology")
    dims = [len(r) for r in H.class_names]
    report.note(f"class counts per degree: {dims}")
    rep = validate_dgha(H.presentation)
    report.check("induced structure is a Hopf algebra in window", rep.passed)
    if args.emit:
        with open(args.emit, "w") as fh:
            fh.write(render_presentation(H.presentation))
        report.artifacts.append(args.emit)
    return _emit(report, args.json)


def cmd_hga_check(args) -> int:
    p = _load_presentation(args.presentation)
    window = args.window if args.window is not None else max(p.cap - 2, 0)
    rep = hga_relations_check(p, window=window)
    return _emit(_report_from_checks("hga-check", rep), args.json)


def cmd_gs_d2(args) -> int:
    host = _load_presentation(args.presentation)
    ctx = GSContext(host, window=args.window)
    rng = random.Random(args.seed)
    report = RunReport("gs-d2")
    ok = True
    for i in range(args.samples):
        c = random_cochain(ctx, rng, r=rng.choice([1, 2, 3]),
                           max_degree=args.window)
        if not total_D(ctx, total_D(ctx, c)).is_zero_within(
                args.window if host.d_is_zero() else args.window - 2):
            report.check(f"D(D(c)) = 0 for sample {i}", False)
            ok = False
            break
    if ok:
        report.check(f"D(D(c)) = 0 on {args.samples} seeded samples "
                     f"(seed {args.seed}, window {args.window})", True)
    return _emit(report, args.json)


def cmd_gs_cocycle(args) -> int:
    host = _load_presentation(args.presentation)
    with open(args.cochain) as fh:
        omega = parse_cochain(fh.read(), host)
    window = args.window if args.window is not None else host.cap
    ctx = GSContext(host, window=window)
    rep = is_gs_2cocycle(ctx, omega.part(-1, 3, 1, window),
                         omega.part(-1, 2, 2, window),
                         omega.part(-1, 1, 3, window), window=window)
    return _emit(_report_from_checks("gs-cocycle", rep), args.json)


def cmd_gs_trivial(args) -> int:
    host = _load_presentation(args.presentation)
    with open(args.cochain) as fh:
        omega = parse_cochain(fh.read(), host)
    ctx = GSContext(host, window=max(args.window, min(host.cap, args.window + 1)))
    report = RunReport("gs-trivial")
    res = decide_triviality(ctx, omega, window=args.window)
    report.note(f"verdict: {res.status}")
    if res.status == "trivial":
        entries = sum(len(f.table) for f in res.psi.parts.values())
        report.note(f"cls = 0: TRIVIAL (canonical 1-cochain with {entries} entries)")
        _emit(report, args.json)
        return 0
    if res.status == "nontrivial":
        report.note("cls != 0: NON-TRIVIAL")
        if args.certificate:
            with open(args.certificate, "w") as fh:
                fh.write(res.certificate.render())
            report.artifacts.append(args.certificate)
        _emit(report, args.json)
        return 1
    report.inconclusive(res.message)
    _emit(report, args.json)
    return 2


def cmd_transfer4(args) -> int:
    from .transfer import (TransferState, parse_pins, render_homotopies,
                           transfer_order3, transfer_order4, verify_transfer)
    from .gs import make_order4_cochain, render_cochain
    p = _load_presentation(args.presentation)
    bc = bar_basis(p, cap=args.cap)
    H = homology(bc)
    pins = {}
    if args.pins:
        with open(args.pins) as fh:
            pins = parse_pins(fh.read(), H)
    state = TransferState(H, pins=pins)
    transfer_order3(state)
    transfer_order4(state)
    rep = verify_transfer(state)
    report = _report_from_checks("transfer4", rep)
    omega = make_order4_cochain(H.presentation, state.omega(1, 3),
                                state.omega(2, 2), state.omega(3, 1))
    if args.emit:
        with open(args.emit, "w") as fh:
            fh.write(render_cochain(omega))
        report.artifacts.append(args.emit)
        homotopy_path = args.emit + ".homotopies"
        with open(homotopy_path, "w") as fh:
            fh.write(render_homotopies(state))
        report.artifacts.append(homotopy_path)
    else:
        print(render_cochain(omega), end="")
    return _emit(report, args.json)


def cmd_demo(args) -> int:
    if args.which == "example4":
        report = demo_example4(cap=args.cap)
    else:
        report = demo_loopspace(cap=args.cap, pin_i=args.pin_i,
                                skip_transfer=args.skip_transfer,
                                certificate_path=args.certificate)
    return _emit(report, args.json)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="gshopf",
        description="Exact GF(2) computations with DG Hopf algebras: bar "
                    "constructions, Gerstenhaber-Schack complexes, order-4 "
                    "structure relations, and deformation triviality.")
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, fn, **kwargs):
        sp = sub.add_parser(name, **kwargs)
        sp.set_defaults(fn=fn)
        sp.add_argument("--json", action="store_true",
                        help="machine-readable report")
        return sp

    sp = add("validate", cmd_validate, help="check the order-<=3 axioms")
    sp.add_argument("presentation")

    sp = add("bar", cmd_bar, help="build the bar complex")
    sp.add_argument("presentation")
    sp.add_argument("--cap", type=int, required=True)
    sp.add_argument("--emit", help="write the bar complex as a presentation file")

    sp = add("homology", cmd_homology, help="bar homology with induced structure")
    sp.add_argument("presentation")
    sp.add_argument("--cap", type=int, required=True)
    sp.add_argument("--emit", help="write the homology presentation file")

    sp = add("hga-check", cmd_hga_check, help="check the E-family relations")
    sp.add_argument("presentation")
    sp.add_argument("--window", type=int)

    sp = add("gs-d2", cmd_gs_d2, help="seeded D^2 = 0 sampling")
    sp.add_argument("presentation")
    sp.add_argument("--window", type=int, required=True)
    sp.add_argument("--samples", type=int, required=True)
    sp.add_argument("--seed", type=int, required=True)

    sp = add("gs-cocycle", cmd_gs_cocycle, help="GS 2-cocycle test")
    sp.add_argument("presentation")
    sp.add_argument("cochain")
    sp.add_argument("--window", type=int)

    sp = add("gs-trivial", cmd_gs_trivial, help="deformation triviality decision")
    sp.add_argument("presentation")
    sp.add_argument("cochain")
    sp.add_argument("--window", type=int, required=True)
    sp.add_argument("--certificate", help="write the infeasibility certificate here")

    sp = add("transfer4", cmd_transfer4, help="order-4 transfer along the bar complex")
    sp.add_argument("presentation")
    sp.add_argument("--cap", type=int, required=True)
    sp.add_argument("--pins", help="pin file for homotopy choices")
    sp.add_argument("--emit", help="write the transferred operations here")

    sp = add("demo", cmd_demo, help="run a built-in worked example")
    sp.add_argument("which", choices=["example4", "loopspace"])
    sp.add_argument("--cap", type=int, default=8)
    sp.add_argument("--pin-i", type=int, choices=[2, 3], default=2, dest="pin_i")
    sp.add_argument("--skip-transfer", action="store_true")
    sp.add_argument("--certificate", help="certificate output path")
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 3 if exc.code not in (0, None) else 0
    try:
        return args.fn(args)
    except (PresentationError, FileNotFoundError, NotOneConnectedError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except WindowViolation as exc:
        print(f"inconclusive: {exc}", file=sys.stderr)
        return 2
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    raise SystemExit(main())
