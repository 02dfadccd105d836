"""``bellscope`` command-line interface.

Exit codes: 0 success, 1 other errors, 2 an SDP solve stayed undecided,
3 a face was left without a quantum witness.
"""

from __future__ import annotations

import argparse
import sys
import time
from pathlib import Path

import numpy as np

from . import classify, hardy, io, npa, quantum
from .errors import BellscopeError, Inconclusive, WitnessNotFound
from .geometry import Face, Segment, center_segment
from .principles import PRINCIPLES, boundary_mu, ml_value, uffink_value
from .sdp import FEAS_TOL, format_matrix

METHODS = ("uffink", "ml", "npa1", "npa1ab")
DIMWITNESS_QUTRIT_MIN = 0.20
DIMWITNESS_QUBIT_MAX = 1e-6


class _Parser(argparse.ArgumentParser):
    # usage errors exit 1 so that 2 stays reserved for undecided solves
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def _positive(text: str) -> float:
    v = float(text)
    if not v > 0:
        raise argparse.ArgumentTypeError("tolerances must be > 0")
    return v


def _zeroed(text: str) -> Face:
    """Face from a comma list of zeroed indices, e.g. ``6,8``, or ``mask=<int>``."""
    if text.startswith("mask="):
        return Face.from_mask(int(text[5:]))
    try:
        return Face(frozenset(int(t) for t in text.split(",") if t))
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from exc


def _common() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(add_help=False)
    p.add_argument("--tol-mu", type=_positive, default=npa.TOL_MU, help="bisection width on mu")
    p.add_argument("--feas-tol", type=_positive, default=FEAS_TOL, help="SDP feasibility tolerance")
    p.add_argument("--zero-tol", type=_positive, default=quantum.ZERO_TOL,
                   help="largest probability counted as zero in witnesses")
    p.add_argument("--restarts", type=int, default=200, help="multistart budget for quantum searches")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", type=Path, default=None, help="output directory")
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    return p


def build_parser() -> argparse.ArgumentParser:
    common = _common()
    parser = _Parser(prog="bellscope", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    c = sub.add_parser("classify", parents=[common], help="void/not-void table of all 255 faces")
    c.add_argument("--threads", type=int, default=None, help="worker processes (default BELLSCOPE_THREADS or CPUs)")
    c.add_argument("--verify-voids", type=int, default=0, metavar="N",
                   help="cross-check N sampled void faces by qubit search and ML")
    c.set_defaults(func=cmd_classify)

    b = sub.add_parser("boundary", parents=[common], help="mu* on a face's centre segment")
    b.add_argument("face", type=_zeroed, help="zeroed indices, e.g. 6,8 (or mask=<int>)")
    b.add_argument("--method", choices=METHODS, default="npa1ab")
    b.add_argument("--curve", type=int, default=0, metavar="N", help="also sample N seeded directions in the face")
    b.add_argument("--profile", type=int, default=0, metavar="N",
                   help="emit (mu, statistic) pairs on N+1 grid points of the centre segment")
    b.set_defaults(func=cmd_boundary)

    n = sub.add_parser("npa", parents=[common], help="NPA boundary along a segment")
    n.add_argument("--level", choices=npa.LEVELS, default="1+ab")
    n.add_argument("--segment", default="face:6,8", help="face:<i,j,..> | hardy | weights:<w1,..,w8>")
    n.add_argument("--tol", type=_positive, default=None, help="alias for --tol-mu")
    n.set_defaults(func=cmd_npa)

    p = sub.add_parser("principles", parents=[common], help="Uffink/ML mu* per face")
    p.add_argument("faces", type=_zeroed, nargs="*", help="faces to report (default: every face of dim >= 1)")
    p.set_defaults(func=cmd_principles)

    h = sub.add_parser("hardy", parents=[common], help="Hardy point and quantum vs almost-quantum gap")
    h.add_argument("--table1", action="store_true", help="print the optimal distribution")
    h.add_argument("--gap", action="store_true", help="compare quantum and almost-quantum success")
    h.set_defaults(func=cmd_hardy)

    d = sub.add_parser("dimwitness", parents=[common], help="qubit CHSH vs qutrit I3322 under two zeros")
    d.set_defaults(func=cmd_dimwitness)
    return parser


# ---------------------------------------------------------------------------


def cmd_classify(args) -> int:
    out = args.out or Path("out")
    (out / "witnesses").mkdir(parents=True, exist_ok=True)
    t0 = time.perf_counter()
    try:
        table = classify.classify_all(args.restarts, args.seed, args.zero_tol, args.threads)
    except WitnessNotFound as exc:
        print(f"no quantum witness found for masks: {' '.join(map(str, exc.masks))}", file=sys.stderr)
        return 3
    paths = {}
    for c in table:
        if c.witness is None:
            continue
        rel = f"witnesses/face_{c.face.mask:03d}.json"
        io.write_witness(out / rel, c.face, c.witness, c.chsh, c.witness_behavior(),
                         f"{c.evidence_kind}:{c.evidence_detail}")
        paths[c.face.mask] = rel
    if args.format == "csv":
        io.write_faces_csv(table, out / "faces.csv", paths)
    else:
        io.write_faces_json(table, out / "faces.json", paths)
    counts = classify.summarize(table)
    io.write_summary(counts, out / "summary.json")
    print("dim  faces  voids")
    for dim in range(7, -1, -1):
        print(f"{dim:>3}  {counts[dim][0]:>5}  {counts[dim][1]:>5}")
    print(f"classified 255 faces in {time.perf_counter() - t0:.1f} s -> {out}")
    if args.verify_voids:
        rng = np.random.default_rng(args.seed)
        voids = [c.face for c in table if c.is_void]
        picks = sorted(rng.choice(len(voids), size=min(args.verify_voids, len(voids)), replace=False))
        for k in picks:
            chk = classify.verify_void(voids[k], args.restarts, args.seed)
            print(f"void {voids[k]}: best qubit chsh {chk.qubit_max:.3g} "
                  f"({'ok' if chk.qubit_confirms else 'FAILED'}), ML mu* {chk.ml_mu_star:.6g}")
    return 0


def _membership(method, feas_tol):
    level = {"npa1": "1", "npa1ab": "1+ab"}[method]
    return lambda beh: npa.contains(beh, level, feas_tol)


def _mu_star(seg: Segment, args) -> tuple[float, int]:
    if args.method in PRINCIPLES:
        return boundary_mu(seg, PRINCIPLES[args.method]), 0
    level = {"npa1": "1", "npa1ab": "1+ab"}[args.method]
    res = npa.boundary(seg, level, args.tol_mu, args.feas_tol)
    return res.mu_star, res.inconclusive


def _statistic(method, feas_tol):
    if method == "uffink":
        return uffink_value
    if method == "ml":
        return lambda beh: ml_value(beh).value
    check = _membership(method, feas_tol)
    return lambda beh: float(check(beh))


def cmd_boundary(args) -> int:
    face = args.face
    seg = center_segment(face)
    mu, undecided = _mu_star(seg, args)
    report = {"mask": face.mask, "zeroed": sorted(face.zeroed), "method": args.method,
              "mu_star": mu, "tol_mu": args.tol_mu, "feas_tol": args.feas_tol,
              "undecided_steps": undecided}
    print(f"face {face} method {args.method}: mu* = {mu:.6g} (undecided steps {undecided})")
    curve = []
    if args.curve:
        rng = np.random.default_rng(args.seed)
        verts = [i - 1 for i in face.local_vertices]
        for k in range(args.curve):
            w = np.zeros(8)
            w[verts] = rng.dirichlet(np.ones(len(verts)))
            m, _ = _mu_star(Segment(w), args)
            curve.append((k, *w, m))
    profile = []
    if args.profile:
        stat = _statistic(args.method, args.feas_tol)
        profile = [(t, stat(seg.point(t))) for t in np.linspace(0.0, 1.0, args.profile + 1)]
    if args.out:
        args.out.mkdir(parents=True, exist_ok=True)
        stem = f"boundary_{face.mask:03d}_{args.method}"
        if curve:
            io.write_pairs_csv(curve, args.out / f"{stem}_curve.csv",
                               ("direction", *(f"w{i}" for i in range(1, 9)), "mu_star"))
            report["curve"] = f"{stem}_curve.csv"
        if profile:
            io.write_pairs_csv(profile, args.out / f"{stem}_profile.csv")
            report["profile"] = f"{stem}_profile.csv"
        io.dump_json(report, args.out / f"{stem}.json")
    else:
        for row in curve:
            print(f"direction {row[0]}: mu* = {row[-1]:.6g}")
        for t, s in profile:
            print(f"{t:.6f},{s!r}")
    return 0


def _parse_segment(spec: str) -> Segment:
    if spec == "hardy":
        return hardy.hardy_segment()
    kind, _, rest = spec.partition(":")
    if kind == "face":
        return center_segment(_zeroed(rest))
    if kind == "weights":
        return Segment([float(t) for t in rest.split(",")], label="custom")
    raise argparse.ArgumentTypeError(f"unknown segment spec {spec!r}")


def cmd_npa(args) -> int:
    tol = args.tol or args.tol_mu
    seg = _parse_segment(args.segment)
    res = npa.boundary(seg, args.level, tol, args.feas_tol)
    report = {"level": args.level, "segment": args.segment, "mu_star": res.mu_star, "tol_mu": tol,
              "feas_tol": args.feas_tol, "undecided_steps": res.inconclusive,
              "certificate_min_eigenvalue": res.certificate.min_eigenvalue}
    print(f"level {args.level} segment {args.segment}: mu* = {res.mu_star:.6g} "
          f"(undecided steps {res.inconclusive})")
    if args.segment == "hardy":
        report["p_hardy"] = res.mu_star / 2.0
        print(f"p_H = mu*/2 = {res.mu_star / 2.0:.6g}")
    if args.out:
        args.out.mkdir(parents=True, exist_ok=True)
        stem = f"npa_{args.level.replace('+', '')}_{args.segment.replace(':', '_').replace(',', '-')}"
        labels = npa.build(args.level).word_labels()
        (args.out / f"{stem}_certificate.txt").write_text(format_matrix(res.matrix, labels, 9) + "\n")
        report["certificate"] = f"{stem}_certificate.txt"
        report["certificate_matrix"] = res.matrix.tolist()
        io.dump_json(report, args.out / f"{stem}.json")
    return 0


def cmd_principles(args) -> int:
    faces = args.faces or [f for f in map(Face.from_mask, range(1, 256)) if f.dim >= 1]
    rows = []
    for face in faces:
        seg = center_segment(face)
        for name, check in PRINCIPLES.items():
            mu = boundary_mu(seg, check)
            rows.append((face.mask, name, mu, mu <= args.tol_mu))
    if args.out:
        args.out.mkdir(parents=True, exist_ok=True)
        io.write_principles_csv(rows, args.out / "principles.csv")
    else:
        print(",".join(io.PRINCIPLE_COLUMNS))
        for m, n, mu, ok in rows:
            print(f"{m},{n},{mu!r},{str(ok).lower()}")
    return 0


def cmd_hardy(args) -> int:
    show_table, show_gap = args.table1, args.gap
    if not (show_table or show_gap):
        show_table = show_gap = True
    report = {}
    if show_table:
        beh = hardy.hardy_max_point()
        exact = hardy.table1()
        print("x y  a b  closed form         value            Born rule        |diff|")
        worst = 0.0
        for (x, y), forms in hardy.TABLE1_FORMS.items():
            for (a, b), form in zip(((0, 0), (0, 1), (1, 0), (1, 1)), forms):
                v, born = exact[(x, y)][(a, b)], beh.prob(a, b, x, y)
                worst = max(worst, abs(v - born))
                print(f"{x} {y}  {a} {b}  {form:<18}  {v:.14f} {born:.14f} {abs(v - born):.1e}")
        print(f"largest deviation {worst:.2e}")
        report["table1_max_deviation"] = worst
    if show_gap:
        q = hardy.hardy_success(hardy.hardy_max_point())
        res = npa.boundary(hardy.hardy_segment(), "1+ab", args.tol_mu, args.feas_tol)
        aq = res.mu_star / 2.0
        print(f"quantum p_H        {q:.7f}  ((5*sqrt5-11)/2)")
        print(f"almost-quantum p_H {aq:.7f}  (NPA 1+ab, feas tol {args.feas_tol:g}, undecided steps {res.inconclusive})")
        print(f"difference         {aq - q:.3e}")
        report.update(quantum=q, almost_quantum=aq, difference=aq - q, feas_tol=args.feas_tol, tol_mu=args.tol_mu)
    if args.out:
        args.out.mkdir(parents=True, exist_ok=True)
        io.dump_json(report, args.out / "hardy.json")
    return 0


def cmd_dimwitness(args) -> int:
    # p(0,0|1,1) = p(0,1|1,0) = 0 are free coordinates 7 and 5
    zeroed = {7, 5}
    chsh, qcfg = quantum.max_chsh_qubits(zeroed, args.restarts, args.seed)
    i_qubit, _ = quantum.max_i3322(2, quantum.DIMWITNESS_ZEROS, args.restarts, args.seed)
    i_qutrit, tcfg = quantum.max_i3322_qutrits(quantum.DIMWITNESS_ZEROS, args.restarts, args.seed)
    certified = i_qutrit >= DIMWITNESS_QUTRIT_MIN and chsh <= DIMWITNESS_QUBIT_MAX
    verdict = "dimension ≥ 3 certified" if certified else "not certified"
    print(f"qubit CHSH (best found, constrained)    {chsh:.3e}")
    print(f"qubit I3322 (best found, constrained)   {i_qubit:.3e}")
    print(f"qutrit I3322 (best found, constrained)  {i_qutrit:.7f}")
    print(f"verdict: {verdict}")
    if args.out:
        args.out.mkdir(parents=True, exist_ok=True)
        io.dump_json({"qubit_chsh": chsh, "qubit_i3322": i_qubit, "qutrit_i3322": i_qutrit,
                      "verdict": verdict, "restarts": args.restarts, "seed": args.seed,
                      "qubit_config": qcfg.to_json(), "qutrit_config": tcfg.to_json()},
                     args.out / "dimwitness.json")
    return 0


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except Inconclusive as exc:
        print(f"inconclusive: {exc}", file=sys.stderr)
        return 2
    except WitnessNotFound as exc:
        print(f"no quantum witness found for masks: {' '.join(map(str, exc.masks))}", file=sys.stderr)
        return 3
    except BellscopeError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
