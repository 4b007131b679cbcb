"""Command-line front end.

Every subcommand expands into a list of checks.  A check is a pure function of
JSON-friendly parameters returning ``(expected, computed)``; the runner times
it, records pass/fail and assembles an ordered report.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from typing import Callable, Sequence

from .combinatorics import Composition, compositions, diagram_compose, power, skew_shape
from .derived_functors import hom_dims, splitting_psi, tensor_dims, tor, tor_expected, verify_tor
from .errors import DegenerateInputError, PreconditionError, ResourceError, VerificationError
from .linalg import CoefficientRing
from .poset_homology import verify_solomon, verify_tor_poset_link
from .ribbon_complex import FAULT_ENV, check_d2_zero, counterexample_unrestricted, kernel_image_lemma, verify_hg
from .schur_module import ribbon_module, schur_module, verify_intersection, verify_split_exact
from .symfunc import ribbon_schur, verify_product_identity, verify_ribbon_oracle, verify_veronese_series
from .veronese import betti, build_resolution, verify_exactness, verify_minimality

THREADS_ENV = "RIBBONRES_THREADS"

EXIT_OK, EXIT_USAGE, EXIT_FAILED = 0, 1, 2


def _ring(text: str) -> CoefficientRing:
    return CoefficientRing.parse(text)


# -- checks ----------------------------------------------------------------------------


def _split_exact(alpha, beta, n, ring):
    rep = verify_split_exact(alpha, beta, n, _ring(ring))
    return rep["middle"], rep["rank_delta"] + rep["rank_m"]


def _ribbon_oracle(alpha, n):
    rep = verify_ribbon_oracle(alpha, n)
    return ribbon_module(alpha, n).dim, rep["dim"]


def _product_identity(n):
    d1 = skew_shape((3, 3, 1), (1,))
    d2 = skew_shape((4, 4, 4, 2), (2,))
    verify_product_identity(d1, d2, n)
    # dimensions: S^D (x) S^D' against the two composite shapes
    expected = schur_module(d1, n).dim * schur_module(d2, n).dim
    computed = sum(schur_module(diagram_compose(d1, d2, kind), n).dim for kind in ("concat", "near_concat"))
    return expected, computed


def _hg_complex(alphas, n, ring):
    rep = verify_hg(alphas, n, _ring(ring))
    expected = [rep["expected_h0"]] + [0] * (len(alphas) - 1)
    return expected, rep["cohomology"]


def _d2_zero(alpha, p, n):
    check_d2_zero(alpha, p, n)
    return "zero", "zero"


def _unrestricted(n, ring):
    rep = counterexample_unrestricted(n, _ring(ring))
    return "nonzero", "nonzero" if rep["d2"] else "zero"


def _kernel_lemma(alpha, p, q, n, ring):
    rep = kernel_image_lemma(alpha, p, q, n, _ring(ring))
    return rep["expected"], rep["kernel_dim"]


def _resolution_window(d, r, n, i_max):
    W = build_resolution(d, r, n, i_max=i_max, deg_max=r)
    expected = {"shapes": [[d] * i + [r] for i in range(i_max + 1)],
                "generator_degrees": [d * i + r for i in range(i_max + 1)]}
    return expected, {"shapes": [list(s) for s in W.shapes], "generator_degrees": W.generator_degrees}


def _resolution_exact(d, r, n, ring, i_max, deg_max):
    rep = verify_exactness(build_resolution(d, r, n, _ring(ring), i_max, deg_max))
    return [row["m_dim"] for row in rep["table"]], [row["term_dims"][0] - row["ranks"][1] for row in rep["table"]]


def _resolution_minimal(d, r, n, ring, i_max):
    rep = verify_minimality(build_resolution(d, r, n, _ring(ring), i_max, r + d * i_max))
    return [d] * i_max, [max(s["entry_degrees"], default=d) for s in rep["steps"]]


def _betti(d, r, n, i, ring):
    dim = ribbon_schur(power(d, i, r), n, "jacobi_trudi").at_ones()
    return [d * i + r, dim], list(betti(d, r, n, i, _ring(ring)))


def _veronese_series(d, r, n, max_m):
    rep = verify_veronese_series(d, r, n, max_m)
    return max_m + 1, len(rep["components"])


def _tensor(d, r, rprime, n, ring, deg_max):
    rep = tensor_dims(d, r, rprime, n, _ring(ring), deg_max)
    return [row["expected"] for row in rep["table"]], [row["dim"] for row in rep["table"]]


def _splitting(d, r, rprime, n, ring, deg_max, variant):
    R = _ring(ring)
    invertible = R.is_unit(math.comb(r + rprime, r))
    expected = "split" if variant == "lex" or invertible else "precondition_error"
    try:
        splitting_psi(d, r, rprime, n, R, deg_max, variant)
        computed = "split"
    except PreconditionError:
        computed = "precondition_error"
    return expected, computed


def _tor(d, r, rprime, n, ring, i, deg_max=None, multigraded=False):
    W = tor(d, r, rprime, n, _ring(ring), i, deg_max, multigraded, check=False)
    peak = d * i + r + rprime
    expected = {str(j): (tor_expected(d, r, rprime, n, i) if j == peak else 0) for j in W.dims}
    computed = {str(j): v for j, v in W.dims.items()}
    if multigraded:
        verify_tor(W)
    if W.torsion:
        computed["torsion"] = {str(k): v for k, v in W.torsion.items()}
    return expected, computed


def _hom(d, r, rprime, n, ring, t_max=None):
    rep = hom_dims(d, r, rprime, n, _ring(ring), t_max)
    return [row["expected"] for row in rep["table"]], [row["dim"] for row in rep["table"]]


def _solomon(alpha):
    rep = verify_solomon(alpha)
    return rep["rank"], rep["homology_rank"]


def _tor_poset(d, r, i, n):
    rep = verify_tor_poset_link(d, r, i, n)
    return [row["weight_dim"] for row in rep["rows"]], [row["poset_rank"] for row in rep["rows"]]


def _intersection(alpha, beta, gamma, n, ring):
    rep = verify_intersection(alpha, beta, gamma, n, _ring(ring))
    return rep["expected"], rep["intersection_dim"]


CHECKS: dict[str, tuple[str, Callable]] = {
    "split_exact": ("ribbon pair: Delta then m is split exact", _split_exact),
    "ribbon_oracle": ("ribbon Schur function: tableau sum equals determinant", _ribbon_oracle),
    "product_identity": ("skew Schur product: concatenation plus near-concatenation", _product_identity),
    "hg_complex": ("near-concatenation complex: acyclic above degree 0", _hg_complex),
    "d2_zero": ("complex of ribbons: differential squares to zero", _d2_zero),
    "unrestricted_d2": ("complex of ribbons: needs the ribbon summands", _unrestricted),
    "kernel_lemma": ("complex of ribbons: kernel equals image", _kernel_lemma),
    "resolution_window": ("Veronese resolution: shapes and generator degrees", _resolution_window),
    "resolution_exact": ("Veronese resolution: exact with augmentation", _resolution_exact),
    "resolution_minimal": ("Veronese resolution: minimal", _resolution_minimal),
    "betti": ("Veronese resolution: Betti numbers", _betti),
    "veronese_series": ("generating function of the resolution", _veronese_series),
    "tensor": ("tensor product of Veronese modules: dimensions", _tensor),
    "splitting": ("tensor product of Veronese modules: R-linear splitting", _splitting),
    "tor": ("higher Tor between Veronese modules", _tor),
    "hom": ("Hom between Veronese modules", _hom),
    "solomon": ("rank-selected Boolean lattice homology", _solomon),
    "tor_poset": ("Tor as divisor-poset homology", _tor_poset),
    "intersection": ("intersection of Delta images in a triple tensor product", _intersection),
}


def run_check(task: tuple[str, dict]) -> dict:
    name, params = task
    anchor, fn = CHECKS[name]
    start = time.perf_counter()
    record = {"check": name, "anchor": anchor, "params": params}
    try:
        expected, computed = fn(**params)
        record.update(expected=expected, computed=computed, status="pass" if expected == computed else "fail")
    except VerificationError as exc:
        record.update(expected=exc.details.get("expected"),
                      computed={"error": str(exc), **{k: v for k, v in exc.details.items() if k != "expected"}},
                      status="fail")
    record["millis"] = round((time.perf_counter() - start) * 1000, 3)
    return record


def run_tasks(tasks: Sequence[tuple[str, dict]], threads: int = 1) -> list[dict]:
    if threads > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=threads) as pool:
            return list(pool.map(run_check, tasks, chunksize=max(1, len(tasks) // (4 * threads))))
    return [run_check(t) for t in tasks]


# -- task grids ------------------------------------------------------------------------


def _comps_upto(total: int) -> list[Composition]:
    return [a for m in range(1, total + 1) for a in compositions(m)]


def acceptance_tasks(ns: Sequence[int] | None = None, rings: Sequence[str] | None = None,
                     quick: bool = False) -> list[tuple[str, dict]]:
    """The default verification grids, one family per verified statement."""

    def pick_n(default):
        return [n for n in default if ns is None or n in ns] or list(ns or default)

    def pick_rings(default):
        return list(rings) if rings else list(default)

    all_rings = ("q", "fp:2", "fp:3")
    tasks: list[tuple[str, dict]] = []
    small = 4 if quick else 6
    for n in pick_n((2, 3)):
        for p in range(5):
            for alpha in _comps_upto(small):
                if len(alpha) >= 2:
                    tasks.append(("d2_zero", {"alpha": list(alpha), "p": p, "n": n}))
        tasks.append(("unrestricted_d2", {"n": n, "ring": pick_rings(("q",))[0]}))
    pair_total = 5 if quick else 7
    for ring in pick_rings(all_rings):
        for n in pick_n((2, 3)):
            for a in _comps_upto(pair_total - 1):
                for b in _comps_upto(pair_total - a.size):
                    tasks.append(("split_exact", {"alpha": list(a), "beta": list(b), "n": n, "ring": ring}))
    for n in pick_n((1, 2, 3, 4)):
        for alpha in _comps_upto(6 if quick else 8):
            tasks.append(("ribbon_oracle", {"alpha": list(alpha), "n": n}))
    for n in pick_n((3, 4)):
        tasks.append(("product_identity", {"n": n}))
    hg_total = 5 if quick else 7
    for ring in pick_rings(("q",)):
        for n in pick_n((2,)):
            for ell in (1, 2, 3):
                for parts in _tuples_upto(ell, hg_total):
                    tasks.append(("hg_complex", {"alphas": parts, "n": n, "ring": ring}))
            tasks.append(("hg_complex", {"alphas": [[1], [1], [1], [1]], "n": n, "ring": ring}))
        for n in pick_n((2,)):
            for alpha in ((1,), (2,), (2, 1), (1, 2)):
                for p in range(1, 5):
                    for q in range(1, p + 1):
                        tasks.append(("kernel_lemma", {"alpha": list(alpha), "p": p, "q": q, "n": n, "ring": ring}))
    pairs = ((1, 1), (1, 2), (2, 1), (2, 2), (3, 2), (3, 4))
    if quick:
        pairs = pairs[:4]
    for ring in pick_rings(all_rings):
        for n in pick_n((2, 3)):
            for d, r in pairs:
                tasks.append(("resolution_exact", {"d": d, "r": r, "n": n, "ring": ring, "i_max": 3,
                                                   "deg_max": r + 4 * d}))
                tasks.append(("resolution_minimal", {"d": d, "r": r, "n": n, "ring": ring, "i_max": 3}))
                for i in range(4):
                    tasks.append(("betti", {"d": d, "r": r, "n": n, "i": i, "ring": ring}))
    for n in pick_n((2,)):
        for d, r in pairs:
            tasks.append(("veronese_series", {"d": d, "r": r, "n": n, "max_m": 4}))
    top = 2 if quick else 3
    for ring in pick_rings(("q",)):
        for n in pick_n((2, 3)):
            for d in range(1, top + 1):
                for r in range(1, top + 1):
                    for rp in range(1, top + 1):
                        deg = r + rp + 3 * d
                        tasks.append(("tensor", {"d": d, "r": r, "rprime": rp, "n": n, "ring": ring, "deg_max": deg}))
                        for variant in ("lex", "binomial"):
                            tasks.append(("splitting", {"d": d, "r": r, "rprime": rp, "n": n, "ring": ring,
                                                        "deg_max": deg, "variant": variant}))
        for n in pick_n((2,)):
            for d in range(1, top + 1):
                for r in range(1, top + 1):
                    for rp in range(1, top + 1):
                        for i in (1, 2):
                            tasks.append(("tor", {"d": d, "r": r, "rprime": rp, "n": n, "ring": ring, "i": i,
                                                  "multigraded": True}))
        for n in pick_n((2, 3)):
            tasks.append(("tor", {"d": 1, "r": 2, "rprime": 3, "n": n, "ring": ring, "i": 3, "multigraded": True}))
        for n in pick_n((1, 2, 3)):
            for d in range(1, top + 1):
                for r in range(0, top + 2):
                    for rp in range(0, top + 2):
                        tasks.append(("hom", {"d": d, "r": r, "rprime": rp, "n": n, "ring": ring}))
    for alpha in _comps_upto(5 if quick else 7):
        tasks.append(("solomon", {"alpha": list(alpha)}))
    link_max = 5 if quick else 7
    for d in range(1, link_max + 1):
        for r in range(1, link_max + 1):
            for i in range(0, link_max + 1):
                if d * i + r <= link_max:
                    tasks.append(("tor_poset", {"d": d, "r": r, "i": i, "n": 3}))
    for ring in pick_rings(("q",)):
        for n in pick_n((2,)):
            for triple in _tuples_upto(3, 5 if quick else 6):
                tasks.append(("intersection", {"alpha": triple[0], "beta": triple[1], "gamma": triple[2],
                                               "n": n, "ring": ring}))
    return tasks


def _tuples_upto(length: int, total: int) -> list[list[list[int]]]:
    """All tuples of ``length`` compositions with total size <= total."""
    if length == 0:
        return [[]]
    out = []
    for first in _comps_upto(total - (length - 1)):
        for rest in _tuples_upto(length - 1, total - first.size):
            out.append([list(first)] + rest)
    return out


# -- report ----------------------------------------------------------------------------


def build_report(command: str, config: dict, records: list[dict], deterministic: bool) -> dict:
    if deterministic:
        for rec in records:
            rec["millis"] = 0
    failed = [rec for rec in records if rec["status"] != "pass"]
    return {
        "command": command,
        "config": config,
        "summary": {"total": len(records), "passed": len(records) - len(failed), "failed": len(failed)},
        "first_failure": failed[0] if failed else None,
        "records": records,
    }


def render(report: dict, fmt: str) -> str:
    if fmt == "json":
        return json.dumps(report, indent=2, sort_keys=False) + "\n"
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["check", "anchor", "params", "expected", "computed", "status", "millis"])
    for rec in report["records"]:
        writer.writerow([rec["check"], rec["anchor"], json.dumps(rec["params"], sort_keys=True),
                         json.dumps(rec["expected"]), json.dumps(rec["computed"]), rec["status"], rec["millis"]])
    return buf.getvalue()


# -- argument parsing ------------------------------------------------------------------


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _positive(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError("must be positive")
    return value


def _nonnegative(text: str) -> int:
    value = int(text)
    if value < 0:
        raise argparse.ArgumentTypeError("must be nonnegative")
    return value


def _ring_arg(text: str) -> str:
    try:
        return str(CoefficientRing.parse(text))
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from exc


def make_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--n", type=_positive, default=None, help="number of variables")
    common.add_argument("--ring", type=_ring_arg, default=None, help="q, z or fp:<prime>")
    common.add_argument("--format", choices=("json", "csv"), default="json")
    common.add_argument("--output", default=None, help="report path (default: stdout)")
    common.add_argument("--threads", type=_positive, default=None, help=f"worker processes (env {THREADS_ENV})")
    common.add_argument("--deterministic", action="store_true", help="zero the timing column")
    common.add_argument("--inject-fault", choices=("sign_flip",), default=None, help="test hook")
    common.add_argument("-v", "--verbose", action="store_true")

    parser = _Parser(prog="ribbonres", description="Ribbon Schur functor resolutions of Veronese modules.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("resolve", parents=[common], help="build and verify a resolution window")
    p.add_argument("--d", type=_positive, required=True)
    p.add_argument("--r", type=_nonnegative, required=True)
    p.add_argument("--imax", type=_nonnegative, default=4)
    p.add_argument("--degmax", type=_nonnegative, default=None)

    p = sub.add_parser("betti", parents=[common], help="Betti numbers of S^(d,r)")
    p.add_argument("--d", type=_positive, required=True)
    p.add_argument("--r", type=_nonnegative, required=True)
    p.add_argument("--imax", type=_nonnegative, default=4)

    p = sub.add_parser("tensor", parents=[common], help="tensor product and its splitting")
    p.add_argument("--d", type=_positive, required=True)
    p.add_argument("--r", type=_nonnegative, required=True)
    p.add_argument("--rprime", type=_nonnegative, required=True)
    p.add_argument("--degmax", type=_nonnegative, default=None)

    p = sub.add_parser("tor", parents=[common], help="higher Tor between Veronese modules")
    p.add_argument("--d", type=_positive, required=True)
    p.add_argument("--r", type=_nonnegative, required=True)
    p.add_argument("--rprime", type=_positive, required=True)
    p.add_argument("--i", type=_positive, required=True)
    p.add_argument("--degmax", type=_nonnegative, default=None)

    p = sub.add_parser("hom", parents=[common], help="Hom between Veronese modules")
    p.add_argument("--d", type=_positive, required=True)
    p.add_argument("--r", type=_nonnegative, required=True)
    p.add_argument("--rprime", type=_nonnegative, required=True)
    p.add_argument("--tmax", type=int, default=None)

    p = sub.add_parser("symcheck", parents=[common], help="symmetric function identities")
    p.add_argument("--size", type=_positive, default=6, help="largest ribbon size for the cross-oracle")
    p.add_argument("--d", type=_positive, default=2)
    p.add_argument("--r", type=_positive, default=1)
    p.add_argument("--mmax", type=_nonnegative, default=4)

    p = sub.add_parser("poset", parents=[common], help="order complex homology")
    p.add_argument("--m", type=_positive, default=5, help="largest ground set for the Boolean checks")
    p.add_argument("--d", type=_positive, default=None)
    p.add_argument("--r", type=_positive, default=None)
    p.add_argument("--imax", type=_nonnegative, default=2)

    p = sub.add_parser("verify-all", parents=[common], help="run every verification grid")
    p.add_argument("--quick", action="store_true", help="smaller grids")
    return parser


def tasks_for(args: argparse.Namespace) -> list[tuple[str, dict]]:
    cmd = args.command
    ring = args.ring or "q"
    n = args.n or 2
    if cmd == "resolve":
        if args.r == 0:
            raise DegenerateInputError("r = 0 gives M = R, which is free: its resolution is R itself")
        deg_max = args.degmax if args.degmax is not None else args.r + 5 * args.d
        return [
            ("resolution_window", {"d": args.d, "r": args.r, "n": n, "i_max": args.imax}),
            ("resolution_exact", {"d": args.d, "r": args.r, "n": n, "ring": ring, "i_max": args.imax,
                                  "deg_max": deg_max}),
            ("resolution_minimal", {"d": args.d, "r": args.r, "n": n, "ring": ring, "i_max": args.imax}),
        ]
    if cmd == "betti":
        if args.r == 0:
            raise DegenerateInputError("r = 0 gives M = R: the only Betti number is 1 in degree 0")
        return [("betti", {"d": args.d, "r": args.r, "n": n, "i": i, "ring": ring}) for i in range(args.imax + 1)]
    if cmd == "tensor":
        deg = args.degmax if args.degmax is not None else args.r + args.rprime + 3 * args.d
        base = {"d": args.d, "r": args.r, "rprime": args.rprime, "n": n, "ring": ring, "deg_max": deg}
        return [("tensor", base)] + [("splitting", {**base, "variant": v}) for v in ("lex", "binomial")]
    if cmd == "tor":
        return [("tor", {"d": args.d, "r": args.r, "rprime": args.rprime, "n": n, "ring": ring, "i": args.i,
                         "deg_max": args.degmax, "multigraded": ring != "z"})]
    if cmd == "hom":
        return [("hom", {"d": args.d, "r": args.r, "rprime": args.rprime, "n": n, "ring": ring,
                         "t_max": args.tmax})]
    if cmd == "symcheck":
        tasks = [("ribbon_oracle", {"alpha": list(a), "n": n}) for a in _comps_upto(args.size)]
        tasks.append(("veronese_series", {"d": args.d, "r": args.r, "n": n, "max_m": args.mmax}))
        tasks.append(("product_identity", {"n": n}))
        return tasks
    if cmd == "poset":
        if args.m > 8:
            raise ResourceError("poset checks are capped at m = 8")
        tasks = [("solomon", {"alpha": list(a)}) for a in _comps_upto(args.m)]
        if args.d is not None and args.r is not None:
            tasks += [("tor_poset", {"d": args.d, "r": args.r, "i": i, "n": args.n or 3})
                      for i in range(args.imax + 1) if args.d * i + args.r <= 8]
        return tasks
    if cmd == "verify-all":
        return acceptance_tasks([args.n] if args.n else None, [args.ring] if args.ring else None, args.quick)
    raise ValueError(f"unknown command {cmd}")


def main(argv: Sequence[str] | None = None) -> int:
    parser = make_parser()
    args = parser.parse_args(argv)
    threads = args.threads or int(os.environ.get(THREADS_ENV, "1") or 1)
    previous = os.environ.get(FAULT_ENV)
    if args.inject_fault:
        # worker processes inherit the environment, so the hook travels with it
        os.environ[FAULT_ENV] = args.inject_fault
    try:
        tasks = tasks_for(args)
        records = run_tasks(tasks, threads)
    except (DegenerateInputError, ResourceError, ValueError) as exc:
        print(f"ribbonres: {exc}", file=sys.stderr)
        return EXIT_USAGE
    finally:
        if args.inject_fault:
            if previous is None:
                os.environ.pop(FAULT_ENV, None)
            else:
                os.environ[FAULT_ENV] = previous
    config = {k: v for k, v in sorted(vars(args).items()) if k not in ("output", "threads", "verbose")}
    report = build_report(args.command, config, records, args.deterministic)
    text = render(report, args.format)
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    summary = report["summary"]
    if args.verbose or args.output:
        print(f"{summary['passed']}/{summary['total']} checks passed", file=sys.stderr)
    return EXIT_OK if summary["failed"] == 0 else EXIT_FAILED


if __name__ == "__main__":
    sys.exit(main())
