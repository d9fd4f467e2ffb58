"""Command-line verification harness.

Subcommands: ``verify dihedral --n <even>``, ``verify lemmas --n <even>``,
``verify counterexample``, ``verify all``, ``h0 --group G --module EXPR``,
``dump --object EXPR --out PATH``.  Reports are JSON by default (``--table``
for the human renderer); exit code 0 iff every non-report check passes.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

from .abgroups import AbGroup
from .constructions import (
    Counterexample,
    build_named,
    counterexample_order16,
    dihedral_cosyzygy,
    dihedral_syzygy,
    norm_ideal_sequence_check,
    quotient_D,
    quotient_F,
    syzygy_of_complex,
    cokernel_of_dual,
)
from .exprs import parse_group, parse_module_expr
from .fox import complex_of_group
from .gamma import gamma
from .groups import build_dihedral
from .intlinalg import dump_matrix
from .lattices import dump_lattice, free_lattice, tensor_lattice, zpi_matrix_to_map
from .report import CheckRecord, Report, make_check, make_nontrivial_check
from .tate import tate_h0, tate_h_minus1

DEFAULT_CONFIG = {
    "dihedral": [2, 4, 6, 8, 10, 12],
    "lemmas": [2, 4, 6],
    "counterexample": True,
}


def _timed(fn):
    t0 = time.perf_counter()
    out = fn()
    return out, (time.perf_counter() - t0) * 1000.0


def _run_checks(tasks, jobs: int) -> list[CheckRecord]:
    """Run (callable -> CheckRecord) tasks, preserving order regardless of
    scheduling."""
    if jobs <= 1:
        return [t() for t in tasks]
    with ThreadPoolExecutor(max_workers=jobs) as ex:
        futures = [ex.submit(t) for t in tasks]
        return [f.result() for f in futures]


def _z2n(k: int) -> AbGroup:
    return AbGroup.from_factors(0, [2] * k)


def cmd_verify_dihedral(n: int, jobs: int, check_norm: bool) -> Report:
    rep = Report(f"verify dihedral --n {n}", f"D{2*n}")

    def kernel_check() -> CheckRecord:
        def work():
            s = dihedral_syzygy(n)
            g = gamma(s.lattice)
            return tate_h0(g, check_norm=check_norm), g.rank

        (h, rank), ms = _timed(work)
        return make_check(
            f"H0(Gamma(kerd2)) rank {rank}",
            "H0(pi; Gamma(ker d2)) vanishes for the dihedral group of order 2n",
            h,
            AbGroup.trivial(),
            ms,
        )

    def coker_check() -> CheckRecord:
        def work():
            cs = dihedral_cosyzygy(n)
            g = gamma(cs.lattice)
            return tate_h0(g, check_norm=check_norm), g.rank

        (h, rank), ms = _timed(work)
        return make_check(
            f"H0(Gamma(cokerd2)) rank {rank}",
            "H0(pi; Gamma(coker d2)) vanishes for the dihedral group of order 2n",
            h,
            AbGroup.trivial(),
            ms,
        )

    rep.checks = _run_checks([kernel_check, coker_check], jobs)
    return rep


def cmd_verify_lemmas(n: int, jobs: int, check_norm: bool) -> Report:
    rep = Report(f"verify lemmas --n {n}", f"D{2*n}")
    group = build_dihedral(n)

    def c_gamma_i2():
        (h, ), ms = _timed(lambda: (tate_h0(gamma(build_named(group, "I2").lattice), check_norm=check_norm),))
        return make_check(
            "H0(Gamma(I2))", "H0 of the quadratic functor of (I,2) is (Z/2)^2",
            h, _z2n(2), ms)

    def c_i2():
        (h,), ms = _timed(lambda: (tate_h0(build_named(group, "I2").lattice, check_norm=check_norm),))
        return make_check(
            "H0(I2)", "H0 of (I,2) is the mod-2 abelianization (Z/2)^2", h, _z2n(2), ms)

    def c_zpin_tensor_i2():
        def work():
            zpin = build_named(group, "ZpiN").lattice
            i2 = build_named(group, "I2").lattice
            return (tate_h0(tensor_lattice(zpin, i2), check_norm=check_norm),)

        (h,), ms = _timed(work)
        return make_check(
            "H0(ZpiN tensor I2)", "H0 of (Zpi/N) tensor (I,2) is Z/2", h,
            AbGroup.from_factors(0, [2]), ms)

    def c_n2_tensor_i():
        def work():
            n2 = build_named(group, "N2").lattice
            ideal = build_named(group, "I").lattice
            return (tate_h0(tensor_lattice(n2, ideal), check_norm=check_norm),)

        (h,), ms = _timed(work)
        return make_check(
            "H0(N2 tensor I)", "H0 of (N,2) tensor I is (Z/2)^2", h, _z2n(2), ms)

    def c_d():
        (h,), ms = _timed(lambda: (tate_h0(quotient_D(n)[0], check_norm=check_norm),))
        return make_check(
            "H0(D)", "H0 of Gamma(ker d2)/Gamma(Zpi/N) is (Z/2)^2", h, _z2n(2), ms)

    def c_gamma_i():
        (h,), ms = _timed(lambda: (tate_h0(gamma(build_named(group, "I").lattice), check_norm=check_norm),))
        return make_check("H0(Gamma(I))", "H0 of the quadratic functor of I vanishes",
                          h, AbGroup.trivial(), ms)

    def c_gamma_zpin():
        (h,), ms = _timed(lambda: (tate_h0(gamma(build_named(group, "ZpiN").lattice), check_norm=check_norm),))
        return make_check("H0(Gamma(ZpiN))", "H0 of the quadratic functor of Zpi/N vanishes",
                          h, AbGroup.trivial(), ms)

    def c_zpin():
        (h,), ms = _timed(lambda: (tate_h0(build_named(group, "ZpiN").lattice, check_norm=check_norm),))
        return make_check("H0(ZpiN)", "H0 of Zpi/N is cyclic of the group order",
                          h, AbGroup.from_factors(0, [2 * n]), ms)

    def c_hminus1_gamma_free():
        (h,), ms = _timed(lambda: (tate_h_minus1(gamma(free_lattice(group, 1))),))
        return make_check(
            "H-1(Gamma(Zpi))",
            "H-1 of the quadratic functor of the group ring is (Z/2)^(#involutions)",
            h, _z2n(n + 1), ms)

    def c_sequence():
        (chk,), ms = _timed(lambda: (norm_ideal_sequence_check(n),))
        return make_check(
            "norm-ideal sequence exact",
            "the norm / (x-1, 1-xy) / 2x2-block sequence is exact",
            chk.exact, True, ms)

    def c_gamma_n2():
        def work():
            h = tate_h0(gamma(build_named(group, "N2").lattice), check_norm=check_norm)
            return (h,)

        (h,), ms = _timed(work)
        rec = make_check(
            "H0(Gamma(N2))",
            "H0 of the quadratic functor of (N,2): cyclic of order dividing 4 (recorded)",
            h, None, ms)
        if not (h.is_cyclic() and (h.order() in (1, 2, 4))):
            rec.status = "fail"
        return rec

    tasks = [
        c_gamma_i2, c_i2, c_zpin_tensor_i2, c_n2_tensor_i, c_d,
        c_gamma_i, c_gamma_zpin, c_zpin, c_hminus1_gamma_free, c_sequence,
        c_gamma_n2,
    ]
    rep.checks = _run_checks(tasks, jobs)
    return rep


def cmd_verify_counterexample(jobs: int, check_norm: bool) -> Report:
    rep = Report("verify counterexample", "D8xZ2")
    ce: Counterexample = counterexample_order16()

    def c_j():
        def work():
            g = gamma(ce.j_lattice)
            return (tate_h0(g, check_norm=check_norm), g.rank)

        (h, rank), ms = _timed(work)
        return make_check(
            f"H0(Gamma(J)) rank {rank}",
            "the syzygy of the order-16 product group has torsion-free coinvariants",
            h, AbGroup.trivial(), ms)

    def c_jstar():
        def work():
            g = gamma(ce.jstar.lattice)
            return (tate_h0(g, check_norm=check_norm),)

        (h,), ms = _timed(work)
        return make_nontrivial_check(
            "H0(Gamma(J*)) nontrivial",
            "the dual syzygy has torsion in its coinvariants (value recorded)",
            h, ms)

    rep.checks = _run_checks([c_j, c_jstar], jobs)
    return rep


def cmd_h0(group_spec: str, module_expr: str, check_norm: bool) -> Report:
    group = parse_group(group_spec)
    rep = Report(f"h0 --group {group_spec} --module {module_expr}", group.name)

    def work():
        lat = parse_module_expr(module_expr, group)
        return (tate_h0(lat, check_norm=check_norm), lat.rank)

    (h, rank), ms = _timed(work)
    rep.checks = [
        CheckRecord(
            f"H0({module_expr}) rank {rank}",
            "ad-hoc degree-0 computation",
            str(h),
            None,
            "report",
            ms,
        )
    ]
    return rep


def cmd_dump(object_expr: str, out_path: str) -> str:
    """Serialize ``d2(G)``, ``d1(G)`` (matrix dump) or ``<module-expr>(G)``
    (lattice dump) to a file; returns the text."""
    expr = object_expr.strip()
    if "(" not in expr or not expr.endswith(")"):
        raise ValueError("object spec must end with a parenthesized group, e.g. d2(D8)")
    head, gspec = expr[:-1].rsplit("(", 1)
    group = parse_group(gspec)
    if head in ("d2", "d1"):
        pc = complex_of_group(group)
        zm = pc.d2 if head == "d2" else pc.d1
        text = dump_matrix(zpi_matrix_to_map(zm).matrix)
    else:
        lat = parse_module_expr(head, group)
        text = dump_lattice(lat, kind=head)
    Path(out_path).write_text(text)
    return text


def _load_config(path: str | None) -> dict:
    cfg = dict(DEFAULT_CONFIG)
    if path:
        cfg.update(json.loads(Path(path).read_text()))
    return cfg


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="zpilat",
        description="Exact verification of lattice homology computations over "
        "integral group rings of finite groups.",
    )
    p.add_argument("--jobs", type=int, default=1, help="parallel independent checks")
    fmt = p.add_mutually_exclusive_group()
    fmt.add_argument("--json", action="store_true", help="JSON report (default)")
    fmt.add_argument("--table", action="store_true", help="human-readable table")
    p.add_argument(
        "--check-norm-route",
        action="store_true",
        help="cross-check degree-0 values against the norm-map kernel",
    )
    p.add_argument("--config", default=None, help="JSON config with suite n-lists")
    sub = p.add_subparsers(dest="command", required=True)

    pv = sub.add_parser("verify", help="run a verification suite")
    pv.add_argument("suite", choices=["dihedral", "lemmas", "counterexample", "all"])
    pv.add_argument("--n", type=int, default=None, help="even dihedral parameter")

    ph = sub.add_parser("h0", help="degree-0 Tate homology of a module expression")
    ph.add_argument("--group", required=True)
    ph.add_argument("--module", required=True)

    pd = sub.add_parser("dump", help="serialize a matrix or lattice")
    pd.add_argument("--object", required=True)
    pd.add_argument("--out", required=True)
    return p


def _emit(reports: list[Report], args) -> int:
    as_table = bool(args.table)
    out = []
    for rep in reports:
        out.append(rep.render_table() if as_table else rep.render_json())
    print("\n".join(out))
    return 0 if all(r.overall == "pass" for r in reports) else 1


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "verify":
            cfg = _load_config(args.config)
            reports: list[Report] = []
            if args.suite in ("dihedral", "lemmas"):
                if args.n is not None:
                    ns = [args.n]
                else:
                    ns = list(cfg[args.suite])
                for n in ns:
                    if n % 2 != 0 or n < 2:
                        parser.error(
                            f"--n must be even and >= 2 (got {n}): odd-order rotations give "
                            "4-periodic cohomology, outside this tool's scope"
                        )
                fn = cmd_verify_dihedral if args.suite == "dihedral" else cmd_verify_lemmas
                for n in ns:
                    reports.append(fn(n, args.jobs, args.check_norm_route))
            elif args.suite == "counterexample":
                reports.append(cmd_verify_counterexample(args.jobs, args.check_norm_route))
            else:  # all
                for n in cfg["dihedral"]:
                    reports.append(cmd_verify_dihedral(n, args.jobs, args.check_norm_route))
                for n in cfg["lemmas"]:
                    reports.append(cmd_verify_lemmas(n, args.jobs, args.check_norm_route))
                if cfg.get("counterexample", True):
                    reports.append(cmd_verify_counterexample(args.jobs, args.check_norm_route))
            return _emit(reports, args)
        if args.command == "h0":
            return _emit([cmd_h0(args.group, args.module, args.check_norm_route)], args)
        if args.command == "dump":
            cmd_dump(args.object, args.out)
            print(f"wrote {args.out}")
            return 0
    except (ValueError, ArithmeticError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    return 2


if __name__ == "__main__":
    sys.exit(main())
