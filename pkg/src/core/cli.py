"""Command-line front door: `berge <subcommand>` or `python -m core <subcommand>`.

Exit codes: 0 success, 1 a check or verification came out negative, 2 infeasible or
malformed input, 3 a construction failed.
"""

from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path
from typing import List, Optional

from pydantic import ValidationError

from core.configs import cfg
from core.configs.solver import SolverConfig
from core.graphs.admissibility import (
    PackingInstance,
    admissibility_conditions,
    berge_necessary_conditions,
    is_admissible,
    is_guaranteed,
    packing_conditions,
    packing_feasible,
    path_packing_feasible,
)
from core.graphs.graph_decomp import (
    brute_force_packing_exists,
    cycle_decomposition,
    cycle_packing,
    path_packing,
    verify_graph_decomposition,
)
from core.graphs.multigraph import WalkKind, binom2, complete_multigraph, near_factor_I, subtract
from core.hyper.berge_lift import decompose_with_report, hamilton_lengths, round_robin_coloring
from core.hyper.verify import verify_berge_decomposition
from core.models.schemas import ConditionReportModel, HyperDecompositionModel, ViolationReportModel
from core.utils.errors import DecompositionError, InfeasibleInput, InstanceTooLarge, VerificationFailed
from core.utils.helpers import dump_json, load_json, parse_lengths, save_json, validate_output
from core.utils.logger import setup_logging
from core.utils.paths import DATA_DIR

log = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_NEGATIVE = 1
EXIT_INFEASIBLE = 2
EXIT_FAILED = 3


def _emit(payload, out: Optional[str] = None) -> None:
    if out:
        save_json(payload, out)
    else:
        sys.stdout.write(dump_json(payload))


def _config(args: argparse.Namespace) -> SolverConfig:
    return SolverConfig.from_defaults(seed=args.seed, workers=args.workers)


def cmd_decompose(args: argparse.Namespace) -> int:
    cycles = parse_lengths(args.cycles)
    paths = parse_lengths(args.paths)
    try:
        if args.hamilton:
            cycles = hamilton_lengths(args.n, args.k, args.mu)
        d, report, stages = decompose_with_report(args.n, args.k, args.mu, cycles, paths, _config(args))
    except InfeasibleInput as e:
        log.error(f"Infeasible input: {e}")
        return EXIT_INFEASIBLE
    except VerificationFailed as e:
        log.error(f"{e}: {[v.detail for v in e.violations[:5]]}")
        return EXIT_NEGATIVE
    except DecompositionError as e:
        log.error(f"Construction failed: {e}")
        return EXIT_FAILED

    certificate = d.to_model()
    violations = verify_berge_decomposition(args.n, args.k, args.mu, cycles, paths, certificate)
    if violations:
        log.error(f"Certificate failed re-verification: {[v.detail for v in violations[:5]]}")
        return EXIT_NEGATIVE

    if args.out:
        out = Path(args.out)
        report.output = str(out)
        _emit(certificate, str(out))
        save_json(report, out.with_name(f"{out.stem}.report.json"))
        stage_dir, stem = out.parent, out.stem
    else:
        _emit(certificate)
        log.info(f"Run report: {dump_json(report).strip()}")
        stage_dir, stem = DATA_DIR / "stages", f"n{args.n}_k{args.k}_mu{args.mu}"
    if args.dump_stages:
        for staged in stages:
            save_json(staged.to_model(), stage_dir / f"{stem}.{staged.name}.json")
    return EXIT_OK


def cmd_check(args: argparse.Namespace) -> int:
    if args.mode == "berge":
        cycles, paths = parse_lengths(args.cycles), parse_lengths(args.paths)
        conditions = berge_necessary_conditions(args.n, args.k, args.mu, cycles, paths)
        verdict = all(conditions.values())
        conditions["guaranteed"] = is_guaranteed(args.n, args.k)
    else:
        M = parse_lengths(args.lengths)
        if args.mode == "admissible":
            conditions = admissibility_conditions(args.lam, args.n, M)
            verdict = is_admissible(args.lam, args.n, M)
        elif args.mode == "pack":
            inst = PackingInstance(args.lam, args.n, M)
            conditions = packing_conditions(inst)
            verdict = packing_feasible(inst)
        else:
            conditions = {
                "parts_in_range": all(1 <= m <= args.n - 1 for m in M),
                "fits": sum(M) <= args.lam * binom2(args.n),
            }
            verdict = path_packing_feasible(args.lam, args.n, M)
    _emit(ConditionReportModel(mode=args.mode, admissible=verdict, conditions=conditions), args.out)
    return EXIT_OK if verdict else EXIT_NEGATIVE


def _host(lam: int, n: int, kind: WalkKind):
    g = complete_multigraph(lam, n)
    return subtract(g, near_factor_I(lam, n)) if kind is WalkKind.CYCLE else g


def cmd_oracle(args: argparse.Namespace) -> int:
    kind = WalkKind(args.kind)
    try:
        answer = brute_force_packing_exists(_host(args.lam, args.n, kind), parse_lengths(args.lengths), kind)
    except InstanceTooLarge as e:
        log.error(str(e))
        return EXIT_INFEASIBLE
    _emit(answer, args.out)
    return EXIT_OK if answer else EXIT_NEGATIVE


def cmd_verify(args: argparse.Namespace) -> int:
    try:
        certificate = validate_output(load_json(args.input), HyperDecompositionModel)
    except (OSError, ValueError, ValidationError) as e:
        log.error(f"Cannot read certificate {args.input}: {e}")
        return EXIT_INFEASIBLE
    n = args.n if args.n is not None else certificate.n
    k = args.k if args.k is not None else certificate.k
    mu = args.mu if args.mu is not None else certificate.mu
    violations = verify_berge_decomposition(
        n, k, mu, parse_lengths(args.cycles), parse_lengths(args.paths), certificate
    )
    _emit(ViolationReportModel(ok=not violations, violations=violations), args.out)
    log.info(f"{args.input}: {len(violations)} violations")
    return EXIT_OK if not violations else EXIT_NEGATIVE


def cmd_graph_decompose(args: argparse.Namespace) -> int:
    kind = WalkKind(args.kind)
    M = parse_lengths(args.lengths)
    config = _config(args)
    try:
        if kind is WalkKind.PATH:
            d = path_packing(args.lam, args.n, M, config)
        elif args.mode == "pack":
            d = cycle_packing(args.lam, args.n, M, config)
        else:
            d = cycle_decomposition(args.lam, args.n, M, config)
    except InfeasibleInput as e:
        log.error(f"Infeasible input: {e}")
        return EXIT_INFEASIBLE
    except DecompositionError as e:
        log.error(f"Construction failed: {e}")
        return EXIT_FAILED
    problems = verify_graph_decomposition(d.host, d, M, kind)
    if problems:
        log.error(f"Graph decomposition failed verification: {problems[:5]}")
        return EXIT_NEGATIVE
    _emit(d.to_model(), args.out)
    return EXIT_OK


def cmd_factorize(args: argparse.Namespace) -> int:
    try:
        classes = round_robin_coloring(args.mu, args.n)
    except InfeasibleInput as e:
        log.error(str(e))
        return EXIT_INFEASIBLE
    _emit({"n": args.n, "mu": args.mu, "classes": [[list(p) for p in cls] for cls in classes]}, args.out)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="berge", description="Berge path and cycle decompositions of mu K_n^(k)")
    ap.add_argument("--log-level", default="INFO", choices=["DEBUG", "INFO", "WARNING", "ERROR"])
    ap.add_argument("--quiet", action="store_true", help="No log output on stderr")
    ap.add_argument("--no-log-file", action="store_true", help="Skip the log file under DATA_DIR/logs")
    sub = ap.add_subparsers(dest="command", required=True)

    def solver_flags(p: argparse.ArgumentParser) -> None:
        p.add_argument("--seed", type=int, default=None, help=f"Engine seed (default {cfg.DEFAULT_SEED})")
        p.add_argument("--workers", type=int, default=None, help="Parallel restart workers")

    p = sub.add_parser("decompose", help="Build and verify a Berge decomposition")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--mu", type=int, default=1)
    p.add_argument("--cycles", default="", help="Cycle lengths, e.g. 5,5 or 38x221")
    p.add_argument("--paths", default="", help="Path lengths")
    p.add_argument("--hamilton", action="store_true", help="Use the all-Hamilton cycle list")
    p.add_argument("--out", default=None, help="Certificate path (default: stdout)")
    p.add_argument("--dump-stages", action="store_true", help="Write the staged H_P and H_C documents")
    solver_flags(p)
    p.set_defaults(handler=cmd_decompose)

    p = sub.add_parser("check", help="Evaluate feasibility conditions")
    p.add_argument("--mode", choices=["admissible", "pack", "path", "berge"], required=True)
    p.add_argument("--lambda", dest="lam", type=int, default=1)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--lengths", default="")
    p.add_argument("--k", type=int, default=3)
    p.add_argument("--mu", type=int, default=1)
    p.add_argument("--cycles", default="")
    p.add_argument("--paths", default="")
    p.add_argument("--out", default=None)
    p.set_defaults(handler=cmd_check)

    p = sub.add_parser("oracle", help="Exhaustive packing existence for small instances")
    p.add_argument("--lambda", dest="lam", type=int, default=1)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--lengths", default="")
    p.add_argument("--kind", choices=["cycle", "path"], default="cycle")
    p.add_argument("--out", default=None)
    p.set_defaults(handler=cmd_oracle)

    p = sub.add_parser("verify", help="Verify a certificate")
    p.add_argument("--input", required=True)
    p.add_argument("--cycles", default="")
    p.add_argument("--paths", default="")
    p.add_argument("--n", type=int, default=None)
    p.add_argument("--k", type=int, default=None)
    p.add_argument("--mu", type=int, default=None)
    p.add_argument("--out", default=None)
    p.set_defaults(handler=cmd_verify)

    p = sub.add_parser("graph-decompose", help="Cycle decomposition / packing or path packing of lambda K_n")
    p.add_argument("--lambda", dest="lam", type=int, default=1)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--lengths", default="")
    p.add_argument("--kind", choices=["cycle", "path"], default="cycle")
    p.add_argument("--mode", choices=["decompose", "pack"], default="decompose", help="Cycle decomposition or packing")
    p.add_argument("--out", default=None)
    solver_flags(p)
    p.set_defaults(handler=cmd_graph_decompose)

    p = sub.add_parser("factorize", help="Dump the round robin colouring of mu K_n")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--mu", type=int, default=1)
    p.add_argument("--out", default=None)
    p.set_defaults(handler=cmd_factorize)
    return ap


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    setup_logging(
        level=getattr(logging, args.log_level),
        stream=not args.quiet,
        label=args.command,
        to_file=not args.no_log_file,
    )
    try:
        return args.handler(args)
    except ValueError as e:
        log.error(f"Bad input: {e}")
        return EXIT_INFEASIBLE
