import argparse
import asyncio
import json
import logging
import os
import sys
from typing import Callable, Dict, List, Optional

import numpy as np
from pydantic import BaseModel

from agents.gadget_forge import GadgetForger
from agents.ineq_engine import (
    build_bell_inequality,
    build_nc_inequality,
    lhv_bound_bruteforce,
    nchv_bound_bruteforce,
    quantum_bell_value,
    quantum_nc_value,
    to_nonlocal_game,
)
from agents.invariants import alpha, chromatic_number, fractional_chromatic, fractional_packing, graph_profile, lovasz_theta
from agents.ks_logic import check_tifs, criticality_report, find_complete_bases, ks_solve
from agents.ortho_graph import delete_vertices, orthogonality_graph
from agents.round_sampler import RoundSampler
from agents.sic_cert import SICCertifier, integer_weights
from interfaces.certificate import SICCertificate
from interfaces.graph import WeightedGraph
from interfaces.projector_set import ProjectorSet, ProjectorSetFile
from pipelines.contextuality2bell_pipeline import Contextuality2BellPipeline
from tools.dataset_catalog import CATALOG, list_datasets, load_graph, resolve_input, save_projector_file
from tools.expr_parser import parse_vector
from tools.linalg import conjugate_set, maximally_entangled
from utils.errors import CtxForgeError
from utils.rational import parse_weights
from utils.retry import resolve_seed

DEFAULT_SEED = 2021
EXIT_ERROR = 3
EXIT_UNEXPECTED = 4


# helpers

def _seed(args) -> int:
    seed = resolve_seed(args.seed)
    return DEFAULT_SEED if seed is None else seed


def _indices(text: Optional[str]) -> List[int]:
    return [int(tok) for tok in text.split(",") if tok.strip()] if text else []


def _graph(args) -> WeightedGraph:
    if args.input in CATALOG or args.input.startswith("johnson"):
        G = load_graph(args.input)
    else:
        G = orthogonality_graph(resolve_input(args.input))
    if getattr(args, "delete", None):
        G = delete_vertices(G, _indices(args.delete))
    if getattr(args, "weights", None):
        G = G.with_weights(parse_weights(args.weights))
    return G


def _weights(args, S: ProjectorSet) -> List:
    """--weights when given, otherwise the optimized weights as the smallest integer vector."""
    if args.weights:
        return parse_weights(args.weights)
    gap = SICCertifier(jobs=args.jobs).optimize_sic_weights(S)
    logging.info(f"Using optimized weights (ratio {gap.ratio:.9f})")
    return integer_weights(gap.weights)


def _state(text: Optional[str], d: int):
    if not text or text == "maxmixed":
        return np.eye(d) / d
    return np.asarray(parse_vector(text.split(","), d), dtype=complex)


def _emit(args, payload) -> None:
    if args.format == "json":
        if isinstance(payload, BaseModel):
            print(payload.model_dump_json(indent=2))
        else:
            print(json.dumps(payload, indent=2, default=str))
        return
    if hasattr(payload, "render_table"):
        print(payload.render_table())
        return
    data = payload.model_dump(mode="json") if isinstance(payload, BaseModel) else payload
    rows = data.items() if isinstance(data, dict) else enumerate(data)
    for key, value in rows:
        print(f"{key}\t{value if not isinstance(value, (dict, list)) else json.dumps(value, default=str)}")


# subcommands

def cmd_inspect(args) -> int:
    if args.schema:
        print(json.dumps(ProjectorSetFile.model_json_schema(), indent=2))
        return 0
    S = resolve_input(args.input)
    G = orthogonality_graph(S)
    _emit(args, {"dim": S.dim, "n": S.n, "labels": S.labels, "edges": len(G.edges), "fingerprint": S.fingerprint()})
    return 0


def cmd_graph(args) -> int:
    G = _graph(args)
    _emit(args, {"n": G.n, "labels": G.labels, "edges": [list(e) for e in G.edges]})
    return 0


def cmd_invariant(args) -> int:
    G = _graph(args)
    which: Dict[str, Callable] = {
        "alpha": alpha,
        "chi": chromatic_number,
        "chif": fractional_chromatic,
        "theta": lovasz_theta,
        "alphastar": fractional_packing,
        "all": lambda g: graph_profile(g, d=args.dim),
    }
    _emit(args, which[args.invariant](G))
    return 0


def cmd_ks(args) -> int:
    inst = find_complete_bases(resolve_input(args.input))
    if args.action == "check":
        result = ks_solve(inst, mode="exists")
        _emit(args, {"bases": inst.bases, "is_ks_set": not result.exists})
        return 0 if not result.exists else 1
    if args.action == "critical":
        report = criticality_report(inst, jobs=args.jobs)
        _emit(args, report)
        return 0 if report.is_critical else 1
    result = ks_solve(inst, mode=args.mode)
    _emit(args, result)
    return 0 if result.exists else 1


def cmd_tifs(args) -> int:
    if args.action == "verify":
        inst = find_complete_bases(resolve_input(args.input))
        check = check_tifs(inst, int(args.a), int(args.b))
        _emit(args, check)
        return 0 if check.holds else 1

    A = parse_vector(args.a.split(","), 3)
    B = parse_vector(args.b.split(","), 3)
    forger = GadgetForger(seed=_seed(args), max_links=args.max_links, retry_budget=args.retry_budget)
    build = {"bug": forger.build_bug_tifs, "chain": forger.chain_tifs, "tits": forger.build_tits}[args.kind]
    gadget = build(A, B)
    if args.output:
        save_projector_file(gadget.vectors, args.output)
    _emit(args, gadget)
    return 0


def cmd_extend(args) -> int:
    S = resolve_input(args.input)
    forger = GadgetForger(seed=_seed(args), max_links=args.max_links, retry_budget=args.retry_budget, jobs=args.jobs)
    result = forger.extend_to_critical_sic(S, certifier=SICCertifier(jobs=args.jobs))
    if args.output:
        save_projector_file(result.vectors, args.output)
        logging.info(f"Extended set written to {args.output}")
    _emit(args, result)
    return 0


def cmd_certify(args) -> int:
    S = resolve_input(args.input)
    certifier = SICCertifier(jobs=args.jobs)
    if args.weights:
        result = certifier.check_sic_certificate(S, parse_weights(args.weights))
        _emit(args, result)
        return 0 if isinstance(result, SICCertificate) else 1
    if args.critical:
        criticality = certifier.is_critical_sic(S)
        _emit(args, criticality)
        return {"yes": 0, "no": 1, "inconclusive": 2}[criticality.verdict]
    verdict = certifier.is_sic(S)
    _emit(args, verdict)
    return verdict.exit_code


def cmd_inequality(args) -> int:
    S = resolve_input(args.input)
    build = build_nc_inequality if args.kind == "nc" else build_bell_inequality
    _emit(args, build(S, _weights(args, S)))
    return 0


def cmd_bound(args) -> int:
    S = resolve_input(args.input)
    w = _weights(args, S)
    if args.kind == "nchv":
        result = nchv_bound_bruteforce(build_nc_inequality(S, w))
    else:
        result = lhv_bound_bruteforce(build_bell_inequality(S, w))
    _emit(args, result)
    return 0


def cmd_value(args) -> int:
    S = resolve_input(args.input)
    w = _weights(args, S)
    if args.kind == "nc":
        value = quantum_nc_value(S, w, _state(args.state, S.dim))
        bound = build_nc_inequality(S, w).bound
    else:
        value = quantum_bell_value(S, conjugate_set(S), w, maximally_entangled(S.dim))
        bound = build_bell_inequality(S, w).bound
    _emit(args, {"value": value, "bound": str(bound), "violated": value > float(bound) + 1e-9})
    return 0 if value > float(bound) + 1e-9 else 1


def cmd_sample(args) -> int:
    S = resolve_input(args.input)
    w = _weights(args, S)
    sampler = RoundSampler(rounds=args.rounds, seed=_seed(args))
    psi = maximally_entangled(S.dim)
    if args.kind == "bell":
        result = sampler.sample_bell_rounds(psi, build_bell_inequality(S, w), S, conjugate_set(S))
    else:
        result = sampler.sample_sequential_rounds(S, w, psi)
    _emit(args, result)
    return 0


def cmd_game(args) -> int:
    S = resolve_input(args.input)
    w = _weights(args, S)
    bell = build_bell_inequality(S, w)
    quantum = quantum_bell_value(S, conjugate_set(S), w, maximally_entangled(S.dim))
    _emit(args, to_nonlocal_game(bell, quantum_lhs=quantum))
    return 0


def cmd_report(args) -> int:
    if args.config:
        pipeline = Contextuality2BellPipeline.init_from_config(args.config, seed=args.seed)
    else:
        from interfaces.options import PipelineConfig

        config = PipelineConfig(
            jobs=args.jobs,
            sampling=not args.no_sampling,
            working_dir=os.path.join(".working_dir", os.path.basename(args.input)),
        )
        pipeline = Contextuality2BellPipeline.from_options(config, seed=args.seed)
    report = asyncio.run(pipeline(resolve_input(args.input), name=os.path.basename(args.input)))
    _emit(args, report)
    return 0 if report.passed else 1


def cmd_datasets(args) -> int:
    rows = list_datasets()
    if args.format == "json":
        print(json.dumps(rows, indent=2))
    else:
        for row in rows:
            print(f"{row['name']}\td={row['dimension']}\tn={row['vectors']}\t{row['source']}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=None, help="Random seed (default: $CTXFORGE_SEED, then 2021).")
    common.add_argument("--jobs", type=int, default=1, help="Worker processes for the parallel checks.")
    common.add_argument("--format", choices=["json", "table"], default="table")
    common.add_argument("--log-level", default="WARNING")

    parser = argparse.ArgumentParser(
        prog="ctxforge",
        description="From contextuality witnesses to critical SI-C sets, noncontextuality and Bell inequalities.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name: str, handler: Callable, help: str) -> argparse.ArgumentParser:
        p = sub.add_parser(name, parents=[common], help=help)
        p.set_defaults(handler=handler)
        return p

    def add_input(p: argparse.ArgumentParser, weights: bool = False) -> None:
        p.add_argument("input", help="Catalog name or projector-set JSON file.")
        if weights:
            p.add_argument("--weights", help='Comma separated rationals, e.g. "3,3,2". Default: optimized.')

    p = add("inspect", cmd_inspect, "Summarize a projector set or print the file schema.")
    p.add_argument("input", nargs="?", default="kcbs5")
    p.add_argument("--schema", action="store_true")

    p = add("graph", cmd_graph, "Orthogonality graph edges.")
    p.add_argument("input", help="Catalog name, projector-set file or johnson(n,k).")
    p.add_argument("--delete", help="Comma separated vertex indices to delete.")

    p = add("invariant", cmd_invariant, "Graph invariants.")
    p.add_argument("invariant", choices=["alpha", "chi", "chif", "theta", "alphastar", "all"])
    p.add_argument("input", help="Catalog name, projector-set file or johnson(n,k).")
    p.add_argument("--delete", help="Comma separated vertex indices to delete.")
    p.add_argument("--weights", help="Vertex weights for alpha.")
    p.add_argument("--dim", type=int, default=None, help="Dimension for the necessary-condition checks of 'all'.")

    p = add("ks", cmd_ks, "Kochen-Specker checks.")
    p.add_argument("action", choices=["check", "critical", "solve"])
    add_input(p)
    p.add_argument("--mode", choices=["exists", "enumerate", "count"], default="exists")

    p = add("tifs", cmd_tifs, "Build or verify true-implies-false gadgets.")
    p.add_argument("action", choices=["build", "verify"])
    p.add_argument("input", nargs="?", help="Projector-set file for verify.")
    p.add_argument("--a", required=True, help="build: comma separated entries of A; verify: vertex index.")
    p.add_argument("--b", required=True, help="build: comma separated entries of B; verify: vertex index.")
    p.add_argument("--kind", choices=["bug", "chain", "tits"], default="chain")
    p.add_argument("--max-links", type=int, default=9)
    p.add_argument("--retry-budget", type=int, default=5)
    p.add_argument("--output")

    p = add("extend", cmd_extend, "Extend to a critical SI-C set.")
    add_input(p)
    p.add_argument("--max-links", type=int, default=9)
    p.add_argument("--retry-budget", type=int, default=5)
    p.add_argument("--output")

    p = add("certify", cmd_certify, "Decide or check state-independent contextuality.")
    add_input(p)
    p.add_argument("--weights", help="Check this weight vector instead of searching.")
    p.add_argument("--critical", action="store_true", help="Also check every single-vertex deletion.")

    p = add("inequality", cmd_inequality, "Noncontextuality or Bell inequality.")
    p.add_argument("kind", choices=["nc", "bell"])
    add_input(p, weights=True)

    p = add("bound", cmd_bound, "Brute-force classical bound.")
    p.add_argument("kind", choices=["nchv", "lhv"])
    add_input(p, weights=True)

    p = add("value", cmd_value, "Quantum value of an inequality.")
    p.add_argument("kind", choices=["nc", "bell"])
    add_input(p, weights=True)
    p.add_argument("--state", help='"maxmixed" (default) or comma separated ket entries, nc only.')

    p = add("sample", cmd_sample, "Monte Carlo rounds at the maximally entangled state.")
    p.add_argument("kind", choices=["bell", "sequential"])
    add_input(p, weights=True)
    p.add_argument("--rounds", type=int, default=10**6)

    p = add("game", cmd_game, "Nonlocal game from the Bell inequality.")
    add_input(p, weights=True)

    p = add("report", cmd_report, "Run the whole pipeline.")
    add_input(p)
    p.add_argument("--config", help="Pipeline YAML; overrides --jobs and --no-sampling.")
    p.add_argument("--no-sampling", action="store_true")

    add("datasets", cmd_datasets, "List the built-in catalog.")
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=args.log_level.upper(), format="%(asctime)s %(levelname)s %(message)s")
    try:
        return args.handler(args)
    except CtxForgeError as e:
        logging.error(f"❌ {type(e).__name__}: {e}")
        print(f"error: {type(e).__name__}: {e}", file=sys.stderr)
        return EXIT_ERROR
    except Exception as e:
        logging.exception(f"❌ Unexpected failure: {e}")
        return EXIT_UNEXPECTED


if __name__ == "__main__":
    sys.exit(main())
