"""Command line entry point: solve one instance and write a JSON run record."""
from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .analysis import summarize
from .bounds import BOUND_KINDS
from .branching import BRANCH_KINDS
from .datasets import BUILTIN, load
from .graph import canonical_pair, invert_mapping, permute_nodes
from .io import FORMATS, InstanceError, RunRecord
from .search import SearchConfig, solve

DEFAULT_TIME_LIMIT = 1000.0
EXIT_SOLVED = 0
EXIT_INPUT_ERROR = 1
EXIT_BUDGET = 2


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="qtedit",
        description="Exact quasi-threshold editing by branch and bound.",
    )
    p.add_argument("input", help=f"instance file, or one of: {', '.join(BUILTIN)}")
    p.add_argument("--format", choices=FORMATS, default="edge-list")
    p.add_argument("--bound", choices=BOUND_KINDS, default="local-search")
    p.add_argument("--branching", choices=BRANCH_KINDS, default="most-pruned")
    p.add_argument("--all", dest="all_solutions", action="store_true",
                   help="enumerate every optimal solution")
    p.add_argument("--threads", type=int, default=1, help="worker processes")
    p.add_argument("--seed", type=int, default=0, help="seed for the randomized bounds")
    p.add_argument("--permutation-seed", type=int, default=None,
                   help="relabel nodes randomly before solving")
    p.add_argument("--max-k", type=int, default=None, help="largest k to try")
    p.add_argument("--time-limit", type=float, default=DEFAULT_TIME_LIMIT, help="seconds")
    p.add_argument("--emit-solutions", action="store_true", help="include edit sets in the record")
    p.add_argument("--analyze", action="store_true", help="summarize the optimal solutions")
    p.add_argument("--output", default=None, help="record path (default: stdout)")
    p.add_argument("--debug", action="store_true", help="audit search invariants (slow)")
    return p


def _translate(solutions, inverse):
    return sorted(
        tuple(sorted(canonical_pair(inverse[u], inverse[v]) for u, v in sol))
        for sol in solutions
    )


def run_cli(args=None) -> int:
    """Run the solver on the command line ``args``; returns the exit code."""
    parser = build_parser()
    ns = parser.parse_args(args)
    if ns.threads < 1:
        parser.error("--threads must be at least 1")
    try:
        g = load(ns.input, ns.format)
    except (OSError, InstanceError) as exc:
        print(f"qtedit: cannot read {ns.input}: {exc}", file=sys.stderr)
        return EXIT_INPUT_ERROR

    original = g
    inverse = None
    if ns.permutation_seed is not None:
        g, mapping = permute_nodes(g, ns.permutation_seed)
        inverse = invert_mapping(mapping)

    cfg = SearchConfig(
        bound=ns.bound,
        branching=ns.branching,
        all_solutions=ns.all_solutions,
        max_k=ns.max_k,
        time_limit=ns.time_limit,
        seed=ns.seed,
        threads=ns.threads,
        debug=ns.debug,
    )
    result = solve(g, cfg)
    solutions = result.solutions
    if inverse is not None:
        solutions = _translate(solutions, inverse)

    config = {k: v for k, v in vars(ns).items() if k not in ("input", "output")}
    record = RunRecord(
        instance=Path(ns.input).stem if Path(ns.input).exists() else ns.input,
        config=config,
        status="solved" if result.k_opt is not None else "budget-exhausted",
        n=original.n,
        m=original.m,
        k_opt=result.k_opt,
        lower_bound=result.lower_bound,
        initial_bound=result.initial_bound,
        per_k=[
            {
                "k": s.k,
                "calls": s.calls,
                "extra_bound_updates": s.extra_bound_updates,
                "seconds": round(s.seconds, 6),
                "finished": s.finished,
            }
            for s in result.stats
        ],
        solution_count=len(solutions),
        solutions=[tuple(sol) for sol in solutions] if ns.emit_solutions else None,
        summary=summarize(original, solutions).as_dict() if ns.analyze and solutions else None,
    )
    text = record.to_json() + "\n"
    if ns.output:
        Path(ns.output).write_text(text)
    else:
        sys.stdout.write(text)
    if result.violations:
        print(f"qtedit: {len(result.violations)} invariant violations", file=sys.stderr)
    return EXIT_SOLVED if result.k_opt is not None else EXIT_BUDGET


def main() -> None:
    sys.exit(run_cli())


if __name__ == "__main__":
    main()
