#!/usr/bin/env python3
"""
Internal partitions - find, check and certify internal partitions and
cohesive sets in regular graphs.

Graphs are plain edge-list files; every answer is written as a certificate
that `check` can re-verify against the graph it was computed for.

Usage:
    python main.py gen circulant --n 10 --gens 1,2,5 -o g.el
    python main.py search internal g.el --method exhaustive -o g.cert
    python main.py check internal g.el g.cert
    python main.py pipeline g.el --seed 3 -o report/
    python main.py classify abelian --max-order 16 -o classify/
    python main.py scan paley --max-q 200 --jobs 4
"""

import argparse
import csv
import logging
import sys
from collections.abc import Callable, Iterable, Sequence
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from functools import partial
from pathlib import Path
from typing import Literal, TypeVar

from rich.console import Console
from rich.logging import RichHandler
from rich.progress import (
    BarColumn,
    Progress,
    SpinnerColumn,
    TaskProgressColumn,
    TextColumn,
    TimeElapsedColumn,
)
from rich.table import Table

from cayley import (
    ClassificationOutcome,
    CyclicSpec5,
    PaleyBudget,
    PaleyRow,
    abelian_internal_partition,
    classify_near_complete,
    cyclic5_internal,
    enumerate_abelian_cayley,
    paley_orders,
    paley_row,
    power_of_two_scan,
)
from cohesion import CSV_COLUMNS, min_intersection_pair
from generators import (
    CayleySpec,
    InvalidSpecError,
    gen_abelian_cayley,
    gen_circulant,
    gen_paley,
    gen_random_regular,
    gen_standard,
    gen_switching_hard,
    hard_family_cut_readings,
    make_rng,
)
from graphs import (
    Bipartition,
    ContractViolation,
    Graph,
    GraphError,
    GraphParseError,
    format_vertices,
    k_core,
    load_partition,
    load_vertex_set,
    read_graph,
    save_graph,
    save_vertex_set,
)
from partitions import (
    CERTIFICATE_KINDS,
    DEFAULT_KM_ROUNDS,
    DEFAULT_NODE_CAP,
    HYBRID_RESTARTS,
    Certificate,
    CohesiveSetNotFound,
    SearchBudgetExceeded,
    ban_linial_cohesive,
    exhaustive_internal,
    hybrid_internal,
    km_bisection,
    local_switch,
    switching_guarantee_threshold,
    verify_cohesive,
    verify_internal,
)

# Exit statuses
EXIT_OK = 0
EXIT_NEGATIVE = 1
EXIT_USAGE = 2
EXIT_BUDGET = 3
EXIT_CANCELLED = 130

SUMMARY_COLUMNS = ("order", "group", "S", "verdict", "method", "verified")
PALEY_COLUMNS = ("q", "prime", "status", "certificate")

SearchMethod = Literal["switch", "exhaustive", "hybrid"]

console = Console()
err_console = Console(stderr=True)

log = logging.getLogger("main")

T = TypeVar("T")
R = TypeVar("R")


@dataclass
class CommandConfig:
    """Settings shared by every subcommand of one invocation."""

    command: str
    graph: Path | None = None
    witness: Path | None = None
    output: Path | None = None
    seed: int = 0
    node_cap: int = DEFAULT_NODE_CAP
    restarts: int = HYBRID_RESTARTS
    rounds: int = DEFAULT_KM_ROUNDS
    one_indexed: bool = False
    jobs: int = 1
    verbose: bool = False

    @classmethod
    def from_args(cls, args: argparse.Namespace) -> "CommandConfig":
        command = " ".join(
            part for part in (args.command, getattr(args, "target", None)) if part
        )
        return cls(
            command=command,
            graph=getattr(args, "graph", None),
            witness=getattr(args, "witness", None),
            output=getattr(args, "output", None),
            seed=args.seed,
            node_cap=args.node_cap,
            restarts=args.restarts,
            rounds=args.rounds,
            one_indexed=args.one_indexed,
            jobs=max(1, args.jobs),
            verbose=args.verbose,
        )

    @property
    def offset(self) -> int:
        return 1 if self.one_indexed else 0


def configure_logging(verbose: bool) -> None:
    """Route library logging through rich on stderr."""
    logging.basicConfig(
        level=logging.DEBUG if verbose else logging.WARNING,
        format="%(message)s",
        handlers=[RichHandler(console=err_console, show_time=False, show_path=False)],
        force=True,
    )


def _parse_ints(text: str) -> list[int]:
    try:
        return [int(tok) for tok in text.replace(" ", ",").split(",") if tok]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None


def _write(path: Path | None, text: str) -> None:
    """Write to path, or to stdout when no path is given."""
    if path is None:
        console.out(text, end="", highlight=False)
        return
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(text)
    log.debug("wrote %s", path)


def _write_csv(path: Path, columns: Sequence[str], rows: Iterable[Sequence[object]]) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", newline="") as f:
        writer = csv.writer(f, lineterminator="\n")
        writer.writerow(columns)
        writer.writerows(rows)


def _partition_text(p: Bipartition, offset: int) -> str:
    return f"{format_vertices(p.a, offset)}\n{format_vertices(p.b, offset)}\n"


def _load_graph(config: CommandConfig) -> Graph:
    assert config.graph is not None
    g = read_graph(config.graph)
    log.debug("loaded %s: n=%d, m=%d", config.graph, g.n, g.m)
    return g


def _run_all(
    fn: Callable[[T], R], items: Sequence[T], jobs: int, description: str
) -> list[R]:
    """Map fn over items, in input order, optionally across processes."""
    results: list[R] = []
    with Progress(
        SpinnerColumn(),
        TextColumn("[progress.description]{task.description}"),
        BarColumn(),
        TaskProgressColumn(),
        TimeElapsedColumn(),
        console=err_console,
        transient=True,
    ) as progress:
        task = progress.add_task(description, total=len(items))
        if jobs > 1:
            with ProcessPoolExecutor(max_workers=jobs) as pool:
                for result in pool.map(fn, items, chunksize=max(1, len(items) // (4 * jobs))):
                    results.append(result)
                    progress.advance(task)
        else:
            for item in items:
                results.append(fn(item))
                progress.advance(task)
    return results


# =============================================================================
# gen
# =============================================================================


def cmd_gen(args: argparse.Namespace, config: CommandConfig) -> int:
    kind = args.target
    if kind == "circulant":
        g = gen_circulant(args.n, args.gens)
    elif kind == "cayley":
        g = gen_abelian_cayley(CayleySpec.parse(args.factors, args.set))
    elif kind == "paley":
        g = gen_paley(args.q)
    elif kind == "standard":
        g = gen_standard(args.kind, args.size)
    elif kind == "random":
        g = gen_random_regular(args.n, args.d, config.seed)
    else:
        return _gen_hard(args, config)

    _write(config.output, save_graph(g))
    if config.output is not None:
        console.print(f"[green]Wrote {kind} graph: n={g.n}, m={g.m}[/green] -> {config.output}")
    return EXIT_OK


def _gen_hard(args: argparse.Namespace, config: CommandConfig) -> int:
    g, partition = gen_switching_hard(args.valency, args.half)
    certificate, trace = local_switch(g, partition)
    threshold = switching_guarantee_threshold(args.valency, g.n)

    _write(config.output, save_graph(g))
    if config.output is not None:
        _write(config.output.with_suffix(".part"), _partition_text(partition, config.offset))

    table = Table(title=f"Switching-hard family (valency {args.valency}, half {args.half})")
    table.add_column("Quantity", style="cyan")
    table.add_column("Value", justify="right")
    table.add_row("vertices", str(g.n))
    table.add_row("achieved cut", str(trace.initial_cut))
    table.add_row("guarantee threshold", str(threshold))
    for reading, value in hard_family_cut_readings(args.valency, args.half).items():
        table.add_row(f"cut formula ({reading.replace('_', ' ')})", str(value))
    table.add_row("switching moves", str(len(trace.moves)))
    table.add_row("switching outcome", trace.outcome if certificate is None else "internal")
    # the graph itself goes to stdout when no output file is given
    (console if config.output is not None else err_console).print(table)
    if certificate is not None:
        log.warning("valency %d half %d: switching from (U, W) ended internal", args.valency, args.half)
        err_console.print(
            "[yellow]Not switching-hard: switching from the planted bisection "
            "found an internal partition[/yellow]"
        )
        return EXIT_NEGATIVE
    return EXIT_OK


# =============================================================================
# check
# =============================================================================


def _first_line(text: str) -> str:
    return text.splitlines()[0].strip() if text.strip() else ""


def cmd_check(args: argparse.Namespace, config: CommandConfig) -> int:
    g = _load_graph(config)
    assert config.witness is not None
    text = config.witness.read_text()

    if _first_line(text) in CERTIFICATE_KINDS:
        certificate = Certificate.from_text(text, g.n)
        ok = certificate.verify(g, node_cap=config.node_cap)
        label = certificate.kind
    elif args.target == "internal":
        partition = load_partition(text, g.n, config.offset)
        if partition.is_trivial:
            raise ContractViolation("partition has an empty class")
        verdict = verify_internal(g, partition)
        ok = verdict.valid
        label = "internal partition"
        for violation in verdict.violations[:10]:
            err_console.print(
                f"[yellow]vertex {violation.vertex + config.offset}: "
                f"{violation.inside} inside, {violation.outside} outside[/yellow]"
            )
    else:
        members = load_vertex_set(text, g.n, config.offset)
        verdict = verify_cohesive(g, members, args.k)
        ok = verdict.valid
        label = f"{args.k}-cohesive set"

    if ok:
        console.print(f"[green]Valid {label}[/green]")
        return EXIT_OK
    console.print(f"[red]Invalid {label}[/red]")
    return EXIT_NEGATIVE


# =============================================================================
# search / cohesive / bisect
# =============================================================================


def _starting_partition(g: Graph, config: CommandConfig, start: Path | None) -> Bipartition:
    if start is not None:
        return load_partition(start.read_text(), g.n, config.offset)
    order = make_rng(config.seed).permutation(g.n)
    return Bipartition.from_class(g.n, (int(v) for v in order[: g.n // 2]))


def cmd_search(args: argparse.Namespace, config: CommandConfig) -> int:
    g = _load_graph(config)
    method: SearchMethod = args.method

    if method == "switch":
        certificate, trace = local_switch(
            g, _starting_partition(g, config, args.start), policy=args.policy
        )
        console.print(
            f"[dim]Initial cut {trace.initial_cut}, {len(trace.moves)} moves, "
            f"outcome {trace.outcome}[/dim]"
        )
        if certificate is None:
            err_console.print("[yellow]Switching ended with an empty class[/yellow]")
            return EXIT_BUDGET
    elif method == "exhaustive":
        certificate = exhaustive_internal(g, config.node_cap)
    else:
        certificate = hybrid_internal(
            g, seed=config.seed, restarts=config.restarts, node_cap=config.node_cap
        )
        assert certificate is not None

    _write(config.output, certificate.to_text())
    if certificate.kind == "nonexistence":
        console.print(
            f"[red]No internal partition[/red] [dim]({certificate.nodes} search nodes)[/dim]"
        )
        return EXIT_NEGATIVE
    assert certificate.partition is not None
    console.print("[green]Internal partition found[/green]")
    console.print(_partition_text(certificate.partition, config.offset), end="", highlight=False)
    return EXIT_OK


def cmd_cohesive(args: argparse.Namespace, config: CommandConfig) -> int:
    g = _load_graph(config)
    if args.ban_linial:
        try:
            members = ban_linial_cohesive(g, seed=config.seed, restarts=config.restarts)
        except CohesiveSetNotFound as e:
            err_console.print(f"[yellow]{e}[/yellow]")
            return EXIT_BUDGET
    else:
        members = k_core(g, args.k)

    if not members:
        console.print(f"[red]No {args.k}-cohesive set: the {args.k}-core is empty[/red]")
        return EXIT_NEGATIVE
    console.print(f"[green]Cohesive set of size {len(members)}[/green]")
    _write(config.output, save_vertex_set(members, config.offset))
    return EXIT_OK


def cmd_bisect(args: argparse.Namespace, config: CommandConfig) -> int:
    g = _load_graph(config)
    partition, cut = km_bisection(g, seed=config.seed, rounds=config.rounds)
    d = g.valency
    bound = f" (dn/4 = {d * g.n / 4:g})" if d is not None else ""
    console.print(f"[green]Bisection cut {cut}[/green]{bound}")
    _write(config.output, _partition_text(partition, config.offset))
    return EXIT_OK


# =============================================================================
# pipeline
# =============================================================================


def cmd_pipeline(args: argparse.Namespace, config: CommandConfig) -> int:
    g = _load_graph(config)
    report = min_intersection_pair(g, seed=config.seed)
    for attempt in report.attempts:
        if attempt.error is not None:
            log.debug("k=%d failed: %s", attempt.k, attempt.error)
            continue
        for note in attempt.stage_log:
            log.debug("k=%d %s", attempt.k, note)

    table = Table(title="Min-intersection pipeline")
    for column in CSV_COLUMNS:
        table.add_column(column, justify="right")
    table.add_row(*report.csv_row().split(","))
    console.print(table)

    if config.output is not None:
        config.output.mkdir(parents=True, exist_ok=True)
        _write(config.output / "pipeline.cert", report.certificate(g).to_text())
        _write_csv(config.output / "pipeline.csv", CSV_COLUMNS, [report.csv_row().split(",")])
        console.print(f"[dim]Report written to {config.output}[/dim]")
    if report.intersection_size > report.bound:
        err_console.print("[red]Intersection exceeds n/4 + 1[/red]")
        return EXIT_NEGATIVE
    return EXIT_OK


# =============================================================================
# Cayley commands
# =============================================================================


def _outcome_row(spec: CayleySpec, outcome: ClassificationOutcome) -> list[str]:
    return [
        str(spec.order),
        spec.describe(),
        spec.format_set(),
        outcome.verdict,
        outcome.method,
        "yes" if outcome.verified else "no",
    ]


def cmd_classify(args: argparse.Namespace, config: CommandConfig) -> int:
    specs = list(enumerate_abelian_cayley(args.max_order))
    console.print(f"[dim]{len(specs)} connected 5-regular specs up to order {args.max_order}[/dim]")
    outcomes = _run_all(abelian_internal_partition, specs, config.jobs, "Classifying")

    if config.output is not None:
        for i, (spec, outcome) in enumerate(zip(specs, outcomes, strict=True)):
            name = f"{spec.order:03d}_{spec.describe()}_{i:05d}.cert"
            _write(config.output / name, outcome.certificate.to_text())
        _write_csv(
            config.output / "summary.csv",
            SUMMARY_COLUMNS,
            (_outcome_row(s, o) for s, o in zip(specs, outcomes, strict=True)),
        )

    table = Table(title="Abelian Cayley graphs without an internal partition")
    for column in ("order", "group", "S", "verdict"):
        table.add_column(column)
    negatives = [(s, o) for s, o in zip(specs, outcomes, strict=True) if o.partition is None]
    for spec, outcome in negatives:
        table.add_row(str(spec.order), spec.describe(), spec.format_set(), outcome.verdict)
    console.print(table)
    console.print(
        f"  Partitions: {len(specs) - len(negatives)}   "
        f"Exceptional: {sum(1 for _, o in negatives if o.exceptional)}"
    )

    if not all(o.verified for o in outcomes):
        err_console.print("[yellow]Some outcomes could not be verified[/yellow]")
        return EXIT_BUDGET
    if any(o.exceptional is None for _, o in negatives):
        err_console.print("[red]Unexpected graph without an internal partition[/red]")
        return EXIT_NEGATIVE
    return EXIT_OK


def cmd_cyclic(args: argparse.Namespace, config: CommandConfig) -> int:
    spec = CyclicSpec5.from_offsets(args.n, args.gens)
    outcome = cyclic5_internal(spec)
    _write(config.output, outcome.certificate.to_text())
    if outcome.partition is None:
        console.print(f"[red]{spec}: no internal partition ({outcome.verdict})[/red]")
        return EXIT_NEGATIVE
    console.print(f"[green]{spec}: internal partition via {outcome.method}[/green]")
    console.print(_partition_text(outcome.partition, config.offset), end="", highlight=False)
    return EXIT_OK


def cmd_near_complete(args: argparse.Namespace, config: CommandConfig) -> int:
    g = _load_graph(config)
    verdict = classify_near_complete(g)
    if verdict.partition is None:
        console.print(
            f"[red]No internal partition: complement has {verdict.odd_cycle_count} odd cycles[/red]"
        )
        return EXIT_NEGATIVE
    console.print("[green]Internal partition[/green]")
    _write(config.output, _partition_text(verdict.partition, config.offset))
    return EXIT_OK


def _paley_table(rows: list[PaleyRow]) -> Table:
    table = Table(title="Paley graphs")
    table.add_column("q", justify="right")
    table.add_column("order type")
    table.add_column("status")
    for row in rows:
        style = {"verified": "green", "incomplete": "yellow", "refuted": "red"}[row.status]
        table.add_row(str(row.q), "prime" if row.prime else "prime power", f"[{style}]{row.status}[/{style}]")
    return table


def cmd_scan(args: argparse.Namespace, config: CommandConfig) -> int:
    if args.target == "power-of-two":
        result = power_of_two_scan(args.n)
        if result.exists_counterexample:
            console.print(
                f"[red]n={args.n}: complement of <{result.witness}>_{args.n} has no internal partition[/red]"
            )
            return EXIT_NEGATIVE
        console.print(
            f"[green]n={args.n}: all {len(result.checked)} (n-3)-regular circulants "
            f"have an internal partition[/green]"
        )
        return EXIT_OK

    budget = PaleyBudget(restarts=config.restarts, node_cap=config.node_cap, seed=config.seed)
    orders = paley_orders(args.max_q)
    rows = _run_all(partial(paley_row, budget=budget), orders, config.jobs, "Paley scan")
    console.print(_paley_table(rows))
    for label, subset in (
        ("prime", [r for r in rows if r.prime]),
        ("prime power", [r for r in rows if not r.prime]),
    ):
        verified = sum(1 for r in subset if r.status == "verified")
        console.print(f"  {label}: {verified}/{len(subset)} verified")

    if config.output is not None:
        names = []
        for row in rows:
            name = ""
            if row.certificate is not None:
                name = f"paley_{row.q:04d}.cert"
                _write(config.output / name, row.certificate.to_text())
            names.append(name)
        _write_csv(
            config.output / "paley.csv",
            PALEY_COLUMNS,
            ([r.q, "yes" if r.prime else "no", r.status, name] for r, name in zip(rows, names, strict=True)),
        )

    if any(r.status == "refuted" for r in rows):
        return EXIT_NEGATIVE
    if any(r.status == "incomplete" for r in rows):
        return EXIT_BUDGET
    return EXIT_OK


# =============================================================================
# Argument parsing and dispatch
# =============================================================================


def _common_options() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("-v", "--verbose", action="store_true", help="Debug logging on stderr")
    common.add_argument("--seed", type=int, default=0, help="Random seed (default: 0)")
    common.add_argument("--node-cap", type=int, default=DEFAULT_NODE_CAP, help="Exhaustive search node budget")
    common.add_argument("--restarts", type=int, default=HYBRID_RESTARTS, help="Restarts for randomized searches")
    common.add_argument("--rounds", type=int, default=DEFAULT_KM_ROUNDS, help="Rounds for cluster heuristics")
    common.add_argument("--one-indexed", action="store_true", help="Read and print vertex ids starting at 1")
    common.add_argument("--jobs", type=int, default=1, help="Worker processes for scans")
    common.add_argument("-o", "--output", type=Path, default=None, help="Output file or directory")
    return common


def build_parser() -> argparse.ArgumentParser:
    common = _common_options()
    parser = argparse.ArgumentParser(
        prog="internal-partitions",
        description="Internal partitions and cohesive sets in regular graphs",
    )
    commands = parser.add_subparsers(dest="command", required=True)

    gen = commands.add_parser("gen", help="Generate a graph").add_subparsers(dest="target", required=True)
    p = gen.add_parser("circulant", parents=[common], help="Circulant <gens>_n")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--gens", type=_parse_ints, required=True, help="Offsets, e.g. 1,2,5")
    p = gen.add_parser("cayley", parents=[common], help="Cayley graph of a finite Abelian group")
    p.add_argument("--factors", required=True, help="Invariant factors, e.g. 2,6")
    p.add_argument("--set", required=True, help="Connection set, e.g. 1:0,0:1,0:5")
    p = gen.add_parser("paley", parents=[common], help="Paley graph of order q")
    p.add_argument("--q", type=int, required=True)
    p = gen.add_parser("standard", parents=[common], help="Complete or complete bipartite graph")
    p.add_argument("--kind", choices=["complete", "complete_bipartite"], required=True)
    p.add_argument("--size", type=int, required=True)
    p = gen.add_parser(
        "hard",
        parents=[common],
        help="Switching-hard family",
        description="Exit code 1 when switching from the planted bisection ends internal.",
    )
    p.add_argument("--valency", type=int, default=5)
    p.add_argument("--half", type=int, required=True)
    p = gen.add_parser("random", parents=[common], help="Seeded random regular graph")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--d", type=int, required=True)

    check = commands.add_parser("check", help="Verify a witness").add_subparsers(dest="target", required=True)
    for target in ("internal", "cohesive"):
        p = check.add_parser(target, parents=[common], help=f"Verify an {target} witness")
        p.add_argument("graph", type=Path)
        p.add_argument("witness", type=Path)
        if target == "cohesive":
            p.add_argument("--k", type=int, default=3)

    search = commands.add_parser("search", help="Search for an internal partition")
    search_targets = search.add_subparsers(dest="target", required=True)
    p = search_targets.add_parser("internal", parents=[common])
    p.add_argument("graph", type=Path)
    p.add_argument(
        "--method",
        choices=["switch", "exhaustive", "hybrid"],
        default="hybrid",
        help="switch exits with code 3 when it ends at a trivial partition",
    )
    p.add_argument("--policy", choices=["lowest-index", "highest-gain"], default="lowest-index")
    p.add_argument("--start", type=Path, default=None, help="Starting partition for switching (default: random bisection)")

    p = commands.add_parser("cohesive", parents=[common], help="Find a cohesive set")
    p.add_argument("graph", type=Path)
    p.add_argument("--k", type=int, default=3)
    p.add_argument("--ban-linial", action="store_true", help="Small ceil(d/2)-cohesive set search")

    p = commands.add_parser("bisect", parents=[common], help="Cluster-based bisection")
    p.add_argument("graph", type=Path)
    p.add_argument("--method", choices=["km"], default="km")

    p = commands.add_parser("pipeline", parents=[common], help="Two 3-cohesive sets with small intersection")
    p.add_argument("graph", type=Path)

    classify = commands.add_parser("classify", help="Classify Cayley graphs")
    p = classify.add_subparsers(dest="target", required=True).add_parser("abelian", parents=[common])
    p.add_argument("--max-order", type=int, required=True)

    scan = commands.add_parser("scan", help="Scan graph families").add_subparsers(dest="target", required=True)
    p = scan.add_parser("paley", parents=[common])
    p.add_argument("--max-q", type=int, required=True)
    p = scan.add_parser("power-of-two", parents=[common], help="(n-3)-regular circulants on n vertices")
    p.add_argument("--n", type=int, required=True)

    p = commands.add_parser("near-complete", parents=[common], help="Classify an (n-3)-regular graph")
    p.add_argument("graph", type=Path)

    p = commands.add_parser("cyclic", parents=[common], help="Classify a 5-regular circulant")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--gens", type=_parse_ints, required=True, help="Offsets r,t,k with k = n/2")

    return parser


HANDLERS: dict[str, Callable[[argparse.Namespace, CommandConfig], int]] = {
    "gen": cmd_gen,
    "check": cmd_check,
    "search": cmd_search,
    "cohesive": cmd_cohesive,
    "bisect": cmd_bisect,
    "pipeline": cmd_pipeline,
    "classify": cmd_classify,
    "scan": cmd_scan,
    "near-complete": cmd_near_complete,
    "cyclic": cmd_cyclic,
}


def dispatch(argv: Sequence[str]) -> int:
    """Run one command and return its exit status."""
    parser = build_parser()
    try:
        args = parser.parse_args(list(argv))
    except SystemExit as e:
        return e.code if isinstance(e.code, int) else EXIT_USAGE

    config = CommandConfig.from_args(args)
    configure_logging(config.verbose)
    log.debug("running %s", config.command)
    try:
        return HANDLERS[args.command](args, config)
    except KeyboardInterrupt:
        err_console.print("\n[dim]Cancelled[/dim]")
        return EXIT_CANCELLED
    except (GraphParseError, ContractViolation, InvalidSpecError) as e:
        err_console.print(f"error: {e}", markup=False, highlight=False)
        return EXIT_USAGE
    except FileNotFoundError as e:
        err_console.print(f"error: no such file: {e.filename}", markup=False, highlight=False)
        return EXIT_USAGE
    except SearchBudgetExceeded as e:
        err_console.print(f"error: {e}", markup=False, highlight=False)
        return EXIT_BUDGET
    except GraphError as e:
        err_console.print(f"error: {e}", markup=False, highlight=False)
        return EXIT_NEGATIVE


def main() -> None:
    sys.exit(dispatch(sys.argv[1:]))


if __name__ == "__main__":
    main()
