"""
Command-line interface for plansim.

Validates plans, seeds and runs recombination chains, builds ensembles and
measures how similar districting plans are. Output files are plot-ready
CSV/JSON; human-readable tables are rendered with Rich.
"""
import argparse
import json
import logging
import sys
from datetime import datetime, timezone
from pathlib import Path
from typing import Callable, Dict, List, Optional, Sequence

from pydantic import ValidationError
from rich import box
from rich.console import Console
from rich.panel import Panel
from rich.progress import BarColumn, Progress, SpinnerColumn, TaskProgressColumn, TextColumn
from rich.table import Table
from rich.text import Text

from .config.settings import Settings, get_settings
from .ensemble import (
    EnsembleConfig,
    PairwiseScores,
    ScoreSummary,
    pairwise_similarities,
    reference_similarity,
    run_ensemble_detailed,
    summarize,
)
from .file_handler import FileHandler, ManifestTimings, RunManifest
from .generation import ChainConfig, CutPolicy, TreeSampler, make_rng, run_chain, seed_plan
from .models import DualGraph, Plan, WeightKind, population_deviation, require_valid_plan, validate_plan
from .similarity import FallbackPolicy, intersection_matrix, relabel_plan, similarity_scores, solve_assignment
from .synth import GridSpec, PopulationPattern, circle_state, grid_state, radial_plan
from .utils.exceptions import (
    EXIT_OK,
    EXIT_USAGE,
    EXIT_VALIDATION,
    AssignmentError,
    PlansimConfigError,
    PlansimException,
    SummaryError,
    UsageError,
)
from .utils.validation import extend_labels, validate_seed

console = Console()
logger = logging.getLogger(__name__)

KIND_CHOICES = ["area", "population", "both"]


# ---------------------------------------------------------------------------
# Shared helpers
# ---------------------------------------------------------------------------

class PlansimArgumentParser(argparse.ArgumentParser):
    """Argument parser that reports usage errors as exceptions."""

    def error(self, message: str) -> None:  # type: ignore[override]
        raise UsageError(message, details={"usage": self.format_usage().strip()})


def seed_value(text: str) -> int:
    """argparse type for 64-bit unsigned seeds."""
    try:
        return validate_seed(int(text))
    except ValueError as e:
        raise argparse.ArgumentTypeError(str(e)) from e


def positive_int(text: str) -> int:
    """argparse type for counts that must be at least 1."""
    try:
        value = int(text)
    except ValueError as e:
        raise argparse.ArgumentTypeError(f"invalid int value: '{text}'") from e
    if value < 1:
        raise argparse.ArgumentTypeError(f"must be a positive integer, got {value}")
    return value


def setup_logging(verbose: bool = False, settings: Optional[Settings] = None) -> None:
    """Configure logging on stderr (plus the optional settings log file)."""
    settings = settings or get_settings()
    level = logging.DEBUG if verbose else settings.get_log_level_int()
    handlers: List[logging.Handler] = [logging.StreamHandler(sys.stderr)]
    if settings.log_file:
        handlers.append(logging.FileHandler(settings.log_file, encoding="utf-8"))
    logging.basicConfig(
        level=level,
        format=settings.log_format,
        datefmt=settings.log_date_format,
        handlers=handlers,
        force=True,
    )


def print_banner(settings: Settings) -> None:
    """Print the application banner."""
    banner = Text()
    banner.append(settings.app_name, style="bold purple")
    banner.append(" districting plan similarity ", style="bold white")
    banner.append(f"v{settings.app_version}", style="dim purple")
    console.print(Panel(banner, border_style="purple", padding=(0, 2)))


def report_error(error: PlansimException) -> int:
    """Write one machine-parsable JSON line to stderr and return the exit code."""
    line = json.dumps(
        {"error": type(error).__name__, "message": str(error), "exit_code": error.exit_code}
    )
    print(line, file=sys.stderr)
    return error.exit_code


def parse_kinds(kind: str) -> List[WeightKind]:
    if kind == "both":
        return [WeightKind.AREA, WeightKind.POPULATION]
    return [WeightKind.parse(kind)]


def fmt_score(value: float, settings: Settings) -> str:
    return f"{value:.{settings.score_decimals}f}"


def progress_bar() -> Progress:
    return Progress(
        SpinnerColumn(),
        TextColumn("[progress.description]{task.description}"),
        BarColumn(bar_width=30),
        TaskProgressColumn(),
        console=console,
        transient=True,
    )


def display_summaries(
    summaries: Dict[WeightKind, ScoreSummary], settings: Settings, title: str
) -> None:
    """Show summary statistics side by side per kind."""
    table = Table(title=title, box=box.ROUNDED, header_style="bold purple")
    table.add_column("Kind")
    for column in ("Count", "Mean", "SD", "Min", "Max"):
        table.add_column(column, justify="right")
    for kind, summary in summaries.items():
        table.add_row(
            kind.value,
            str(summary.count),
            fmt_score(summary.mean, settings),
            fmt_score(summary.sd, settings),
            fmt_score(summary.min, settings),
            fmt_score(summary.max, settings),
        )
    console.print(table)


def _summaries_of(scores: Dict[WeightKind, PairwiseScores], bins: int) -> Dict[WeightKind, ScoreSummary]:
    return {kind: summarize(pairwise, bins) for kind, pairwise in scores.items()}


def _chain_options(parser: argparse.ArgumentParser, trees_default: Optional[int] = 1) -> None:
    """Recombination options shared by chain and ensemble."""
    parser.add_argument(
        "--trees-per-step",
        type=positive_int,
        default=trees_default,
        help="Spanning trees tried per step",
    )
    parser.add_argument(
        "--tree-sampler",
        choices=[s.value for s in TreeSampler],
        default=TreeSampler.MST.value,
        help="Spanning tree sampler (default: mst)",
    )
    parser.add_argument(
        "--cut-policy",
        choices=[c.value for c in CutPolicy],
        default=CutPolicy.BEST.value,
        help="Tree edge selection (default: best)",
    )
    parser.add_argument(
        "--epsilon", type=float, default=0.05, help="Tolerance of the first_acceptable policy"
    )


# ---------------------------------------------------------------------------
# Commands
# ---------------------------------------------------------------------------

def cmd_validate(args: argparse.Namespace, files: FileHandler, settings: Settings) -> int:
    g = files.load_graph(args.graph)
    console.print(
        f"[green]Graph OK:[/green] {len(g)} precincts, {len(g.edges)} edges, "
        f"area {g.total_area:.6g}, population {g.total_population}"
    )
    if args.plan is None:
        return EXIT_OK

    plan = files.load_plan(args.plan)
    violations = validate_plan(g, plan)
    if not violations:
        deviation = population_deviation(g, plan, validate=False)
        console.print(
            f"[green]Plan OK:[/green] {plan.num_districts} districts, "
            f"population deviation {deviation:.{settings.score_decimals + 2}%}"
        )
        return EXIT_OK

    table = Table(title=f"Violations in {Path(args.plan).name}", box=box.ROUNDED, header_style="bold red")
    table.add_column("Kind")
    table.add_column("Precinct")
    table.add_column("District", justify="right")
    table.add_column("Message")
    for violation in violations:
        table.add_row(
            violation.kind.value,
            violation.precinct_id or "",
            "" if violation.district is None else str(violation.district),
            violation.message,
        )
    console.print(table)
    return EXIT_VALIDATION


def cmd_seed(args: argparse.Namespace, files: FileHandler, settings: Settings) -> int:
    g = files.load_graph(args.graph)
    plan = seed_plan(g, args.districts, make_rng(args.seed))
    files.save_plan(args.output, plan, g)
    console.print(
        f"[green]Seeded {plan.num_districts} districts[/green] "
        f"(deviation {population_deviation(g, plan, validate=False):.2%}) -> {args.output}"
    )
    return EXIT_OK


def cmd_chain(args: argparse.Namespace, files: FileHandler, settings: Settings) -> int:
    g = files.load_graph(args.graph)
    start = files.load_plan(args.plan)
    require_valid_plan(g, start)
    cfg = ChainConfig(
        steps=args.steps,
        rng_seed=args.seed,
        trees_per_step=args.trees_per_step,
        tree_sampler=args.tree_sampler,
        cut_policy=args.cut_policy,
        epsilon=args.epsilon,
    )
    with progress_bar() as progress:
        task = progress.add_task("[purple]Recombining...", total=max(cfg.steps, 1))
        plan = run_chain(
            g,
            start,
            cfg,
            validate=False,
            progress_callback=lambda done, total: progress.update(task, completed=done),
        )
    files.save_plan(args.output, plan, g)
    console.print(
        f"[green]Chain finished:[/green] {cfg.steps} steps, deviation "
        f"{population_deviation(g, start, validate=False):.2%} -> "
        f"{population_deviation(g, plan, validate=False):.2%}, saved to {args.output}"
    )
    return EXIT_OK


def _ensemble_config(args: argparse.Namespace, settings: Settings) -> EnsembleConfig:
    missing = [flag for flag, value in (("-m", args.districts), ("-n", args.chains), ("--seed", args.seed)) if value is None]
    if missing:
        raise UsageError(f"ensemble requires {', '.join(missing)} unless --from-manifest is given")
    return EnsembleConfig(
        num_chains=args.chains,
        districts=args.districts,
        steps_per_chain=args.steps,
        base_seed=args.seed,
        parallelism=settings.default_jobs if args.jobs is None else args.jobs,
        trees_per_step=args.trees_per_step,
        tree_sampler=args.tree_sampler,
        cut_policy=args.cut_policy,
        epsilon=args.epsilon,
    )


def cmd_ensemble(args: argparse.Namespace, files: FileHandler, settings: Settings) -> int:
    if args.from_manifest:
        manifest = files.load_manifest(args.from_manifest)
        graph_path = args.graph or manifest.graph_path
        digest = files.file_digest(graph_path)
        if digest != manifest.graph_sha256:
            raise PlansimConfigError(
                "Graph file does not match the manifest digest",
                details={"graph_path": str(graph_path), "expected": manifest.graph_sha256, "actual": digest},
            )
        cfg = manifest.config
        if args.jobs is not None:
            cfg = cfg.model_copy(update={"parallelism": args.jobs})
        logger.info("Replaying ensemble from manifest '%s'", args.from_manifest)
    else:
        if args.graph is None:
            raise UsageError("ensemble requires --graph unless --from-manifest is given")
        graph_path = args.graph
        digest = files.file_digest(graph_path)
        cfg = _ensemble_config(args, settings)

    g = files.load_graph(graph_path)
    with progress_bar() as progress:
        task = progress.add_task(
            f"[purple]Running {cfg.num_chains} chains ({cfg.parallelism} jobs)...",
            total=cfg.num_chains,
        )
        result = run_ensemble_detailed(
            g,
            cfg,
            progress_callback=lambda done, total: progress.update(task, completed=done),
        )

    output = Path(args.output)
    plan_files = files.save_plan_directory(output, result.plans, g)
    manifest = RunManifest(
        tool=settings.app_name,
        tool_version=settings.app_version,
        created_at=datetime.now(timezone.utc).isoformat(),
        graph_path=str(graph_path),
        graph_sha256=digest,
        config=cfg,
        chain_seeds=result.chain_seeds,
        plan_files=plan_files,
        timings=ManifestTimings(
            total_seconds=result.total_seconds, chains_seconds=result.chain_seconds
        ),
    )
    files.save_manifest(output / "manifest.json", manifest)
    console.print(Panel(
        f"[green bold]Saved {len(plan_files)} plans and manifest to [purple]{output}[/purple] "
        f"in {result.total_seconds:.1f} s[/green bold]",
        border_style="green",
        padding=(0, 2),
    ))
    return EXIT_OK


def cmd_similarity(args: argparse.Namespace, files: FileHandler, settings: Settings) -> int:
    g = files.load_graph(args.graph)
    plan_a = files.load_plan(args.plan_a)
    plan_b = files.load_plan(args.plan_b)
    scores = similarity_scores(g, plan_a, plan_b, parse_kinds(args.kind))
    if args.details:
        document = {kind.value: score.to_dict() for kind, score in scores.items()}
    else:
        document = {kind.value: score.value for kind, score in scores.items()}
    print(json.dumps(document))
    return EXIT_OK


def cmd_relabel(args: argparse.Namespace, files: FileHandler, settings: Settings) -> int:
    g = files.load_graph(args.graph)
    reference = files.load_plan(args.reference)
    target = files.load_plan(args.target)
    if reference.num_districts > target.num_districts:
        raise AssignmentError(
            f"Reference has {reference.num_districts} districts but target only "
            f"{target.num_districts}; relabel the larger plan against the smaller one"
        )

    mtx = intersection_matrix(g, reference, target, WeightKind.parse(args.kind))
    assignment = solve_assignment(mtx, tie_break=True, tie_tolerance=settings.tie_tolerance)
    relabeled = relabel_plan(target, assignment, FallbackPolicy(args.fallback))
    labels = extend_labels(list(reference.labels), relabeled.num_districts)
    relabeled = relabeled.with_labels(labels)
    files.save_plan(args.output, relabeled, g)

    table = Table(title="District relabeling", box=box.ROUNDED, header_style="bold purple")
    table.add_column("Target label")
    table.add_column("New label")
    table.add_column(f"Shared {mtx.kind.value}", justify="right")
    for i, j in enumerate(assignment.mapping):
        table.add_row(target.labels[j], labels[i], f"{mtx.weights[i, j]:.6g}")
    for offset, j in enumerate(assignment.unmatched_columns()):
        table.add_row(target.labels[j], labels[assignment.num_rows + offset], "-")
    console.print(table)
    console.print(f"[green]Saved relabeled plan to[/green] {args.output}")
    return EXIT_OK


def cmd_pairwise(args: argparse.Namespace, files: FileHandler, settings: Settings) -> int:
    g = files.load_graph(args.graph)
    _, plans = files.load_plan_directory(args.plans)
    jobs = settings.default_jobs if args.jobs is None else args.jobs
    with progress_bar() as progress:
        task = progress.add_task(f"[purple]Scoring {len(plans)} plans...", total=None)
        scores = pairwise_similarities(
            g,
            plans,
            parse_kinds(args.kind),
            parallelism=jobs,
            progress_callback=lambda done, total: progress.update(task, completed=done, total=total),
        )
    files.save_scores(args.output, scores)
    pair_count = len(next(iter(scores.values())))
    if pair_count:
        display_summaries(
            _summaries_of(scores, settings.histogram_bins), settings, f"{pair_count} plan pairs"
        )
    console.print(f"[green]Saved scores to[/green] {args.output}")
    return EXIT_OK


def cmd_summarize(args: argparse.Namespace, files: FileHandler, settings: Settings) -> int:
    scores = files.load_scores(args.scores)
    if not scores:
        raise SummaryError("Cannot summarize an empty score list", details={"scores": str(args.scores)})
    bins = settings.histogram_bins if args.bins is None else args.bins
    summaries = _summaries_of(scores, bins)
    files.save_summary(args.output, summaries)
    display_summaries(summaries, settings, Path(args.scores).name)
    console.print(f"[green]Saved summary to[/green] {args.output}")
    return EXIT_OK


def cmd_compare(args: argparse.Namespace, files: FileHandler, settings: Settings) -> int:
    g = files.load_graph(args.graph)
    reference = files.load_plan(args.reference)
    _, plans = files.load_plan_directory(args.plans)
    kind = WeightKind.parse(args.kind)
    scores = reference_similarity(g, reference, plans, kind)
    files.save_reference_scores(args.output, scores)
    summary = summarize([s.value for s in scores], settings.histogram_bins, kind)
    display_summaries({kind: summary}, settings, f"{Path(args.reference).name} vs {len(plans)} plans")
    console.print(f"[green]Saved comparison to[/green] {args.output}")
    return EXIT_OK


def cmd_synth(args: argparse.Namespace, files: FileHandler, settings: Settings) -> int:
    if args.shape == "grid":
        try:
            spec = GridSpec(
                rows=args.rows,
                cols=args.cols,
                pattern=PopulationPattern(args.pattern),
                population_per_cell=args.population_per_cell,
                hotspot_fraction=args.hotspot_fraction,
                hotspot_size=args.hotspot_size,
            )
        except ValidationError as e:
            raise UsageError(f"Invalid grid: {e.errors()[0]['msg']}") from e
        g: DualGraph = grid_state(spec)
        files.save_graph(args.output, g)
        console.print(f"[green]Wrote {spec.rows}x{spec.cols} grid to[/green] {args.output}")
    elif args.shape == "circle":
        g = circle_state(args.wedges)
        files.save_graph(args.output, g)
        console.print(f"[green]Wrote {args.wedges}-wedge circle to[/green] {args.output}")
    else:
        g = circle_state(args.wedges)
        plan: Plan = radial_plan(args.wedges, args.districts, args.offset)
        files.save_plan(args.output, plan, g)
        console.print(
            f"[green]Wrote {args.districts}-district radial plan (offset {args.offset}) to[/green] "
            f"{args.output}"
        )
    return EXIT_OK


COMMANDS: Dict[str, Callable[[argparse.Namespace, FileHandler, Settings], int]] = {
    "validate": cmd_validate,
    "seed": cmd_seed,
    "chain": cmd_chain,
    "ensemble": cmd_ensemble,
    "similarity": cmd_similarity,
    "relabel": cmd_relabel,
    "pairwise": cmd_pairwise,
    "summarize": cmd_summarize,
    "compare": cmd_compare,
    "synth": cmd_synth,
}


def build_parser() -> argparse.ArgumentParser:
    """Build the argument parser with all commands."""
    parser = PlansimArgumentParser(
        prog="plansim",
        description="plansim - relabeling-invariant similarity of districting plans",
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog=(
            "Examples:\n"
            "  plansim synth grid --rows 12 --cols 12 -o grid.json\n"
            "  plansim ensemble --graph grid.json -m 4 -n 50 --seed 7 --jobs 8 -o runs/\n"
            "  plansim pairwise --graph grid.json --plans runs/ --kind both -o scores.csv\n"
            "  plansim summarize --scores scores.csv --bins 40 -o summary.json\n"
            "  plansim similarity --graph grid.json --plan-a a.csv --plan-b b.csv\n"
            "  plansim relabel --graph grid.json --reference a.csv --target b.csv -o b2.csv\n"
        ),
    )
    parser.add_argument("-v", "--verbose", action="store_true", help="Enable verbose logging")
    subparsers = parser.add_subparsers(dest="command", help="Available commands")

    vd = subparsers.add_parser("validate", help="Validate a graph and optionally a plan")
    vd.add_argument("--graph", required=True, help="Graph JSON file")
    vd.add_argument("--plan", help="Plan CSV file")

    sd = subparsers.add_parser("seed", help="Seed a plan by recursive merging")
    sd.add_argument("--graph", required=True, help="Graph JSON file")
    sd.add_argument("-m", "--districts", type=int, required=True, help="Number of districts")
    sd.add_argument("--seed", type=seed_value, required=True, help="RNG seed")
    sd.add_argument("-o", "--output", required=True, help="Output plan CSV")

    ch = subparsers.add_parser("chain", help="Run an optimal recombination chain")
    ch.add_argument("--graph", required=True, help="Graph JSON file")
    ch.add_argument("--plan", required=True, help="Starting plan CSV")
    ch.add_argument("--steps", type=int, required=True, help="Recombination steps")
    ch.add_argument("--seed", type=seed_value, required=True, help="RNG seed")
    ch.add_argument("-o", "--output", required=True, help="Output plan CSV")
    _chain_options(ch)

    en = subparsers.add_parser("ensemble", help="Run N independent seeded chains")
    en.add_argument("--graph", help="Graph JSON file (default: the manifest's graph)")
    en.add_argument("-m", "--districts", type=int, help="Number of districts")
    en.add_argument("-n", "--chains", type=int, help="Number of chains")
    en.add_argument("--steps", type=int, help="Steps per chain (default: 50 * m)")
    en.add_argument("--seed", type=seed_value, help="Base seed")
    en.add_argument("--jobs", type=positive_int, help="Parallel workers")
    en.add_argument("--from-manifest", help="Replay the run described by a manifest")
    en.add_argument("-o", "--output", required=True, help="Output directory")
    _chain_options(en, trees_default=None)

    sm = subparsers.add_parser("similarity", help="Similarity score of two plans (JSON)")
    sm.add_argument("--graph", required=True, help="Graph JSON file")
    sm.add_argument("--plan-a", required=True, help="First plan CSV")
    sm.add_argument("--plan-b", required=True, help="Second plan CSV")
    sm.add_argument("--kind", choices=KIND_CHOICES, default="area", help="Weighting (default: area)")
    sm.add_argument("--details", action="store_true", help="Include matched and total weights")

    rl = subparsers.add_parser("relabel", help="Renumber a plan to best match a reference")
    rl.add_argument("--graph", required=True, help="Graph JSON file")
    rl.add_argument("--reference", required=True, help="Reference plan CSV")
    rl.add_argument("--target", required=True, help="Plan CSV to renumber")
    rl.add_argument("--kind", choices=["area", "population"], default="area", help="Weighting")
    rl.add_argument(
        "--fallback",
        choices=[f.value for f in FallbackPolicy],
        default=FallbackPolicy.ASCENDING.value,
        help="Numbering of unmatched target districts",
    )
    rl.add_argument("-o", "--output", required=True, help="Output plan CSV")

    pw = subparsers.add_parser("pairwise", help="Score every pair of plans in a directory")
    pw.add_argument("--graph", required=True, help="Graph JSON file")
    pw.add_argument("--plans", required=True, help="Directory of plan CSV files")
    pw.add_argument("--kind", choices=KIND_CHOICES, default="area", help="Weighting (default: area)")
    pw.add_argument("--jobs", type=positive_int, help="Parallel workers")
    pw.add_argument("-o", "--output", required=True, help="Output scores CSV")

    su = subparsers.add_parser("summarize", help="Summary statistics of a scores file")
    su.add_argument("--scores", required=True, help="Scores CSV")
    su.add_argument("--bins", type=positive_int, help="Histogram bins (default from settings)")
    su.add_argument("-o", "--output", required=True, help="Output summary JSON")

    cp = subparsers.add_parser("compare", help="Score one plan against every plan of a directory")
    cp.add_argument("--graph", required=True, help="Graph JSON file")
    cp.add_argument("--reference", required=True, help="Plan CSV to compare")
    cp.add_argument("--plans", required=True, help="Directory of plan CSV files")
    cp.add_argument("--kind", choices=["area", "population"], default="area", help="Weighting")
    cp.add_argument("-o", "--output", required=True, help="Output CSV")

    sy = subparsers.add_parser("synth", help="Generate synthetic geometries")
    shapes = sy.add_subparsers(dest="shape", required=True)
    gr = shapes.add_parser("grid", help="Grid of unit cells")
    gr.add_argument("--rows", type=int, required=True)
    gr.add_argument("--cols", type=int, required=True)
    gr.add_argument("--pattern", choices=[p.value for p in PopulationPattern], default="uniform")
    gr.add_argument("--population-per-cell", type=int, default=100)
    gr.add_argument("--hotspot-fraction", type=float, default=0.5)
    gr.add_argument("--hotspot-size", type=int, default=2)
    gr.add_argument("-o", "--output", required=True, help="Output graph JSON")
    ci = shapes.add_parser("circle", help="Disc cut into radial wedges")
    ci.add_argument("--wedges", type=int, required=True)
    ci.add_argument("-o", "--output", required=True, help="Output graph JSON")
    ra = shapes.add_parser("radial", help="Radial plan on the wedge circle")
    ra.add_argument("--wedges", type=int, required=True)
    ra.add_argument("-m", "--districts", type=int, required=True)
    ra.add_argument("--offset", type=int, default=0)
    ra.add_argument("-o", "--output", required=True, help="Output plan CSV")

    return parser


def cli_dispatch(argv: Optional[Sequence[str]] = None) -> int:
    """Run one command and return its exit code."""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except UsageError as e:
        return report_error(e)

    settings = get_settings()
    if not args.command:
        print_banner(settings)
        parser.print_help()
        return EXIT_USAGE

    setup_logging(args.verbose, settings)
    try:
        return COMMANDS[args.command](args, FileHandler(), settings)
    except PlansimException as e:
        logger.debug("Command '%s' failed", args.command, exc_info=True)
        return report_error(e)
    except ValidationError as e:
        first = e.errors()[0]
        return report_error(UsageError(f"Invalid configuration: {first['msg']}"))
    except KeyboardInterrupt:
        console.print("\n[yellow]Operation cancelled.[/yellow]")
        return 130


def main() -> None:
    """Main CLI entry point."""
    sys.exit(cli_dispatch())


if __name__ == "__main__":
    main()
