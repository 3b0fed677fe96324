import random
import sys
from typing import Optional, Sequence

import click

from finitree import __version__
from finitree.analyzer.engine import analyze as run_analysis
from finitree.analyzer.engine import compare_domains, entry_goal, specialize_entry
from finitree.analyzer.parser import parse_program
from finitree.analyzer.report import build_report, render_comparison, render_text, to_json
from finitree.analyzer.solve import check_summary
from finitree.config import get_config
from finitree.exceptions import AnalysisError
from finitree.logger import setup_logger

logger = setup_logger(__name__)
cfg = get_config()

DOMAIN = cfg["analysis"]["domain"]
MAX_ITERATIONS = cfg["analysis"]["max_iterations"]
STRICT = cfg["analysis"]["strict"]
SEED = cfg["sampling"]["seed"]
FORMAT = cfg["report"]["format"]
DOMAINS = cfg["report"]["domains"]
SELF_CHECK_DEPTH = cfg["report"]["self_check_depth"]
SELF_CHECK_SAMPLES = cfg["report"]["self_check_samples"]


@click.group()
@click.version_option(__version__, prog_name="finitree")
def main():
    """Finite-tree, sharing and groundness analysis of Prolog programs over rational trees."""


@main.command()
@click.argument("file")
@click.option("--entry", "entries", multiple=True, metavar="NAME/ARITY",
              help="Report only these predicates, from their most general query.")
@click.option("--domain", type=click.Choice(DOMAINS), default=DOMAIN, show_default=True,
              help="Domain layers to run.")
@click.option("--max-iterations", type=click.IntRange(min=1), default=MAX_ITERATIONS, show_default=True,
              help="Rounds allowed per call-graph component.")
@click.option("--dump-fixpoint", is_flag=True, help="Print every summary update.")
@click.option("--seed", type=int, default=SEED, show_default=True,
              help="Seed for the randomized self-check.")
@click.option("--format", "output_format", type=click.Choice(["text", "json"]), default=FORMAT,
              show_default=True)
@click.option("--compare", is_flag=True, help="Count finite parameters under every domain setting.")
@click.option("--self-check", is_flag=True,
              help="Check summaries against answers of a bounded interpreter.")
@click.option("--strict", is_flag=True, default=STRICT, help="Fail on unknown predicates.")
def analyze(file, entries, domain, max_iterations, dump_fixpoint, seed, output_format, compare,
            self_check, strict):
    """Analyze the Prolog program in FILE."""
    try:
        with open(file, encoding="utf-8") as f:
            text = f.read()
    except FileNotFoundError:
        raise AnalysisError(f"file not found: {file}")

    program = parse_program(text)
    result = run_analysis(program, domain, max_iterations, strict)
    diagnostics = output_format == "json"

    if dump_fixpoint:
        for iteration, indicator, state in result.history:
            click.echo(f"[{iteration}] {indicator}: {state}", err=diagnostics)

    entry_states = None
    if entries:
        entry_states = {}
        for indicator in entries:
            result.summary(indicator)
            goal = entry_goal(result, indicator)
            entry_states[indicator] = (goal.args, specialize_entry(result, goal))

    report = build_report(result, entry_states)
    click.echo(to_json(report) if output_format == "json" else render_text(report), nl=False)
    if output_format == "json":
        click.echo()

    if compare:
        click.echo(render_comparison(compare_domains(program, max_iterations, layers=DOMAINS)),
                   nl=False, err=diagnostics)

    if self_check:
        rng = random.Random(seed)
        findings = []
        for indicator in (entries or sorted(result.summaries)):
            findings += check_summary(result, indicator, SELF_CHECK_DEPTH, SELF_CHECK_SAMPLES, rng)
        for finding in findings:
            click.echo(f"unsound: {finding}", err=True)
        if findings:
            raise AnalysisError(f"{len(findings)} self-check findings")
        click.echo("self-check: no findings", err=True)


def run(argv: Optional[Sequence[str]] = None) -> int:
    """
    Run the command line and return its exit code: 0 on success, 1 on an
    analysis error, 2 on a usage error.
    """
    try:
        code = main.main(args=list(argv) if argv is not None else None, prog_name="finitree",
                         standalone_mode=False)
    except click.UsageError as e:
        e.show()
        return 2
    except click.ClickException as e:
        e.show()
        return 1
    except (AnalysisError, OSError) as e:
        message = e.message if isinstance(e, AnalysisError) else str(e)
        logger.error(message)
        click.echo(f"error: {message}", err=True)
        return 1
    except click.Abort:
        click.echo("aborted", err=True)
        return 1
    return code if isinstance(code, int) else 0


def entry_point():
    sys.exit(run())
