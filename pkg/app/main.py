# app/main.py
import os
import sys
import time
from fractions import Fraction

import click
import jsonschema
import orjson
import pandas as pd

# Import configurations and logging
from config import Config
from logger_config import get_logger, log_command, log_system_info, setup_logging

# Import services
from models.errors import (
    CatalogConstraintError,
    NotAMemberError,
    ReportParseError,
    SymtestFailedError,
    UnknownFamilyError,
)
from services.catalog import CatalogService, CatalogTag, format_tag, parse_tag, torsion_example
from services.classify import ClassificationScanner, ScanGrid
from services.tila import (
    TauElement,
    build_tila,
    central_element_analysis,
    killing_summary,
    symtest,
    verification_report,
)
from services.torsion import TorsionService

logger = get_logger("main")

EXIT_OK, EXIT_FAILED, EXIT_USAGE = 0, 1, 2
INPUT_ERRORS = (ReportParseError, CatalogConstraintError, UnknownFamilyError, NotAMemberError)

catalog_service = CatalogService()


def _default(obj):
    if isinstance(obj, Fraction):
        return str(obj)
    raise TypeError(f"cannot encode {type(obj).__name__}")


def encode(report):
    """Sorted-key JSON bytes; identical inputs give identical bytes"""
    return orjson.dumps(report, default=_default, option=orjson.OPT_SORT_KEYS | orjson.OPT_INDENT_2)


def validate_report(schema_name, report):
    """Validate the encoded report against app/schemas/<name>.schema.json"""
    if not Config.VALIDATE_REPORTS:
        return
    path = os.path.join(Config.SCHEMA_DIR, f"{schema_name}.schema.json")
    with open(path, "rb") as handle:
        schema = orjson.loads(handle.read())
    jsonschema.validate(instance=orjson.loads(encode(report)), schema=schema)


def pretty_table(command, report):
    """Human-readable summary derived from the JSON report"""
    if command == "verify":
        frame = pd.DataFrame(sorted(report["axioms"].items()), columns=["check", "passed"])
        header = f"dim g = {report['dim_g']}, dim m = {report['dim_m']}, dim l = {report['dim_l']}"
        return header + "\n" + frame.to_string(index=False)
    if command == "classify":
        rows = [
            {"tag": o["tag"], "a": "/".join(o["normalized"]["a"]), "d": o["normalized"]["d"],
             "blocks": " ".join(o["normalized"]["blocks"])}
            for o in report["outcomes"]
        ]
        return pd.DataFrame(rows, columns=["tag", "a", "d", "blocks"]).to_string(index=False)
    if command == "catalog-list":
        columns = ["tag", "dim_g", "dim_l", "semisimple_dim", "radical_dim", "killing_degenerate"]
        return pd.DataFrame(report["cases"], columns=columns).to_string(index=False)
    flat = {k: v for k, v in report.items() if not isinstance(v, (dict, list))}
    return pd.Series(flat, dtype=object).to_string()


def emit(command, report, out=None, pretty=False):
    payload = encode(report)
    if out:
        with open(out, "wb") as handle:
            handle.write(payload + b"\n")
        logger.info(f"[OUTPUT] report written to {out}")
    if pretty:
        click.echo(pretty_table(command, report))
    elif not out:
        click.echo(payload.decode("utf-8"))


def resolve_tag(target, n, p, q):
    """Tag from "family:n,p,q" or from a bare family name plus --n/--p/--q"""
    if ":" in target:
        return parse_tag(target)
    if n is None:
        raise ReportParseError(f"{target!r} needs --n")
    return CatalogTag(target, n, p, q).check()


def load_tau(path):
    try:
        with open(path, "rb") as handle:
            data = orjson.loads(handle.read())
        return TauElement.from_json(data)
    except (orjson.JSONDecodeError, KeyError, TypeError, ValueError) as e:
        if isinstance(e, INPUT_ERRORS):
            raise
        raise ReportParseError(f"malformed generator file {path}: {str(e)}")


def output_options(func):
    func = click.option("--pretty", is_flag=True, help="Print a table instead of JSON")(func)
    func = click.option("--out", type=click.Path(dir_okay=False), default=None, help="Write the JSON report here")(func)
    return func


@click.group()
@click.option("--log-level", default=None, help="Override LOG_LEVEL")
@click.option("--no-log-file", is_flag=True, help="Log to stderr only")
def cli(log_level, no_log_file):
    """Workbench for quaternionic skew-Hermitian transvection algebras."""
    setup_logging(level=log_level, log_to_file=False if no_log_file else None)
    if Config.LOG_TO_FILE and not no_log_file:
        Config.create_directories()
    log_system_info()


@cli.command()
@click.argument("target", required=False)
@click.option("--tau-file", type=click.Path(exists=True, dir_okay=False), default=None, help="Generator as JSON")
@click.option("--n", type=int, default=None)
@click.option("--p", type=int, default=0)
@click.option("--q", type=int, default=0)
@output_options
@log_command
def verify(target, tau_file, n, p, q, out, pretty):
    """Build and verify the algebra of a catalog tag or a generator file."""
    if bool(target) == bool(tau_file):
        raise click.UsageError("give exactly one of TARGET or --tau-file")
    start_time = time.time()
    try:
        if tau_file:
            tau = load_tau(tau_file)
            if not tau.is_symmetric:
                raise ReportParseError("verify needs a symmetric generator (C = 0); use torsion for C != 0")
            symmetric = symtest(tau)
            if not symmetric.passed:
                emit("symtest", {"tau": tau.to_json(), "symtest": symmetric.to_json(), "passed": False}, out)
                sys.exit(EXIT_FAILED)
            report = verification_report(build_tila(tau))
        else:
            case, t = catalog_service.build(resolve_tag(target, n, p, q))
            report = verification_report(t, case.blocks, case.expected)
            report["tag"] = format_tag(case.tag)
    except INPUT_ERRORS as e:
        raise click.UsageError(str(e))
    except SymtestFailedError as e:
        logger.error(f"[ERROR] {str(e)}")
        sys.exit(EXIT_FAILED)
    logger.info(f"[TIMING] verify completed in {time.time() - start_time:.2f}s")
    if report["passed"]:
        validate_report("verify", report)
    emit("verify", report, out, pretty)
    sys.exit(EXIT_OK if report["passed"] else EXIT_FAILED)


@cli.command()
@click.option("--n", type=click.IntRange(min=2), required=True)
@click.option("--grid-height", type=click.IntRange(min=1), default=None)
@click.option("--grid-range", type=click.IntRange(min=1), default=None)
@click.option("--workers", type=click.IntRange(min=1), default=None)
@output_options
@log_command
def classify(n, grid_height, grid_range, workers, out, pretty):
    """Scan block normal forms and match survivors to catalog tags."""
    grid = ScanGrid(
        grid_height or Config.CLASSIFY_GRID_HEIGHT,
        Fraction(grid_range or Config.CLASSIFY_GRID_RANGE),
    )
    result = ClassificationScanner(grid, workers).scan(n)
    report = result.to_json()
    if not result.unmatched:
        validate_report("classify", report)
    emit("classify", report, out, pretty)
    sys.exit(EXIT_FAILED if result.unmatched else EXIT_OK)


@cli.command()
@click.option("--n", type=click.IntRange(min=2), required=True)
@output_options
@log_command
def torsion(n, out, pretty):
    """Torsion functional and solvable closure of the C != 0 example."""
    tauhat, complement = torsion_example(n)
    report = TorsionService().report(tauhat, complement)
    passed = report["on_line"] and report["forcing_check"]
    if passed:
        validate_report("torsion", report)
    emit("torsion", report, out, pretty)
    sys.exit(EXIT_OK if passed else EXIT_FAILED)


@cli.command("catalog-list")
@click.option("--n", type=click.IntRange(min=2), required=True)
@output_options
@log_command
def catalog_list(n, out, pretty):
    """Admissible tags for n with their expected dimensions."""
    report = {"n": n, "cases": catalog_service.list_cases(n)}
    validate_report("catalog", report)
    emit("catalog-list", report, out, pretty)


@cli.command()
@click.argument("target")
@click.option("--n", type=int, default=None)
@click.option("--p", type=int, default=0)
@click.option("--q", type=int, default=0)
@output_options
@log_command
def killing(target, n, p, q, out, pretty):
    """Intrinsic Killing rank, ambient trace form on m and the central element."""
    try:
        case, t = catalog_service.build(resolve_tag(target, n, p, q))
    except INPUT_ERRORS as e:
        raise click.UsageError(str(e))
    summary = killing_summary(t)
    central = central_element_analysis(t)
    report = {"tag": format_tag(case.tag), "dim_g": t.dim_g, "killing": summary, "central": central.to_json()}
    validate_report("killing", report)
    emit("killing", report, out, pretty)


@cli.command()
@log_command
def info():
    """Effective configuration."""
    errors, warnings = Config.validate_config()
    report = {"config": Config.get_service_info(), "errors": errors, "warnings": warnings}
    if not errors:
        validate_report("info", report)
    emit("info", report)
    sys.exit(EXIT_USAGE if errors else EXIT_OK)


if __name__ == '__main__':
    try:
        cli()
    except Exception as e:
        logger.error(f"Failed to run command: {str(e)}")
        raise
