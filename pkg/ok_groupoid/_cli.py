#!/usr/bin/env python3

"""CLI tool to check finite groupoids and analyze their C*-algebras"""

import json
import logging
import math
import re
import sys

try:
    import click
    import ok_logging_setup
except ModuleNotFoundError:
    print("\n⚠️ Try: pip install 'ok-groupoid'\n", file=sys.stderr)
    raise

import ok_groupoid
from ok_groupoid._formats import format_matrix, format_number

ok_logging_setup.install()

EXIT_PROPERTY_FAILURE = 2
EXIT_SINGULAR = 3

_groupoid_arg = click.argument("groupoid_path", metavar="GROUPOID")
_element_arg = click.argument("element_path", metavar="ELEMENT")
_json_opt = click.option("--json", "as_json", is_flag=True)
_tol_opt = click.option(
    "--tol", type=click.FloatRange(min=0.0, min_open=True), default=1e-8
)
_orbit_reps_opt = click.option("--orbit-reps", is_flag=True)
_seed_opt = click.option("--seed", type=int, default=0)
_trials_opt = click.option(
    "--trials", type=click.IntRange(min=1), default=200
)


@click.group()
def main():
    pass


@main.command()
@_groupoid_arg
@_json_opt
def validate_command(groupoid_path: str, as_json: bool = False):
    """Check a groupoid file against every groupoid law"""

    groupoid = _load_groupoid(groupoid_path)
    summary = {
        "valid": True,
        "arrows": groupoid.size,
        "units": len(groupoid.units),
        "orbits": len(groupoid.orbits().classes),
    }
    if as_json:
        _echo_json(summary)
    else:
        click.echo(
            f"valid: {summary['arrows']} arrows, {summary['units']} units, "
            f"{summary['orbits']} orbits"
        )


@main.command()
@_groupoid_arg
@_json_opt
def info_command(groupoid_path: str, as_json: bool = False):
    """Print the units, arrows, orbits and isotropy of a groupoid"""

    groupoid = _load_groupoid(groupoid_path)
    orbits = groupoid.orbits()
    arrows = [groupoid.arrow(g) for g in range(groupoid.size)]
    if as_json:
        _echo_json(
            {
                "units": list(groupoid.units),
                "arrows": [
                    {
                        "id": a.id,
                        "name": groupoid.names[a.id],
                        "source": a.source,
                        "range": a.range,
                        "inverse": groupoid.inverses[a.id],
                    }
                    for a in arrows
                ],
                "orbits": [list(c) for c in orbits.classes],
                "isotropy_orders": {
                    str(x): ok_groupoid.isotropy_order(groupoid, x)
                    for x in groupoid.units
                },
            }
        )
        return

    click.echo(f"units: {' '.join(str(u) for u in groupoid.units)}")
    click.echo(f"arrows: {groupoid.size}")
    for a in arrows:
        name = groupoid.names[a.id]
        click.echo(f"  {a.id} [{name}]: {a.source} -> {a.range}")
    click.echo(f"orbits: {len(orbits.classes)}")
    for cls in orbits.classes:
        click.echo(f"  {' '.join(str(u) for u in cls)}")
    click.echo("isotropy orders:")
    for x in groupoid.units:
        click.echo(f"  {x} {ok_groupoid.isotropy_order(groupoid, x)}")


@main.command()
@_groupoid_arg
@_element_arg
@_orbit_reps_opt
@_json_opt
def norm_command(
    groupoid_path: str,
    element_path: str,
    orbit_reps: bool = False,
    as_json: bool = False,
):
    """Compute ‖a‖ as the largest ‖λ_x(a)‖ over units x"""

    a = _load_element(groupoid_path, element_path)
    logging.info("📏 Computing regular representation norms...")
    profile = ok_groupoid.norm(a, orbit_reps=orbit_reps)
    if as_json:
        _echo_json(
            {
                "norm": profile.value,
                "max_unit": profile.max_unit,
                "per_unit": _per_unit(profile.per_unit),
            }
        )
        return

    click.echo(f"norm {_human(profile.value)}")
    click.echo(f"attained at unit {profile.max_unit}")
    for x, v in profile.per_unit.items():
        click.echo(f"  {x} {_human(v)}")


@main.command()
@_groupoid_arg
@_element_arg
@click.option("--matrix", "show_matrix", is_flag=True)
@_json_opt
def spectrum_command(
    groupoid_path: str,
    element_path: str,
    show_matrix: bool = False,
    as_json: bool = False,
):
    """Print the spectrum of a self-adjoint element"""

    a = _load_element(groupoid_path, element_path)
    try:
        values = ok_groupoid.spectrum(a)
    except ok_groupoid.NotSelfAdjoint:
        ok_logging_setup.exit(
            f"🚫 {element_path} is not self-adjoint, spectrum is not real"
        )

    full = ok_groupoid.full_regular(a.groupoid, a)
    if as_json:
        doc: dict = {"eigenvalues": [float(v) for v in values]}
        if show_matrix:
            doc["matrix"] = [
                [[float(c.real), float(c.imag)] for c in row]
                for row in full.matrix
            ]
        _echo_json(doc)
        return

    click.echo(" ".join(_human(v) for v in values))
    if show_matrix:
        click.echo(format_matrix(full.matrix), nl=False)


@main.command()
@_groupoid_arg
@_element_arg
@_tol_opt
@_orbit_reps_opt
@_json_opt
def invert_command(
    groupoid_path: str,
    element_path: str,
    tol: float = 1e-8,
    orbit_reps: bool = False,
    as_json: bool = False,
):
    """Decide invertibility one regular representation at a time"""

    a = _load_element(groupoid_path, element_path)
    logging.info("🔍 Checking invertibility (tol=%g)...", tol)
    opts = ok_groupoid.AnalysisOptions(tol=tol, orbit_reps=orbit_reps)
    report = ok_groupoid.invertible_family(a, opts)
    low = report.per_unit[report.witness]
    shift_witness = None
    if not report.invertible:
        shift_witness = ok_groupoid.roch_witness(a, tol)

    if as_json:
        _echo_json(
            {
                "verdict": report.verdict,
                "min_sigma": low,
                "witness": report.witness,
                "shift_witness": shift_witness,
                "tol": report.tol,
                "per_unit": _per_unit(report.per_unit),
            }
        )
    else:
        click.echo(f"{report.verdict}, min σ = {_human(low)}")
        if not report.invertible:
            click.echo(f"witness unit {report.witness}")
            click.echo(f"norm-shift witness unit {shift_witness}")
        for x, v in report.per_unit.items():
            click.echo(f"  {x} {_human(v)}")

    if not report.invertible:
        logging.info("🚫 Singular (witness unit %s)", report.witness)
        sys.exit(EXIT_SINGULAR)
    logging.info("✅ Invertible")


@main.command()
@_groupoid_arg
@_element_arg
@_orbit_reps_opt
@_json_opt
def profile_command(
    groupoid_path: str,
    element_path: str,
    orbit_reps: bool = False,
    as_json: bool = False,
):
    """List x ↦ ‖λ_x(a)‖ as two columns, for plotting"""

    a = _load_element(groupoid_path, element_path)
    profile = ok_groupoid.norm(a, orbit_reps=orbit_reps)
    if as_json:
        _echo_json(_per_unit(profile.per_unit))
        return
    for x, v in profile.per_unit.items():
        click.echo(f"{x} {_human(v)}")


@main.command()
@_groupoid_arg
@_seed_opt
@_trials_opt
@_json_opt
def induce_check_command(
    groupoid_path: str,
    seed: int = 0,
    trials: int = 200,
    as_json: bool = False,
):
    """Check the Hilbert module and induced representation identities"""

    groupoid = _load_groupoid(groupoid_path)
    logging.info("🧪 Checking induction identities (%d trials)...", trials)
    opts = ok_groupoid.SuiteOptions(trials=trials, seed=seed)
    _finish_report(ok_groupoid.verify_induction(groupoid, opts), as_json)


@main.command()
@_groupoid_arg
@_seed_opt
@_trials_opt
@_tol_opt
@_json_opt
def verify_command(
    groupoid_path: str,
    seed: int = 0,
    trials: int = 200,
    tol: float = 1e-8,
    as_json: bool = False,
):
    """Run every property check on a groupoid"""

    groupoid = _load_groupoid(groupoid_path)
    logging.info("🧪 Running property suite (%d trials)...", trials)
    opts = ok_groupoid.SuiteOptions(trials=trials, seed=seed, tol=tol)
    _finish_report(ok_groupoid.verify_suite(groupoid, opts), as_json)


def _load_groupoid(path: str) -> ok_groupoid.FiniteGroupoid:
    logging.info("🔎 Loading groupoid %s", path)
    try:
        groupoid = ok_groupoid.load_groupoid(path)
    except ok_groupoid.GroupoidException as ex:
        ok_logging_setup.exit(f"💥 {ex}")
    logging.info(
        "✅ %d arrows, %d units", groupoid.size, len(groupoid.units)
    )
    return groupoid


def _load_element(
    groupoid_path: str, element_path: str
) -> ok_groupoid.AlgebraElement:
    groupoid = _load_groupoid(groupoid_path)
    try:
        return ok_groupoid.load_element(element_path, groupoid)
    except ok_groupoid.GroupoidException as ex:
        ok_logging_setup.exit(f"💥 {ex}")


def _finish_report(report: ok_groupoid.SuiteReport, as_json: bool):
    if as_json:
        _echo_json(report.to_json())
    else:
        click.echo(report.format())
    if not report.passed:
        failed = [r.name for r in report.results if not r.passed]
        logging.error("❌ Failed: %s", ", ".join(failed))
        sys.exit(EXIT_PROPERTY_FAILURE)
    logging.info("✅ All %d properties pass", len(report.results))


def _per_unit(per_unit: dict) -> list[dict]:
    return [{"unit": x, "value": v} for x, v in per_unit.items()]


_FLOAT_TAG = "\x00float:"  # marks a float already formatted to 17 digits
_TAGGED_FLOAT = re.compile(r'"\\u0000float:([^"]+)"')


def _echo_json(doc) -> None:
    text = json.dumps(_tag_floats(doc), indent=2)
    click.echo(_TAGGED_FLOAT.sub(r"\1", text))


def _tag_floats(doc):
    if isinstance(doc, float) and math.isfinite(doc):
        return _FLOAT_TAG + format_number(doc, 17)
    if isinstance(doc, dict):
        return {k: _tag_floats(v) for k, v in doc.items()}
    if isinstance(doc, (list, tuple)):
        return [_tag_floats(v) for v in doc]
    return doc


def _human(value: float) -> str:
    text = format_number(value, 6)
    return text if any(c in text for c in ".ein") else f"{text}.0"
