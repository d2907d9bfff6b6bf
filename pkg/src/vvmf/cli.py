"""Command-line client.

Each subcommand builds a request model, calls the matching in-process
service handler, and renders the response as aligned text or JSON.  Exit
codes: 0 on success, 1 when a requested verification fails its tolerance,
2 on usage or parse errors.  The VVMF_PRECISION environment variable sets
the default tolerance.
"""

from __future__ import annotations

import os
import sys
from typing import Optional

import click
from pydantic import ValidationError

from . import __version__
from .errors import VvmfError
from .qseries import DEFAULT_ORDER
from .service import (
    ComplexEntry,
    CuspsRequest,
    ExistRequest,
    InduceRequest,
    LiftRequest,
    PhaseEntry,
    QSeriesRequest,
    VerifyRequest,
    handle_cusps,
    handle_exist,
    handle_induce,
    handle_lift,
    handle_qseries,
    handle_verify,
)


def _default_tol() -> float:
    raw = os.environ.get("VVMF_PRECISION")
    if raw is None:
        return 1e-8
    try:
        value = float(raw)
    except ValueError:
        raise click.UsageError(f"VVMF_PRECISION is not a number: {raw!r}")
    if not 0 < value <= 1e-2:
        raise click.UsageError("VVMF_PRECISION must lie in (0, 1e-2]")
    return value


def _entry_text(e) -> str:
    if isinstance(e, PhaseEntry):
        return f"e({e.phase})"
    if isinstance(e, ComplexEntry):
        if e.re == 0 and e.im == 0:
            return "0"
        return f"{e.re:.10g}{e.im:+.10g}i"
    return str(e)


def _matrix_text(rows) -> str:
    cells = [[_entry_text(e) for e in row] for row in rows]
    width = max((len(c) for row in cells for c in row), default=1)
    return "\n".join(
        "[ " + "  ".join(c.rjust(width) for c in row) + " ]" for row in cells
    )


def _emit(response, as_json: bool, text: str) -> None:
    if as_json:
        click.echo(response.model_dump_json(indent=2))
    else:
        click.echo(text)


def _run(handler, request_factory, as_json, render):
    try:
        response = handler(request_factory())
    except (VvmfError, ValueError, ValidationError) as exc:
        raise click.UsageError(str(exc))
    _emit(response, as_json, render(response))
    return response


json_option = click.option("--json", "as_json", is_flag=True, help="Emit JSON.")
order_option = click.option(
    "--order", default=DEFAULT_ORDER, show_default=True,
    help="Truncation order (whole powers of q past the leading exponent).",
)
tol_option = click.option(
    "--tol", default=None, type=float,
    help="Verification tolerance [default: 1e-8, or VVMF_PRECISION].",
)
samples_option = click.option(
    "--samples", default=12, show_default=True, help="Number of sample points."
)
seed_option = click.option(
    "--seed", default=2024, show_default=True, help="Sample-point seed."
)


@click.group()
@click.version_option(__version__)
def main() -> None:
    """Lift modular forms to vector-valued modular forms by inducing the
    multiplier representation."""


@main.command()
@click.argument("group")
@json_option
def cusps(group: str, as_json: bool) -> None:
    """Index, cusp classes and widths of GROUP (e.g. "Gamma0(2)")."""
    def render(r):
        cusp_list = ", ".join(r.cusps)
        widths = ",".join(str(w) for w in r.widths)
        return (
            f"{r.group}: index {r.index}, cusps {{{cusp_list}}}, widths {widths}"
        )

    response = _run(handle_cusps, lambda: CuspsRequest(group=group), as_json, render)
    if sum(response.widths) != response.index:
        sys.exit(1)


@main.command()
@click.option("--subgroup", required=True, help="Subgroup carrying the representation.")
@click.option("--ambient", default="Gamma(1)", show_default=True)
@click.option("--rep", default="trivial", show_default=True,
              help="trivial, nu, or a JSON file.")
@click.option("--at", default="t", show_default=True,
              help="Group element (word or matrix) or cusp to evaluate at.")
@click.option("--exponents", is_flag=True, help="Also print the exponent diagonal.")
@json_option
def induce(subgroup, ambient, rep, at, exponents, as_json) -> None:
    """Evaluate the induced representation at an element or cusp."""
    def render(r):
        lines = [
            f"Ind from {r.subgroup} to {r.ambient} of '{rep}' at {r.element} "
            f"(rank {r.rank}):",
            _matrix_text(r.matrix),
        ]
        if r.exponents is not None:
            lines.append("exponents: " + ", ".join(r.exponents))
        return "\n".join(lines)

    _run(
        handle_induce,
        lambda: InduceRequest(
            subgroup=subgroup, ambient=ambient, rep=rep, at=at, exponents=exponents
        ),
        as_json,
        render,
    )


@main.command()
@click.argument("name")
@order_option
@json_option
def qseries(name: str, order: int, as_json: bool) -> None:
    """q-expansion of a named form (zK, zH, delta, one)."""
    def render(r):
        s = r.series
        from fractions import Fraction

        offset = Fraction(s.offset)
        lines = [f"{r.name} (weight {r.weight} on {r.group}), q^(1/{s.width}):"]
        for n, c in s.coeffs:
            lines.append(f"  q^({offset + Fraction(n, s.width)}): {c}")
        return "\n".join(lines)

    _run(handle_qseries, lambda: QSeriesRequest(name=name, order=order), as_json, render)


@main.command()
@click.option("--form", default="zK", show_default=True)
@click.option("--subgroup", default=None, help="Must match the form's group.")
@click.option("--ambient", default="Gamma(1)", show_default=True)
@click.option("--verify", "do_verify", is_flag=True, help="Check the transformation law.")
@order_option
@tol_option
@samples_option
@seed_option
@json_option
def lift(form, subgroup, ambient, do_verify, order, tol, samples, seed, as_json):
    """Lift a scalar form to a vector-valued form on the ambient group."""
    tol = tol if tol is not None else _default_tol()

    def render(r):
        lines = [
            f"lift of {r.form} from {r.subgroup} to {r.ambient}: "
            f"rank {r.rank}, weight {r.weight}",
            "components:",
        ]
        lines += [f"  [{i}] {c}" for i, c in enumerate(r.components)]
        for gen, rows in r.generators.items():
            lines.append(f"multiplier at {gen}:")
            lines.append(_matrix_text(rows))
        lines.append("exponents: " + ", ".join(r.exponents))
        if r.residual is not None:
            verdict = "pass" if r.passed else "FAIL"
            lines.append(f"verification residual {r.residual:.3e} ({verdict})")
        return "\n".join(lines)

    response = _run(
        handle_lift,
        lambda: LiftRequest(
            form=form, subgroup=subgroup, ambient=ambient, verify=do_verify,
            tol=tol, samples=samples, seed=seed, order=order,
        ),
        as_json,
        render,
    )
    if response.passed is False:
        sys.exit(1)


@main.command()
@click.option("--form", default="zK", show_default=True)
@click.option("--ambient", default=None,
              help="Lift to this group first; default checks the form's own group.")
@order_option
@tol_option
@samples_option
@seed_option
@json_option
def verify(form, ambient, order, tol, samples, seed, as_json):
    """Check the transformation law of a form on its group's generators."""
    tol = tol if tol is not None else _default_tol()

    def render(r):
        verdict = "pass" if r.passed else "FAIL"
        return f"{r.form} on {r.group}: residual {r.residual:.3e} <= {r.tol:g}? {verdict}"

    response = _run(
        handle_verify,
        lambda: VerifyRequest(
            form=form, ambient=ambient, tol=tol, samples=samples, seed=seed,
            order=order,
        ),
        as_json,
        render,
    )
    if not response.passed:
        sys.exit(1)


@main.command()
@click.option("--rep", default="standard", show_default=True,
              help="trivial, sign, standard, or regular.")
@tol_option
@json_option
def exist(rep, tol, as_json):
    """Construct a vector-valued form with the given multiplier."""
    tol = tol if tol is not None else _default_tol()

    def render(r):
        verdict = "pass" if r.passed else "FAIL"
        return "\n".join([
            f"multiplier {r.rep}: rank-{r.rank} form constructed",
            f"separating function: {r.separating_function}, shift {r.shift}, "
            f"attempt {r.attempt}",
            f"projector ranks: {tuple(r.projector_ranks)}",
            f"independence smallest relative singular value: {r.singular_value:.3e}",
            f"functional-equation residual {r.residual:.3e} ({verdict})",
        ])

    response = _run(handle_exist, lambda: ExistRequest(rep=rep, tol=tol), as_json, render)
    if not response.passed:
        sys.exit(1)


if __name__ == "__main__":
    main()
