"""
Command line front end.

Exit codes: 0 success, 1 verification failure, 2 usage or validation error, 3 unsupported regime
(flat space where lambda > 0 is needed, de Sitter where the compact domain is needed, E^2 <= 0).
"""
from typing import Any, Callable, Optional

import functools
import logging
import math
import sys
from pathlib import Path

import click
import numpy as np
import sympy
from pydantic import BaseModel

from dkp_spectra import version
from dkp_spectra.constants import (
    DEFAULT_GRID_SIZE,
    DEFAULT_REPORT_PATH,
    DEFAULT_WAVEFUNCTION_SAMPLES,
    Branch,
    CheckKind,
    NormConvention,
    OutputFormat,
    Sector,
    Space,
    UnitSystem,
)
from dkp_spectra.exceptions import (
    DKPSpectraException,
    NegativeESquared,
    NegativeRadicand,
    NonPositiveParameter,
)
from dkp_spectra.models.params import Params, QuantumState, make_params, map_s_to_r
from dkp_spectra.nu.engine import (
    eigen_lambda,
    is_admissible,
    nu_reduce,
    nu_solve,
    radial_oscillator_problem,
    solve_reduced_epsilon,
)
from dkp_spectra.oracle.verification import VerificationPlan, run_verification
from dkp_spectra.spectra.bounds import penning_bound
from dkp_spectra.spectra.energies import critical_level, energy
from dkp_spectra.spectra.figures import FIGURES, FigureSettings, figure_data
from dkp_spectra.utils.config_file import build_default_map, load_config_file
from dkp_spectra.utils.output import OutputHeader, config_hash, render, write_text
from dkp_spectra.utils.telemetry import loggers, setup_logger
from dkp_spectra.wavefunctions.normalization import normalize
from dkp_spectra.wavefunctions.radial import (
    RadialComponents,
    natural_components,
    spin0_components,
    unnatural_components,
)

logger = setup_logger(__name__)

SECTOR_CHOICES = ["spin0", "natural", "unnatural", "unnatural_plus", "unnatural_minus", "all"]
SPECTRUM_COLUMNS = (
    "sector",
    "space",
    "lambda",
    "omega",
    "n",
    "J",
    "N",
    "E_squared",
    "E",
    "branch",
    "rest_term",
    "flat_term",
    "confinement_term",
    "rotational_term",
    "spin_orbit_term",
    "delta_split",
    "flags",
)
WAVEFUNCTION_COLUMNS = ("r", "s", "component", "value", "normalized", "convention")
# config file spellings that differ from the click parameter names
CONFIG_ALIASES = {"lambda": "lam", "format": "output_format", "j": "J"}
BRANCH_ORDER = {None: 0, Branch.PLUS.value: 1, Branch.MINUS.value: 2}


class RunConfig(BaseModel):
    """Everything that determines a command's output, hashed into the output header."""

    command: str
    units: UnitSystem = UnitSystem.NATURAL
    output_format: OutputFormat = OutputFormat.CSV
    tolerance: Optional[float] = None
    out: Optional[str] = None
    options: dict[str, Any] = {}

    class Config:
        frozen = True

    @property
    def hash(self) -> str:
        return config_hash(self.dict(exclude={"out"}))

    def header(self, norm_convention: str = "none") -> OutputHeader:
        return OutputHeader(
            version=version,
            config_hash=self.hash,
            units=self.units.value,
            norm_convention=norm_convention,
        )

    def run_config(self, command: str, **options: Any) -> "RunConfig":
        return self.copy(update={"command": command, "options": options})


def _load_config(ctx: click.Context, param: click.Parameter, value: Optional[str]) -> Optional[str]:
    if value is None:
        return value
    values = {CONFIG_ALIASES.get(k, k): v for k, v in load_config_file(value).items()}
    commands = {
        name: [p.name for p in command.params]
        for name, command in ctx.command.commands.items()  # type: ignore[attr-defined]
    }
    ctx.default_map = build_default_map(values, commands)
    return value


def handle_errors(fn: Callable) -> Callable:
    """Maps package exceptions onto their exit codes."""

    @functools.wraps(fn)
    def wrapper(*args: Any, **kwargs: Any) -> Any:
        try:
            return fn(*args, **kwargs)
        except DKPSpectraException as e:
            logger.debug(f"{type(e).__name__}: {e}")
            click.echo(f"Error: {e}", err=True)
            sys.exit(e.exit_code)

    return wrapper


def _emit(ctx: click.Context, rows: list[dict], columns: tuple, header: OutputHeader, name: str) -> None:
    config: RunConfig = ctx.obj
    text = render(rows, header, config.output_format, columns)
    if config.out is None:
        click.echo(text, nl=False)
        return
    out = Path(config.out)
    if out.suffix == "":
        out = out / f"{name}.{config.output_format.value}"
    write_text(text, out)


def _params(
    units: UnitSystem,
    mass: float,
    omega: float,
    lam: float,
    space: Optional[str],
    lambda_magnitude: Optional[float] = None,
) -> Params:
    if lambda_magnitude is not None:
        if space is None:
            raise click.UsageError("--lambda-magnitude needs --space to fix the sign")
        if lambda_magnitude < 0:
            raise NonPositiveParameter("lambda-magnitude", lambda_magnitude)
        sign = {Space.ADS.value: 1.0, Space.DS.value: -1.0, Space.FLAT.value: 0.0}[space]
        lam = sign * lambda_magnitude
    return make_params(m=mass, omega=omega, lam=lam, space=space, unit_system=units)


def _physics_options(fn: Callable) -> Callable:
    options = [
        click.option("--space", type=click.Choice([s.value for s in Space]), default=None),
        click.option("--lambda", "lam", type=float, default=0.1, show_default=True),
        click.option(
            "--lambda-magnitude",
            type=float,
            default=None,
            help="|lambda|, signed by --space",
        ),
        click.option("--omega", type=float, default=1.0, show_default=True),
        click.option("--mass", type=float, default=1.0, show_default=True),
    ]
    for option in reversed(options):
        fn = option(fn)
    return fn


@click.group(context_settings={"help_option_names": ["-h", "--help"]})
@click.option(
    "--config",
    type=click.Path(exists=True, dir_okay=False),
    is_eager=True,
    expose_value=False,
    callback=_load_config,
    help="key = value file; explicit flags win",
)
@click.option("--units", type=click.Choice([u.value for u in UnitSystem]), default="natural")
@click.option("--out", type=click.Path(), default=None, help="file, or directory for figures")
@click.option(
    "--format", "output_format", type=click.Choice([f.value for f in OutputFormat]), default="csv"
)
@click.option("--tolerance", type=float, default=None, help="override the oracle tolerances")
@click.option(
    "--log-level",
    type=click.Choice(["DEBUG", "INFO", "WARNING", "ERROR"], case_sensitive=False),
    default=None,
)
@click.version_option(version, prog_name="dkp-spectra")
@click.pass_context
def cli(
    ctx: click.Context,
    units: str,
    out: Optional[str],
    output_format: str,
    tolerance: Optional[float],
    log_level: Optional[str],
) -> None:
    """Spectra, wavefunctions and checks for the DKP oscillator with a deformed algebra."""
    if log_level is not None:
        for named in loggers.values():
            named.setLevel(log_level.upper())
            for handler in named.handlers:
                handler.setLevel(log_level.upper())
    ctx.obj = RunConfig(
        command="",
        units=UnitSystem(units),
        output_format=OutputFormat(output_format),
        tolerance=tolerance,
        out=out,
    )


def _sectors(sector: str) -> list[Sector]:
    if sector == "all":
        return list(Sector)
    if sector == "unnatural":
        return [Sector.SPIN1_UNNATURAL_PLUS, Sector.SPIN1_UNNATURAL_MINUS]
    return [Sector.get_member_by_value(sector)]


def spectrum_rows(params: Params, sectors: list[Sector], n_max: int, j_max: int) -> list[dict]:
    rows = []
    for sector in sectors:
        for n in range(n_max + 1):
            for J in range(j_max + 1):
                state = QuantumState(n=n, J=J, sector=sector)
                row = {
                    "sector": sector.value,
                    "space": params.space.value,
                    "lambda": params.lam,
                    "omega": params.omega,
                    "n": n,
                    "J": J,
                    "N": state.N,
                    "branch": sector.branch.value if sector.branch else None,
                }
                try:
                    result = energy(params, state)
                except (NegativeESquared, NegativeRadicand) as e:
                    limit = critical_level(params, J, sector)
                    logger.warning(f"{state.label}: {e} (first failing N at this J: {limit})")
                    row.update(
                        {
                            "E_squared": getattr(e, "e_squared", math.nan),
                            "E": math.nan,
                            "flags": f"negative_e_squared;critical_N={limit}",
                        }
                    )
                else:
                    row.update({"E_squared": result.E_squared, "E": result.E})
                    row.update(result.breakdown.dict())
                    row["flags"] = ";".join(result.flags)
                rows.append(row)
    return sorted(rows, key=lambda row: (row["N"], row["J"], BRANCH_ORDER[row["branch"]], row["sector"]))


@cli.command()
@click.option("--sector", type=click.Choice(SECTOR_CHOICES), default="spin0", show_default=True)
@_physics_options
@click.option("--n-max", type=click.IntRange(min=0), default=2, show_default=True)
@click.option("--j-max", type=click.IntRange(min=0), default=2, show_default=True)
@click.pass_context
@handle_errors
def spectrum(
    ctx: click.Context,
    sector: str,
    space: Optional[str],
    lam: float,
    lambda_magnitude: Optional[float],
    omega: float,
    mass: float,
    n_max: int,
    j_max: int,
) -> None:
    """Closed form energies for n <= n-max and J <= j-max."""
    config: RunConfig = ctx.obj.run_config(
        "spectrum",
        sector=sector,
        space=space,
        lam=lam,
        lambda_magnitude=lambda_magnitude,
        omega=omega,
        mass=mass,
        n_max=n_max,
        j_max=j_max,
    )
    params = _params(config.units, mass, omega, lam, space, lambda_magnitude)
    rows = spectrum_rows(params, _sectors(sector), n_max, j_max)
    _emit(ctx, rows, SPECTRUM_COLUMNS, config.header(), "spectrum")


def chebyshev_radii(params: Params, samples: int) -> tuple[np.ndarray, np.ndarray]:
    """Chebyshev points in s, strictly inside (-1, 1), returned with r ascending."""
    k = np.arange(samples)
    s = np.cos((2 * k + 1) * math.pi / (2 * samples))
    return map_s_to_r(s, params.lam), s


def wavefunction_rows(components: RadialComponents, s: np.ndarray) -> list[dict]:
    convention = components.norm_convention.value if components.norm_convention else "none"
    rows = []
    for name, values in components.components.items():
        for r, s_value, value in zip(components.r, s, values):
            rows.append(
                {
                    "r": float(r),
                    "s": float(s_value),
                    "component": name,
                    "value": float(value),
                    "normalized": components.normalized,
                    "convention": convention,
                }
            )
    return rows


@cli.command()
@click.option(
    "--sector",
    type=click.Choice(["spin0", "natural", "unnatural_plus", "unnatural_minus"]),
    default="spin0",
    show_default=True,
)
@_physics_options
@click.option("--n", "n", type=click.IntRange(min=0), default=0, show_default=True)
@click.option("--J", "J", type=click.IntRange(min=0), default=0, show_default=True)
@click.option("--samples", type=click.IntRange(min=2), default=DEFAULT_WAVEFUNCTION_SAMPLES)
@click.option(
    "--normalize",
    "convention",
    type=click.Choice(["none"] + [c.value for c in NormConvention]),
    default="l2",
    show_default=True,
)
@click.pass_context
@handle_errors
def wavefunction(
    ctx: click.Context,
    sector: str,
    space: Optional[str],
    lam: float,
    lambda_magnitude: Optional[float],
    omega: float,
    mass: float,
    n: int,
    J: int,
    samples: int,
    convention: str,
) -> None:
    """Radial components sampled at Chebyshev points in s = 1 - 2 lambda r^2."""
    config: RunConfig = ctx.obj.run_config(
        "wavefunction",
        sector=sector,
        space=space,
        lam=lam,
        lambda_magnitude=lambda_magnitude,
        omega=omega,
        mass=mass,
        n=n,
        J=J,
        samples=samples,
        convention=convention,
    )
    params = _params(config.units, mass, omega, lam, space, lambda_magnitude)
    params.require_anti_de_sitter("wavefunction")
    chosen = Sector.get_member_by_value(sector)
    r, s = chebyshev_radii(params, samples)
    E = energy(params, QuantumState(n=n, J=J, sector=chosen)).E
    if chosen.is_unnatural:
        plus = chosen.branch is Branch.PLUS
        components = unnatural_components(
            params, n, J, (E, None) if plus else (None, E), float(plus), float(not plus), r
        )
    else:
        builder = spin0_components if chosen is Sector.SPIN0 else natural_components
        components = builder(params, n, J, E, r)
    if convention != "none":
        components = normalize(components, NormConvention(convention))
    header = config.header(convention)
    _emit(ctx, wavefunction_rows(components, s), WAVEFUNCTION_COLUMNS, header, "wavefunction")


@cli.command()
@_physics_options
@click.option("--n-max", type=click.IntRange(min=0), default=3, show_default=True)
@click.option("--j-max", type=click.IntRange(min=0), default=2, show_default=True)
@click.option("--grid-size", type=click.IntRange(min=1), default=DEFAULT_GRID_SIZE, show_default=True)
@click.option(
    "--checks",
    type=click.Choice([c.value for c in CheckKind]),
    multiple=True,
    help="repeatable; all checks when omitted",
)
@click.option(
    "--report",
    type=click.Path(dir_okay=False),
    default=None,
    help=f"full report path, --out or ./{DEFAULT_REPORT_PATH} when omitted",
)
@click.pass_context
@handle_errors
def verify(
    ctx: click.Context,
    space: Optional[str],
    lam: float,
    lambda_magnitude: Optional[float],
    omega: float,
    mass: float,
    n_max: int,
    j_max: int,
    grid_size: int,
    checks: tuple[str, ...],
    report: Optional[str],
) -> None:
    """Compares closed forms with the numeric oracle; exit 1 when any check fails."""
    config: RunConfig = ctx.obj.run_config(
        "verify",
        space=space,
        lam=lam,
        lambda_magnitude=lambda_magnitude,
        omega=omega,
        mass=mass,
        n_max=n_max,
        j_max=j_max,
        grid_size=grid_size,
        checks=list(checks),
    )
    params = _params(config.units, mass, omega, lam, space, lambda_magnitude)
    kinds = tuple(CheckKind.get_member_by_value(c) for c in checks) or tuple(CheckKind)
    plan = VerificationPlan(
        checks=kinds, n_max=n_max, J_max=j_max, grid_size=grid_size
    ).with_tolerance(config.tolerance)
    result = run_verification(params, plan)
    body = result.to_json() if config.output_format is OutputFormat.JSON else result.to_text() + "\n"
    target = report or config.out or DEFAULT_REPORT_PATH
    write_text(body, target)
    summary = f"{len(result.records) - len(result.failures)}/{len(result.records)} checks passed"
    click.echo(summary)
    for failure in result.failures:
        click.echo(
            f"FAIL {failure.check.value} {failure.label}: error={failure.error:.3e} "
            f"tolerance={failure.tolerance:.1e}"
        )
    if not result.passed:
        sys.exit(1)


@cli.command()
@click.option("--field-tesla", type=float, default=6.0, show_default=True)
@click.option("--level", type=float, default=1e10, show_default=True)
@click.option("--threshold", type=float, default=None, help="energy threshold in J, default hbar omega_c")
@click.option("--exact-constants", is_flag=True, default=False, help="CODATA e*hbar instead of 1e-52 at 6 T")
@click.pass_context
@handle_errors
def bound(
    ctx: click.Context,
    field_tesla: float,
    level: float,
    threshold: Optional[float],
    exact_constants: bool,
) -> None:
    """Penning trap upper bound on lambda and on the minimal momentum uncertainty (SI)."""
    config: RunConfig = ctx.obj.run_config(
        "bound",
        field_tesla=field_tesla,
        level=level,
        threshold=threshold,
        exact_constants=exact_constants,
    ).copy(update={"units": UnitSystem.SI})
    result = penning_bound(field_tesla, level, threshold, exact_constants)
    inputs = result.inputs
    rows = [
        {
            "B_tesla": inputs.B,
            "n_level": inputs.n_level,
            "e_hbar_B": inputs.e_hbar_B,
            "delta_e_threshold": inputs.delta_e_threshold,
            "exact_constants": inputs.exact_constants,
            "lambda_max": result.lambda_max,
            "delta_p_min_max": result.delta_p_min_max,
        }
    ]
    _emit(ctx, rows, tuple(rows[0]), config.header(), "bound")


@cli.command()
@click.argument("figure_ids", nargs=-1, type=int)
@click.option("--lambda", "lam", type=float, default=0.1, show_default=True)
@click.option("--omega", type=float, default=1.0, show_default=True)
@click.option("--n-max", type=click.IntRange(min=1), default=50, show_default=True)
@click.option("--points", type=click.IntRange(min=2), default=201, show_default=True)
@click.pass_context
@handle_errors
def figures(
    ctx: click.Context, figure_ids: tuple[int, ...], lam: float, omega: float, n_max: int, points: int
) -> None:
    """Data behind figures 1 to 7 (all when no id is given), one table per figure."""
    ids = figure_ids or tuple(sorted(FIGURES))
    settings = FigureSettings(lam=lam, omega=omega, n_max=n_max, points=points)
    base: RunConfig = ctx.obj
    if base.out is None and len(ids) > 1:
        raise click.UsageError("several figures need --out pointing at a directory")
    for figure_id in ids:
        data = figure_data(figure_id, settings)
        config = base.run_config("figures", figure_id=figure_id, **settings.dict())
        _emit(ctx, data.rows, data.columns, config.header(), f"fig{figure_id}")


def nu_rows(mu: sympy.Expr, J: int, n_max: int) -> list[dict]:
    problem = radial_oscillator_problem(mu, J)
    rows = [
        {"item": "sigma", "value": str(problem.sigma)},
        {"item": "tau_tilde", "value": str(problem.tau_tilde)},
        {"item": "sigma_tilde", "value": str(problem.sigma_tilde)},
    ]
    for index, candidate in enumerate(nu_reduce(problem)):
        prefix = f"candidate[{index}]"
        rows.extend(
            [
                {"item": f"{prefix}.k", "value": str(candidate.k)},
                {"item": f"{prefix}.branch", "value": candidate.sign_branch.value},
                {"item": f"{prefix}.pi", "value": str(candidate.pi)},
                {"item": f"{prefix}.tau", "value": str(candidate.tau)},
                {"item": f"{prefix}.admissible", "value": str(is_admissible(candidate)).lower()},
            ]
        )
    solution = nu_solve(problem)
    family = solution.polynomial_family
    rows.extend(
        [
            {"item": "selected.k", "value": str(solution.candidate.k)},
            {"item": "selected.tau", "value": str(solution.candidate.tau)},
            {"item": "phi_exponents", "value": str(tuple(solution.phi_exponents))},
            {"item": "family", "value": family.name},
            {"item": "jacobi_parameters", "value": str(family.jacobi_parameters)},
        ]
    )
    for n in range(n_max + 1):
        rows.append({"item": f"Lambda[{n}]", "value": str(eigen_lambda(solution.candidate, n))})
        rows.append({"item": f"epsilon_over_lambda[{n}]", "value": str(solve_reduced_epsilon(mu, J, n))})
    return rows


@cli.command()
@click.option("--mu", type=str, default="10", show_default=True, help="positive rational or decimal")
@click.option("--J", "J", type=click.IntRange(min=0), default=0, show_default=True)
@click.option("--n-max", type=click.IntRange(min=0), default=2, show_default=True)
@click.pass_context
@handle_errors
def nu(ctx: click.Context, mu: str, J: int, n_max: int) -> None:
    """Nikiforov-Uvarov reduction of the radial equation for given mu and J."""
    config: RunConfig = ctx.obj.run_config("nu", mu=mu, J=J, n_max=n_max)
    try:
        value = sympy.Rational(mu)
    except (TypeError, ValueError, sympy.SympifyError):
        raise click.BadParameter(f"{mu!r} is not a rational number", param_hint="--mu")
    if value <= 0:
        raise NonPositiveParameter("mu", mu)
    _emit(ctx, nu_rows(value, J, n_max), ("item", "value"), config.header(), "nu")


def main() -> None:
    logging.captureWarnings(True)
    cli(prog_name="dkp-spectra")


if __name__ == "__main__":
    main()
