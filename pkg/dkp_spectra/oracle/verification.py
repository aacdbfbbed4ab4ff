from typing import Any, Callable, Optional

import json
import math
import time
from concurrent.futures import ThreadPoolExecutor

import numpy as np
from pydantic import BaseModel

from dkp_spectra.config import DKP_SPECTRA_THREADS
from dkp_spectra.constants import (
    COMMUTATOR_TOLERANCE,
    DEFAULT_GRID_SIZE,
    LINEAR_SECTOR_TOLERANCE,
    ORTHOGONALITY_TOLERANCE,
    ORACLE_INSET_FACTOR,
    TRANSCENDENTAL_TOLERANCE,
    UNCERTAINTY_SLACK,
    UNNATURAL_TOLERANCE,
    Branch,
    CheckKind,
    Sector,
)
from dkp_spectra.exceptions import DKPSpectraException
from dkp_spectra.models.params import Params, QuantumState
from dkp_spectra.oracle.algebra import TEST_FUNCTIONS, commutator_residual, uncertainty_product
from dkp_spectra.oracle.solver import (
    eigenfunction_overlap,
    eigenpair_count,
    oracle_energy,
    oracle_energy_unnatural,
    oracle_spectrum,
)
from dkp_spectra.spectra.energies import (
    delta_split,
    energy_spin0,
    energy_spin1_natural,
    energy_spin1_unnatural,
    radial_eigenvalue,
    unnatural_energy_by_rootfind,
    unnatural_transcendental_residual,
)
from dkp_spectra.utils.telemetry import publish_count_metric, publish_timing_metric, setup_logger
from dkp_spectra.wavefunctions.normalization import orthogonality_check
from dkp_spectra.wavefunctions.radial import (
    CLOSURE_RESIDUALS,
    interior_grid,
    linear_system_residual,
    natural_components,
    radial_equation_residual,
    radial_F,
    spin0_components,
    unnatural_components,
    unnatural_system_residuals,
)

logger = setup_logger(__name__)

DEGENERACY_TOLERANCE = 1e-8

NOTES = [
    "Radial operator discretized in t = arcsin(sqrt(lambda) r)/sqrt(lambda) with chi = "
    "sin(sqrt(lambda) t) F; sixth order central differences give a symmetric banded matrix.",
    "Inner wall at r = 0 through the parity (-1)^(J+1) of chi; outer wall Dirichlet at "
    f"r = (1 - {ORACLE_INSET_FACTOR:g}) / sqrt(lambda) or at the Gaussian tail, whichever is "
    "closer; the outer condition is a numerical choice validated by grid convergence.",
    "Oracle eigenvalues are Richardson extrapolated in h^6 over the grids M and 2M.",
    "Unnatural energies solve epsilon_branch(E) = epsilon_n with the E independent numeric "
    "eigenvalue; closed forms are checked against the transcendental relation.",
    "Eigenfunction overlaps use the measure r^2 dr / sqrt(1 - lambda r^2).",
    "Design decision: the reducer keeps the candidate pi with tau' < 0 and nonnegative phi "
    "exponents, smallest k first; no other rule for discarding the remaining three candidates is "
    "assumed.",
    "The factor epsilon c / (hbar m omega c)^2 in the coupled second order equations for phi and "
    "H0 is dimensionally inconsistent and treated as a typo; epsilon_plus and epsilon_minus are "
    "taken from the eigenvalue relation and checked through the decoupled R+ and R- equations.",
    "Unnatural parity formulas are evaluated at J = 0 (k = 0, kappa = 1) when asked for and such "
    "rows are flagged unnatural_j_zero; oracle checks cover J >= 1 only.",
    "Eliminating F+- and G+- from the first order relations gives the decoupled operator with "
    "eta' = (m omega/hbar)(m omega/hbar + lambda), while the decoupled R+- equations carry "
    "eta = (m omega/hbar)(m omega/hbar - lambda); the H0 and phi relations therefore stay open "
    "at a relative level of about 0.3 and are reported as informational residuals only.",
]


class VerificationPlan(BaseModel):
    checks: tuple[CheckKind, ...] = tuple(CheckKind)
    n_max: int = 3
    J_max: int = 2
    unnatural_n_max: int = 2
    orthogonality_degree: int = 8
    residual_n_max: int = 4
    residual_J_max: int = 3
    grid_size: int = DEFAULT_GRID_SIZE
    linear_tolerance: float = LINEAR_SECTOR_TOLERANCE
    unnatural_tolerance: float = UNNATURAL_TOLERANCE
    threads: int = DKP_SPECTRA_THREADS

    class Config:
        frozen = True

    def with_tolerance(self, tolerance: Optional[float]) -> "VerificationPlan":
        if tolerance is None:
            return self
        return self.copy(update={"linear_tolerance": tolerance, "unnatural_tolerance": tolerance})

    @property
    def tolerances(self) -> dict[str, float]:
        return {
            CheckKind.SPIN0.value: self.linear_tolerance,
            CheckKind.NATURAL.value: self.linear_tolerance,
            CheckKind.UNNATURAL.value: self.unnatural_tolerance,
            CheckKind.TRANSCENDENTAL.value: TRANSCENDENTAL_TOLERANCE,
            CheckKind.DEGENERACY.value: DEGENERACY_TOLERANCE,
            CheckKind.OVERLAP.value: self.linear_tolerance,
            CheckKind.ORTHOGONALITY.value: ORTHOGONALITY_TOLERANCE,
            CheckKind.COMMUTATOR.value: COMMUTATOR_TOLERANCE,
            CheckKind.RESIDUAL.value: self.linear_tolerance,
            f"{CheckKind.RESIDUAL.value}_unnatural": self.unnatural_tolerance,
            CheckKind.UNCERTAINTY.value: UNCERTAINTY_SLACK,
        }


class VerificationRecord(BaseModel):
    check: CheckKind
    label: str
    expected: Optional[float] = None
    observed: Optional[float] = None
    error: float
    tolerance: float
    passed: bool
    details: dict[str, Any] = {}


class VerificationReport(BaseModel):
    params: Params
    records: list[VerificationRecord]
    tolerances: dict[str, float]
    notes: list[str] = NOTES

    @property
    def passed(self) -> bool:
        return all(record.passed for record in self.records)

    @property
    def failures(self) -> list[VerificationRecord]:
        return [record for record in self.records if not record.passed]

    def to_records(self) -> list[dict[str, Any]]:
        return [
            {
                "check": record.check.value,
                "label": record.label,
                "expected": record.expected,
                "observed": record.observed,
                "error": record.error,
                "tolerance": record.tolerance,
                "passed": record.passed,
                **{f"detail_{key}": value for key, value in sorted(record.details.items())},
            }
            for record in self.records
        ]

    def to_json(self) -> str:
        return json.dumps(
            {
                "passed": self.passed,
                "params": json.loads(self.params.json()),
                "tolerances": self.tolerances,
                "notes": self.notes,
                "records": self.to_records(),
            },
            indent=2,
            default=str,
        )

    def to_text(self) -> str:
        lines = [
            f"verification {'PASSED' if self.passed else 'FAILED'}: "
            f"{len(self.records) - len(self.failures)}/{len(self.records)} checks within tolerance",
            f"params: m={self.params.m} omega={self.params.omega} lambda={self.params.lam} "
            f"space={self.params.space.value}",
        ]
        for record in self.records:
            status = "ok  " if record.passed else "FAIL"
            lines.append(
                f"  {status} {record.check.value:<14} {record.label:<32} "
                f"error={record.error:.3e} tol={record.tolerance:.1e}"
            )
        lines.append("notes:")
        lines.extend(f"  - {note}" for note in self.notes)
        return "\n".join(lines)


def _relative(expected: float, observed: float) -> float:
    return abs(observed - expected) / abs(expected)


def _record(
    check: CheckKind,
    label: str,
    error: float,
    tolerance: float,
    expected: Optional[float] = None,
    observed: Optional[float] = None,
    **details: Any,
) -> VerificationRecord:
    return VerificationRecord(
        check=check,
        label=label,
        expected=expected,
        observed=observed,
        error=error,
        tolerance=tolerance,
        passed=bool(error <= tolerance),
        details=details,
    )


def _linear_sector(params: Params, plan: VerificationPlan, state: QuantumState) -> VerificationRecord:
    check = CheckKind.SPIN0 if state.sector is Sector.SPIN0 else CheckKind.NATURAL
    closed = (
        energy_spin0(params, state.n, state.J)
        if state.sector is Sector.SPIN0
        else energy_spin1_natural(params, state.n, state.J)
    )
    observed = oracle_energy(params, state.n, state.J, state.sector, plan.grid_size)
    spectrum = oracle_spectrum(params, state.J, eigenpair_count(state.n), plan.grid_size)
    return _record(
        check,
        state.label,
        _relative(closed.E, observed),
        plan.linear_tolerance,
        closed.E,
        observed,
        grid_sizes=list(spectrum.grid_sizes),
        extrapolation_estimate=spectrum.extrapolation_estimate[state.n],
    )


def _unnatural(params: Params, plan: VerificationPlan, state: QuantumState) -> VerificationRecord:
    branch = state.sector.branch
    closed = energy_spin1_unnatural(params, state.n, state.J, branch)
    observed = oracle_energy_unnatural(params, state.n, state.J, branch, plan.grid_size)
    spectrum = oracle_spectrum(params, state.J, eigenpair_count(state.n), plan.grid_size)
    return _record(
        CheckKind.UNNATURAL,
        state.label,
        _relative(closed.E, observed),
        plan.unnatural_tolerance,
        closed.E,
        observed,
        grid_sizes=list(spectrum.grid_sizes),
        extrapolation_estimate=spectrum.extrapolation_estimate[state.n],
    )


def _transcendental(params: Params, state: QuantumState) -> VerificationRecord:
    branch = state.sector.branch
    closed = energy_spin1_unnatural(params, state.n, state.J, branch)
    residual = unnatural_transcendental_residual(params, closed.E, state.N, state.J, branch)
    mc2 = params.rest_energy
    scale = max(closed.E_squared / (params.hbar * params.omega), mc2 * (2 * state.N + 5))
    rootfind = unnatural_energy_by_rootfind(params, state.n, state.J, branch)
    return _record(
        CheckKind.TRANSCENDENTAL,
        state.label,
        abs(residual) / scale,
        TRANSCENDENTAL_TOLERANCE,
        closed.E,
        rootfind.E,
        residual=residual,
    )


def _degeneracy(params: Params, plan: VerificationPlan, J: int) -> VerificationRecord:
    critical = params.with_updates(lam=params.critical_lambda)
    splitting = delta_split(critical, J, J) / (params.hbar * params.m * params.omega * params.c**2)
    plus = oracle_energy_unnatural(critical, 0, J, Branch.PLUS, plan.grid_size)
    minus = oracle_energy_unnatural(critical, 0, J, Branch.MINUS, plan.grid_size)
    return _record(
        CheckKind.DEGENERACY,
        f"critical lambda J={J}",
        max(abs(splitting), _relative(plus, minus)),
        DEGENERACY_TOLERANCE,
        plus,
        minus,
        critical_lambda=critical.lam,
        delta=splitting,
    )


def _overlap(params: Params, plan: VerificationPlan, state: QuantumState) -> VerificationRecord:
    overlap = eigenfunction_overlap(params, state, plan.grid_size)
    return _record(
        CheckKind.OVERLAP, state.label, 1.0 - overlap, plan.linear_tolerance, 1.0, overlap
    )


def _orthogonality(params: Params, J: int, n: int, m: int) -> VerificationRecord:
    value = orthogonality_check(params, Sector.SPIN0, J, n, m)
    return _record(
        CheckKind.ORTHOGONALITY, f"J={J} n={n} m={m}", abs(value), ORTHOGONALITY_TOLERANCE, 0.0, value
    )


def _commutator(params: Params, name: str) -> VerificationRecord:
    if params.lam > 0:
        edge = 0.9 / math.sqrt(params.lam)
    else:
        edge = 5.0
    samples = np.linspace(-edge, edge, 100)
    residual = commutator_residual(params.lam, name, samples, params.hbar)
    return _record(CheckKind.COMMUTATOR, name, residual, COMMUTATOR_TOLERANCE, 0.0, residual)


def _residual(params: Params, plan: VerificationPlan, state: QuantumState) -> VerificationRecord:
    """
    Closed form eigenfunctions put back into their equations: the radial equation and the
    first-order relation for spin 0 and natural parity, the first-order relations and the
    decoupled R equation for an unnatural branch. Closure residuals ride along unenforced.
    """
    n, J = state.n, state.J
    r = interior_grid(params)
    if state.sector.is_unnatural:
        branch = state.sector.branch
        E = energy_spin1_unnatural(params, n, J, branch).E
        if branch is Branch.PLUS:
            components = unnatural_components(params, n, J, (E, None), 1.0, 0.0, r)
        else:
            components = unnatural_components(params, n, J, (None, E), 0.0, 1.0, r)
        residuals = unnatural_system_residuals(components, r)
        tolerance = plan.unnatural_tolerance
    else:
        if state.sector is Sector.SPIN0:
            E = energy_spin0(params, n, J).E
            components = spin0_components(params, n, J, E, r)
        else:
            E = energy_spin1_natural(params, n, J).E
            components = natural_components(params, n, J, E, r)
        residuals = {
            "radial": radial_equation_residual(
                params, J, radial_eigenvalue(params, n, J), lambda x: radial_F(params, n, J, x), r
            ),
            "first_order": linear_system_residual(components, r),
        }
        tolerance = plan.linear_tolerance
    enforced = {name: value for name, value in residuals.items() if name not in CLOSURE_RESIDUALS}
    error = max(enforced.values())
    return _record(
        CheckKind.RESIDUAL,
        state.label,
        error,
        tolerance,
        0.0,
        error,
        energy=E,
        residuals=residuals,
    )


def _uncertainty(params: Params, plan: VerificationPlan) -> VerificationRecord:
    result = uncertainty_product(params, plan.grid_size)
    return _record(
        CheckKind.UNCERTAINTY,
        "ground state",
        max(0.0, -result.slack),
        UNCERTAINTY_SLACK,
        result.bound,
        result.product,
        dx=result.dx,
        dp=result.dp,
    )


Job = tuple[CheckKind, str, Callable[[], VerificationRecord]]


def build_jobs(params: Params, plan: VerificationPlan) -> list[Job]:
    """Jobs in report order: by check kind as planned, then by state."""
    jobs: list[Job] = []
    linear_states = [
        (n, J) for n in range(plan.n_max + 1) for J in range(plan.J_max + 1)
    ]
    unnatural_states = [
        QuantumState(n=n, J=J, sector=Sector.unnatural(branch))
        for n in range(min(plan.n_max, plan.unnatural_n_max) + 1)
        for J in range(1, max(plan.J_max, 1) + 1)
        for branch in (Branch.PLUS, Branch.MINUS)
    ]
    residual_states = [
        QuantumState(n=n, J=J, sector=sector)
        for sector in (Sector.SPIN0, Sector.SPIN1_NATURAL)
        for n in range(plan.residual_n_max + 1)
        for J in range(plan.residual_J_max + 1)
    ] + [
        QuantumState(n=n, J=J, sector=Sector.unnatural(branch))
        for n in range(plan.residual_n_max + 1)
        for J in range(1, max(plan.residual_J_max, 1) + 1)
        for branch in (Branch.PLUS, Branch.MINUS)
    ]
    for check in plan.checks:
        if check in (CheckKind.SPIN0, CheckKind.NATURAL):
            sector = Sector.SPIN0 if check is CheckKind.SPIN0 else Sector.SPIN1_NATURAL
            for n, J in linear_states:
                state = QuantumState(n=n, J=J, sector=sector)
                jobs.append((check, state.label, lambda s=state: _linear_sector(params, plan, s)))
        elif check is CheckKind.UNNATURAL:
            for state in unnatural_states:
                jobs.append((check, state.label, lambda s=state: _unnatural(params, plan, s)))
        elif check is CheckKind.TRANSCENDENTAL:
            for state in unnatural_states:
                jobs.append((check, state.label, lambda s=state: _transcendental(params, s)))
        elif check is CheckKind.DEGENERACY:
            for J in range(1, max(plan.J_max, 1) + 1):
                jobs.append((check, f"J={J}", lambda j=J: _degeneracy(params, plan, j)))
        elif check is CheckKind.OVERLAP:
            for n, J in linear_states:
                state = QuantumState(n=n, J=J)
                jobs.append((check, state.label, lambda s=state: _overlap(params, plan, s)))
        elif check is CheckKind.ORTHOGONALITY:
            for J in range(plan.J_max + 1):
                for n in range(plan.orthogonality_degree + 1):
                    for m in range(n + 1, plan.orthogonality_degree + 1):
                        jobs.append(
                            (check, f"J={J} n={n} m={m}", lambda j=J, a=n, b=m: _orthogonality(params, j, a, b))
                        )
        elif check is CheckKind.COMMUTATOR:
            for name in sorted(TEST_FUNCTIONS):
                jobs.append((check, name, lambda f=name: _commutator(params, f)))
        elif check is CheckKind.RESIDUAL:
            for state in residual_states:
                jobs.append((check, state.label, lambda s=state: _residual(params, plan, s)))
        elif check is CheckKind.UNCERTAINTY:
            jobs.append((check, "ground state", lambda: _uncertainty(params, plan)))
    return jobs


def _run(job: Job) -> VerificationRecord:
    check, label, fn = job
    start = time.perf_counter()
    try:
        record = fn()
    except DKPSpectraException as e:
        logger.error(f"Check {check.value} {label} raised: {e}")
        record = VerificationRecord(
            check=check,
            label=label,
            error=math.inf,
            tolerance=0.0,
            passed=False,
            details={"exception": type(e).__name__, "message": str(e)},
        )
    publish_timing_metric(
        "VerificationCheckDuration", time.perf_counter() - start, {"check": check.value}
    )
    return record


def run_verification(params: Params, plan: Optional[VerificationPlan] = None) -> VerificationReport:
    """
    Runs every planned check on a bounded thread pool. Records keep the job order, so the report
    is identical for identical inputs whatever the scheduling.
    """
    plan = plan or VerificationPlan()
    params.require_anti_de_sitter("verification")
    jobs = build_jobs(params, plan)
    logger.info(f"Running {len(jobs)} verification checks on {plan.threads} threads")
    with ThreadPoolExecutor(max_workers=max(1, plan.threads)) as executor:
        records = list(executor.map(_run, jobs))
    report = VerificationReport(params=params, records=records, tolerances=plan.tolerances)
    publish_count_metric("VerificationChecks", len(records))
    publish_count_metric("VerificationFailures", len(report.failures))
    return report
