"""Nikiforov-Uvarov reduction of psi'' + (tau~/sigma) psi' + (sigma~/sigma^2) psi = 0.

The reducer looks for pi(s) = (sigma' - tau~)/2 +- sqrt((sigma' - tau~)^2/4 - sigma~ + k sigma)
with k chosen so that the radicand is the square of a polynomial of degree at most one.
Coefficients are exact rationals when the inputs are, so candidate selection is crisp;
float inputs fall back to a tolerance on the zero-discriminant test.
"""
from typing import Any, Optional

from functools import cmp_to_key

import sympy
from pydantic import BaseModel, validator

from dkp_spectra.constants import FLOAT_DISCRIMINANT_TOLERANCE, Branch
from dkp_spectra.exceptions import (
    DegenerateSigma,
    IncomparableCandidates,
    NoAdmissibleCandidate,
    NoRealK,
    UnsupportedSigma,
)
from dkp_spectra.nu.polynomial import S, Polynomial, is_zero, to_scalar
from dkp_spectra.utils.telemetry import setup_logger

logger = setup_logger(__name__)

K = sympy.Symbol("k")
# reduced eigenvalue epsilon/lambda of the radial oscillator problem
REDUCED_EPSILON = sympy.Symbol("e", real=True)


class NUProblem(BaseModel):
    sigma: Polynomial
    tau_tilde: Polynomial
    sigma_tilde: Polynomial

    class Config:
        frozen = True

    @validator("sigma", "sigma_tilde")
    def _at_most_quadratic(cls, value, field):
        if value.degree > 2:
            raise ValueError(f"{field.name} must have degree <= 2, got {value.degree}")
        return value

    @validator("tau_tilde")
    def _at_most_linear(cls, value):
        if value.degree > 1:
            raise ValueError(f"tau_tilde must have degree <= 1, got {value.degree}")
        return value

    @property
    def is_exact(self) -> bool:
        return self.sigma.is_exact and self.tau_tilde.is_exact and self.sigma_tilde.is_exact

    @property
    def tolerance(self) -> float:
        """Zero test used for float coefficients, 0 for exact problems."""
        if self.is_exact:
            return 0.0
        numeric = [
            abs(complex(c))
            for poly in (self.sigma, self.tau_tilde, self.sigma_tilde)
            for c in poly.coefficients
            if c.is_number
        ]
        scale = max([1.0] + numeric)
        return FLOAT_DISCRIMINANT_TOLERANCE * scale**2


class NUCandidate(BaseModel):
    k: Any
    pi: Polynomial
    sign_branch: Branch
    tau: Polynomial
    # sigma of the originating problem, needed for Lambda_n and the phi exponents
    sigma: Polynomial

    class Config:
        frozen = True
        arbitrary_types_allowed = True

    @property
    def tau_slope(self) -> sympy.Expr:
        return self.tau.coefficient(1)


class PolynomialFamily(BaseModel):
    name: str
    interval: Optional[tuple[Any, Any]] = None
    # (a, b) with weight (1-s)^a (1+s)^b in the variable mapped onto (-1, 1)
    jacobi_parameters: Optional[tuple[Any, Any]] = None

    class Config:
        frozen = True
        arbitrary_types_allowed = True


class NUSolution(BaseModel):
    problem: NUProblem
    candidate: NUCandidate
    phi_exponents: tuple[Any, ...]
    rho_exponents: Optional[tuple[Any, Any]] = None
    polynomial_family: PolynomialFamily

    class Config:
        frozen = True
        arbitrary_types_allowed = True

    def lambda_n(self, n: int) -> sympy.Expr:
        return eigen_lambda(self.candidate, n)


def _sign(value: sympy.Expr, tolerance: float = 0.0) -> Optional[int]:
    value = sympy.expand(value)
    if not value.is_number:
        return None
    number = float(sympy.re(value))
    if abs(number) <= tolerance:
        return 0
    return 1 if number > 0 else -1


def _compare(a: sympy.Expr, b: sympy.Expr) -> int:
    sign = _sign(a - b)
    if sign is None:
        raise IncomparableCandidates(a, b)
    return sign


def _real_roots(poly: Polynomial) -> list[sympy.Expr]:
    """Distinct real roots in descending order; raises UnsupportedSigma for symbolic input."""
    if any(not c.is_number for c in poly.coefficients):
        raise UnsupportedSigma(poly)
    if poly.degree < 1:
        return []
    roots = sympy.Poly(poly.as_expr(), S).real_roots()
    distinct: list[sympy.Expr] = []
    for root in roots:
        if not any(_sign(root - other) == 0 for other in distinct):
            distinct.append(root)
    return sorted(distinct, key=cmp_to_key(_compare), reverse=True)


def _pole_exponents(sigma: Polynomial, numerator: Polynomial) -> tuple[sympy.Expr, ...]:
    """
    Exponents A_i of prod |s - s_i|^{A_i} solving w'/w = numerator/sigma, roots descending.
    """
    derivative = sigma.derivative()
    exponents = []
    for root in _real_roots(sigma):
        slope = derivative(root)
        if is_zero(slope):
            # double root, no power law factor
            return ()
        exponents.append(sympy.nsimplify(numerator(root) / slope) if numerator.is_exact else
                         sympy.expand(numerator(root) / slope))
    return tuple(exponents)


def phi_exponents(sigma: Polynomial, pi: Polynomial) -> tuple[sympy.Expr, ...]:
    """phi'/phi = pi/sigma"""
    return _pole_exponents(sigma, pi)


def radicand(problem: NUProblem, k: Any) -> Polynomial:
    half = (problem.sigma.derivative() - problem.tau_tilde).scale(sympy.Rational(1, 2))
    expr = half.as_expr() ** 2 - problem.sigma_tilde.as_expr() + to_scalar(k) * problem.sigma.as_expr()
    return Polynomial.from_expr(expr)


def _k_roots(discriminant: sympy.Expr, tolerance: float) -> list[sympy.Expr]:
    poly = sympy.Poly(discriminant, K)
    coefficients = [sympy.expand(c) for c in reversed(poly.all_coeffs())] + [0, 0]
    c0, c1, c2 = coefficients[0], coefficients[1], coefficients[2]
    if is_zero(c2) and is_zero(c1):
        raise NoRealK(discriminant)
    if is_zero(c2):
        return [sympy.expand(-c0 / c1)]
    d = sympy.expand(c1**2 - 4 * c2 * c0)
    sign = _sign(d, tolerance)
    if sign is not None and sign < 0:
        raise NoRealK(discriminant)
    root = sympy.sqrt(d) if sign != 0 else sympy.Integer(0)
    roots = [sympy.expand((-c1 - root) / (2 * c2)), sympy.expand((-c1 + root) / (2 * c2))]
    if sign == 0:
        return roots[:1]
    return sorted(roots, key=cmp_to_key(_compare))


def nu_reduce(problem: NUProblem) -> list[NUCandidate]:
    """
    All (k, sign) pairs for which the pi-radicand is a perfect square, ordered by k then sign.
    """
    if problem.sigma.is_zero:
        raise DegenerateSigma()
    tolerance = problem.tolerance
    half = (problem.sigma.derivative() - problem.tau_tilde).scale(sympy.Rational(1, 2)).as_expr()
    q = sympy.expand(half**2 - problem.sigma_tilde.as_expr() + K * problem.sigma.as_expr())
    q0, q1, q2 = (q.coeff(S, power) for power in range(3))
    discriminant = sympy.expand(q1**2 - 4 * q2 * q0)

    candidates = []
    for k in _k_roots(discriminant, tolerance):
        q0k, q1k, q2k = (sympy.expand(c.subs(K, k)) for c in (q0, q1, q2))
        if is_zero(q2k, tolerance):
            root_poly = sympy.sqrt(q0k)
        else:
            if _sign(q2k) == -1:
                logger.debug(f"Skipping k={k}: radicand leading coefficient {q2k} < 0")
                continue
            lead = sympy.sqrt(q2k)
            root_poly = lead * S + q1k / (2 * lead)
        root_poly = sympy.expand(root_poly)
        if root_poly.has(sympy.I):
            continue
        defect = Polynomial.from_expr(root_poly**2 - (q2k * S**2 + q1k * S + q0k))
        if not all(is_zero(c, tolerance) for c in defect.coefficients):
            logger.debug(f"Skipping k={k}: radicand is not a perfect square ({defect})")
            continue
        for branch in (Branch.PLUS, Branch.MINUS):
            pi = Polynomial.from_expr(half + branch.sign * root_poly)
            candidates.append(
                NUCandidate(
                    k=k,
                    pi=pi,
                    sign_branch=branch,
                    tau=problem.tau_tilde + pi.scale(2),
                    sigma=problem.sigma,
                )
            )
    if not candidates:
        raise NoRealK(discriminant)
    return candidates


def is_admissible(candidate: NUCandidate) -> bool:
    """tau' < 0 and every phi exponent nonnegative."""
    if _sign(candidate.tau_slope) != -1:
        return False
    try:
        exponents = phi_exponents(candidate.sigma, candidate.pi)
    except UnsupportedSigma:
        return False
    return all(_sign(exponent) in (0, 1) for exponent in exponents)


def select_candidate(candidates: list[NUCandidate]) -> NUCandidate:
    """Admissible candidate with the smallest k; k values must differ by a number."""
    admissible = [candidate for candidate in candidates if is_admissible(candidate)]
    if not admissible:
        raise NoAdmissibleCandidate(len(candidates))
    return sorted(admissible, key=cmp_to_key(lambda a, b: _compare(a.k, b.k)))[0]


def eigen_lambda(candidate: NUCandidate, n: int) -> sympy.Expr:
    """Lambda_n = -n tau' - n(n-1) sigma''/2"""
    sigma_second = 2 * candidate.sigma.coefficient(2)
    return sympy.expand(-n * candidate.tau_slope - sympy.Rational(n * (n - 1), 2) * sigma_second)


def quantization_condition(candidate: NUCandidate, n: int) -> sympy.Expr:
    """k + pi' - Lambda_n, zero on the spectrum."""
    return sympy.expand(candidate.k + candidate.pi.coefficient(1) - eigen_lambda(candidate, n))


def weight_function(problem: NUProblem, candidate: NUCandidate) -> tuple[Any, Any]:
    """
    Exponents (alpha, beta) of rho = (s2 - s)^alpha (s - s1)^beta solving (sigma rho)' = tau rho.
    For sigma = 1 - s^2 these are the usual (1-s)^alpha (1+s)^beta exponents.
    """
    if problem.sigma.degree != 2:
        raise UnsupportedSigma(problem.sigma)
    roots = _real_roots(problem.sigma)
    if len(roots) != 2:
        raise UnsupportedSigma(problem.sigma)
    exponents = _pole_exponents(problem.sigma, candidate.tau - problem.sigma.derivative())
    return exponents[0], exponents[1]


def classify_family(problem: NUProblem, candidate: NUCandidate) -> PolynomialFamily:
    degree = problem.sigma.degree
    if degree == 0:
        return PolynomialFamily(name="hermite")
    if degree == 1:
        return PolynomialFamily(name="laguerre")
    try:
        upper, lower = _real_roots(problem.sigma)
    except (UnsupportedSigma, ValueError):
        return PolynomialFamily(name="unclassified")
    return PolynomialFamily(
        name="jacobi",
        interval=(lower, upper),
        jacobi_parameters=weight_function(problem, candidate),
    )


def nu_solve(problem: NUProblem) -> NUSolution:
    candidate = select_candidate(nu_reduce(problem))
    family = classify_family(problem, candidate)
    return NUSolution(
        problem=problem,
        candidate=candidate,
        phi_exponents=phi_exponents(problem.sigma, candidate.pi),
        rho_exponents=family.jacobi_parameters,
        polynomial_family=family,
    )


def radial_oscillator_problem(mu: Any, J: int, reduced_epsilon: Any = REDUCED_EPSILON) -> NUProblem:
    """
    Radial oscillator equation in s = 1 - 2 lambda r^2 after peeling (1+s)^(mu/2):
    sigma = 1 - s^2, tau~ = (mu-1) - (mu+2)s, sigma~ = a1 s^2 + a2 s + a3 with
    a1,3 = -(J(J+1) +- e -+ 3mu)/4, a2 = -J(J+1)/2 and e = epsilon/lambda.
    """
    mu = to_scalar(mu)
    e = to_scalar(reduced_epsilon)
    jj = J * (J + 1)
    a1 = -sympy.Rational(1, 4) * (jj + e - 3 * mu)
    a2 = -sympy.Rational(jj, 2)
    a3 = -sympy.Rational(1, 4) * (jj - e + 3 * mu)
    return NUProblem(
        sigma=Polynomial.from_coefficients([1, 0, -1]),
        tau_tilde=Polynomial.from_coefficients([mu - 1, -(mu + 2)]),
        sigma_tilde=Polynomial.from_coefficients([a3, a2, a1]),
    )


def solve_reduced_epsilon(mu: Any, J: int, n: int) -> sympy.Expr:
    """epsilon/lambda of the n-th radial level from the quantization condition."""
    solution = nu_solve(radial_oscillator_problem(mu, J))
    roots = sympy.solve(quantization_condition(solution.candidate, n), REDUCED_EPSILON)
    if len(roots) != 1:
        raise NoRealK(quantization_condition(solution.candidate, n))
    return sympy.expand(roots[0])
