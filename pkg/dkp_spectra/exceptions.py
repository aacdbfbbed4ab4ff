from typing import Any, Optional


class DKPSpectraException(Exception):
    """Base exception for the package, carries the CLI exit code"""

    exit_code = 2

    def __init__(self, message: str):
        self.message = message
        super().__init__(self.message)

    def __str__(self):
        return self.message


class SignMismatch(DKPSpectraException):
    """Exception raised when the sign of lambda contradicts the space tag"""

    def __init__(self, lam: float, space: str):
        super().__init__(
            f"Deformation lambda={lam} is inconsistent with space '{space}' "
            "(ads needs lambda > 0, ds needs lambda < 0, flat needs lambda = 0)."
        )


class NonPositiveParameter(DKPSpectraException):
    """Exception raised when a parameter that must be strictly positive is not"""

    def __init__(self, name: str, value: Any):
        super().__init__(f"Parameter {name}={value} must be strictly positive.")


class DomainError(DKPSpectraException):
    """Exception raised when a coordinate lies outside the open domain"""

    def __init__(self, variable: str, value: Any, lower: float, upper: float):
        super().__init__(
            f"{variable}={value} lies outside the open domain ({lower}, {upper})."
        )


class InvalidQuantumNumbers(DKPSpectraException):
    """Exception raised for quantum numbers violating N >= J, N - J even, n >= 0"""

    def __init__(self, reason: str):
        super().__init__(f"Invalid quantum numbers: {reason}.")


class InvalidBranchSelection(DKPSpectraException):
    """Exception raised when an unnatural state is not a pure branch"""

    def __init__(self, c_plus: float, c_minus: float):
        super().__init__(
            f"Exactly one of C_plus={c_plus} and C_minus={c_minus} must be nonzero."
        )


class NoRealK(DKPSpectraException):
    """Exception raised when the zero-discriminant condition has no real root in k"""

    def __init__(self, discriminant: Any):
        super().__init__(f"Discriminant condition {discriminant} = 0 has no real solution in k.")


class DegenerateSigma(DKPSpectraException):
    """Exception raised when sigma vanishes identically"""

    def __init__(self):
        super().__init__("sigma(s) is identically zero, the problem is not of hypergeometric type.")


class NoAdmissibleCandidate(DKPSpectraException):
    """Exception raised when no NU candidate has tau' < 0 and nonnegative phi exponents"""

    def __init__(self, count: int):
        super().__init__(
            f"None of the {count} candidates satisfies tau' < 0 with nonnegative phi exponents."
        )


class IncomparableCandidates(DKPSpectraException):
    """Exception raised when two admissible candidates have k values with no definite order"""

    def __init__(self, first: Any, second: Any):
        super().__init__(
            f"Cannot order admissible candidates with k={first} and k={second}; "
            "their difference is not a number."
        )


class UnsupportedSigma(DKPSpectraException):
    """Exception raised when sigma is not of Jacobi (two distinct real roots) class"""

    def __init__(self, sigma: Any):
        super().__init__(f"sigma(s) = {sigma} is not factorable into two distinct real roots.")


class ParameterOutOfRange(DKPSpectraException):
    """Exception raised for Jacobi parameters a or b <= -1"""

    def __init__(self, a: float, b: float):
        super().__init__(f"Jacobi parameters (a={a}, b={b}) must both exceed -1.")


class NegativeESquared(DKPSpectraException):
    """Exception raised when a closed form gives E^2 <= 0 (deep de Sitter deformation)"""

    exit_code = 3

    def __init__(self, e_squared: float, sector: str, N: int, J: int, lam: float):
        self.e_squared = e_squared
        self.N = N
        super().__init__(
            f"E^2={e_squared} <= 0 for sector {sector} at N={N}, J={J}, lambda={lam}; "
            "no real positive energy exists."
        )


class NegativeRadicand(DKPSpectraException):
    """Exception raised when the spin-orbit splitting radicand is negative"""

    def __init__(self, radicand: float, N: int, J: int, omega: float, lam: float):
        super().__init__(
            f"Splitting radicand {radicand} < 0 at N={N}, J={J}, omega={omega}, lambda={lam}."
        )


class NoRootInBracket(DKPSpectraException):
    """Exception raised when the bracket endpoints give residuals of equal sign"""

    def __init__(self, lower: float, upper: float, f_lower: float, f_upper: float):
        super().__init__(
            f"No sign change in bracket [{lower}, {upper}]: residuals {f_lower} and {f_upper}."
        )


class FlatSpaceUnsupported(DKPSpectraException):
    """Exception raised when a quantity needs lambda > 0 and lambda = 0 was given"""

    exit_code = 3

    def __init__(self, what: str):
        super().__init__(
            f"{what} is undefined for lambda = 0 (mu = m*omega/(lambda*hbar) diverges); "
            "use a strictly positive deformation."
        )


class DeSitterUnsupported(DKPSpectraException):
    """Exception raised when a quantity exists only on the compact anti-de Sitter domain"""

    exit_code = 3

    def __init__(self, what: str):
        super().__init__(
            f"{what} is only available for anti-de Sitter deformations (lambda > 0); "
            "the de Sitter domain is non-compact and only its spectra are supported."
        )


class JZero(DKPSpectraException):
    """Exception raised when J = 0 is given where J >= 1 is required"""

    def __init__(self, what: str):
        super().__init__(f"{what} requires J >= 1, got J = 0.")


class GridTooCoarse(DKPSpectraException):
    """Exception raised when the oracle grid is below the floor"""

    def __init__(self, grid_size: int, minimum: int):
        super().__init__(f"Grid size M={grid_size} is below the minimum {minimum}.")


class InversionNegative(DKPSpectraException):
    """Exception raised when a numeric eigenvalue implies E^2 <= 0"""

    def __init__(self, epsilon: float, e_squared: float):
        super().__init__(f"Eigenvalue epsilon={epsilon} inverts to E^2={e_squared} <= 0.")


class ZeroNorm(DKPSpectraException):
    """Exception raised when components integrate to zero"""

    def __init__(self, convention: str):
        super().__init__(f"Components have zero norm under the {convention} convention.")


class NegativeNorm(DKPSpectraException):
    """Exception raised when the DKP bilinear norm is negative"""

    def __init__(self, value: float):
        super().__init__(f"DKP bilinear norm {value} is negative, components cannot be normalized.")


class UnknownTestFunction(DKPSpectraException):
    """Exception raised for an id missing from the commutator test catalog"""

    def __init__(self, test_function_id: str, available: Optional[list[str]] = None):
        super().__init__(
            f"Unknown test function '{test_function_id}', available: {sorted(available or [])}."
        )


class UnitMismatch(DKPSpectraException):
    """Exception raised when natural units are requested with hbar or c different from 1"""

    def __init__(self, hbar: float, c: float):
        super().__init__(f"Natural units require hbar = c = 1, got hbar={hbar}, c={c}.")


class ConfigFileError(DKPSpectraException):
    """Exception raised for a config file line that is not key = value"""

    def __init__(self, source: str, line_number: int, line: str):
        super().__init__(f"{source}:{line_number}: expected 'key = value', got '{line.strip()}'.")


class UnknownFigure(DKPSpectraException):
    """Exception raised for a figure id outside the reproducible set"""

    def __init__(self, figure_id: int, available: list[int]):
        super().__init__(f"Unknown figure id {figure_id}, available: {available}.")
