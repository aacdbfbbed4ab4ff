from enum import Enum

from scipy import constants as codata

# SI values used when UnitSystem.SI is requested
SI_HBAR = codata.hbar
SI_SPEED_OF_LIGHT = codata.c
SI_ELEMENTARY_CHARGE = codata.e
SI_ELECTRON_MASS = codata.m_e

# Penning trap reference values (rounded product e*hbar*B at 6 T)
PENNING_REFERENCE_FIELD_TESLA = 6.0
PENNING_ROUNDED_E_HBAR_B = 1e-52

# wavefunction domain and sampling
WAVEFUNCTION_INSET_FACTOR = 1e-8
DEFAULT_WAVEFUNCTION_SAMPLES = 512
DEFAULT_QUADRATURE_ORDER = 200
MAX_QUADRATURE_ORDER = 3200
QUADRATURE_RTOL = 1e-12

# oracle discretization
MIN_GRID_SIZE = 200
DEFAULT_GRID_SIZE = 2000
DEFAULT_REPORT_PATH = "verification_report.txt"
ORACLE_INSET_FACTOR = 1e-6
MAX_EIGENPAIRS = 10
# outer wall moves in to where exp(-m omega t^2 / 2 hbar) drops below exp(-this)
GAUSSIAN_TAIL_EXPONENT = 120.0
# sixth order central second derivative: centre, then offsets 1, 2, 3
FD6_SECOND_DERIVATIVE = (-49.0 / 18.0, 3.0 / 2.0, -3.0 / 20.0, 1.0 / 90.0)
# sixth order central first derivative: offsets 1, 2, 3 (antisymmetric)
FD6_FIRST_DERIVATIVE = (3.0 / 4.0, -3.0 / 20.0, 1.0 / 60.0)
RICHARDSON_ORDER = 6
RICHARDSON_MIN_SHRINK = 12.0
EIGENSOLVER_NOISE_FLOOR = 1e-11
SYMMETRY_TOLERANCE = 1e-12

# tolerances
LINEAR_SECTOR_TOLERANCE = 1e-6
UNNATURAL_TOLERANCE = 1e-5
COMMUTATOR_TOLERANCE = 1e-10
UNCERTAINTY_SLACK = 1e-8
ORTHOGONALITY_TOLERANCE = 1e-10
TRANSCENDENTAL_TOLERANCE = 1e-9
FLOAT_DISCRIMINANT_TOLERANCE = 1e-10
ROOT_RESIDUAL_TOLERANCE = 1e-12

CSV_FLOAT_FORMAT = "{:.16e}"


class Space(str, Enum):
    """Enum for the sign class of the deformation parameter."""

    ADS = "ads"
    DS = "ds"
    FLAT = "flat"

    @classmethod
    def get_member_by_value(cls, value):
        """
        Get enum member by value
        """
        for member in cls:
            if member.value == value:
                return member
        raise ValueError(f"Invalid value {value} for enum {cls}")


class UnitSystem(str, Enum):
    """Enum for unit systems accepted at the boundary."""

    NATURAL = "natural"
    SI = "si"

    @classmethod
    def get_member_by_value(cls, value):
        """
        Get enum member by value
        """
        for member in cls:
            if member.value == value:
                return member
        raise ValueError(f"Invalid value {value} for enum {cls}")


class Branch(str, Enum):
    """Enum for sign branches (NU candidates and unnatural parity splitting)."""

    PLUS = "plus"
    MINUS = "minus"

    @property
    def sign(self) -> int:
        return 1 if self is Branch.PLUS else -1


class Sector(str, Enum):
    """
    Enum for the radial sectors of the oscillator
    """

    SPIN0 = "spin0"
    SPIN1_NATURAL = "natural"
    SPIN1_UNNATURAL_PLUS = "unnatural_plus"
    SPIN1_UNNATURAL_MINUS = "unnatural_minus"

    @property
    def is_unnatural(self) -> bool:
        return self in (Sector.SPIN1_UNNATURAL_PLUS, Sector.SPIN1_UNNATURAL_MINUS)

    @property
    def branch(self):
        if self is Sector.SPIN1_UNNATURAL_PLUS:
            return Branch.PLUS
        if self is Sector.SPIN1_UNNATURAL_MINUS:
            return Branch.MINUS
        return None

    @classmethod
    def unnatural(cls, branch: Branch) -> "Sector":
        return cls.SPIN1_UNNATURAL_PLUS if branch is Branch.PLUS else cls.SPIN1_UNNATURAL_MINUS

    @classmethod
    def get_member_by_value(cls, value):
        """
        Get enum member by value
        """
        for member in cls:
            if member.value == value:
                return member
        raise ValueError(f"Invalid value {value} for enum {cls}")


class NormConvention(str, Enum):
    """Enum for normalization conventions of radial components."""

    L2 = "l2"
    DKP = "dkp"

    @classmethod
    def get_member_by_value(cls, value):
        """
        Get enum member by value
        """
        for member in cls:
            if member.value == value:
                return member
        raise ValueError(f"Invalid value {value} for enum {cls}")


class OutputFormat(str, Enum):
    """Enum for CLI output formats."""

    CSV = "csv"
    JSON = "json"


class CheckKind(str, Enum):
    """
    Enum for verification checks (only add implemented ones)
    """

    SPIN0 = "spin0"
    NATURAL = "natural"
    UNNATURAL = "unnatural"
    TRANSCENDENTAL = "transcendental"
    DEGENERACY = "degeneracy"
    OVERLAP = "overlap"
    ORTHOGONALITY = "orthogonality"
    COMMUTATOR = "commutator"
    RESIDUAL = "residual"
    UNCERTAINTY = "uncertainty"

    @classmethod
    def get_member_by_value(cls, value):
        """
        Get enum member by value
        """
        for member in cls:
            if member.value == value:
                return member
        raise ValueError(f"Invalid value {value} for enum {cls}")
