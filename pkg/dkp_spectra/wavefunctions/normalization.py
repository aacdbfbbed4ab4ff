from typing import Optional, Sequence

import math

import numpy as np

from dkp_spectra.constants import (
    DEFAULT_QUADRATURE_ORDER,
    ORTHOGONALITY_TOLERANCE,
    NormConvention,
    Sector,
)
from dkp_spectra.exceptions import InvalidQuantumNumbers, NegativeNorm, ZeroNorm
from dkp_spectra.models.params import Params
from dkp_spectra.nu.jacobi import jacobi_eval
from dkp_spectra.utils.quadrature import jacobi_weighted_integral, radial_integral
from dkp_spectra.utils.telemetry import publish_metric_data, setup_logger
from dkp_spectra.wavefunctions.radial import RadialComponents

logger = setup_logger(__name__)

# pairs whose product enters the DKP bilinear norm, per sector
_DKP_PAIRS = {
    Sector.SPIN0: (("F", "G"),),
    Sector.SPIN1_NATURAL: (("F0", "G0"),),
    Sector.SPIN1_UNNATURAL_PLUS: (("F_plus", "G_plus"), ("F_minus", "G_minus")),
    Sector.SPIN1_UNNATURAL_MINUS: (("F_plus", "G_plus"), ("F_minus", "G_minus")),
}


def component_norms(components: RadialComponents, order: int = DEFAULT_QUADRATURE_ORDER) -> dict[str, float]:
    """Integral of each component squared with r^2 dr over the domain, as sampled now."""
    radius = components.params.domain_radius
    norms = {}
    for name in components.components:

        def integrand(r: np.ndarray, name: str = name) -> np.ndarray:
            return components.evaluate(r)[name] ** 2 * r**2

        norms[name] = radial_integral(integrand, radius, order=order, label=f"norm {name}").value
    return norms


def _bilinear(components: RadialComponents, order: int) -> float:
    radius = components.params.domain_radius
    pairs = _DKP_PAIRS[components.sector]

    def integrand(r: np.ndarray) -> np.ndarray:
        values = components.evaluate(r)
        return 2.0 * sum(values[f] * values[g] for f, g in pairs) * r**2

    return radial_integral(integrand, radius, order=order, label="dkp norm").value


def normalize(
    components: RadialComponents,
    convention: NormConvention = NormConvention.L2,
    order: int = DEFAULT_QUADRATURE_ORDER,
) -> RadialComponents:
    """
    Rescales the components so the chosen convention integrates to one. The builder is
    re-evaluated at the quadrature nodes, so the result does not depend on the sample grid.
    """
    if convention is NormConvention.L2:
        value = sum(component_norms(components, order).values())
    else:
        value = _bilinear(components, order)
        if value < 0:
            raise NegativeNorm(value)
    if value == 0 or not math.isfinite(value):
        raise ZeroNorm(convention.value)
    constant = components.normalization_constant / math.sqrt(value)
    logger.debug(f"{components.state.label} {convention.value} norm {value}, C = {constant}")
    return components.with_normalization(constant, convention)


def orthogonality_check(
    params: Params,
    sector: Sector,
    J: int,
    n: int,
    m: int,
    order: int = DEFAULT_QUADRATURE_ORDER,
) -> float:
    """
    Weighted overlap of P_n and P_m with (1-s)^(J+1/2) (1+s)^(mu-1/2) over s in (-1, 1).
    The profile, and therefore the overlap, is shared by every sector.
    """
    if n < 0 or m < 0:
        raise InvalidQuantumNumbers(f"n={n}, m={m} must be nonnegative")
    params.require_anti_de_sitter(f"orthogonality_check({sector.value})")
    a, b = J + 0.5, params.mu - 0.5
    return jacobi_weighted_integral(
        lambda s: jacobi_eval(n, a, b, s) * jacobi_eval(m, a, b, s), a, b, order
    )


def orthogonality_convergence(
    params: Params,
    sector: Sector,
    J: int,
    n: int,
    m: int,
    orders: Optional[Sequence[int]] = None,
) -> list[tuple[int, float]]:
    """Overlap defect against quadrature order, highest order last."""
    orders = orders or (8, 16, 32, 64, 128, DEFAULT_QUADRATURE_ORDER)
    history = [(order, orthogonality_check(params, sector, J, n, m, order)) for order in orders]
    final = abs(history[-1][1])
    publish_metric_data(
        "OrthogonalityDefect",
        final,
        {"sector": sector.value, "J": str(J), "pair": f"{n},{m}"},
        unit="None",
    )
    if n != m and final > ORTHOGONALITY_TOLERANCE:
        logger.warning(f"Orthogonality defect {final} for n={n}, m={m}, J={J}: {history}")
    return history
