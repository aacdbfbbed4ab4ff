from typing import Union

import numpy as np

from dkp_spectra.exceptions import InvalidQuantumNumbers, ParameterOutOfRange

ArrayLike = Union[float, np.ndarray]


def _check(n: int, a: float, b: float) -> None:
    if n < 0:
        raise InvalidQuantumNumbers(f"polynomial degree n={n} must be nonnegative")
    if a <= -1.0 or b <= -1.0:
        raise ParameterOutOfRange(a, b)


def jacobi_eval(n: int, a: float, b: float, s: ArrayLike) -> ArrayLike:
    """
    P_n^{(a,b)}(s) by the forward three-term recurrence.

    >>> float(jacobi_eval(2, 0.0, 0.0, 0.5))
    -0.125
    """
    _check(n, a, b)
    x = np.asarray(s, dtype=float)
    previous = np.ones_like(x)
    if n == 0:
        return previous if x.ndim else float(previous)
    current = 0.5 * (a + b + 2.0) * x + 0.5 * (a - b)
    for i in range(2, n + 1):
        apb = a + b + 2.0 * i
        den = 2.0 * i * (a + b + i) * (apb - 2.0)
        f0 = (apb - 1.0) * (a * a - b * b)
        f1 = (apb - 1.0) * apb * (apb - 2.0)
        f2 = 2.0 * (a + i - 1.0) * (b + i - 1.0) * apb
        previous, current = current, ((f0 + f1 * x) * current - f2 * previous) / den
    return current if x.ndim else float(current)


def jacobi_deriv(n: int, a: float, b: float, s: ArrayLike) -> ArrayLike:
    """dP_n^{(a,b)}/ds = (n+a+b+1)/2 P_{n-1}^{(a+1,b+1)}, zero for n = 0."""
    _check(n, a, b)
    if n == 0:
        x = np.asarray(s, dtype=float)
        return np.zeros_like(x) if x.ndim else 0.0
    return 0.5 * (n + a + b + 1.0) * jacobi_eval(n - 1, a + 1.0, b + 1.0, s)

