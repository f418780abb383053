"""Function representations the operator calculus acts on.

PolyFunction is the exact backbone: every operator in the package has a
closed diagonal or triangular action on monomials, and all quadrature paths
are validated against it.  PolyGaussian covers the Schwartz-class test
functions p(x) exp(-a x^2) with exact derivatives, parity splits, odd
quotients and Taylor data, so no smooth-function code path ever needs finite
differences for its own inputs.  GridFunction carries sampled data on an
exactly symmetric grid.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from .special import OrderParam, as_order, bessel_mod_array, log_b_coeff

__all__ = [
    "PolyFunction",
    "PolyGaussian",
    "GridFunction",
    "KernelFunction",
    "WrappedFunction",
    "gaussian",
    "monomial_gaussian",
]

_ODD_QUOTIENT_EPS = 1e-8


def _trim(coeffs: np.ndarray) -> np.ndarray:
    coeffs = np.atleast_1d(np.asarray(coeffs))
    nz = np.nonzero(coeffs)[0]
    if nz.size == 0:
        return coeffs[:1] * 0
    return coeffs[: nz[-1] + 1]


@dataclass(frozen=True)
class PolyFunction:
    """Polynomial sum_n c_n x^n with exact coefficient arithmetic."""

    coeffs: np.ndarray

    def __post_init__(self) -> None:
        object.__setattr__(self, "coeffs", _trim(self.coeffs))

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def __call__(self, x):
        return np.polynomial.polynomial.polyval(np.asarray(x), self.coeffs)

    def derivative(self, x=None):
        dcoeffs = np.polynomial.polynomial.polyder(self.coeffs)
        if len(dcoeffs) == 0:
            dcoeffs = np.zeros(1)
        df = PolyFunction(dcoeffs)
        return df if x is None else df(x)

    def derivative_fn(self) -> "PolyFunction":
        return self.derivative()

    def even_fn(self) -> "PolyFunction":
        c = self.coeffs.copy()
        c[1::2] = 0
        return PolyFunction(c)

    def odd_fn(self) -> "PolyFunction":
        c = self.coeffs.copy()
        c[0::2] = 0
        return PolyFunction(c)

    def odd_quotient_fn(self) -> "PolyFunction":
        """(odd part)/x, a polynomial in x^2."""
        c = self.coeffs
        odd = c[1::2]
        if odd.size == 0:
            return PolyFunction(np.zeros(1, dtype=c.dtype))
        out = np.zeros(2 * odd.size - 1, dtype=c.dtype)
        out[0::2] = odd
        return PolyFunction(out)

    def odd_quotient(self, x):
        return self.odd_quotient_fn()(x)

    def taylor_coeff(self, k: int):
        return self.coeffs[k] if k < len(self.coeffs) else 0.0

    def scaled(self, factors: np.ndarray) -> "PolyFunction":
        """Coefficientwise multiplication; the diagonal operator actions."""
        factors = np.asarray(factors)
        if len(factors) < len(self.coeffs):
            raise ValueError("not enough diagonal factors")
        return PolyFunction(self.coeffs * factors[: len(self.coeffs)])

    def __add__(self, other: "PolyFunction") -> "PolyFunction":
        return PolyFunction(np.polynomial.polynomial.polyadd(self.coeffs, other.coeffs))

    def __sub__(self, other: "PolyFunction") -> "PolyFunction":
        return PolyFunction(np.polynomial.polynomial.polysub(self.coeffs, other.coeffs))

    @classmethod
    def monomial(cls, n: int, coeff=1.0) -> "PolyFunction":
        c = np.zeros(n + 1, dtype=np.result_type(type(coeff), float))
        c[n] = coeff
        return cls(c)


@dataclass(frozen=True)
class PolyGaussian:
    """p(x) exp(-rate x^2): the Schwartz-class workhorse.

    Closed under d/dx, parity splitting and odd-quotient division, which is
    what makes the difference-differential operator exact on this class.
    """

    poly: PolyFunction
    rate: float = 1.0

    def __post_init__(self) -> None:
        if not self.rate > 0:
            raise ValueError("decay rate must be positive")
        if not isinstance(self.poly, PolyFunction):
            object.__setattr__(self, "poly", PolyFunction(np.asarray(self.poly)))

    def __call__(self, x):
        x = np.asarray(x)
        return self.poly(x) * np.exp(-self.rate * x**2)

    def derivative_fn(self) -> "PolyGaussian":
        p, a = self.poly, self.rate
        dp = p.derivative()
        shifted = PolyFunction(np.polynomial.polynomial.polymul(np.array([0.0, -2.0 * a]), p.coeffs))
        return PolyGaussian(dp + shifted, a)

    def derivative(self, x):
        return self.derivative_fn()(x)

    def even_fn(self) -> "PolyGaussian":
        return PolyGaussian(self.poly.even_fn(), self.rate)

    def odd_fn(self) -> "PolyGaussian":
        return PolyGaussian(self.poly.odd_fn(), self.rate)

    def odd_quotient_fn(self) -> "PolyGaussian":
        return PolyGaussian(self.poly.odd_quotient_fn(), self.rate)

    def odd_quotient(self, x):
        return self.odd_quotient_fn()(x)

    def even_part(self, x):
        return self.even_fn()(x)

    def taylor_coeff(self, k: int):
        # coefficients of p(x) * sum_j (-a)^j x^(2j)/j!
        total = 0.0
        for j in range(k // 2 + 1):
            pk = self.poly.taylor_coeff(k - 2 * j)
            if pk != 0:
                total += pk * (-self.rate) ** j / math.factorial(j)
        return total


def gaussian(rate: float = 1.0) -> PolyGaussian:
    return PolyGaussian(PolyFunction(np.array([1.0])), rate)


def monomial_gaussian(n: int, rate: float = 1.0) -> PolyGaussian:
    return PolyGaussian(PolyFunction.monomial(n), rate)


@dataclass(frozen=True)
class GridFunction:
    """Samples on a strictly increasing grid that is exactly symmetric
    about 0 (x on the grid implies -x on the grid)."""

    grid: np.ndarray
    values: np.ndarray
    smoothness_hint: str = "generic"

    def __post_init__(self) -> None:
        grid = np.asarray(self.grid, dtype=float)
        values = np.asarray(self.values)
        if grid.ndim != 1 or grid.shape != values.shape:
            raise ValueError("grid and values must be equal-length 1-d arrays")
        if np.any(np.diff(grid) <= 0):
            raise ValueError("grid must be strictly increasing")
        if not np.array_equal(grid, -grid[::-1]):
            raise ValueError("grid must be exactly symmetric about 0; build it as a +/- half-grid")
        if self.smoothness_hint not in ("schwartz", "polynomial_times_gaussian", "generic"):
            raise ValueError(f"unknown smoothness hint {self.smoothness_hint!r}")
        object.__setattr__(self, "grid", grid)
        object.__setattr__(self, "values", values)

    @classmethod
    def from_half(cls, half_grid: np.ndarray, values: np.ndarray, hint: str = "generic") -> "GridFunction":
        half_grid = np.asarray(half_grid, dtype=float)
        if np.any(half_grid <= 0):
            raise ValueError("half grid must be strictly positive")
        grid = np.concatenate([-half_grid[::-1], half_grid])
        return cls(grid=grid, values=np.asarray(values), smoothness_hint=hint)

    @classmethod
    def sample(cls, f: Callable, grid: np.ndarray, hint: str = "generic") -> "GridFunction":
        grid = np.asarray(grid, dtype=float)
        return cls(grid=grid, values=np.asarray(f(grid)), smoothness_hint=hint)

    def even_values(self) -> np.ndarray:
        return 0.5 * (self.values + self.values[::-1])

    def odd_values(self) -> np.ndarray:
        return 0.5 * (self.values - self.values[::-1])

    def with_values(self, values: np.ndarray) -> "GridFunction":
        return GridFunction(grid=self.grid, values=np.asarray(values), smoothness_hint=self.smoothness_hint)


class KernelFunction:
    """x -> E_alpha(lam x) as a smooth function object with exact derivative,
    odd quotient and Taylor data, all through the normalized Bessel series.

    E_alpha(z) = B_alpha(z) + z/(2(alpha+1)) B_{alpha+1}(z) where B is the
    even entire function bessel_mod.
    """

    def __init__(self, alpha: OrderParam | float, lam: complex):
        self.order = as_order(alpha)
        self.lam = complex(lam)

    def _b(self, shift: int, z: np.ndarray) -> np.ndarray:
        return bessel_mod_array(self.order.alpha + shift, z)

    def __call__(self, x):
        a = self.order.alpha
        z = self.lam * np.asarray(x, dtype=complex)
        return self._b(0, z) + z / (2.0 * (a + 1.0)) * self._b(1, z)

    def derivative(self, x):
        # E'(z) = [(z+1) B_{a+1}(z) + z^2 B_{a+2}(z)/(2(a+2))] / (2(a+1))
        a = self.order.alpha
        z = self.lam * np.asarray(x, dtype=complex)
        ez = ((z + 1.0) * self._b(1, z) + z**2 * self._b(2, z) / (2.0 * (a + 2.0))) / (2.0 * (a + 1.0))
        return self.lam * ez

    def odd_quotient(self, x):
        a = self.order.alpha
        z = self.lam * np.asarray(x, dtype=complex)
        return self.lam * self._b(1, z) / (2.0 * (a + 1.0))

    def even_part(self, x):
        z = self.lam * np.asarray(x, dtype=complex)
        return self._b(0, z)

    def taylor_coeff(self, k: int) -> complex:
        return self.lam**k * math.exp(-log_b_coeff(k, self.order))


class WrappedFunction:
    """Adapter giving a bare callable the smooth-function hooks.

    The odd quotient falls back to the removable-singularity rule: for
    |x| below 1e-8 it returns f'(0), which requires a derivative evaluator.
    """

    def __init__(self, f: Callable, df: Optional[Callable] = None, taylor: Optional[Callable] = None):
        self._f = f
        self._df = df
        self._taylor = taylor

    @property
    def has_derivative(self) -> bool:
        return self._df is not None

    def __call__(self, x):
        return self._f(x)

    def derivative(self, x):
        if self._df is None:
            raise ValueError("wrapped function has no derivative evaluator")
        return self._df(x)

    def odd_quotient(self, x):
        x = np.asarray(x, dtype=float)
        scalar = x.ndim == 0
        x = np.atleast_1d(x)
        out = np.empty(x.shape, dtype=np.result_type(np.asarray(self._f(x[:1])).dtype, float))
        small = np.abs(x) < _ODD_QUOTIENT_EPS
        if np.any(small):
            if self._df is None:
                raise ValueError("odd quotient near 0 needs a derivative evaluator")
            out[small] = self._df(0.0)
        big = ~small
        if np.any(big):
            xb = x[big]
            out[big] = (np.asarray(self._f(xb)) - np.asarray(self._f(-xb))) / (2.0 * xb)
        return out[0] if scalar else out

    def even_part(self, x):
        x = np.asarray(x)
        return 0.5 * (np.asarray(self._f(x)) + np.asarray(self._f(-x)))

    def taylor_coeff(self, k: int):
        if self._taylor is not None:
            return self._taylor(k)
        raise ValueError("wrapped function has no Taylor data")


def even_part_of(f, x):
    """Even part through the function's own hook when it has one."""
    hook = getattr(f, "even_part", None)
    if hook is not None:
        return hook(x)
    x = np.asarray(x)
    return 0.5 * (np.asarray(f(x)) + np.asarray(f(-x)))


def odd_quotient_of(f, x):
    hook = getattr(f, "odd_quotient", None)
    if hook is not None:
        return hook(x)
    x = np.asarray(x)
    return np.where(
        np.abs(x) < _ODD_QUOTIENT_EPS,
        0.0,
        (np.asarray(f(x)) - np.asarray(f(-x))) / np.where(np.abs(x) < _ODD_QUOTIENT_EPS, 1.0, 2.0 * x),
    )
