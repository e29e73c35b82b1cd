"""Truncated bivariate power series in z and u with exact rational coefficients.

Series are exponential in z where the combinatorics asks for it, but the
container itself is plain: ``coeffs[n]`` is the polynomial in u multiplying
z^n, stored low degree first.  Used to get the fixed-point distributions of
the shuffle for finite n and to evaluate their limiting laws.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .errors import CapExceeded
from .oracle import Mode

__all__ = [
    "BivariateSeries",
    "LimitDistribution",
    "Z_MAX",
    "connected_series",
    "convergence_error",
    "distribution_to_json",
    "limit_coefficients",
    "limit_distribution",
    "poly_eval",
    "qn_all",
    "qn_exact",
    "series_exp",
    "series_mul",
    "standard_series",
]

Z_MAX = 60
U_MAX = 200

Poly = tuple[Fraction, ...]


def _trim(p: Sequence[Fraction]) -> Poly:
    p = list(p)
    while p and p[-1] == 0:
        p.pop()
    return tuple(p)


def _padd(p: Poly, q: Poly, sign: int = 1) -> Poly:
    out = list(p) + [Fraction(0)] * max(0, len(q) - len(p))
    for i, c in enumerate(q):
        out[i] += sign * c
    return _trim(out)


def _pmul(p: Poly, q: Poly) -> Poly:
    if not p or not q:
        return ()
    out = [Fraction(0)] * (len(p) + len(q) - 1)
    for i, a in enumerate(p):
        if a:
            for j, b in enumerate(q):
                out[i + j] += a * b
    return _trim(out)


@dataclass(frozen=True)
class BivariateSeries:
    coeffs: tuple[Poly, ...]
    u_max: int = U_MAX

    def __post_init__(self):
        cs = tuple(_trim(Fraction(c) for c in p) for p in self.coeffs)
        for n, p in enumerate(cs):
            if len(p) - 1 > self.u_max:
                raise OverflowError(f"u-degree {len(p) - 1} at z^{n} exceeds {self.u_max}")
        object.__setattr__(self, "coeffs", cs)

    @property
    def z_order(self) -> int:
        return len(self.coeffs) - 1

    @classmethod
    def univariate(cls, values: Sequence, u_max: int = U_MAX) -> BivariateSeries:
        return cls(tuple((Fraction(v),) for v in values), u_max)

    @classmethod
    def constant(cls, value, z_order: int = Z_MAX) -> BivariateSeries:
        return cls(((Fraction(value),),) + ((),) * z_order)

    def coefficient(self, n: int) -> Poly:
        return self.coeffs[n] if n <= self.z_order else ()

    def truncate(self, z_order: int) -> BivariateSeries:
        return BivariateSeries(self.coeffs[: z_order + 1], self.u_max)

    def _align(self, other: BivariateSeries) -> int:
        return min(self.z_order, other.z_order)

    def __add__(self, other: BivariateSeries) -> BivariateSeries:
        z = self._align(other)
        return BivariateSeries(tuple(_padd(self.coeffs[n], other.coeffs[n]) for n in range(z + 1)),
                               max(self.u_max, other.u_max))

    def __sub__(self, other: BivariateSeries) -> BivariateSeries:
        z = self._align(other)
        return BivariateSeries(tuple(_padd(self.coeffs[n], other.coeffs[n], -1) for n in range(z + 1)),
                               max(self.u_max, other.u_max))

    def __mul__(self, other: BivariateSeries) -> BivariateSeries:
        return series_mul(self, other)

    def scale(self, c) -> BivariateSeries:
        c = Fraction(c)
        return BivariateSeries(tuple(tuple(c * x for x in p) for p in self.coeffs), self.u_max)

    def shift(self, k: int = 1) -> BivariateSeries:
        """Multiply by z^k, keeping the truncation order."""
        return BivariateSeries((((),) * k + self.coeffs)[: self.z_order + 1], self.u_max)

    def at_u(self, u) -> BivariateSeries:
        """Substitute a value for u, giving a series in z alone."""
        u = Fraction(u)
        return BivariateSeries.univariate(
            [sum((c * u ** i for i, c in enumerate(p)), Fraction(0)) for p in self.coeffs], self.u_max)

    def shift_u(self, k: int = 1) -> BivariateSeries:
        """Multiply by u^k."""
        return BivariateSeries(tuple(((Fraction(0),) * k + p) if p else () for p in self.coeffs), self.u_max)

    def is_zero(self) -> bool:
        return all(not p for p in self.coeffs)


def series_mul(f: BivariateSeries, g: BivariateSeries) -> BivariateSeries:
    z = min(f.z_order, g.z_order)
    out = []
    for n in range(z + 1):
        acc: Poly = ()
        for k in range(n + 1):
            if f.coeffs[k] and g.coeffs[n - k]:
                acc = _padd(acc, _pmul(f.coeffs[k], g.coeffs[n - k]))
        out.append(acc)
    u = max(f.u_max, g.u_max)
    if any(len(p) - 1 > u for p in out):
        raise OverflowError("product exceeds the u-degree bound")
    return BivariateSeries(tuple(out), u)


def series_exp(f: BivariateSeries) -> BivariateSeries:
    """exp(f) for f without z-constant term, via n g_n = sum_k k f_k g_{n-k}."""
    if f.coeffs and f.coeffs[0]:
        raise ValueError("exp needs a vanishing constant term in z")
    g: list[Poly] = [(Fraction(1),)]
    for n in range(1, f.z_order + 1):
        acc: Poly = ()
        for k in range(1, n + 1):
            if f.coeffs[k] and g[n - k]:
                acc = _padd(acc, tuple(k * c for c in _pmul(f.coeffs[k], g[n - k])))
        if len(acc) - 1 > f.u_max:
            raise OverflowError("exp exceeds the u-degree bound")
        g.append(tuple(c / n for c in acc))
    return BivariateSeries(tuple(g), f.u_max)


def _pow0(a: int, b: int) -> int:
    return 1 if b == 0 else a ** b  # 0^0 = 1


def standard_series(name: str, z_max: int = Z_MAX) -> BivariateSeries:
    """The tree function t(z) and its companions, by explicit coefficients."""
    rng = range(z_max + 1)
    f = math.factorial
    if name == "t":
        vals = [Fraction(0)] + [Fraction(n ** (n - 1), f(n)) for n in rng if n]
    elif name == "z_over_t":
        vals = [Fraction(1)] + [-Fraction(_pow0(n - 1, n - 1), f(n)) for n in rng if n]
    elif name in ("one_over_one_minus_t", "U"):
        vals = [Fraction(_pow0(n, n), f(n)) for n in rng]
    elif name == "Ubar":
        vals = [Fraction(1)] * (z_max + 1)
    else:
        raise KeyError(f"unknown series {name!r}")
    return BivariateSeries.univariate(vals)


def _monomial(n: int, k: int, c, z_max: int) -> BivariateSeries:
    coeffs = [()] * (z_max + 1)
    if n <= z_max:
        coeffs[n] = tuple([Fraction(0)] * k + [Fraction(c)])
    return BivariateSeries(tuple(coeffs))


def connected_series(mode: Mode, z_max: int = Z_MAX) -> BivariateSeries:
    """T(z,u): connected components, z marking size (exponentially), u fixed points.

    Terms without u are dropped; only T(z,u) - T(z,1) is ever used.
    """
    mode = Mode(mode)
    base = _monomial(1, 1, 1, z_max) + _monomial(2, 2, Fraction(1, 2), z_max)
    z = _monomial(1, 0, 1, z_max)
    z2 = _monomial(2, 0, 1, z_max)
    if mode is Mode.UNIFORM:
        zt = standard_series("z_over_t", z_max)
        rest = BivariateSeries.constant(2, z_max) - zt.scale(2) - z.scale(2) - z2
    else:
        ez = series_exp(z)
        rest = (ez - BivariateSeries.constant(1, z_max) - z - z2.scale(Fraction(1, 2))).scale(2)
    return base + rest.shift_u()


def _fixed_point_series(mode: Mode, z_max: int) -> tuple[BivariateSeries, BivariateSeries]:
    T = connected_series(mode, z_max)
    U = standard_series("U" if mode is Mode.UNIFORM else "Ubar", z_max)
    return series_mul(U, series_exp(T - T.at_u(1))), U


def _normalize(n: int, top: Poly, norm: Fraction) -> tuple[Fraction, ...]:
    probs = [c / norm for c in top] + [Fraction(0)] * (n + 1 - len(top))
    if any(p < 0 for p in probs) or sum(probs) != 1:
        raise AssertionError(f"q_{n} is not a probability distribution: {probs}")
    return tuple(probs)


def qn_exact(n: int, mode: Mode = Mode.UNIFORM, z_max: int = Z_MAX) -> tuple[Fraction, ...]:
    """Exact P(k fixed points) for k = 0..n after the n-step shuffle."""
    mode = Mode(mode)
    if n < 0:
        raise ValueError("n must be nonnegative")
    if n > z_max:
        raise CapExceeded(f"n={n} exceeds the truncation order {z_max}")
    full, U = _fixed_point_series(mode, n)
    return _normalize(n, full.coefficient(n), U.coefficient(n)[0])


def qn_all(mode: Mode = Mode.UNIFORM, z_max: int = Z_MAX) -> list[tuple[Fraction, ...]]:
    """q_0 .. q_{z_max} from a single series product."""
    full, U = _fixed_point_series(Mode(mode), z_max)
    return [_normalize(n, full.coefficient(n), U.coefficient(n)[0]) for n in range(z_max + 1)]


@dataclass(frozen=True)
class LimitDistribution:
    mode: Mode
    a: float
    b: float
    c: float
    pk: tuple[float, ...]

    def q(self, u: float) -> float:
        return math.exp(self.a * u * u + self.b * u + self.c)


def limit_coefficients(mode: Mode) -> tuple[float, float, float]:
    """(a, b, c) with the limiting generating function exp(a u^2 + b u + c)."""
    e = math.e
    if Mode(mode) is Mode.UNIFORM:
        # (u - 1)(u e^-2 + r) / 2 with r = 4 - 6/e - e^-2
        r = 4 - 6 / e - e ** -2
        return e ** -2 / 2, (r - e ** -2) / 2, -r / 2
    # (u - 1)(u + 4e - 7) / 2
    return 0.5, (4 * e - 8) / 2, (7 - 4 * e) / 2


def limit_distribution(mode: Mode, K: int) -> LimitDistribution:
    if K < 0:
        raise ValueError("K must be nonnegative")
    mode = Mode(mode)
    a, b, c = limit_coefficients(mode)
    ec = math.exp(c)
    pk = []
    for k in range(K + 1):
        s = sum(a ** j * b ** (k - 2 * j) / (math.factorial(j) * math.factorial(k - 2 * j))
                for j in range(k // 2 + 1))
        pk.append(ec * s)
    if min(pk) < 0 or sum(pk) > 1 + 1e-12:
        raise AssertionError("limit probabilities out of range")
    return LimitDistribution(mode, a, b, c, tuple(pk))


def poly_eval(p: Sequence, u) -> Fraction | float:
    return sum(c * u ** k for k, c in enumerate(p))


def convergence_error(n: int, mode: Mode) -> float:
    """max over u in {0, 1/2, 1} of |q_n(u) - q(u)|."""
    qn = qn_exact(n, mode, max(Z_MAX, n))
    lim = limit_distribution(mode, 0)
    return max(abs(float(poly_eval(qn, Fraction(u))) - lim.q(u)) for u in (0, 0.5, 1))


def distribution_to_json(probs: Sequence) -> str:
    """[{k, p}], exact rationals as "num/den" strings and floats as decimals."""
    rows = []
    for k, p in enumerate(probs):
        if isinstance(p, Fraction):
            rows.append({"k": k, "p": f"{p.numerator}/{p.denominator}"})
        else:
            rows.append({"k": k, "p": float(p)})
    return json.dumps(rows)
