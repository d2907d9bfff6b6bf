"""Truncated Laurent q-expansions with rational exponents.

A QSeries is a finite sum of terms c * q^e with exact rational coefficients
and exponents, q = exp(2*pi*i*tau), valid for exponents below a tracked
precision bound.  The width h records that all exponents lie in a coset of
(1/h)Z, i.e. the series is a Laurent expansion in q^(1/h) up to a prefactor.
"""

from __future__ import annotations

import cmath
import functools
from fractions import Fraction
from math import lcm
from typing import Union

from .errors import OracleMismatch, PrecisionLoss

DEFAULT_ORDER = 60

Scalar = Union[int, Fraction]


class QSeries:
    """Immutable truncated series sum(c_e * q^e) with rational data."""

    def __init__(self, coeffs: dict, prec: Fraction, h: int | None = None):
        self.prec = Fraction(prec)
        self.coeffs = {
            Fraction(e): Fraction(c)
            for e, c in coeffs.items()
            if c != 0 and Fraction(e) < self.prec
        }
        if h is None:
            h = 1
            exps = sorted(self.coeffs)
            for e in exps[1:]:
                h = lcm(h, (e - exps[0]).denominator)
        self.h = h

    @classmethod
    def constant(cls, value: Scalar, prec: Fraction = Fraction(10**6)) -> "QSeries":
        return cls({Fraction(0): Fraction(value)}, prec)

    @property
    def valuation(self) -> Fraction:
        if not self.coeffs:
            return self.prec
        return min(self.coeffs)

    @property
    def offset(self) -> Fraction:
        return self.valuation

    def coefficient(self, e) -> Fraction:
        e = Fraction(e)
        if e >= self.prec:
            raise PrecisionLoss(f"coefficient at q^{e} is beyond precision {self.prec}")
        return self.coeffs.get(e, Fraction(0))

    def truncate(self, prec) -> "QSeries":
        return QSeries(self.coeffs, min(self.prec, Fraction(prec)), self.h)

    def scale_tau(self, r: Scalar) -> "QSeries":
        """The series of tau -> f(r*tau): exponents and precision scale by r."""
        r = Fraction(r)
        if r <= 0:
            raise ValueError("scale factor must be positive")
        return QSeries({e * r: c for e, c in self.coeffs.items()}, self.prec * r)

    def __neg__(self) -> "QSeries":
        return QSeries({e: -c for e, c in self.coeffs.items()}, self.prec, self.h)

    def __add__(self, other) -> "QSeries":
        if isinstance(other, (int, Fraction)):
            other = QSeries.constant(other)
        out = dict(self.coeffs)
        for e, c in other.coeffs.items():
            out[e] = out.get(e, Fraction(0)) + c
        return QSeries(out, min(self.prec, other.prec))

    __radd__ = __add__

    def __sub__(self, other) -> "QSeries":
        return self + (-other if isinstance(other, QSeries) else QSeries.constant(-Fraction(other)))

    def __rsub__(self, other) -> "QSeries":
        return (-self) + other

    def __mul__(self, other) -> "QSeries":
        if isinstance(other, (int, Fraction)):
            return QSeries(
                {e: c * other for e, c in self.coeffs.items()}, self.prec, self.h
            )
        prec = min(self.prec + other.valuation, other.prec + self.valuation)
        out: dict[Fraction, Fraction] = {}
        for e1, c1 in self.coeffs.items():
            for e2, c2 in other.coeffs.items():
                e = e1 + e2
                if e < prec:
                    out[e] = out.get(e, Fraction(0)) + c1 * c2
        return QSeries(out, prec)

    __rmul__ = __mul__

    def inverse(self) -> "QSeries":
        """Multiplicative inverse; requires a nonzero leading coefficient."""
        if not self.coeffs:
            raise ZeroDivisionError("cannot invert a series with no known terms")
        v = self.valuation
        c0 = self.coeffs[v]
        rel_prec = self.prec - v
        # index exponents on the (1/h)Z lattice and use the convolution
        # recurrence b_n = -(sum_{k>=1} a_k b_{n-k}) / a_0
        h = self.h
        n_terms = int(rel_prec * h)
        if rel_prec * h > n_terms:
            n_terms += 1
        a = [Fraction(0)] * n_terms
        for e, c in self.coeffs.items():
            n = (e - v) * h
            if n < n_terms:
                a[int(n)] = c
        b = [Fraction(0)] * n_terms
        if n_terms:
            b[0] = 1 / c0
        for n in range(1, n_terms):
            acc = sum((a[k] * b[n - k] for k in range(1, n + 1) if a[k]), Fraction(0))
            b[n] = -acc / c0
        return QSeries(
            {Fraction(n, h) - v: c for n, c in enumerate(b) if c}, rel_prec - v, h
        )

    def __pow__(self, n: int) -> "QSeries":
        if n < 0:
            return self.inverse() ** (-n)
        result = QSeries.constant(1, self.prec - self.valuation * (n - 1) if n else self.prec)
        base = self
        while n:
            if n & 1:
                result = result * base
            if n > 1:
                base = base * base
            n >>= 1
        return result

    def __eq__(self, other) -> bool:
        if not isinstance(other, QSeries):
            return NotImplemented
        prec = min(self.prec, other.prec)
        a = {e: c for e, c in self.coeffs.items() if e < prec}
        b = {e: c for e, c in other.coeffs.items() if e < prec}
        return a == b

    __hash__ = None

    def evaluate(self, tau: complex, tol: float = 1e-10) -> complex:
        """Numeric value at a point of the upper half plane.

        The first omitted term is estimated by max(1, |coeffs|) * |q|^prec;
        the evaluation is refused when that estimate is not comfortably below
        the tolerance.
        """
        tau = complex(tau)
        if tau.imag <= 0:
            raise ValueError("tau must lie in the upper half plane")
        growth = max((abs(float(c)) for c in self.coeffs.values()), default=1.0)
        tail = max(1.0, growth) * cmath.exp(
            -2 * cmath.pi * tau.imag * float(self.prec)
        ).real
        if tail * 1e3 > tol:
            raise PrecisionLoss(
                f"truncation error ~{tail:.2e} at Im tau = {tau.imag} "
                f"exceeds tolerance {tol} (order too low)"
            )
        return sum(
            float(c) * cmath.exp(2j * cmath.pi * float(e) * tau)
            for e, c in sorted(self.coeffs.items())
        )

    def __repr__(self):
        terms = sorted(self.coeffs.items())[:6]
        body = " + ".join(f"{c}*q^({e})" for e, c in terms)
        return f"QSeries({body}{' + ...' if len(self.coeffs) > 6 else ''}; prec {self.prec})"


@functools.lru_cache(maxsize=None)
def eta_expansion(order: int = DEFAULT_ORDER) -> QSeries:
    """Dedekind eta: q^(1/24) * prod(1 - q^n), the product expanded by the
    pentagonal number theorem (coefficients +-1 at k(3k-1)/2)."""
    if order < 1:
        raise ValueError("order must be at least 1")
    coeffs = {}
    k = 0
    while True:
        done = True
        for kk in (k, -k) if k else (0,):
            e = kk * (3 * kk - 1) // 2
            if e <= order:
                coeffs[Fraction(e) + Fraction(1, 24)] = Fraction((-1) ** (kk % 2))
                done = False
        if done:
            break
        k += 1
    return QSeries(coeffs, Fraction(order) + Fraction(1, 24))


def eta_quotient(parts: list[tuple[Scalar, int]], order: int = DEFAULT_ORDER) -> QSeries:
    """prod over (m, r) of eta(m*tau)^r, with exponents known up to `order`
    whole powers of q past the leading exponent (order*h series terms)."""
    if not parts:
        return QSeries.constant(1, Fraction(order))
    valuation = sum(Fraction(m) * r / 24 for m, r in parts)
    target = valuation + order
    out = QSeries.constant(1, Fraction(10**6))
    for m, r in parts:
        m = Fraction(m)
        # factor valuation m*r/24; give each factor enough absolute precision
        need = target - valuation + abs(m * r) / 24 + 1
        base_order = max(1, int(need / m) + 2)
        out = out * (eta_expansion(base_order).scale_tau(m) ** r)
    return out.truncate(target)


@functools.lru_cache(maxsize=None)
def delta_power(w: int, order: int = DEFAULT_ORDER) -> QSeries:
    """The weight-w scaling series eta^(2w) (= Delta^(w/12)); w must be even."""
    if w % 2:
        raise ValueError("weight must be even")
    if w == 0:
        return QSeries.constant(1, Fraction(order))
    return eta_quotient([(1, 2 * w)], order)


# Leading coefficients pinned from the classical expansions; the eta-quotient
# oracles must reproduce them exactly or the constructors refuse to extend.
_HAUPT_WIDTH1_PINNED = {
    Fraction(-1): Fraction(-1, 64),
    Fraction(0): Fraction(24, 64),
    Fraction(1): Fraction(-276, 64),
    Fraction(2): Fraction(2048, 64),
}
_HAUPT_WIDTH2_PINNED = {
    Fraction(-1, 2): Fraction(-1, 16),
    Fraction(0): Fraction(8, 16),
    Fraction(1, 2): Fraction(-20, 16),
    Fraction(1): Fraction(0),
    Fraction(3, 2): Fraction(62, 16),
    Fraction(2): Fraction(0),
    Fraction(5, 2): Fraction(-216, 16),
}


@functools.lru_cache(maxsize=None)
def hauptmodul_gamma0_2(order: int = DEFAULT_ORDER) -> QSeries:
    """Width-1 hauptmodul -1/64 (q^-1 - 24 + 276q - 2048q^2 + ...), computed
    as -1/64 * eta(tau)^24 / eta(2*tau)^24."""
    series = eta_quotient([(1, 24), (2, -24)], order) * Fraction(-1, 64)
    for e, c in _HAUPT_WIDTH1_PINNED.items():
        if series.coefficient(e) != c:
            raise OracleMismatch(
                f"width-1 hauptmodul oracle disagrees at q^{e}: "
                f"{series.coefficient(e)} != {c}"
            )
    return series


@functools.lru_cache(maxsize=None)
def modular_lambda(order: int = DEFAULT_ORDER) -> QSeries:
    """The width-2 level-two modular function
    16 * eta(tau/2)^8 * eta(2*tau)^16 / eta(tau)^24 = 16q^(1/2) - 128q + ..."""
    return eta_quotient([(Fraction(1, 2), 8), (2, 16), (1, -24)], order) * 16


@functools.lru_cache(maxsize=None)
def hauptmodul_gamma2(order: int = DEFAULT_ORDER) -> QSeries:
    """Width-2 hauptmodul -1/16 (q~^-1 - 8 + 20q~ - 62q~^3 + 216q~^5 + ...)
    in q~ = q^(1/2).

    Extended past the pinned coefficients as alpha + beta/lambda, with alpha
    and beta fitted to the two leading pinned coefficients and every other
    pinned coefficient required to agree.  If the fit fails, only the pinned
    coefficients are returned (order capped at 5).
    """
    linv = modular_lambda(max(order, 4) + 2).inverse()
    alpha, beta = _gamma2_fit()
    series = (linv * beta + alpha).truncate(Fraction(-1, 2) + order)
    for e, c in _HAUPT_WIDTH2_PINNED.items():
        if series.coefficient(e) != c:
            if order > 5:
                raise OracleMismatch(
                    f"width-2 hauptmodul oracle disagrees at q^{e}: "
                    f"{series.coefficient(e)} != {c}"
                )
            return QSeries(_HAUPT_WIDTH2_PINNED, Fraction(5, 2) + Fraction(1, 2))
    return series


def evaluate(f: QSeries, tau: complex, tol: float = 1e-10) -> complex:
    return f.evaluate(tau, tol)


# ---------------------------------------------------------------------------
# Direct numeric evaluation through eta products.
#
# A dense Laurent expansion of a function with a pole at the cusp has
# coefficients growing like exp(c*sqrt(n)), so summing it low in the upper
# half plane loses accuracy no matter the truncation order.  The eta factors
# themselves are sparse (exponents quadratic in the term index), so products
# and quotients of eta values converge geometrically everywhere; the value
# functions below are the evaluators of choice for modular forms built from
# eta quotients.
# ---------------------------------------------------------------------------


def eta_value(tau: complex, scale: Scalar = 1) -> complex:
    """eta(scale*tau) by the pentagonal number series, to machine precision."""
    z = complex(tau) * float(Fraction(scale))
    if z.imag <= 0:
        raise ValueError("tau must lie in the upper half plane")
    q = cmath.exp(2j * cmath.pi * z)
    total = 1.0 + 0j
    k = 1
    while True:
        e1 = k * (3 * k - 1) // 2
        e2 = k * (3 * k + 1) // 2
        term = (-1) ** (k % 2) * (q ** e1 + q ** e2)
        total += term
        if abs(q) ** e1 < 1e-19:
            break
        k += 1
    return cmath.exp(2j * cmath.pi * z / 24) * total


def eta_quotient_value(parts: list[tuple[Scalar, int]], tau: complex) -> complex:
    out = 1.0 + 0j
    for m, r in parts:
        out *= eta_value(tau, m) ** r
    return out


def modular_lambda_value(tau: complex) -> complex:
    return 16 * eta_quotient_value([(Fraction(1, 2), 8), (2, 16), (1, -24)], tau)


@functools.lru_cache(maxsize=1)
def _gamma2_fit() -> tuple[Fraction, Fraction]:
    """Constants (alpha, beta) with the width-2 hauptmodul = alpha + beta/lambda."""
    linv = modular_lambda(6).inverse()
    beta = _HAUPT_WIDTH2_PINNED[Fraction(-1, 2)] / linv.coefficient(Fraction(-1, 2))
    alpha = _HAUPT_WIDTH2_PINNED[Fraction(0)] - beta * linv.coefficient(Fraction(0))
    return alpha, beta


def hauptmodul_gamma0_2_value(tau: complex) -> complex:
    return -eta_quotient_value([(1, 24), (2, -24)], tau) / 64


def hauptmodul_gamma2_value(tau: complex) -> complex:
    alpha, beta = _gamma2_fit()
    return float(alpha) + float(beta) / modular_lambda_value(tau)


def delta_power_value(w: int, tau: complex) -> complex:
    if w % 2:
        raise ValueError("weight must be even")
    return eta_value(tau) ** (2 * w)
