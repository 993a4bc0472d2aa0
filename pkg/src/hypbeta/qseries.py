"""q-Pochhammer symbols, theta functions and basic hypergeometric series.

Everything here assumes a base of modulus strictly less than one.  The
|q| = 1 regime is the business of :mod:`hypbeta.hypgamma` and is rejected
with :class:`~hypbeta.errors.BaseOutOfRange` on sight.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import (
    BaseOutOfRange,
    DivergentSeries,
    DivisionByZeroPole,
    NomeOutOfRange,
    OutsideAnnulus,
    PoleInLowerParams,
)

#: relative threshold below which a product factor is treated as an exact zero
ZERO_FACTOR_EPS = 1e-14

_MAX_TERMS = 200_000


@dataclass(frozen=True)
class QBase:
    """A validated base for q-products and q-series, |q| < 1 strictly."""

    q: complex

    def __post_init__(self):
        if abs(self.q) >= 1.0:
            raise BaseOutOfRange(f"|q| = {abs(self.q)} >= 1")


@dataclass(frozen=True)
class SeriesValue:
    """Value of a truncated product or (bi)lateral series.

    trunc_err is an estimated bound on the omitted tail, not a proof;
    converged means the estimate fell below the requested tolerance.
    """

    value: complex
    terms_used: int
    trunc_err: float
    converged: bool
    warnings: tuple = field(default=())


def _as_q(q) -> complex:
    if isinstance(q, QBase):
        return complex(q.q)
    qc = complex(q)
    if abs(qc) >= 1.0:
        raise BaseOutOfRange(f"|q| = {abs(qc)} >= 1")
    return qc


def _product_length(amax: float, qabs: float, tol: float) -> int:
    """Smallest N with amax * qabs**N < tol/10 (stopping rule for products)."""
    if amax == 0.0 or qabs == 0.0:
        return 1
    target = tol / 10.0
    if amax < target:
        return 1
    n = int(math.ceil((math.log(target) - math.log(amax)) / math.log(qabs)))
    return max(n, 1)


def _geometric_log_tail(amax: float, qabs: float, n: int) -> float:
    # bound on |log of the omitted factors|: sum_{j>=n} a q^j / (1 - a q^j)
    r = amax * qabs**n
    if r >= 1.0:
        return math.inf
    return r / ((1.0 - qabs) * (1.0 - r))


def qpoch_many(a, q, tol: float = 1e-12) -> np.ndarray:
    """(a; q)_infinity for an array of arguments a, plain values only.

    Vectorized workhorse behind qpoch_inf and the identity integrands.
    """
    qc = _as_q(q)
    a = np.asarray(a, dtype=complex)
    amax = float(np.max(np.abs(a))) if a.size else 0.0
    n = _product_length(amax, abs(qc), tol)
    powers = qc ** np.arange(n)
    factors = 1.0 - np.multiply.outer(a, powers)
    small = np.abs(factors) < ZERO_FACTOR_EPS * (1.0 + np.abs(1.0 - factors))
    out = np.prod(factors, axis=-1)
    if np.any(small):
        out = np.where(np.any(small, axis=-1), 0.0, out)
    return out


def qpoch_log_many(a, q, tol: float = 1e-12) -> np.ndarray:
    """Elementwise log of (a; q)_infinity (branch-incoherent across
    factors, exact under exp).  For integrands whose individual
    Pochhammer factors overflow while the assembled product stays finite;
    vanishing factors map to -inf, so exp still yields an exact zero.
    """
    qc = _as_q(q)
    a = np.asarray(a, dtype=complex)
    amax = float(np.max(np.abs(a))) if a.size else 0.0
    n = _product_length(amax, abs(qc), tol)
    powers = qc ** np.arange(n)
    factors = 1.0 - np.multiply.outer(a, powers)
    with np.errstate(divide="ignore"):
        return np.log(factors).sum(axis=-1)


def qpoch_log_logarg(logw, q, tol: float = 1e-12) -> np.ndarray:
    """log of (w; q)_infinity given log w, stable for |w| far beyond
    overflow.  Factors with |w q^j| > e^40 contribute log(-w q^j) + i pi
    analytically (exact under exp); the finite window around |w q^j| = 1
    is evaluated directly; the sub-e^-40 tail is dropped.
    """
    qc = _as_q(q)
    lq = cmath.log(qc)
    logw = np.asarray(logw, dtype=complex)
    re_lq = lq.real
    if re_lq >= 0:  # |q| must be < 1, so this is q == 0
        return np.zeros_like(logw)
    # first factor index inside the |Re log| <= 40 window, elementwise
    j0 = np.maximum(np.ceil((logw.real - 40.0) / (-re_lq)), 0.0)
    head = j0 * (logw + 1j * math.pi) + lq * j0 * (j0 - 1.0) / 2.0
    width = int(math.ceil(80.0 / -re_lq)) + 2
    j = j0[..., None] + np.arange(width)
    m = logw[..., None] + lq * j
    out = np.empty(m.shape, dtype=complex)
    neg = m.real < 0
    with np.errstate(divide="ignore", invalid="ignore"):
        out[neg] = np.log1p(-np.exp(m[neg]))
        big = ~neg
        out[big] = m[big] + 1j * math.pi + np.log1p(-np.exp(-m[big]))
    return head + out.sum(axis=-1)


def qpoch_inf(a, q, tol: float = 1e-12) -> SeriesValue:
    """Infinite q-Pochhammer product prod_{j>=0} (1 - a q^j).

    Truncates once |a q^N| < tol/10 and bounds the tail by the geometric
    series of the log-factors.  A factor vanishing to within machine
    precision short-circuits to an exact zero (identities deliberately
    place zeros at parameter points and tests must see clean zeros).
    """
    qc = _as_q(q)
    ac = complex(a)
    n = _product_length(abs(ac), abs(qc), tol)
    powers = qc ** np.arange(n)
    args = ac * powers
    factors = 1.0 - args
    small = np.abs(factors) < ZERO_FACTOR_EPS * (1.0 + np.abs(args))
    if np.any(small):
        return SeriesValue(0j, int(np.argmax(small)) + 1, 0.0, True)
    value = complex(np.prod(factors))
    tail = _geometric_log_tail(abs(ac), abs(qc), n)
    err = abs(value) * tail if math.isfinite(tail) else math.inf
    return SeriesValue(value, n, err, err <= tol)


def qpoch_ratio(numerators, denominators, q, tol: float = 1e-12) -> complex:
    """prod (n_i; q)_inf / prod (d_j; q)_inf, raising on vanishing denominator."""
    num = 1.0 + 0j
    for a in numerators:
        num *= qpoch_inf(a, q, tol).value
    den = 1.0 + 0j
    for b in denominators:
        v = qpoch_inf(b, q, tol).value
        if v == 0:
            raise DivisionByZeroPole(f"({b}; q)_inf vanishes")
        den *= v
    return num / den


def qpoch_alpha(z, q, alpha, tol: float = 1e-12) -> SeriesValue:
    """(z; q)_alpha = (z; q)_inf / (z q^alpha; q)_inf.

    q^alpha uses the principal logarithm of q.  For nonnegative integer
    alpha this agrees with the finite product prod_{j<alpha} (1 - z q^j).
    """
    qc = _as_q(q)
    zc = complex(z)
    shift = cmath.exp(complex(alpha) * cmath.log(qc)) if qc != 0 else 0j
    num = qpoch_inf(zc, qc, tol)
    den = qpoch_inf(zc * shift, qc, tol)
    if den.value == 0:
        raise DivisionByZeroPole(f"(z q^alpha; q)_inf vanishes at z={zc}, alpha={alpha}")
    err = abs(num.value / den.value) * (num.trunc_err / max(abs(num.value), 1e-300)
                                        + den.trunc_err / max(abs(den.value), 1e-300)) \
        if num.value != 0 else den.trunc_err
    return SeriesValue(num.value / den.value, num.terms_used + den.terms_used,
                       err, num.converged and den.converged)


def _theta_nome(tau) -> complex:
    tauc = complex(tau)
    if tauc.imag <= 0:
        raise NomeOutOfRange(f"Im tau = {tauc.imag} <= 0")
    return cmath.exp(2j * cmath.pi * tauc)


def theta(z, tau, method: str = "series", tol: float = 1e-12) -> SeriesValue:
    """Jacobi theta value sum_m q^{m^2/2} e^{2 pi i m z} with q = e^{2 pi i tau}.

    Both evaluation routes are kept deliberately independent: ``series``
    sums the defining expansion, ``triple_product`` uses the triple
    product factorization, and tests pit one against the other.
    """
    tauc = complex(tau)
    zc = complex(z)
    q = _theta_nome(tauc)
    if method == "series":
        y = tauc.imag
        b = abs(zc.imag)
        # |q^{m^2/2} e^{2 pi i m z}| = exp(-pi y m^2 + 2 pi b m) for the worse sign
        c = math.log(10.0 / tol)
        m_max = int(math.ceil((2 * math.pi * b
                               + math.sqrt((2 * math.pi * b) ** 2 + 4 * math.pi * y * c))
                              / (2 * math.pi * y))) + 2
        m = np.arange(-m_max, m_max + 1)
        terms = np.exp(1j * math.pi * tauc * m**2 + 2j * math.pi * m * zc)
        order = np.argsort(np.abs(terms), kind="stable")  # sum small to large
        value = complex(np.sum(terms[order]))
        edge = max(abs(terms[0]), abs(terms[-1]))
        err = 4.0 * edge
        return SeriesValue(value, 2 * m_max + 1, err, err <= tol)
    if method == "triple_product":
        sq = cmath.exp(1j * cmath.pi * tauc)  # q^{1/2}
        w = cmath.exp(2j * cmath.pi * zc)
        parts = [qpoch_inf(q, q, tol), qpoch_inf(-sq * w, q, tol), qpoch_inf(-sq / w, q, tol)]
        value = parts[0].value * parts[1].value * parts[2].value
        err = sum(p.trunc_err * abs(value) / max(abs(p.value), 1e-300) for p in parts)
        return SeriesValue(value, sum(p.terms_used for p in parts), err,
                           all(p.converged for p in parts))
    raise ValueError(f"unknown theta method {method!r}")


def theta_many(z, tau, tol: float = 1e-12) -> np.ndarray:
    """Triple-product theta over an array of z, plain values only."""
    tauc = complex(tau)
    q = _theta_nome(tauc)
    sq = cmath.exp(1j * cmath.pi * tauc)
    w = np.exp(2j * np.pi * np.asarray(z, dtype=complex))
    return (qpoch_inf(q, q, tol).value
            * qpoch_many(-sq * w, q, tol)
            * qpoch_many(-sq / w, q, tol))


def dedekind_eta(sigma, tol: float = 1e-12) -> complex:
    """eta(sigma) = e^{pi i sigma / 12} (p; p)_inf with p = e^{2 pi i sigma}."""
    sc = complex(sigma)
    if sc.imag <= 0:
        raise NomeOutOfRange(f"Im sigma = {sc.imag} <= 0")
    p = cmath.exp(2j * cmath.pi * sc)
    return cmath.exp(1j * cmath.pi * sc / 12.0) * qpoch_inf(p, p, tol).value


def _sum_with_tail(terms: list, ratio_hint: float, tol: float, warnings: tuple) -> SeriesValue:
    value = complex(sum(terms))
    last = abs(terms[-1]) if terms else 0.0
    rho = min(max(ratio_hint, 0.0), 0.999)
    err = last * rho / (1.0 - rho) + last
    return SeriesValue(value, len(terms), err, err <= tol * max(1.0, abs(value)), warnings)


def phi_series(upper, lower, q, z, tol: float = 1e-12) -> SeriesValue:
    """Unilateral basic hypergeometric sum over m >= 0 of
    prod (a_i; q)_m / [(q; q)_m prod (b_j; q)_m] z^m.

    Terminating series (an upper parameter of the form q^{-n}) are summed
    exactly; otherwise |z| < 1 is required.
    """
    qc = _as_q(q)
    zc = complex(z)
    upper = [complex(a) for a in upper]
    lower = [complex(b) for b in lower]
    terms = [1.0 + 0j]
    t = 1.0 + 0j
    small_run = 0
    warnings = ()
    if abs(zc) > 0.95:
        warnings = ("SlowConvergence: |z| > 0.95",)
    for m in range(_MAX_TERMS):
        num = zc
        terminated = False
        for a in upper:
            f = 1.0 - a * qc**m
            if abs(f) < ZERO_FACTOR_EPS * (1.0 + abs(a * qc**m)):
                terminated = True
            num *= f
        if terminated:
            return SeriesValue(complex(sum(terms)), len(terms), 0.0, True, warnings)
        den = 1.0 - qc ** (m + 1)
        for b in lower:
            f = 1.0 - b * qc**m
            if abs(f) < ZERO_FACTOR_EPS * (1.0 + abs(b * qc**m)):
                raise PoleInLowerParams(f"lower parameter {b} hits q^-{m}")
            den *= f
        t *= num / den
        terms.append(t)
        if abs(zc) >= 1.0:
            if m > 10_000:
                raise DivergentSeries(f"|z| = {abs(zc)} >= 1 and series does not terminate")
            continue
        if abs(t) <= tol * max(1.0, abs(complex(sum(terms)))) / 10.0:
            small_run += 1
            if small_run >= 3:
                return _sum_with_tail(terms, abs(zc), tol, warnings)
        else:
            small_run = 0
    raise DivergentSeries("series did not converge within the term budget")


def w8_7(a1, rest, q, z, tol: float = 1e-12) -> SeriesValue:
    """Very-well-poised 8W7 sum:
    sum_m [(1 - a1 q^{2m}) / (1 - a1)] *
          [(a1, a4..a8; q)_m / (q, q a1/a4, .., q a1/a8; q)_m] z^m.
    """
    qc = _as_q(q)
    zc = complex(z)
    a1 = complex(a1)
    rest = [complex(a) for a in rest]
    if len(rest) != 5:
        raise ValueError("w8_7 expects exactly five parameters a4..a8")
    if abs(1.0 - a1) < ZERO_FACTOR_EPS:
        raise PoleInLowerParams("a1 = 1 makes the well-poised factor singular")
    upper = [a1] + rest
    lower = [qc * a1 / a for a in rest]
    terms = [1.0 + 0j]
    t = 1.0 + 0j  # running value of the plain Pochhammer quotient times z^m
    small_run = 0
    for m in range(_MAX_TERMS):
        num = zc
        terminated = False
        for a in upper:
            f = 1.0 - a * qc**m
            if abs(f) < ZERO_FACTOR_EPS * (1.0 + abs(a * qc**m)):
                terminated = True
            num *= f
        if terminated:
            return SeriesValue(complex(sum(terms)), len(terms), 0.0, True)
        den = 1.0 - qc ** (m + 1)
        for b in lower:
            f = 1.0 - b * qc**m
            if abs(f) < ZERO_FACTOR_EPS * (1.0 + abs(b * qc**m)):
                raise PoleInLowerParams(f"lower parameter {b} hits q^-{m}")
            den *= f
        t *= num / den
        wp = (1.0 - a1 * qc ** (2 * (m + 1))) / (1.0 - a1)
        terms.append(wp * t)
        if abs(zc) >= 1.0:
            if m > 10_000:
                raise DivergentSeries(f"|z| = {abs(zc)} >= 1 and series does not terminate")
            continue
        if abs(terms[-1]) <= tol * max(1.0, abs(complex(sum(terms)))) / 10.0:
            small_run += 1
            if small_run >= 3:
                return _sum_with_tail(terms, abs(zc), tol, ())
        else:
            small_run = 0
    raise DivergentSeries("series did not converge within the term budget")


def bilateral_psi(upper, lower, q, z, tol: float = 1e-12) -> SeriesValue:
    """Bilateral r-psi-r sum over all integers m of
    prod (a_i; q)_m / prod (b_j; q)_m z^m.

    Convergence annulus: |b1..br / (a1..ar)| < |z| < 1.  Each side of the
    sum stops after five consecutive terms below threshold, which guards
    against lone accidentally-small terms.
    """
    qc = _as_q(q)
    zc = complex(z)
    upper = [complex(a) for a in upper]
    lower = [complex(b) for b in lower]
    if len(upper) != len(lower):
        raise ValueError("bilateral series needs equally many upper and lower parameters")
    if zc == 0:
        # z -> 0 limit convention: only the m = 0 term survives
        return SeriesValue(1.0 + 0j, 1, 0.0, True, ("z=0 limit convention",))
    prod_a = math.prod(abs(a) for a in upper) if upper else 1.0
    prod_b = math.prod(abs(b) for b in lower) if lower else 1.0
    inner = prod_b / prod_a if prod_a > 0 else math.inf
    if abs(zc) >= 1.0:
        raise OutsideAnnulus(f"|z| = {abs(zc)} >= 1")
    if inner >= abs(zc):
        raise OutsideAnnulus(
            f"|b1..br/(a1..ar)| = {inner} >= |z| = {abs(zc)}")
    warnings = ()
    if abs(zc) > 0.95 or inner / abs(zc) > 0.95:
        warnings = ("SlowConvergence: argument near the annulus boundary",)

    def zero_factor(x):
        return abs(x) < ZERO_FACTOR_EPS

    terms = [1.0 + 0j]
    # upward side m = 1, 2, ...
    t = 1.0 + 0j
    small_run = 0
    up_used = 0
    for m in range(_MAX_TERMS):
        num = zc
        for a in upper:
            num *= 1.0 - a * qc**m
        den = 1.0 + 0j
        for b in lower:
            f = 1.0 - b * qc**m
            if zero_factor(f):
                raise PoleInLowerParams(f"lower parameter {b} hits q^-{m}")
            den *= f
        t *= num / den
        terms.append(t)
        up_used += 1
        if abs(t) <= tol * max(1.0, abs(complex(sum(terms)))) / 10.0:
            small_run += 1
            if small_run >= 5:
                break
        else:
            small_run = 0
    else:
        raise DivergentSeries("upward bilateral side did not settle")
    # downward side m = -1, -2, ...
    t = 1.0 + 0j
    small_run = 0
    down_used = 0
    for m in range(0, -_MAX_TERMS, -1):
        num = 1.0 + 0j
        for b in lower:
            num *= 1.0 - b * qc ** (m - 1)
        den = zc
        for a in upper:
            f = 1.0 - a * qc ** (m - 1)
            if zero_factor(f):
                raise PoleInLowerParams(f"upper parameter {a} hits q^{m - 1}")
            den *= f
        t *= num / den
        terms.append(t)
        down_used += 1
        if abs(t) <= tol * max(1.0, abs(complex(sum(terms)))) / 10.0:
            small_run += 1
            if small_run >= 5:
                break
        else:
            small_run = 0
    else:
        raise DivergentSeries("downward bilateral side did not settle")
    order = np.argsort(np.abs(terms), kind="stable")
    value = complex(np.sum(np.asarray(terms, dtype=complex)[order]))
    rho = max(abs(zc), inner / abs(zc))
    last = max(abs(terms[up_used]), abs(terms[-1]))
    err = last * (rho / (1.0 - rho) + 1.0)
    return SeriesValue(value, 1 + up_used + down_used, err,
                       err <= tol * max(1.0, abs(value)), warnings)
