"""Bilateral summation identities: Jacobi inversion, the Ramanujan 1psi1,
Bailey's 6psi6, the weak 8psi8 with its two constants, the key lemma
closed form, and Askey-Wilson polynomial evaluation/orthogonality.

The folded bilateral sums phi+(z) = sum_m phi~(z + m) are evaluated
through the term-ratio recurrence phi~(u + 1) = t(u) phi~(u) rather than
from scratch per term: the individual q-Pochhammer factors at large |m|
overflow long before the (bounded) terms do, while the ratios stay O(1).
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from . import qseries
from .errors import (
    AtPole,
    DivergentSeries,
    DomainViolation,
    NomeOutOfRange,
    ParameterOutOfRange,
)
from .hypgamma import TauParameter
from .quadrature import Contour, integrate_line

_MAX_BILATERAL = 100_000


def sqrt_neg_i_tau(tau) -> complex:
    """Principal branch of sqrt(-i tau), positive on the nonnegative reals;
    every closed-form constant in this package uses this branch."""
    return cmath.sqrt(-1j * complex(tau))


def as_trig_tau(tau) -> TauParameter:
    if isinstance(tau, TauParameter):
        if tau.tau.imag <= 0:
            raise NomeOutOfRange(f"Im tau = {tau.tau.imag} <= 0")
        return tau
    tauc = complex(tau)
    if tauc.imag <= 0:
        raise NomeOutOfRange(f"Im tau = {tauc.imag} <= 0")
    return TauParameter(tauc, regime="trigonometric")


def theta_neg_inv_tau(z, tp: TauParameter, tol: float = 1e-12) -> complex:
    """theta_{-1/tau}(z), the one-periodic side of every folded sum."""
    return qseries.theta(z, -1.0 / tp.tau, "triple_product", tol).value


def _phi_plus(phi0: complex, ratio, z: complex, tol: float) -> complex:
    """sum_m phi~(z + m) from the base value phi~(z) and the step ratio.

    Stops each side after five consecutive terms below threshold.  A
    near-vanishing ratio denominator means a pole translate was hit.
    """
    total = phi0
    t = phi0
    small = 0
    for m in range(_MAX_BILATERAL):
        r = ratio(z + m)
        t = t * r
        total += t
        if abs(t) <= tol * max(1.0, abs(total)) / 10.0:
            small += 1
            if small >= 5:
                break
        else:
            small = 0
    else:
        raise DivergentSeries("upward bilateral side did not settle")
    t = phi0
    small = 0
    for m in range(0, -_MAX_BILATERAL, -1):
        r = ratio(z + m - 1)
        if abs(r) < 1e-250:
            raise AtPole(f"pole translate hit at m = {m - 1}", nearest=z + m - 1)
        t = t / r
        total += t
        if abs(t) <= tol * max(1.0, abs(total)) / 10.0:
            small += 1
            if small >= 5:
                break
        else:
            small = 0
    else:
        raise DivergentSeries("downward bilateral side did not settle")
    return total


# ---------------------------------------------------------------------------
# Jacobi inversion
# ---------------------------------------------------------------------------

def jacobi_inversion_residual(z, tau, tol: float = 1e-12) -> float:
    """| sum_m q^{(z+m)^2/2} - theta_{-1/tau}(z) / sqrt(-i tau) |."""
    tp = as_trig_tau(tau)
    zc = complex(z)
    total = tp.qpow(zc * zc / 2.0)
    for sign in (1, -1):
        small = 0
        m = 0
        while True:
            m += 1
            term = tp.qpow((zc + sign * m) ** 2 / 2.0)
            total += term
            if abs(term) <= tol / 10.0 and m >= 15:
                small += 1
                if small >= 5:
                    break
            else:
                small = 0
            if m > _MAX_BILATERAL:
                raise DivergentSeries("gaussian sum did not settle")
    rhs = theta_neg_inv_tau(zc, tp, tol) / sqrt_neg_i_tau(tp.tau)
    return abs(total - rhs)


# ---------------------------------------------------------------------------
# Ramanujan 1psi1
# ---------------------------------------------------------------------------

def ramanujan_phi_tilde(z, a, b, tp: TauParameter, tol: float = 1e-12) -> complex:
    """phi~(z; a, b) = (-a q^{1/2+z}, -b q^{1/2-z}; q)_inf q^{z^2/2}."""
    zc = complex(z)
    return (qseries.qpoch_inf(-a * tp.qpow(0.5 + zc), tp.q, tol).value
            * qseries.qpoch_inf(-b * tp.qpow(0.5 - zc), tp.q, tol).value
            * tp.qpow(zc * zc / 2.0))


def _qpow_log_abs(tp: TauParameter, u: complex) -> float:
    """log |q^u| without forming the (possibly overflowing) power."""
    return -2.0 * math.pi * (tp.tau * complex(u)).imag


def ramanujan_phi_plus(z, a, b, tp: TauParameter, tol: float = 1e-12) -> complex:
    zc = complex(z)

    def ratio(u):
        if _qpow_log_abs(tp, 0.5 + u) <= 0:
            return b * (1.0 + tp.qpow(0.5 + u) / b) / (1.0 + a * tp.qpow(0.5 + u))
        # |q^{1/2+u}| > 1: same quotient with q^{-1/2-u} factored out
        w = tp.qpow(-0.5 - u)
        return (b * w + 1.0) / (w + a)

    return _phi_plus(ramanujan_phi_tilde(zc, a, b, tp, tol), ratio, zc, tol)


def ramanujan_closed_constant(a, b, tp: TauParameter, tol: float = 1e-12) -> complex:
    """(ab; q)_inf / [(a; q)_inf (b; q)_inf sqrt(-i tau)]."""
    return (qseries.qpoch_inf(a * b, tp.q, tol).value
            / (qseries.qpoch_inf(a, tp.q, tol).value
               * qseries.qpoch_inf(b, tp.q, tol).value)
            / sqrt_neg_i_tau(tp.tau))


def ramanujan_1psi1_residual(z, a, b, tau, tol: float = 1e-12) -> float:
    tp = as_trig_tau(tau)
    a, b = complex(a), complex(b)
    for name, v in (("a", a), ("b", b)):
        if not 0.0 < abs(v) < 1.0:
            raise ParameterOutOfRange(f"need 0 < |{name}| < 1, got |{name}| = {abs(v)}")
    lhs = ramanujan_phi_plus(z, a, b, tp, tol)
    rhs = ramanujan_closed_constant(a, b, tp, tol) * theta_neg_inv_tau(z, tp, tol)
    return abs(lhs - rhs)


# ---------------------------------------------------------------------------
# Bailey 6psi6
# ---------------------------------------------------------------------------

def bailey_phi_tilde(z, s, tp: TauParameter, tol: float = 1e-12) -> complex:
    """phi~(z) for the Askey-Wilson family: the Gaussian times
    prod_j (s_j q^{+-z}; q)_inf / (q^{1+-z}, -q^{1+-z}, q^{1/2+-z}; q)_inf."""
    zc = complex(z)
    num = 1.0 + 0j
    for sj in s:
        num *= (qseries.qpoch_inf(sj * tp.qpow(zc), tp.q, tol).value
                * qseries.qpoch_inf(sj * tp.qpow(-zc), tp.q, tol).value)
    den = 1.0 + 0j
    for sign in (1.0, -1.0):
        den *= (qseries.qpoch_inf(tp.qpow(1 + sign * zc), tp.q, tol).value
                * qseries.qpoch_inf(-tp.qpow(1 + sign * zc), tp.q, tol).value
                * qseries.qpoch_inf(tp.qpow(0.5 + sign * zc), tp.q, tol).value)
    if den == 0:
        raise AtPole(f"phi~ pole at z = {zc}", nearest=zc)
    return num / den * tp.qpow(zc * zc / 2.0)


def _bailey_ratio(s, tp: TauParameter):
    s_prod = complex(np.prod(np.asarray(s, dtype=complex)))
    pref = s_prod * tp.qpow(-3.0)

    def ratio(u):
        if _qpow_log_abs(tp, u) <= 0:
            qu = tp.qpow(u)
            qu1 = tp.qpow(1 + u)
            val = pref * (1.0 - qu1 * qu1) / (1.0 - qu * qu)
            for sj in s:
                val *= (1.0 - qu1 / sj) / (1.0 - sj * qu)
            return val
        # |q^u| > 1: factor q^{-u} out of every parenthesis
        v = tp.qpow(-u)
        q2 = tp.qpow(2.0)
        val = pref * (v * v - q2) / (v * v - 1.0)
        for sj in s:
            val *= (v - tp.q / sj) / (v - sj)
        return val

    return ratio


def bailey_phi_plus(z, s, tp: TauParameter, tol: float = 1e-12) -> complex:
    return _phi_plus(bailey_phi_tilde(z, s, tp, tol), _bailey_ratio(s, tp), complex(z), tol)


def bailey_closed_constant(s, tp: TauParameter, tol: float = 1e-12) -> complex:
    """prod_{k<m} (q^{-1} s_k s_m; q)_inf / [(q^{-3} s1 s2 s3 s4; q)_inf sqrt(-i tau)]."""
    num = 1.0 + 0j
    for k in range(4):
        for m in range(k + 1, 4):
            num *= qseries.qpoch_inf(s[k] * s[m] * tp.qpow(-1.0), tp.q, tol).value
    den = qseries.qpoch_inf(np.prod(np.asarray(s, dtype=complex)) * tp.qpow(-3.0),
                            tp.q, tol).value
    return num / den / sqrt_neg_i_tau(tp.tau)


def bailey_6psi6_residual(z, s, tau, tol: float = 1e-12) -> float:
    tp = as_trig_tau(tau)
    s = [complex(x) for x in s]
    if len(s) != 4:
        raise ParameterOutOfRange("the 6psi6 family takes four parameters")
    mod = abs(np.prod(s) * tp.qpow(-3.0))
    if mod >= 1.0:
        raise ParameterOutOfRange(f"|q^-3 s1 s2 s3 s4| = {mod} >= 1")
    lhs = bailey_phi_plus(z, s, tp, tol)
    rhs = bailey_closed_constant(s, tp, tol) * theta_neg_inv_tau(z, tp, tol)
    return abs(lhs - rhs)


# ---------------------------------------------------------------------------
# weak 8psi8
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Weak8Psi8Data:
    """The five parameters t_j = q^{tau_j}, their product A = q^{a}, the
    two z-independent 8W7 constants and the exponent gamma relating the
    q- and qtilde-forms of the elliptic factor Phi."""

    t: tuple
    exponents: tuple
    tau: TauParameter
    A: complex
    C1: complex
    C2: complex
    gamma_exp: complex

    @classmethod
    def from_exponents(cls, exponents, tau, tol: float = 1e-12) -> "Weak8Psi8Data":
        tp = as_trig_tau(tau)
        exps = tuple(complex(e) for e in exponents)
        if len(exps) != 5:
            raise ParameterOutOfRange("need five exponents tau_0..tau_4")
        t = tuple(tp.qpow(e) for e in exps)
        a = sum(exps)
        big_a = tp.qpow(a)
        prod_t = complex(np.prod(np.asarray(t)))
        if abs(big_a - prod_t) > 1e-12 * abs(big_a):
            raise ParameterOutOfRange("A != t0 t1 t2 t3 t4 beyond rounding")
        c1, c2 = _weak8_constants(exps, tp, tol)
        gamma_exp = ((a - 4.5 - 0.5 / tp.tau) ** 2
                     - (exps[0] - 0.5 - 0.5 / tp.tau) ** 2)
        return cls(t=t, exponents=exps, tau=tp, A=big_a, C1=c1, C2=c2,
                   gamma_exp=gamma_exp)

    def constants_recomputed(self, tol: float = 1e-12) -> tuple:
        """C1, C2 via a reordered 8W7 summation; independent-order oracle."""
        return _weak8_constants(self.exponents, self.tau, tol, reorder=True)


def _w87_value(a1, rest, q, z, tol, reorder=False) -> complex:
    if not reorder:
        return qseries.w8_7(a1, rest, q, z, tol).value
    # magnitude-sorted accumulation as an alternate evaluation order
    terms = [1.0 + 0j]
    t = 1.0 + 0j
    m = 0
    lower = [q * a1 / a for a in rest]
    while True:
        num = z
        for a in [a1] + rest:
            num *= 1.0 - a * q**m
        den = 1.0 - q ** (m + 1)
        for b in lower:
            den *= 1.0 - b * q**m
        t *= num / den
        terms.append((1.0 - a1 * q ** (2 * (m + 1))) / (1.0 - a1) * t)
        m += 1
        if abs(terms[-1]) < tol * 1e-3 and m > 5:
            break
        if m > 100_000:
            raise DivergentSeries("8W7 did not settle")
    order = np.argsort(np.abs(terms), kind="stable")
    return complex(np.sum(np.asarray(terms, dtype=complex)[order]))


def _weak8_constants(exps, tp: TauParameter, tol: float, reorder=False) -> tuple:
    q = tp.q
    e0 = exps[0]
    a = sum(exps)
    root = sqrt_neg_i_tau(tp.tau)
    # first constant: base parameter q^2 t0^-2, argument q
    rest1 = [tp.qpow(2 - e0 - ej) for ej in exps[1:]] + [tp.qpow(a - 3 - e0)]
    w1 = _w87_value(tp.qpow(2 - 2 * e0), rest1, q, q, tol, reorder)
    num1 = 1.0 + 0j
    for ej in exps[1:]:
        num1 *= (qseries.qpoch_inf(tp.qpow(e0 + ej - 1), q, tol).value
                 * qseries.qpoch_inf(tp.qpow(1 - e0 + ej), q, tol).value)
    den1 = (qseries.qpoch_inf(tp.qpow(a + e0 - 5), q, tol).value
            * qseries.qpoch_inf(tp.qpow(a - e0 - 3), q, tol).value
            * qseries.qpoch_inf(tp.qpow(3 - 2 * e0), q, tol).value)
    c1 = num1 / den1 * w1 / root
    # second constant: base parameter q^-8 A^2
    rest2 = [tp.qpow(a - 3 - ej) for ej in exps]
    w2 = _w87_value(tp.qpow(2 * a - 8), rest2, q, q, tol, reorder)
    num2 = 1.0 + 0j
    for ej in exps[1:]:
        num2 *= (qseries.qpoch_inf(tp.qpow(4 - a + ej), q, tol).value
                 * qseries.qpoch_inf(tp.qpow(a - 4 + ej), q, tol).value)
    den2 = (qseries.qpoch_inf(tp.qpow(5 - a - e0), q, tol).value
            * qseries.qpoch_inf(tp.qpow(a - e0 - 3), q, tol).value
            * qseries.qpoch_inf(tp.qpow(2 * a - 7), q, tol).value)
    c2 = num2 / den2 * w2 / root
    return c1, c2


def weak_8psi8_phi(data: Weak8Psi8Data, z, tol: float = 1e-12) -> complex:
    """Phi(z) = C1 + [(t0 q^{+-z}, t0^-1 q^{1+-z}; q)_inf /
    (A q^{-4+-z}, A^-1 q^{5+-z}; q)_inf] C2; elliptic in z with periods
    1 and -1/tau."""
    tp = data.tau
    zc = complex(z)
    e0, a = data.exponents[0], sum(data.exponents)
    num = 1.0 + 0j
    den = 1.0 + 0j
    for sign in (1.0, -1.0):
        num *= (qseries.qpoch_inf(tp.qpow(e0 + sign * zc), tp.q, tol).value
                * qseries.qpoch_inf(tp.qpow(1 - e0 + sign * zc), tp.q, tol).value)
        den *= (qseries.qpoch_inf(tp.qpow(a - 4 + sign * zc), tp.q, tol).value
                * qseries.qpoch_inf(tp.qpow(5 - a + sign * zc), tp.q, tol).value)
    if den == 0:
        raise AtPole(f"Phi pole at z = {zc}", nearest=zc)
    return data.C1 + num / den * data.C2


def weak_8psi8_phi_qtilde_form(data: Weak8Psi8Data, z, tol: float = 1e-12) -> complex:
    """The same Phi written with the modular-inverted base:
    C1 + [(t~0 e^{+-2 pi i z}, q~ t~0^-1 e^{+-2 pi i z}; q~)_inf /
    (A~ e^{+-2 pi i z}, q~ A~^-1 e^{+-2 pi i z}; q~)_inf] C2 q^gamma."""
    tp = data.tau
    zc = complex(z)
    qt = tp.qtilde
    t0t = cmath.exp(-2j * cmath.pi * data.exponents[0])
    at = cmath.exp(-2j * cmath.pi * sum(data.exponents))
    num = 1.0 + 0j
    den = 1.0 + 0j
    for sign in (1.0, -1.0):
        w = cmath.exp(2j * cmath.pi * sign * zc)
        num *= (qseries.qpoch_inf(t0t * w, qt, tol).value
                * qseries.qpoch_inf(qt / t0t * w, qt, tol).value)
        den *= (qseries.qpoch_inf(at * w, qt, tol).value
                * qseries.qpoch_inf(qt / at * w, qt, tol).value)
    if den == 0:
        raise AtPole(f"Phi pole at z = {zc}", nearest=zc)
    return data.C1 + num / den * data.C2 * tp.qpow(data.gamma_exp)


def weak8_phi_tilde(data: Weak8Psi8Data, z, tol: float = 1e-12) -> complex:
    """phi~(z) of the Nassrallah-Rahman family (five numerator parameter
    pairs, the extra A q^{-4+-z} pair in the denominator)."""
    tp = data.tau
    zc = complex(z)
    a = sum(data.exponents)
    num = 1.0 + 0j
    for ej in data.exponents:
        num *= (qseries.qpoch_inf(tp.qpow(ej + zc), tp.q, tol).value
                * qseries.qpoch_inf(tp.qpow(ej - zc), tp.q, tol).value)
    den = 1.0 + 0j
    for sign in (1.0, -1.0):
        den *= (qseries.qpoch_inf(tp.qpow(1 + sign * zc), tp.q, tol).value
                * qseries.qpoch_inf(-tp.qpow(1 + sign * zc), tp.q, tol).value
                * qseries.qpoch_inf(tp.qpow(0.5 + sign * zc), tp.q, tol).value
                * qseries.qpoch_inf(tp.qpow(a - 4 + sign * zc), tp.q, tol).value)
    if den == 0:
        raise AtPole(f"phi~ pole at z = {zc}", nearest=zc)
    return num / den * tp.qpow(zc * zc / 2.0)


def weak8_phi_plus(data: Weak8Psi8Data, z, tol: float = 1e-12) -> complex:
    tp = data.tau
    a = sum(data.exponents)

    def ratio(u):
        if _qpow_log_abs(tp, u) <= 0:
            qu, qu1 = tp.qpow(u), tp.qpow(1 + u)
            val = (tp.q * (1.0 - qu1 * qu1) * (1.0 - tp.qpow(a - 4 + u))
                   / ((1.0 - qu * qu) * (1.0 - tp.qpow(5 - a + u))))
            for ej in data.exponents:
                val *= (1.0 - tp.qpow(1 - ej + u)) / (1.0 - tp.qpow(ej + u))
            return val
        v = tp.qpow(-u)
        val = (tp.q * (v * v - tp.qpow(2.0)) * (v - tp.qpow(a - 4))
               / ((v * v - 1.0) * (v - tp.qpow(5 - a))))
        for ej in data.exponents:
            val *= (v - tp.qpow(1 - ej)) / (v - tp.qpow(ej))
        return val

    return _phi_plus(weak8_phi_tilde(data, z, tol), ratio, complex(z), tol)


def key_lemma_residual(data: Weak8Psi8Data, tol: float = 1e-12) -> float:
    """|LHS - RHS| of the closed-form evaluation of C1 + C2 q^gamma *
    (qtilde-Pochhammer block), both sides computed independently."""
    tp = data.tau
    qt = tp.qtilde
    exps = data.exponents
    a = sum(exps)
    t0t = cmath.exp(-2j * cmath.pi * exps[0])
    at = cmath.exp(-2j * cmath.pi * a)
    block = 1.0 + 0j
    for ej in exps[1:]:
        tjt = cmath.exp(-2j * cmath.pi * ej)
        block *= (qseries.qpoch_inf(t0t * tjt, qt, tol).value
                  * qseries.qpoch_inf(qt / (t0t * tjt), qt, tol).value
                  / (qseries.qpoch_inf(at / tjt, qt, tol).value
                     * qseries.qpoch_inf(qt * tjt / at, qt, tol).value))
    lhs = data.C1 + data.C2 * tp.qpow(data.gamma_exp) * block
    # right-hand side recomputes A from the parameters themselves
    num = 1.0 + 0j
    for k in range(5):
        for m in range(k + 1, 5):
            num *= qseries.qpoch_inf(tp.qpow(exps[k] + exps[m] - 1), tp.q, tol).value
    den = 1.0 + 0j
    for ej in exps:
        den *= qseries.qpoch_inf(tp.qpow(a - ej - 3), tp.q, tol).value
    rhs = num / den / sqrt_neg_i_tau(tp.tau)
    return abs(lhs - rhs)


# ---------------------------------------------------------------------------
# Askey-Wilson polynomials
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class AWParameterSet:
    """Askey-Wilson parameters in the modular-inverted base.

    exponents, when present, are the matched values tau_j with
    t_j = exp(-2 pi i tau_j); the orthogonality weight needs them since
    recovering exponents from t_j alone is ambiguous by integer shifts.
    """

    t1: complex
    t2: complex
    t3: complex
    t4: complex
    qtilde: complex
    exponents: Optional[tuple] = None

    def __post_init__(self):
        for name in ("t1", "t2", "t3", "t4"):
            v = complex(getattr(self, name))
            object.__setattr__(self, name, v)
            if abs(v) >= 1:
                raise ParameterOutOfRange(f"|{name}| = {abs(v)} >= 1")
        qt = complex(self.qtilde)
        if abs(qt) >= 1:
            raise ParameterOutOfRange(f"|qtilde| = {abs(qt)} >= 1")
        object.__setattr__(self, "qtilde", qt)

    @property
    def ts(self) -> tuple:
        return (self.t1, self.t2, self.t3, self.t4)

    @classmethod
    def from_exponents(cls, exponents, tau) -> "AWParameterSet":
        tp = as_trig_tau(tau)
        exps = tuple(complex(e) for e in exponents)
        t = [cmath.exp(-2j * cmath.pi * e) for e in exps]
        return cls(t[0], t[1], t[2], t[3], tp.qtilde, exponents=exps)


def aw_polynomial(n: int, x, params: AWParameterSet) -> complex:
    """p_n(x) as the terminating 4phi3 with base qtilde; exact finite sum
    of n + 1 terms, a polynomial of degree n in cos(2 pi x)."""
    if n < 0:
        raise ParameterOutOfRange("polynomial degree must be nonnegative")
    qt = params.qtilde
    t1, t2, t3, t4 = params.ts
    xc = complex(x)
    w = cmath.exp(2j * cmath.pi * xc)
    upper = [qt ** (-n), qt ** (n - 1) * t1 * t2 * t3 * t4, t1 * w, t1 / w]
    lower = [t1 * t2, t1 * t3, t1 * t4]
    return qseries.phi_series(upper, lower, qt, qt, tol=1e-15).value


def aw_polynomial_many(n: int, x, params: AWParameterSet) -> np.ndarray:
    """Vectorized p_n over an array of arguments (same finite sum)."""
    qt = params.qtilde
    t1, t2, t3, t4 = params.ts
    x = np.asarray(x, dtype=complex)
    w = np.exp(2j * np.pi * x)
    a_const = (qt ** (-n), qt ** (n - 1) * t1 * t2 * t3 * t4)
    lower = (t1 * t2, t1 * t3, t1 * t4)
    total = np.ones_like(w)
    term = np.ones_like(w)
    for m in range(n):
        fac = ((1.0 - a_const[0] * qt**m) * (1.0 - a_const[1] * qt**m)
               * (1.0 - t1 * w * qt**m) * (1.0 - t1 / w * qt**m)
               * qt / (1.0 - qt ** (m + 1)))
        for b in lower:
            fac = fac / (1.0 - b * qt**m)
        term = term * fac
        total = total + term
    return total


def aw_weight_function(params: AWParameterSet, tau, tol: float = 1e-12):
    """The fused orthogonality weight J(x) on the real line, built with
    the matched parameter pairs s_j = q^{tau_j}, t_j = e^{-2 pi i tau_j}.

    Returns a vectorized callable suitable for integrate_line.
    """
    tp = as_trig_tau(tau)
    if params.exponents is None:
        raise DomainViolation("exponents", None,
                              "matched s/t construction requires exponents")
    exps = params.exponents
    s = [tp.qpow(e) for e in exps]
    mod = abs(np.prod(np.asarray(s)) * tp.qpow(-3.0))
    if mod >= 1.0:
        raise DomainViolation("|q^-3 s1 s2 s3 s4| < 1", mod, 1.0)
    qt = tp.qtilde
    sqt = tp.qtpow(0.5)
    ts = params.ts

    def weight(x: np.ndarray) -> np.ndarray:
        # assembled in log space: individual Pochhammer factors overflow
        # at large |x| while the Gaussian keeps the product tiny
        x = np.asarray(x, dtype=complex)
        e_plus = np.exp(2j * np.pi * x)
        e_minus = np.exp(-2j * np.pi * x)
        log = (qseries.qpoch_log_many(e_plus, qt, tol) + qseries.qpoch_log_many(e_minus, qt, tol)
               + qseries.qpoch_log_many(-e_plus, qt, tol) + qseries.qpoch_log_many(-e_minus, qt, tol)
               + qseries.qpoch_log_many(sqt * e_plus, qt, tol)
               + qseries.qpoch_log_many(sqt * e_minus, qt, tol))
        for sign in (1.0, -1.0):
            log -= (qseries.qpoch_log_many(tp.qpow(1 + sign * x), tp.q, tol)
                    + qseries.qpoch_log_many(-tp.qpow(1 + sign * x), tp.q, tol)
                    + qseries.qpoch_log_many(tp.qpow(0.5 + sign * x), tp.q, tol))
        for e, t in zip(exps, ts):
            log += (qseries.qpoch_log_many(tp.qpow(e + x), tp.q, tol)
                    + qseries.qpoch_log_many(tp.qpow(e - x), tp.q, tol)
                    - qseries.qpoch_log_many(t * e_plus, qt, tol)
                    - qseries.qpoch_log_many(t * e_minus, qt, tol))
        return np.exp(log + 1j * np.pi * tp.tau * x * x)

    return weight


def aw_orthogonality(m: int, n: int, params: AWParameterSet, tau,
                     tol: float = 1e-9) -> complex:
    """<p_m, p_n> = integral over the real line of p_m(x) p_n(x) J(x) dx."""
    weight = aw_weight_function(params, tau, tol=min(tol, 1e-12))

    def integrand(x: np.ndarray) -> np.ndarray:
        x = np.atleast_1d(x)
        return (aw_polynomial_many(m, x, params)
                * aw_polynomial_many(n, x, params) * weight(x))

    result = integrate_line(integrand, Contour("real_line"), tol=tol)
    return result.value
