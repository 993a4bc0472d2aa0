"""Ruijsenaars' hyperbolic gamma function, the tau-shifted factorial in
both deformation regimes, and the (renormalized) elliptic gamma function.

Power conventions are fixed once and for all: q^u = exp(2 pi i tau u) and
qtilde^u = exp(-2 pi i u / tau).  Principal-branch complex powers are
never used for these, since identities depend on the convention branch.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from . import qseries
from .errors import (
    AtPole,
    BaseOutOfRange,
    DegenerateRatio,
    HypbetaError,
    OutsideStrip,
    RegimeUnsupported,
    ShiftOverflow,
)

TRIGONOMETRIC = "trigonometric"
HYPERBOLIC = "hyperbolic"

#: evaluations closer than this (relative to the lattice scale) to a pole
#: are rejected; relative error is unbounded near poles.
POLE_PROXIMITY = 1e-8

_ZERO_SNAP = 1e-12
_MAX_SHIFTS = 10_000


@dataclass(frozen=True)
class TauParameter:
    """Deformation parameter tau with the two derived bases.

    trigonometric regime: Im tau > 0, both |q| and |qtilde| < 1.
    hyperbolic regime: Re tau < 0 and Im tau >= 0 (Im tau = 0 puts both
    bases on the unit circle).  In the overlap (Re < 0, Im > 0) the
    regime may be forced explicitly; it defaults to trigonometric.
    """

    tau: complex
    regime: str = ""
    q: complex = 0j
    qtilde: complex = 0j

    def __post_init__(self):
        tau = complex(self.tau)
        regime = self.regime
        if not regime:
            if tau.imag > 0:
                regime = TRIGONOMETRIC
            elif tau.real < 0 and tau.imag == 0:
                regime = HYPERBOLIC
            else:
                raise RegimeUnsupported(f"tau = {tau} is in neither regime")
        if regime == TRIGONOMETRIC and not tau.imag > 0:
            raise RegimeUnsupported(f"trigonometric regime needs Im tau > 0, got {tau}")
        if regime == HYPERBOLIC and not (tau.real < 0 and tau.imag >= 0):
            raise RegimeUnsupported(
                f"hyperbolic regime needs Re tau < 0 and Im tau >= 0, got {tau}")
        if regime not in (TRIGONOMETRIC, HYPERBOLIC):
            raise RegimeUnsupported(f"unknown regime {regime!r}")
        object.__setattr__(self, "tau", tau)
        object.__setattr__(self, "regime", regime)
        object.__setattr__(self, "q", cmath.exp(2j * cmath.pi * tau))
        object.__setattr__(self, "qtilde", cmath.exp(-2j * cmath.pi / tau))

    def qpow(self, u):
        """q^u = exp(2 pi i tau u) elementwise (convention power, not principal)."""
        if isinstance(u, np.ndarray):
            return np.exp(2j * np.pi * self.tau * u)
        return cmath.exp(2j * cmath.pi * self.tau * complex(u))

    def qtpow(self, u):
        """qtilde^u = exp(-2 pi i u / tau) elementwise."""
        if isinstance(u, np.ndarray):
            return np.exp(-2j * np.pi * u / self.tau)
        return cmath.exp(-2j * cmath.pi * complex(u) / self.tau)

    @property
    def c_offset(self) -> complex:
        """The recurring offset 1/2 + 1/(2 tau)."""
        return 0.5 + 0.5 / self.tau

    @property
    def eta_constant(self) -> complex:
        """q^{-1/24} qtilde^{1/24}, the Dedekind-eta modularity constant."""
        return self.qpow(-1.0 / 24.0) * self.qtpow(1.0 / 24.0)


@dataclass(frozen=True)
class HyperbolicPair:
    """The two quasi-period parameters of the hyperbolic gamma function."""

    a_plus: complex
    a_minus: complex

    def __post_init__(self):
        ap, am = complex(self.a_plus), complex(self.a_minus)
        if ap.real <= 0 or am.real <= 0:
            raise HypbetaError(f"Re(a_plus) and Re(a_minus) must be > 0, got {ap}, {am}")
        object.__setattr__(self, "a_plus", ap)
        object.__setattr__(self, "a_minus", am)

    @property
    def halfwidth(self) -> float:
        return 0.5 * (self.a_plus.real + self.a_minus.real)

    @property
    def scale(self) -> float:
        return max(abs(self.a_plus), abs(self.a_minus))


@dataclass(frozen=True)
class LatticeSet:
    """Points base + j*gen1 + k*gen2 with j, k nonnegative integers."""

    base: complex
    gen1: complex
    gen2: complex

    def distance(self, z: complex) -> float:
        g1, g2 = self.gen1, self.gen2
        det = g1.real * g2.imag - g1.imag * g2.real
        w = complex(z) - self.base
        if abs(det) < 1e-30:
            # degenerate (rational-ratio) lattice: scan along the merged ray
            s = (w.real * g1.real + w.imag * g1.imag) / max(abs(g1) ** 2, 1e-300)
            cands = [max(round(s + d), 0) for d in (-1, 0, 1)]
            return min(abs(w - k * g1) for k in cands)
        s = (w.real * g2.imag - w.imag * g2.real) / det
        t = (g1.real * w.imag - g1.imag * w.real) / det
        best = math.inf
        for js in (math.floor(s), math.ceil(s)):
            for ks in (math.floor(t), math.ceil(t)):
                j, k = max(js, 0), max(ks, 0)
                best = min(best, abs(w - j * g1 - k * g2))
        return best


@dataclass(frozen=True)
class PoleZeroList:
    zeros: LatticeSet
    poles: LatticeSet


def gamma_h_lattices(pair: HyperbolicPair) -> PoleZeroList:
    """Zeros at (Z>=0 + 1/2) i a+ + (Z>=0 + 1/2) i a-, poles at the negatives."""
    half = 0.5j * (pair.a_plus + pair.a_minus)
    return PoleZeroList(
        zeros=LatticeSet(half, 1j * pair.a_plus, 1j * pair.a_minus),
        poles=LatticeSet(-half, -1j * pair.a_plus, -1j * pair.a_minus),
    )


def tau_factorial_lattices(tp: TauParameter) -> PoleZeroList:
    """Zeros of [z; tau]_inf at tau^{-1} Z<=0 + Z>0, poles at tau^{-1} Z>0 + Z<=0."""
    inv = 1.0 / tp.tau
    return PoleZeroList(
        zeros=LatticeSet(1.0 + 0j, -inv, 1.0 + 0j),
        poles=LatticeSet(inv, inv, -1.0 + 0j),
    )


# ---------------------------------------------------------------------------
# the defining log-integral g(a+, a-; z)
# ---------------------------------------------------------------------------

_SERIES_K = 12
_INV_ODD_FACT = np.array([1.0 / math.factorial(2 * k + 1) for k in range(_SERIES_K)])

_GK = None  # filled lazily from quadrature to avoid an import cycle


def _gk_rule():
    global _GK
    if _GK is None:
        from .quadrature import G7_WEIGHTS, GK_NODES, GK_WEIGHTS
        _GK = (GK_NODES, GK_WEIGHTS, G7_WEIGHTS)
    return _GK


def _g_series_coeffs(ap: complex, am: complex, w: np.ndarray) -> np.ndarray:
    """Coefficients c_k (per element of w) of the even series
    F(y) - 1 = sum_{k>=1} c_k y^{2k} with
    F = [sin(2yw)/(2yw)] [a+ y/sinh(a+ y)] [a- y/sinh(a- y)]."""
    k = np.arange(_SERIES_K)
    dplus = (ap ** (2 * k)) * _INV_ODD_FACT
    dminus = (am ** (2 * k)) * _INV_ODD_FACT
    d = np.convolve(dplus, dminus)[:_SERIES_K]  # sinh(a+y)sinh(a-y)/(a+ a- y^2)
    n = ((-4.0 * w[:, None] ** 2) ** k) * _INV_ODD_FACT  # sin(2yw)/(2yw)
    e = n - d[None, :]
    c = np.zeros_like(e)
    for kk in range(1, _SERIES_K):
        acc = e[:, kk].copy()
        for j in range(1, kk):
            acc -= c[:, j] * d[kk - j]
        c[:, kk] = acc  # d[0] = 1
    return c


def _g_batch(pair: HyperbolicPair, w: np.ndarray, tol: float) -> tuple[np.ndarray, np.ndarray]:
    """g(a+, a-; w) for an array of strip points w; returns (values, err)."""
    ap, am = pair.a_plus, pair.a_minus
    ra, rb = ap.real, am.real
    w = np.asarray(w, dtype=complex)
    if w.size == 0:
        return w.copy(), np.zeros(0)
    im_max = float(np.max(np.abs(w.imag)))
    hw = pair.halfwidth
    if im_max >= hw:
        bad = w[np.abs(w.imag) >= hw][0]
        raise OutsideStrip(
            f"|Im z| = {abs(bad.imag)} >= (Re a+ + Re a-)/2 = {hw} at z = {bad}")
    decay = (ra + rb) - 2.0 * im_max
    # truncation point for the exponentially decaying sin-part
    y_end = math.log(80.0 / tol) / decay
    for _ in range(2):
        y_end = math.log(80.0 / (tol * decay * y_end)) / decay if y_end > 0 else y_end
    y_end = max(y_end, 1.0)

    scale = max(2.0 * float(np.max(np.abs(w))), abs(ap), abs(am), 1.0)
    y_switch = min(0.5 / scale, 0.5 * y_end)
    coeffs = _g_series_coeffs(ap, am, w)
    pref = w / (ap * am)

    freq = 2.0 * float(np.max(np.abs(w.real))) + decay + 1.0
    nodes, weights, g7 = _gk_rule()

    def integrand(y: np.ndarray) -> np.ndarray:
        y = y[None, :]
        out = np.empty((w.size, y.size), dtype=complex)
        near = (y[0] < y_switch)
        if near.any():
            yn = y[0][near]
            # integrand = pref * (F(y) - 1) / y^2 = pref * (c1 + c2 y^2 + ...)
            powers = yn[None, :] ** (2 * (np.arange(1, _SERIES_K)[:, None] - 1))
            out[:, near] = pref[:, None] * np.tensordot(coeffs[:, 1:], powers, axes=(1, 0))
        if (~near).any():
            yf = y[0][~near]
            direct = (np.sin(2.0 * np.outer(w, yf))
                      / (2.0 * yf[None, :] * np.sinh(ap * yf)[None, :]
                         * np.sinh(am * yf)[None, :])
                      - pref[:, None] / yf[None, :] ** 2)
            out[:, ~near] = direct
        return out

    n_panels = max(8, int(math.ceil(y_end * freq / 2.5)))
    for _ in range(4):
        edges = np.linspace(0.0, y_end, n_panels + 1)
        mid = 0.5 * (edges[:-1] + edges[1:])
        half = 0.5 * (edges[1:] - edges[:-1])
        y = (mid[:, None] + half[:, None] * nodes[None, :]).ravel()
        vals = integrand(y).reshape(w.size, n_panels, 15)
        k15 = (vals * weights).sum(axis=2) * half
        g7v = (vals * g7).sum(axis=2) * half
        errs = np.abs(k15 - g7v).sum(axis=1)
        if float(errs.max()) <= tol / 4.0 or n_panels > 4096:
            break
        n_panels *= 2
    result = k15.sum(axis=1) - pref / y_end  # exact tail of the -z/(a+ a- y^2) term
    tail_exp = 2.0 * math.exp(-decay * y_end) / (decay * y_end)
    return result, errs + tail_exp


def g_integral(pair: HyperbolicPair, z, tol: float = 1e-12) -> complex:
    """The log-integral g(a+, a-; z) over [0, infinity) defining Gamma_h.

    Valid on the strip |Im z| < (Re a+ + Re a-)/2; odd in z with g(0) = 0.
    The 1/y singularities of the two pieces cancel analytically; near
    y = 0 the integrand is evaluated through its even power series to
    avoid the catastrophic cancellation.
    """
    zc = complex(z)
    if zc == 0:
        return 0j
    vals, _ = _g_batch(pair, np.array([zc]), tol)
    return complex(vals[0])


def _g_asymptote(pair: HyperbolicPair, w: np.ndarray) -> np.ndarray:
    """Quadratic large-|Re z| asymptote of g, exact up to exponentially
    small corrections; covariant under the functional equations."""
    ap, am = pair.a_plus, pair.a_minus
    quad = np.pi * (w * w / (2.0 * ap * am) + (ap * ap + am * am) / (24.0 * ap * am))
    return -np.sign(w.real) * quad


def _asym_cutoff(pair: HyperbolicPair, tol: float) -> float:
    ap, am = pair.a_plus, pair.a_minus
    rate = 2.0 * math.pi * min((1.0 / ap).real, (1.0 / am).real)
    return (math.log(20.0 / tol) + 3.0) / rate


def gamma_h_batch(pair: HyperbolicPair, z, tol: float = 1e-11,
                  check_poles: bool = True) -> np.ndarray:
    """Gamma_h(a+, a-; z) for an array of points, continued outside the
    strip by the 2cosh functional equations along i a- (then i a+).

    The continuation path is deterministic, so results are reproducible
    bit for bit; a 2cosh factor vanishing to machine precision snaps the
    value to an exact zero (the zero lattice is reached exactly this way).
    """
    z = np.atleast_1d(np.asarray(z, dtype=complex))
    ap, am = pair.a_plus, pair.a_minus
    if check_poles:
        lattices = gamma_h_lattices(pair)
        for zz in z:
            if lattices.poles.distance(zz) < POLE_PROXIMITY * pair.scale:
                raise AtPole(f"z = {zz} within {POLE_PROXIMITY} of a pole",
                             nearest=zz)
    hw = pair.halfwidth
    margin = 0.25 * min(ap.real, am.real)
    factor = np.ones_like(z)
    w = z.copy()
    exact_zero = np.zeros(z.shape, dtype=bool)

    def step_down(mask, gen, other):
        # Gamma_h(w) = 2 cosh(pi (w - i gen/2)/other) * Gamma_h(w - i gen)
        f = 2.0 * np.cosh(np.pi * (w[mask] - 0.5j * gen) / other)
        factor[mask] *= f
        w[mask] -= 1j * gen
        exact_zero[mask] |= np.abs(f) < 1e-13

    def step_up(mask, gen, other):
        # Gamma_h(w) = Gamma_h(w + i gen) / (2 cosh(pi (w + i gen/2)/other))
        f = 2.0 * np.cosh(np.pi * (w[mask] + 0.5j * gen) / other)
        factor[mask] /= f
        w[mask] += 1j * gen

    for n_steps in range(_MAX_SHIFTS + 1):
        high = w.imag > hw - margin
        low = w.imag < -(hw - margin)
        if not (high.any() or low.any()):
            break
        if n_steps == _MAX_SHIFTS:
            raise ShiftOverflow(f"more than {_MAX_SHIFTS} continuation steps needed")
        if high.any():
            step_down(high, am, ap)
        if low.any():
            step_up(low, am, ap)
    # one centering step if it strictly improves the decay margin
    better = (w.imag > 0.5 * am.real + 0.05 * margin) & (np.abs(w.imag - am.real) < np.abs(w.imag))
    if better.any():
        step_down(better, am, ap)
    better = (w.imag < -0.5 * am.real - 0.05 * margin) & (np.abs(w.imag + am.real) < np.abs(w.imag))
    if better.any():
        step_up(better, am, ap)

    g = np.empty_like(w)
    asym = np.abs(w.real) > _asym_cutoff(pair, tol)
    if asym.any():
        g[asym] = _g_asymptote(pair, w[asym])
    if (~asym).any():
        g[~asym], _ = _g_batch(pair, w[~asym], tol)
    out = factor * np.exp(1j * g)
    out[exact_zero] = 0.0
    return out


def gamma_h(pair: HyperbolicPair, z, tol: float = 1e-11) -> complex:
    """Hyperbolic gamma function exp(i g(a+, a-; z)), meromorphically
    continued by the functional equations
    Gamma_h(z + i a/2) / Gamma_h(z - i a/2) = 2 cosh(pi z / a_other)."""
    return complex(gamma_h_batch(pair, np.array([complex(z)]), tol)[0])


def gamma_h_product(pair: HyperbolicPair, z, tol: float = 1e-12) -> complex:
    """Shintani's infinite-product representation, valid for
    Im(a+/a-) > 0 strictly; agrees with gamma_h wherever both exist."""
    ap, am = pair.a_plus, pair.a_minus
    ratio = ap / am
    if ratio.imag <= 0:
        raise DegenerateRatio(
            f"Im(a_plus/a_minus) = {ratio.imag} <= 0; swap the parameters "
            "(the function is symmetric) or use gamma_h")
    zc = complex(z)
    p = cmath.exp(2j * cmath.pi * ratio)
    pp = cmath.exp(-2j * cmath.pi * am / ap)
    num = qseries.qpoch_inf(-cmath.exp(1j * cmath.pi * ratio) * cmath.exp(-2.0 * cmath.pi * zc / am), p, tol)
    den = qseries.qpoch_inf(-cmath.exp(-1j * cmath.pi * am / ap) * cmath.exp(-2.0 * cmath.pi * zc / ap), pp, tol)
    if den.value == 0:
        raise AtPole(f"Shintani denominator vanishes at z = {zc}", nearest=zc)
    const = cmath.exp(-1j * cmath.pi / 24.0 * (ratio + am / ap))
    gauss = cmath.exp(-1j * cmath.pi * zc * zc / (2.0 * ap * am))
    return num.value / den.value * const * gauss


# ---------------------------------------------------------------------------
# tau-shifted factorial
# ---------------------------------------------------------------------------

def _tau_factorial_trig(z: np.ndarray, tp: TauParameter, tol: float) -> np.ndarray:
    """[z; tau]_inf = (e^{-2 pi i z}; qtilde)_inf / (q^z; q)_inf, with the
    0/0 lattice collisions resolved by their (finite) limit value."""
    num_arg = np.exp(-2j * np.pi * z)
    den_arg = tp.qpow(z)
    num = qseries.qpoch_many(num_arg, tp.qtilde, tol)
    den = qseries.qpoch_many(den_arg, tp.q, tol)
    out = np.empty_like(num)
    ok = den != 0
    out[ok] = num[ok] / den[ok]
    for i in np.nonzero(~ok)[0]:
        out[i] = _trig_collision_value(complex(z[i]), tp, tol)
    return out


def _restricted_qpoch(a: complex, q: complex, tol: float) -> tuple[complex, int]:
    """(a; q)_inf with the single vanishing factor removed; returns the
    product of the remaining factors and the index of the removed one."""
    n = max(qseries._product_length(abs(a), abs(q), tol), 1)
    powers = q ** np.arange(n)
    factors = 1.0 - a * powers
    idx = int(np.argmin(np.abs(factors)))
    if abs(factors[idx]) > 1e-8:
        return complex(np.prod(factors)), -1
    rest = np.delete(factors, idx)
    return complex(np.prod(rest)), idx


def _trig_collision_value(z: complex, tp: TauParameter, tol: float) -> complex:
    num_rest, k0 = _restricted_qpoch(cmath.exp(-2j * cmath.pi * z), tp.qtilde, tol)
    den_rest, j0 = _restricted_qpoch(tp.qpow(z), tp.q, tol)
    if j0 < 0:
        raise HypbetaError("collision handling reached without a vanishing denominator")
    if k0 < 0:
        raise AtPole(f"[z; tau] pole at z = {z}", nearest=z)
    # both products vanish to first order; the ratio of the factor
    # derivatives is -1/tau independently of the lattice indices
    return (num_rest / den_rest) * (-1.0 / tp.tau)


def _tau_factorial_hyper(z: np.ndarray, tp: TauParameter, tol: float) -> np.ndarray:
    """[z; tau]_inf through Gamma_h(-1/tau, 1; i(z - 1/2 - 1/(2 tau)))
    times the Gaussian prefactor; the route that survives |q| = 1."""
    if (-1.0 / tp.tau).real <= 0:
        raise RegimeUnsupported(
            f"hyperbolic route needs Re(-1/tau) > 0, got tau = {tp.tau}")
    pair = HyperbolicPair(-1.0 / tp.tau, 1.0)
    c = tp.c_offset
    shifted = z - c
    pref = tp.qpow(shifted * shifted / 4.0) * tp.qpow(-1.0 / 48.0) * tp.qtpow(1.0 / 48.0)
    gam = gamma_h_batch(pair, 1j * shifted, tol, check_poles=False)
    return pref * gam


def tau_factorial(z, tp: TauParameter, tol: float = 1e-11) -> complex:
    """The tau-shifted factorial [z; tau]_inf.

    Trigonometric regime: quotient of q-Pochhammer products in the two
    bases.  Hyperbolic regime (including tau real negative, |q| = 1):
    the hyperbolic gamma route.  Both paths agree on the overlap.
    """
    return complex(tau_factorial_many(np.array([complex(z)]), tp, tol)[0])


def tau_factorial_log_many(z, tp: TauParameter, tol: float = 1e-11) -> np.ndarray:
    """log [z; tau]_inf in the trigonometric regime (branch-incoherent,
    exact under exp of sums).  For real-line integrands whose individual
    Pochhammer factors overflow while the assembled integrand is tiny."""
    if tp.regime != TRIGONOMETRIC:
        raise RegimeUnsupported("log route exists only in the trigonometric regime")
    z = np.asarray(z, dtype=complex)
    return (qseries.qpoch_log_logarg(-2j * np.pi * z, tp.qtilde, tol)
            - qseries.qpoch_log_logarg(2j * np.pi * tp.tau * z, tp.q, tol))


def tau_factorial_many(z, tp: TauParameter, tol: float = 1e-11) -> np.ndarray:
    z = np.atleast_1d(np.asarray(z, dtype=complex))
    lat = tau_factorial_lattices(tp)
    scale = max(1.0, abs(1.0 / tp.tau))
    out = np.empty_like(z)
    zero_mask = np.zeros(z.shape, dtype=bool)
    for i, zz in enumerate(z):
        d_pole = lat.poles.distance(complex(zz))
        if d_pole < POLE_PROXIMITY * scale:
            raise AtPole(f"[z; tau] pole within {POLE_PROXIMITY} of z = {zz}", nearest=zz)
        if lat.zeros.distance(complex(zz)) < _ZERO_SNAP * scale:
            zero_mask[i] = True
    live = ~zero_mask
    if live.any():
        if tp.regime == TRIGONOMETRIC:
            out[live] = _tau_factorial_trig(z[live], tp, tol)
        else:
            out[live] = _tau_factorial_hyper(z[live], tp, tol)
    out[zero_mask] = 0.0
    return out


# ---------------------------------------------------------------------------
# elliptic gamma
# ---------------------------------------------------------------------------

def elliptic_gamma(zval, p1, p2, tol: float = 1e-12) -> complex:
    """Double-product elliptic gamma
    prod_{k,m>=0} (1 - p1^{k+1} p2^{m+1} / z) / (1 - z p1^k p2^m)."""
    z = complex(zval)
    p1, p2 = complex(p1), complex(p2)
    if abs(p1) >= 1 or abs(p2) >= 1:
        raise BaseOutOfRange(f"|p1| = {abs(p1)}, |p2| = {abs(p2)}; both must be < 1")
    if z == 0:
        raise AtPole("z = 0 is an essential singularity of the product", nearest=0j)
    amax = max(abs(z), abs(p1 * p2 / z))

    def length(p: float, other: float) -> int:
        if p == 0.0:
            return 1
        target = tol / 20.0 * (1.0 - p) * max(1.0 - other, 1e-6)
        n = int(math.ceil(math.log(target / max(amax, 1e-300)) / math.log(p)))
        return max(n, 1)

    nk = length(abs(p1), abs(p2))
    nm = length(abs(p2), abs(p1))
    if nk * nm > 16_000_000:
        raise HypbetaError(f"bases too close to 1: product needs {nk}x{nm} factors")
    pk = p1 ** np.arange(nk)
    pm = p2 ** np.arange(nm)
    grid = np.outer(pk, pm)
    den_factors = 1.0 - z * grid
    if float(np.min(np.abs(den_factors))) < 1e-12 * (1.0 + abs(z)):
        k, m = np.unravel_index(int(np.argmin(np.abs(den_factors))), grid.shape)
        raise AtPole(f"z within 1e-12 of the pole p1^-{k} p2^-{m}",
                     nearest=1.0 / grid[k, m] if grid[k, m] != 0 else None)
    num_factors = 1.0 - (p1 * p2 / z) * grid
    return complex(np.prod(num_factors) / np.prod(den_factors))


def renorm_elliptic_gamma(z, tau, r, tol: float = 1e-12) -> complex:
    """Renormalized elliptic gamma
    Gamma(e^{2 pi i r z}; e^{2 pi r / tau}, e^{-2 pi r}) e^{pi i (2 tau z + i - i tau)/(12 r)},
    defined for tau real negative and r > 0; converges to a tau-shifted
    factorial expression as r drops to 0."""
    tauc = complex(tau)
    if abs(tauc.imag) > 1e-12 or tauc.real >= 0:
        raise RegimeUnsupported(f"renormalized elliptic gamma needs tau real < 0, got {tau}")
    rr = float(r)
    if rr <= 0:
        raise HypbetaError(f"r must be positive, got {r}")
    t = tauc.real
    zc = complex(z)
    val = elliptic_gamma(cmath.exp(2j * cmath.pi * rr * zc),
                         math.exp(2.0 * math.pi * rr / t),
                         math.exp(-2.0 * math.pi * rr), tol)
    pref = cmath.exp(1j * cmath.pi * (2.0 * t * zc + 1j - 1j * t) / (12.0 * rr))
    return val * pref


def renorm_elliptic_gamma_limit(z, tp: TauParameter, tol: float = 1e-11) -> complex:
    """The r -> 0 limit of the renormalized elliptic gamma:
    q^{(1/(2 tau) - 1/2 - i z)^2 / 4} q^{-1/48} qtilde^{1/48} / [1 + i z; tau]_inf."""
    zc = complex(z)
    u = 0.5 / tp.tau - 0.5 - 1j * zc
    pref = tp.qpow(u * u / 4.0) * tp.qpow(-1.0 / 48.0) * tp.qtpow(1.0 / 48.0)
    return pref / tau_factorial(1.0 + 1j * zc, tp, tol)
