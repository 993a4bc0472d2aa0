"""The identity registry: every beta-integral evaluation as an LHS/RHS
pair with its exact parameter-domain predicate, plus the limit-study
drivers and the residue-series cross-check.

Registry ids are stable strings forming the CLI contract.  Left-hand
sides are assembled from the qseries/hypgamma primitives exactly as the
identities are written; right-hand sides are the closed forms.  The
sqrt(-i tau) and q^{-1/24} qtilde^{1/24} constants always use the fixed
principal branch of the square root (positive on the nonnegative reals).
"""

from __future__ import annotations

import cmath
import math
import time
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np
from scipy.special import gamma as _scipy_gamma

from . import qseries, sums
from .errors import DomainViolation, PoleNearContour, UnknownIdentity
from .hypgamma import (
    HYPERBOLIC,
    TRIGONOMETRIC,
    TauParameter,
    tau_factorial,
    tau_factorial_log_many,
    tau_factorial_many,
    renorm_elliptic_gamma,
)
from .quadrature import Contour, QuadratureValue, integrate_circle, integrate_line, integrate_segment
from .sums import sqrt_neg_i_tau

MIN_POLE_CLEARANCE = 1e-3

# default tolerances: the |q| = 1 regime stresses the continuation chain
DEFAULT_TOL_TRIG = 1e-8
DEFAULT_TOL_HYPER = 1e-6


@dataclass(frozen=True)
class IdentityDescriptor:
    id: str
    anchor: str
    param_names: tuple
    domain: Callable
    lhs: Callable
    rhs: Callable
    default_tol: float
    default_params: dict
    sweep: Optional[Callable] = None
    clearance: Optional[Callable] = None


@dataclass(frozen=True)
class IdentityReport:
    id: str
    params: dict
    lhs_value: complex
    rhs_value: complex
    abs_err: float
    rel_err: float
    tol: float
    passed: bool
    diagnostics: dict = field(default_factory=dict)


REGISTRY: dict = {}


def _register(**kwargs):
    desc = IdentityDescriptor(**kwargs)
    REGISTRY[desc.id] = desc
    return desc


def identity_ids() -> list:
    return list(REGISTRY.keys())


def check_domain(identity_id: str, params: dict):
    """Evaluate every inequality of the identity's parameter domain;
    returns None when all hold, else the first DomainViolation (with the
    constraint named and the violating value) without raising."""
    desc = REGISTRY.get(identity_id)
    if desc is None:
        raise UnknownIdentity(identity_id)
    return desc.domain(params)


def evaluate_identity(identity_id: str, params: dict, tol: Optional[float] = None) -> IdentityReport:
    desc = REGISTRY.get(identity_id)
    if desc is None:
        raise UnknownIdentity(identity_id)
    violation = desc.domain(params)
    if violation is not None:
        raise violation
    if desc.clearance is not None:
        dist = desc.clearance(params)
        if dist is not None and dist < MIN_POLE_CLEARANCE:
            raise PoleNearContour(
                f"integrand pole within {dist:.2e} of the contour", pole=dist)
    tol = desc.default_tol if tol is None else float(tol)
    start = time.perf_counter()
    rhs = desc.rhs(params, tol)
    quad_tol = tol * max(abs(rhs), 1e-6) / 4.0
    lhs = desc.lhs(params, quad_tol)
    wall_ms = (time.perf_counter() - start) * 1e3
    abs_err = abs(lhs.value - rhs)
    rel_err = abs_err / abs(rhs) if abs(rhs) >= 1e-12 else abs_err
    diagnostics = {
        "evals": lhs.evals,
        "quad_err_est": lhs.err_est,
        "tail_bound": lhs.tail_bound,
        "truncation_radius": lhs.contour.truncation_radius,
        "wall_ms": wall_ms,
    }
    diagnostics.update(lhs.diagnostics)
    return IdentityReport(
        id=identity_id, params=dict(params),
        lhs_value=complex(lhs.value), rhs_value=complex(rhs),
        abs_err=abs_err, rel_err=rel_err, tol=tol,
        passed=(rel_err <= tol), diagnostics=diagnostics)


# ---------------------------------------------------------------------------
# helpers
# ---------------------------------------------------------------------------

def _tp_trig(params) -> TauParameter:
    return sums.as_trig_tau(params["tau"])


def _tp_hyper(params) -> TauParameter:
    """Hyperbolic-family tau: Re < 0 with Im >= 0.  Overlap points
    (Im > 0) evaluate through the trigonometric product route, pure
    |q| = 1 points through the hyperbolic gamma function."""
    tau = complex(params["tau"])
    if tau.imag > 0:
        return TauParameter(tau, regime=TRIGONOMETRIC)
    return TauParameter(tau, regime=HYPERBOLIC)


def _violation(name, value, bound) -> DomainViolation:
    return DomainViolation(name, value, bound)


def _require_trig_tau(params):
    tau = complex(params["tau"])
    if not tau.imag > 0:
        return _violation("Im(tau) > 0", tau.imag, 0.0)
    return None


def _require_hyper_tau(params):
    tau = complex(params["tau"])
    if not tau.real < 0:
        return _violation("Re(tau) < 0", tau.real, 0.0)
    if not tau.imag >= 0:
        return _violation("Im(tau) >= 0", tau.imag, 0.0)
    return None


def _pvec(params, names) -> list:
    return [complex(params[n]) for n in names]


def _qpoch(a, q, tol) -> complex:
    return qseries.qpoch_inf(a, q, tol).value


def _theta_fold_lhs(psi_log, tp, tol) -> Callable:
    """[0, 1]-integrand theta_{-1/tau}(x) * exp(psi_log(x)) used by the
    folded forms of the fused identities."""
    sigma = -1.0 / tp.tau

    def f(x):
        x = np.atleast_1d(np.asarray(x, dtype=complex))
        return qseries.theta_many(x, sigma, tol) * np.exp(psi_log(x))

    return f


# --- closed-form building blocks reused across identities ---

def _trig_aw_rhs(t, q, tol) -> complex:
    num = 2.0 * _qpoch(np.prod(np.asarray(t, dtype=complex)), q, tol)
    den = _qpoch(q, q, tol)
    for k in range(4):
        for m in range(k + 1, 4):
            den *= _qpoch(t[k] * t[m], q, tol)
    return num / den


def _trig_nr_rhs(t, q, tol) -> complex:
    big_a = complex(np.prod(np.asarray(t, dtype=complex)))
    num = 2.0 + 0j
    for tj in t:
        num *= _qpoch(big_a / tj, q, tol)
    den = _qpoch(q, q, tol)
    for k in range(5):
        for m in range(k + 1, 5):
            den *= _qpoch(t[k] * t[m], q, tol)
    return num / den


# ---------------------------------------------------------------------------
# engine calibration: Euler's beta integral
# ---------------------------------------------------------------------------

def _euler_domain(params):
    a, b = complex(params["a"]), complex(params["b"])
    for name, v in (("a", a), ("b", b)):
        if not v.real >= 1.0:
            return _violation(f"Re({name}) >= 1", v.real, 1.0)
    return None


def _euler_lhs(params, tol) -> QuadratureValue:
    a, b = complex(params["a"]), complex(params["b"])

    def f(x):
        return x ** (a - 1.0) * (1.0 - x) ** (b - 1.0)

    return integrate_segment(f, 0.0, 1.0, tol=tol)


def _euler_rhs(params, tol) -> complex:
    a, b = complex(params["a"]), complex(params["b"])
    return complex(_scipy_gamma(a) * _scipy_gamma(b) / _scipy_gamma(a + b))


_register(
    id="euler_beta_warmup",
    anchor="Euler beta integral",
    param_names=("a", "b"),
    domain=_euler_domain,
    lhs=_euler_lhs,
    rhs=_euler_rhs,
    default_tol=1e-9,
    default_params={"a": 2.5, "b": 3.5},
    sweep=lambda rng: {"a": 1.1 + 2.9 * rng.random(), "b": 1.1 + 2.9 * rng.random()},
)


# ---------------------------------------------------------------------------
# Gauss integral
# ---------------------------------------------------------------------------

def _gauss_lhs(params, tol) -> QuadratureValue:
    tp = _tp_trig(params)

    def f(x):
        return np.exp(1j * np.pi * tp.tau * x * x)

    return integrate_line(f, Contour("real_line"), tol=tol)


_register(
    id="gauss",
    anchor="Gauss integral of the q-Gaussian",
    param_names=(),
    domain=_require_trig_tau,
    lhs=_gauss_lhs,
    rhs=lambda params, tol: 1.0 / sqrt_neg_i_tau(params["tau"]),
    default_tol=DEFAULT_TOL_TRIG,
    default_params={"tau": 1j},
    sweep=lambda rng: {"tau": complex(rng.uniform(-0.5, 0.5), rng.uniform(0.25, 1.2))},
)


# ---------------------------------------------------------------------------
# trigonometric Ramanujan integral (period form) and its residue check
# ---------------------------------------------------------------------------

def _trig_ram_domain(params):
    v = _require_trig_tau(params)
    if v is not None:
        return v
    tp = _tp_trig(params)
    bound = abs(tp.q) ** -0.5
    for name in ("c", "d"):
        if not abs(complex(params[name])) < bound:
            return _violation(f"|{name}| < |q|^(-1/2)", abs(complex(params[name])), bound)
    return None


def _trig_ram_lhs(params, tol) -> QuadratureValue:
    tp = _tp_trig(params)
    c, d = complex(params["c"]), complex(params["d"])
    sq = tp.qpow(0.5)

    def f(x):
        x = np.atleast_1d(np.asarray(x, dtype=complex))
        den = (qseries.qpoch_many(-sq * c * np.exp(-2j * np.pi * x), tp.q, tol)
               * qseries.qpoch_many(-sq * d * np.exp(2j * np.pi * x), tp.q, tol))
        return qseries.theta_many(x, tp.tau, tol) / den

    return integrate_segment(f, 0.0, 1.0, tol=tol)


def _trig_ram_rhs(params, tol) -> complex:
    tp = _tp_trig(params)
    c, d = complex(params["c"]), complex(params["d"])
    return (_qpoch(tp.q * c, tp.q, tol) * _qpoch(tp.q * d, tp.q, tol)
            / _qpoch(tp.q * c * d, tp.q, tol))


def _trig_ram_clearance(params):
    tp = _tp_trig(params)
    c, d = complex(params["c"]), complex(params["d"])
    dists = []
    for m in range(6):
        if c != 0:
            dists.append(abs(abs(c) * abs(tp.q) ** (0.5 + m) - 1.0))
            dists.append(abs(abs(tp.q) ** (-0.5 - m) / abs(c) - 1.0))
        if d != 0:
            dists.append(abs(abs(d) * abs(tp.q) ** (0.5 + m) - 1.0))
            dists.append(abs(abs(tp.q) ** (-0.5 - m) / abs(d) - 1.0))
    # distance of pole images from the unit circle, mapped to x-plane scale
    return min(dists) / (2.0 * math.pi) if dists else None


def _trig_ram_sweep(rng):
    tau = complex(rng.uniform(-0.3, 0.3), rng.uniform(0.25, 0.8))
    bound = math.exp(math.pi * tau.imag)  # |q|^(-1/2)
    c = 0.9 * bound * (rng.random() * np.exp(2j * np.pi * rng.random()))
    d = 0.9 * bound * (rng.random() * np.exp(2j * np.pi * rng.random()))
    return {"tau": tau, "c": c, "d": d}


_register(
    id="trig_ramanujan",
    anchor="Ramanujan integral (lost-notebook family), period form",
    param_names=("c", "d"),
    domain=_trig_ram_domain,
    lhs=_trig_ram_lhs,
    rhs=_trig_ram_rhs,
    default_tol=DEFAULT_TOL_TRIG,
    default_params={"tau": 0.3j, "c": 0.8, "d": -0.5},
    sweep=_trig_ram_sweep,
    clearance=_trig_ram_clearance,
)


def residue_ramanujan(c, d, tau, tol: float = 1e-10) -> IdentityReport:
    """Three-way check of the Ramanujan integral on the stricter domain
    1 < |c| < |q|^(-1/2): the unit-circle quadrature, the residue series
    picked up by shrinking the contour to zero, and the closed form."""
    tp = sums.as_trig_tau(tau)
    c, d = complex(c), complex(d)
    bound = abs(tp.q) ** -0.5
    if not 1.0 < abs(c) < bound:
        raise DomainViolation("1 < |c| < |q|^(-1/2)", abs(c), (1.0, bound))
    if not 0.0 < abs(d) < bound:
        raise DomainViolation("0 < |d| < |q|^(-1/2)", abs(d), (0.0, bound))
    sq = tp.qpow(0.5)
    qq = _qpoch(tp.q, tp.q, tol)

    def g(theta):
        z = np.exp(1j * theta)
        return (qq * qseries.qpoch_many(-sq / z, tp.q, tol)
                * qseries.qpoch_many(-sq * z, tp.q, tol)
                / (qseries.qpoch_many(-sq * c / z, tp.q, tol)
                   * qseries.qpoch_many(-sq * d * z, tp.q, tol)))

    start = time.perf_counter()
    circle = integrate_circle(g, tol=tol)
    prefactor = (_qpoch(tp.q * c, tp.q, tol) * _qpoch(1.0 / c, tp.q, tol)
                 / _qpoch(tp.q * c * d, tp.q, tol))
    series = prefactor * qseries.phi_series([tp.q * c * d], [], tp.q, 1.0 / c, tol).value
    closed = (_qpoch(tp.q * c, tp.q, tol) * _qpoch(tp.q * d, tp.q, tol)
              / _qpoch(tp.q * c * d, tp.q, tol))
    wall_ms = (time.perf_counter() - start) * 1e3
    dev = max(abs(circle.value - closed), abs(series - closed), abs(circle.value - series))
    rel = dev / abs(closed)
    return IdentityReport(
        id="residue_ramanujan", params={"tau": tp.tau, "c": c, "d": d},
        lhs_value=complex(circle.value), rhs_value=complex(closed),
        abs_err=dev, rel_err=rel, tol=tol, passed=(rel <= tol),
        diagnostics={"residue_series": series, "evals": circle.evals,
                     "wall_ms": wall_ms})


# ---------------------------------------------------------------------------
# trigonometric Askey-Wilson and Nassrallah-Rahman (unit circle)
# ---------------------------------------------------------------------------

def _unit_disc_domain(names):
    def check(params):
        v = _require_trig_tau(params)
        if v is not None:
            return v
        for name in names:
            if not abs(complex(params[name])) < 1.0:
                return _violation(f"|{name}| < 1", abs(complex(params[name])), 1.0)
        return None

    return check


def _circle_clearance(tvals, q):
    dists = []
    for t in tvals:
        if t == 0:
            continue
        for m in range(8):
            dists.append(abs(abs(t) * abs(q) ** m - 1.0))
            dists.append(abs(1.0 / (abs(t) * abs(q) ** m) - 1.0))
    return min(dists) if dists else None


def _trig_aw_lhs(params, tol) -> QuadratureValue:
    tp = _tp_trig(params)
    t = _pvec(params, ("t1", "t2", "t3", "t4"))

    def g(theta):
        z = np.exp(1j * theta)
        num = qseries.qpoch_many(z * z, tp.q, tol) * qseries.qpoch_many(1.0 / (z * z), tp.q, tol)
        den = np.ones_like(num)
        for tj in t:
            den = den * qseries.qpoch_many(tj * z, tp.q, tol) * qseries.qpoch_many(tj / z, tp.q, tol)
        return num / den

    return integrate_circle(g, tol=tol)


_register(
    id="trig_askey_wilson",
    anchor="Askey-Wilson integral",
    param_names=("t1", "t2", "t3", "t4"),
    domain=_unit_disc_domain(("t1", "t2", "t3", "t4")),
    lhs=_trig_aw_lhs,
    rhs=lambda params, tol: _trig_aw_rhs(_pvec(params, ("t1", "t2", "t3", "t4")),
                                         _tp_trig(params).q, tol),
    default_tol=DEFAULT_TOL_TRIG,
    default_params={"tau": 0.3j, "t1": 0.3, "t2": 0.2, "t3": -0.25, "t4": 0.4j},
    sweep=lambda rng: dict(
        tau=complex(rng.uniform(-0.2, 0.2), rng.uniform(0.25, 0.6)),
        **{f"t{j}": 0.75 * math.sqrt(rng.random()) * np.exp(2j * np.pi * rng.random())
           for j in range(1, 5)}),
    clearance=lambda params: _circle_clearance(
        _pvec(params, ("t1", "t2", "t3", "t4")), _tp_trig(params).q),
)


def _trig_nr_lhs(params, tol) -> QuadratureValue:
    tp = _tp_trig(params)
    t = _pvec(params, ("t0", "t1", "t2", "t3", "t4"))
    big_a = complex(np.prod(np.asarray(t)))

    def g(theta):
        z = np.exp(1j * theta)
        num = (qseries.qpoch_many(z * z, tp.q, tol) * qseries.qpoch_many(1.0 / (z * z), tp.q, tol)
               * qseries.qpoch_many(big_a * z, tp.q, tol) * qseries.qpoch_many(big_a / z, tp.q, tol))
        den = np.ones_like(num)
        for tj in t:
            den = den * qseries.qpoch_many(tj * z, tp.q, tol) * qseries.qpoch_many(tj / z, tp.q, tol)
        return num / den

    return integrate_circle(g, tol=tol)


_register(
    id="trig_nassrallah_rahman",
    anchor="Nassrallah-Rahman integral",
    param_names=("t0", "t1", "t2", "t3", "t4"),
    domain=_unit_disc_domain(("t0", "t1", "t2", "t3", "t4")),
    lhs=_trig_nr_lhs,
    rhs=lambda params, tol: _trig_nr_rhs(_pvec(params, ("t0", "t1", "t2", "t3", "t4")),
                                         _tp_trig(params).q, tol),
    default_tol=DEFAULT_TOL_TRIG,
    default_params={"tau": 0.3j, "t0": 0.35, "t1": 0.3, "t2": 0.2, "t3": -0.25, "t4": 0.4j},
    sweep=lambda rng: dict(
        tau=complex(rng.uniform(-0.2, 0.2), rng.uniform(0.25, 0.6)),
        **{f"t{j}": 0.7 * math.sqrt(rng.random()) * np.exp(2j * np.pi * rng.random())
           for j in range(5)}),
    clearance=lambda params: _circle_clearance(
        _pvec(params, ("t0", "t1", "t2", "t3", "t4")), _tp_trig(params).q),
)


# ---------------------------------------------------------------------------
# elliptic Nassrallah-Rahman (unit circle, two bases)
# ---------------------------------------------------------------------------

def _ell_grids(p1, p2, tol):
    def length(p, other):
        if p == 0.0:
            return 1
        target = tol / 20.0 * (1.0 - abs(p)) * max(1.0 - abs(other), 1e-6)
        return max(int(math.ceil(math.log(target / 4.0) / math.log(abs(p)))), 1)

    nk, nm = length(p1, p2), length(p2, p1)
    pk = np.asarray(p1, dtype=complex) ** np.arange(nk)
    pm = np.asarray(p2, dtype=complex) ** np.arange(nm)
    return np.outer(pk, pm).ravel()


def _ell_many(z, grid, p1p2) -> np.ndarray:
    """Elliptic gamma over an array of arguments, shared power grid."""
    z = np.asarray(z, dtype=complex)
    num = np.prod(1.0 - (p1p2 / z)[:, None] * grid[None, :], axis=1)
    den = np.prod(1.0 - z[:, None] * grid[None, :], axis=1)
    return num / den


def _ell_recip_many(z, grid, p1p2) -> np.ndarray:
    """Reciprocal elliptic gamma (zeros where the gamma has poles), which
    keeps the contour integrand finite at z^2 = 1."""
    z = np.asarray(z, dtype=complex)
    num = np.prod(1.0 - z[:, None] * grid[None, :], axis=1)
    den = np.prod(1.0 - (p1p2 / z)[:, None] * grid[None, :], axis=1)
    return num / den


def _ell_nr_domain(params):
    t = _pvec(params, ("t0", "t1", "t2", "t3", "t4"))
    p1, p2 = complex(params["p1"]), complex(params["p2"])
    for j, tj in enumerate(t):
        if not abs(tj) < 1.0:
            return _violation(f"|t{j}| < 1", abs(tj), 1.0)
    for name, p in (("p1", p1), ("p2", p2)):
        if not abs(p) < 1.0:
            return _violation(f"|{name}| < 1", abs(p), 1.0)
    big_a = abs(np.prod(np.asarray(t)))
    if not abs(p1 * p2) < big_a:
        return _violation("|p1 p2| < |A|", abs(p1 * p2), big_a)
    return None


def _ell_nr_lhs(params, tol) -> QuadratureValue:
    t = _pvec(params, ("t0", "t1", "t2", "t3", "t4"))
    p1, p2 = complex(params["p1"]), complex(params["p2"])
    big_a = complex(np.prod(np.asarray(t)))
    grid = _ell_grids(p1, p2, tol)
    pp = p1 * p2

    def g(theta):
        z = np.exp(1j * theta)
        val = np.ones_like(z)
        for tj in t:
            val = val * _ell_many(tj * z, grid, pp) * _ell_many(tj / z, grid, pp)
        val = (val * _ell_recip_many(z * z, grid, pp) * _ell_recip_many(1.0 / (z * z), grid, pp)
               * _ell_recip_many(big_a * z, grid, pp) * _ell_recip_many(big_a / z, grid, pp))
        return val

    return integrate_circle(g, tol=tol)


def _ell_nr_rhs(params, tol) -> complex:
    t = _pvec(params, ("t0", "t1", "t2", "t3", "t4"))
    p1, p2 = complex(params["p1"]), complex(params["p2"])
    big_a = complex(np.prod(np.asarray(t)))
    grid = _ell_grids(p1, p2, min(tol, 1e-12))
    pp = p1 * p2
    val = 2.0 / (_qpoch(p1, p1, tol) * _qpoch(p2, p2, tol))
    args = []
    for k in range(5):
        for m in range(k + 1, 5):
            args.append(t[k] * t[m])
    val *= complex(np.prod(_ell_many(np.array(args), grid, pp)))
    val /= complex(np.prod(_ell_many(np.array([big_a / tj for tj in t]), grid, pp)))
    return val


_register(
    id="elliptic_nassrallah_rahman",
    anchor="elliptic beta integral (Spiridonov)",
    param_names=("t0", "t1", "t2", "t3", "t4", "p1", "p2"),
    domain=_ell_nr_domain,
    lhs=_ell_nr_lhs,
    rhs=_ell_nr_rhs,
    default_tol=DEFAULT_TOL_TRIG,
    default_params={"tau": 0.3j, "t0": 0.65, "t1": 0.6, "t2": 0.55, "t3": -0.62,
                    "t4": 0.58j, "p1": 0.15, "p2": 0.2},
    sweep=lambda rng: dict(
        tau=0.3j,
        p1=0.05 + 0.15 * rng.random(), p2=0.05 + 0.15 * rng.random(),
        **{f"t{j}": (0.5 + 0.3 * rng.random()) * np.exp(2j * np.pi * rng.random())
           for j in range(5)}),
    clearance=lambda params: _circle_clearance(
        _pvec(params, ("t0", "t1", "t2", "t3", "t4")),
        max(abs(complex(params["p1"])), abs(complex(params["p2"])))),
)


# ---------------------------------------------------------------------------
# fused (real-line) integrals
# ---------------------------------------------------------------------------

def _fused_ram_domain(params):
    v = _require_trig_tau(params)
    if v is not None:
        return v
    tp = _tp_trig(params)
    for name in ("a", "b"):
        m = abs(complex(params[name]))
        if not 0.0 < m < 1.0:
            return _violation(f"0 < |{name}| < 1", m, (0.0, 1.0))
    bound = abs(tp.qtilde) ** -0.5
    for name in ("c", "d"):
        if not abs(complex(params[name])) < bound:
            return _violation(f"|{name}| < |qtilde|^(-1/2)", abs(complex(params[name])), bound)
    return None


def _ram_psi_log(c, d, tp, tol):
    """log of the qtilde-base denominator pair of the Ramanujan family."""
    sqt = tp.qtpow(0.5)

    def psi_log(x):
        return -(qseries.qpoch_log_many(-sqt * c * np.exp(-2j * np.pi * x), tp.qtilde, tol)
                 + qseries.qpoch_log_many(-sqt * d * np.exp(2j * np.pi * x), tp.qtilde, tol))

    return psi_log


def _logpoch_qpow(tp, u, tol, negate=False):
    """log of (+-q^u; q)_infinity for an array of exponents u."""
    logw = 2j * np.pi * tp.tau * np.asarray(u, dtype=complex)
    if negate:
        logw = logw + 1j * math.pi
    return qseries.qpoch_log_logarg(logw, tp.q, tol)


def _logpoch_scaled_qpow(tp, const, u, tol):
    """log of (const * q^u; q)_infinity, const a nonzero scalar."""
    logw = cmath.log(complex(const)) + 2j * np.pi * tp.tau * np.asarray(u, dtype=complex)
    return qseries.qpoch_log_logarg(logw, tp.q, tol)


def _fused_ram_lhs(params, tol) -> QuadratureValue:
    tp = _tp_trig(params)
    a, b = complex(params["a"]), complex(params["b"])
    c, d = complex(params["c"]), complex(params["d"])
    psi_log = _ram_psi_log(c, d, tp, tol)

    def f(x):
        x = np.atleast_1d(np.asarray(x, dtype=complex))
        log = (_logpoch_scaled_qpow(tp, -a, 0.5 + x, tol)
               + _logpoch_scaled_qpow(tp, -b, 0.5 - x, tol)
               + psi_log(x) + 1j * np.pi * tp.tau * x * x)
        return np.exp(log)

    return integrate_line(f, Contour("real_line"), tol=tol)


def _fused_ram_rhs(params, tol) -> complex:
    tp = _tp_trig(params)
    a, b = complex(params["a"]), complex(params["b"])
    c, d = complex(params["c"]), complex(params["d"])
    return (sums.ramanujan_closed_constant(a, b, tp, tol)
            * _qpoch(tp.qtilde * c, tp.qtilde, tol) * _qpoch(tp.qtilde * d, tp.qtilde, tol)
            / _qpoch(tp.qtilde * c * d, tp.qtilde, tol))


def fused_ramanujan_folded(params, tol: float = 1e-10) -> QuadratureValue:
    """The [0, 1] integral of the folded integrand (closed bilateral sum
    times theta over the qtilde-base period factor); equals the real-line
    fused integral by the folding mechanism."""
    tp = _tp_trig(params)
    a, b = complex(params["a"]), complex(params["b"])
    c, d = complex(params["c"]), complex(params["d"])
    const = sums.ramanujan_closed_constant(a, b, tp, tol)
    f = _theta_fold_lhs(_ram_psi_log(c, d, tp, tol), tp, tol)
    res = integrate_segment(f, 0.0, 1.0, tol=tol)
    return QuadratureValue(res.value * const, res.err_est * abs(const), res.evals,
                           res.contour)


def _line_clearance_qt(tvals, tp):
    """Clearance of qtilde-base pole images from the real x-axis."""
    dists = []
    lq = -math.log(abs(tp.qtilde))
    for t in tvals:
        if t == 0:
            continue
        for m in range(4):
            # |t| |qtilde|^(1/2+m) = 1 on the line; distance in Im x
            dists.append(abs(math.log(abs(t)) - (0.5 + m) * lq) / (2.0 * math.pi))
    return min(dists) if dists else None


_register(
    id="fused_ramanujan",
    anchor="fused Ramanujan integral (bilateral 1psi1 times beta integral)",
    param_names=("a", "b", "c", "d"),
    domain=_fused_ram_domain,
    lhs=_fused_ram_lhs,
    rhs=_fused_ram_rhs,
    default_tol=DEFAULT_TOL_TRIG,
    default_params={"tau": 0.4 + 0.45j, "a": 0.5, "b": 0.4, "c": 0.7, "d": -0.3},
    sweep=lambda rng: dict(
        tau=complex(rng.uniform(-0.25, 0.25), rng.uniform(0.35, 0.8)),
        a=(0.1 + 0.75 * rng.random()) * np.exp(2j * np.pi * rng.random()),
        b=(0.1 + 0.75 * rng.random()) * np.exp(2j * np.pi * rng.random()),
        c=0.8 * rng.random() * np.exp(2j * np.pi * rng.random()),
        d=0.8 * rng.random() * np.exp(2j * np.pi * rng.random())),
    clearance=lambda params: _line_clearance_qt(
        [complex(params["c"]), complex(params["d"])], _tp_trig(params)),
)


def _ram_lost1_lhs(params, tol) -> QuadratureValue:
    tp = _tp_trig(params)
    c, d = complex(params["c"]), complex(params["d"])
    psi_log = _ram_psi_log(c, d, tp, tol)

    def f(x):
        x = np.atleast_1d(np.asarray(x, dtype=complex))
        return np.exp(psi_log(x) + 1j * np.pi * tp.tau * x * x)

    return integrate_line(f, Contour("real_line"), tol=tol)


def _ram_lost1_rhs(params, tol) -> complex:
    tp = _tp_trig(params)
    c, d = complex(params["c"]), complex(params["d"])
    return (_qpoch(tp.qtilde * c, tp.qtilde, tol) * _qpoch(tp.qtilde * d, tp.qtilde, tol)
            / (_qpoch(tp.qtilde * c * d, tp.qtilde, tol) * sqrt_neg_i_tau(tp.tau)))


def _ram_lost1_domain(params):
    v = _require_trig_tau(params)
    if v is not None:
        return v
    bound = abs(_tp_trig(params).qtilde) ** -0.5
    for name in ("c", "d"):
        if not abs(complex(params[name])) < bound:
            return _violation(f"|{name}| < |qtilde|^(-1/2)", abs(complex(params[name])), bound)
    return None


_register(
    id="ram_lost_1",
    anchor="Ramanujan lost-notebook beta integral, first form",
    param_names=("c", "d"),
    domain=_ram_lost1_domain,
    lhs=_ram_lost1_lhs,
    rhs=_ram_lost1_rhs,
    default_tol=DEFAULT_TOL_TRIG,
    default_params={"tau": 0.4 + 0.45j, "c": 0.7, "d": -0.3},
    sweep=lambda rng: dict(
        tau=complex(rng.uniform(-0.25, 0.25), rng.uniform(0.35, 0.8)),
        c=0.8 * rng.random() * np.exp(2j * np.pi * rng.random()),
        d=0.8 * rng.random() * np.exp(2j * np.pi * rng.random())),
    clearance=lambda params: _line_clearance_qt(
        [complex(params["c"]), complex(params["d"])], _tp_trig(params)),
)


def _ram_lost2_lhs(params, tol) -> QuadratureValue:
    tp = _tp_trig(params)
    a, b = complex(params["a"]), complex(params["b"])

    def f(x):
        x = np.atleast_1d(np.asarray(x, dtype=complex))
        log = (_logpoch_scaled_qpow(tp, -a, 0.5 + x, tol)
               + _logpoch_scaled_qpow(tp, -b, 0.5 - x, tol))
        return np.exp(log + 1j * np.pi * tp.tau * x * x)

    return integrate_line(f, Contour("real_line"), tol=tol)


def _ram_lost2_domain(params):
    v = _require_trig_tau(params)
    if v is not None:
        return v
    for name in ("a", "b"):
        if not abs(complex(params[name])) < 1.0:
            return _violation(f"|{name}| < 1", abs(complex(params[name])), 1.0)
    return None


_register(
    id="ram_lost_2",
    anchor="Ramanujan lost-notebook beta integral, second form",
    param_names=("a", "b"),
    domain=_ram_lost2_domain,
    lhs=_ram_lost2_lhs,
    rhs=lambda params, tol: sums.ramanujan_closed_constant(
        complex(params["a"]), complex(params["b"]), _tp_trig(params), tol),
    default_tol=DEFAULT_TOL_TRIG,
    default_params={"tau": 0.4 + 0.45j, "a": 0.5, "b": 0.4},
    sweep=lambda rng: dict(
        tau=complex(rng.uniform(-0.25, 0.25), rng.uniform(0.35, 0.8)),
        a=(0.1 + 0.75 * rng.random()) * np.exp(2j * np.pi * rng.random()),
        b=(0.1 + 0.75 * rng.random()) * np.exp(2j * np.pi * rng.random())),
)


# --- fused Askey-Wilson ---

def _fused_aw_integrand_log(s, t, tp, tol):
    sqt = tp.qtpow(0.5)

    def logf(x):
        e_plus = np.exp(2j * np.pi * x)
        e_minus = np.exp(-2j * np.pi * x)
        log = (qseries.qpoch_log_many(e_plus, tp.qtilde, tol)
               + qseries.qpoch_log_many(e_minus, tp.qtilde, tol)
               + qseries.qpoch_log_many(-e_plus, tp.qtilde, tol)
               + qseries.qpoch_log_many(-e_minus, tp.qtilde, tol)
               + qseries.qpoch_log_many(sqt * e_plus, tp.qtilde, tol)
               + qseries.qpoch_log_many(sqt * e_minus, tp.qtilde, tol))
        for sign in (1.0, -1.0):
            log -= (_logpoch_qpow(tp, 1 + sign * x, tol)
                    + _logpoch_qpow(tp, 1 + sign * x, tol, negate=True)
                    + _logpoch_qpow(tp, 0.5 + sign * x, tol))
        for sj in s:
            log += (_logpoch_scaled_qpow(tp, sj, x, tol)
                    + _logpoch_scaled_qpow(tp, sj, -x, tol))
        for tj in t:
            log -= (qseries.qpoch_log_many(tj * e_plus, tp.qtilde, tol)
                    + qseries.qpoch_log_many(tj * e_minus, tp.qtilde, tol))
        return log + 1j * np.pi * tp.tau * x * x

    return logf


def _fused_aw_domain(params):
    v = _require_trig_tau(params)
    if v is not None:
        return v
    tp = _tp_trig(params)
    s = _pvec(params, ("s1", "s2", "s3", "s4"))
    mod = abs(np.prod(np.asarray(s)) * tp.qpow(-3.0))
    if not mod < 1.0:
        return _violation("|q^-3 s1 s2 s3 s4| < 1", mod, 1.0)
    for j in range(1, 5):
        if not abs(complex(params[f"t{j}"])) < 1.0:
            return _violation(f"|t{j}| < 1", abs(complex(params[f"t{j}"])), 1.0)
    return None


def _fused_aw_lhs(params, tol) -> QuadratureValue:
    tp = _tp_trig(params)
    s = _pvec(params, ("s1", "s2", "s3", "s4"))
    t = _pvec(params, ("t1", "t2", "t3", "t4"))
    logf = _fused_aw_integrand_log(s, t, tp, tol)

    def f(x):
        x = np.atleast_1d(np.asarray(x, dtype=complex))
        return np.exp(logf(x))

    return integrate_line(f, Contour("real_line"), tol=tol)


def _fused_aw_rhs(params, tol) -> complex:
    tp = _tp_trig(params)
    s = _pvec(params, ("s1", "s2", "s3", "s4"))
    t = _pvec(params, ("t1", "t2", "t3", "t4"))
    val = (2.0 / sqrt_neg_i_tau(tp.tau)
           * _qpoch(np.prod(np.asarray(t)), tp.qtilde, tol)
           / _qpoch(np.prod(np.asarray(s)) * tp.qpow(-3.0), tp.q, tol))
    for k in range(4):
        for m in range(k + 1, 4):
            val *= (_qpoch(s[k] * s[m] * tp.qpow(-1.0), tp.q, tol)
                    / _qpoch(t[k] * t[m], tp.qtilde, tol))
    return val


def fused_askey_wilson_folded(params, tol: float = 1e-10) -> QuadratureValue:
    """[0, 1] integral of the folded fused-AW integrand: the 6psi6 closed
    constant times theta against the one-periodic qtilde-base factor."""
    tp = _tp_trig(params)
    s = _pvec(params, ("s1", "s2", "s3", "s4"))
    t = _pvec(params, ("t1", "t2", "t3", "t4"))
    const = sums.bailey_closed_constant(s, tp, tol)
    sqt = tp.qtpow(0.5)

    def w_log(x):
        e_plus = np.exp(2j * np.pi * x)
        e_minus = np.exp(-2j * np.pi * x)
        log = (qseries.qpoch_log_many(e_plus, tp.qtilde, tol)
               + qseries.qpoch_log_many(e_minus, tp.qtilde, tol)
               + qseries.qpoch_log_many(-e_plus, tp.qtilde, tol)
               + qseries.qpoch_log_many(-e_minus, tp.qtilde, tol)
               + qseries.qpoch_log_many(sqt * e_plus, tp.qtilde, tol)
               + qseries.qpoch_log_many(sqt * e_minus, tp.qtilde, tol))
        for tj in t:
            log -= (qseries.qpoch_log_many(tj * e_plus, tp.qtilde, tol)
                    + qseries.qpoch_log_many(tj * e_minus, tp.qtilde, tol))
        return log

    f = _theta_fold_lhs(w_log, tp, tol)
    res = integrate_segment(f, 0.0, 1.0, tol=tol)
    return QuadratureValue(res.value * const, res.err_est * abs(const), res.evals,
                           res.contour)


_register(
    id="fused_askey_wilson",
    anchor="fused Askey-Wilson integral (bilateral 6psi6 times beta integral)",
    param_names=("s1", "s2", "s3", "s4", "t1", "t2", "t3", "t4"),
    domain=_fused_aw_domain,
    lhs=_fused_aw_lhs,
    rhs=_fused_aw_rhs,
    default_tol=DEFAULT_TOL_TRIG,
    default_params={"tau": 0.3j, "s1": 0.2, "s2": 0.15, "s3": 0.1, "s4": 0.12,
                    "t1": 0.4, "t2": 0.3, "t3": -0.35, "t4": 0.25j},
    sweep=lambda rng: dict(
        tau=complex(rng.uniform(-0.15, 0.15), rng.uniform(0.28, 0.5)),
        **{f"s{j}": 0.28 * rng.random() * np.exp(2j * np.pi * rng.random())
           for j in range(1, 5)},
        **{f"t{j}": 0.7 * math.sqrt(rng.random()) * np.exp(2j * np.pi * rng.random())
           for j in range(1, 5)}),
    clearance=lambda params: _line_clearance_qt(
        _pvec(params, ("t1", "t2", "t3", "t4")), _tp_trig(params)),
)


# --- Macdonald-Mehta type integrals ---

def _mm_cherednik_domain(params):
    v = _require_trig_tau(params)
    if v is not None:
        return v
    k = complex(params["k"])
    if not (abs(k.imag) < 1e-12 and k.real > 0):
        return _violation("k > 0", k, 0.0)
    return None


def _mm_cherednik_lhs(params, tol) -> QuadratureValue:
    tp = _tp_trig(params)
    k = complex(params["k"]).real
    qt2 = tp.qtpow(2.0)
    qt2k = tp.qtpow(2.0 * k)

    def f(x):
        x = np.atleast_1d(np.asarray(x, dtype=complex))
        e_plus = np.exp(4j * np.pi * x)
        e_minus = np.exp(-4j * np.pi * x)
        log = (qseries.qpoch_log_many(e_plus, qt2, tol)
               + qseries.qpoch_log_many(e_minus, qt2, tol)
               - qseries.qpoch_log_many(qt2k * e_plus, qt2, tol)
               - qseries.qpoch_log_many(qt2k * e_minus, qt2, tol))
        return np.exp(log + 1j * np.pi * tp.tau * x * x)

    return integrate_line(f, Contour("real_line"), tol=tol)


def _mm_cherednik_rhs(params, tol) -> complex:
    tp = _tp_trig(params)
    k = complex(params["k"]).real
    qt2 = tp.qtpow(2.0)
    return (2.0 / sqrt_neg_i_tau(tp.tau)
            * _qpoch(tp.qtpow(2.0 * k), qt2, tol) / _qpoch(tp.qtpow(4.0 * k), qt2, tol))


_register(
    id="mm_cherednik",
    anchor="one-variable Macdonald-Mehta integral (Cherednik)",
    param_names=("k",),
    domain=_mm_cherednik_domain,
    lhs=_mm_cherednik_lhs,
    rhs=_mm_cherednik_rhs,
    default_tol=DEFAULT_TOL_TRIG,
    default_params={"tau": 0.4 + 0.45j, "k": 0.75},
    sweep=lambda rng: dict(tau=complex(rng.uniform(-0.25, 0.25), rng.uniform(0.35, 0.8)),
                           k=0.2 + 1.5 * rng.random()),
)


def _mm_nr_domain(params):
    return _unit_disc_domain(("t0", "t1", "t2", "t3", "t4"))(params)


def _mm_nr_lhs(params, tol) -> QuadratureValue:
    tp = _tp_trig(params)
    t = _pvec(params, ("t0", "t1", "t2", "t3", "t4"))
    big_a = complex(np.prod(np.asarray(t)))
    sqt = tp.qtpow(0.5)

    def f(x):
        x = np.atleast_1d(np.asarray(x, dtype=complex))
        e_plus = np.exp(2j * np.pi * x)
        e_minus = np.exp(-2j * np.pi * x)
        log = np.zeros_like(x)
        for w in (e_plus, e_minus):
            log += (qseries.qpoch_log_many(w, tp.qtilde, tol)
                    + qseries.qpoch_log_many(-w, tp.qtilde, tol)
                    + qseries.qpoch_log_many(sqt * w, tp.qtilde, tol)
                    + qseries.qpoch_log_many(big_a * w, tp.qtilde, tol))
            for tj in t:
                log -= qseries.qpoch_log_many(tj * w, tp.qtilde, tol)
        return np.exp(log + 1j * np.pi * tp.tau * x * x)

    return integrate_line(f, Contour("real_line"), tol=tol)


def _mm_nr_rhs(params, tol) -> complex:
    tp = _tp_trig(params)
    t = _pvec(params, ("t0", "t1", "t2", "t3", "t4"))
    big_a = complex(np.prod(np.asarray(t)))
    val = 2.0 / sqrt_neg_i_tau(tp.tau)
    for tj in t:
        val *= _qpoch(big_a / tj, tp.qtilde, tol)
    for k in range(5):
        for m in range(k + 1, 5):
            val /= _qpoch(t[k] * t[m], tp.qtilde, tol)
    return val


_register(
    id="mm_nassrallah_rahman",
    anchor="Macdonald-Mehta type integral of Nassrallah-Rahman form",
    param_names=("t0", "t1", "t2", "t3", "t4"),
    domain=_mm_nr_domain,
    lhs=_mm_nr_lhs,
    rhs=_mm_nr_rhs,
    default_tol=DEFAULT_TOL_TRIG,
    default_params={"tau": 0.4 + 0.45j, "t0": 0.35, "t1": 0.3, "t2": 0.2,
                    "t3": -0.25, "t4": 0.4j},
    sweep=lambda rng: dict(
        tau=complex(rng.uniform(-0.25, 0.25), rng.uniform(0.35, 0.8)),
        **{f"t{j}": 0.7 * math.sqrt(rng.random()) * np.exp(2j * np.pi * rng.random())
           for j in range(5)}),
    clearance=lambda params: _line_clearance_qt(
        _pvec(params, ("t0", "t1", "t2", "t3", "t4")), _tp_trig(params)),
)


# --- fused Nassrallah-Rahman ---

def _fused_nr_domain(params):
    v = _require_trig_tau(params)
    if v is not None:
        return v
    tau = complex(params["tau"])
    exps = _pvec(params, ("tau0", "tau1", "tau2", "tau3", "tau4"))
    for j, e in enumerate(exps):
        if not e.imag < 0:
            return _violation(f"Im(tau{j}) < 0", e.imag, 0.0)
    a = sum(exps)
    if not a.imag > (1.0 / tau).imag:
        return _violation("Im(a) > Im(1/tau)", a.imag, (1.0 / tau).imag)
    return None


def _fused_nr_lhs(params, tol) -> QuadratureValue:
    # same integrand as the hyperbolic Nassrallah-Rahman family, taken
    # over the real line at tau in the upper half plane
    return integrate_line(_hyper_nr_integrand(params, tol),
                          Contour("real_line"), tol=tol)


def _hyper_style_nr_rhs(exps, tp, tol, sign=+1.0) -> complex:
    a = sum(exps)
    val = sign * 2.0 * tp.eta_constant / sqrt_neg_i_tau(tp.tau)
    for e in exps:
        val *= tau_factorial(a - e - 3.0, tp, tol)
    for k in range(5):
        for m in range(k + 1, 5):
            val /= tau_factorial(exps[k] + exps[m] - 1.0, tp, tol)
    return val


_register(
    id="fused_nassrallah_rahman",
    anchor="fused Nassrallah-Rahman integral (weak bilateral 8psi8 fusion)",
    param_names=("tau0", "tau1", "tau2", "tau3", "tau4"),
    domain=_fused_nr_domain,
    lhs=_fused_nr_lhs,
    rhs=lambda params, tol: _hyper_style_nr_rhs(
        _pvec(params, ("tau0", "tau1", "tau2", "tau3", "tau4")), _tp_trig(params),
        tol, sign=+1.0),
    default_tol=DEFAULT_TOL_TRIG,
    default_params={"tau": 0.3j, "tau0": 0.9 - 0.05j, "tau1": 0.85 - 0.08j,
                    "tau2": 0.9 - 0.11j, "tau3": 0.85 - 0.14j, "tau4": 0.9 - 0.17j},
    sweep=lambda rng: dict(
        tau=complex(rng.uniform(-0.1, 0.1), rng.uniform(0.28, 0.45)),
        **{f"tau{j}": complex(rng.uniform(0.7, 0.98), -rng.uniform(0.03, 0.2))
           for j in range(5)}),
)


# ---------------------------------------------------------------------------
# hyperbolic integrals over the imaginary axis
# ---------------------------------------------------------------------------

def _hyper_ram_domain(params):
    v = _require_hyper_tau(params)
    if v is not None:
        return v
    tau = complex(params["tau"])
    alpha, beta = complex(params["alpha"]), complex(params["beta"])
    for name, u in (("alpha", alpha), ("beta", beta)):
        if not (tau * u).real < 0:
            return _violation(f"Re(tau*{name}) < 0", (tau * u).real, 0.0)
    for name, u in (("alpha", alpha), ("beta", beta)):
        val = (u - 0.5 + 0.5 / tau).real
        if not val < 0:
            return _violation(f"Re({name} - 1/2 + 1/(2 tau)) < 0", val, 0.0)
    return None


def _tf_quotient(tp, inner):
    """prod [num_j; tau] / prod [den_j; tau] over argument arrays, by the
    regime-appropriate route (log-space products survive the real-line
    contours where individual factors overflow)."""
    if tp.regime == TRIGONOMETRIC:
        def quotient(nums, dens):
            log = np.zeros_like(nums[0])
            for w in nums:
                log = log + tau_factorial_log_many(w, tp, inner)
            for w in dens:
                log = log - tau_factorial_log_many(w, tp, inner)
            return np.exp(log)
    else:
        def quotient(nums, dens):
            val = np.ones_like(nums[0])
            for w in nums:
                val = val * tau_factorial_many(w, tp, inner)
            for w in dens:
                val = val / tau_factorial_many(w, tp, inner)
            return val
    return quotient


def _hyper_ram_integrand(params, tol):
    tp = _tp_hyper(params)
    alpha, beta = complex(params["alpha"]), complex(params["beta"])
    c = tp.c_offset
    quotient = _tf_quotient(tp, min(tol * 1e-2, 1e-11))

    def f(z):
        z = np.atleast_1d(np.asarray(z, dtype=complex))
        return quotient([c + z, c - z], [c + alpha + z, c + beta - z])

    return f


def _hyper_ram_lhs(params, tol) -> QuadratureValue:
    tau = complex(params["tau"])
    alpha, beta = complex(params["alpha"]), complex(params["beta"])
    decay = 2.0 * math.pi * min(-(tau * alpha).real, -(tau * beta).real)
    return integrate_line(_hyper_ram_integrand(params, tol),
                          Contour("imaginary_line"), decay=decay, tol=tol)


def _hyper_ram_rhs(params, tol) -> complex:
    tp = _tp_hyper(params)
    alpha, beta = complex(params["alpha"]), complex(params["beta"])
    inv = 1.0 / tp.tau
    return (-tp.eta_constant / sqrt_neg_i_tau(tp.tau)
            * tau_factorial(inv + alpha, tp, tol) * tau_factorial(inv + beta, tp, tol)
            / tau_factorial(inv + alpha + beta, tp, tol))


def _hyper_imag_axis_clearance(tp, num_offsets, den_offsets):
    """Min |Re| over pole positions of the integrand on the z-plane:
    numerator factorial poles and denominator factorial zeros."""
    inv = 1.0 / tp.tau
    dists = []
    for off, sgn in num_offsets:
        for k in range(1, 5):
            for m in range(0, 5):
                dists.append(abs((sgn * (k * inv - m - off)).real))
    for off, sgn in den_offsets:
        for k in range(0, 5):
            for m in range(1, 6):
                dists.append(abs((sgn * (-k * inv + m - off)).real))
    return min(dists) if dists else None


def _hyper_ram_clearance(params):
    tp = _tp_hyper(params)
    c = tp.c_offset
    alpha, beta = complex(params["alpha"]), complex(params["beta"])
    return _hyper_imag_axis_clearance(
        tp,
        [(c, 1.0), (c, -1.0)],
        [(c + alpha, 1.0), (c + beta, -1.0)])


_register(
    id="hyper_ramanujan",
    anchor="beta integral of Ramanujan type for the modular-pair gamma function",
    param_names=("alpha", "beta"),
    domain=_hyper_ram_domain,
    lhs=_hyper_ram_lhs,
    rhs=_hyper_ram_rhs,
    default_tol=DEFAULT_TOL_HYPER,
    default_params={"tau": -math.sqrt(2.0), "alpha": 0.3, "beta": 0.3},
    sweep=lambda rng: dict(tau=complex(-rng.uniform(0.9, 1.8), rng.uniform(0.0, 0.6)),
                           alpha=rng.uniform(0.1, 0.45), beta=rng.uniform(0.1, 0.45)),
    clearance=_hyper_ram_clearance,
)


def _hyper_aw_domain(params):
    v = _require_hyper_tau(params)
    if v is not None:
        return v
    tau = complex(params["tau"])
    exps = _pvec(params, ("tau1", "tau2", "tau3", "tau4"))
    for j, e in enumerate(exps, start=1):
        if not e.real < 1.0:
            return _violation(f"Re(tau{j}) < 1", e.real, 1.0)
    val = ((sum(exps) - 3.0) * tau).real
    if not val < 1.0:
        return _violation("Re((tau1+tau2+tau3+tau4-3)*tau) < 1", val, 1.0)
    return None


def _hyper_aw_integrand(params, tol):
    tp = _tp_hyper(params)
    exps = _pvec(params, ("tau1", "tau2", "tau3", "tau4"))
    quotient = _tf_quotient(tp, min(tol * 1e-2, 1e-11))

    def f(z):
        z = np.atleast_1d(np.asarray(z, dtype=complex))
        dens = [e + s * z for e in exps for s in (1.0, -1.0)]
        return quotient([1.0 + 2.0 * z, 1.0 - 2.0 * z], dens)

    return f


def _hyper_aw_lhs(params, tol) -> QuadratureValue:
    tau = complex(params["tau"])
    exps = _pvec(params, ("tau1", "tau2", "tau3", "tau4"))
    decay = 2.0 * math.pi * (1.0 - ((sum(exps) - 3.0) * tau).real)
    return integrate_line(_hyper_aw_integrand(params, tol),
                          Contour("imaginary_line"), decay=decay, tol=tol)


def _hyper_aw_rhs(params, tol) -> complex:
    tp = _tp_hyper(params)
    exps = _pvec(params, ("tau1", "tau2", "tau3", "tau4"))
    val = (-2.0 * tp.eta_constant / sqrt_neg_i_tau(tp.tau)
           * tau_factorial(sum(exps) - 3.0, tp, tol))
    for k in range(4):
        for m in range(k + 1, 4):
            val /= tau_factorial(exps[k] + exps[m] - 1.0, tp, tol)
    return val


def _hyper_aw_clearance(params):
    tp = _tp_hyper(params)
    exps = _pvec(params, ("tau1", "tau2", "tau3", "tau4"))
    num_offsets = [(1.0, 0.5), (1.0, -0.5)]  # [1 +- 2z]: pole at z = +-(p-1)/2
    inv = 1.0 / tp.tau
    dists = []
    for k in range(1, 5):
        for m in range(0, 5):
            dists.append(abs(((k * inv - m - 1.0) / 2.0).real))
    for e in exps:
        for k in range(0, 5):
            for m in range(1, 6):
                dists.append(abs((-k * inv + m - e).real))
    return min(dists)


_register(
    id="hyper_askey_wilson",
    anchor="beta integral of Askey-Wilson type for the modular-pair gamma function",
    param_names=("tau1", "tau2", "tau3", "tau4"),
    domain=_hyper_aw_domain,
    lhs=_hyper_aw_lhs,
    rhs=_hyper_aw_rhs,
    default_tol=DEFAULT_TOL_HYPER,
    default_params={"tau": -math.sqrt(2.0), "tau1": 0.8, "tau2": 0.8,
                    "tau3": 0.8, "tau4": 0.8},
    sweep=lambda rng: dict(tau=complex(-rng.uniform(0.9, 1.8), rng.uniform(0.0, 0.6)),
                           **{f"tau{j}": rng.uniform(0.62, 0.95) for j in range(1, 5)}),
    clearance=_hyper_aw_clearance,
)


def _hyper_nr_domain(params):
    v = _require_hyper_tau(params)
    if v is not None:
        return v
    tau = complex(params["tau"])
    exps = _pvec(params, ("tau0", "tau1", "tau2", "tau3", "tau4"))
    for j, e in enumerate(exps):
        if not e.real < 1.0:
            return _violation(f"Re(tau{j}) < 1", e.real, 1.0)
    val = (sum(exps) - 1.0 / tau).real
    if not val > 4.0:
        return _violation("Re(a - 1/tau) > 4", val, 4.0)
    return None


def _hyper_nr_integrand(params, tol):
    tp = _tp_hyper(params)
    exps = _pvec(params, ("tau0", "tau1", "tau2", "tau3", "tau4"))
    a = sum(exps)
    quotient = _tf_quotient(tp, min(tol * 1e-2, 1e-11))

    def f(z):
        z = np.atleast_1d(np.asarray(z, dtype=complex))
        nums = [1.0 + 2.0 * z, 1.0 - 2.0 * z, a - 4.0 + z, a - 4.0 - z]
        dens = [e + s * z for e in exps for s in (1.0, -1.0)]
        return quotient(nums, dens)

    return f


def _hyper_nr_lhs(params, tol) -> QuadratureValue:
    decay = 2.0 * math.pi * (1.0 - complex(params["tau"]).real)
    return integrate_line(_hyper_nr_integrand(params, tol),
                          Contour("imaginary_line"), decay=decay, tol=tol)


_HYPER_INTEGRANDS = {
    "hyper_ramanujan": _hyper_ram_integrand,
    "hyper_askey_wilson": _hyper_aw_integrand,
    "hyper_nassrallah_rahman": _hyper_nr_integrand,
}


def hyper_rotation_pair(identity_id: str, params: dict, tol: float = 1e-8):
    """The same hyperbolic integrand over the real line and over the
    imaginary axis.  Rotating the contour clockwise from R to -iR leaves
    the value unchanged up to orientation: real-line value = -(imaginary
    axis value).  Returns the two QuadratureValues."""
    builder = _HYPER_INTEGRANDS.get(identity_id)
    if builder is None:
        raise UnknownIdentity(f"{identity_id} has no rotation pair")
    f = builder(params, tol)
    real_part = integrate_line(f, Contour("real_line"), tol=tol)
    imag_part = integrate_line(f, Contour("imaginary_line"), tol=tol)
    return real_part, imag_part


def _hyper_nr_clearance(params):
    tp = _tp_hyper(params)
    exps = _pvec(params, ("tau0", "tau1", "tau2", "tau3", "tau4"))
    a = sum(exps)
    inv = 1.0 / tp.tau
    dists = []
    for k in range(1, 5):
        for m in range(0, 5):
            dists.append(abs(((k * inv - m - 1.0) / 2.0).real))
            dists.append(abs((k * inv - m - (a - 4.0)).real))
    for e in exps:
        for k in range(0, 5):
            for m in range(1, 6):
                dists.append(abs((-k * inv + m - e).real))
    return min(dists)


_register(
    id="hyper_nassrallah_rahman",
    anchor="beta integral of Nassrallah-Rahman type for the modular-pair gamma function",
    param_names=("tau0", "tau1", "tau2", "tau3", "tau4"),
    domain=_hyper_nr_domain,
    lhs=_hyper_nr_lhs,
    rhs=lambda params, tol: _hyper_style_nr_rhs(
        _pvec(params, ("tau0", "tau1", "tau2", "tau3", "tau4")), _tp_hyper(params),
        tol, sign=-1.0),
    default_tol=DEFAULT_TOL_HYPER,
    default_params={"tau": -math.sqrt(2.0), "tau0": 0.8, "tau1": 0.8, "tau2": 0.8,
                    "tau3": 0.8, "tau4": 0.8},
    sweep=lambda rng: dict(tau=complex(-rng.uniform(0.9, 1.5), rng.uniform(0.0, 0.5)),
                           **{f"tau{j}": rng.uniform(0.88, 0.99) for j in range(5)}),
    clearance=_hyper_nr_clearance,
)


# ---------------------------------------------------------------------------
# regularized Etingof-type integral (shifted line)
# ---------------------------------------------------------------------------

def _etingof_domain(params):
    v = _require_trig_tau(params)
    if v is not None:
        return v
    tp = _tp_trig(params)
    s = _pvec(params, ("s1", "s2", "s3", "s4"))
    mod = abs(np.prod(np.asarray(s)) * tp.qpow(-3.0))
    if not mod < 1.0:
        return _violation("|q^-3 s1 s2 s3 s4| < 1", mod, 1.0)
    eps = complex(params["eps"])
    if not (abs(eps.imag) < 1e-14 and eps.real > 0):
        return _violation("eps > 0", eps, 0.0)
    return None


def _etingof_lhs(params, tol) -> QuadratureValue:
    tp = _tp_trig(params)
    s = _pvec(params, ("s1", "s2", "s3", "s4"))
    eps = complex(params["eps"]).real

    def f(z):
        z = np.atleast_1d(np.asarray(z, dtype=complex))
        log = np.zeros_like(z)
        for sj in s:
            log += (_logpoch_scaled_qpow(tp, sj, z, tol)
                    + _logpoch_scaled_qpow(tp, sj, -z, tol))
        for sign in (1.0, -1.0):
            log -= (_logpoch_qpow(tp, 1 + sign * z, tol)
                    + _logpoch_qpow(tp, 1 + sign * z, tol, negate=True)
                    + _logpoch_qpow(tp, 0.5 + sign * z, tol))
        return np.exp(log + 1j * np.pi * tp.tau * z * z)

    return integrate_line(f, Contour("shifted_line", offset=eps), tol=tol)


def _etingof_rhs(params, tol) -> complex:
    tp = _tp_trig(params)
    s = _pvec(params, ("s1", "s2", "s3", "s4"))
    return sums.bailey_closed_constant(s, tp, tol)


_register(
    id="etingof_type_limit",
    anchor="regularized Macdonald-Mehta type integral (Etingof/Askey form)",
    param_names=("s1", "s2", "s3", "s4", "eps"),
    domain=_etingof_domain,
    lhs=_etingof_lhs,
    rhs=_etingof_rhs,
    default_tol=1e-7,
    default_params={"tau": 0.3j, "s1": 0.24, "s2": 0.24, "s3": 0.24, "s4": 0.24,
                    "eps": 0.05},
)


# ---------------------------------------------------------------------------
# elliptic-to-hyperbolic degeneration (finite segment)
# ---------------------------------------------------------------------------

def c_r_constant(tau: float, r: float, tol: float = 1e-12) -> complex:
    """The degeneration normalizing constant
    2 exp(pi (tau - 1)/(12 r)) / (r (e^{-2 pi r}; e^{-2 pi r})_inf
    (e^{2 pi r/tau}; e^{2 pi r/tau})_inf); tends to 2/sqrt(-tau)."""
    t = float(tau)
    p2 = math.exp(-2.0 * math.pi * r)
    p1 = math.exp(2.0 * math.pi * r / t)
    return (2.0 * cmath.exp(math.pi * (t - 1.0) / (12.0 * r))
            / (r * _qpoch(p2, p2, tol) * _qpoch(p1, p1, tol)))


def _degen_domain(params):
    tau = complex(params["tau"])
    if not (abs(tau.imag) < 1e-12 and tau.real < 0):
        return _violation("tau real < 0", tau, 0.0)
    r = complex(params["r"])
    if not (abs(r.imag) < 1e-14 and r.real > 0):
        return _violation("r > 0", r, 0.0)
    hyper = dict(params)
    hyper["tau"] = tau.real
    return _hyper_nr_domain(hyper)


def _degen_lhs(params, tol) -> QuadratureValue:
    tau = complex(params["tau"]).real
    r = complex(params["r"]).real
    exps = _pvec(params, ("tau0", "tau1", "tau2", "tau3", "tau4"))
    a = sum(exps)

    def f(x):
        x = np.atleast_1d(np.asarray(x, dtype=complex))
        out = np.empty_like(x)
        for i, xx in enumerate(x):
            val = 1.0 + 0j
            for e in exps:
                val *= (renorm_elliptic_gamma(1j - 1j * e + xx, tau, r, tol)
                        * renorm_elliptic_gamma(1j - 1j * e - xx, tau, r, tol))
            val /= (renorm_elliptic_gamma(2.0 * xx, tau, r, tol)
                    * renorm_elliptic_gamma(-2.0 * xx, tau, r, tol)
                    * renorm_elliptic_gamma(5j - 1j * a + xx, tau, r, tol)
                    * renorm_elliptic_gamma(5j - 1j * a - xx, tau, r, tol))
            out[i] = val
        return out

    half = 0.5 / r
    return integrate_segment(f, -half, half, tol=tol, initial=32)


def _degen_rhs(params, tol) -> complex:
    tau = complex(params["tau"]).real
    r = complex(params["r"]).real
    exps = _pvec(params, ("tau0", "tau1", "tau2", "tau3", "tau4"))
    a = sum(exps)
    val = c_r_constant(tau, r, tol)
    for k in range(5):
        for m in range(k + 1, 5):
            val *= renorm_elliptic_gamma(2j - 1j * (exps[k] + exps[m]), tau, r, tol)
    for e in exps:
        val /= renorm_elliptic_gamma(4j - 1j * a + 1j * e, tau, r, tol)
    return val


def degeneration_limit_target(params, tol: float = 1e-10) -> complex:
    """r -> 0 limit of the degeneration identity: (2/sqrt(-tau)) beta
    times the hyperbolic Nassrallah-Rahman product ratio."""
    tau = complex(params["tau"]).real
    tp = TauParameter(tau, regime=HYPERBOLIC)
    exps = _pvec(params, ("tau0", "tau1", "tau2", "tau3", "tau4"))
    a = sum(exps)
    c2 = 0.5 / tau
    sq_sum = 0.0 + 0j
    for k in range(5):
        for m in range(k + 1, 5):
            sq_sum += (c2 + 1.5 - exps[k] - exps[m]) ** 2
    for e in exps:
        sq_sum -= (c2 + 3.5 - a + e) ** 2
    beta = tp.qpow(-5.0 / 48.0) * tp.qtpow(5.0 / 48.0) * tp.qpow(sq_sum / 4.0)
    ratio = 1.0 + 0j
    for e in exps:
        ratio *= tau_factorial(a - e - 3.0, tp, tol)
    for k in range(5):
        for m in range(k + 1, 5):
            ratio /= tau_factorial(exps[k] + exps[m] - 1.0, tp, tol)
    return 2.0 / cmath.sqrt(-tau) * beta * ratio


_register(
    id="degeneration_ell_to_hyp",
    anchor="elliptic-to-hyperbolic degeneration of the beta integral",
    param_names=("tau0", "tau1", "tau2", "tau3", "tau4", "r"),
    domain=_degen_domain,
    lhs=_degen_lhs,
    rhs=_degen_rhs,
    default_tol=1e-6,
    default_params={"tau": -math.sqrt(2.0), "tau0": 0.8, "tau1": 0.8, "tau2": 0.8,
                    "tau3": 0.8, "tau4": 0.8, "r": 0.1},
)


# ---------------------------------------------------------------------------
# Nassrallah-Rahman to Askey-Wilson limit (closed forms only)
# ---------------------------------------------------------------------------

def _nr_to_aw_domain(params):
    return _hyper_nr_domain(params)


def _nr_to_aw_deviation(params, tol) -> float:
    exps = _pvec(params, ("tau0", "tau1", "tau2", "tau3", "tau4"))
    tp = _tp_hyper(params)
    # closed forms at full precision: the deviations to resolve sit at the
    # exponentially small correction level of the factorial asymptotics
    inner = min(tol, 1e-12)
    nr = _hyper_style_nr_rhs(exps, tp, inner, sign=-1.0)
    aw_params = {"tau": params["tau"], "tau1": exps[1], "tau2": exps[2],
                 "tau3": exps[3], "tau4": exps[4]}
    aw = _hyper_aw_rhs(aw_params, inner)
    return abs(nr - aw)


_register(
    id="nr_to_aw_limit",
    anchor="Nassrallah-Rahman to Askey-Wilson degeneration (closed forms)",
    param_names=("tau0", "tau1", "tau2", "tau3", "tau4"),
    domain=_nr_to_aw_domain,
    lhs=lambda params, tol: QuadratureValue(
        _hyper_style_nr_rhs(_pvec(params, ("tau0", "tau1", "tau2", "tau3", "tau4")),
                            _tp_hyper(params), tol, sign=-1.0),
        0.0, 0, Contour("segment", a=0, b=1)),
    rhs=lambda params, tol: _hyper_aw_rhs(
        {"tau": params["tau"], "tau1": params["tau1"], "tau2": params["tau2"],
         "tau3": params["tau3"], "tau4": params["tau4"]}, tol),
    default_tol=1e-4,
    default_params={"tau": -math.sqrt(2.0), "tau0": 0.8 - 4j, "tau1": 0.8,
                    "tau2": 0.8, "tau3": 0.8, "tau4": 0.8},
)


# ---------------------------------------------------------------------------
# limit studies
# ---------------------------------------------------------------------------

def limit_study(identity_id: str, params: dict, schedule, tol: float = 1e-8) -> dict:
    """Evaluate a formal-limit identity along a schedule of limit-parameter
    values; returns per-point deviations from the limit target plus trend
    diagnostics (NonMonotoneTrend is reported, never raised)."""
    if identity_id == "degeneration_ell_to_hyp":
        target = degeneration_limit_target(params)
        rows = []
        c_devs = []
        tau = complex(params["tau"]).real
        for r in schedule:
            p = dict(params)
            p["r"] = float(r)
            violation = REGISTRY[identity_id].domain(p)
            if violation is not None:
                raise violation
            val = _degen_lhs(p, tol * max(1.0, abs(target)))
            rows.append((float(r), abs(val.value - target)))
            c_devs.append((float(r), abs(c_r_constant(tau, float(r))
                                         - 2.0 / cmath.sqrt(-tau))))
        devs = [d for _, d in rows]
        return {"id": identity_id, "rows": rows, "c_r_rows": c_devs,
                "monotone": all(a > b for a, b in zip(devs, devs[1:])),
                "diagnostics": _trend_diag(devs)}
    if identity_id == "nr_to_aw_limit":
        rows = []
        for im in schedule:
            p = dict(params)
            p["tau0"] = complex(params["tau0"]).real + 1j * float(im)
            violation = REGISTRY[identity_id].domain(p)
            if violation is not None:
                raise violation
            rows.append((float(im), _nr_to_aw_deviation(p, tol)))
        devs = [d for _, d in rows]
        return {"id": identity_id, "rows": rows,
                "monotone": all(a > b for a, b in zip(devs, devs[1:])),
                "diagnostics": _trend_diag(devs)}
    if identity_id == "etingof_type_limit":
        rhs = _etingof_rhs(params, tol)
        rows = []
        for eps in schedule:
            p = dict(params)
            p["eps"] = float(eps)
            violation = REGISTRY[identity_id].domain(p)
            if violation is not None:
                raise violation
            val = _etingof_lhs(p, tol * abs(rhs))
            rows.append((float(eps), abs(val.value - rhs)))
        devs = [d for _, d in rows]
        return {"id": identity_id, "rows": rows,
                "monotone": all(a > b for a, b in zip(devs, devs[1:])),
                "diagnostics": _trend_diag(devs)}
    raise UnknownIdentity(f"{identity_id} is not a limit-study identity")


def _trend_diag(devs) -> dict:
    out = {}
    if not all(a > b for a, b in zip(devs, devs[1:])):
        out["NonMonotoneTrend"] = devs
    return out
