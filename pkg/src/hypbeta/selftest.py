"""Named invariant suite behind the CLI selftest command.

Each invariant runs a reduced seeded grid and returns its worst residual;
an injected perturbation (--perturb) scales the reference constant of the
reflection-equation invariant and must be caught.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from . import integrals, qseries, sums
from .hypgamma import (
    HYPERBOLIC,
    HyperbolicPair,
    TauParameter,
    gamma_h,
    gamma_h_product,
    tau_factorial,
)


@dataclass(frozen=True)
class Invariant:
    name: str
    module: str
    threshold: float
    run: Callable  # (rng, perturb) -> float residual


def _rng_points(rng, n, box=1.0):
    return box * (rng.random(n) - 0.5) + 1j * box * (rng.random(n) - 0.5)


# --- hypgamma ---

def _reflection_equation(rng, perturb):
    worst = 0.0
    for tau in (-math.sqrt(2.0), -0.7 + 0.4j, -2.0 + 0.1j):
        tp = TauParameter(tau, regime=HYPERBOLIC)
        c = tp.c_offset
        reference = tp.eta_constant * (1.0 + perturb)
        for z in (0.2, 0.45 + 0.2j, 1.1 - 0.15j):
            lhs = tau_factorial(c + z, tp) * tau_factorial(c - z, tp)
            rhs = reference * tp.qpow(z * z / 2.0)
            worst = max(worst, abs(lhs - rhs) / abs(rhs))
    return worst


def _gamma_reflection(rng, perturb):
    pair = HyperbolicPair(1.0, 1.0 + 0.4j)
    worst = 0.0
    for _ in range(8):
        z = _rng_points(rng, 1, 0.8)[0]
        worst = max(worst, abs(gamma_h(pair, z) * gamma_h(pair, -z) - 1.0))
    return worst


def _gamma_symmetry(rng, perturb):
    worst = 0.0
    for _ in range(4):
        ap = 0.5 + rng.random() + 1j * (rng.random() - 0.5)
        am = 0.5 + rng.random()
        z = _rng_points(rng, 1, 0.6)[0]
        a = gamma_h(HyperbolicPair(ap, am), z)
        b = gamma_h(HyperbolicPair(am, ap), z)
        worst = max(worst, abs(a - b) / abs(b))
    return worst


def _gamma_scale(rng, perturb):
    pair = HyperbolicPair(0.9, 1.3)
    z = 0.31 + 0.07j
    base = gamma_h(pair, z)
    worst = 0.0
    for r in (0.5, 2.0, 3.7):
        v = gamma_h(HyperbolicPair(r * 0.9, r * 1.3), r * z)
        worst = max(worst, abs(v - base) / abs(base))
    return worst


def _gamma_funceq(rng, perturb):
    pair = HyperbolicPair(1.0 + 0.3j, 0.8)
    worst = 0.0
    for _ in range(4):
        z = _rng_points(rng, 1, 0.5)[0]
        for gen, other in ((pair.a_plus, pair.a_minus), (pair.a_minus, pair.a_plus)):
            lhs = gamma_h(pair, z + 0.5j * gen) / gamma_h(pair, z - 0.5j * gen)
            rhs = 2.0 * cmath.cosh(cmath.pi * z / other)
            worst = max(worst, abs(lhs - rhs) / abs(rhs))
    return worst


def _gamma_vs_product(rng, perturb):
    worst = 0.0
    for _ in range(6):
        ratio_im = 0.1 + 1.9 * rng.random()
        pair = HyperbolicPair(1.0 + 1j * ratio_im, 1.0)
        z = _rng_points(rng, 1, 0.6)[0]
        a = gamma_h(pair, z)
        b = gamma_h_product(pair, z)
        worst = max(worst, abs(a - b) / abs(b))
    return worst


def _tau_funceqs(rng, perturb):
    worst = 0.0
    for tau, regime in ((0.3j, ""), (-math.sqrt(2.0), HYPERBOLIC), (-1 + 0.5j, "")):
        tp = TauParameter(tau, regime=regime) if regime else TauParameter(tau)
        for _ in range(3):
            z = _rng_points(rng, 1, 0.7)[0]
            lhs = tau_factorial(z + 1.0, tp)
            rhs = (1.0 - tp.qpow(z)) * tau_factorial(z, tp)
            worst = max(worst, abs(lhs - rhs) / max(abs(rhs), 1e-30))
            lhs = tau_factorial(z - 1.0 / tp.tau, tp)
            rhs = (1.0 - tp.qtpow(-1.0) * cmath.exp(-2j * cmath.pi * z)) * tau_factorial(z, tp)
            worst = max(worst, abs(lhs - rhs) / max(abs(rhs), 1e-30))
    return worst


def _doubling(rng, perturb):
    tp = TauParameter(-math.sqrt(2.0), regime=HYPERBOLIC)
    worst = 0.0
    for x in (0.23 + 0.05j, 0.4, 0.11 - 0.2j):
        lhs = 1.0 + 0j
        for s in (1.0, -1.0):
            for off in (0.5, 1.0, 0.5 + 0.5 / tp.tau, 1.0 + 0.5 / tp.tau):
                lhs *= tau_factorial(off + s * x, tp)
        rhs = tau_factorial(1.0 + 2.0 * x, tp) * tau_factorial(1.0 - 2.0 * x, tp)
        worst = max(worst, abs(lhs - rhs) / abs(rhs))
    return worst


def _numerator_simplification(rng, perturb):
    tp = TauParameter(-math.sqrt(2.0), regime=HYPERBOLIC)
    worst = 0.0
    for z in (0.31 - 0.07j, 0.12, 0.6 + 0.2j):
        lhs = tau_factorial(1.0 + 2.0 * z, tp) * tau_factorial(1.0 - 2.0 * z, tp)
        rhs = (-1j * tp.qpow(1.0 / 12.0) * tp.qtpow(-1.0 / 12.0) * tp.qpow(2.0 * z * z)
               * (tp.qpow(-z) - tp.qpow(z))
               * (cmath.exp(2j * cmath.pi * z) - cmath.exp(-2j * cmath.pi * z)))
        worst = max(worst, abs(lhs - rhs) / abs(rhs))
    return worst


def _asymptotic_sanity(rng, perturb):
    tp = TauParameter(-math.sqrt(2.0), regime=HYPERBOLIC)
    worst = 0.0
    for re in (-1.0, 0.0, 1.0):
        worst = max(worst, abs(tau_factorial(re - 20j, tp) - 1.0))
    return worst


# --- qseries ---

def _shift_identity(rng, perturb):
    worst = 0.0
    for _ in range(8):
        q = 0.9 * (rng.random()) * np.exp(2j * np.pi * rng.random())
        a = 2.0 * (rng.random()) * np.exp(2j * np.pi * rng.random())
        lhs = qseries.qpoch_inf(a, q).value
        rhs = (1.0 - a) * qseries.qpoch_inf(a * q, q).value
        worst = max(worst, abs(lhs - rhs) / max(abs(rhs), 1e-30))
    return worst


def _quadratic_splitting(rng, perturb):
    worst = 0.0
    for _ in range(6):
        q = 0.85 * rng.random() * np.exp(2j * np.pi * rng.random())
        u = 1.2 * (rng.random() - 0.3) + 0.6j * (rng.random() - 0.5)
        sq = cmath.sqrt(q) if q != 0 else 0
        lhs = qseries.qpoch_inf(u * u, q).value
        rhs = 1.0 + 0j
        for w in (u, -u, sq * u, -sq * u):
            rhs *= qseries.qpoch_inf(w, q).value
        worst = max(worst, abs(lhs - rhs) / max(abs(rhs), 1e-30))
    return worst


def _theta_methods(rng, perturb):
    worst = 0.0
    for _ in range(20):
        tau = complex(rng.uniform(-0.5, 0.5), rng.uniform(0.2, 2.0))
        z = _rng_points(rng, 1, 2.0)[0]
        a = qseries.theta(z, tau, "series")
        b = qseries.theta(z, tau, "triple_product")
        worst = max(worst, abs(a.value - b.value)
                    / max(abs(b.value), a.trunc_err + b.trunc_err, 1e-30))
    return worst


def _theta_quasiperiod(rng, perturb):
    worst = 0.0
    for _ in range(6):
        tau = complex(rng.uniform(-0.4, 0.4), rng.uniform(0.4, 1.2))
        sigma = -1.0 / tau
        qt = cmath.exp(2j * cmath.pi * sigma)
        z = _rng_points(rng, 1, 0.8)[0]
        lhs = qseries.theta(z + sigma, sigma).value
        rhs = (cmath.exp(-1j * cmath.pi * sigma) * cmath.exp(-2j * cmath.pi * z)
               * qseries.theta(z, sigma).value)
        worst = max(worst, abs(lhs - rhs) / abs(rhs))
    return worst


def _q_binomial(rng, perturb):
    worst = 0.0
    for _ in range(8):
        q = 0.7 * rng.random() + 0.05
        a = _rng_points(rng, 1, 1.2)[0]
        z = 0.8 * rng.random() * np.exp(2j * np.pi * rng.random())
        lhs = qseries.phi_series([a], [], q, z).value
        rhs = qseries.qpoch_inf(a * z, q).value / qseries.qpoch_inf(z, q).value
        worst = max(worst, abs(lhs - rhs) / abs(rhs))
    return worst


def _bilateral_vs_unilateral(rng, perturb):
    # with the lower parameter equal to q the m < 0 terms vanish, but the
    # annulus precondition |q/a| < |z| still has to be respected
    worst = 0.0
    for _ in range(4):
        q = 0.1 + 0.2 * rng.random()
        a = 0.6 + 0.3 * rng.random()
        z = 0.55 + 0.35 * rng.random()
        bi = qseries.bilateral_psi([a], [q], q, z).value
        uni = qseries.phi_series([a], [], q, z).value
        worst = max(worst, abs(bi - uni) / abs(uni))
    return worst


# --- quadrature ---

def _linearity(rng, perturb):
    from .quadrature import integrate_segment
    a, b = 0.0, 1.0
    f = lambda z: np.exp(z)
    g = lambda z: np.sin(3.0 * z)
    al, be = 0.7 - 0.2j, 1.3 + 0.5j
    lhs = integrate_segment(lambda z: al * f(z) + be * g(z), a, b, tol=1e-12)
    rhs = (al * integrate_segment(f, a, b, tol=1e-12).value
           + be * integrate_segment(g, a, b, tol=1e-12).value)
    return abs(lhs.value - rhs)


def _known_integrals(rng, perturb):
    from .quadrature import Contour, integrate_circle, integrate_line, integrate_segment
    checks = []
    checks.append(abs(integrate_segment(lambda z: z * z, 0, 1, tol=1e-12).value - 1.0 / 3.0))
    checks.append(abs(integrate_segment(lambda z: np.exp(z), 0, 1j * np.pi, tol=1e-12).value
                      - (cmath.exp(1j * np.pi) - 1.0)))
    checks.append(abs(integrate_line(lambda z: np.exp(-z * z), Contour("real_line"),
                                     tol=1e-12).value - math.sqrt(math.pi)))
    checks.append(abs(integrate_circle(lambda th: np.exp(2j * th), tol=1e-12).value))
    return max(checks)


# --- sums / integrals ---

def _summation_suite(rng, perturb):
    worst = sums.jacobi_inversion_residual(0.3, 0.4j)
    worst = max(worst, sums.ramanujan_1psi1_residual(0.2, 0.5, 0.5, 1j))
    worst = max(worst, sums.bailey_6psi6_residual(0.37, [0.1] * 4, 0.3j))
    data = sums.Weak8Psi8Data.from_exponents(
        tuple(0.8 - 0.05j * (j + 1) for j in range(5)), 0.3j)
    worst = max(worst, sums.key_lemma_residual(data))
    p1 = sums.weak_8psi8_phi(data, 0.11)
    worst = max(worst, abs(p1 - sums.weak_8psi8_phi_qtilde_form(data, 0.11)) / abs(p1))
    return worst


def _fusion_consistency(rng, perturb):
    params = dict(integrals.REGISTRY["fused_ramanujan"].default_params)
    line = integrals.REGISTRY["fused_ramanujan"].lhs(params, 1e-10)
    folded = integrals.fused_ramanujan_folded(params, 1e-10)
    return abs(line.value - folded.value) / abs(folded.value)


def _identity_spotchecks(rng, perturb):
    worst = 0.0
    for name in ("gauss", "trig_askey_wilson", "trig_ramanujan"):
        rep = integrals.evaluate_identity(
            name, dict(integrals.REGISTRY[name].default_params))
        worst = max(worst, rep.rel_err)
    return worst


def _hyperbolic_spotcheck(rng, perturb):
    rep = integrals.evaluate_identity(
        "hyper_ramanujan", dict(integrals.REGISTRY["hyper_ramanujan"].default_params))
    return rep.rel_err


INVARIANTS = [
    Invariant("reflection_equation", "hypgamma", 1e-9, _reflection_equation),
    Invariant("gamma_reflection", "hypgamma", 1e-11, _gamma_reflection),
    Invariant("gamma_symmetry", "hypgamma", 1e-11, _gamma_symmetry),
    Invariant("gamma_scale_invariance", "hypgamma", 1e-11, _gamma_scale),
    Invariant("gamma_functional_equations", "hypgamma", 1e-10, _gamma_funceq),
    Invariant("integral_vs_product", "hypgamma", 1e-10, _gamma_vs_product),
    Invariant("tau_factorial_functional_equations", "hypgamma", 1e-10, _tau_funceqs),
    Invariant("doubling_identity", "hypgamma", 1e-9, _doubling),
    Invariant("numerator_simplification", "hypgamma", 1e-9, _numerator_simplification),
    Invariant("asymptotic_sanity", "hypgamma", 1e-2, _asymptotic_sanity),
    Invariant("shift_identity", "qseries", 1e-12, _shift_identity),
    Invariant("quadratic_splitting", "qseries", 1e-12, _quadratic_splitting),
    Invariant("theta_two_methods", "qseries", 1e-10, _theta_methods),
    Invariant("theta_quasi_periodicity", "qseries", 1e-10, _theta_quasiperiod),
    Invariant("q_binomial_theorem", "qseries", 1e-10, _q_binomial),
    Invariant("bilateral_reduces_to_unilateral", "qseries", 1e-10, _bilateral_vs_unilateral),
    Invariant("linearity", "quadrature", 1e-11, _linearity),
    Invariant("known_integrals", "quadrature", 1e-10, _known_integrals),
    Invariant("summation_suite", "sums", 1e-8, _summation_suite),
    Invariant("fusion_consistency", "integrals", 1e-8, _fusion_consistency),
    Invariant("identity_spotchecks", "integrals", 1e-7, _identity_spotchecks),
    Invariant("hyperbolic_spotcheck", "integrals", 1e-6, _hyperbolic_spotcheck),
]


def run_selftest(module_filter: str = "", perturb: float = 0.0, seed: int = 1234,
                 emit=print) -> int:
    """Run the invariant suite; returns 0 when clean, 1 with the first
    failing invariant named."""
    failed = None
    for inv in INVARIANTS:
        if module_filter and inv.module != module_filter:
            continue
        rng = np.random.default_rng(seed)
        residual = inv.run(rng, perturb)
        ok = residual <= inv.threshold
        emit(f"{'PASS' if ok else 'FAIL'} {inv.module}.{inv.name}: "
             f"residual {residual:.3e} (threshold {inv.threshold:.0e})")
        if not ok and failed is None:
            failed = f"{inv.module}.{inv.name}"
    if failed is not None:
        emit(f"FAILED: first failing invariant is {failed}")
        return 1
    return 0
