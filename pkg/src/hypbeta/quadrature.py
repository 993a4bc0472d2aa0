"""Adaptive complex-valued quadrature over segments, truncated lines and
the unit circle.

Integrands receive complex points on the contour and must accept numpy
arrays (scalar-only callables are wrapped transparently).  Panel sums are
accumulated in contour order, so results are deterministic regardless of
how the panel evaluations are scheduled.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from .errors import MaxSubdivisions, NoDecayDetected, NonFiniteSample, QuadratureFailure

# 7-15 Gauss-Kronrod pair on [-1, 1] (QUADPACK dqk15 abscissae/weights).
_XGK_HALF = np.array([
    0.9914553711208126, 0.9491079123427585, 0.8648644233597691,
    0.7415311855993944, 0.5860872354676911, 0.4058451513773972,
    0.2077849550078985, 0.0,
])
_WGK_HALF = np.array([
    0.0229353220105292, 0.0630920926299786, 0.1047900103222502,
    0.1406532597155259, 0.1690047266392679, 0.1903505780647854,
    0.2044329400752989, 0.2094821410847278,
])
_WG_HALF = np.array([
    0.1294849661688697, 0.2797053914892767,
    0.3818300505051189, 0.4179591836734694,
])

GK_NODES = np.concatenate([-_XGK_HALF[:-1], _XGK_HALF[::-1]])
GK_WEIGHTS = np.concatenate([_WGK_HALF[:-1], _WGK_HALF[::-1]])
G7_WEIGHTS = np.zeros(15)
G7_WEIGHTS[1:14:2] = np.concatenate([_WG_HALF[:-1], _WG_HALF[::-1]])

_MAX_PANELS = 16384
_PROBE_RADII = (2.0, 4.0, 8.0, 16.0, 32.0, 64.0, 128.0, 256.0, 512.0, 1024.0)


@dataclass(frozen=True)
class Contour:
    """Description of an integration contour.

    kind is one of segment, real_line, imaginary_line, shifted_line,
    unit_circle.  Infinite kinds carry the truncation radius actually
    used; shifted_line stores the constant imaginary offset.
    """

    kind: str
    a: complex = 0j
    b: complex = 0j
    offset: float = 0.0
    truncation_radius: Optional[float] = None

    def __post_init__(self):
        if self.kind == "segment" and self.a == self.b:
            raise ValueError("segment endpoints must be distinct")
        if self.truncation_radius is not None and self.truncation_radius <= 0:
            raise ValueError("truncation_radius must be positive")


@dataclass(frozen=True)
class QuadratureValue:
    value: complex
    err_est: float
    evals: int
    contour: Contour
    tail_bound: float = 0.0
    diagnostics: dict = field(default_factory=dict)


def _vectorized(f: Callable):
    """Wrap f so it accepts an ndarray of complex points."""
    state = {"mode": None}

    def call(pts: np.ndarray) -> np.ndarray:
        if state["mode"] != "scalar":
            try:
                out = np.asarray(f(pts), dtype=complex)
                if out.shape == pts.shape:
                    state["mode"] = "array"
                    return out
            except Exception:
                if state["mode"] == "array":
                    raise
            state["mode"] = "scalar"
        return np.array([complex(f(p)) for p in pts], dtype=complex)

    return call


class _PanelIntegrator:
    """Globally adaptive Gauss-Kronrod bisection over [0, 1] in a real
    parameter t, batching every refinement level into one integrand call."""

    def __init__(self, fvec, to_point, jacobian):
        self.fvec = fvec
        self.to_point = to_point        # t array -> complex points
        self.jacobian = jacobian        # t array -> dz/dt values
        self.evals = 0

    def _eval_panels(self, lo: np.ndarray, hi: np.ndarray):
        mid = 0.5 * (lo + hi)
        half = 0.5 * (hi - lo)
        t = (mid[:, None] + half[:, None] * GK_NODES[None, :]).ravel()
        pts = self.to_point(t)
        vals = self.fvec(pts)
        if not np.all(np.isfinite(vals)):
            bad = pts[~np.isfinite(vals)][0]
            raise NonFiniteSample(f"integrand not finite at {bad}")
        vals = (vals * self.jacobian(t)).reshape(len(lo), 15)
        k = (vals * GK_WEIGHTS).sum(axis=1) * half
        g = (vals * G7_WEIGHTS).sum(axis=1) * half
        self.evals += t.size
        return k, np.abs(k - g)

    def run(self, tol: float, initial: int = 8):
        lo = np.linspace(0.0, 1.0, initial + 1)[:-1]
        hi = np.linspace(0.0, 1.0, initial + 1)[1:]
        vals, errs = self._eval_panels(lo, hi)
        stalls = 0
        prev_total = math.inf
        while True:
            total_err = float(errs.sum())
            if total_err <= tol:
                break
            # refinement that stops reducing the estimate has hit the
            # rounding/noise floor of the integrand; stop and report the
            # achieved error honestly instead of splitting forever
            stalls = stalls + 1 if total_err > 0.7 * prev_total else 0
            if stalls >= 3:
                break
            prev_total = total_err
            thresh = max(tol / (2.0 * len(lo)), total_err * 1e-4 / len(lo))
            split = errs > thresh
            if not split.any():
                split = errs == errs.max()
            if len(lo) + split.sum() > _MAX_PANELS:
                worst = int(np.argmax(errs))
                raise MaxSubdivisions(
                    f"panel budget exhausted, worst panel err {errs[worst]:.3g}",
                    worst_panel=(self.to_point(np.array([lo[worst]]))[0],
                                 self.to_point(np.array([hi[worst]]))[0]))
            mids = 0.5 * (lo[split] + hi[split])
            new_lo = np.concatenate([lo[split], mids])
            new_hi = np.concatenate([mids, hi[split]])
            new_vals, new_errs = self._eval_panels(new_lo, new_hi)
            lo = np.concatenate([lo[~split], new_lo])
            hi = np.concatenate([hi[~split], new_hi])
            vals = np.concatenate([vals[~split], new_vals])
            errs = np.concatenate([errs[~split], new_errs])
        order = np.argsort(lo, kind="stable")
        return complex(vals[order].sum()), float(errs.sum())


def integrate_segment(f, a, b, tol: float = 1e-10, initial: int = 8) -> QuadratureValue:
    """Integral of f along the straight segment from a to b.

    f is called with the (complex) points of the segment; for real
    endpoints this is ordinary real-axis integration.
    """
    a, b = complex(a), complex(b)
    contour = Contour("segment", a=a, b=b)
    span = b - a
    fvec = _vectorized(f)
    engine = _PanelIntegrator(fvec, lambda t: a + span * t, lambda t: span)
    value, err = engine.run(tol, initial=initial)
    return QuadratureValue(value, err, engine.evals, contour)


def _line_maps(contour: Contour):
    if contour.kind == "real_line":
        return (lambda x: x.astype(complex), 1.0 + 0j)
    if contour.kind == "imaginary_line":
        return (lambda x: 1j * x, 1j)
    if contour.kind == "shifted_line":
        off = 1j * contour.offset
        return (lambda x: x + off, 1.0 + 0j)
    raise ValueError(f"not an infinite line contour: {contour.kind}")


def integrate_line(f, contour: Contour, decay: Optional[float] = None,
                   tol: float = 1e-10, initial_per_unit: float = 2.0) -> QuadratureValue:
    """Integral over a truncated infinite line with exponential tail control.

    The line is parameterized by a real coordinate x in [-R, R]; R grows
    until the tail bound (sampled |f| x 2/decay x safety 2) falls below
    tol/2.  decay may be supplied by the caller; otherwise the rate is
    measured from the probe samples, and three consecutive non-decreasing
    probes raise NoDecayDetected.
    """
    to_point, jac = _line_maps(contour)
    fvec = _vectorized(f)
    evals = 0

    def sample_mag(radius: float) -> float:
        # offsets chosen to keep samples off arithmetic lattices where
        # integrands have compensated 0/0 points
        nonlocal evals
        r1, r2 = radius - 0.0123456789, radius - 0.3456789012
        x = np.array([-r1, -r2, r2, r1])
        vals = fvec(to_point(x))
        if not np.all(np.isfinite(vals)):
            raise NonFiniteSample(f"integrand not finite near |x| = {radius}")
        evals += x.size
        return float(np.max(np.abs(vals)))

    mags = []
    non_decreasing = 0
    chosen = None
    tail = math.inf
    rate = decay
    for i, radius in enumerate(_PROBE_RADII):
        m = sample_mag(radius)
        mags.append((radius, m))
        if m == 0.0:
            chosen, tail = radius, 0.0
            break
        if i > 0:
            prev_r, prev_m = mags[i - 1]
            if m >= prev_m:
                non_decreasing += 1
                if non_decreasing >= 3 and decay is None:
                    raise NoDecayDetected(
                        f"|f| non-decreasing over probe radii up to {radius}")
            else:
                non_decreasing = 0
                if decay is None:
                    rate = math.log(prev_m / m) / (radius - prev_r)
        if rate is not None and rate > 0:
            tail = m * (2.0 / rate) * 2.0
            if tail < tol / 2.0:
                chosen = radius
                break
    if chosen is None:
        raise QuadratureFailure(
            f"tail bound {tail:.3g} still above tol/2 at radius {_PROBE_RADII[-1]}")

    radius = chosen
    span = 2.0 * radius
    initial = max(8, int(span * initial_per_unit))
    engine = _PanelIntegrator(fvec, lambda t: to_point(-radius + span * t),
                              lambda t: span * jac)
    value, err = engine.run(max(tol - tail, tol / 2.0), initial=initial)
    new_contour = Contour(contour.kind, offset=contour.offset, truncation_radius=radius)
    return QuadratureValue(value, err + tail, engine.evals + evals, new_contour,
                           tail_bound=tail, diagnostics={"decay_rate": rate})


def integrate_circle(f, tol: float = 1e-10, max_doublings: int = 14) -> QuadratureValue:
    """(1/2 pi i) contour integral of g(z) dz/z over the positively
    oriented unit circle, i.e. the mean of g over the circle.

    f is called with the angle theta (array); equispaced trapezoid values
    are doubled until two consecutive refinements agree, which is
    spectrally accurate for integrands analytic in an annulus around the
    circle.
    """
    contour = Contour("unit_circle")
    fvec_raw = f
    state = {"mode": None}

    def fvec(theta: np.ndarray) -> np.ndarray:
        if state["mode"] != "scalar":
            try:
                out = np.asarray(fvec_raw(theta), dtype=complex)
                if out.shape == theta.shape:
                    state["mode"] = "array"
                    return out
            except Exception:
                if state["mode"] == "array":
                    raise
            state["mode"] = "scalar"
        return np.array([complex(fvec_raw(t)) for t in theta], dtype=complex)

    n = 32
    theta = 2.0 * np.pi * np.arange(n) / n
    vals = fvec(theta)
    if not np.all(np.isfinite(vals)):
        raise NonFiniteSample("integrand not finite on the circle")
    total = complex(vals.sum())
    evals = n
    prev = total / n
    for _ in range(max_doublings):
        new_theta = 2.0 * np.pi * (np.arange(n) + 0.5) / n
        new_vals = fvec(new_theta)
        if not np.all(np.isfinite(new_vals)):
            raise NonFiniteSample("integrand not finite on the circle")
        evals += n
        total += complex(new_vals.sum())
        n *= 2
        cur = total / n
        delta = abs(cur - prev)
        if delta <= tol / 2.0:
            return QuadratureValue(cur, max(delta, 1e-16 * abs(cur)), evals, contour)
        prev = cur
    raise MaxSubdivisions(f"circle rule did not settle below tol with {n} nodes")
