"""Extended-precision evaluation hook backed by mpmath.

Same contracts as the fast double-precision routines, higher internal
precision; used by tests to cross-check values independently of the
production code paths.  Acceptance tolerances around 1e-10 need this
headroom in the oracles.
"""

from __future__ import annotations

import mpmath as mp


def qpoch_inf_mp(a, q, dps: int = 40):
    """(a; q)_infinity at dps decimal digits."""
    with mp.workdps(dps):
        return complex(mp.qp(mp.mpmathify(a), mp.mpmathify(q)))


def qpoch_finite_mp(a, q, n: int, dps: int = 40):
    """Finite product prod_{j<n} (1 - a q^j), the oracle for (a; q)_n."""
    with mp.workdps(dps):
        a, q = mp.mpmathify(a), mp.mpmathify(q)
        return complex(mp.fprod(1 - a * q**j for j in range(n)))


def theta_mp(z, tau, dps: int = 40):
    """sum_m e^{pi i tau m^2 + 2 pi i m z} by direct summation."""
    with mp.workdps(dps):
        z, tau = mp.mpmathify(z), mp.mpmathify(tau)
        return complex(mp.jtheta(3, mp.pi * z, mp.exp(1j * mp.pi * tau)))


def dedekind_eta_mp(sigma, dps: int = 40):
    with mp.workdps(dps):
        sigma = mp.mpmathify(sigma)
        p = mp.exp(2j * mp.pi * sigma)
        return complex(mp.exp(1j * mp.pi * sigma / 12) * mp.qp(p, p))


def g_integral_mp(a_plus, a_minus, z, dps: int = 30):
    """The hyperbolic log-integral by mpmath tanh-sinh quadrature."""
    with mp.workdps(dps):
        ap, am, zz = mp.mpmathify(a_plus), mp.mpmathify(a_minus), mp.mpmathify(z)

        def f(y):
            return (mp.sin(2 * y * zz) / (2 * mp.sinh(ap * y) * mp.sinh(am * y))
                    - zz / (ap * am * y)) / y

        return complex(mp.quad(f, [mp.mpf("1e-12"), 1, 10, 60]))


def gamma_h_mp(a_plus, a_minus, z, dps: int = 30):
    return complex(mp.exp(1j * mp.mpmathify(g_integral_mp(a_plus, a_minus, z, dps))))


def elliptic_gamma_mp(z, p1, p2, dps: int = 40, terms: int = 400):
    """Rectangularly truncated double product at high precision."""
    with mp.workdps(dps):
        z, p1, p2 = mp.mpmathify(z), mp.mpmathify(p1), mp.mpmathify(p2)
        num = mp.mpf(1)
        den = mp.mpf(1)
        import math

        def length(p):
            if p == 0:
                return 1
            return min(terms, int(math.ceil(-(dps + 5) * math.log(10) / math.log(abs(p)))) + 1)

        nk, nm = length(p1), length(p2)
        for k in range(nk):
            for m in range(nm):
                num *= 1 - p1 ** (k + 1) * p2 ** (m + 1) / z
                den *= 1 - z * p1**k * p2**m
        return complex(num / den)
