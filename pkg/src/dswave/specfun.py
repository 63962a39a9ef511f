"""Special-function substrate: Gauss hypergeometric 2F1 with complex
parameters and real argument, half-integer Bessel J, associated Laguerre
polynomials, spherical harmonics, and the upper incomplete gamma function.

Everything here is pure 64-bit floating point; extended-precision reference
values used by the test suite come from a separate dev-only tool.
"""

from __future__ import annotations

import cmath
import math
from functools import lru_cache

from scipy.special import digamma as _digamma
from scipy.special import gamma as _gamma

from .errors import DivergentSeries, DomainError, InvalidParam

__all__ = [
    "hyp2f1",
    "bessel_j_half",
    "bessel_trig_split",
    "assoc_laguerre",
    "spherical_harmonic",
    "upper_incomplete_gamma",
]

# Nonpositive-integer detection: ell arrives exact, so the polynomial branch
# must fire deterministically; 1e-12 on both real distance and imaginary size.
_INT_TOL = 1e-12
# Integer detection for c-a-b in the z -> 1-z transform (the huygensian case
# has c-a-b = 2M/H exactly integer; nearby parameters snap to the log branch).
_CAB_TOL = 1e-8
_SERIES_EPS = 1e-16
_SERIES_MAX_TERMS = 2000
_SERIES_CUT = 0.95


def _nonpositive_int(w: complex, tol: float = _INT_TOL) -> int | None:
    """Return k if w is within tol of a nonpositive integer k, else None."""
    k = round(w.real)
    if k <= 0 and abs(w.real - k) <= tol and abs(w.imag) <= tol:
        return k
    return None


def _near_int(w: complex, tol: float) -> int | None:
    k = round(w.real)
    if abs(w.real - k) <= tol and abs(w.imag) <= tol:
        return k
    return None


def _gauss_series(a: complex, b: complex, c: complex, z: float) -> complex:
    """Plain Gauss series sum_{k} (a)_k(b)_k/((c)_k k!) z^k for |z| < 1."""
    total = 1.0 + 0.0j
    term = 1.0 + 0.0j
    small = 0
    for k in range(_SERIES_MAX_TERMS):
        term *= (a + k) * (b + k) / ((c + k) * (k + 1)) * z
        total += term
        if abs(term) <= _SERIES_EPS * abs(total):
            small += 1
            if small >= 2:
                return total
        else:
            small = 0
    raise DivergentSeries(
        f"2F1 series did not converge after {_SERIES_MAX_TERMS} terms (z={z})"
    )


def _polynomial_sum(k: int, b: complex, c: complex, z: float) -> complex:
    # Terminating series for a = -k; valid for any finite z.
    a = complex(k)
    total = 1.0 + 0.0j
    term = 1.0 + 0.0j
    for j in range(-k):
        term *= (a + j) * (b + j) / ((c + j) * (j + 1)) * z
        total += term
    return total


def _log_case(a: complex, b: complex, m: int, x: float) -> complex:
    """2F1(a, b; a+b+m; z) for integer m >= 0 via the logarithmic expansion.

    x = 1-z, 0 < x <= 0.05 in practice.  Classical formula (equivalent to the
    c-a-b integer case of the connection formulas at z=1).
    """
    res = 0.0 + 0.0j
    if m > 0:
        # finite part: sum_{n<m} (a)_n(b)_n/(n!(1-m)_n) x^n
        coef = _gamma(m) * _gamma(a + b + m) / (_gamma(a + m) * _gamma(b + m))
        term = 1.0 + 0.0j
        s = 0.0 + 0.0j
        for n in range(m):
            s += term
            if n < m - 1:
                term *= (a + n) * (b + n) / ((n + 1) * (1 - m + n)) * x
        res += coef * s
    # logarithmic part
    lead = -((-1.0) ** m) * _gamma(a + b + m) / (_gamma(a) * _gamma(b)) * x**m
    if lead == 0.0:
        # 1/Gamma at a pole of Gamma: the whole log part vanishes
        return res
    lx = math.log(x)
    # n = 0 term carries 1/(0! * (0+m)!) = 1/m!
    term = 1.0 / math.factorial(m) + 0.0j
    s = 0.0 + 0.0j
    for n in range(_SERIES_MAX_TERMS):
        bracket = (
            lx
            - _digamma(n + 1.0)
            - _digamma(n + m + 1.0)
            + _digamma(a + n + m)
            + _digamma(b + n + m)
        )
        s += term * bracket
        # convergence judged on |term|, not the bracket (which can vanish)
        if n > 1 and abs(term) * (abs(lx) + 8.0) <= _SERIES_EPS * abs(s):
            break
        term *= (a + m + n) * (b + m + n) / ((n + 1) * (n + m + 1)) * x
    return res + lead * s


def _transform_z_to_1mz(a: complex, b: complex, c: complex, x: float) -> complex:
    """2F1 near z=1 via connection formulas; x = 1-z computed by the caller."""
    w = c - a - b
    m = _near_int(w, _CAB_TOL)
    if m is None:
        # generic two-term connection formula
        t1 = _gamma(c) * _gamma(w) / (_gamma(c - a) * _gamma(c - b)) * _gauss_series(
            a, b, 1 - w, x
        )
        t2 = (
            _gamma(c)
            * _gamma(-w)
            / (_gamma(a) * _gamma(b))
            * cmath.exp(w * math.log(x))
            * _gauss_series(c - a, c - b, 1 + w, x)
        )
        return t1 + t2
    if m < 0:
        # Euler reflection turns c-a-b = -|m| into +|m|, then the log case
        return cmath.exp(w * math.log(x)) * _transform_z_to_1mz(c - a, c - b, c, x)
    return _log_case(a, b, m, x)


def hyp2f1(
    a: complex,
    b: complex,
    c: complex,
    z: float,
    *,
    one_minus_z: float | None = None,
) -> complex:
    """Gauss hypergeometric function 2F1(a,b;c;z) for real z < 1.

    Parameters
    ----------
    a, b, c : complex
        Parameters; c must not be a nonpositive integer.
    z : float
        Real argument.  Any finite z is accepted when a or b is a
        nonpositive integer (terminating polynomial); otherwise z < 1, with
        the direct series for |z| <= 0.95, the z -> 1-z connection formulas
        on (0.95, 1) and the Pfaff reflection for z < -0.95.
    one_minus_z : float, optional
        Exact value of 1-z when the caller can compute it without
        cancellation (the kernel evaluations can); used by the z -> 1-z
        transform and as the Euler/log power base.

    Notes
    -----
    When c-a-b is within 1e-8 of an integer the transform switches to the
    logarithmic-case expansion; parameters between ~1e-8 and ~1e-6 from that
    set lose accuracy near z = 1 through cancellation of the two generic
    connection terms.
    """
    a = complex(a)
    b = complex(b)
    c = complex(c)
    z = float(z)
    if not math.isfinite(z):
        raise DomainError("z must be finite")
    if _nonpositive_int(c) is not None:
        raise InvalidParam(f"c={c} is a nonpositive integer (2F1 pole)")

    ka = _nonpositive_int(a)
    kb = _nonpositive_int(b)
    if ka is not None or kb is not None:
        if ka is not None and kb is not None:
            k = max(ka, kb)
            other = b if k == ka else a
        elif ka is not None:
            k, other = ka, b
        else:
            k, other = kb, a
        return _polynomial_sum(k, other, c, z)

    if z == 0.0:
        return 1.0 + 0.0j
    if abs(z) <= _SERIES_CUT:
        return _gauss_series(a, b, c, z)
    if z < 0.0:
        # Pfaff reflection: argument z/(z-1) lands in (0, 1); for very
        # negative z it approaches 1, so reroute through the full dispatch
        # with the exact 1 - z/(z-1) = 1/(1-z)
        zp = z / (z - 1.0)
        if zp > _SERIES_CUT:
            inner = hyp2f1(a, c - b, c, zp, one_minus_z=1.0 / (1.0 - z))
        else:
            inner = _gauss_series(a, c - b, c, zp)
        return cmath.exp(-a * math.log(1.0 - z)) * inner
    # for z rounding to 1.0 the caller-supplied complement still resolves
    # the argument; only a nonpositive complement is actually divergent
    x = one_minus_z if one_minus_z is not None else 1.0 - z
    if x <= 0.0:
        raise DivergentSeries(f"2F1 diverges for z={z} >= 1")
    return _transform_z_to_1mz(a, b, c, x)


# ---------------------------------------------------------------------------
# Half-integer Bessel functions


def _sph_jn_trig(ell: int, z: float) -> float:
    # closed trig forms, ell <= 2
    s, co = math.sin(z), math.cos(z)
    if ell == 0:
        return s / z
    if ell == 1:
        return s / (z * z) - co / z
    return (3.0 / (z * z * z) - 1.0 / z) * s - 3.0 * co / (z * z)


def _sph_jn_series(ell: int, z: float) -> float:
    # ascending series, cancellation-free; used for z < 1 where the trig
    # forms subtract nearly equal 1/z^k terms
    pref = 1.0
    for n in range(1, ell + 1):
        pref *= z / (2 * n + 1)
    w = -0.5 * z * z
    term = 1.0
    s = 1.0
    for k in range(1, 40):
        term *= w / (k * (2 * ell + 2 * k + 1))
        s += term
        if abs(term) <= 1e-17 * abs(s):
            break
    return pref * s


def _sph_jn_up(ell: int, z: float) -> float:
    # upward recurrence, stable for z > nu
    jm, j = _sph_jn_trig(0, z), _sph_jn_trig(1, z)
    for n in range(1, ell):
        jm, j = j, (2 * n + 1) / z * j - jm
    return j


def _sph_jn_miller(ell: int, z: float) -> float:
    # downward (Miller) recurrence with normalization against j0 or j1;
    # upward is unstable for z < nu.
    nstart = ell + 25 + int(z)
    jp = 0.0
    j = 1e-30
    out = 0.0
    for n in range(nstart, 0, -1):
        jm = (2 * n + 1) / z * j - jp
        jp, j = j, jm
        if n - 1 == ell:
            out = j
        if abs(j) > 1e250:
            j *= 1e-250
            jp *= 1e-250
            out *= 1e-250
    # j now holds the unnormalized j0, jp the unnormalized j1
    j0 = math.sin(z) / z
    if abs(j0) > 0.1 / (1.0 + z):
        scale = j0 / j
    else:
        # near a zero of sin z / z; normalize against j1 instead
        j1 = math.sin(z) / (z * z) - math.cos(z) / z
        scale = j1 / jp
    return out * scale


def bessel_j_half(ell: int, z: float) -> float:
    """Bessel function of half-integer order, J_{ell+1/2}(z), for z > 0."""
    if ell < 0 or ell != int(ell):
        raise InvalidParam(f"ell must be a nonnegative integer, got {ell}")
    if z <= 0.0:
        raise DomainError(f"bessel_j_half requires z > 0, got {z}")
    ell = int(ell)
    if z < 1.0:
        j = _sph_jn_series(ell, z)
    elif ell <= 2:
        j = _sph_jn_trig(ell, z)
    elif z > ell + 0.5:
        j = _sph_jn_up(ell, z)
    else:
        j = _sph_jn_miller(ell, z)
    return math.sqrt(2.0 * z / math.pi) * j


@lru_cache(maxsize=None)
def bessel_trig_split(ell: int) -> tuple[tuple[float, ...], tuple[float, ...]]:
    """Coefficients (ascending in u = 1/x) of the exact trig split

        x * j_ell(x) = A(u) sin x + B(u) cos x.

    A has degree ell, B degree ell-1; from the three-term recurrence
    P_{n+1} = (2n+1) u P_n - P_{n-1} applied to both coefficient polynomials.
    Well conditioned for x comfortably above ell (the tail-side regime).
    """
    if ell < 0:
        raise InvalidParam("ell must be >= 0")
    a_prev, b_prev = [1.0], [0.0]
    if ell == 0:
        return tuple(a_prev), tuple(b_prev)
    a_cur, b_cur = [0.0, 1.0], [-1.0]
    for n in range(1, ell):
        fac = 2 * n + 1

        def step(cur: list[float], prev: list[float]) -> list[float]:
            nxt = [0.0] * (len(cur) + 1)
            for i, ci in enumerate(cur):
                nxt[i + 1] += fac * ci
            for i, pi in enumerate(prev):
                nxt[i] -= pi
            return nxt

        a_cur, a_prev = step(a_cur, a_prev), a_cur
        b_cur, b_prev = step(b_cur, b_prev), b_cur
    return tuple(a_cur), tuple(b_cur)


def polyval_ascending(coeffs: tuple[float, ...], u: float) -> float:
    """Horner evaluation of sum_k coeffs[k] u^k."""
    acc = 0.0
    for ck in reversed(coeffs):
        acc = acc * u + ck
    return acc


# ---------------------------------------------------------------------------
# Laguerre, spherical harmonics, incomplete gamma


def assoc_laguerre(k: int, alpha: float, x: float) -> float:
    """Associated Laguerre polynomial L_k^alpha(x) by three-term recurrence."""
    if k < 0 or k != int(k):
        raise InvalidParam(f"k must be a nonnegative integer, got {k}")
    if alpha <= -1.0:
        raise InvalidParam(f"alpha must be > -1, got {alpha}")
    if x < 0.0:
        raise DomainError(f"x must be >= 0, got {x}")
    k = int(k)
    if k == 0:
        return 1.0
    lm, l = 1.0, 1.0 + alpha - x
    for j in range(1, k):
        lm, l = l, ((2 * j + 1 + alpha - x) * l - (j + alpha) * lm) / (j + 1)
    return l


def _legendre_pmm(m: int, x: float) -> float:
    # P_m^m(x) = (-1)^m (2m-1)!! (1-x^2)^{m/2}, Condon-Shortley included
    p = 1.0
    s2 = max(1.0 - x * x, 0.0)
    if m > 0:
        fact = 1.0
        somx2 = math.sqrt(s2)
        for _ in range(m):
            p *= -fact * somx2
            fact += 2.0
    return p


def spherical_harmonic(ell: int, m: int, theta: float, phi: float) -> complex:
    """Orthonormal spherical harmonic Y_{ell,m}(theta, phi).

    Quantum-mechanical (Condon-Shortley) convention; unit L^2 norm over the
    sphere and eigenrelation Delta_{S^2} Y = -ell(ell+1) Y.
    """
    if ell < 0 or ell != int(ell):
        raise InvalidParam(f"ell must be a nonnegative integer, got {ell}")
    if abs(m) > ell:
        raise IndexError(f"|m|={abs(m)} exceeds ell={ell}")
    ell, m = int(ell), int(m)
    mm = abs(m)
    x = math.cos(theta)

    p = _legendre_pmm(mm, x)
    if ell > mm:
        pm1, p = p, x * (2 * mm + 1) * p
        for n in range(mm + 2, ell + 1):
            pm1, p = p, ((2 * n - 1) * x * p - (n + mm - 1) * pm1) / (n - mm)
    norm = math.sqrt(
        (2 * ell + 1)
        / (4.0 * math.pi)
        * math.factorial(ell - mm)
        / math.factorial(ell + mm)
    )
    y = norm * p * cmath.exp(1j * mm * phi)
    if m < 0:
        y = ((-1) ** mm) * y.conjugate()
    return y


_GAMMA_EPS = 1e-15
_GAMMA_MAX_ITER = 500


def _upper_gamma_cf(a: float, x: float) -> float:
    # modified Lentz continued fraction; good for x > a+1
    tiny = 1e-300
    b = x + 1.0 - a
    c = 1.0 / tiny
    d = 1.0 / b
    h = d
    for i in range(1, _GAMMA_MAX_ITER):
        an = -i * (i - a)
        b += 2.0
        d = an * d + b
        if abs(d) < tiny:
            d = tiny
        c = b + an / c
        if abs(c) < tiny:
            c = tiny
        d = 1.0 / d
        delta = d * c
        h *= delta
        if abs(delta - 1.0) < _GAMMA_EPS:
            break
    return math.exp(-x + a * math.log(x)) * h


def _lower_gamma_series(a: float, x: float) -> float:
    # gamma(a,x) series, a > 0, x <= a+1
    term = 1.0 / a
    total = term
    ap = a
    for _ in range(_GAMMA_MAX_ITER):
        ap += 1.0
        term *= x / ap
        total += term
        if abs(term) < abs(total) * _GAMMA_EPS:
            break
    return total * math.exp(-x + a * math.log(x))


_EULER_GAMMA = 0.5772156649015328606


def upper_incomplete_gamma(a: float, x: float) -> float:
    """Upper incomplete gamma function Gamma(a, x) for x > 0.

    a > 0: continued fraction for x > a+1, series via the lower function
    otherwise.  a <= 0 with x <= 1: lifted through the recurrence
    Gamma(a,x) = (Gamma(a+1,x) - x^a e^{-x}) / a (the continued fraction is
    unreliable there), with the exponential-integral series at a = 0.
    """
    if x <= 0.0:
        raise DomainError(f"upper_incomplete_gamma requires x > 0, got {x}")
    if a <= 0.0 and x <= 1.0:
        if a == 0.0:
            # Gamma(0,x) = E1(x) = -euler - ln x + sum (-1)^{k+1} x^k/(k k!)
            s = -_EULER_GAMMA - math.log(x)
            term = 1.0
            for k in range(1, _GAMMA_MAX_ITER):
                term *= -x / k
                s -= term / k
                if abs(term) < _GAMMA_EPS * max(abs(s), 1.0):
                    break
            return s
        return (upper_incomplete_gamma(a + 1.0, x) - math.exp(-x + a * math.log(x))) / a
    if x > a + 1.0:
        return _upper_gamma_cf(a, x)
    return math.gamma(a) - _lower_gamma_series(a, x)
