"""Flat-space radial wave solvers for a single angular mode.

Three independent evaluators for the radial factor F(r, t) of a spherical
wave with data F(r, 0) = f0(r), F_t(r, 0) = f1(r):

* ``solve_riemann``   -- traveling-wave average plus a hypergeometric-
  polynomial tail integral; the general path, any ell.
* ``solve_recursive`` -- explicit closed forms with rational coefficients,
  ell <= 5, zero initial velocity.
* ``solve_hankel``    -- spectral form: half-integer-order Hankel transform
  of the data, then a semi-infinite oscillatory integral in the spectral
  variable.

``minkowski_kg`` adds the mass term through a Bessel-kernel time
convolution applied to the wave blocks.  All evaluators accept radii below
the light cone through the parity extension r^ell * F even.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from functools import lru_cache
from typing import Callable

import numpy as np
from scipy.interpolate import CubicSpline
from scipy.special import j0 as _bessel_j0
from scipy.special import j1 as _bessel_j1

from .errors import DomainError, InvalidParam, ToleranceNotMet, UnsupportedEll
from .quadrature import (
    DEFAULT_SPEC,
    IntegralResult,
    QuadratureSpec,
    integrate_finite,
    integrate_semi_infinite_oscillatory,
)
from .specfun import bessel_j_half, bessel_trig_split, polyval_ascending

__all__ = [
    "RadialProfile",
    "ModeState",
    "gaussian_profile",
    "scaled_profile",
    "tabulated_profile",
    "traveling_average",
    "wave_block",
    "solve_recursive",
    "solve_riemann",
    "solve_hankel",
    "minkowski_kg",
    "hankel_transform",
]


@dataclass(frozen=True)
class RadialProfile:
    """Radial data function with its parity extension and decay metadata.

    func is the bare profile on r > 0; calls with negative arguments go
    through the extension F(-r) = (-1)^ell F(r) (r^ell F even).  mu is the
    small-r exponent: F = O(r^{mu - 1/2}) as r -> 0+.  decay_class is
    "exponential" or "algebraic"; algebraic profiles carry their rate in
    decay_k (|F| = O(r^{-decay_k})) and are admissible for the spectral
    path only when decay_k > 2.  hankel, when set, is a closed form of the
    order parity_ell + 1/2 transform used to skip the numerical one.
    """

    func: Callable[[float], complex]
    mu: float
    parity_ell: int
    decay_class: str = "exponential"
    decay_k: float = math.inf
    hankel: Callable[[float], complex] | None = None
    label: str = "profile"

    def __post_init__(self) -> None:
        if self.decay_class not in ("exponential", "algebraic"):
            raise InvalidParam(f"unknown decay_class {self.decay_class!r}")
        if self.parity_ell < 0:
            raise InvalidParam("parity_ell must be >= 0")

    def __call__(self, x: float) -> complex:
        if x > 0.0:
            return complex(self.func(x))
        if x < 0.0:
            v = complex(self.func(-x))
            return -v if self.parity_ell % 2 else v
        # x = 0: defined only when the small-r exponent allows a limit
        if self.mu > 0.5:
            return 0j
        return complex(self.func(0.0))

    def r_f(self, x: float) -> complex:
        """x * F(x) with its removable zero at x = 0 (x F = O(x^{mu+1/2}))."""
        if x == 0.0:
            return 0j
        return x * self(x)

    @property
    def hankel_admissible(self) -> bool:
        return self.decay_class == "exponential" or self.decay_k > 2.0


@dataclass(frozen=True)
class ModeState:
    """One spherical-harmonic mode: angular indices and its radial data.

    f1 = None means zero initial velocity.
    """

    ell: int
    m: int
    f0: RadialProfile
    f1: RadialProfile | None = None

    def __post_init__(self) -> None:
        if self.ell < 0:
            raise InvalidParam("ell must be >= 0")
        if abs(self.m) > self.ell:
            raise InvalidParam(f"|m|={abs(self.m)} exceeds ell={self.ell}")
        if self.f0.parity_ell != self.ell:
            raise InvalidParam("f0 parity does not match the mode ell")
        if self.f1 is not None and self.f1.parity_ell != self.ell:
            raise InvalidParam("f1 parity does not match the mode ell")


def gaussian_profile(
    ell: int,
    sigma: float = 1.0,
    power: int | None = None,
    amplitude: complex = 1.0,
) -> RadialProfile:
    """Profile amplitude * r^power * exp(-sigma r^2), power defaulting to ell.

    power - ell must be even and nonnegative so that r^ell F is even and the
    profile is regular.  When power == ell the transform of order ell + 1/2
    has the closed form amplitude * lam^{ell+1/2} e^{-lam^2/(4 sigma)} /
    (2 sigma)^{ell+3/2}, stored on the profile.
    """
    if sigma <= 0.0:
        raise InvalidParam("sigma must be positive")
    p = ell if power is None else power
    if p < 0 or (p - ell) % 2 or p < ell:
        raise InvalidParam(f"power={p} incompatible with ell={ell} parity")

    def func(x: float, _a=amplitude, _s=sigma, _p=p) -> complex:
        return _a * x**_p * math.exp(-_s * x * x)

    hat = None
    if p == ell:
        scale = amplitude / (2.0 * sigma) ** (ell + 1.5)

        def hat(lam: float, _c=scale, _s=sigma, _e=ell) -> complex:
            return _c * lam ** (_e + 0.5) * math.exp(-lam * lam / (4.0 * _s))

    return RadialProfile(
        func=func,
        mu=p + 0.5,
        parity_ell=ell,
        decay_class="exponential",
        hankel=hat,
        label=f"gaussian(ell={ell},sigma={sigma},power={p})",
    )


def scaled_profile(profile: RadialProfile, coef: complex) -> RadialProfile:
    """The profile multiplied by a constant (possibly complex) factor."""
    base_hat = profile.hankel
    return replace(
        profile,
        func=lambda x: coef * profile.func(x),
        hankel=None if base_hat is None else (lambda lam: coef * base_hat(lam)),
        label=f"{coef}*{profile.label}",
    )


def tabulated_profile(
    r_values,
    f_values,
    ell: int,
    mu: float | None = None,
    decay_class: str = "exponential",
    decay_k: float = math.inf,
) -> RadialProfile:
    """Cubic-spline profile through sampled (r, F) pairs, zero outside them."""
    r = np.asarray(r_values, dtype=float)
    f = np.asarray(f_values)
    if r.ndim != 1 or r.size < 4 or np.any(np.diff(r) <= 0) or r[0] <= 0:
        raise InvalidParam("need >= 4 strictly increasing radii > 0")
    if f.shape != r.shape:
        raise InvalidParam("r and F arrays must have matching shapes")
    spline = CubicSpline(r, f)
    lo, hi = float(r[0]), float(r[-1])

    def func(x: float) -> complex:
        if x < lo or x > hi:
            return 0j
        return complex(spline(x))

    return RadialProfile(
        func=func,
        mu=ell + 0.5 if mu is None else mu,
        parity_ell=ell,
        decay_class=decay_class,
        decay_k=decay_k,
        label="tabulated",
    )


# ---------------------------------------------------------------------------
# Traveling-average + tail form


@lru_cache(maxsize=None)
def _tail_coeffs(ell: int) -> tuple[float, ...]:
    # coefficients of the terminating 2F1(1-ell, ell+2; 2; y), degree ell-1
    coeffs = []
    term = 1.0
    for k in range(ell):
        coeffs.append(term)
        term *= (1 - ell + k) * (ell + 2 + k) / ((2 + k) * (k + 1))
    return tuple(coeffs)


def traveling_average(profile: RadialProfile, r: float, t: float) -> complex:
    """d'Alembert average [(r-t) F(r-t) + (r+t) F(r+t)] / (2 r); the
    remaining part of the wave solution is the mode's tail."""
    if r <= 0.0:
        raise DomainError(f"traveling_average requires r > 0, got {r}")
    return (profile.r_f(r - t) + profile.r_f(r + t)) / (2.0 * r)


def wave_block(
    profile: RadialProfile,
    ell: int,
    r: float,
    t: float,
    spec: QuadratureSpec = DEFAULT_SPEC,
) -> complex:
    """Radial wave solution at (r, t) for data (profile, 0) on mode ell.

    Traveling-wave average of r*F plus the tail integral weighted by the
    degree ell-1 polynomial in y = (t^2 - (r-s)^2)/(4 r s).  The reflected
    part of the integration range for t > r cancels the [-(t-r), t-r]
    segment exactly (the integrand is odd under s -> -s there, combining
    the data parity with the reflection symmetry of the polynomial), so the
    tail is integrated over [|r-t|, r+t]; on that range y lies in [0, 1/2].
    """
    if r <= 0.0:
        raise DomainError(f"wave_block requires r > 0, got {r}")
    if t < 0.0:
        raise DomainError(f"wave_block requires t >= 0, got {t}")
    lead = (profile.r_f(r - t) + profile.r_f(r + t)) / (2.0 * r)
    if ell == 0 or t == 0.0:
        return lead
    coeffs = _tail_coeffs(ell)
    lo, hi = abs(r - t), r + t

    def integrand(s: float) -> complex:
        # product form of t^2 - (r-s)^2; both factors >= 0 on [lo, hi]
        y = (t - r + s) * (t + r - s) / (4.0 * r * s)
        acc = 0.0
        for ck in reversed(coeffs):
            acc = acc * y + ck
        return profile(s) * acc

    tail = integrate_finite(integrand, lo, hi, spec).value
    return lead - 0.25 * ell * (ell + 1) * t / (r * r) * tail


def solve_riemann(
    mode: ModeState,
    r: float,
    t: float,
    spec: QuadratureSpec = DEFAULT_SPEC,
) -> complex:
    """Radial factor at (r, t): f0 block plus the time-integrated f1 block."""
    if r <= 0.0:
        raise DomainError(f"solve_riemann requires r > 0, got {r}")
    if mode.f0.mu <= mode.ell - 1.5:
        raise InvalidParam(
            f"small-r exponent mu={mode.f0.mu} too weak for ell={mode.ell} "
            "(needs mu > ell - 3/2)"
        )
    v = wave_block(mode.f0, mode.ell, r, t, spec)
    if mode.f1 is not None and t > 0.0:
        outer = replace(spec, singularity_split_points=(r,))
        v += integrate_finite(
            lambda tau: wave_block(mode.f1, mode.ell, r, tau, spec), 0.0, t, outer
        ).value
    return v


def solve_recursive(
    mode: ModeState,
    r: float,
    t: float,
    spec: QuadratureSpec = DEFAULT_SPEC,
) -> complex:
    """Closed-form radial factor for ell <= 5, zero initial velocity.

    The tail reduces to moment integrals I_k = int F0(s) s^k ds over
    [|r-t|, r+t] (the s < 0 reflected part cancels by parity, as every
    k here has ell + k odd) with explicit polynomial-in-(r, t) weights.
    """
    if mode.ell > 5:
        raise UnsupportedEll(
            f"closed forms cover ell <= 5, got {mode.ell}; use solve_riemann"
        )
    if mode.f1 is not None:
        raise InvalidParam("closed forms cover zero initial velocity only")
    if r <= 0.0:
        raise DomainError(f"solve_recursive requires r > 0, got {r}")
    if t < 0.0:
        raise DomainError(f"solve_recursive requires t >= 0, got {t}")
    f0 = mode.f0
    ell = mode.ell
    lead = (f0.r_f(r - t) + f0.r_f(r + t)) / (2.0 * r)
    if ell == 0 or t == 0.0:
        return lead
    lo, hi = abs(r - t), r + t

    def mom(k: int) -> complex:
        return integrate_finite(lambda s: f0(s) * s**k, lo, hi, spec).value

    r2, t2 = r * r, t * t
    if ell == 1:
        tail = -mom(0)
    elif ell == 2:
        tail = (-1.5 * (r2 - t2) * mom(-1) - 1.5 * mom(1)) / r
    elif ell == 3:
        tail = (
            -1.875 * (r2 - t2) ** 2 * mom(-2)
            - 0.25 * (9.0 * r2 - 15.0 * t2) * mom(0)
            - 1.875 * mom(2)
        ) / r2
    elif ell == 4:
        tail = -(
            (35.0 / 16.0) * (r2**3 - 3.0 * r2**2 * t2 + 3.0 * r2 * t2**2 - t2**3)
            * mom(-3)
            + (5.0 / 16.0) * (9.0 * r2**2 - 30.0 * r2 * t2 + 21.0 * t2**2) * mom(-1)
            + (5.0 / 16.0) * (9.0 * r2 - 21.0 * t2) * mom(1)
            + (35.0 / 16.0) * mom(3)
        ) / (r2 * r)
    else:
        tail = (
            (-315.0 * r2**4 + 1260.0 * r2**3 * t2 - 1890.0 * r2**2 * t2**2
             + 1260.0 * r2 * t2**3 - 315.0 * t2**4) / 128.0 * mom(-4)
            + (-105.0 * r2**3 + 525.0 * r2**2 * t2 - 735.0 * r2 * t2**2
               + 315.0 * t2**3) / 32.0 * mom(-2)
            + (-225.0 * r2**2 + 1050.0 * r2 * t2 - 945.0 * t2**2) / 64.0 * mom(0)
            + (315.0 * t2 - 105.0 * r2) / 32.0 * mom(2)
            - (315.0 / 128.0) * mom(4)
        ) / (r2 * r2)
    return lead + 0.5 * t / r2 * tail


# ---------------------------------------------------------------------------
# Spectral form


def hankel_transform(
    f: RadialProfile,
    nu_ell: int,
    s: float,
    spec: QuadratureSpec = DEFAULT_SPEC,
) -> complex:
    """Transform int_0^inf f(rho) J_{nu_ell+1/2}(s rho) rho^{3/2} drho."""
    if s <= 0.0:
        raise DomainError(f"hankel_transform requires s > 0, got {s}")
    if not f.hankel_admissible:
        raise InvalidParam("profile decays too slowly for the spectral path")
    res = integrate_semi_infinite_oscillatory(
        lambda rho: f(rho) * bessel_j_half(nu_ell, s * rho) * rho**1.5,
        2.0 * math.pi / s,
        spec,
    )
    return res.value


def _profile_transform(
    f: RadialProfile, ell: int, spec: QuadratureSpec
) -> Callable[[float], complex]:
    """Transform of order ell + 1/2 as a callable: closed form when the
    profile carries one for this order, else memoized numerical quadrature."""
    if not f.hankel_admissible:
        raise InvalidParam("profile decays too slowly for the spectral path")
    if f.hankel is not None and ell == f.parity_ell:
        return f.hankel
    cache: dict[float, complex] = {}

    def num(lam: float) -> complex:
        v = cache.get(lam)
        if v is None:
            v = hankel_transform(f, ell, lam, spec) if lam > 0.0 else 0j
            cache[lam] = v
        return v

    return num


def _component_tail(
    gfun: Callable[[float], complex],
    coef: float,
    freq: float,
    kind: str,
    poly: tuple[float, ...],
    r: float,
    lam0: float,
    spec: QuadratureSpec,
) -> IntegralResult:
    """One trig component of the spectral tail: coef * int_{lam0}^inf
    g(lam) P(1/(r lam)) trig(freq lam) dlam."""
    if kind == "sin":
        if freq < 0.0:
            coef, freq = -coef, -freq
        if freq == 0.0:
            return IntegralResult(0j, 0.0)
    else:
        freq = abs(freq)

    def integrand(lam: float) -> complex:
        u = 1.0 / (r * lam)
        tr = math.sin(freq * lam) if kind == "sin" else math.cos(freq * lam)
        return gfun(lam) * polyval_ascending(poly, u) * tr

    quarter = math.pi / (4.0 * lam0)
    if freq >= quarter:
        # full oscillation structure starts within reach of lam0: phase-
        # aligned half-period cells with acceleration
        k = math.ceil(lam0 * freq / math.pi - (0.0 if kind == "sin" else 0.5))
        z1 = (k + (0.0 if kind == "sin" else 0.5)) * math.pi / freq
        while z1 <= lam0:
            z1 += math.pi / freq
        res = integrate_semi_infinite_oscillatory(
            integrand, 2.0 * math.pi / freq, spec, start=lam0, first_boundary=z1
        )
        return IntegralResult(coef * res.value, abs(coef) * res.err_est)

    # near-DC component: the trig factor is flat out to the quarter-period
    # point; geometric panels to there (or to the resource cap), then either
    # resume oscillatory cells or close with an algebraic tail correction
    trunc = spec.oscillatory_truncation
    lam_slow = max(trunc.lambda_max, 16.0 * lam0)
    lam1 = math.pi / (4.0 * freq) if freq > 0.0 else math.inf
    edge_hi = min(lam1, lam_slow)
    val = 0j
    err = 0.0
    a = lam0
    while a < edge_hi:
        b = min(2.0 * a, edge_hi)
        res = integrate_finite(integrand, a, b, spec)
        val += res.value
        err += res.err_est
        a = b
    if lam1 < lam_slow:
        # oscillation resumes; lift the cap so the first half-period cells fit
        wide = replace(
            spec,
            oscillatory_truncation=replace(
                trunc, lambda_max=max(trunc.lambda_max, 3000.0 * lam1)
            ),
        )
        k = math.ceil(edge_hi * freq / math.pi - (0.0 if kind == "sin" else 0.5))
        z1 = (k + (0.0 if kind == "sin" else 0.5)) * math.pi / freq
        while z1 <= edge_hi:
            z1 += math.pi / freq
        res = integrate_semi_infinite_oscillatory(
            integrand, 2.0 * math.pi / freq, wide, start=edge_hi, first_boundary=z1
        )
        val += res.value
        err += res.err_est
    else:
        # freq == 0 (or indistinguishable): close with the power-law tail
        # int_L^inf c lam^-p = env(L) L / (p-1), p measured from the envelope
        e0 = gfun(edge_hi) * polyval_ascending(poly, 1.0 / (r * edge_hi))
        e1 = gfun(1.25 * edge_hi) * polyval_ascending(poly, 1.0 / (1.25 * r * edge_hi))
        if abs(e0) > 0.0:
            if abs(e1) == 0.0:
                p = math.inf
            else:
                p = math.log(abs(e0) / abs(e1)) / math.log(1.25)
            if p <= 1.2:
                raise ToleranceNotMet(
                    f"spectral envelope decays like lam^-{p:.2f}; tail "
                    "correction unreliable",
                    value=coef * val,
                    err_est=err + abs(e0) * edge_hi,
                )
            if math.isfinite(p):
                corr = e0 * edge_hi / (p - 1.0)
                val += corr
                err += 0.1 * abs(corr) + trunc.tail_tol
    return IntegralResult(coef * val, abs(coef) * err)


def _hankel_block(
    fhat: Callable[[float], complex],
    ell: int,
    r: float,
    omega: float,
    weight: str,
    spec: QuadratureSpec,
) -> complex:
    """(1/sqrt r) int_0^inf fhat(lam) w(omega lam) J_{ell+1/2}(r lam) dlam,
    with weight "cos" carrying an extra lam factor (the data-type block) and
    "sin" none (the velocity-type block).

    Direct panels up to lam0 = max(40, 3(ell+2)/r); beyond that the Bessel
    factor splits exactly into sin/cos components with polynomial envelopes
    in 1/(r lam), the time weight is product-to-sum combined to frequencies
    r +- omega, and each component runs through the oscillatory ladder.
    """
    cos_w = weight == "cos"
    if not cos_w and omega == 0.0:
        return 0j
    lam0 = max(40.0, 3.0 * (ell + 2) / r)

    def direct(lam: float) -> complex:
        wv = math.cos(omega * lam) if cos_w else math.sin(omega * lam)
        v = fhat(lam) * wv * bessel_j_half(ell, r * lam)
        return v * lam if cos_w else v

    fmax = r + abs(omega)
    n_pan = min(max(1, int(lam0 * fmax / (4.0 * math.pi)) + 1), 600)
    pan_spec = replace(
        spec,
        abs_tol=spec.abs_tol / (2.0 * n_pan),
        singularity_split_points=(),
    )
    total = 0j
    for i in range(n_pan):
        a = lam0 * i / n_pan
        b = lam0 * (i + 1) / n_pan
        total += integrate_finite(direct, a, b, pan_spec).value

    # tail components: J_{ell+1/2}(x) = sqrt(2/(pi x)) (A(1/x) sin x + B(1/x) cos x)
    acoef, bcoef = bessel_trig_split(ell)
    pref = math.sqrt(2.0 / (math.pi * r))
    if cos_w:
        def g(lam: float) -> complex:
            return fhat(lam) * pref * math.sqrt(lam)

        comps = [
            (0.5, r + omega, "sin", acoef),
            (0.5, r - omega, "sin", acoef),
            (0.5, r + omega, "cos", bcoef),
            (0.5, r - omega, "cos", bcoef),
        ]
    else:
        def g(lam: float) -> complex:
            return fhat(lam) * pref / math.sqrt(lam)

        comps = [
            (0.5, r - omega, "cos", acoef),
            (-0.5, r + omega, "cos", acoef),
            (0.5, r + omega, "sin", bcoef),
            (-0.5, r - omega, "sin", bcoef),
        ]
    for coef, freq, kind, poly in comps:
        if all(c == 0.0 for c in poly):
            continue
        total += _component_tail(g, coef, freq, kind, poly, r, lam0, spec).value
    return total / math.sqrt(r)


def solve_hankel(
    mode: ModeState,
    r: float,
    t: float,
    spec: QuadratureSpec = DEFAULT_SPEC,
) -> complex:
    """Radial factor via the spectral representation: cos(lam t) weight with
    a lam factor on the f0 transform, sin(lam t) weight on the f1 transform."""
    if r <= 0.0:
        raise DomainError(f"solve_hankel requires r > 0, got {r}")
    if t < 0.0:
        raise DomainError(f"solve_hankel requires t >= 0, got {t}")
    hat0 = _profile_transform(mode.f0, mode.ell, spec)
    v = _hankel_block(hat0, mode.ell, r, t, "cos", spec)
    if mode.f1 is not None and t > 0.0:
        hat1 = _profile_transform(mode.f1, mode.ell, spec)
        v += _hankel_block(hat1, mode.ell, r, t, "sin", spec)
    return v


# ---------------------------------------------------------------------------
# Klein-Gordon in flat space


def minkowski_kg(
    mode: ModeState,
    m0: float,
    r: float,
    t: float,
    spec: QuadratureSpec = DEFAULT_SPEC,
) -> complex:
    """Massive flat-space radial factor via Bessel-kernel time convolutions
    of the wave blocks:

        u = v0(t) - m0 t int_0^{pi/2} J_1(m0 t cos h) v0(t sin h) dh
                  +    t int_0^{pi/2} J_0(m0 t cos h) cos h v1(t sin h) dh

    (tau = t sin h removes the 1/sqrt(t^2 - tau^2) endpoint weight).  The
    massless limit reduces exactly to the wave solution.
    """
    if m0 < 0.0:
        raise InvalidParam(f"m0 must be >= 0, got {m0}")
    if r <= 0.0:
        raise DomainError(f"minkowski_kg requires r > 0, got {r}")
    u = wave_block(mode.f0, mode.ell, r, t, spec)
    if t == 0.0:
        return u
    # kink of the blocks at tau = r maps to h = asin(r/t)
    outer = spec
    if r < t:
        outer = replace(spec, singularity_split_points=(math.asin(r / t),))
    if m0 > 0.0:
        u -= m0 * t * integrate_finite(
            lambda h: _bessel_j1(m0 * t * math.cos(h))
            * wave_block(mode.f0, mode.ell, r, t * math.sin(h), spec),
            0.0,
            0.5 * math.pi,
            outer,
        ).value
    if mode.f1 is not None:
        if m0 > 0.0:
            u += t * integrate_finite(
                lambda h: _bessel_j0(m0 * t * math.cos(h))
                * math.cos(h)
                * wave_block(mode.f1, mode.ell, r, t * math.sin(h), spec),
                0.0,
                0.5 * math.pi,
                outer,
            ).value
        else:
            tau_outer = replace(spec, singularity_split_points=(r,))
            u += integrate_finite(
                lambda tau: wave_block(mode.f1, mode.ell, r, tau, spec),
                0.0,
                t,
                tau_outer,
            ).value
    return u
