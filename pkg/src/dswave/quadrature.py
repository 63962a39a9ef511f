"""Adaptive quadrature: finite intervals with declared algebraic
singularities, and semi-infinite oscillatory integrals via half-period
cells with Euler-style acceleration of the alternating cell sums.

Finite integrals are delegated to QUADPACK (scipy.integrate.quad) behind a
tolerance-enforcing wrapper; the oscillatory ladder is built here because no
stock routine exposes the truncation/tail contract the solvers need.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from typing import Callable

from scipy.integrate import quad

from .errors import (
    InvalidParam,
    NonFiniteIntegrand,
    TailNotNegligible,
    ToleranceNotMet,
)

__all__ = [
    "OscillatoryTruncation",
    "QuadratureSpec",
    "IntegralResult",
    "DEFAULT_SPEC",
    "integrate_finite",
    "integrate_semi_infinite_oscillatory",
]


@dataclass(frozen=True)
class OscillatoryTruncation:
    """Truncation policy for semi-infinite integrals."""

    lambda_max: float = 1e5
    tail_tol: float = 1e-10


@dataclass(frozen=True)
class QuadratureSpec:
    """Tolerances and subdivision limits shared by all integral evaluations."""

    abs_tol: float = 1e-10
    rel_tol: float = 1e-8
    max_subdivisions: int = 200
    oscillatory_truncation: OscillatoryTruncation = field(
        default_factory=OscillatoryTruncation
    )
    singularity_split_points: tuple[float, ...] = ()

    def __post_init__(self) -> None:
        if self.abs_tol <= 0 or self.rel_tol <= 0:
            raise InvalidParam("tolerances must be positive")
        if self.max_subdivisions < 8:
            raise InvalidParam("max_subdivisions must be >= 8")
        if self.oscillatory_truncation.lambda_max <= 0:
            raise InvalidParam("lambda_max must be positive")


@dataclass(frozen=True)
class IntegralResult:
    value: complex
    err_est: float


DEFAULT_SPEC = QuadratureSpec()


def _quad_part(g, a: float, b: float, pts, epsabs: float, epsrel: float, limit: int):
    out = quad(
        g, a, b, points=pts, epsabs=epsabs, epsrel=epsrel, limit=limit, full_output=1
    )
    # full_output=1 returns a 4th element (explanation) only on ier != 0
    return out[0], out[1], len(out) < 4


def integrate_finite(
    f: Callable[[float], complex],
    a: float,
    b: float,
    spec: QuadratureSpec = DEFAULT_SPEC,
) -> IntegralResult:
    """Adaptive integral of a complex-valued f over [a, b].

    Singularity locations listed in spec.singularity_split_points that fall
    inside (a, b) are passed to the subdivision as mandatory break points.
    Raises ToleranceNotMet (carrying the best estimate) when the combined
    error estimate exceeds max(abs_tol, rel_tol*|value|), and
    NonFiniteIntegrand if f returns nan/inf inside the range.
    """
    if a > b:
        raise InvalidParam(f"integrate_finite requires a <= b, got ({a}, {b})")
    if a == b:
        return IntegralResult(0j, 0.0)

    cache: dict[float, complex] = {}

    def fc(x: float) -> complex:
        v = cache.get(x)
        if v is None:
            v = complex(f(x))
            if not (math.isfinite(v.real) and math.isfinite(v.imag)):
                raise NonFiniteIntegrand(f"integrand not finite at x={x!r}")
            cache[x] = v
        return v

    pts = sorted(p for p in spec.singularity_split_points if a < p < b) or None
    epsabs = 0.5 * spec.abs_tol
    epsrel = 0.5 * spec.rel_tol
    vr, er, ok_r = _quad_part(
        lambda x: fc(x).real, a, b, pts, epsabs, epsrel, spec.max_subdivisions
    )
    vi, ei, ok_i = _quad_part(
        lambda x: fc(x).imag, a, b, pts, epsabs, epsrel, spec.max_subdivisions
    )
    value = complex(vr, vi)
    err = math.hypot(er, ei)
    tol = max(spec.abs_tol, spec.rel_tol * abs(value))
    if err > tol:
        flag = "" if (ok_r and ok_i) else " (subdivision limit or roundoff)"
        raise ToleranceNotMet(
            f"integrate_finite on [{a}, {b}]: err_est {err:.3e} > tol {tol:.3e}{flag}",
            value=value,
            err_est=err,
        )
    return IntegralResult(value, err)


def _euler_limit(cells: list[complex]) -> complex:
    # repeated pairwise averaging of the partial sums; binomial weights kill
    # the alternating transient geometrically
    row: list[complex] = []
    acc = 0j
    for c in cells:
        acc += c
        row.append(acc)
    while len(row) > 1:
        row = [0.5 * (row[i] + row[i + 1]) for i in range(len(row) - 1)]
    return row[0]


def _alternating(cells: list[complex]) -> bool:
    for u, v in zip(cells, cells[1:]):
        if (u.conjugate() * v).real >= 0.0:
            return False
    return True


def integrate_semi_infinite_oscillatory(
    f: Callable[[float], complex],
    period_hint: float,
    spec: QuadratureSpec = DEFAULT_SPEC,
    *,
    start: float = 0.0,
    first_boundary: float | None = None,
) -> IntegralResult:
    """Integral of f over [start, infinity) for oscillatory-decaying f.

    The axis is cut into half-period cells (first cell edge overridable via
    first_boundary so callers can align cells with the zeros of their trig
    factor); each cell integrates adaptively; alternating runs of cell sums
    are accelerated by repeated averaging.  Convergence is declared either
    when two consecutive cells are negligible (decay-dominated case, with a
    geometric tail bound folded into err_est) or when the accelerated
    estimate stabilizes.  On reaching lambda_max the discarded tail must be
    below tail_tol, else TailNotNegligible.
    """
    if period_hint <= 0:
        raise InvalidParam(f"period_hint must be positive, got {period_hint}")
    trunc = spec.oscillatory_truncation
    lam_max = trunc.lambda_max
    tail_tol = trunc.tail_tol
    h = 0.5 * period_hint
    cell_spec = replace(
        spec,
        abs_tol=max(spec.abs_tol / 16.0, 1e-15),
        singularity_split_points=(),
    )

    def cell(a: float, b: float) -> IntegralResult:
        try:
            return integrate_finite(f, a, b, cell_spec)
        except ToleranceNotMet as e:
            return IntegralResult(e.value, e.err_est)

    b_prev = start
    b_next = first_boundary if (first_boundary or 0.0) > start else start + h
    sums: list[complex] = []
    errs = 0.0
    total = 0j
    accel: complex | None = None
    stable = 0
    while b_prev < lam_max:
        b_next = min(b_next, lam_max)
        res = cell(b_prev, b_next)
        sums.append(res.value)
        errs += res.err_est
        total += res.value
        scale = max(abs(total), abs(accel) if accel is not None else 0.0)
        tol = max(spec.abs_tol, spec.rel_tol * scale)
        if len(sums) >= 2:
            s1, s0 = abs(sums[-1]), abs(sums[-2])
            if s1 <= 0.25 * tol and s0 <= 0.25 * tol:
                ratio = min(s1 / s0, 0.9) if s0 > 0.0 else 0.0
                tail = s1 * ratio / (1.0 - ratio)
                if tail <= max(tail_tol, tol):
                    return IntegralResult(total, errs + s1 + tail)
        if len(sums) >= 6 and _alternating(sums[-6:]):
            est = _euler_limit(sums)
            if accel is not None:
                delta = abs(est - accel)
                if delta <= 0.5 * tol:
                    stable += 1
                    if stable >= 2:
                        return IntegralResult(est, errs + 2.0 * delta)
                else:
                    stable = 0
            accel = est
        b_prev, b_next = b_next, b_next + h

    last = abs(sums[-1]) if sums else 0.0
    value = accel if accel is not None else total
    if last > tail_tol:
        raise TailNotNegligible(
            f"cell sums still {last:.3e} > tail_tol {tail_tol:.3e} "
            f"at lambda_max={lam_max}",
            value=value,
            err_est=errs + last,
        )
    # tail verified small; truncation charged to the error estimate
    return IntegralResult(value, errs + last + tail_tol)
