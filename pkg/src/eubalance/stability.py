"""Surplus-deficit gap analysis on paired exponential accumulation models.

The gap f(t) = a*exp(b*t) - c*exp(d*t) between a fitted surplus model
S(t) = a*exp(b*t) and the magnitude |D(t)| = c*exp(d*t) of a fitted deficit
model admits closed-form roots for f, f', and f''. When d > b those roots
t2 < t1 < t0 are equally spaced by ln(d/b)/(d-b). t0 is the turning point
where accumulated deficits overtake accumulated surpluses; the level S(t0)
together with the single-prediction confidence bands of both component fits
yields an uncertainty time interval [t_m, t_M] around t0.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

from .expfit import ExpFitModel, predict, se_single, t_quantile

DEFAULT_BAND_LEVEL = 0.99
BRACKET_HALF_WIDTH = 15.0
SCAN_STEP = 0.01


class StabilityError(Exception):
    """Base class for gap-analysis failures."""


class NoIntersection(StabilityError):
    """The two curves (or the requested derivative pair) never cross."""


class RootNotBracketed(StabilityError):
    """No confidence band attains the turning-point level in the bracket."""


@dataclass(frozen=True)
class GapAnalysis:
    surplus_model: ExpFitModel
    deficit_model: ExpFitModel

    def __post_init__(self) -> None:
        if self.surplus_model.alpha <= 0.0:
            raise ValueError("surplus model must have positive alpha")
        if self.deficit_model.alpha >= 0.0:
            raise ValueError("deficit model must have negative alpha")
        if self.surplus_model.beta <= 0.0 or self.deficit_model.beta <= 0.0:
            raise ValueError("both growth rates must be positive")

    @property
    def a(self) -> float:
        return self.surplus_model.alpha

    @property
    def b(self) -> float:
        return self.surplus_model.beta

    @property
    def c(self) -> float:
        return abs(self.deficit_model.alpha)

    @property
    def d(self) -> float:
        return self.deficit_model.beta


@dataclass(frozen=True)
class TurningPoints:
    t0: float
    t1: float
    t2: float
    level: float


@dataclass(frozen=True)
class UncertaintyInterval:
    t_m: float
    t_M: float
    band_level: float
    joint_level: float


def gap_eval(analysis: GapAnalysis, t: float) -> tuple[float, float, float]:
    """Gap value and its first two time derivatives at t."""
    a, b, c, d = analysis.a, analysis.b, analysis.c, analysis.d
    es = math.exp(b * t)
    ed = math.exp(d * t)
    return (a * es - c * ed,
            a * b * es - c * d * ed,
            a * b * b * es - c * d * d * ed)


def _gap_root(a: float, b: float, c: float, d: float) -> float:
    # a*e^{bt} = c*e^{dt}  =>  t = ln(a/c) / (d - b)
    if b == d:
        raise NoIntersection("equal growth rates never cross")
    ratio = a / c
    if ratio <= 0.0:
        raise NoIntersection("coefficient ratio is not positive")
    return math.log(ratio) / (d - b)


def _refine(func, x: float) -> float:
    """Bisection fallback around x for when the closed form lost precision."""
    h = max(abs(x), 1.0) * 1e-6
    lo, hi = x - h, x + h
    flo, fhi = func(lo), func(hi)
    for _ in range(60):
        if flo * fhi <= 0.0:
            break
        h *= 2.0
        lo, hi = x - h, x + h
        flo, fhi = func(lo), func(hi)
    else:
        return x
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        fm = func(mid)
        if fm == 0.0:
            return mid
        if flo * fm < 0.0:
            hi, fhi = mid, fm
        else:
            lo, flo = mid, fm
    return 0.5 * (lo + hi)


def turning_points(analysis: GapAnalysis) -> TurningPoints:
    """Roots of the gap, its slope, and its curvature, plus the gap level."""
    a, b, c, d = analysis.a, analysis.b, analysis.c, analysis.d
    t0 = _gap_root(a, c=c, b=b, d=d)
    t1 = _gap_root(a * b, c=c * d, b=b, d=d)
    t2 = _gap_root(a * b * b, c=c * d * d, b=b, d=d)

    def scale(t: float) -> float:
        return a * math.exp(b * t) + c * math.exp(d * t)

    def representable(t: float) -> bool:
        return max(b, d) * abs(t) < 700.0  # exp() stays in double range

    if representable(t0) and abs(gap_eval(analysis, t0)[0]) > 1e-9 * scale(t0):
        t0 = _refine(lambda t: gap_eval(analysis, t)[0], t0)
    if representable(t1) and abs(gap_eval(analysis, t1)[1]) > 1e-9 * scale(t1):
        t1 = _refine(lambda t: gap_eval(analysis, t)[1], t1)
    if representable(t2) and abs(gap_eval(analysis, t2)[2]) > 1e-9 * scale(t2):
        t2 = _refine(lambda t: gap_eval(analysis, t)[2], t2)
    level = a * math.exp(b * t0) if b * t0 < 700.0 else math.inf
    return TurningPoints(t0=t0, t1=t1, t2=t2, level=level)


def band_envelope(model: ExpFitModel, t: float,
                  band_level: float) -> tuple[float, float]:
    """Single-prediction confidence band bounds of one model at t."""
    row = predict(model, t, level=band_level)
    return row.ci_low, row.ci_high


def _band_functions(analysis: GapAnalysis, q_s: float, q_d: float):
    """The four band curves measured on the positive (magnitude) axis."""
    s, d = analysis.surplus_model, analysis.deficit_model

    def surplus(t: float) -> float:
        return s.alpha * math.exp(s.beta * t)

    def deficit_mag(t: float) -> float:
        return -d.alpha * math.exp(d.beta * t)

    return (
        lambda t: surplus(t) + q_s * se_single(s, t),
        lambda t: surplus(t) - q_s * se_single(s, t),
        lambda t: deficit_mag(t) + q_d * se_single(d, t),
        lambda t: deficit_mag(t) - q_d * se_single(d, t),
    )


def _band_roots(func, level: float, lo: float, hi: float) -> list[float]:
    """All crossings of func(t) = level in [lo, hi]: scan, bisect, polish."""
    roots: list[float] = []
    steps = int(round((hi - lo) / SCAN_STEP))
    prev_t = lo
    prev_v = func(lo) - level
    for k in range(1, steps + 1):
        t = lo + (hi - lo) * k / steps
        v = func(t) - level
        if prev_v == 0.0:
            roots.append(prev_t)
        elif prev_v * v < 0.0:
            x0, x1, f0 = prev_t, t, prev_v
            for _ in range(80):
                mid = 0.5 * (x0 + x1)
                fm = func(mid) - level
                if fm == 0.0:
                    x0 = x1 = mid
                    break
                if f0 * fm < 0.0:
                    x1 = mid
                else:
                    x0, f0 = mid, fm
            x = 0.5 * (x0 + x1)
            h = 1e-7
            slope = (func(x + h) - func(x - h)) / (2.0 * h)
            if slope != 0.0:
                x -= (func(x) - level) / slope
            roots.append(x)
        prev_t, prev_v = t, v
    return roots


def uncertainty_interval(analysis: GapAnalysis,
                         band_level: float = DEFAULT_BAND_LEVEL
                         ) -> UncertaintyInterval:
    """Extreme intersections of the four band curves with the gap level.

    Each confidence band of the surplus and of the deficit magnitude is
    intersected with the horizontal line at the turning-point level. Bands
    that never reach the level inside [t0 - 15, t0 + 15] contribute no
    root; the interval spans the earliest and latest of the roots found.
    """
    if not 0.0 < band_level < 1.0:
        raise ValueError(f"band_level must lie in (0, 1), got {band_level}")
    tp = turning_points(analysis)
    q_s = t_quantile(1.0 - (1.0 - band_level) / 2.0,
                     analysis.surplus_model.dof)
    q_d = t_quantile(1.0 - (1.0 - band_level) / 2.0,
                     analysis.deficit_model.dof)
    funcs = _band_functions(analysis, q_s, q_d)
    lo, hi = tp.t0 - BRACKET_HALF_WIDTH, tp.t0 + BRACKET_HALF_WIDTH
    roots: list[float] = []
    for func in funcs:
        roots.extend(_band_roots(func, tp.level, lo, hi))
    if not roots:
        raise RootNotBracketed(
            f"no band attains the level {tp.level:.6g} in "
            f"[{lo:.6g}, {hi:.6g}]")
    return UncertaintyInterval(t_m=min(roots), t_M=max(roots),
                               band_level=band_level,
                               joint_level=band_level * band_level)


def phase_label(analysis: GapAnalysis, t: float) -> str:
    """Classify t against the slope root t1 and the sign root t0.

    The comparison runs at calendar-year resolution (nearest whole year),
    so a year whose midpoint the gap maximum falls in already counts as
    decreasing stability.
    """
    tp = turning_points(analysis)
    year = round(t)
    if year < round(tp.t1):
        return "stable-growth"
    if year < round(tp.t0):
        return "decreasing-stability"
    return "increasing-instability"
