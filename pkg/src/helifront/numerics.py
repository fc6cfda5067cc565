"""Numerical kernels: finite differences, root finding, continuation,
angle unwrapping, order-of-vanishing detection, and the scalar-function
wrappers the geometry modules share.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence

import numpy as np
from scipy import integrate, interpolate

from . import expr as ex
from .errors import GridTooCoarseError, SeedNotRootError, ValidationError

__all__ = [
    "RootConfig",
    "derivative",
    "find_roots",
    "continue_root",
    "ContinuationBranch",
    "unwrap_angle",
    "AngleFunction",
    "vanishing_order",
    "ScalarFunc",
    "SymFunc",
    "CallableFunc",
    "ExplicitFunc",
    "QuadFunc",
    "OffsetFunc",
    "as_scalar_func",
]


@dataclass(frozen=True)
class RootConfig:
    """Tolerances for scalar root finding and continuation."""

    abs_tol: float = 1e-12      # on |f|
    step_tol: float = 1e-10     # on |dt|
    max_iter: int = 100
    bracket_samples: int = 512

    def __post_init__(self):
        if self.abs_tol <= 0 or self.step_tol <= 0:
            raise ValidationError("tolerances must be strictly positive")
        if self.max_iter < 1:
            raise ValidationError("max_iter must be >= 1")
        if self.bracket_samples < 2:
            raise ValidationError("bracket_samples must be >= 2")


_BASE_H = {1: 1e-5, 2: 3e-4, 3: 1.5e-3}


def derivative(f: Callable[[float], float], t: float, order: int = 1) -> float:
    """Finite-difference derivative of ``f`` at ``t`` for order 1, 2 or 3.

    Central differences with one Richardson extrapolation step (step sizes
    h and h/2).
    """
    if order not in (1, 2, 3):
        raise ValidationError("order must be 1, 2, or 3")
    h = _BASE_H[order] * (1.0 + abs(t))

    def stencil(h: float) -> float:
        if order == 1:
            return (f(t + h) - f(t - h)) / (2.0 * h)
        if order == 2:
            return (f(t + h) - 2.0 * f(t) + f(t - h)) / (h * h)
        return (f(t + 2 * h) - 2.0 * f(t + h) + 2.0 * f(t - h) - f(t - 2 * h)) / (
            2.0 * h ** 3
        )

    d1 = stencil(h)
    d2 = stencil(h / 2.0)
    return (4.0 * d2 - d1) / 3.0


def _bisect_newton(
    f: Callable[[float], float],
    lo: float,
    hi: float,
    flo: float,
    fhi: float,
    cfg: RootConfig,
) -> float:
    """Root in [lo, hi] with f(lo), f(hi) of opposite signs.

    Newton iterations safeguarded by the shrinking bracket; falls back to
    bisection whenever the Newton step leaves it.
    """
    x = 0.5 * (lo + hi)
    for _ in range(cfg.max_iter):
        fx = f(x)
        if abs(fx) <= cfg.abs_tol:
            return x
        if (flo < 0) == (fx < 0):
            lo, flo = x, fx
        else:
            hi, fhi = x, fx
        dfx = derivative(f, x, 1)
        if dfx != 0.0:
            step = fx / dfx
            cand = x - step
        else:
            cand = lo - 1.0  # force bisection
        if not (lo < cand < hi):
            cand = 0.5 * (lo + hi)
        if abs(cand - x) <= cfg.step_tol * (1.0 + abs(x)):
            return cand
        x = cand
    return x


def find_roots(
    f: Callable[[float], float],
    interval: tuple[float, float],
    cfg: RootConfig = RootConfig(),
) -> list[float]:
    """All roots of a continuous ``f`` on ``interval``.

    The interval is sampled at ``cfg.bracket_samples`` points; every sign
    change is refined by safeguarded Newton.  A second pass inspects local
    minima of ``|f|`` that dip below ``abs_tol`` to catch roots of even
    multiplicity that touch zero without a sign change.  Roots closer than
    ``10 * step_tol`` are merged.  Returns a sorted list (possibly empty).
    """
    a, b = float(interval[0]), float(interval[1])
    if not a < b:
        raise ValidationError("interval must satisfy a < b")
    ts = np.linspace(a, b, cfg.bracket_samples)
    vec = getattr(f, "vectorized", None)
    if vec is not None:
        vals = np.asarray(vec(ts), dtype=float)
    else:
        vals = np.array([f(t) for t in ts], dtype=float)

    roots: list[float] = []
    for i in range(len(ts) - 1):
        v0, v1 = vals[i], vals[i + 1]
        if v0 == 0.0:
            roots.append(ts[i])
            continue
        if v0 * v1 < 0.0:
            roots.append(_bisect_newton(f, ts[i], ts[i + 1], v0, v1, cfg))
    if vals[-1] == 0.0:
        roots.append(ts[-1])

    # even-multiplicity pass: local minima of |f| already below abs_tol
    av = np.abs(vals)
    for i in range(1, len(ts) - 1):
        if av[i] <= cfg.abs_tol and av[i] <= av[i - 1] and av[i] <= av[i + 1]:
            roots.append(ts[i])

    roots.sort()
    merged: list[float] = []
    for r in roots:
        if merged and abs(r - merged[-1]) < 10.0 * cfg.step_tol:
            continue
        merged.append(r)
    return merged


@dataclass
class ContinuationBranch:
    points: list[tuple[float, float]]
    status: str  # "complete" or "fold"
    detail: str = ""

    def __iter__(self):
        return iter(self.points)


def continue_root(
    F: Callable[[float, float], float],
    t0: float,
    c_grid: Sequence[float],
    cfg: RootConfig = RootConfig(),
) -> ContinuationBranch:
    """March the root branch of ``F(c, t) = 0`` along ``c_grid``.

    Starts from ``t0`` at ``c_grid[0]`` (must already be a root within
    ``100 * abs_tol``, with a nonzero t-derivative) and warm-starts Newton at
    each subsequent grid node.  Stops with status ``"fold"`` and the partial
    branch if Newton fails to converge.
    """
    c_grid = list(c_grid)
    if not c_grid:
        raise ValidationError("c_grid must be non-empty")
    c0 = c_grid[0]
    r0 = F(c0, t0)
    if abs(r0) > 100.0 * cfg.abs_tol:
        raise SeedNotRootError(
            f"F(c0, t0) = {r0:.3g} exceeds seed tolerance {100 * cfg.abs_tol:.3g}"
        )
    dF0 = derivative(lambda t: F(c0, t), t0, 1)
    scale = 1.0 + abs(r0)
    if abs(dF0) <= 1e-8 * scale:
        raise SeedNotRootError(
            f"dF/dt at the seed is numerically zero ({dF0:.3g}); "
            "implicit-function continuation cannot start"
        )

    points: list[tuple[float, float]] = []
    t = t0
    for k, c in enumerate(c_grid):
        g = lambda x: F(c, x)  # noqa: E731
        x = t
        ok = False
        for _ in range(cfg.max_iter):
            fx = g(x)
            if abs(fx) <= cfg.abs_tol:
                ok = True
                break
            dfx = derivative(g, x, 1)
            if dfx == 0.0 or not math.isfinite(dfx):
                break
            step = fx / dfx
            x = x - step
            if not math.isfinite(x):
                break
            if abs(step) <= cfg.step_tol * (1.0 + abs(x)):
                ok = abs(g(x)) <= max(cfg.abs_tol, 1e-9)
                break
        if not ok:
            return ContinuationBranch(
                points, "fold", f"Newton failed at c={c:.6g} (node {k}); possible fold"
            )
        t = x
        points.append((c, t))
    return ContinuationBranch(points, "complete")


@dataclass
class AngleFunction:
    """Unwrapped angle samples with cubic interpolation off-grid."""

    ts: np.ndarray
    angles: np.ndarray
    _spline: interpolate.CubicSpline = field(repr=False, default=None)

    def __post_init__(self):
        if self._spline is None and len(self.ts) >= 2:
            object.__setattr__(
                self, "_spline", interpolate.CubicSpline(self.ts, self.angles)
            )

    def __call__(self, t: float) -> float:
        if self._spline is None:
            return float(self.angles[0])
        return float(self._spline(t))


def unwrap_angle(samples: Sequence[tuple[float, Sequence[float]]]) -> AngleFunction:
    """Continuous angle function through unit-vector samples.

    ``samples`` is a list of ``(t, (vx, vy))`` with consecutive vectors less
    than pi/2 apart.  The returned angles agree with ``atan2(vy, vx)`` up to
    integer multiples of 2*pi at every node.
    """
    if not samples:
        raise ValidationError("need at least one sample")
    ts = np.array([s[0] for s in samples], dtype=float)
    vs = np.array([s[1] for s in samples], dtype=float)
    raw = np.arctan2(vs[:, 1], vs[:, 0])
    norms = np.hypot(vs[:, 0], vs[:, 1])
    unit = vs / norms[:, None]
    out = np.empty_like(raw)
    out[0] = raw[0]
    for i in range(1, len(raw)):
        dot = float(np.dot(unit[i - 1], unit[i]))
        if dot < math.cos(math.pi / 2):
            jump = math.acos(max(-1.0, min(1.0, dot)))
            raise GridTooCoarseError(
                f"consecutive normals at t={ts[i - 1]:.6g}, {ts[i]:.6g} differ by "
                f"{jump:.4g} rad (>= pi/2); refine the sample grid"
            )
        step = raw[i] - out[i - 1]
        out[i] = out[i - 1] + math.remainder(step, 2.0 * math.pi)
    return AngleFunction(ts, out)


def vanishing_order(f: "ScalarFunc | ex.Expr", t0: float, m_max: int = 8) -> Optional[int]:
    """Smallest m with the m-th symbolic derivative of ``f`` nonzero at ``t0``.

    Returns ``None`` when f and all derivatives up to ``m_max`` vanish there.
    Orders are decided from exact symbolic derivatives; finite differences are
    too ill-conditioned beyond order 2.
    """
    if m_max > 8:
        raise ValidationError("m_max must be <= 8")
    g = as_scalar_func(f)
    if g.expr is None:
        raise ValidationError("vanishing_order requires a symbolic function")
    scale = 1.0
    magnitudes: list[float] = []
    for m in range(m_max + 1):
        val = abs(g(t0))
        scale = max(magnitudes, default=0.0) + 1.0
        if val > 1e-8 * scale:
            return m
        magnitudes.append(val)
        g = g.deriv()
    return None


# -- scalar function wrappers ------------------------------------------------

class ScalarFunc:
    """A real function of t with a derivative operator.

    Subclasses either carry an :class:`~helifront.expr.Expr` (exact
    derivatives) or fall back to finite differences.
    """

    expr: Optional[ex.Expr] = None

    def __call__(self, t: float) -> float:  # pragma: no cover - abstract
        raise NotImplementedError

    def deriv(self) -> "ScalarFunc":  # pragma: no cover - abstract
        raise NotImplementedError

    def sample(self, ts: np.ndarray) -> np.ndarray:
        return np.array([self(float(t)) for t in ts], dtype=float)


class SymFunc(ScalarFunc):
    """Expression-backed scalar function."""

    def __init__(self, e: ex.Expr):
        self.expr = e
        self._fn = ex.compile_scalar(e)
        self._vec = None
        self._deriv: Optional["SymFunc"] = None

    def __call__(self, t: float) -> float:
        return float(self._fn(t))

    @property
    def vectorized(self):
        if self._vec is None:
            vec = ex.compile_vectorized(self.expr)

            def call(ts):
                arr = np.asarray(ts, dtype=float)
                out = np.asarray(vec(arr), dtype=float)
                if out.shape != arr.shape:  # constant expression
                    out = np.broadcast_to(out, arr.shape).copy()
                return out

            self._vec = call
        return self._vec

    def sample(self, ts: np.ndarray) -> np.ndarray:
        return self.vectorized(ts)

    def deriv(self) -> "SymFunc":
        if self._deriv is None:
            self._deriv = SymFunc(ex.diff(self.expr))
        return self._deriv

    def __repr__(self) -> str:
        return f"SymFunc({ex.to_source(self.expr)})"


class CallableFunc(ScalarFunc):
    """Plain callable with finite-difference derivatives."""

    def __init__(self, fn: Callable[[float], float], order: int = 1):
        self._fn = fn
        self._order = order

    def __call__(self, t: float) -> float:
        return float(self._fn(t))

    def deriv(self) -> "CallableFunc":
        fn = self._fn
        return CallableFunc(lambda t: derivative(fn, t, 1))


class ExplicitFunc(ScalarFunc):
    """Callable with a caller-supplied exact derivative callable."""

    def __init__(self, fn: Callable[[float], float], dfn: Optional[Callable[[float], float]] = None):
        self._fn = fn
        self._dfn = dfn

    def __call__(self, t: float) -> float:
        return float(self._fn(t))

    def deriv(self) -> ScalarFunc:
        if self._dfn is None:
            fn = self._fn
            return CallableFunc(lambda t: derivative(fn, t, 1))
        return ExplicitFunc(self._dfn)


class QuadFunc(ScalarFunc):
    """Antiderivative: value0 + integral of a symbolic integrand from t0.

    The derivative is the exact symbolic integrand; only point values need
    quadrature.  Used for profile curves defined by prescribed curvature
    data, where the position has no elementary closed form.
    """

    def __init__(self, integrand: SymFunc, t0: float, value0: float):
        self._integrand = integrand
        self._t0 = float(t0)
        self._v0 = float(value0)
        self._cache: dict[float, float] = {}

    def __call__(self, t: float) -> float:
        t = float(t)
        if t == self._t0:
            return self._v0
        hit = self._cache.get(t)
        if hit is not None:
            return hit
        val, _err = integrate.quad(
            self._integrand, self._t0, t, epsabs=1e-13, epsrel=1e-13, limit=200
        )
        out = self._v0 + val
        if len(self._cache) < 65536:
            self._cache[t] = out
        return out

    def deriv(self) -> SymFunc:
        return self._integrand

    def sample(self, ts: np.ndarray) -> np.ndarray:
        # integrate segment-wise along the sorted grid instead of from t0
        # each time; O(n) quadratures over short smooth segments
        ts = np.asarray(ts, dtype=float)
        order = np.argsort(ts)
        out = np.empty_like(ts)
        prev_t, prev_v = self._t0, self._v0
        for idx in order:
            t = float(ts[idx])
            seg, _ = integrate.quad(
                self._integrand, prev_t, t, epsabs=1e-13, epsrel=1e-13, limit=200
            )
            prev_v = prev_v + seg
            prev_t = t
            out[idx] = prev_v
        return out


class OffsetFunc(ScalarFunc):
    """``base(t) + coeff * off(t)`` where ``off`` is symbolic.

    Keeps derivatives exact even when ``base`` is quadrature-backed: once the
    base derivative is symbolic the whole chain collapses to a SymFunc.
    """

    def __init__(self, base: ScalarFunc, off: SymFunc, coeff: float):
        self._base = base
        self._off = off
        self._coeff = float(coeff)
        self.expr = (
            None
            if base.expr is None
            else base.expr + ex.Num(self._coeff) * off.expr
        )

    def __call__(self, t: float) -> float:
        return self._base(t) + self._coeff * self._off(t)

    def sample(self, ts: np.ndarray) -> np.ndarray:
        return self._base.sample(ts) + self._coeff * self._off.sample(ts)

    def deriv(self) -> ScalarFunc:
        db = self._base.deriv()
        doff = self._off.deriv()
        if db.expr is not None:
            return SymFunc(db.expr + ex.Num(self._coeff) * doff.expr)
        return OffsetFunc(db, doff, self._coeff)


def as_scalar_func(f) -> ScalarFunc:
    if isinstance(f, ScalarFunc):
        return f
    if isinstance(f, ex.Expr):
        return SymFunc(f)
    if callable(f):
        return CallableFunc(f)
    raise TypeError(f"cannot wrap {type(f).__name__} as a scalar function")
