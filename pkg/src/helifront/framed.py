"""Framed surfaces: maps x(u, v) with an adapted orthonormal pair (n, s).

``n`` is normal to the surface, ``s`` is tangent to nothing in particular
(any unit field orthogonal to n), and ``t = n x s`` completes a positively
oriented moving frame.  Projecting the derivatives of (x, n, s) onto the
frame gives the basic invariants

    x_u = a1 s + b1 t        n_u = e1 s + f1 t      s_u = -e1 n + g1 t
    x_v = a2 s + b2 t        n_v = e2 s + f2 t      s_v = -e2 n + g2 t

from which the curvature triple (J_F, K_F, H_F) and the concomitant
8-vector I_F are built.  Everything here is evaluated numerically from the
surface callables (finite differences with Richardson extrapolation), which
makes this module the independent oracle for the closed forms in
:mod:`helifront.helicoid`.

All invariants are computed by frame projection, never by inverting a
Jacobian, so they remain valid at singular points of x.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from .errors import ValidationError
from .numerics import derivative

__all__ = [
    "FramedSurface",
    "BasicInvariants",
    "FramedCurvature",
    "ClassificationFlags",
    "FocalSolutions",
    "basic_invariants",
    "integrability_residual",
    "curvature",
    "concomitant",
    "classify",
    "parallel_surface",
    "focal_lambdas",
    "classical_curvatures",
    "solve_focal_quadratic",
]

_ZERO = 1e-10

Vec3Map = Callable[[float, float], np.ndarray]


@dataclass(frozen=True)
class BasicInvariants:
    a1: float
    b1: float
    a2: float
    b2: float
    e1: float
    f1: float
    g1: float
    e2: float
    f2: float
    g2: float

    def as_array(self) -> np.ndarray:
        return np.array(
            [self.a1, self.b1, self.a2, self.b2,
             self.e1, self.f1, self.g1, self.e2, self.f2, self.g2]
        )


@dataclass(frozen=True)
class FramedCurvature:
    J_F: float
    K_F: float
    H_F: float

    def as_array(self) -> np.ndarray:
        return np.array([self.J_F, self.K_F, self.H_F])


@dataclass(frozen=True)
class ClassificationFlags:
    regular: bool
    legendre_immersion: bool
    framed_immersion: bool


@dataclass(frozen=True)
class FocalSolutions:
    """Real focal offsets; ``lambdas`` ordered (minus-branch, plus-branch)."""

    lambdas: tuple
    indeterminate: bool = False


class FramedSurface:
    """Surface map with frame, evaluated through callables.

    ``x``, ``n``, ``s`` map (u, v) to 3-vectors.  Build-time validation
    samples a grid and checks |n| = |s| = 1, n.s = 0 (within 1e-9) and the
    framed-surface condition x_u.n = x_v.n = 0 (within 1e-8 relative).
    """

    def __init__(
        self,
        x: Vec3Map,
        n: Vec3Map,
        s: Vec3Map,
        domain: tuple[tuple[float, float], tuple[float, float]],
        validate: bool = True,
        grid: tuple[int, int] = (8, 8),
    ):
        self.x = lambda u, v: np.asarray(x(u, v), dtype=float)
        self.n = lambda u, v: np.asarray(n(u, v), dtype=float)
        self.s = lambda u, v: np.asarray(s(u, v), dtype=float)
        self.domain = domain
        if validate:
            self._validate(grid)

    def t(self, u: float, v: float) -> np.ndarray:
        return np.cross(self.n(u, v), self.s(u, v))

    def _validate(self, grid: tuple[int, int]) -> None:
        (u0, u1), (v0, v1) = self.domain
        pad_u = 1e-4 * (1.0 + abs(u0) + abs(u1))
        pad_v = 1e-4 * (1.0 + abs(v0) + abs(v1))
        us = np.linspace(u0 + pad_u, u1 - pad_u, grid[0])
        vs = np.linspace(v0 + pad_v, v1 - pad_v, grid[1])
        for u in us:
            for v in vs:
                nv = self.n(u, v)
                sv = self.s(u, v)
                if abs(nv @ nv - 1.0) > 1e-9 or abs(sv @ sv - 1.0) > 1e-9:
                    raise ValidationError(
                        f"frame not unit at (u, v) = ({u:.6g}, {v:.6g})"
                    )
                if abs(nv @ sv) > 1e-9:
                    raise ValidationError(
                        f"n . s != 0 at (u, v) = ({u:.6g}, {v:.6g})"
                    )
                xu = _partial(self.x, u, v, 0)
                xv = _partial(self.x, u, v, 1)
                scale = 1.0 + np.linalg.norm(xu) + np.linalg.norm(xv)
                if abs(xu @ nv) > 1e-8 * scale or abs(xv @ nv) > 1e-8 * scale:
                    raise ValidationError(
                        f"x_u . n or x_v . n != 0 at (u, v) = ({u:.6g}, {v:.6g})"
                    )


def _partial(f: Vec3Map, u: float, v: float, axis: int, h: Optional[float] = None) -> np.ndarray:
    """Vector-valued central difference with one Richardson step."""
    if h is None:
        h = 1e-5 * (1.0 + abs(u if axis == 0 else v))

    def stencil(hh: float) -> np.ndarray:
        if axis == 0:
            return (f(u + hh, v) - f(u - hh, v)) / (2.0 * hh)
        return (f(u, v + hh) - f(u, v - hh)) / (2.0 * hh)

    d1 = stencil(h)
    d2 = stencil(h / 2.0)
    return (4.0 * d2 - d1) / 3.0


def _second_partial(f: Vec3Map, u: float, v: float, which: str) -> np.ndarray:
    h = 3e-4 * (1.0 + abs(u))
    k = 3e-4 * (1.0 + abs(v))

    def stencil(hh: float, kk: float) -> np.ndarray:
        if which == "uu":
            return (f(u + hh, v) - 2.0 * f(u, v) + f(u - hh, v)) / (hh * hh)
        if which == "vv":
            return (f(u, v + kk) - 2.0 * f(u, v) + f(u, v - kk)) / (kk * kk)
        return (
            f(u + hh, v + kk) - f(u + hh, v - kk) - f(u - hh, v + kk) + f(u - hh, v - kk)
        ) / (4.0 * hh * kk)

    d1 = stencil(h, k)
    d2 = stencil(h / 2.0, k / 2.0)
    return (4.0 * d2 - d1) / 3.0


def basic_invariants(S: FramedSurface, p: tuple[float, float]) -> BasicInvariants:
    """Frame projections of the first derivatives of (x, n, s) at ``p``."""
    u, v = p
    sv = S.s(u, v)
    tv = S.t(u, v)
    xu = _partial(S.x, u, v, 0)
    xv = _partial(S.x, u, v, 1)
    nu_ = _partial(S.n, u, v, 0)
    nv_ = _partial(S.n, u, v, 1)
    su = _partial(S.s, u, v, 0)
    s_v = _partial(S.s, u, v, 1)
    return BasicInvariants(
        a1=float(xu @ sv), b1=float(xu @ tv),
        a2=float(xv @ sv), b2=float(xv @ tv),
        e1=float(nu_ @ sv), f1=float(nu_ @ tv), g1=float(su @ tv),
        e2=float(nv_ @ sv), f2=float(nv_ @ tv), g2=float(s_v @ tv),
    )


def integrability_residual(S: FramedSurface, p: tuple[float, float]) -> tuple:
    """Residuals of the six compatibility conditions among the invariants.

    Identically zero for any framed surface; the returned values measure
    floating-point/finite-difference noise only.
    """
    u, v = p
    names = ("a1", "b1", "a2", "b2", "e1", "f1", "g1", "e2", "f2", "g2")

    def inv_at(uu: float, vv: float) -> dict:
        b = basic_invariants(S, (uu, vv))
        return {k: getattr(b, k) for k in names}

    here = inv_at(u, v)
    h = 2e-3 * (1.0 + abs(u))
    k = 2e-3 * (1.0 + abs(v))

    def d_du(name: str) -> float:
        f = lambda uu: inv_at(uu, v)[name]  # noqa: E731
        d1 = (f(u + h) - f(u - h)) / (2 * h)
        d2 = (f(u + h / 2) - f(u - h / 2)) / h
        return (4 * d2 - d1) / 3

    def d_dv(name: str) -> float:
        f = lambda vv: inv_at(u, vv)[name]  # noqa: E731
        d1 = (f(v + k) - f(v - k)) / (2 * k)
        d2 = (f(v + k / 2) - f(v - k / 2)) / k
        return (4 * d2 - d1) / 3

    a1, b1, a2, b2 = here["a1"], here["b1"], here["a2"], here["b2"]
    e1, f1, g1 = here["e1"], here["f1"], here["g1"]
    e2, f2, g2 = here["e2"], here["f2"], here["g2"]
    r1 = d_dv("a1") - b1 * g2 - (d_du("a2") - b2 * g1)
    r2 = d_dv("b1") - a2 * g1 - (d_du("b2") - a1 * g2)
    r3 = a1 * e2 + b1 * f2 - (a2 * e1 + b2 * f1)
    r4 = d_dv("e1") - f1 * g2 - (d_du("e2") - f2 * g1)
    r5 = d_dv("f1") - e2 * g1 - (d_du("f2") - e1 * g2)
    r6 = d_dv("g1") - e1 * f2 - (d_du("g2") - e2 * f1)
    return (r1, r2, r3, r4, r5, r6)


def curvature(S: FramedSurface, p: tuple[float, float]) -> FramedCurvature:
    return curvature_from_invariants(basic_invariants(S, p))


def curvature_from_invariants(b: BasicInvariants) -> FramedCurvature:
    J = b.a1 * b.b2 - b.a2 * b.b1
    K = b.e1 * b.f2 - b.e2 * b.f1
    H = -0.5 * ((b.a1 * b.f2 - b.a2 * b.f1) - (b.b1 * b.e2 - b.b2 * b.e1))
    return FramedCurvature(J_F=J, K_F=K, H_F=H)


def concomitant(S: FramedSurface, p: tuple[float, float]) -> np.ndarray:
    return concomitant_from_invariants(basic_invariants(S, p))


def concomitant_from_invariants(b: BasicInvariants) -> np.ndarray:
    """I_F = (J_F, K_F, H_F, |a g|, |b g|, |e g|, |f g|, |a e|)."""
    c = curvature_from_invariants(b)
    return np.array(
        [
            c.J_F,
            c.K_F,
            c.H_F,
            b.a1 * b.g2 - b.a2 * b.g1,
            b.b1 * b.g2 - b.b2 * b.g1,
            b.e1 * b.g2 - b.e2 * b.g1,
            b.f1 * b.g2 - b.f2 * b.g1,
            b.a1 * b.e2 - b.a2 * b.e1,
        ]
    )


def classify(S: FramedSurface, p: tuple[float, float]) -> ClassificationFlags:
    """Immersion flags at ``p``; monotone by construction.

    regular (J_F != 0) implies legendre_immersion (C_F != 0) implies
    framed_immersion (I_F != 0), using a 1e-10 zero threshold.
    """
    i_f = concomitant(S, p)
    regular = bool(abs(i_f[0]) > _ZERO)
    legendre = regular or bool(np.max(np.abs(i_f[:3])) > _ZERO)
    framed = legendre or bool(np.max(np.abs(i_f)) > _ZERO)
    return ClassificationFlags(regular, legendre, framed)


def parallel_surface(S: FramedSurface, lam: float) -> FramedSurface:
    """Offset surface x + lam * n with the same frame (n, s)."""
    x, n = S.x, S.n
    return FramedSurface(
        lambda u, v: x(u, v) + lam * n(u, v), S.n, S.s, S.domain, validate=False
    )


def solve_focal_quadratic(K_F: float, H_F: float, J_F: float) -> FocalSolutions:
    """Real solutions of K_F lam^2 - 2 H_F lam + J_F = 0.

    Uses the cancellation-free form (the larger-magnitude root directly, the
    other via the product of roots).  Degenerate cases: K_F ~ 0 with
    H_F != 0 yields the single root J_F / (2 H_F); K_F ~ H_F ~ 0 yields no
    roots, or an indeterminate status when J_F ~ 0 as well.
    """
    scale = abs(K_F) + abs(H_F) + abs(J_F)
    eps = 1e-14 * (1.0 + scale)
    if abs(K_F) <= eps:
        if abs(H_F) > eps:
            return FocalSolutions(lambdas=(J_F / (2.0 * H_F),))
        if abs(J_F) <= eps:
            return FocalSolutions(lambdas=(), indeterminate=True)
        return FocalSolutions(lambdas=())
    disc = H_F * H_F - K_F * J_F
    if disc < 0.0:
        return FocalSolutions(lambdas=())
    sq = np.sqrt(disc)
    if H_F >= 0.0:
        lam_plus = (H_F + sq) / K_F
        lam_minus = J_F / (H_F + sq) if (H_F + sq) != 0.0 else (H_F - sq) / K_F
    else:
        lam_minus = (H_F - sq) / K_F
        lam_plus = J_F / (H_F - sq)
    return FocalSolutions(lambdas=(lam_minus, lam_plus))


def focal_lambdas(S: FramedSurface, p: tuple[float, float]) -> FocalSolutions:
    c = curvature(S, p)
    return solve_focal_quadratic(c.K_F, c.H_F, c.J_F)


def classical_curvatures(S: FramedSurface, p: tuple[float, float]) -> tuple[float, float]:
    """Gaussian and mean curvature from the fundamental forms at a regular
    point, with the frame normal fixing orientation.  Oracle for
    K_F/J_F and H_F/J_F."""
    u, v = p
    xu = _partial(S.x, u, v, 0)
    xv = _partial(S.x, u, v, 1)
    nrm = S.n(u, v)
    E = float(xu @ xu)
    F = float(xu @ xv)
    G = float(xv @ xv)
    L = float(_second_partial(S.x, u, v, "uu") @ nrm)
    M = float(_second_partial(S.x, u, v, "uv") @ nrm)
    N = float(_second_partial(S.x, u, v, "vv") @ nrm)
    W = E * G - F * F
    if abs(W) < 1e-14 * (1.0 + E + G) ** 2:
        raise ValidationError("classical curvature undefined at a singular point")
    K = (L * N - M * M) / W
    H = (E * N - 2.0 * F * M + G * L) / (2.0 * W)
    return K, H
