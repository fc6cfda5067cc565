"""Legendre curves in the xz-plane.

A Legendre curve is a plane curve ``gamma(t) = (x(t), z(t))`` together with a
unit normal field ``nu(t) = (a(t), b(t))`` satisfying the tangency condition
``gamma' . nu = 0``.  With ``mu = J(nu)`` (rotation by +pi/2) the frame
satisfies

    nu' = ell * mu,   mu' = -ell * nu,   gamma' = beta * mu,

and the pair ``(ell, beta)`` is the curvature of the curve.  ``gamma`` is
singular exactly where ``beta`` vanishes; the pair is an immersion (a front)
where ``(ell, beta) != (0, 0)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from . import expr as ex
from .errors import (
    EllVanishesError,
    LegendreConditionError,
    SingularCurveNeedsExplicitNu,
    ValidationError,
)
from .numerics import (
    AngleFunction,
    QuadFunc,
    RootConfig,
    ScalarFunc,
    SymFunc,
    as_scalar_func,
    find_roots,
    unwrap_angle,
)

__all__ = ["LegendreCurve", "Vertex", "VertexReport"]

_ZERO = 1e-10
_VALIDATION_SAMPLES = 600


@dataclass(frozen=True)
class Vertex:
    t: float
    ordinary: bool


@dataclass(frozen=True)
class VertexReport:
    vertices: tuple[Vertex, ...]
    degenerate_everywhere: bool = False


class LegendreCurve:
    """Immutable Legendre curve with evaluable frame and curvature.

    Build with :meth:`from_gamma` (symbolic position, frame either derived
    from the tangent or supplied explicitly) or :meth:`from_curvature`
    (prescribed ``(beta, phi)`` data; positions come from quadrature while
    every derivative stays symbolic).
    """

    def __init__(
        self,
        x: ScalarFunc,
        z: ScalarFunc,
        a: SymFunc,
        b: SymFunc,
        ell: SymFunc,
        beta: SymFunc,
        domain: tuple[float, float],
        phi_expr: Optional[ex.Expr] = None,
        validate: bool = True,
    ):
        self.x, self.z = x, z
        self.a, self.b = a, b
        self.ell, self.beta = ell, beta
        self.domain = (float(domain[0]), float(domain[1]))
        if self.domain[0] >= self.domain[1]:
            raise ValidationError("domain must satisfy t_min < t_max")
        self.phi_expr = phi_expr
        self._phi: Optional[AngleFunction] = None
        if validate:
            self._validate()

    # -- constructors -------------------------------------------------------

    @classmethod
    def from_gamma(
        cls,
        x,
        z,
        domain: tuple[float, float],
        nu: Optional[tuple] = None,
        phi=None,
    ) -> "LegendreCurve":
        """Curve from symbolic components.

        ``x``, ``z`` are expressions (or source text).  With ``nu=None`` and
        ``phi=None`` the curve must be regular and the canonical frame is
        used: ``mu`` is the unit tangent (so ``beta = |gamma'| > 0``) and
        ``nu = (mu_2, -mu_1)``.  A singular curve needs an explicit ``nu``
        pair or angle ``phi``.
        """
        xe = _as_expr(x)
        ze = _as_expr(z)
        dx, dz = ex.diff(xe), ex.diff(ze)
        if phi is not None:
            pe = _as_expr(phi)
            a, b = ex.cos(pe), ex.sin(pe)
            ell = ex.diff(pe)
            beta = dz * a - dx * b
            return cls(
                SymFunc(xe), SymFunc(ze), SymFunc(a), SymFunc(b),
                SymFunc(ell), SymFunc(beta), domain, phi_expr=pe,
            )
        if nu is not None:
            ae, be = _as_expr(nu[0]), _as_expr(nu[1])
            da, db = ex.diff(ae), ex.diff(be)
            ell = be * da * -1 + ae * db  # nu' . mu with mu = (-b, a)
            beta = dz * ae - dx * be
            return cls(
                SymFunc(xe), SymFunc(ze), SymFunc(ae), SymFunc(be),
                SymFunc(ell), SymFunc(beta), domain,
            )
        # canonical frame for a regular curve
        cls._require_regular(dx, dz, domain)
        s = ex.sqrt(dx * dx + dz * dz)
        a = dz / s
        b = -dx / s
        beta = s
        ddx, ddz = ex.diff(dx), ex.diff(dz)
        ell = (dx * ddz - dz * ddx) / (dx * dx + dz * dz)
        return cls(
            SymFunc(xe), SymFunc(ze), SymFunc(a), SymFunc(b),
            SymFunc(ell), SymFunc(beta), domain,
        )

    @classmethod
    def from_curvature(
        cls,
        beta,
        phi,
        domain: tuple[float, float],
        start: tuple[float, float],
        t0: Optional[float] = None,
    ) -> "LegendreCurve":
        """Curve with prescribed curvature data ``(beta, phi)``.

        Integrates ``gamma' = beta * (-sin phi, cos phi)`` from
        ``gamma(t0) = start``.  Positions are quadrature-backed; every
        derivative is symbolic.
        """
        be = _as_expr(beta)
        pe = _as_expr(phi)
        if t0 is None:
            t0 = 0.5 * (domain[0] + domain[1])
        a, b = ex.cos(pe), ex.sin(pe)
        xdot = SymFunc(-(be * ex.sin(pe)))
        zdot = SymFunc(be * ex.cos(pe))
        x = QuadFunc(xdot, t0, start[0])
        z = QuadFunc(zdot, t0, start[1])
        return cls(
            x, z, SymFunc(a), SymFunc(b), SymFunc(ex.diff(pe)), SymFunc(be),
            domain, phi_expr=pe,
        )

    @staticmethod
    def _require_regular(dx: ex.Expr, dz: ex.Expr, domain) -> None:
        speed2 = SymFunc(dx * dx + dz * dz)
        ts = np.linspace(domain[0], domain[1], _VALIDATION_SAMPLES)
        vals = speed2.sample(ts)
        scale = 1.0 + float(np.max(vals))
        threshold = 1e-12 * scale
        worst = float(np.min(vals))
        if worst <= threshold:
            raise SingularCurveNeedsExplicitNu(
                f"|gamma'|^2 drops to {worst:.3g}; supply nu or phi explicitly"
            )
        # critical points of the squared speed can hide zeros between samples
        crit = find_roots(speed2.deriv(), domain, RootConfig(bracket_samples=256))
        for tc in crit:
            if speed2(tc) <= threshold:
                raise SingularCurveNeedsExplicitNu(
                    f"gamma is singular near t={tc:.6g}; supply nu or phi explicitly"
                )

    # -- validation ----------------------------------------------------------

    def _validate(self) -> None:
        ts = np.linspace(self.domain[0], self.domain[1], _VALIDATION_SAMPLES)
        av = self.a.sample(ts)
        bv = self.b.sample(ts)
        unit_res = np.abs(av * av + bv * bv - 1.0)
        i = int(np.argmax(unit_res))
        if unit_res[i] > 1e-8:
            raise LegendreConditionError(
                "|nu| != 1", worst_t=float(ts[i]), residual=float(unit_res[i])
            )
        dxv = self.x.deriv().sample(ts)
        dzv = self.z.deriv().sample(ts)
        tangency = np.abs(dxv * av + dzv * bv)
        scale = 1.0 + np.hypot(dxv, dzv)
        rel = tangency / scale
        i = int(np.argmax(rel))
        if rel[i] > 1e-8:
            raise LegendreConditionError(
                "gamma' . nu != 0",
                worst_t=float(ts[i]),
                residual=float(tangency[i]),
            )

    # -- frame accessors -----------------------------------------------------

    def gamma(self, t: float) -> np.ndarray:
        return np.array([self.x(t), self.z(t)])

    def nu(self, t: float) -> np.ndarray:
        return np.array([self.a(t), self.b(t)])

    def mu(self, t: float) -> np.ndarray:
        return np.array([-self.b(t), self.a(t)])

    def phi(self, t: float) -> float:
        """Smooth angle with ``nu = (cos phi, sin phi)``, unwrapped over the
        domain."""
        if self.phi_expr is not None:
            return float(ex.compile_scalar(self.phi_expr)(t))
        if self._phi is None:
            ts = np.linspace(self.domain[0], self.domain[1], 2048)
            samples = list(zip(ts, np.column_stack([self.a.sample(ts), self.b.sample(ts)])))
            self._phi = unwrap_angle(samples)
        return self._phi(t)

    def kappa_classical(self, t: float) -> float:
        """Classical curvature (x'z'' - z'x'') / |gamma'|^3 at a regular t."""
        dx, dz = self.x.deriv(), self.z.deriv()
        ddx, ddz = dx.deriv(), dz.deriv()
        s = math.hypot(dx(t), dz(t))
        return (dx(t) * ddz(t) - dz(t) * ddx(t)) / s ** 3

    # -- operations ----------------------------------------------------------

    def singular_points(self, cfg: RootConfig = RootConfig()) -> list[float]:
        """Zeros of beta on the domain (the singular set of gamma)."""
        return find_roots(self.beta, self.domain, cfg)

    def is_front_at(self, t: float) -> bool:
        """True where ``(ell, beta) != (0, 0)``."""
        return abs(self.ell(t)) + abs(self.beta(t)) > _ZERO

    def is_front(self, cfg: RootConfig = RootConfig()) -> bool:
        """True when the curve is a front on the whole domain."""
        return not self.front_failures(cfg)

    def front_failures(self, cfg: RootConfig = RootConfig()) -> list[float]:
        """Points where both ell and beta vanish."""
        return [t for t in self.singular_points(cfg) if abs(self.ell(t)) <= _ZERO]

    def parallel(self, lam: float) -> "LegendreCurve":
        """Parallel curve ``gamma + lam * nu`` with the same normal field.

        Curvature is recomputed from the offset position, which reproduces
        ``(ell, beta + lam * ell)`` exactly.
        """
        from .numerics import OffsetFunc

        x_l = OffsetFunc(self.x, self.a, lam)
        z_l = OffsetFunc(self.z, self.b, lam)
        da, db = self.a.deriv(), self.b.deriv()
        dx_l, dz_l = x_l.deriv(), z_l.deriv()
        beta_l = _dot_sym(dz_l, self.a, dx_l, self.b)
        ell = SymFunc(self.a.expr * db.expr - self.b.expr * da.expr)
        return LegendreCurve(
            x_l, z_l, self.a, self.b, ell, beta_l, self.domain,
            phi_expr=self.phi_expr, validate=False,
        )

    def evolute(self, t: float) -> np.ndarray:
        """Evolute point ``gamma(t) - (beta/ell)(t) nu(t)``.

        Defined through singular points of a front; requires ``ell(t) != 0``.
        """
        l = self.ell(t)
        if abs(l) <= 1e-12:
            raise EllVanishesError(f"ell vanishes at t={t:.6g}; evolute undefined")
        r = self.beta(t) / l
        return np.array([self.x(t) - r * self.a(t), self.z(t) - r * self.b(t)])

    def vertices(self, cfg: RootConfig = RootConfig()) -> VertexReport:
        """Zeros of ``beta' ell - beta ell'`` (vertices of a regular curve).

        A vertex is ordinary when ``beta'' ell - beta ell''`` does not vanish
        there.  A curve of constant curvature reports
        ``degenerate_everywhere`` instead of a vertex list.
        """
        ts = np.linspace(self.domain[0], self.domain[1], 256)
        bmin = float(np.min(np.abs(self.beta.sample(ts))))
        if bmin <= _ZERO:
            raise ValidationError("vertices requires a regular curve (beta != 0)")
        v = SymFunc(
            ex.diff(self.beta.expr) * self.ell.expr
            - self.beta.expr * ex.diff(self.ell.expr)
        )
        vals = np.abs(v.sample(ts))
        scale = 1.0 + float(np.max(np.abs(self.beta.sample(ts))))
        if float(np.max(vals)) <= 1e-10 * scale:
            return VertexReport(vertices=(), degenerate_everywhere=True)
        vdot = SymFunc(
            ex.diff(ex.diff(self.beta.expr)) * self.ell.expr
            - self.beta.expr * ex.diff(ex.diff(self.ell.expr))
        )
        out = []
        for r in find_roots(v, self.domain, cfg):
            out.append(Vertex(t=r, ordinary=abs(vdot(r)) > 1e-8 * scale))
        return VertexReport(vertices=tuple(out))

    def swapped(self) -> "LegendreCurve":
        """The curve with x and z exchanged (normal components swapped too).

        Maps a profile around one axis to the equivalent profile around the
        other; curvature transforms as ``(ell, beta) -> (-ell, -beta)``.
        """
        da, db = self.a.deriv(), self.b.deriv()
        ell = SymFunc(self.b.expr * da.expr - self.a.expr * db.expr)
        dx, dz = self.x.deriv(), self.z.deriv()
        beta = _dot_sym(dx, self.b, dz, self.a)
        return LegendreCurve(
            self.z, self.x, self.b, self.a, ell, beta, self.domain, validate=False
        )


def _dot_sym(f: ScalarFunc, g: SymFunc, h: ScalarFunc, k: SymFunc) -> SymFunc:
    """f*g - h*k as a symbolic function (f, h must carry expressions)."""
    if f.expr is None or h.expr is None:
        raise ValidationError("symbolic derivative data required")
    return SymFunc(f.expr * g.expr - h.expr * k.expr)


def _as_expr(v) -> ex.Expr:
    if isinstance(v, ex.Expr):
        return v
    if isinstance(v, str):
        return ex.parse(v)
    if isinstance(v, (int, float)):
        return ex.Num(float(v))
    raise TypeError(f"cannot interpret {type(v).__name__} as an expression")
