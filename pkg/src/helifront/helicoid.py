"""Helicoidal surfaces swept by a Legendre profile curve.

A profile ``gamma(t) = (x(t), z(t))`` in the xz-plane rotated about the z- or
x-axis while translating along it with slant ``c`` gives

    z-axis:  (x cos th, x sin th, c th + z)
    x-axis:  (c th + x, z cos th, z sin th)

With ``xi = sqrt(c^2 sin^2(phi) + x^2)`` nonvanishing (z-axis; the x-axis
case swaps x <-> z and sin <-> cos) the surface carries a closed-form
orthonormal frame and closed-form basic invariants, curvature triple and
concomitant vector, all functions of t alone.

Both axes run through one core: the x-axis surface of ``gamma`` is the
rotation ``(p1, p2, p3) -> (p3, p1, p2)`` of the z-axis surface of the
swapped profile ``(z, x)`` with swapped normal components, which reproduces
the published per-axis formulas exactly.  The numeric oracle in
:mod:`helifront.framed` checks every closed form.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from . import expr as ex
from .errors import ValidationError, XiVanishesError
from .framed import BasicInvariants, FramedCurvature, FramedSurface
from .legendre import LegendreCurve
from .numerics import RootConfig, ScalarFunc, SymFunc, find_roots

__all__ = [
    "Axis",
    "HelicoidalSurface",
    "FrontalReport",
    "Mesh",
    "invariant_exprs",
]

_ZERO = 1e-10


class Axis(enum.Enum):
    X = "x"
    Z = "z"


@dataclass(frozen=True)
class FrontalReport:
    is_frontal: bool
    is_front: bool
    witnesses: tuple[float, ...]
    reasons: tuple[str, ...] = ()


@dataclass
class Mesh:
    vertices: np.ndarray          # (N, 3)
    normals: np.ndarray           # (N, 3)
    faces: np.ndarray             # (M, 3) int, 0-based
    rows: int                     # t-samples
    cols: int                     # theta-samples
    theta_closed: bool


class _XiFunc(ScalarFunc):
    """xi(t) = sqrt(c^2 b(t)^2 + x(t)^2) with exact derivative."""

    def __init__(self, x: ScalarFunc, b: SymFunc, c: float):
        self._x, self._b, self._c = x, b, c
        self.expr = (
            None
            if x.expr is None
            else ex.sqrt(ex.Num(c * c) * b.expr * b.expr + x.expr * x.expr)
        )

    def __call__(self, t: float) -> float:
        xb = self._b(t)
        xx = self._x(t)
        return math.sqrt(self._c * self._c * xb * xb + xx * xx)

    def sample(self, ts) -> np.ndarray:
        xb = self._b.sample(ts)
        xx = self._x.sample(ts)
        return np.sqrt(self._c * self._c * xb * xb + xx * xx)

    def deriv(self) -> ScalarFunc:
        from .numerics import CallableFunc

        if self.expr is not None:
            return SymFunc(ex.diff(self.expr))
        x, b, c = self._x, self._b, self._c
        dx, db = x.deriv(), b.deriv()

        def d(t: float) -> float:
            return (c * c * b(t) * db(t) + x(t) * dx(t)) / self(t)

        return CallableFunc(d)


def _rot_x(p: np.ndarray) -> np.ndarray:
    """Cyclic coordinate rotation mapping the z-axis picture to the x-axis."""
    return np.array([p[2], p[0], p[1]])


class HelicoidalSurface:
    """Helicoidal surface of a Legendre curve around the x- or z-axis.

    ``xi > 0`` over the profile domain is required (checked at build) so the
    closed-form frame exists.  With ``c = 0`` the surface is a surface of
    revolution (``kind == "revolution"``).
    """

    def __init__(
        self,
        profile: LegendreCurve,
        axis: Axis = Axis.Z,
        c: float = 0.0,
        theta_domain: tuple[float, float] = (0.0, 2.0 * math.pi),
    ):
        self.profile = profile
        self.axis = Axis(axis)
        self.c = float(c)
        self.theta_domain = (float(theta_domain[0]), float(theta_domain[1]))
        self.worker = profile if self.axis is Axis.Z else profile.swapped()
        self.xi = _XiFunc(self.worker.x, self.worker.b, self.c)
        self._check_xi()

    # -- construction checks --------------------------------------------------

    def _check_xi(self) -> None:
        lo, hi = self.worker.domain
        ts = np.linspace(lo, hi, 1024)
        vals = self.xi.sample(ts)
        scale = 1.0 + float(np.max(vals))
        bad = [float(t) for t, v in zip(ts, vals) if v <= 1e-8 * scale]
        # minima hiding between samples
        try:
            crit = find_roots(self.xi.deriv(), (lo, hi), RootConfig(bracket_samples=256))
        except Exception:
            crit = []
        for tc in crit:
            if self.xi(tc) <= 1e-8 * scale:
                bad.append(float(tc))
        if bad:
            rep = sorted(set(round(t, 9) for t in bad))
            raise XiVanishesError(
                f"xi vanishes on the profile domain (axis {self.axis.value}, c={self.c:g})",
                where=rep[:16],
            )

    @property
    def kind(self) -> str:
        return "revolution" if self.c == 0.0 else "helicoid"

    # -- geometry -------------------------------------------------------------

    def position(self, t: float, theta: float) -> np.ndarray:
        w = self.worker
        p = np.array(
            [
                w.x(t) * math.cos(theta),
                w.x(t) * math.sin(theta),
                self.c * theta + w.z(t),
            ]
        )
        return p if self.axis is Axis.Z else _rot_x(p)

    def partial_t(self, t: float, theta: float) -> np.ndarray:
        w = self.worker
        dx = w.x.deriv()(t)
        dz = w.z.deriv()(t)
        p = np.array([dx * math.cos(theta), dx * math.sin(theta), dz])
        return p if self.axis is Axis.Z else _rot_x(p)

    def partial_theta(self, t: float, theta: float) -> np.ndarray:
        w = self.worker
        p = np.array([-w.x(t) * math.sin(theta), w.x(t) * math.cos(theta), self.c])
        return p if self.axis is Axis.Z else _rot_x(p)

    def frame(self, t: float, theta: float) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        """Closed-form orthonormal frame (n, s, t_vec) at (t, theta)."""
        w = self.worker
        a, b, x = w.a(t), w.b(t), w.x(t)
        xi = self.xi(t)
        c = self.c
        ct, st = math.cos(theta), math.sin(theta)
        n = np.array(
            [
                (c * b * st + x * a * ct) / xi,
                (-c * b * ct + x * a * st) / xi,
                x * b / xi,
            ]
        )
        s = np.array(
            [
                (-c * b * a * ct + x * st) / xi,
                (-c * b * a * st - x * ct) / xi,
                -c * b * b / xi,
            ]
        )
        tv = np.array([b * ct, b * st, -a])
        if self.axis is Axis.X:
            n, s, tv = _rot_x(n), _rot_x(s), _rot_x(tv)
        return n, s, tv

    # -- closed-form invariants ------------------------------------------------

    def _data(self, t: float) -> dict:
        w = self.worker
        return {
            "x": w.x(t),
            "a": w.a(t),
            "b": w.b(t),
            "ell": w.ell(t),
            "beta": w.beta(t),
            "xi": self.xi(t),
            "c": self.c,
        }

    def invariants_closed_form(self, t: float) -> BasicInvariants:
        """The published invariant matrices, read off as the 10 scalars."""
        d = self._data(t)
        x, a, b, ell, beta, xi, c = (
            d["x"], d["a"], d["b"], d["ell"], d["beta"], d["xi"], d["c"],
        )
        return BasicInvariants(
            a1=0.0,
            b1=-beta,
            a2=-xi,
            b2=-c * a,
            e1=c * (beta * b * b + ell * x * a) / (xi * xi),
            f1=-ell * x / xi,
            g1=c * ell * b / xi,
            e2=-a,
            f2=c * b * b / xi,
            g2=x * b / xi,
        )

    def curvature_closed_form(self, t: float) -> FramedCurvature:
        """(J_F, K_F, H_F); independent of theta by construction."""
        d = self._data(t)
        x, a, b, ell, beta, xi, c = (
            d["x"], d["a"], d["b"], d["ell"], d["beta"], d["xi"], d["c"],
        )
        J = -beta * xi
        K = (c * c * beta * b ** 4 - x ** 3 * ell * a) / xi ** 3
        H = (beta * (xi * xi + c * c * b * b) * a + x * ell * (c * c + x * x)) / (
            2.0 * xi * xi
        )
        return FramedCurvature(J_F=J, K_F=K, H_F=H)

    def concomitant_closed_form(self, t: float) -> np.ndarray:
        """I_F = (C_F, |a g|, |b g|, |e g|, |f g|, |a e|), theta-independent."""
        d = self._data(t)
        x, a, b, ell, beta, xi, c = (
            d["x"], d["a"], d["b"], d["ell"], d["beta"], d["xi"], d["c"],
        )
        cf = self.curvature_closed_form(t)
        return np.array(
            [
                cf.J_F,
                cf.K_F,
                cf.H_F,
                c * ell * b,
                -(x * beta - c * c * ell * a) * b / xi,
                c * (x * beta * b * b + ell * (x * x + xi * xi) * a) * b / xi ** 3,
                -ell * b,
                c * (beta * b * b + x * ell * a) / xi,
            ]
        )

    def signed_area_density(self, t: float) -> tuple[float, float]:
        """Lambda = det(x_t, x_theta, n) = -xi * beta, and its t-derivative.

        A singular profile parameter t0 is a non-degenerate singular point of
        the surface exactly when Lambda(t0) = 0 and Lambda_t(t0) != 0.
        """
        w = self.worker
        beta = w.beta(t)
        dbeta = w.beta.deriv()(t)
        xi = self.xi(t)
        dxi = self.xi.deriv()(t)
        return (-xi * beta, -(dxi * beta + xi * dbeta))

    # -- classification ---------------------------------------------------------

    def classify_frontal_front(self, cfg: RootConfig = RootConfig()) -> FrontalReport:
        """Frontal/front status per the profile-curve criterion.

        The surface is a frontal whenever it builds (c = 0 always; c != 0
        needs xi != 0, enforced at build).  It is a front iff the profile is
        a front and the axis pair never vanishes simultaneously:
        (x, cos phi) for a surface of revolution, (x, beta) for c != 0
        (worker frame; the x-axis case reads (z, sin phi) / (z, beta)).
        """
        w = self.worker
        witnesses: list[float] = []
        reasons: list[str] = []
        for t in w.front_failures(cfg):
            witnesses.append(t)
            reasons.append("profile is not a front (ell = beta = 0)")
        partner = w.a if self.c == 0.0 else w.beta
        partner_name = "cos(phi)" if self.c == 0.0 else "beta"
        for t in _simultaneous_zeros(w.x, partner, w.domain, cfg):
            witnesses.append(t)
            reasons.append(f"profile meets the axis with {partner_name} = 0")
        order = np.argsort(witnesses) if witnesses else []
        wit, rs = [], []
        for i in order:
            if wit and abs(witnesses[i] - wit[-1]) < 1e-8:
                continue
            wit.append(witnesses[i])
            rs.append(reasons[i])
        return FrontalReport(
            is_frontal=True,
            is_front=not wit,
            witnesses=tuple(wit),
            reasons=tuple(rs),
        )

    # -- mesh / oracle ------------------------------------------------------------

    def mesh(self, t_samples: int, theta_samples: int) -> Mesh:
        """Row-major grid tessellation with per-vertex frame normals.

        Quads split along their shorter diagonal; vertex order is row-major
        in (t, theta).
        """
        if t_samples < 2 or theta_samples < 2:
            raise ValidationError("need at least 2 samples in each direction")
        lo, hi = self.worker.domain
        th0, th1 = self.theta_domain
        ts = np.linspace(lo, hi, t_samples)
        ths = np.linspace(th0, th1, theta_samples)
        nv = t_samples * theta_samples
        verts = np.empty((nv, 3))
        norms = np.empty((nv, 3))
        for i, t in enumerate(ts):
            for j, th in enumerate(ths):
                k = i * theta_samples + j
                verts[k] = self.position(float(t), float(th))
                norms[k] = self.frame(float(t), float(th))[0]
        faces = []
        for i in range(t_samples - 1):
            for j in range(theta_samples - 1):
                v00 = i * theta_samples + j
                v01 = v00 + 1
                v10 = v00 + theta_samples
                v11 = v10 + 1
                d1 = np.linalg.norm(verts[v00] - verts[v11])
                d2 = np.linalg.norm(verts[v01] - verts[v10])
                if d1 <= d2:
                    faces.append((v00, v10, v11))
                    faces.append((v00, v11, v01))
                else:
                    faces.append((v00, v10, v01))
                    faces.append((v10, v11, v01))
        closed = abs((th1 - th0) - 2.0 * math.pi) <= 1e-9
        return Mesh(
            vertices=verts,
            normals=norms,
            faces=np.array(faces, dtype=int),
            rows=t_samples,
            cols=theta_samples,
            theta_closed=closed,
        )

    def as_framed(self, validate: bool = False) -> FramedSurface:
        """The surface as a generic framed surface (numeric-oracle view)."""
        return FramedSurface(
            x=self.position,
            n=lambda t, th: self.frame(t, th)[0],
            s=lambda t, th: self.frame(t, th)[1],
            domain=(self.worker.domain, self.theta_domain),
            validate=validate,
        )

    def symbolic(self) -> Optional[dict]:
        """Closed-form ingredient expressions, or None for quadrature-backed
        profiles."""
        return invariant_exprs(self.worker, self.c)


def _simultaneous_zeros(
    f: ScalarFunc, g: ScalarFunc, domain: tuple[float, float], cfg: RootConfig
) -> list[float]:
    """Parameters where both f and g vanish (zeros of one checked on the
    other, from both directions)."""
    ts = np.linspace(domain[0], domain[1], 512)
    fs = np.max(np.abs(f.sample(ts))) + 1.0
    gs = np.max(np.abs(g.sample(ts))) + 1.0
    out = []
    for r in find_roots(f, domain, cfg):
        if abs(g(r)) <= 1e-8 * gs:
            out.append(float(r))
    for r in find_roots(g, domain, cfg):
        if abs(f(r)) <= 1e-8 * fs and not any(abs(r - o) < 1e-8 for o in out):
            out.append(float(r))
    return sorted(out)


def invariant_exprs(worker: LegendreCurve, c: float) -> Optional[dict]:
    """Expression forms of xi, J_F, K_F, H_F for a (worker, slant) pair.

    Returns None when the profile position is not symbolic.  ``c`` may
    differ from any built surface's slant: the deformation machinery sweeps
    it as a family parameter.
    """
    if worker.x.expr is None or worker.z.expr is None:
        return None
    x = worker.x.expr
    z = worker.z.expr
    a = worker.a.expr
    b = worker.b.expr
    ell = worker.ell.expr
    beta = worker.beta.expr
    c2 = ex.Num(float(c) * float(c))
    xi = ex.sqrt(c2 * b * b + x * x)
    J = -(beta * xi)
    K = (c2 * beta * b ** ex.Num(4.0) - x ** ex.Num(3.0) * ell * a) / xi ** ex.Num(3.0)
    H = (beta * (xi * xi + c2 * b * b) * a + x * ell * (c2 + x * x)) / (
        ex.Num(2.0) * xi * xi
    )
    return {
        "x": x, "z": z, "a": a, "b": b, "ell": ell, "beta": beta,
        "xi": xi, "J": J, "K": K, "H": H, "c": float(c),
    }
