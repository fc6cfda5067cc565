"""Parallel and focal surfaces of helicoidal surfaces, their plane profile
curves, and numerical tracking of profile-curve singularities.

The parallel surface of a helicoidal surface is again helicoidal, generated
by the space curve

    x1 = x (1 + lam cos(phi) / xi),  x2 = -c lam sin(phi) / xi,
    x3 = z + lam x sin(phi) / xi,

and the same holds for focal surfaces with lam = lam(t) solving the focal
quadratic.  Reducing the space curve to a plane profile gives the
one-parameter deformation families gamma_{lam,c} (of the parallel curve)
and delta_c (of the evolute); their singular parameters are zeros of the
scalar Phi(c, t) resp. of d(lam_c)/dt, which the trackers continue in c.

Axis handling: everything below works in the worker frame of the surface
(z-axis picture); x-axis surfaces are handled by the same code through the
profile swap in :class:`~helifront.helicoid.HelicoidalSurface`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Literal, Optional, Sequence

import numpy as np
from scipy import optimize

from . import expr as ex
from .errors import (
    DiscriminantNegativeError,
    KFVanishesError,
    ValidationError,
    X1VanishesError,
    XBarVanishesError,
)
from .framed import solve_focal_quadratic
from .helicoid import HelicoidalSurface, invariant_exprs
from .legendre import LegendreCurve
from .numerics import (
    CallableFunc,
    ContinuationBranch,
    ExplicitFunc,
    RootConfig,
    ScalarFunc,
    SymFunc,
    continue_root,
    find_roots,
)

__all__ = [
    "SpaceProfile",
    "PlaneProfile",
    "HypothesisReport",
    "TrackedBranch",
    "parallel_space_profile",
    "space_to_plane",
    "gamma_lambda_c",
    "phi",
    "phi_function",
    "track_parallel_singularity",
    "focal_space_profile",
    "focal_lambda_function",
    "delta_c",
    "track_focal_singularity",
    "detect_cusps",
    "membership_distance",
]

_ZERO = 1e-10

Branch = Literal["plus", "minus", "auto"]


# ---------------------------------------------------------------------------
# space profiles
# ---------------------------------------------------------------------------

@dataclass
class SpaceProfile:
    """Space curve (x1, x2, x3) generating a helicoidal surface with slant c."""

    x1: ScalarFunc
    x2: ScalarFunc
    x3: ScalarFunc
    c: float
    domain: tuple[float, float]
    provenance: str
    lam: Optional[ScalarFunc] = None  # focal offsets; None for constant-lam

    def point(self, t: float) -> np.ndarray:
        return np.array([self.x1(t), self.x2(t), self.x3(t)])


def _profile_values(worker: LegendreCurve, c: float, t: float) -> tuple:
    x = worker.x(t)
    a = worker.a(t)
    b = worker.b(t)
    xi = math.sqrt(c * c * b * b + x * x)
    return x, worker.z(t), a, b, worker.ell(t), worker.beta(t), xi


def _space_components(
    worker: LegendreCurve, c: float, lam: "float | ScalarFunc"
) -> tuple[ScalarFunc, ScalarFunc, ScalarFunc]:
    lam_fn = lam if isinstance(lam, ScalarFunc) else None
    lam_const = None if lam_fn is not None else float(lam)

    sym = invariant_exprs(worker, c)
    lam_expr = None
    if lam_fn is not None and lam_fn.expr is not None:
        lam_expr = lam_fn.expr
    elif lam_const is not None:
        lam_expr = ex.Num(lam_const)
    if sym is not None and lam_expr is not None:
        x, z, a, b, xi = sym["x"], sym["z"], sym["a"], sym["b"], sym["xi"]
        le = lam_expr
        return (
            SymFunc(x * (ex.Num(1.0) + le * a / xi)),
            SymFunc(ex.Num(-c) * le * b / xi),
            SymFunc(z + le * x * b / xi),
        )

    # callable route with exact product/quotient-rule derivatives; every
    # ingredient (including a focal lam via implicit differentiation) has an
    # exact derivative of its own
    if lam_fn is None:
        lam_fn = ExplicitFunc(lambda t: lam_const, lambda t: 0.0)
    lam_d = lam_fn.deriv()
    dx, dz = worker.x.deriv(), worker.z.deriv()
    da, db = worker.a.deriv(), worker.b.deriv()

    def parts(t: float) -> tuple:
        x, z, a, b = worker.x(t), worker.z(t), worker.a(t), worker.b(t)
        xi = math.sqrt(c * c * b * b + x * x)
        dxi = (c * c * b * db(t) + x * dx(t)) / xi
        return x, z, a, b, xi, dxi, lam_fn(t), lam_d(t)

    def f1(t: float) -> float:
        x, _z, a, _b, xi, _dxi, lv, _ld = parts(t)
        return x * (1.0 + lv * a / xi)

    def df1(t: float) -> float:
        x, _z, a, b, xi, dxi, lv, ld = parts(t)
        inner = (ld * a + lv * da(t)) / xi - lv * a * dxi / (xi * xi)
        return dx(t) * (1.0 + lv * a / xi) + x * inner

    def f2(t: float) -> float:
        _x, _z, _a, b, xi, _dxi, lv, _ld = parts(t)
        return -c * lv * b / xi

    def df2(t: float) -> float:
        _x, _z, _a, b, xi, dxi, lv, ld = parts(t)
        return -c * ((ld * b + lv * db(t)) / xi - lv * b * dxi / (xi * xi))

    def f3(t: float) -> float:
        x, z, _a, b, xi, _dxi, lv, _ld = parts(t)
        return z + lv * x * b / xi

    def df3(t: float) -> float:
        x, _z, _a, b, xi, dxi, lv, ld = parts(t)
        num_d = ld * x * b + lv * dx(t) * b + lv * x * db(t)
        return dz(t) + num_d / xi - lv * x * b * dxi / (xi * xi)

    return ExplicitFunc(f1, df1), ExplicitFunc(f2, df2), ExplicitFunc(f3, df3)


def parallel_space_profile(H: HelicoidalSurface, lam: float) -> SpaceProfile:
    """Space profile of the parallel surface x + lam n of ``H``.

    The helicoidal surface generated by the result (same slant) coincides
    pointwise with the offset surface.
    """
    x1, x2, x3 = _space_components(H.worker, H.c, float(lam))
    return SpaceProfile(
        x1, x2, x3, H.c, H.worker.domain, provenance=f"parallel(lam={lam:g})"
    )


# ---------------------------------------------------------------------------
# plane profiles
# ---------------------------------------------------------------------------

_CASES = ("x1x2>0", "x1x2<0", "x1=0", "x2=0", "x1=x2=0")


@dataclass
class PlaneProfile:
    """Plane profile curve reducing a space profile.

    Two evaluation forms are available:

    * ``remark`` (piecewise case table): X keeps the sign of x2 where both
      components are nonzero; Z picks up exact shifts of c*pi (x1 x2 < 0)
      and c*pi/2 (x1 = 0).  Branch cases are recorded per subinterval.
    * ``principal`` (valid when x1 never vanishes): X = sgn(x1) * r,
      Z = x3 - c*atan(x2/x1), a single smooth formula.

    ``continuous_arc`` gives the seam-free representative
    (r, x3 - c * unwrapped angle), which is what the cusp detector uses.
    """

    space: SpaceProfile
    form: str = "remark"
    branch_taken: tuple = ()
    axis_crossings: tuple = ()   # isolated t with x1 = x2 = 0, if any
    _eps_face: float = field(default=1e-12, repr=False)

    # -- scale-aware zero test ------------------------------------------------

    def _tiny(self) -> float:
        if not hasattr(self, "_tiny_cache"):
            ts = np.linspace(*self.space.domain, 256)
            m = max(
                float(np.max(np.abs(self.space.x1.sample(ts)))),
                float(np.max(np.abs(self.space.x2.sample(ts)))),
            )
            self._tiny_cache = 1e-12 * (1.0 + m)
        return self._tiny_cache

    def case_at(self, t: float) -> str:
        v1, v2 = self.space.x1(t), self.space.x2(t)
        tiny = self._tiny()
        z1, z2 = abs(v1) <= tiny, abs(v2) <= tiny
        if z1 and z2:
            return "x1=x2=0"
        if z1:
            return "x1=0"
        if z2:
            return "x2=0"
        return "x1x2>0" if v1 * v2 > 0 else "x1x2<0"

    def eval_remark(self, t: float) -> tuple[float, float]:
        v1, v2, v3 = self.space.x1(t), self.space.x2(t), self.space.x3(t)
        c = self.space.c
        case = self.case_at(t)
        if case == "x1=x2=0":
            return 0.0, v3
        if case == "x1=0":
            return v2, v3 - c * math.pi / 2.0
        if case == "x2=0":
            return v1, v3
        X = math.copysign(math.hypot(v1, v2), v2)
        Z = v3 - c * math.atan(v2 / v1)
        if case == "x1x2<0":
            Z += c * math.pi
        return X, Z

    def eval_principal(self, t: float) -> tuple[float, float]:
        v1, v2, v3 = self.space.x1(t), self.space.x2(t), self.space.x3(t)
        if abs(v1) <= self._tiny():
            raise XBarVanishesError(
                "principal form undefined where the first space component "
                f"vanishes (t={t:.6g})",
                where=[float(t)],
            )
        X = math.copysign(math.hypot(v1, v2), v1)
        Z = v3 - self.space.c * math.atan(v2 / v1)
        return X, Z

    def __call__(self, t: float) -> tuple[float, float]:
        return self.eval_remark(t) if self.form == "remark" else self.eval_principal(t)

    # -- seam-free representative ----------------------------------------------

    def continuous_arc(self, ts: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        """(r, Z) along ``ts`` with the rotation angle unwrapped."""
        ts = np.asarray(ts, dtype=float)
        v1 = self.space.x1.sample(ts)
        v2 = self.space.x2.sample(ts)
        v3 = self.space.x3.sample(ts)
        r = np.hypot(v1, v2)
        theta = np.unwrap(np.arctan2(v2, v1))
        return r, v3 - self.space.c * theta

    def velocity(self, t: float) -> tuple[float, float]:
        """d/dt of the seam-free representative (r', Z')."""
        v1, v2 = self.space.x1(t), self.space.x2(t)
        d1, d2 = self.space.x1.deriv()(t), self.space.x2.deriv()(t)
        d3 = self.space.x3.deriv()(t)
        r2 = v1 * v1 + v2 * v2
        r = math.sqrt(r2)
        if r <= self._tiny():
            raise XBarVanishesError(
                f"profile meets the rotation axis at t={t:.6g}", where=[float(t)]
            )
        rdot = (v1 * d1 + v2 * d2) / r
        thetadot = (d2 * v1 - d1 * v2) / r2
        return rdot, d3 - self.space.c * thetadot

    def speed(self, t: float) -> float:
        rd, zd = self.velocity(t)
        return math.hypot(rd, zd)


def _record_cases(profile: PlaneProfile, n: int = 1024) -> PlaneProfile:
    lo, hi = profile.space.domain
    ts = np.linspace(lo, hi, n)
    runs: list[tuple[float, float, str]] = []
    crossings: list[float] = []
    cur = profile.case_at(float(ts[0]))
    start = float(ts[0])
    for t in ts[1:]:
        case = profile.case_at(float(t))
        if case != cur:
            runs.append((start, float(t), cur))
            start = float(t)
            cur = case
        if case == "x1=x2=0":
            crossings.append(float(t))
    runs.append((start, float(ts[-1]), cur))
    profile.branch_taken = tuple(runs)
    profile.axis_crossings = tuple(round(t, 9) for t in crossings)
    return profile


def space_to_plane(p: SpaceProfile) -> PlaneProfile:
    """Plane profile of a space-curve helicoid via the piecewise case table."""
    return _record_cases(PlaneProfile(space=p, form="remark"))


def gamma_lambda_c(H: HelicoidalSurface, lam: float, c: float) -> PlaneProfile:
    """Deformation family member gamma_{lam, c} of the parallel curve.

    Uses the single-formula reduction X = sgn(x1) sqrt(x1^2 + x2^2),
    Z = x3 - c atan(x2/x1), which requires x1 != 0 on the domain (the
    umbilic obstruction).  At c = 0 this is exactly gamma + sgn(x) lam nu.
    """
    worker = H.worker
    x1, x2, x3 = _space_components(worker, float(c), float(lam))
    sp = SpaceProfile(
        x1, x2, x3, float(c), worker.domain,
        provenance=f"parallel(lam={lam:g}, c={c:g})",
    )
    zeros = find_roots(x1, worker.domain, RootConfig(bracket_samples=512))
    if zeros:
        raise X1VanishesError(
            "x1 vanishes on the domain (umbilic point obstruction)",
            where=[round(float(t), 9) for t in zeros],
        )
    return _record_cases(PlaneProfile(space=sp, form="principal"))


# ---------------------------------------------------------------------------
# the singularity function Phi
# ---------------------------------------------------------------------------

def phi(H: HelicoidalSurface, lam: float, c: float, t: float) -> float:
    """Phi(c, t): for x(t) != 0, gamma_{lam, c} is singular at t iff it
    vanishes.

        Phi = beta [c^2 (c^2 - lam^2) sin^4(phi)
                    + (2 xi^2 - x^2)(x^2 + lam xi cos(phi))]
              + lam x ell [(c^2 + x^2) xi + lam x^2 cos(phi)]
    """
    x, _z, a, b, ell, beta, xi = _profile_values(H.worker, c, t)
    lam = float(lam)
    c2 = c * c
    return (
        beta
        * (c2 * (c2 - lam * lam) * b ** 4 + (2 * xi * xi - x * x) * (x * x + lam * xi * a))
        + lam * x * ell * ((c2 + x * x) * xi + lam * x * x * a)
    )


def phi_function(H: HelicoidalSurface, lam: float) -> Callable[[float, float], float]:
    """Phi as a function of (c, t), for continuation."""
    return lambda c, t: phi(H, lam, c, t)


@dataclass(frozen=True)
class HypothesisCheck:
    name: str
    ok: bool
    detail: str = ""


@dataclass(frozen=True)
class HypothesisReport:
    checks: tuple[HypothesisCheck, ...]

    @property
    def all_ok(self) -> bool:
        return all(c.ok for c in self.checks)

    def violations(self) -> tuple[HypothesisCheck, ...]:
        return tuple(c for c in self.checks if not c.ok)


@dataclass
class TrackedBranch:
    branch: ContinuationBranch
    hypothesis: HypothesisReport
    residuals: tuple = ()


def _parallel_hypotheses(H: HelicoidalSurface, lam: float, t0: float) -> HypothesisReport:
    w = H.worker
    beta0 = w.beta(t0)
    ell0 = w.ell(t0)
    x0 = w.x(t0)
    a0 = w.a(t0)
    scale = 1.0 + abs(beta0) + abs(ell0)
    checks = [
        HypothesisCheck(
            "profile regular at t0", abs(beta0) > _ZERO * scale, f"beta(t0)={beta0:.3g}"
        ),
        HypothesisCheck("x(t0) != 0", abs(x0) > _ZERO, f"x(t0)={x0:.3g}"),
    ]
    v = w.beta.deriv()(t0) * ell0 - beta0 * w.ell.deriv()(t0)
    checks.append(
        HypothesisCheck("no vertex at t0", abs(v) > 1e-8 * scale, f"beta' ell - beta ell' = {v:.3g}")
    )
    # umbilic obstruction at c = 0: x1 = x + sgn(x) lam cos(phi)
    x1_0 = x0 + math.copysign(1.0, x0) * lam * a0
    checks.append(
        HypothesisCheck(
            "not an umbilic at c=0 (x1(t0) != 0)", abs(x1_0) > _ZERO, f"x1(t0)={x1_0:.3g}"
        )
    )
    return HypothesisReport(tuple(checks))


def track_parallel_singularity(
    H: HelicoidalSurface,
    lam: float,
    t0: float,
    c_grid: Sequence[float],
    cfg: RootConfig = RootConfig(),
) -> TrackedBranch:
    """Continue the singular parameter of gamma_{lam, c} from (c_grid[0], t0).

    The theorem hypotheses (regular, no vertex, off the axis, not umbilic)
    are checked and reported; tracking is attempted regardless.
    """
    report = _parallel_hypotheses(H, lam, t0)
    F = phi_function(H, lam)
    branch = continue_root(F, t0, c_grid, cfg)
    residuals = tuple(abs(F(c, t)) for c, t in branch.points)
    return TrackedBranch(branch=branch, hypothesis=report, residuals=residuals)


# ---------------------------------------------------------------------------
# focal profiles
# ---------------------------------------------------------------------------

def _cf_functions(worker: LegendreCurve, c: float):
    """(J, K, H) as fast scalar functions of t for slant c, plus their
    t-derivatives (symbolic when the profile is, finite differences
    otherwise)."""
    sym = invariant_exprs(worker, c)
    if sym is not None:
        J = SymFunc(sym["J"])
        K = SymFunc(sym["K"])
        Hm = SymFunc(sym["H"])
        return J, K, Hm, J.deriv(), K.deriv(), Hm.deriv()

    def vals(t: float) -> tuple:
        x, _z, a, b, ell, beta, xi = _profile_values(worker, c, t)
        J = -beta * xi
        K = (c * c * beta * b ** 4 - x ** 3 * ell * a) / xi ** 3
        Hm = (beta * (xi * xi + c * c * b * b) * a + x * ell * (c * c + x * x)) / (
            2 * xi * xi
        )
        return J, K, Hm

    J = CallableFunc(lambda t: vals(t)[0])
    K = CallableFunc(lambda t: vals(t)[1])
    Hm = CallableFunc(lambda t: vals(t)[2])
    return J, K, Hm, J.deriv(), K.deriv(), Hm.deriv()


class FocalLambda(ScalarFunc):
    """A focal-offset branch lam(t), with exact implicit derivative.

    ``policy`` is "plus"/"minus" (the quadratic roots
    (H_F +/- sqrt(disc)) / K_F, evaluated in cancellation-free form) or a
    continuity-following branch seeded near the evolute offset ("auto").
    The derivative comes from implicit differentiation of the focal
    quadratic, which is smooth across K_F = 0 as long as disc > 0.
    """

    def __init__(self, worker: LegendreCurve, c: float, policy: str, guide=None):
        self._worker = worker
        self._c = float(c)
        self._policy = policy
        self._guide = guide  # (ts, lams) arrays for the auto policy
        (self._J, self._K, self._H, self._dJ, self._dK, self._dH) = _cf_functions(
            worker, c
        )

    def _roots(self, t: float) -> tuple:
        sol = solve_focal_quadratic(self._K(t), self._H(t), self._J(t))
        return sol.lambdas

    def __call__(self, t: float) -> float:
        roots = self._roots(t)
        if not roots:
            raise DiscriminantNegativeError(
                f"no real focal offset at t={t:.6g} (negative discriminant)"
            )
        if self._policy == "minus":
            return roots[0]
        if self._policy == "plus":
            return roots[-1]
        # auto: nearest root to the guide interpolation
        target = float(np.interp(t, self._guide[0], self._guide[1]))
        return min(roots, key=lambda r: abs(r - target))

    def deriv(self) -> ScalarFunc:
        def d(t: float) -> float:
            lam = self(t)
            K, Hm = self._K(t), self._H(t)
            denom = 2.0 * (K * lam - Hm)
            if denom == 0.0:
                raise DiscriminantNegativeError(
                    f"focal branches collide at t={t:.6g} (double root)"
                )
            num = 2.0 * self._dH(t) * lam - self._dK(t) * lam * lam - self._dJ(t)
            return num / denom

        return CallableFunc(d)


def _evolute_offset(worker: LegendreCurve, t: float) -> float:
    """-sgn(x) beta / ell: the focal offset reproducing the evolute at c=0."""
    ell = worker.ell(t)
    if abs(ell) <= _ZERO:
        raise ValidationError(f"ell vanishes at t={t:.6g}; no evolute branch")
    return -math.copysign(1.0, worker.x(t)) * worker.beta(t) / ell


def focal_lambda_function(
    H: HelicoidalSurface, branch: Branch = "auto", n_guide: int = 2048
) -> FocalLambda:
    """The focal offset lam(t) for the requested branch.

    ``plus``/``minus`` follow the literal quadratic roots and require
    K_F != 0 on the domain (checked).  ``auto`` seeds at the point of
    largest |x| with the root closest to the evolute offset -sgn(x) beta/ell
    and follows it by continuity; it crosses K_F = 0 smoothly.
    """
    worker, c = H.worker, H.c
    lo, hi = worker.domain
    ts = np.linspace(lo, hi, n_guide)
    J, K, Hm, *_ = _cf_functions(worker, c)
    disc = np.array([Hm(t) ** 2 - J(t) * K(t) for t in ts])
    if np.min(disc) < 0:
        raise DiscriminantNegativeError(
            f"focal discriminant negative near t={ts[int(np.argmin(disc))]:.6g}"
        )
    if branch in ("plus", "minus"):
        kvals = np.array([K(t) for t in ts])
        kscale = 1.0 + float(np.max(np.abs(kvals)))
        sign_change = np.where(np.sign(kvals[:-1]) * np.sign(kvals[1:]) < 0)[0]
        small = np.where(np.abs(kvals) <= 1e-10 * kscale)[0]
        if len(sign_change) or len(small):
            where = sorted(
                set(
                    [round(float(ts[i]), 6) for i in sign_change]
                    + [round(float(ts[i]), 6) for i in small]
                )
            )
            raise KFVanishesError(
                "K_F vanishes on the domain; the plus/minus branches are "
                "undefined there (use branch='auto')",
                where=where[:16],
            )
        return FocalLambda(worker, c, branch)

    # auto: seed where |x| is largest, then march both ways
    xs = np.abs(worker.x.sample(ts))
    i0 = int(np.argmax(xs))
    lam = FocalLambda(worker, c, "minus")  # evaluator for the root pair
    try:
        target = _evolute_offset(worker, float(ts[i0]))
    except ValidationError:
        target = None
    r0 = lam._roots(float(ts[i0]))
    if not r0:
        raise DiscriminantNegativeError("no real focal offsets at the seed")
    if target is None:
        seed = min(r0, key=abs)
    else:
        seed = min(r0, key=lambda r: abs(r - target))
    lams = np.empty(len(ts))
    lams[i0] = seed
    for i in range(i0 + 1, len(ts)):
        roots = lam._roots(float(ts[i]))
        lams[i] = min(roots, key=lambda r: abs(r - lams[i - 1])) if roots else lams[i - 1]
    for i in range(i0 - 1, -1, -1):
        roots = lam._roots(float(ts[i]))
        lams[i] = min(roots, key=lambda r: abs(r - lams[i + 1])) if roots else lams[i + 1]
    return FocalLambda(worker, c, "auto", guide=(ts, lams))


def focal_space_profile(H: HelicoidalSurface, branch: Branch = "auto") -> SpaceProfile:
    """Space profile (xbar, ybar, zbar) of the focal surface of ``H``.

    Same component formulas as the parallel case, with the focal offset
    lam(t) in place of a constant.
    """
    lam = focal_lambda_function(H, branch)
    x1, x2, x3 = _space_components(H.worker, H.c, lam)
    return SpaceProfile(
        x1, x2, x3, H.c, H.worker.domain,
        provenance=f"focal({branch})", lam=lam,
    )


def delta_c(
    H: HelicoidalSurface,
    branch: Branch = "auto",
    variant: str = "primary",
    allow_axis_distance_zero: bool = False,
) -> PlaneProfile:
    """Plane profile delta_c of a focal surface of ``H``.

    ``variant="primary"`` is the published reduction
    (sgn(xbar) sqrt(xbar^2 + ybar^2), zbar - c atan(ybar/xbar)); the
    ``"secondary"`` variant (sgn(ybar)-based, a deformation of a curve on
    the rotation axis when fed the axis branch) is exposed for completeness
    but only smoke-tested.
    """
    sp = focal_space_profile(H, branch)
    if variant == "secondary":
        sp = SpaceProfile(
            x1=sp.x2, x2=_negate(sp.x1), x3=sp.x3, c=sp.c,
            domain=sp.domain, provenance=sp.provenance + "/secondary", lam=sp.lam,
        )
        return _record_cases(PlaneProfile(space=sp, form="remark"))
    prof = _record_cases(PlaneProfile(space=sp, form="principal"))
    zeros = find_roots(sp.x1, sp.domain, RootConfig(bracket_samples=512))
    if zeros and not allow_axis_distance_zero:
        raise XBarVanishesError(
            "xbar vanishes on the domain; the principal reduction jumps there "
            "(pass allow_axis_distance_zero=True to keep the piecewise form)",
            where=[round(float(t), 9) for t in zeros],
        )
    if zeros:
        prof.form = "remark"
    return prof


def _negate(f: ScalarFunc) -> ScalarFunc:
    if f.expr is not None:
        return SymFunc(-f.expr)
    g = f
    gd = f.deriv()
    return ExplicitFunc(lambda t: -g(t), lambda t: -gd(t))


def _focal_hypotheses(
    H: HelicoidalSurface, t0: float, lam0: float, c0: float
) -> HypothesisReport:
    w = H.worker
    checks = []
    beta0, ell0 = w.beta(t0), w.ell(t0)
    scale = 1.0 + abs(beta0) + abs(ell0)
    checks.append(
        HypothesisCheck("profile regular at t0", abs(beta0) > _ZERO * scale, f"beta={beta0:.3g}")
    )
    v = w.beta.deriv()(t0) * ell0 - beta0 * w.ell.deriv()(t0)
    vdot = (
        w.beta.deriv().deriv()(t0) * ell0 - beta0 * w.ell.deriv().deriv()(t0)
    )
    checks.append(HypothesisCheck("vertex at t0", abs(v) <= 1e-8 * scale, f"v={v:.3g}"))
    checks.append(
        HypothesisCheck("ordinary vertex", abs(vdot) > 1e-8 * scale, f"v'={vdot:.3g}")
    )
    x0 = w.x(t0)
    checks.append(HypothesisCheck("x(t0) != 0", abs(x0) > _ZERO, f"x={x0:.3g}"))
    x, _z, a, b, _l, _bt, xi = _profile_values(w, c0, t0)
    xbar = x * (1.0 + lam0 * a / xi)
    checks.append(HypothesisCheck("xbar(t0) != 0", abs(xbar) > _ZERO, f"xbar={xbar:.3g}"))
    # K_F != 0 at the vertex for c = 0 (the theorem's curvature hypothesis)
    _, K0, _, _, _, _ = _cf_functions(w, 0.0)
    try:
        kval = K0(t0)
        checks.append(
            HypothesisCheck("K_F(c=0) != 0 at t0", abs(kval) > _ZERO, f"K_F={kval:.3g}")
        )
    except Exception as err:  # x may sit on the axis at c=0
        checks.append(HypothesisCheck("K_F(c=0) != 0 at t0", False, str(err)))
    d1 = lam0 * xi * xi + x * x * (-lam0 * b * b + xi * a)
    d2 = b * (c0 * c0 * xi + x * x * (lam0 * a + xi))
    checks.append(
        HypothesisCheck(
            "(Delta1, Delta2) != (0, 0) at seed",
            abs(d1) > _ZERO or abs(d2) > _ZERO,
            f"Delta1={d1:.3g}, Delta2={d2:.3g}",
        )
    )
    return HypothesisReport(tuple(checks))


def track_focal_singularity(
    H: HelicoidalSurface,
    t0: float,
    c_grid: Sequence[float],
    cfg: RootConfig = RootConfig(),
) -> TrackedBranch:
    """Continue the singular parameter of delta_c from an ordinary vertex.

    The tracked function is G(c, t) = d(lam_c)/dt for the evolute-deforming
    focal branch, whose zeros are the singular parameters of delta_c away
    from the (empty, by hypothesis) Delta1 = Delta2 = 0 set.  When the
    vertex/axis hypotheses fail outright, the report comes back with an
    empty branch and status "hypothesis-violation" instead of tracking.
    """
    c_grid = list(c_grid)

    lam_cache: dict[float, FocalLambda] = {}

    def lam_for(c: float) -> FocalLambda:
        fl = lam_cache.get(c)
        if fl is None:
            Hc = _with_slant(H, c)
            fl = focal_lambda_function(Hc, "auto")
            lam_cache[c] = fl
        return fl

    def G(c: float, t: float) -> float:
        return lam_for(c).deriv()(t)

    try:
        lam0 = lam_for(c_grid[0])(t0)
    except (ValidationError, DiscriminantNegativeError) as err:
        report = _focal_hypotheses(H, t0, float("nan"), c_grid[0])
        return TrackedBranch(
            branch=ContinuationBranch([], "hypothesis-violation", str(err)),
            hypothesis=report,
        )
    report = _focal_hypotheses(H, t0, lam0, c_grid[0])
    hard = {"vertex at t0", "ordinary vertex", "x(t0) != 0", "xbar(t0) != 0"}
    if any(not c.ok and c.name in hard for c in report.checks):
        return TrackedBranch(
            branch=ContinuationBranch(
                [], "hypothesis-violation",
                "; ".join(f"{c.name}: {c.detail}" for c in report.violations()),
            ),
            hypothesis=report,
        )
    branch = continue_root(G, t0, c_grid, cfg)
    residuals = tuple(abs(G(c, t)) for c, t in branch.points)
    return TrackedBranch(branch=branch, hypothesis=report, residuals=residuals)


def _with_slant(H: HelicoidalSurface, c: float) -> HelicoidalSurface:
    if c == H.c:
        return H
    return HelicoidalSurface(H.profile, H.axis, c, H.theta_domain)


# ---------------------------------------------------------------------------
# cusp detection
# ---------------------------------------------------------------------------

def detect_cusps(
    profile: PlaneProfile,
    interval: Optional[tuple[float, float]] = None,
    n: int = 4096,
    reversal_threshold: float = -0.9,
) -> list[float]:
    """Cusps of the plane profile: zeros of the speed where the unit tangent
    reverses.

    Works on the seam-free representative, so axis-angle seams do not create
    spurious hits.  A parameter t is reported when the locally minimized
    speed drops below 1e-6 times the curve's speed scale and the normalized
    tangents just before/after have a dot product below
    ``reversal_threshold``.
    """
    lo, hi = interval if interval is not None else profile.space.domain
    ts = np.linspace(lo, hi, n)
    sp = np.array([profile.speed(float(t)) for t in ts])
    scale = float(np.max(sp)) + 1e-300
    cusps: list[float] = []
    dt = (hi - lo) / (n - 1)
    for i in range(1, n - 1):
        if not (sp[i] <= sp[i - 1] and sp[i] <= sp[i + 1]):
            continue
        if sp[i] > 0.05 * scale:
            continue
        res = optimize.minimize_scalar(
            lambda t: profile.speed(float(t)),
            bounds=(float(ts[i - 1]), float(ts[i + 1])),
            method="bounded",
            options={"xatol": 1e-12},
        )
        t_star, v_star = float(res.x), float(res.fun)
        if v_star > 1e-6 * scale:
            continue
        eps = max(4.0 * dt, 1e-5 * (hi - lo))
        try:
            vin = np.array(profile.velocity(t_star - eps))
            vout = np.array(profile.velocity(t_star + eps))
        except XBarVanishesError:
            continue
        ni, no = np.linalg.norm(vin), np.linalg.norm(vout)
        if ni == 0.0 or no == 0.0:
            continue
        dot = float(vin @ vout) / (ni * no)
        if dot < reversal_threshold:
            if not any(abs(t_star - c) < 10 * dt for c in cusps):
                cusps.append(t_star)
    return sorted(cusps)


# ---------------------------------------------------------------------------
# point membership (test/CLI utility)
# ---------------------------------------------------------------------------

def membership_distance(
    point: np.ndarray,
    profile: PlaneProfile,
    cfg: RootConfig = RootConfig(bracket_samples=1024),
) -> float:
    """Distance indicator from a 3d point to the helicoid generated by the
    plane profile (z-axis, slant = profile.space.c).

    Solves |X(tau)| = r(point) for tau, aligns the rotation angle and
    returns the smallest residual 3-space distance over all candidates.
    """
    p = np.asarray(point, dtype=float)
    c = profile.space.c
    rp = math.hypot(p[0], p[1])
    ang = math.atan2(p[1], p[0])
    lo, hi = profile.space.domain

    def radial_gap(t: float) -> float:
        X, _ = profile(t)
        return abs(X) - rp

    best = math.inf
    for tau in find_roots(radial_gap, (lo, hi), cfg):
        X, Z = profile(tau)
        # the generator with X < 0 reaches angle ang when rotated by ang + pi
        alpha0 = ang if X >= 0 else ang - math.pi
        if c != 0.0:
            k = round((p[2] - Z - c * alpha0) / (2.0 * math.pi * c))
            alphas = [alpha0 + 2.0 * math.pi * (k + d) for d in (-1, 0, 1)]
        else:
            alphas = [alpha0]
        for alpha in alphas:
            cand = np.array(
                [X * math.cos(alpha), X * math.sin(alpha), c * alpha + Z]
            )
            best = min(best, float(np.linalg.norm(cand - p)))
    return best
