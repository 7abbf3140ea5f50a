"""Linear stability of the two-species competition model with cross-diffusion.

The homogeneous coexistence state of the network system is stable against
uniform perturbations under weak competition; spatial (network) modes can
still destabilize it through cross-diffusion.  Each Laplacian eigenvalue
``lam`` contributes a 2x2 characteristic matrix ``M = J - lam * D`` built
from the reaction Jacobian ``J`` and the linearized diffusion matrix ``D``
at the coexistence state.  Since ``trace(M) < 0`` always holds here, a mode
grows iff ``det(M) < 0``; expanding the determinant in the linear diffusion
coefficient and in ``lam`` yields the onset threshold and the window of
unstable eigenvalues computed below.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, replace
from math import sqrt
from typing import Callable

import numpy as np

from .errors import NonCoexistenceError, StabilityError

__all__ = [
    "SktParams",
    "DEFAULT_SKT_PARAMS",
    "Equilibrium",
    "InstabilityReport",
    "GeneralModel",
    "coexistence_equilibrium",
    "jacobian_at_equilibrium",
    "diffusion_linearization_skt",
    "diffusion_linearization_general",
    "jacobian_general",
    "equilibrium",
    "characteristic_matrix",
    "dispersion_growth_rate",
    "det_polynomials",
    "instability_region",
    "classify_modes",
    "stability_report",
    "report_to_dict",
    "det_sign_scan",
    "skt_to_general",
]

_SCAN_STEP = 1e-3


@dataclass(frozen=True)
class SktParams:
    """Coefficients of the competition model with nonlinear diffusion.

    ``r1, r2`` growth rates, ``a1, a2`` intra-species competition,
    ``b1, b2`` inter-species competition, ``d`` linear diffusion (same for
    both species), ``d11, d22`` self-diffusion, ``d12, d21`` cross-diffusion
    (``d12`` drives species 1 away from species 2).  All must be
    non-negative.
    """

    r1: float
    r2: float
    a1: float
    a2: float
    b1: float
    b2: float
    d: float = 0.0
    d11: float = 0.0
    d22: float = 0.0
    d12: float = 0.0
    d21: float = 0.0

    def __post_init__(self):
        for name in ("r1", "r2", "a1", "a2", "b1", "b2", "d", "d11", "d22", "d12", "d21"):
            val = getattr(self, name)
            if not np.isfinite(val) or val < 0:
                raise ValueError(f"parameter {name} must be finite and >= 0, got {val}")

    @property
    def weak_competition(self) -> bool:
        """True iff intra-species competition dominates: a1*a2 - b1*b2 > 0."""
        return self.a1 * self.a2 - self.b1 * self.b2 > 0


# benchmark parameter set: weak competition, one-sided cross-diffusion
DEFAULT_SKT_PARAMS = SktParams(
    r1=5.0, r2=2.0, a1=3.0, a2=3.0, b1=1.0, b2=1.0, d=0.03, d12=3.0, d21=0.0
)


def coexistence_equilibrium(p: SktParams) -> tuple[float, float]:
    """Positive solution of r1 = a1*u + b1*v, r2 = b2*u + a2*v.

    Raises StabilityError when the competition matrix is degenerate and
    NonCoexistenceError when either component is non-positive.
    """
    det_c = p.a1 * p.a2 - p.b1 * p.b2
    if det_c == 0.0:
        raise StabilityError("degenerate competition matrix: a1*a2 == b1*b2")
    u = (p.r1 * p.a2 - p.b1 * p.r2) / det_c
    v = (p.a1 * p.r2 - p.r1 * p.b2) / det_c
    if not (u > 0.0 and v > 0.0):
        raise NonCoexistenceError(f"no positive coexistence state: u*={u:g}, v*={v:g}")
    return u, v


def jacobian_at_equilibrium(p: SktParams, eq: tuple[float, float]) -> np.ndarray:
    """Reaction Jacobian at the coexistence state.

    On the coexistence ray the growth terms cancel, leaving
    ``[[-a1*u, -b1*u], [-b2*v, -a2*v]]``.
    """
    u, v = eq
    return np.array([[-p.a1 * u, -p.b1 * u], [-p.b2 * v, -p.a2 * v]])


def diffusion_linearization_skt(p: SktParams, eq: tuple[float, float]) -> np.ndarray:
    """Linearized transport matrix of the cross-diffusion system at ``eq``.

    ``[[d + d12*v, d12*u], [d21*v, d + d21*u]]``; self-diffusion is taken to
    be zero here (that is the system the instability analysis targets; use
    the general-model variant when d11/d22 matter).
    """
    u, v = eq
    return np.array([[p.d + p.d12 * v, p.d12 * u], [p.d21 * v, p.d + p.d21 * u]])


@dataclass(frozen=True)
class Equilibrium:
    """Coexistence state together with both 2x2 linearizations."""

    u_star: float
    v_star: float
    j_star: np.ndarray
    d_star: np.ndarray
    trace_j: float
    det_j: float


def equilibrium(p: SktParams) -> Equilibrium:
    uv = coexistence_equilibrium(p)
    j = jacobian_at_equilibrium(p, uv)
    d = diffusion_linearization_skt(p, uv)
    return Equilibrium(
        u_star=uv[0],
        v_star=uv[1],
        j_star=j,
        d_star=d,
        trace_j=float(j[0, 0] + j[1, 1]),
        det_j=float(j[0, 0] * j[1, 1] - j[0, 1] * j[1, 0]),
    )


def characteristic_matrix(j_star: np.ndarray, d_star: np.ndarray, lam: float) -> np.ndarray:
    """Per-mode matrix ``J - lam * D`` for a Laplacian eigenvalue ``lam >= 0``."""
    if lam < 0:
        raise ValueError(f"Laplacian eigenvalues are non-negative, got {lam}")
    return j_star - lam * d_star


def dispersion_growth_rate(j_star: np.ndarray, d_star: np.ndarray, lam: float) -> float:
    """Largest real part among the eigenvalues of the characteristic matrix."""
    m = characteristic_matrix(j_star, d_star, lam)
    tr = m[0, 0] + m[1, 1]
    det = m[0, 0] * m[1, 1] - m[0, 1] * m[1, 0]
    disc = tr * tr - 4.0 * det
    if disc >= 0.0:
        return 0.5 * (tr + sqrt(disc))
    return 0.5 * tr


@dataclass(frozen=True)
class InstabilityReport:
    """Everything the mode analysis produces for one parameter set.

    ``alpha = v*(b2*u - a2*v)`` and ``beta = u*(b1*v - a1*u)`` are the
    equilibrium factors multiplying the two cross-diffusion coefficients in
    the zero-linear-diffusion determinant; ``cross_gain = d12*alpha +
    d21*beta`` decides whether cross-diffusion can destabilize at all.
    ``lambda_quad`` holds (qa, qb, qc) with
    ``det(M) = qa*lam^2 + qb*lam + qc``; ``region`` is the open interval of
    Laplacian eigenvalues with negative determinant, when it exists, and
    ``lambda_star`` the zero-linear-diffusion onset threshold det(J)/cross_gain.
    """

    params: SktParams
    u_star: float
    v_star: float
    trace_j: float
    det_j: float
    alpha: float
    beta: float
    cross_gain: float
    lambda_quad: tuple[float, float, float]
    lambda_star: float | None
    region: tuple[float, float] | None
    unstable_modes: tuple[int, ...] | None = None

    def det_coeffs_in_d(self, lam: float) -> tuple[float, float, float]:
        """(A, B, C) with det(M) = A*d^2 + B*d + C at fixed mode eigenvalue."""
        p = self.params
        a = lam * lam
        b = (p.d12 * self.v_star + p.d21 * self.u_star) * lam * lam - self.trace_j * lam
        c = -self.cross_gain * lam + self.det_j
        return a, b, c

    def det_in_lambda(self, lam: float) -> float:
        qa, qb, qc = self.lambda_quad
        return qa * lam * lam + qb * lam + qc


def det_polynomials(p: SktParams, eq: Equilibrium | None = None) -> InstabilityReport:
    """Both closed-form expansions of the characteristic determinant.

    Requires weak competition (otherwise the uniform mode itself is
    already unstable and the mode window is meaningless).
    """
    if not p.weak_competition:
        raise StabilityError("instability analysis requires weak competition: a1*a2 > b1*b2")
    if eq is None:
        eq = equilibrium(p)
    u, v = eq.u_star, eq.v_star
    alpha = v * (p.b2 * u - p.a2 * v)
    beta = u * (p.b1 * v - p.a1 * u)
    cross_gain = p.d12 * alpha + p.d21 * beta
    qa = p.d * (p.d + p.d12 * v + p.d21 * u)
    qb = -(cross_gain + p.d * eq.trace_j)
    qc = eq.det_j

    lambda_star = eq.det_j / cross_gain if cross_gain > 0.0 else None

    region: tuple[float, float] | None = None
    if qa > 0.0 and qb < 0.0:
        disc = qb * qb - 4.0 * qa * qc
        if disc > 0.0:
            # numerically stable quadratic roots: q = -(qb + sign(qb)*sqrt(disc))/2
            q = -(qb - sqrt(disc)) / 2.0
            roots = sorted((qc / q, q / qa))
            region = (float(roots[0]), float(roots[1]))
    elif qa == 0.0 and qb < 0.0:
        # no plain diffusion: determinant is linear in the mode value and the
        # unstable window is unbounded above
        region = (float(qc / -qb), math.inf)

    return InstabilityReport(
        params=p,
        u_star=u,
        v_star=v,
        trace_j=eq.trace_j,
        det_j=eq.det_j,
        alpha=alpha,
        beta=beta,
        cross_gain=cross_gain,
        lambda_quad=(qa, qb, qc),
        lambda_star=lambda_star,
        region=region,
    )


def det_sign_scan(
    j_star: np.ndarray,
    d_star: np.ndarray,
    lam_max: float,
    step: float = _SCAN_STEP,
    lam_min: float = 0.0,
) -> list[tuple[float, float]]:
    """Brackets where det(J - lam*D) changes sign on a uniform grid.

    Direct 2x2 determinant evaluation, independent of the polynomial
    expansions; used to cross-check the closed-form roots.
    """
    grid = np.arange(lam_min, lam_max + step, step)
    m11 = j_star[0, 0] - grid * d_star[0, 0]
    m12 = j_star[0, 1] - grid * d_star[0, 1]
    m21 = j_star[1, 0] - grid * d_star[1, 0]
    m22 = j_star[1, 1] - grid * d_star[1, 1]
    dets = m11 * m22 - m12 * m21
    signs = np.sign(dets)
    flips = np.nonzero(signs[:-1] * signs[1:] < 0)[0]
    return [(float(grid[i]), float(grid[i + 1])) for i in flips]


def instability_region(p: SktParams, eq: Equilibrium | None = None, verify: bool = True) -> InstabilityReport:
    """Mode-eigenvalue window with negative characteristic determinant.

    The closed-form roots of the determinant quadratic are cross-checked
    against a direct determinant sign scan around each root (grid step
    1e-3); disagreement raises StabilityError.
    """
    if eq is None:
        eq = equilibrium(p)
    report = det_polynomials(p, eq)
    if verify and report.region is not None:
        lo, hi = report.region
        # roots closer than the scan resolution cannot be bracketed separately
        if hi - lo > 4.0 * _SCAN_STEP:
            for root in (lo, hi):
                if not math.isfinite(root):
                    continue
                brackets = det_sign_scan(
                    eq.j_star, eq.d_star, root + 2.0 * _SCAN_STEP,
                    lam_min=max(0.0, root - 2.0 * _SCAN_STEP),
                )
                if not any(b[0] - _SCAN_STEP <= root <= b[1] + _SCAN_STEP for b in brackets):
                    raise StabilityError(
                        f"determinant sign scan does not bracket the computed root {root:.6g}"
                    )
    return report


def classify_modes(
    spectrum,
    report: InstabilityReport,
    boundary_tol: float = 1e-9,
) -> tuple[int, ...]:
    """Indices of eigenvalues strictly inside the unstable window.

    Accepts a Spectrum or a plain eigenvalue array.  Eigenvalues within
    ``boundary_tol`` of either endpoint count as stable.
    """
    vals = np.asarray(getattr(spectrum, "eigenvalues", spectrum), dtype=float)
    if report.region is None:
        return ()
    lo, hi = report.region
    inside = (vals > lo + boundary_tol) & (vals < hi - boundary_tol)
    return tuple(int(i) for i in np.nonzero(inside)[0])


def stability_report(p: SktParams, spectrum=None) -> InstabilityReport:
    """Full analysis; when a spectrum is given the unstable modes are attached."""
    report = instability_region(p)
    if spectrum is not None:
        report = replace(report, unstable_modes=classify_modes(spectrum, report))
    return report


def report_to_dict(report: InstabilityReport) -> dict:
    """JSON-ready stability report with fixed key names."""
    region = report.region
    return {
        "u_star": report.u_star,
        "v_star": report.v_star,
        "trace_J": report.trace_j,
        "det_J": report.det_j,
        "alpha": report.alpha,
        "beta": report.beta,
        "lambda_star": report.lambda_star,
        "lambda_star_1": None if region is None else region[0],
        "lambda_star_2": None if region is None else region[1],
        "unstable_modes": (
            None if report.unstable_modes is None else list(report.unstable_modes)
        ),
    }


def _identity(x):
    return x


def _one(x):
    return np.ones_like(np.asarray(x, dtype=float)) if np.ndim(x) else 1.0


def _central_diff(fn: Callable, x: float) -> float:
    h = 1e-6 * max(1.0, abs(x))
    return (fn(x + h) - fn(x - h)) / (2.0 * h)


@dataclass(frozen=True)
class GeneralModel:
    """Two-species reaction model with density-dependent transport.

    Species fluxes are ``d1 + d11*s1(u)`` (self) and ``d12*c1(v)`` (cross)
    for the first species, symmetrically for the second.  ``s*``/``c*`` must
    accept numpy arrays.  Derivative callables are optional; central
    differences with step ``1e-6 * max(1, |x|)`` fill the gaps.
    """

    f: Callable
    g: Callable
    d1: float = 0.0
    d2: float = 0.0
    d11: float = 0.0
    d22: float = 0.0
    d12: float = 0.0
    d21: float = 0.0
    s1: Callable = _identity
    s2: Callable = _identity
    c1: Callable = _identity
    c2: Callable = _identity
    s1_prime: Callable | None = None
    s2_prime: Callable | None = None
    c1_prime: Callable | None = None
    c2_prime: Callable | None = None

    def __post_init__(self):
        for name in ("d1", "d2", "d11", "d22", "d12", "d21"):
            val = getattr(self, name)
            if not np.isfinite(val) or val < 0:
                raise ValueError(f"coefficient {name} must be finite and >= 0, got {val}")

    def _prime(self, fn: Callable, supplied: Callable | None, x: float) -> float:
        return supplied(x) if supplied is not None else _central_diff(fn, x)


def jacobian_general(m: GeneralModel, state: tuple[float, float]) -> np.ndarray:
    """Reaction Jacobian of (f, g) at ``state`` via central differences."""
    u, v = state
    return np.array(
        [
            [_central_diff(lambda x: m.f(x, v), u), _central_diff(lambda y: m.f(u, y), v)],
            [_central_diff(lambda x: m.g(x, v), u), _central_diff(lambda y: m.g(u, y), v)],
        ]
    )


def diffusion_linearization_general(m: GeneralModel, state: tuple[float, float]) -> np.ndarray:
    """Linearized transport matrix of the general model at ``state``."""
    u, v = state
    s1u = m.s1(u)
    s2v = m.s2(v)
    d11 = m.d1 + m.d11 * (s1u + m._prime(m.s1, m.s1_prime, u) * u) + m.d12 * m.c1(v)
    d12 = m.d12 * m._prime(m.c1, m.c1_prime, v) * u
    d21 = m.d21 * m._prime(m.c2, m.c2_prime, u) * v
    d22 = m.d2 + m.d22 * (s2v + m._prime(m.s2, m.s2_prime, v) * v) + m.d21 * m.c2(u)
    return np.array([[d11, d12], [d21, d22]])


def skt_to_general(p: SktParams) -> GeneralModel:
    """The competition model expressed in the general framework.

    Identity couplings with analytic unit derivatives, so the general
    linearization reproduces ``diffusion_linearization_skt`` exactly when
    self-diffusion vanishes.
    """
    return GeneralModel(
        f=lambda u, v: u * (p.r1 - p.a1 * u - p.b1 * v),
        g=lambda u, v: v * (p.r2 - p.b2 * u - p.a2 * v),
        d1=p.d,
        d2=p.d,
        d11=p.d11,
        d22=p.d22,
        d12=p.d12,
        d21=p.d21,
        s1=_identity,
        s2=_identity,
        c1=_identity,
        c2=_identity,
        s1_prime=_one,
        s2_prime=_one,
        c1_prime=_one,
        c2_prime=_one,
    )
