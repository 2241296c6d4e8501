"""Talenti bubble algebra: parameterized bubbles, conformal actions,
pointwise evaluation, and the pairings/norms of finite superpositions.

Every H^s quantity is computed through the eigenvalue identity
(-Delta)^s B_{x,lambda} = S_d B_{x,lambda}^(2*-1): inner products reduce to
weighted L^2-type pairings (B_i, B_j^(2*-1)) evaluated by quadrature, and the
fractional Laplacian is never discretized.  Pairings and norms are supported
on CONCENTRIC configurations (all centers coincide; radial quadrature) and
COLLINEAR ones (all centers on one line; axisymmetric quadrature for d >= 2,
a split real-line integral for d = 1).  GENERAL center clouds are rejected.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import Sequence

import numpy as np

from .constants import Ambient, sharp_constants, sphere_area
from .errors import GeometryError, ParameterError, SchemaError
from .quadrature import (
    DEFAULT_CONFIG,
    QuadratureConfig,
    QuadratureResult,
    integrate_axisymmetric,
    integrate_real_line,
)

__all__ = [
    "BubbleParam",
    "Superposition",
    "Geometry",
    "evaluate",
    "dilate",
    "invert",
    "pair_against_bubble",
    "hs_inner",
    "hs_norm_sq",
    "lp_norm",
    "superposition_from_dict",
    "superposition_to_dict",
]

# Centers closer than this (relative to the cloud size) are treated as equal.
_CENTER_TOL = 1e-14


class Geometry(Enum):
    CONCENTRIC = "CONCENTRIC"
    COLLINEAR = "COLLINEAR"
    GENERAL = "GENERAL"


@dataclass(frozen=True)
class BubbleParam:
    """One weighted, translated, scaled bubble: coeff * B_{center, scale}."""

    coeff: float
    center: tuple[float, ...]
    scale: float

    def __post_init__(self) -> None:
        object.__setattr__(self, "coeff", float(self.coeff))
        object.__setattr__(self, "scale", float(self.scale))
        object.__setattr__(
            self, "center", tuple(float(c) for c in np.atleast_1d(self.center))
        )
        if self.coeff == 0.0 or not math.isfinite(self.coeff):
            raise ParameterError(f"coeff must be finite and nonzero, got {self.coeff}")
        if not (self.scale > 0.0 and math.isfinite(self.scale)):
            raise ParameterError(f"scale must be finite and > 0, got {self.scale}")
        if not all(math.isfinite(c) for c in self.center):
            raise ParameterError("center coordinates must be finite")


def _classify(centers: np.ndarray) -> Geometry:
    """Geometry class of a center cloud via the singular values of the
    centered coordinate matrix."""
    diffs = centers - centers[0]
    if not diffs.any():
        return Geometry.CONCENTRIC
    sv = np.linalg.svd(diffs, compute_uv=False)
    scale = max(1.0, float(np.abs(centers).max()))
    if sv[0] <= _CENTER_TOL * scale:
        return Geometry.CONCENTRIC
    if len(sv) < 2 or sv[1] <= _CENTER_TOL * sv[0]:
        return Geometry.COLLINEAR
    return Geometry.GENERAL


@dataclass(frozen=True)
class Superposition:
    """A finite bubble superposition in a fixed ambient (d, s)."""

    ambient: Ambient
    terms: tuple[BubbleParam, ...]

    def __post_init__(self) -> None:
        terms = tuple(self.terms)
        if not terms:
            raise ParameterError("a superposition needs at least one term")
        for i, t in enumerate(terms):
            if len(t.center) != self.ambient.d:
                raise ParameterError(
                    f"terms[{i}].center has length {len(t.center)}, "
                    f"expected d = {self.ambient.d}"
                )
        object.__setattr__(self, "terms", terms)

    @property
    def geometry(self) -> Geometry:
        return _classify(self._centers())

    def _centers(self) -> np.ndarray:
        return np.array([t.center for t in self.terms], dtype=float)


def _axis(centers: np.ndarray) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Origin, unit direction, and axial coordinates for a collinear cloud.

    For a concentric cloud the direction defaults to the first basis vector,
    so the same frame serves off-axis searches around a common center.
    """
    p0 = centers[0]
    diffs = centers - p0
    norms = np.linalg.norm(diffs, axis=1)
    if norms.max() == 0.0:
        e = np.zeros(centers.shape[1])
        e[0] = 1.0
        return p0, e, np.zeros(len(centers))
    e = diffs[int(norms.argmax())]
    e = e / np.linalg.norm(e)
    return p0, e, diffs @ e


def evaluate(u: Superposition, y: Sequence[float]) -> float:
    """Pointwise value sum_i c_i lambda_i^((d-2s)/2) B(lambda_i (x_i - y))."""
    amb = u.ambient
    yv = np.atleast_1d(np.asarray(y, dtype=float))
    if yv.shape != (amb.d,):
        raise ParameterError(f"point must have {amb.d} coordinates")
    cst = sharp_constants(amb)
    bexp = amb.beta_exp
    total = 0.0
    for t in u.terms:
        r = t.scale * np.linalg.norm(np.asarray(t.center) - yv)
        total += t.coeff * t.scale**bexp * cst.c_d * (1.0 + r * r) ** (-bexp)
    return total


def dilate(u: Superposition, mu: float) -> Superposition:
    """Conformal dilation: each (c, x, lambda) -> (c, x/mu, mu*lambda)."""
    mu = float(mu)
    if not (mu > 0.0 and math.isfinite(mu)):
        raise ParameterError(f"dilation factor must be finite and > 0, got {mu}")
    return Superposition(
        u.ambient,
        tuple(
            BubbleParam(t.coeff, tuple(c / mu for c in t.center), mu * t.scale)
            for t in u.terms
        ),
    )


def invert(u: Superposition, tau: float) -> Superposition:
    """Conformal inversion about the sphere of radius tau:
    each origin-centered (c, 0, lambda) -> (c, 0, tau^-2 lambda^-1)."""
    tau = float(tau)
    if not (tau > 0.0 and math.isfinite(tau)):
        raise ParameterError(f"inversion radius must be finite and > 0, got {tau}")
    if any(c != 0.0 for t in u.terms for c in t.center):
        raise GeometryError(
            "inversion is implemented for origin-centered terms only"
        )
    return Superposition(
        u.ambient,
        tuple(
            BubbleParam(t.coeff, t.center, 1.0 / (tau * tau * t.scale))
            for t in u.terms
        ),
    )


# ---------------------------------------------------------------------------
# pairing / norm kernels
# ---------------------------------------------------------------------------


def _log_profile(bexp: float, log_lam: float, vs: np.ndarray) -> np.ndarray:
    """log of lambda^beta (1 + (lambda e^v)^2)^(-beta), stable for all v.

    In the log-radius variable v = log r each bubble is a bump of O(1) width
    centered at v = -log lambda, which keeps multi-scale superpositions
    resolvable by the adaptive rule no matter how the scales are spread.
    """
    return bexp * log_lam - bexp * np.logaddexp(0.0, 2.0 * (vs + log_lam))


def _pair_radial(
    amb: Ambient,
    cls: Sequence[tuple[float, float]],
    mu: float,
    cfg: QuadratureConfig,
) -> QuadratureResult:
    """(sum c_i B_{0,lambda_i}, B_{0,mu}^(2*-1)) for a common center,
    integrated in log-radius: r^(d-1) dr = e^(d v) dv."""
    cst = sharp_constants(amb)
    bexp = amb.beta_exp
    hexp = (amb.d + 2.0 * amb.s) / 2.0
    d = amb.d
    log_mu = math.log(mu)
    log_lams = [(c, math.log(lam)) for c, lam in cls]

    def f(vs: np.ndarray) -> np.ndarray:
        lh = hexp * log_mu - hexp * np.logaddexp(0.0, 2.0 * (vs + log_mu))
        acc = np.zeros_like(vs)
        for c, ll in log_lams:
            acc += c * np.exp(_log_profile(bexp, ll, vs) + lh + d * vs)
        return acc

    knots = [-ll for _, ll in log_lams] + [-log_mu]
    res = integrate_real_line(f, cfg, knots=knots, vectorized=True)
    area = sphere_area(amb.d) * cst.c_d**amb.two_star
    return QuadratureResult(
        area * res.value, area * res.error_estimate, res.evaluations
    )


def _scale_ladder(scales: Sequence[float]) -> list[float]:
    """Radial knots bracketing each bubble width 1/lambda, so that a narrow
    or far feature is enclosed by a segment of comparable size instead of
    sitting in the sliver of a much wider one."""
    knots = []
    for lam in scales:
        w = 1.0 / lam
        knots.extend((0.25 * w, w, 4.0 * w))
    return knots


def _axial_brackets(positions_scales: Sequence[tuple[float, float]]) -> list[float]:
    """Axial knots at each center plus one bubble-width to either side."""
    knots = []
    for t, lam in positions_scales:
        w = 1.0 / lam
        knots.extend((t - w, t, t + w))
    return knots


def _pair_offaxis(
    amb: Ambient,
    axial: Sequence[tuple[float, float, float]],  # (coeff, axial coord, scale)
    h_pos: float,
    mu: float,
    cfg: QuadratureConfig,
) -> QuadratureResult:
    """(sum c_i B_{t_i e, lambda_i}, B_{t_h e, mu}^(2*-1)) on a common axis."""
    cst = sharp_constants(amb)
    bexp = amb.beta_exp
    hexp = (amb.d + 2.0 * amb.s) / 2.0
    pref = cst.c_d ** amb.two_star * mu**hexp
    knots_ax = _axial_brackets(
        [(t, lam) for _, t, lam in axial] + [(h_pos, mu)]
    )
    knots_rad = _scale_ladder([lam for _, _, lam in axial] + [mu])

    if amb.d == 1:

        def f1(xs: np.ndarray) -> np.ndarray:
            acc = np.zeros_like(xs)
            for c, t, lam in axial:
                z = lam * (xs - t)
                acc += c * lam**bexp * (1.0 + z * z) ** (-bexp)
            zh = mu * (xs - h_pos)
            return acc * pref * (1.0 + zh * zh) ** (-hexp)

        return integrate_real_line(f1, cfg, knots=knots_ax, vectorized=True)

    def f(t: float, rhos: np.ndarray) -> np.ndarray:
        rho2 = rhos * rhos
        acc = np.zeros_like(rhos)
        for c, ti, lam in axial:
            z2 = lam * lam * ((t - ti) ** 2 + rho2)
            acc += c * lam**bexp * (1.0 + z2) ** (-bexp)
        zh2 = mu * mu * ((t - h_pos) ** 2 + rho2)
        return acc * pref * (1.0 + zh2) ** (-hexp)

    return integrate_axisymmetric(
        f, amb, cfg, axial_knots=knots_ax, radial_knots=knots_rad
    )


def _combined_frame(u: Superposition, h: BubbleParam):
    """Geometry frame for u's centers together with h's center."""
    centers = np.vstack([u._centers(), np.asarray(h.center, dtype=float)])
    geo = _classify(centers)
    if geo is Geometry.GENERAL:
        raise GeometryError(
            "combined centers are neither concentric nor collinear"
        )
    return geo, centers


def pair_against_bubble(
    u: Superposition, h: BubbleParam, cfg: QuadratureConfig = DEFAULT_CONFIG
) -> float:
    """The pairing (u, h^(2*-1)) = integral of u * h^(2*-1) over R^d,
    for a unit-coefficient bubble h."""
    if h.coeff != 1.0:
        raise ParameterError("pair_against_bubble expects a unit-coefficient h")
    if len(h.center) != u.ambient.d:
        raise ParameterError("h.center dimension does not match the ambient")
    geo, centers = _combined_frame(u, h)
    amb = u.ambient
    if geo is Geometry.CONCENTRIC:
        cls = [(t.coeff, t.scale) for t in u.terms]
        return _pair_radial(amb, cls, h.scale, cfg).value
    p0, e, ts = _axis(centers)
    axial = [(t.coeff, ts[i], t.scale) for i, t in enumerate(u.terms)]
    return _pair_offaxis(amb, axial, ts[-1], h.scale, cfg).value


def _pair_unit(
    amb: Ambient,
    b1: tuple[tuple[float, ...], float],
    b2: tuple[tuple[float, ...], float],
    cfg: QuadratureConfig,
) -> float:
    """(B_{x1,l1}, B_{x2,l2}^(2*-1)) for unit-coefficient bubbles."""
    (x1, l1), (x2, l2) = b1, b2
    if x1 == x2:
        return _pair_radial(amb, [(1.0, l1)], l2, cfg).value
    centers = np.array([x1, x2], dtype=float)
    p0, e, ts = _axis(centers)
    return _pair_offaxis(amb, [(1.0, ts[0], l1)], ts[1], l2, cfg).value


def hs_inner(
    u: Superposition, v: Superposition, cfg: QuadratureConfig = DEFAULT_CONFIG
) -> float:
    """H^s inner product via the eigenvalue identity:

        <sum c_i B_i, sum e_j B_j> = S_d * sum_ij c_i e_j (B_i, B_j^(2*-1)).

    Requires the union of all centers to be concentric or collinear.
    """
    if u.ambient != v.ambient:
        raise ParameterError("superpositions live in different ambients")
    amb = u.ambient
    centers = np.vstack([u._centers(), v._centers()])
    if _classify(centers) is Geometry.GENERAL:
        raise GeometryError("combined centers are neither concentric nor collinear")
    cst = sharp_constants(amb)
    same = u is v or u == v
    pair_cache: dict[tuple, float] = {}

    def unit_pair(ti: BubbleParam, tj: BubbleParam) -> float:
        key = (ti.center, ti.scale, tj.center, tj.scale)
        if key not in pair_cache:
            pair_cache[key] = _pair_unit(
                amb, (ti.center, ti.scale), (tj.center, tj.scale), cfg
            )
        return pair_cache[key]

    contributions = []
    if same:
        # symmetric matrix: one quadrature per unordered pair
        n = len(u.terms)
        for i in range(n):
            ti = u.terms[i]
            contributions.append(ti.coeff * ti.coeff * unit_pair(ti, ti))
            for j in range(i + 1, n):
                tj = u.terms[j]
                contributions.append(2.0 * ti.coeff * tj.coeff * unit_pair(ti, tj))
    else:
        for ti in u.terms:
            for tj in v.terms:
                contributions.append(ti.coeff * tj.coeff * unit_pair(ti, tj))
    return cst.S_d * math.fsum(contributions)


def hs_norm_sq(u: Superposition, cfg: QuadratureConfig = DEFAULT_CONFIG) -> float:
    """Squared H^s seminorm ||(-Delta)^(s/2) u||_2^2."""
    return hs_inner(u, u, cfg)


def lp_norm(u: Superposition, cfg: QuadratureConfig = DEFAULT_CONFIG) -> float:
    """Critical Lebesgue norm ||u||_{2*} (signed coefficients supported)."""
    amb = u.ambient
    two_star = amb.two_star
    cst = sharp_constants(amb)
    geo = u.geometry
    if geo is Geometry.GENERAL:
        raise GeometryError("lp_norm requires concentric or collinear centers")

    if geo is Geometry.CONCENTRIC:
        # log-radius form; the largest log-profile is factored out so the
        # e^(d v) weight can never meet an underflowed sum (0 * inf).
        bexp = amb.beta_exp
        d = amb.d
        log_lams = [(t.coeff, math.log(t.scale)) for t in u.terms]

        def f(vs: np.ndarray) -> np.ndarray:
            ls = np.stack([_log_profile(bexp, ll, vs) for _, ll in log_lams])
            top = ls.max(axis=0)
            acc = np.zeros_like(vs)
            for (c, _), li in zip(log_lams, ls):
                acc += c * np.exp(li - top)
            return np.abs(cst.c_d * acc) ** two_star * np.exp(
                two_star * top + d * vs
            )

        knots = [-ll for _, ll in log_lams]
        res = integrate_real_line(f, cfg, knots=knots, vectorized=True)
        total = sphere_area(amb.d) * res.value
        return total ** (1.0 / two_star)

    centers = u._centers()
    p0, e, ts = _axis(centers)
    bexp = amb.beta_exp
    axial = [(t.coeff, ts[i], t.scale) for i, t in enumerate(u.terms)]
    knots_ax = _axial_brackets([(ts[i], t.scale) for i, t in enumerate(u.terms)])

    if amb.d == 1:

        def f1(xs: np.ndarray) -> np.ndarray:
            acc = np.zeros_like(xs)
            for c, ti, lam in axial:
                z = lam * (xs - ti)
                acc += c * lam**bexp * (1.0 + z * z) ** (-bexp)
            return np.abs(cst.c_d * acc) ** two_star

        res = integrate_real_line(f1, cfg, knots=knots_ax, vectorized=True)
        return res.value ** (1.0 / two_star)

    def f(t: float, rhos: np.ndarray) -> np.ndarray:
        rho2 = rhos * rhos
        acc = np.zeros_like(rhos)
        for c, ti, lam in axial:
            z2 = lam * lam * ((t - ti) ** 2 + rho2)
            acc += c * lam**bexp * (1.0 + z2) ** (-bexp)
        return np.abs(cst.c_d * acc) ** two_star

    res = integrate_axisymmetric(
        f,
        amb,
        cfg,
        axial_knots=knots_ax,
        radial_knots=_scale_ladder([t.scale for t in u.terms]),
    )
    return res.value ** (1.0 / two_star)


# ---------------------------------------------------------------------------
# JSON schema
# ---------------------------------------------------------------------------


def superposition_from_dict(doc: dict) -> Superposition:
    """Build a Superposition from the JSON schema

    ``{"d": int, "s": float, "terms": [{"coeff", "center", "lambda"}, ...]}``

    raising SchemaError messages that name the offending field.
    """
    if not isinstance(doc, dict):
        raise SchemaError("document: expected a JSON object")
    if "d" not in doc:
        raise SchemaError("d: missing")
    if "s" not in doc:
        raise SchemaError("s: missing")
    d = doc["d"]
    if not isinstance(d, int) or isinstance(d, bool) or d < 1:
        raise SchemaError(f"d: expected a positive integer, got {d!r}")
    s = doc["s"]
    if not isinstance(s, (int, float)) or isinstance(s, bool):
        raise SchemaError(f"s: expected a number, got {s!r}")
    if not 0.0 < float(s) < d / 2.0:
        raise SchemaError(f"s: must satisfy 0 < s < d/2 = {d / 2.0}, got {s}")
    amb = Ambient(d, float(s))
    raw_terms = doc.get("terms")
    if not isinstance(raw_terms, list) or not raw_terms:
        raise SchemaError("terms: expected a nonempty array")
    terms = []
    for i, rt in enumerate(raw_terms):
        if not isinstance(rt, dict):
            raise SchemaError(f"terms[{i}]: expected an object")
        for field in ("coeff", "center", "lambda"):
            if field not in rt:
                raise SchemaError(f"terms[{i}].{field}: missing")
        coeff = rt["coeff"]
        if not isinstance(coeff, (int, float)) or isinstance(coeff, bool) or coeff == 0:
            raise SchemaError(f"terms[{i}].coeff: expected a nonzero number")
        center = rt["center"]
        if not isinstance(center, list) or not all(
            isinstance(c, (int, float)) and not isinstance(c, bool) for c in center
        ):
            raise SchemaError(f"terms[{i}].center: expected an array of numbers")
        if len(center) != d:
            raise SchemaError(
                f"terms[{i}].center: length {len(center)} does not match d = {d}"
            )
        lam = rt["lambda"]
        if (
            not isinstance(lam, (int, float))
            or isinstance(lam, bool)
            or not float(lam) > 0.0
        ):
            raise SchemaError(f"terms[{i}].lambda: expected a number > 0")
        terms.append(BubbleParam(float(coeff), tuple(center), float(lam)))
    return Superposition(amb, tuple(terms))


def superposition_to_dict(u: Superposition) -> dict:
    return {
        "d": u.ambient.d,
        "s": u.ambient.s,
        "terms": [
            {"coeff": t.coeff, "center": list(t.center), "lambda": t.scale}
            for t in u.terms
        ],
    }
