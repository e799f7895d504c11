"""Numerical universality classification of activation functions.

Shallow networks are universal iff the activation is not (almost everywhere
equal to) a smooth function annihilated by some power of the Laplacian; deep
networks (two or more hidden layers) are universal iff the activation is
neither a polynomial in z and zbar, nor holomorphic, nor antiholomorphic, all
in the almost-everywhere sense.  Both criteria are decided here on grids with
declared tolerances.

Non-smooth activations are mollified first: an almost-everywhere property of
the raw function becomes an exact property of its mollification, and the
evidence against it concentrates near the non-smooth set, so those grids
include points close to (and on) the declared cuts.
"""

from __future__ import annotations

import dataclasses
import json

import numpy as np

from . import __version__
from .activations import avoid_set
from .grids import Grid, cut_distance, make_grid, subsample
from .wirtinger import jet_entries_at, make_mollifier, mollify

YES = "yes"
NO = "no"
INDETERMINATE = "indeterminate"


@dataclasses.dataclass(frozen=True)
class ClassifierConfig:
    """Numerical policy for :func:`classify`; echoed into every report."""

    seed: int = 0
    tol: float = 1e-4
    grid_radius: float = 2.0
    grid_points_per_axis: int = 33
    mollifier_epsilon: float = 0.05
    mollifier_quadrature: int = 40
    max_order: int = 4
    max_degree: int = 4
    point_singularity_guard: float = 0.5
    derivative_probes: int = 120
    near_cut_probes: int = 48
    holomorphy_probes: int = 200

    def echo(self):
        return dataclasses.asdict(self)


@dataclasses.dataclass(frozen=True)
class ClassificationReport:
    """Verdicts plus the numerical evidence that produced them."""

    activation_name: str
    polyharmonic_order: int | None
    holomorphic: bool
    antiholomorphic: bool
    polynomial_degree: int | None
    ae_equal_but_discontinuous: bool
    shallow_universal: str
    deep_universal: str
    evidence: dict
    config_echo: dict

    def to_json_dict(self):
        doc = dataclasses.asdict(self)
        doc["version"] = __version__
        return doc

    def to_json(self):
        return json.dumps(self.to_json_dict(), sort_keys=True, indent=2)


def _points_of(grid):
    if isinstance(grid, Grid):
        return grid.scalars
    return np.asarray(grid, dtype=complex).ravel()


def _scale_of(f, pts):
    return max(1.0, float(np.max(np.abs(f(pts)))))


def _smoothed(sigma, config):
    spec = make_mollifier(config.mollifier_epsilon, config.mollifier_quadrature)
    return mollify(sigma, spec)


def detect_polyharmonic(sigma, max_order, grid, tol, mollifier=None):
    """Least m <= max_order with Delta^m sigma ~ 0 on the grid, if any.

    Returns (found, order_or_None, residuals).  Residual r_m is the grid
    maximum of |Delta^m| relative to max(1, sup|sigma|); non-smooth
    activations are tested through their mollification.
    """
    pts = _points_of(grid)
    if max_order < 1:
        raise ValueError("max_order must be at least 1")
    residuals = []
    if sigma.smooth:
        f = sigma.raw
        scale = _scale_of(f, pts)
        for m in range(1, max_order + 1):
            vals = jet_entries_at(f, pts, [(m, m)])[(m, m)]
            r = float(np.max(np.abs(4.0**m * vals)) / scale)
            residuals.append(r)
            if r < tol:
                return True, m, residuals
        return False, None, residuals
    f = mollifier if mollifier is not None else _smoothed(sigma, ClassifierConfig())
    scale = _scale_of(f, pts)
    # two shared stencil samplings: orders {1, 2} then {3, 4, ...}
    low = [(m, m) for m in range(1, min(2, max_order) + 1)]
    vals = jet_entries_at(f, pts, low, step_scale=0.01)
    for m, _ in low:
        r = float(np.max(np.abs(4.0**m * vals[(m, m)])) / scale)
        residuals.append(r)
        if r < tol:
            return True, m, residuals
    if max_order > 2:
        high = [(m, m) for m in range(3, max_order + 1)]
        vals = jet_entries_at(f, pts, high, step_scale=0.035)
        for m, _ in high:
            r = float(np.max(np.abs(4.0**m * vals[(m, m)])) / scale)
            residuals.append(r)
            if r < tol:
                return True, m, residuals
    return False, None, residuals


def _directional_residuals(sigma, pts, mollifier=None):
    f = sigma.raw if sigma.smooth else (mollifier or _smoothed(sigma, ClassifierConfig()))
    vals = jet_entries_at(f, pts, [(1, 0), (0, 1)], step_scale=0.01)
    d_res = float(np.max(np.abs(vals[(1, 0)])))
    dbar_res = float(np.max(np.abs(vals[(0, 1)])))
    return d_res, dbar_res


def detect_holomorphy(sigma, grid, tol, mollifier=None):
    """Classify as "holomorphic", "antiholomorphic", or "neither".

    Compares the grid maxima of |d sigma| and |dbar sigma| (mollified when
    sigma is not smooth) against ``tol`` relative to max(|d|, |dbar|, 1).
    """
    pts = _points_of(grid)
    d_res, dbar_res = _directional_residuals(sigma, pts, mollifier)
    scale = max(d_res, dbar_res, 1.0)
    holo = dbar_res <= tol * scale
    anti = d_res <= tol * scale
    if holo and not anti:
        return "holomorphic"
    if anti and not holo:
        return "antiholomorphic"
    if holo and anti:
        # both derivatives vanish: constant; report as holomorphic
        return "holomorphic"
    return "neither"


def _monomial_design(pts, degree):
    cols = []
    powers = []
    for total in range(degree + 1):
        for m in range(total + 1):
            ell = total - m
            cols.append(pts**m * np.conj(pts) ** ell)
            powers.append((m, ell))
    return np.stack(cols, axis=1), powers


def _poly_fit_residual(fvals, pts, degree, radius):
    u = pts / radius
    design, _ = _monomial_design(u, degree)
    coef, *_ = np.linalg.lstsq(design, fvals, rcond=None)
    resid = fvals - design @ coef
    return float(np.max(np.abs(resid)))


def detect_polynomial(sigma, max_degree, grid, tol, mollifier=None, deriv_points=None):
    """Least total degree g <= max_degree with sigma = p(z, zbar) on the grid.

    A candidate degree must pass two independent tests: the least-squares fit
    in the monomials z^m zbar^l (m + l <= g) has relative sup residual below
    ``tol``, and the pure derivatives of order g + 1 vanish.  Returns
    (found, degree_or_None).
    """
    pts = _points_of(grid)
    f = sigma.raw if sigma.smooth else (mollifier or _smoothed(sigma, ClassifierConfig()))
    fvals = f(pts)
    scale = max(1.0, float(np.max(np.abs(fvals))))
    radius = max(1.0, float(np.max(np.abs(pts))))
    dpts = subsample(pts, 60) if deriv_points is None else _points_of(deriv_points)
    entries = [(k, 0) for k in range(1, max_degree + 2)] + [(0, k) for k in range(1, max_degree + 2)]
    jets = jet_entries_at(f, dpts, entries, step_scale=0.02)
    fit_residuals = []
    deriv_residuals = []
    found_degree = None
    for g in range(max_degree + 1):
        fit_r = _poly_fit_residual(fvals, pts, g, radius) / scale
        dz = float(np.max(np.abs(jets[(g + 1, 0)])))
        dzb = float(np.max(np.abs(jets[(0, g + 1)])))
        deriv_r = max(dz, dzb) / scale
        fit_residuals.append(fit_r)
        deriv_residuals.append(deriv_r)
        if found_degree is None and fit_r < tol and deriv_r < tol:
            found_degree = g
    return found_degree is not None, found_degree, fit_residuals, deriv_residuals


def _classification_points(sigma, config):
    """Raw-path points, mollified-path points, and near-cut probes."""
    base = make_grid(0.0, config.grid_radius, config.grid_points_per_axis)
    pts = base.scalars
    point_cuts = tuple(c for c in avoid_set(sigma) if c.kind == "points")
    curve_cuts = tuple(c for c in avoid_set(sigma) if c.kind != "points")
    mask = np.ones(pts.size, dtype=bool)
    if point_cuts:
        mask &= cut_distance(pts, point_cuts) >= config.point_singularity_guard
    moll_pts = pts[mask]
    raw_mask = mask.copy()
    if curve_cuts:
        guard = config.grid_radius / (10.0 * config.grid_points_per_axis)
        raw_mask &= cut_distance(pts, curve_cuts) >= guard
    raw_pts = pts[raw_mask]
    cuts = tuple(sigma.nonsmooth_set) + tuple(sigma.discontinuity_set)
    near = np.empty(0, dtype=complex)
    if cuts:
        dist = cut_distance(moll_pts, cuts)
        near = moll_pts[dist <= 1.5 * config.mollifier_epsilon]
    return raw_pts, moll_pts, near


def classify(sigma, config=None):
    """Full universality classification of one activation.

    Shallow verdict: "no" iff a polyharmonic order is found.  Deep verdict:
    "no" iff a forbidden class (polynomial / holomorphic / antiholomorphic)
    is found and the activation is continuous up to isolated singular points;
    if it is discontinuous along a curve yet matches a forbidden class on the
    grid, the verdict is indeterminate unless a catalog annotation resolves
    it, and ``ae_equal_but_discontinuous`` is set.
    """
    config = config or ClassifierConfig()
    if sigma.annotations.get("not_locally_bounded") or not sigma.locally_bounded:
        return ClassificationReport(
            activation_name=sigma.name,
            polyharmonic_order=None,
            holomorphic=False,
            antiholomorphic=False,
            polynomial_degree=None,
            ae_equal_but_discontinuous=False,
            shallow_universal=INDETERMINATE,
            deep_universal=INDETERMINATE,
            evidence={"reason": "not locally bounded"},
            config_echo=config.echo(),
        )

    raw_pts, moll_pts, near = _classification_points(sigma, config)
    mollifier = None
    if sigma.smooth:
        probe = subsample(raw_pts, config.derivative_probes)
        holo_pts = subsample(raw_pts, config.holomorphy_probes)
        fit_pts = raw_pts
    else:
        mollifier = _smoothed(sigma, config)
        probe = subsample(moll_pts, config.derivative_probes)
        if near.size:
            near_probe = subsample(near, config.near_cut_probes)
            probe = np.concatenate([probe, near_probe])
        holo_pts = probe
        fit_pts = np.concatenate([subsample(moll_pts, 800), near]) if near.size else subsample(moll_pts, 800)

    found, order, poly_res = detect_polyharmonic(
        sigma, config.max_order, probe, config.tol, mollifier=mollifier
    )
    d_res, dbar_res = _directional_residuals(sigma, holo_pts, mollifier)
    dir_scale = max(d_res, dbar_res, 1.0)
    holomorphic = dbar_res <= config.tol * dir_scale
    antiholomorphic = d_res <= config.tol * dir_scale
    poly_found, poly_degree, fit_res, deriv_res = detect_polynomial(
        sigma, config.max_degree, fit_pts, config.tol, mollifier=mollifier, deriv_points=subsample(probe, 60)
    )

    evidence = {
        "polyharmonic_residuals": [float(r) for r in poly_res],
        "d_residual": d_res,
        "dbar_residual": dbar_res,
        "poly_fit_residuals": [float(r) for r in fit_res],
        "poly_deriv_residuals": [float(r) for r in deriv_res],
        "scale_points": int(probe.size),
    }

    shallow = NO if found else YES
    forbidden = poly_found or holomorphic or antiholomorphic
    isolated_only = all(c.kind == "points" for c in sigma.discontinuity_set)
    ae_flag = False
    if not forbidden:
        deep = YES
    elif sigma.continuous or isolated_only:
        deep = NO
    else:
        ae_flag = True
        deep = sigma.annotations.get("deep_universal_override", INDETERMINATE)

    return ClassificationReport(
        activation_name=sigma.name,
        polyharmonic_order=order,
        holomorphic=bool(holomorphic),
        antiholomorphic=bool(antiholomorphic),
        polynomial_degree=poly_degree,
        ae_equal_but_discontinuous=ae_flag,
        shallow_universal=shallow,
        deep_universal=deep,
        evidence=evidence,
        config_echo=config.echo(),
    )
