"""Constructive approximation by shallow and deep complex networks.

The shallow pipeline fits the target by polynomials in z and zbar, then
realizes each monomial z^m zbar^l as a divided-difference combination of
dilated neurons: stencil weights in the dilation parameter w applied to
sigma(w z + theta), normalized by the derivative of sigma at theta.  The deep
pipeline builds a two-layer surrogate of the real-part ReLU
rho(z) = max(0, Re z) by composing an approximate real polynomial with an
approximate real-part map, then reduces any target to ridges of rho via a
real one-hidden-layer fit.
"""

from __future__ import annotations

import dataclasses
import json
import math
import time

import numpy as np

from . import __version__
from .classifier import YES, ClassifierConfig, classify
from .errors import (
    IllConditionedBasisError,
    InactiveExpansionPointError,
    NoActivePointError,
    SynthesisRefusedError,
)
from .grids import Grid, cut_distance, make_grid, random_points
from .network import (
    NetworkWeights,
    ShallowNetwork,
    compose,
    concat_shallow,
    eval_network,
    eval_shallow,
    lift_affine,
    linear_combine_many,
)
from .wirtinger import fd_weights, make_mollifier, mollify, stencil_halfwidth

JET_LIMIT = 7
# mollifier used when extraction must cross a non-smooth set
SYNTH_MOLLIFIER_EPS = 0.05
SYNTH_MOLLIFIER_Q = 12


@dataclasses.dataclass(frozen=True)
class MonomialRequest:
    """One monomial z^m zbar^l to extract around base point ``theta``."""

    m: int
    ell: int
    theta: complex
    fd_step: float = 0.01
    stencil_radius: int | None = None

    def __post_init__(self):
        if self.m < 0 or self.ell < 0:
            raise ValueError("powers must be nonnegative")
        if self.m + self.ell > JET_LIMIT:
            raise ValueError(f"total order {self.m + self.ell} exceeds the jet limit {JET_LIMIT}")


@dataclasses.dataclass(frozen=True)
class ConstructorConfig:
    seed: int = 0
    fit_points_per_axis: int = 32
    test_points_per_axis: int = 65
    search_points_per_axis: int = 15
    search_radius: float = 1.0
    fd_step: float = 0.01
    fd_step_high: float = 0.015
    coeff_threshold: float = 1e-8
    real_stage_width: int = 320
    psi_width: int = 160
    ridge_bias_scale: float = 1.0
    ridge_fit_points: int = 4000
    relu_eps: float = 0.1
    deep_relu_eps: float = 0.15
    deep_ridge_width: int = 16
    override_verdict: bool = False

    def echo(self):
        return dataclasses.asdict(self)


@dataclasses.dataclass(frozen=True)
class ApproximationCertificate:
    """Held-out-grid error report for one synthesized network."""

    target_name: str
    domain: dict
    test_grid_size: int
    sup_error: float
    l1_error: float
    network_size: tuple
    wall_time: float | None
    seed: int
    config_echo: dict = dataclasses.field(default_factory=dict)
    failures: tuple = ()
    stage_errors: dict = dataclasses.field(default_factory=dict)

    def to_json_dict(self):
        doc = dataclasses.asdict(self)
        doc["network_size"] = list(self.network_size)
        doc["failures"] = list(self.failures)
        # timing is environment noise; reports must be byte-identical per seed
        doc["wall_time"] = None
        doc["version"] = __version__
        return doc

    def to_json(self):
        return json.dumps(self.to_json_dict(), sort_keys=True, indent=2)


def _domain_dict(center, radius, d):
    center = np.atleast_1d(np.asarray(center, dtype=complex))
    return {
        "center": [[float(c.real), float(c.imag)] for c in center],
        "radius": float(radius),
        "d": int(d),
    }


def _w_stencil(m, ell, fd_step, halfwidth=None):
    """2-D divided-difference weights in the dilation parameter w."""
    K = m + ell
    n = halfwidth if halfwidth is not None else stencil_halfwidth(K)
    offs = np.arange(-n, n + 1)
    wx = [fd_weights(a, offs * fd_step) for a in range(K + 1)]
    coeffs = np.zeros((2 * n + 1, 2 * n + 1), dtype=complex)
    pref = 2.0 ** (-(m + ell))
    for j in range(m + 1):
        for k in range(ell + 1):
            a = j + k
            b = (m - j) + (ell - k)
            lam = pref * math.comb(m, j) * math.comb(ell, k) * (-1j) ** (m - j) * (1j) ** (ell - k)
            coeffs += lam * np.outer(wx[a], wx[b])
    nodes = fd_step * (offs[:, None] + 1j * offs[None, :])
    return nodes.ravel(), coeffs.ravel()


def _clears_nonsmooth(sigma, theta, reach):
    cuts = tuple(sigma.nonsmooth_set) + tuple(sigma.discontinuity_set) + tuple(sigma.singular_points)
    if not cuts:
        return True
    return float(cut_distance(theta, cuts)) > reach


def extract_monomial(sigma, req):
    """Shallow network approximating z^m zbar^l on the unit ball.

    The neurons are sigma(w_node z + theta) over the divided-difference
    stencil in w, scaled by the stencil weights and normalized by the
    stencil's own estimate of (d^m dbar^l sigma)(theta).  When sigma is not
    smooth and theta sits too close to its non-smooth set for the stencil
    footprint, the mollified activation is used instead and every neuron is
    expanded into the corresponding sum of translates of sigma.
    """
    m, ell, theta = req.m, req.ell, complex(req.theta)
    K = m + ell
    h = req.fd_step if K <= 4 else max(req.fd_step, 0.015)
    nodes, coeffs = _w_stencil(m, ell, h, req.stencil_radius)
    reach = float(np.max(np.abs(nodes))) * 1.1
    use_raw = sigma.smooth or _clears_nonsmooth(sigma, theta, reach + 0.02)
    if use_raw:
        samples = sigma(nodes + theta)
    else:
        moll = make_mollifier(SYNTH_MOLLIFIER_EPS, SYNTH_MOLLIFIER_Q)
        f = mollify(sigma, moll)
        samples = f(nodes + theta)
        reach += moll.epsilon
    rho = complex(np.sum(coeffs * samples))
    scale = max(1.0, float(np.max(np.abs(samples))))
    noise_floor = float(np.sum(np.abs(coeffs))) * 2.3e-16 * scale
    if abs(rho) < max(1e-8, 100.0 * noise_floor):
        raise InactiveExpansionPointError("inactive expansion point")
    keep = np.abs(coeffs) > 0
    terms = []
    if use_raw:
        for w_node, c in zip(nodes[keep], coeffs[keep]):
            terms.append((c / rho, [w_node], theta))
    else:
        for w_node, c in zip(nodes[keep], coeffs[keep]):
            for delta, weight in zip(moll.offsets, moll.weights):
                terms.append((weight * c / rho, [w_node], theta - delta))
    return ShallowNetwork(c=0.0, terms=tuple(terms), input_dim=1)


def find_active_point(sigma, m, ell, search_grid):
    """Point of the grid maximizing |(d^m dbar^l sigma)(theta)|.

    Prefers points whose stencil footprint stays clear of the non-smooth set
    (raw evaluation there); falls back to the mollified activation on the
    whole grid when no raw point is active.  Raises ``NoActivePointError``
    when every magnitude sits below threshold, which signals that sigma
    cannot produce this monomial.
    """
    pts = search_grid.scalars if isinstance(search_grid, Grid) else np.asarray(search_grid, complex).ravel()
    K = m + ell
    h = 0.01 if K <= 4 else 0.015
    nodes, coeffs = _w_stencil(m, ell, h)
    reach = float(np.max(np.abs(nodes))) * 1.1 + 0.02

    def magnitudes(f, cand):
        samples = f(cand[:, None] + nodes[None, :])
        return np.abs(samples @ coeffs)

    threshold = 1e-8
    if sigma.smooth:
        cand = pts
        mags = magnitudes(sigma.raw, cand)
    else:
        clear = np.array([_clears_nonsmooth(sigma, complex(t), reach) for t in pts])
        cand = pts[clear]
        mags = magnitudes(sigma.raw, cand) if cand.size else np.empty(0)
        if cand.size == 0 or np.max(mags) < threshold:
            f = mollify(sigma, make_mollifier(SYNTH_MOLLIFIER_EPS, SYNTH_MOLLIFIER_Q))
            cand = pts
            mags = magnitudes(f, cand)
    if cand.size == 0 or np.max(mags) < threshold:
        raise NoActivePointError("no active point found")
    best = int(np.argmax(mags))
    return complex(cand[best]), float(mags[best])


def fit_poly_coeffs(target, fit_grid, degree, total_degree=False, weights=None):
    """Least-squares coefficients c_{m,l} of target in the monomials z^m zbar^l.

    The box basis 0 <= m, l <= degree is used unless ``total_degree`` is set
    (m + l <= degree).  Monomials are evaluated on radius-normalized
    coordinates for conditioning and the coefficients rescaled afterwards.
    Optional positive ``weights`` reweight the grid points.
    """
    pts = fit_grid.scalars if isinstance(fit_grid, Grid) else np.asarray(fit_grid, complex).ravel()
    if total_degree:
        powers = [(m, total - m) for total in range(degree + 1) for m in range(total + 1)]
    else:
        powers = [(m, ell) for m in range(degree + 1) for ell in range(degree + 1)]
    if pts.size < len(powers):
        raise ValueError("fit grid has fewer points than basis functions")
    radius = max(1.0, float(np.max(np.abs(pts))))
    u = pts / radius
    design = np.stack([u**m * np.conj(u) ** ell for m, ell in powers], axis=1)
    fvals = np.asarray(target(pts), dtype=complex)
    if weights is not None:
        root = np.sqrt(np.asarray(weights, dtype=float))
        design = design * root[:, None]
        fvals = fvals * root
    col_norms = np.linalg.norm(design, axis=0)
    design_scaled = design / col_norms
    coef, _, rank, svals = np.linalg.lstsq(design_scaled, fvals, rcond=None)
    if rank < len(powers):
        cond = float(svals[0] / svals[-1]) if svals[-1] > 0 else float("inf")
        raise IllConditionedBasisError("ill-conditioned basis", condition=cond)
    coef = coef / col_norms
    return {(m, ell): complex(c / radius ** (m + ell)) for (m, ell), c in zip(powers, coef)}


def _sup_oriented_fit(target, fit_grid, degree, iterations=14):
    """Total-degree fit with Lawson reweighting, keeping the best sup residual."""
    pts = fit_grid.scalars if isinstance(fit_grid, Grid) else np.asarray(fit_grid, complex).ravel()
    fvals = np.asarray(target(pts), dtype=complex)
    w = np.ones(pts.size)
    best = None
    best_sup = np.inf
    for _ in range(iterations):
        coeffs = fit_poly_coeffs(target, fit_grid, degree, total_degree=True, weights=w)
        approx = np.zeros_like(fvals)
        for (m, ell), c in coeffs.items():
            approx += c * pts**m * np.conj(pts) ** ell
        resid = np.abs(fvals - approx)
        sup = float(np.max(resid))
        if sup < best_sup:
            best, best_sup = coeffs, sup
        w = w * (resid + 1e-12)
        w = w / np.mean(w)
    return best, best_sup


def translate_sum(sigma, epsilon, A, m_cells):
    """Shallow realization of the mollified activation by translates of sigma.

    Partitions [-A, A)^2 into m_cells^2 cells; each cell contributes one
    neuron sigma(z - y_cell) weighted by the kernel mass of the cell.  The
    masses sum to 1 exactly when the kernel support sits inside the box.
    """
    A = float(A)
    eps = float(epsilon)
    if A < eps:
        raise ValueError("kernel support must fit inside the box")
    m = int(m_cells)
    sub = 4
    q = m * sub
    t = -A + (np.arange(q) + 0.5) * (2.0 * A / q)
    uu = t[:, None] + 1j * t[None, :]
    r2 = np.abs(uu / eps) ** 2
    vals = np.zeros(uu.shape)
    inside = r2 < 1.0
    vals[inside] = np.exp(1.0 / (r2[inside] - 1.0))
    cell = (2.0 * A / q) ** 2
    total = vals.sum() * cell
    weights = vals * (cell / total)
    terms = []
    side = 2.0 * A / m
    for k in range(m):
        for ell in range(m):
            mass = float(weights[k * sub : (k + 1) * sub, ell * sub : (ell + 1) * sub].sum())
            if mass == 0.0:
                continue
            y = (-A + side * k) + 1j * (-A + side * ell)
            terms.append((mass, [1.0], -y))
    return ShallowNetwork(c=0.0, terms=tuple(terms), input_dim=1)


def _rescale_shallow(net_u, center, radius):
    """Rewrite a unit-ball shallow net in u = (z - center)/radius as a net in z."""
    center = complex(center)
    terms = tuple((a, w / radius, b - complex(w[0]) * center / radius) for a, w, b in net_u.terms)
    return ShallowNetwork(c=net_u.c, terms=terms, input_dim=1)


def _measure(fn_true, fn_net, pts):
    err = np.abs(np.asarray(fn_true(pts)) - np.asarray(fn_net(pts)))
    return float(np.max(err)), float(np.mean(err))


def _require_verdict(sigma, field, config):
    if config.override_verdict:
        return
    report = classify(sigma, ClassifierConfig(seed=config.seed))
    if getattr(report, field) != YES:
        raise SynthesisRefusedError(
            f"{sigma.name}: {field} verdict is {getattr(report, field)!r}; pass override to force"
        )


def synthesize_shallow(sigma, target, domain, degree, config=None, target_name="custom", gate=True):
    """Shallow network approximating ``target`` on a disc, with certificate.

    Pipeline: least-squares polynomial fit in z, zbar (total degree), then one
    monomial extraction per significant coefficient, summed through the
    vector-space structure of shallow networks.  Certificate errors are
    measured on a held-out regular grid disjoint from the staggered fit grid.
    """
    config = config or ConstructorConfig()
    center, radius = domain
    center = complex(center)
    radius = float(radius)
    if gate:
        _require_verdict(sigma, "shallow_universal", config)
    t0 = time.time()

    fit_grid = make_grid(0.0, 1.0, config.fit_points_per_axis, staggered=True)

    def target_u(u):
        return target(center + radius * u)

    coeffs, fit_sup = _sup_oriented_fit(target_u, fit_grid, degree)

    avoid = tuple(sigma.nonsmooth_set) + tuple(sigma.discontinuity_set) + tuple(sigma.singular_points)
    search = make_grid(0.0, config.search_radius, config.search_points_per_axis, avoid=avoid, guard=0.25)

    parts = []
    failures = []
    constant = coeffs.pop((0, 0), 0.0)
    for (m, ell), c in sorted(coeffs.items()):
        if abs(c) <= config.coeff_threshold:
            continue
        try:
            theta, _ = find_active_point(sigma, m, ell, search)
            step = config.fd_step if m + ell <= 4 else config.fd_step_high
            mono = extract_monomial(sigma, MonomialRequest(m=m, ell=ell, theta=theta, fd_step=step))
            parts.append(mono.scaled(c))
        except (NoActivePointError, InactiveExpansionPointError) as exc:
            failures.append(f"({m},{ell}): {exc}")
    net_u = concat_shallow(parts + [ShallowNetwork(c=constant, terms=())]) if parts else ShallowNetwork(
        c=constant, terms=()
    )
    net = _rescale_shallow(net_u, center, radius)

    test_grid = make_grid(center, radius, config.test_points_per_axis)
    sup, l1 = _measure(target, lambda z: eval_shallow(net, sigma, z), test_grid.scalars)
    cert = ApproximationCertificate(
        target_name=target_name,
        domain=_domain_dict(center, radius, 1),
        test_grid_size=test_grid.size,
        sup_error=sup,
        l1_error=l1,
        network_size=(1, net.width),
        wall_time=time.time() - t0,
        seed=config.seed,
        config_echo={**config.echo(), "degree": degree},
        failures=tuple(failures),
        stage_errors={"fit_sup_on_fit_grid": fit_sup},
    )
    return net, cert


def _extract_real_part(sigma, config, search):
    """Shallow net ~ Re u on the unit ball: (id + conj)/2 by degree-1 extraction."""
    parts = []
    for m, ell in ((1, 0), (0, 1)):
        theta, _ = find_active_point(sigma, m, ell, search)
        mono = extract_monomial(sigma, MonomialRequest(m=m, ell=ell, theta=theta, fd_step=config.fd_step))
        parts.append(mono.scaled(0.5))
    return concat_shallow(parts)


def _extract_identity(sigma, config, search):
    """Shallow net ~ u on the unit ball, from whichever degree-1 jet is active.

    On real inputs z and conj(z) agree, which is where the identity padding
    is applied in the deep construction.
    """
    for m, ell in ((1, 0), (0, 1)):
        try:
            theta, _ = find_active_point(sigma, m, ell, search)
            mono = extract_monomial(sigma, MonomialRequest(m=m, ell=ell, theta=theta, fd_step=config.fd_step))
            return mono, (m, ell)
        except (NoActivePointError, InactiveExpansionPointError):
            continue
    raise NoActivePointError("no active point found")


def _scale_output(theta, factor):
    a, b = theta.layers[-1]
    factor = complex(factor)
    return NetworkWeights(theta.layers[:-1] + ((factor * a, factor * b),))


def _search_grid(sigma, config):
    avoid = tuple(sigma.nonsmooth_set) + tuple(sigma.discontinuity_set) + tuple(sigma.singular_points)
    return make_grid(0.0, config.search_radius, config.search_points_per_axis, avoid=avoid, guard=0.25)


def _chebyshev_relu(r, budget, max_degree=JET_LIMIT - 1):
    """Power-basis coefficients of a polynomial ~ max(0, x) on [-r, r].

    Picks the least degree whose interpolation error meets ``budget``; returns
    (coefficients, measured sup error).
    """
    mesh = np.linspace(-r, r, 2001)
    relu = np.maximum(0.0, mesh)
    best = None
    for deg in range(2, max_degree + 1):
        cheb = np.polynomial.chebyshev.Chebyshev.interpolate(
            lambda x: np.maximum(0.0, x), deg, domain=[-r, r]
        )
        err = float(np.max(np.abs(cheb(mesh) - relu)))
        if best is None or err < best[1]:
            best = (cheb, err)
        if err <= budget:
            break
    cheb, err = best
    power = np.polynomial.Polynomial.cast(cheb)
    return power.coef, err


def build_relu_c(sigma, r, eps, config=None, gate=True):
    """Depth-2 network approximating max(0, Re z) on the ball of radius ``r``.

    Composes an inner shallow approximation of Re z with an outer shallow
    realization of a real polynomial p with |max(0,x) - p(x)| <= 2*eps/3 on
    [-r, r]; the outer stage evaluates p(Re w), whose expansion in w, wbar is
    exact, through monomial extraction on the ball of radius r + 1.
    """
    config = config or ConstructorConfig()
    if gate:
        _require_verdict(sigma, "deep_universal", config)
    r = float(r)
    search = _search_grid(sigma, config)

    # inner stage: Psi ~ Re z on B_r, built on u = z / r
    psi_u = _extract_real_part(sigma, config, search)
    psi = _rescale_shallow(psi_u.scaled(r), 0.0, r)

    # outer stage: Phi ~ p(Re w) on B_{r+1}
    coef, poly_err = _chebyshev_relu(r, 2.0 * eps / 3.0)
    outer_radius = r + 1.0
    parts = []
    constant = complex(coef[0]) if len(coef) else 0.0
    for k in range(1, len(coef)):
        a_k = complex(coef[k])
        if abs(a_k) < 1e-14:
            continue
        for j in range(k + 1):
            c = a_k * math.comb(k, j) * 2.0 ** (-k) * outer_radius**k
            m, ell = j, k - j
            theta, _ = find_active_point(sigma, m, ell, search)
            step = config.fd_step if k <= 4 else config.fd_step_high
            mono = extract_monomial(sigma, MonomialRequest(m=m, ell=ell, theta=theta, fd_step=step))
            parts.append(mono.scaled(c))
    phi_u = concat_shallow(parts + [ShallowNetwork(c=constant, terms=())])
    phi = _rescale_shallow(phi_u, 0.0, outer_radius)

    return compose(phi.to_network(), psi.to_network())


def _is_exact_relu_composer(sigma):
    """True when sigma(sigma(z)) equals max(0, Re z) to round-off everywhere sampled."""
    pts = random_points(0.0, 3.0, 512, np.random.default_rng(12345))[:, 0]
    pts = np.concatenate([pts, np.linspace(-3, 3, 33) + 0j])
    try:
        vals = sigma(sigma(pts))
    except Exception:
        return False
    return bool(np.max(np.abs(vals - np.maximum(0.0, pts.real))) < 1e-14)


def _passthrough_net():
    return NetworkWeights((([[1.0]], [0.0]), ([[1.0]], [0.0])))


def _relu_surrogate(sigma, radius, eps, config, gate):
    """Depth-2 approximation of max(0, Re z), exact for self-composing activations."""
    if _is_exact_relu_composer(sigma):
        return compose(_passthrough_net(), _passthrough_net()), True
    return build_relu_c(sigma, radius, eps, config, gate=gate), False


def pad_with_identity(net, sigma, extra_layers, radius, config=None, exact_composer=False):
    """Deepen ``net`` by composing near-identity single layers onto its output.

    For activations whose self-composition is exactly max(0, Re z) the padding
    layer is sigma itself (exact on the real nonnegative range); otherwise a
    degree-1 monomial network approximating the identity on the ball covering
    the output range.
    """
    config = config or ConstructorConfig()
    if extra_layers <= 0:
        return net
    if exact_composer:
        pad = _passthrough_net()
    else:
        search = _search_grid(sigma, config)
        ident_u, _ = _extract_identity(sigma, config, search)
        pad = _rescale_shallow(ident_u.scaled(radius), 0.0, radius).to_network()
    for _ in range(extra_layers):
        net = compose(pad, net)
    return net


def _ridge_parameters(rng, count, d, radius, bias_scale):
    g = rng.standard_normal((count, 2 * d))
    g /= np.linalg.norm(g, axis=1, keepdims=True)
    scales = rng.uniform(0.5, 2.0, size=count) / max(radius, 1e-9)
    beta = g * scales[:, None]
    gamma = rng.uniform(-1.0, 1.0, size=count) * bias_scale
    w = beta[:, :d] - 1j * beta[:, d:]
    return w, gamma


def _relu_feature_matrix(w, gamma, pts):
    pre = (pts @ w.T).real + gamma
    return np.maximum(0.0, pre)


def _refit_design(features, fvals, lawson=0):
    """Coefficients (constant first) fitting ``fvals``; optional sup-oriented passes."""
    design = np.concatenate([np.ones((features.shape[0], 1)), features], axis=1)
    coef, *_ = np.linalg.lstsq(design, fvals, rcond=None)
    resid = np.abs(fvals - design @ coef)
    best, best_sup = coef, float(np.max(resid))
    w = np.ones(fvals.size)
    for _ in range(lawson):
        w = w * (resid + 1e-12)
        w = w / np.mean(w)
        root = np.sqrt(w)
        coef, *_ = np.linalg.lstsq(design * root[:, None], fvals * root, rcond=None)
        resid = np.abs(fvals - design @ coef)
        sup = float(np.max(resid))
        if sup < best_sup:
            best, best_sup = coef, sup
    return best, best_sup


def synthesize_deep(sigma, target, d, L, domain, config=None, target_name="custom", gate=True):
    """Network with exactly ``L`` hidden layers approximating ``target`` on a ball.

    The depth-2 real-ReLU surrogate (identity-padded up to depth L) is
    substituted into the ridges of a real one-hidden-layer fit of the target;
    output coefficients are then refit against the actual substituted
    features, which absorbs the surrogate's error.
    """
    config = config or ConstructorConfig()
    if L < 2:
        raise ValueError("deep synthesis needs at least two hidden layers")
    if gate:
        _require_verdict(sigma, "deep_universal", config)
    center, radius = domain
    center = np.atleast_1d(np.asarray(center, dtype=complex))
    if center.shape[0] != d:
        center = np.full(d, complex(center[0]))
    radius = float(radius)
    t0 = time.time()
    rng = np.random.default_rng(config.seed)
    stage_errors = {}

    if target_name == "relu_c" and d == 1:
        # the target is the pivot function itself: deepen the surrogate only
        rho_hat, exact = _relu_surrogate(sigma, radius, config.relu_eps, config, gate=False)
        net = pad_with_identity(rho_hat, sigma, L - 2, radius + 1.0, config, exact_composer=exact)
        test_grid = make_grid(center, radius, config.test_points_per_axis)
        sup, l1 = _measure(target, lambda z: eval_network(net, sigma, z), test_grid.scalars)
        cert = ApproximationCertificate(
            target_name=target_name,
            domain=_domain_dict(center, radius, d),
            test_grid_size=test_grid.size,
            sup_error=sup,
            l1_error=l1,
            network_size=(net.hidden_layers, net.total_neurons),
            wall_time=time.time() - t0,
            seed=config.seed,
            config_echo={**config.echo(), "layers": L},
            stage_errors=stage_errors,
        )
        return net, cert

    # dense block algebra keeps widths modest: few ridges, lean surrogate
    rho_hat, exact = _relu_surrogate(sigma, 1.3, config.deep_relu_eps, config, gate=False)
    rho_deep = pad_with_identity(rho_hat, sigma, L - 2, 1.3, config, exact_composer=exact)
    width = config.deep_ridge_width if not exact else config.real_stage_width

    n_fit = max(config.ridge_fit_points, 5 * width)
    fit_pts = random_points(center, radius, n_fit, rng, d=d)
    fvals = np.asarray(target(fit_pts), dtype=complex)
    w, gamma = _ridge_parameters(rng, width, d, radius, config.ridge_bias_scale)
    shifted = fit_pts - center
    # stage-1 diagnostic: ideal real-ReLU ridge fit
    ideal = _relu_feature_matrix(w, gamma, shifted)
    _, stage1_sup = _refit_design(ideal, fvals)
    stage_errors["stage1_sup"] = stage1_sup

    pre = shifted @ w.T + gamma
    s = 1.05 * np.maximum(np.max(np.abs(pre), axis=0), 1e-9)
    scaled_pre = pre / s
    # all ridges share the surrogate: evaluate it once on the stacked pre-activations
    flat = np.asarray(eval_network(rho_deep, sigma, scaled_pre.T.reshape(-1)), dtype=complex)
    features = flat.reshape(width, n_fit).T * s
    coef, refit_sup = _refit_design(features, fvals, lawson=4)
    stage_errors["refit_sup_on_fit_points"] = refit_sup
    ridge_nets = []
    for j in range(width):
        ridge = lift_affine(rho_deep, w[j] / s[j], gamma[j] / s[j] - (w[j] @ center) / s[j])
        ridge_nets.append(_scale_output(ridge, s[j]))
    net = linear_combine_many(ridge_nets, coef[1:], constant=coef[0])

    per_axis = config.test_points_per_axis if d == 1 else 7
    test_grid = make_grid(center, radius, per_axis)
    sup, l1 = _measure(target, lambda z: eval_network(net, sigma, z), test_grid.points if d > 1 else test_grid.scalars)
    cert = ApproximationCertificate(
        target_name=target_name,
        domain=_domain_dict(center, radius, d),
        test_grid_size=test_grid.size,
        sup_error=sup,
        l1_error=l1,
        network_size=(net.hidden_layers, net.total_neurons),
        wall_time=time.time() - t0,
        seed=config.seed,
        config_echo={**config.echo(), "layers": L},
        stage_errors=stage_errors,
    )
    return net, cert


def lift_dimension(sigma, target, domain, d, config=None, target_name="custom", gate=True):
    """Shallow d-input network via ridge reduction to the real-part ReLU.

    A real one-hidden-layer ReLU fit supplies ridge directions; each real
    ridge becomes a complex linear form, the ReLU is replaced by a shallow
    approximant built from sigma, and the outer coefficients are refit on the
    substituted features.
    """
    config = config or ConstructorConfig()
    if d < 2:
        raise ValueError("dimension lifting targets d >= 2")
    if gate:
        _require_verdict(sigma, "shallow_universal", config)
    center, radius = domain
    center = np.atleast_1d(np.asarray(center, dtype=complex))
    if center.shape[0] != d:
        center = np.full(d, complex(center[0]))
    radius = float(radius)
    t0 = time.time()
    rng = np.random.default_rng(config.seed)

    # psi ~ max(0, Re zeta) on the unit ball, by seeded random features of sigma
    psi_grid = make_grid(0.0, 1.1, 33, staggered=True)
    u_k = random_points(0.0, 2.0, config.psi_width, rng)[:, 0]
    c_k = random_points(0.0, 2.0, config.psi_width, rng)[:, 0]
    feats = sigma.raw(psi_grid.scalars[:, None] * u_k[None, :] + c_k[None, :])
    rho_vals = np.maximum(0.0, psi_grid.scalars.real) + 0j
    alpha, psi_sup = _refit_design(feats, rho_vals)
    psi = ShallowNetwork(
        c=alpha[0], terms=tuple((alpha[1 + k], [u_k[k]], c_k[k]) for k in range(config.psi_width))
    )

    n_fit = max(config.ridge_fit_points, 5 * config.real_stage_width)
    fit_pts = random_points(center, radius, n_fit, rng, d=d)
    fvals = np.asarray(target(fit_pts), dtype=complex)
    w, gamma = _ridge_parameters(rng, config.real_stage_width, d, radius, config.ridge_bias_scale)
    shifted = fit_pts - center
    ideal = _relu_feature_matrix(w, gamma, shifted)
    _, stage1_sup = _refit_design(ideal, fvals)

    pre = shifted @ w.T + gamma
    s = 1.05 * np.maximum(np.max(np.abs(pre), axis=0), 1e-9)
    # substituted ridge features: s_j * psi((gamma_j + w_j . (z - center)) / s_j)
    scaled_pre = pre / s
    psi_w = np.array([t[1][0] for t in psi.terms])
    psi_b = np.array([t[2] for t in psi.terms])
    psi_a = np.array([t[0] for t in psi.terms])
    features = np.empty((n_fit, config.real_stage_width), dtype=complex)
    for j in range(config.real_stage_width):
        vals = sigma.raw(scaled_pre[:, j : j + 1] * psi_w[None, :] + psi_b[None, :])
        features[:, j] = s[j] * (vals @ psi_a + psi.c)
    coef, refit_sup = _refit_design(features, fvals, lawson=8)

    terms = []
    for j in range(config.real_stage_width):
        base_bias = gamma[j] / s[j] - (w[j] @ center) / s[j]
        for k in range(config.psi_width):
            terms.append((coef[1 + j] * s[j] * psi_a[k], (psi_w[k] / s[j]) * w[j], psi_b[k] + psi_w[k] * base_bias))
    constant = coef[0] + complex(np.sum(coef[1:] * s * psi.c))
    net = ShallowNetwork(c=constant, terms=tuple(terms), input_dim=d)

    test_grid = make_grid(center, radius, 7)
    sup, l1 = _measure(target, lambda z: eval_shallow(net, sigma, z), test_grid.points)
    cert = ApproximationCertificate(
        target_name=target_name,
        domain=_domain_dict(center, radius, d),
        test_grid_size=test_grid.size,
        sup_error=sup,
        l1_error=l1,
        network_size=(1, net.width),
        wall_time=time.time() - t0,
        seed=config.seed,
        config_echo=config.echo(),
        stage_errors={"stage1_sup": stage1_sup, "psi_sup": psi_sup, "refit_sup_on_fit_points": refit_sup},
    )
    return net, cert
