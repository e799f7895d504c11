import numpy as np
import pytest

from cvnnuniv.activations import by_name
from cvnnuniv.errors import StencilSingularityError
from cvnnuniv.grids import random_points
from cvnnuniv.wirtinger import (
    jet_entry_at,
    laplacian_power,
    make_mollifier,
    mollify,
    smooth_view,
    wirtinger_jet,
)


def zzbar(z):
    return z * np.conj(z)


def zzbar_jet_exact(theta, m, ell):
    # d^m dbar^l (z zbar): nonzero only for m, l <= 1
    table = {
        (0, 0): theta * np.conj(theta),
        (1, 0): np.conj(theta),
        (0, 1): theta,
        (1, 1): 1.0,
    }
    return table.get((m, ell), 0.0)


def test_jet_basic_monomials():
    j = wirtinger_jet(lambda z: z, 0.3 + 0.7j, 1, 1)
    assert j[(1, 0)] == pytest.approx(1.0, abs=1e-10)
    assert j[(0, 1)] == pytest.approx(0.0, abs=1e-10)
    j = wirtinger_jet(zzbar, 1.7 - 0.3j, 1, 1)
    assert j[(1, 1)] == pytest.approx(1.0, abs=1e-9)
    j = wirtinger_jet(lambda z: z**2 * np.conj(z) ** 3, 1.0 + 0j, 2, 3)
    assert j[(2, 3)] == pytest.approx(12.0, rel=1e-6)
    j = wirtinger_jet(np.sin, 0j, 1, 1)
    assert j[(1, 0)] == pytest.approx(1.0, abs=1e-10)
    assert j[(0, 1)] == pytest.approx(0.0, abs=1e-10)


def test_jet_zero_entry_is_direct_evaluation():
    z0 = 0.4 - 1.1j
    j = wirtinger_jet(np.sin, z0, 2, 2)
    assert j[(0, 0)] == complex(np.sin(z0))


def test_laplacian_powers():
    assert laplacian_power(zzbar, 1, 0.6 + 0.1j) == pytest.approx(4.0, rel=1e-9)
    assert laplacian_power(lambda z: zzbar(z) ** 2, 2, -0.4 + 0.9j) == pytest.approx(64.0, rel=1e-8)
    assert laplacian_power(lambda z: z.real + 0j, 1, 1 + 1j) == pytest.approx(0.0, abs=1e-9)


def test_stencil_singularity_detected():
    def bad(z):
        out = np.asarray(1.0 / z, dtype=complex)
        return out

    with pytest.raises(StencilSingularityError, match="stencil hit singularity"):
        wirtinger_jet(bad, 0.0, 1, 1, step=0.5)


def test_monomial_reproduction_identity():
    # jets in the dilation parameter w of phi(w z + theta) reproduce
    # z^m zbar^l (d^m dbar^l phi)(theta)
    theta = 0.3 + 0.2j
    zs = random_points(0.0, 1.0, 12, np.random.default_rng(3))[:, 0]
    moll = mollify(by_name("ratio"), make_mollifier(0.05))
    cases = [
        (zzbar, lambda m, l: zzbar_jet_exact(theta, m, l)),
        (np.sin, None),
        (moll, None),
    ]
    for phi, exact in cases:
        ref = wirtinger_jet(phi, theta, 2, 2, step=1e-2)
        scale = max(1.0, max(abs(v) for v in ref.values.values()))
        for m in range(3):
            for ell in range(3):
                want = np.asarray([z**m * np.conj(z) ** ell for z in zs]) * ref[(m, ell)]
                got = np.asarray(
                    [wirtinger_jet(lambda w, z=z: phi(w * z + theta), 0.0, 2, 2, step=1e-2)[(m, ell)] for z in zs]
                )
                assert np.max(np.abs(got - want)) <= 1e-4 * scale, (getattr(phi, "__name__", "moll"), m, ell)
                if exact is not None:
                    assert abs(ref[(m, ell)] - exact(m, ell)) <= 1e-4 * scale


def test_affine_chain_rule():
    # Delta^m [g(a z + b)] = |a|^(2m) (Delta^m g)(a z + b)
    rng = np.random.default_rng(4)
    for g in (lambda z: zzbar(z) ** 2, np.sin):
        for _ in range(5):
            a, b = random_points(0.0, 1.5, 2, rng)[:, 0]
            z0 = complex(random_points(0.0, 1.0, 1, rng)[0, 0])
            for m in (1, 2):
                lhs = laplacian_power(lambda z: g(a * z + b), m, z0)
                rhs = abs(a) ** (2 * m) * laplacian_power(g, m, a * z0 + b)
                assert abs(lhs - rhs) <= 1e-3 * max(1.0, abs(rhs))


def test_conjugation_symmetry():
    # jet of conj(f) equals the conjugated, transposed jet of f
    f = lambda z: np.sin(z) + 0.3 * z * np.conj(z) ** 2
    fbar = lambda z: np.conj(f(z))
    z0 = 0.7 - 0.4j
    jf = wirtinger_jet(f, z0, 2, 2)
    jb = wirtinger_jet(fbar, z0, 2, 2)
    for m in range(3):
        for ell in range(3):
            assert jb[(m, ell)] == pytest.approx(np.conj(jf[(ell, m)]), abs=1e-6)


def test_holomorphic_jets_vanish():
    rng = np.random.default_rng(5)
    pts = random_points(0.0, 1.2, 20, rng)[:, 0]
    for name in ("sin", "sinh", "tanh"):
        spec = by_name(name)
        use = pts
        if name == "tanh":
            use = pts[np.abs(pts.imag) < 0.6]  # keep stencils clear of the poles
        for z0 in use:
            j = wirtinger_jet(spec.raw, complex(z0), 2, 2)
            for m in range(3):
                for ell in range(1, 3):
                    assert abs(j[(m, ell)]) <= 1e-6, (name, m, ell)


def test_mollifier_normalization_and_support():
    spec = make_mollifier(0.05)
    assert spec.weights.sum() == pytest.approx(1.0, abs=1e-6)
    assert np.all(np.abs(spec.offsets) < 0.05)


def test_mollify_preserves_affine():
    affine = by_name("poly_zzbar")  # z + zbar = 2 Re z is affine in (x, y)
    f = mollify(affine, make_mollifier(0.1))
    zs = random_points(0.0, 2.0, 50, np.random.default_rng(6))[:, 0]
    assert np.max(np.abs(f(zs) - affine(zs))) <= 1e-12


def test_mollify_rho_c():
    rho = by_name("rho_c")
    eps = 0.05
    f = mollify(rho, make_mollifier(eps))
    # far from the crease the kernel sees only the affine part
    assert f(0.5 + 0.3j) == pytest.approx(0.5, abs=1e-12)
    # at the crease the value sits strictly inside (0, eps)
    v = complex(f(0.0))
    assert 0.0 < v.real < eps and abs(v.imag) < 1e-12
    # high-resolution quadrature oracle pins the value
    oracle = complex(mollify(rho, make_mollifier(eps, 512))(0.0))
    assert v.real == pytest.approx(oracle.real, rel=1e-2)


def test_smooth_view_passthrough():
    sin = by_name("sin")
    zs = np.linspace(-1, 1, 9) + 0.3j
    assert np.array_equal(smooth_view(sin)(zs), sin.raw(zs))


def test_jet_entry_at_matches_pointwise():
    f = lambda z: np.sin(z) + z * np.conj(z)
    zs = random_points(0.0, 1.5, 7, np.random.default_rng(8))[:, 0]
    batch = jet_entry_at(f, zs, 1, 1, step=0.01)
    single = np.array([wirtinger_jet(f, complex(z), 1, 1, step=0.01)[(1, 1)] for z in zs])
    assert np.max(np.abs(batch - single)) < 1e-10
