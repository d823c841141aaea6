import math

import numpy as np
import pytest

import jacobi_bc as jbc


def symmetric2():
    return jbc.JacobiMatrix([1.0], [0.0, 0.0])


def test_spectral_data_of_symmetric_fixture():
    sd = jbc.spectral_decomposition(symmetric2())
    assert np.allclose(sd.lambdas, [-1.0, 1.0], atol=1e-15)
    assert np.allclose(sd.rhos, [2.0, 2.0], atol=1e-15)
    assert np.allclose(sd.phi[1], [-1.0, 1.0])


def test_spectral_data_matches_numpy():
    J = jbc.random_jacobi(8, 3)
    sd = jbc.spectral_decomposition(J)
    assert np.allclose(sd.lambdas, np.linalg.eigvalsh(J.dense()), atol=1e-10)
    assert abs(sum(1.0 / sd.rhos) - 1.0) < 1e-12


def test_gram_matrix():
    G = jbc.gram_matrix(jbc.spectral_decomposition(symmetric2()), 1.0)
    assert G.g[0, 0] == pytest.approx((math.sinh(2.0) / 2 - 1) / 2, rel=1e-14)
    assert np.allclose(G.g, G.g.T)


def test_connecting_kernel_forms_agree():
    sd = jbc.spectral_decomposition(jbc.random_jacobi(4, 17))
    for t, s in [(0.1, 0.7), (0.5, 0.5), (0.9, 0.2)]:
        assert abs(jbc.ct_kernel(sd, 1.0, t, s) - jbc.ct_kernel_dynamic(sd, 1.0, t, s)) < 1e-10


def test_reconstruction_round_trip():
    J = jbc.random_jacobi(4, 5)
    sd = jbc.spectral_decomposition(J)
    rec = jbc.reconstruct_exact(sd.lambdas, 1.0 / sd.rhos, 1.0)
    assert np.allclose(rec.b, J.b, atol=1e-8)
    assert np.allclose(rec.a, J.a, atol=1e-8)

    single = jbc.spectral_decomposition(jbc.JacobiMatrix([], [5.0]))
    r = jbc.sample_response(single, 1.0, 4001)
    assert abs(jbc.reconstruct(r, 1).b[0] - 5.0) < 5e-3


def test_rank_error():
    sd = jbc.spectral_decomposition(symmetric2())
    with pytest.raises(jbc.RankError):
        jbc.reconstruct(jbc.sample_response(sd, 1.0, 2001), 4)


def test_domain_error():
    with pytest.raises(jbc.DomainError):
        jbc.JacobiMatrix([-1.0], [0.0, 0.0])
    with pytest.raises(jbc.Error):
        jbc.JacobiMatrix([], [])


def test_hermite_biehler_function():
    sd = jbc.spectral_decomposition(symmetric2())
    E = jbc.hermite_biehler_E(sd)
    z = 0.3 + 1.1j
    assert abs(E(z) - math.sqrt(math.pi / 2) * (1 - 1j * z) ** 2) < 1e-14
    assert abs(E(z)) > abs(E(z.conjugate()))
    assert jbc.count_zeros_upper_half_plane(E) == 0


def test_reproducing_kernel_and_constants():
    sd = jbc.spectral_decomposition(jbc.random_jacobi(5, 2))
    rng = np.random.default_rng(0)
    G = jbc.BElement(sd, rng.normal(size=5) + 1j * rng.normal(size=5))
    z = 0.4 - 0.8j
    K = jbc.reproducing_kernel(sd, z)
    assert abs(jbc.bn_inner(G, K) - G(z)) < 1e-10 * max(1.0, abs(G(z)))

    E = jbc.hermite_biehler_E(sd)
    assert jbc.be_inner(G, G, E).real == pytest.approx(jbc.bn_norm(G) ** 2 / math.pi, rel=1e-8)
    k = jbc.measure_kappas(sd, 1)
    assert k.kappa_E.real == pytest.approx(math.pi, rel=1e-8)
    assert k.kappa_B.real == pytest.approx(1 / math.pi, rel=1e-8)


def test_verification_report():
    report = jbc.run_verification(jbc.random_jacobi(4, 1))
    assert report.passed(), str(report)
    assert len(report.checks) > 0
    assert jbc.verify_axioms(jbc.spectral_decomposition(jbc.random_jacobi(6, 9))).passed()
