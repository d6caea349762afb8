import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hgverify import (
    OutcomeDistribution,
    basis_state,
    build_hypergraph_state,
    exact_distribution,
    l1_distance,
    parse_bases,
    plus_state,
    product_of_marginals,
    sample_outcomes,
    uniform_distribution,
)
from hgverify.oracle import OracleCapError, depolarizing_like_channel, pure_density, rho_fidelity_with
from hgverify.rng import stream


def dist(bases, probs):
    return OutcomeDistribution(bases=tuple(bases), probs=np.asarray(probs, dtype=float))


class TestExactDistribution:
    def test_zero_state_z(self):
        d = exact_distribution(basis_state(1, 0), ("Z",))
        assert np.allclose(d.probs, [1.0, 0.0])

    def test_plus_plus_zz_uniform(self):
        d = exact_distribution(plus_state(2), ("Z", "Z"))
        assert np.allclose(d.probs, 0.25)

    def test_triangle_xxx_frozen(self, triangle):
        # Frozen from the dense oracle: 9/16 on 000, 1/16 elsewhere.
        d = exact_distribution(build_hypergraph_state(triangle), ("X", "X", "X"))
        assert np.allclose(d.probs, [9 / 16] + [1 / 16] * 7, atol=1e-12)
        assert d.probs.sum() == pytest.approx(1.0, abs=1e-9)

    def test_rho_path_matches_pure_path(self, triangle):
        sv = build_hypergraph_state(triangle)
        pure = exact_distribution(sv, ("X", "Z", "X"))
        mixed = exact_distribution(pure_density(sv), ("X", "Z", "X"))
        assert np.allclose(pure.probs, mixed.probs, atol=1e-12)

    def test_sampling_cross_check(self, triangle):
        # Sequential collapsing measurements agree with the enumeration path.
        sv = build_hypergraph_state(triangle)
        bases = ("X", "X", "X")
        exact = exact_distribution(sv, bases)
        shots = 10_000
        counts = sample_outcomes(sv, bases, shots, stream(14, "shots"))
        for z in range(8):
            p = exact.probs[z]
            sigma = max((p * (1 - p) / shots) ** 0.5, 1 / shots)
            assert abs(counts[z] / shots - p) < 4 * sigma

    def test_cap(self):
        with pytest.raises(OracleCapError):
            exact_distribution(plus_state(8), ("Z",) * 8)

    def test_length_mismatch(self):
        with pytest.raises(ValueError):
            exact_distribution(plus_state(2), ("Z",))

    def test_bad_basis(self):
        with pytest.raises(ValueError):
            exact_distribution(plus_state(1), ("Y",))


class TestL1:
    def test_identical(self):
        d = dist("ZZ", [0.25] * 4)
        assert l1_distance(d, d) == 0.0

    def test_disjoint_point_masses(self):
        a = dist("Z", [1.0, 0.0])
        b = dist("Z", [0.0, 1.0])
        assert l1_distance(a, b) == pytest.approx(2.0)

    def test_basis_mismatch(self):
        with pytest.raises(ValueError):
            l1_distance(dist("Z", [1, 0]), dist("X", [1, 0]))

    @given(st.integers(0, 10**6), st.integers(0, 10**6), st.integers(0, 10**6))
    @settings(max_examples=40)
    def test_metric_properties(self, a, b, c):
        rng = np.random.default_rng([a, b, c])
        raw = rng.random((3, 4))
        p, q, r = (dist("ZZ", row / row.sum()) for row in raw)
        assert l1_distance(p, q) == pytest.approx(l1_distance(q, p))
        assert l1_distance(p, r) <= l1_distance(p, q) + l1_distance(q, r) + 1e-12


class TestBaselines:
    def test_uniform(self):
        d = uniform_distribution(("X", "Z"))
        assert np.allclose(d.probs, 0.25)

    def test_marginal_product_of_product_state_is_exact(self):
        d = exact_distribution(plus_state(2), ("Z", "Z"))
        assert l1_distance(d, product_of_marginals(d)) == pytest.approx(0.0, abs=1e-12)

    def test_marginal_product_normalized(self, triangle):
        d = exact_distribution(build_hypergraph_state(triangle), ("X", "X", "X"))
        pm = product_of_marginals(d)
        assert pm.probs.sum() == pytest.approx(1.0, abs=1e-9)
        assert l1_distance(d, pm) > 0.1  # the CCZ state is genuinely correlated


class TestTraceDistanceBound:
    @pytest.mark.parametrize("noise", [0.001, 0.003, 0.01, 0.05])
    @pytest.mark.parametrize("bases", ["XXX", "XZX", "ZZZ"])
    def test_l1_below_2_sqrt_infidelity(self, triangle, noise, bases):
        # Operationalizes the surrogate argument: measurement statistics of a
        # verified state are L1-close to ideal, within 2*sqrt(1-F).
        sv = build_hypergraph_state(triangle)
        rho = depolarizing_like_channel(pure_density(sv), 3, noise)
        fid = rho_fidelity_with(rho, triangle)
        basis_tuple = parse_bases(bases, 3)
        gap = l1_distance(exact_distribution(sv, basis_tuple), exact_distribution(rho, basis_tuple))
        assert gap <= 2 * np.sqrt(1 - fid) + 1e-12


def test_parse_bases_validation():
    assert parse_bases("xzx", 3) == ("X", "Z", "X")
    with pytest.raises(ValueError):
        parse_bases("XY", 2)
    with pytest.raises(ValueError):
        parse_bases("XX", 3)
