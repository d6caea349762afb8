import numpy as np
import pytest

from hgverify import (
    Hypergraph,
    QubitCapError,
    StabilizerTerm,
    apply_generalized_cz,
    apply_pauli,
    apply_pauli_noise,
    basis_state,
    build_hypergraph_state,
    fidelity_with,
    measure_pauli,
    neighborhood,
    pauli_expectation,
    plus_state,
    state_fidelity,
)
from hgverify.oracle import depolarizing_like_channel, pure_density, rho_fidelity_with
from hgverify.rng import stream

INV_SQRT2 = 2.0**-0.5


class TestBuild:
    def test_plus_state_single_qubit(self):
        g = Hypergraph(1)
        sv = build_hypergraph_state(g)
        assert np.allclose(sv.amps, [INV_SQRT2, INV_SQRT2])

    def test_one_cz_edge(self, edge2):
        sv = build_hypergraph_state(edge2)
        assert np.allclose(sv.amps, [0.5, 0.5, 0.5, -0.5])

    def test_single_ccz(self, triangle):
        sv = build_hypergraph_state(triangle)
        expected = np.full(8, 8.0**-0.5)
        expected[0b111] *= -1
        assert np.allclose(sv.amps, expected)

    def test_amplitudes_are_signed_uniform(self, mixed4):
        sv = build_hypergraph_state(mixed4)
        assert np.allclose(np.abs(sv.amps), 2.0 ** (-mixed4.n / 2))
        assert np.allclose(sv.amps.imag, 0.0)

    def test_cap(self):
        with pytest.raises(QubitCapError):
            build_hypergraph_state(Hypergraph(5, [(1, 2)]), cap=4)

    def test_vertex_relabeling_permutes_amplitudes(self):
        # Swapping vertices 1 and 3 of a 3-vertex graph permutes amplitude
        # indices by the matching bit permutation.
        g = Hypergraph(3, [(1, 2), (2, 3), (1, 2, 3)])
        from hgverify import relabel

        h = relabel(g, {1: 3, 2: 2, 3: 1})
        sv_g = build_hypergraph_state(g)
        sv_h = build_hypergraph_state(h)
        for idx in range(8):
            b1, b2, b3 = (idx >> 2) & 1, (idx >> 1) & 1, idx & 1
            swapped = (b3 << 2) | (b2 << 1) | b1
            assert sv_h.amps[swapped] == pytest.approx(sv_g.amps[idx])


class TestGeneralizedCZ:
    def test_phase_on_all_ones(self):
        sv = basis_state(2, 0b11)
        apply_generalized_cz(sv, (1, 2))
        assert sv.amps[0b11] == -1.0

    def test_no_phase_otherwise(self):
        sv = basis_state(3, 0b110)
        before = sv.amps.copy()
        apply_generalized_cz(sv, (1, 2, 3))
        assert np.array_equal(sv.amps, before)

    def test_involution(self, triangle):
        rng = np.random.default_rng(11)
        amps = rng.normal(size=8) + 1j * rng.normal(size=8)
        amps /= np.linalg.norm(amps)
        sv = build_hypergraph_state(triangle)
        sv.amps[:] = amps
        apply_generalized_cz(sv, (1, 2, 3))
        apply_generalized_cz(sv, (1, 2, 3))
        assert np.allclose(sv.amps, amps)

    def test_vertex_out_of_range(self):
        with pytest.raises(ValueError):
            apply_generalized_cz(plus_state(2), (1, 3))


class TestMeasurement:
    def test_z_on_zero_is_deterministic(self):
        sv = basis_state(1, 0)
        rec, after = measure_pauli(sv, 1, "Z", stream(1, "m"))
        assert rec.outcome == 1
        assert np.allclose(after.amps, [1, 0])

    def test_x_on_plus_is_deterministic(self):
        rec, _ = measure_pauli(plus_state(1), 1, "X", stream(2, "m"))
        assert rec.outcome == 1

    def test_x_on_zero_unbiased(self):
        # 10^4 shots, binomial 3-sigma band around 1/2.
        rng = stream(3, "m")
        shots = 10_000
        ups = sum(measure_pauli(basis_state(1, 0), 1, "X", rng)[0].outcome == 1 for _ in range(shots))
        sigma = (0.25 / shots) ** 0.5
        assert abs(ups / shots - 0.5) < 3 * sigma

    def test_x_collapse_leaves_eigenstate(self):
        rng = stream(4, "m")
        rec, after = measure_pauli(basis_state(1, 0), 1, "X", rng)
        target = np.array([1, rec.outcome]) * INV_SQRT2
        assert np.allclose(after.amps, target)

    def test_collapse_renormalizes(self, triangle):
        sv = build_hypergraph_state(triangle)
        rng = stream(5, "m")
        for qubit in (1, 2, 3):
            _, sv = measure_pauli(sv, qubit, "Z", rng)
            assert sv.norm() == pytest.approx(1.0, abs=1e-9)

    def test_rejects_bad_basis(self):
        with pytest.raises(ValueError):
            measure_pauli(plus_state(1), 1, "Y", stream(6, "m"))

    def test_rejects_corrupted_norm(self):
        sv = basis_state(1, 0)
        sv.amps *= 0.0
        with pytest.raises(RuntimeError):
            measure_pauli(sv, 1, "Z", stream(7, "m"))


class TestPauliExpectation:
    def test_x_on_plus(self):
        term = StabilizerTerm(alpha=0, x_vertex=1, z_support=frozenset())
        assert pauli_expectation(plus_state(1), term) == pytest.approx(1.0)

    def test_x1z2_on_ccz_state(self, triangle):
        # Frozen from the dense oracle: <+++|CCZ X1 Z2 CCZ|+++> = 1/2.
        sv = build_hypergraph_state(triangle)
        term = StabilizerTerm(alpha=0, x_vertex=1, z_support=frozenset({2}))
        assert pauli_expectation(sv, term) == pytest.approx(0.5, abs=1e-12)

    def test_negative_x1z2z3_on_ccz_state(self, triangle):
        # Frozen from the dense oracle: the signed term averages to +1/2, so
        # the four r=1 terms average to 1/2 and the test passes at 3/4.
        sv = build_hypergraph_state(triangle)
        term = StabilizerTerm(alpha=1, x_vertex=1, z_support=frozenset({2, 3}))
        assert pauli_expectation(sv, term) == pytest.approx(0.5, abs=1e-12)

    def test_index_out_of_range(self):
        term = StabilizerTerm(alpha=0, x_vertex=3, z_support=frozenset())
        with pytest.raises(ValueError):
            pauli_expectation(plus_state(2), term)


class TestStabilizerAction:
    @pytest.mark.parametrize(
        "edges,n",
        [
            ([(1, 2)], 2),
            ([(1, 2, 3)], 3),
            ([(1, 2), (2, 3)], 3),
            ([(1, 2), (2, 3, 4), (1, 3, 4)], 4),
            ([(1, 2, 3), (3, 4, 5), (1, 5), (2, 4)], 5),
        ],
    )
    def test_generators_fix_the_state(self, edges, n):
        # Apply X_i, the 2-edge Z's, and the 3-edge CZ's directly; the state
        # must be unchanged within 1e-9 for every vertex.
        g = Hypergraph(n, edges)
        sv = build_hypergraph_state(g)
        for i in range(1, n + 1):
            nb = neighborhood(g, i)
            work = sv.copy()
            apply_pauli(work, i, "X")
            for j in nb.z_neighbors:
                apply_pauli(work, j, "Z")
            for pair in nb.cz_neighbors:
                apply_generalized_cz(work, pair)
            assert np.allclose(work.amps, sv.amps, atol=1e-9)


class TestFidelity:
    def test_self_fidelity(self, mixed4):
        sv = build_hypergraph_state(mixed4)
        assert fidelity_with(sv, mixed4) == pytest.approx(1.0)

    def test_zero_state_overlap(self, triangle):
        assert fidelity_with(basis_state(3, 0), triangle) == pytest.approx(1 / 8)

    def test_z1_on_graph_state_is_orthogonal(self, edge2):
        # Frozen from the dense oracle: Z1 anticommutes with the stabilizer
        # X1 Z2, so the overlap vanishes exactly.
        sv = build_hypergraph_state(edge2)
        apply_pauli(sv, 1, "Z")
        assert fidelity_with(sv, edge2) == pytest.approx(0.0, abs=1e-12)

    def test_dimension_mismatch(self, triangle):
        with pytest.raises(ValueError):
            fidelity_with(plus_state(2), triangle)


class TestPauliNoise:
    def test_zero_prob_is_identity(self, triangle):
        sv = build_hypergraph_state(triangle)
        before = sv.amps.copy()
        apply_pauli_noise(sv, 0.0, stream(8, "noise"))
        assert np.array_equal(sv.amps, before)

    def test_full_prob_single_qubit_cases(self):
        # p=1 on |0> must land on X|0>, Y|0>, or Z|0>, roughly uniformly.
        hits = {"x": 0, "y": 0, "z": 0}
        rng = stream(9, "noise")
        for _ in range(3000):
            sv = apply_pauli_noise(basis_state(1, 0), 1.0, rng)
            if abs(sv.amps[1] - 1.0) < 1e-12:
                hits["x"] += 1
            elif abs(sv.amps[1] - 1j) < 1e-12:
                hits["y"] += 1
            else:
                assert abs(sv.amps[0] - 1.0) < 1e-12
                hits["z"] += 1
        for count in hits.values():
            assert abs(count - 1000) < 3 * (3000 * (1 / 3) * (2 / 3)) ** 0.5

    def test_ensemble_fidelity_matches_channel_oracle(self, triangle):
        # Mean fidelity over pure-state noise draws vs the exact channel.
        p = 0.05
        exact = rho_fidelity_with(
            depolarizing_like_channel(pure_density(build_hypergraph_state(triangle)), 3, p),
            triangle,
        )
        ideal = build_hypergraph_state(triangle)
        rng = stream(10, "noise")
        draws = 10_000
        fids = np.array([
            state_fidelity(ideal, apply_pauli_noise(ideal.copy(), p, rng)) for _ in range(draws)
        ])
        sigma = fids.std(ddof=1) / draws**0.5
        assert abs(fids.mean() - exact) < 3 * sigma

    def test_bad_probability(self):
        with pytest.raises(ValueError):
            apply_pauli_noise(plus_state(1), 1.5, stream(11, "noise"))


def test_dump_lines_roundtrip(triangle):
    sv = build_hypergraph_state(triangle)
    lines = list(sv.dump_lines())
    assert len(lines) == 8
    bits, real, imag = lines[7].split()
    assert bits == "111"
    assert float(real) == pytest.approx(-(8.0**-0.5))
    assert float(imag) == 0.0
