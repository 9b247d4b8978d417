import json
import math
from itertools import combinations, permutations

import numpy as np
import pytest

from simplicial_hopfield import (
    CONDITION_NAMES,
    DilutionSpec,
    FunctionalComplex,
    build_k_skeleton,
    complex_from_json,
    complex_to_json,
    condition_spec,
    downward_closure,
    enumerate_faces,
    functional_euler_characteristic,
    hebbian_weights,
    random_binary_patterns,
    sample_diluted,
)
from simplicial_hopfield.complexes import unrank_colex


class TestSkeleton:
    def test_six_vertex_three_skeleton_has_fifty_simplices(self):
        cx = build_k_skeleton(6, 3)
        assert cx.counts() == {1: 15, 2: 20, 3: 15}
        assert len(cx) == 50

    def test_four_vertex_pairwise_network(self):
        cx = build_k_skeleton(4, 1)
        assert cx.counts() == {1: 6}

    def test_complete_complex_on_three_vertices(self):
        cx = build_k_skeleton(3, 2)
        assert cx.counts() == {1: 3, 2: 1}
        assert len(cx) == 4

    @pytest.mark.parametrize("n,k", [(5, 2), (7, 3), (10, 4)])
    def test_counts_are_binomials(self, n, k):
        cx = build_k_skeleton(n, k)
        for d in range(1, k + 1):
            assert cx.counts()[d] == math.comb(n, d + 1)

    def test_rejects_bad_dimension(self):
        with pytest.raises(ValueError):
            build_k_skeleton(4, 4)
        with pytest.raises(ValueError):
            build_k_skeleton(4, 0)


class TestFaces:
    def test_triangle_edges(self):
        assert enumerate_faces((0, 1, 2), 1) == [(0, 1), (0, 2), (1, 2)]

    def test_tetrahedron_triangles(self):
        faces = enumerate_faces((0, 1, 2, 3), 2)
        assert len(faces) == 4
        assert faces == sorted(faces)

    def test_edge_is_its_own_1_face(self):
        assert enumerate_faces((0, 1), 1) == [(0, 1)]

    def test_rejects_too_high_dimension(self):
        with pytest.raises(ValueError):
            enumerate_faces((0, 1), 2)


class TestUnranking:
    @pytest.mark.parametrize("n,k", [(6, 2), (7, 3), (9, 4), (5, 1)])
    def test_unrank_is_a_colex_bijection(self, n, k):
        total = math.comb(n, k)
        ranked = [unrank_colex(r, k) for r in range(total)]
        assert sorted(ranked) == sorted(combinations(range(n), k))
        # colex order: compare reversed tuples
        for a, b in zip(ranked, ranked[1:]):
            assert a[::-1] < b[::-1]


class TestDilution:
    def test_rounding_splits_budget_exactly_r12b(self):
        counts = condition_spec("R12b").counts(100)
        assert counts == {1: 1238, 2: 3712}
        assert sum(counts.values()) == 4950

    def test_k1_is_all_edges(self):
        cx = sample_diluted(100, condition_spec("K1"), seed=0)
        assert cx.counts() == {1: 4950}

    @pytest.mark.parametrize("n", [20, 50, 100])
    @pytest.mark.parametrize("name", CONDITION_NAMES)
    def test_sampled_counts_match_spec_for_all_conditions(self, name, n):
        spec = condition_spec(name)
        cx = sample_diluted(n, spec, seed=11)
        expected = {d: c for d, c in spec.counts(n).items() if c > 0}
        assert cx.counts() == expected
        assert sum(expected.values()) == math.comb(n, 2)

    def test_deterministic_given_seed(self):
        spec = condition_spec("R1b2b")
        a = sample_diluted(40, spec, seed=5)
        b = sample_diluted(40, spec, seed=5)
        c = sample_diluted(40, spec, seed=6)
        assert a.simplices == b.simplices
        assert a.simplices != c.simplices

    def test_sampled_simplices_are_distinct_and_in_range(self):
        cx = sample_diluted(30, condition_spec("R1b23"), seed=2)
        assert len(set(cx.simplices)) == len(cx.simplices)
        assert all(0 <= s[0] and s[-1] < 30 for s in cx.simplices)

    def test_rejects_budget_beyond_available(self):
        spec = DilutionSpec({3: 1.0}, budget=100)
        with pytest.raises(ValueError):
            spec.counts(5)  # only C(5, 4) = 5 tetrahedra exist

    def test_fractions_must_sum_to_one(self):
        with pytest.raises(ValueError):
            DilutionSpec({1: 0.4, 2: 0.4})

    def test_unknown_condition_rejected(self):
        with pytest.raises(ValueError):
            condition_spec("R9")


class TestHebbianWeights:
    def test_worked_example_golden_weights(self, worked_example):
        cx = hebbian_weights(build_k_skeleton(6, 3), worked_example)
        assert cx.weight_of((0, 2)) == pytest.approx(1 / 6, abs=1e-12)
        assert cx.weight_of((2, 4, 5)) == pytest.approx(-1 / 6, abs=1e-12)
        assert cx.weight_of((1, 3, 4, 5)) == pytest.approx(-1 / 2, abs=1e-12)

    def test_rejects_non_binary_entries(self):
        cx = build_k_skeleton(4, 1)
        with pytest.raises(ValueError):
            hebbian_weights(cx, np.array([[0.5, 1, -1, 1]]))

    def test_rejects_width_mismatch(self):
        cx = build_k_skeleton(4, 1)
        with pytest.raises(ValueError):
            hebbian_weights(cx, random_binary_patterns(2, 5, 0))

    def test_weight_support_and_mean(self):
        p = 10
        pats = random_binary_patterns(p, 100, seed=3)
        cx = hebbian_weights(sample_diluted(100, condition_spec("R1b2b"), 3), pats)
        bound = p / 100
        for d in cx.dimensions():
            w = cx.weight_array(d)
            assert np.all(np.abs(w) <= bound + 1e-12)
            assert abs(w.mean()) < 0.005

    def test_permutation_equivariance(self):
        rng = np.random.default_rng(9)
        pats = random_binary_patterns(4, 7, seed=1)
        cx = hebbian_weights(build_k_skeleton(7, 3), pats)
        perm = rng.permutation(7)
        permuted_pats = pats.data[:, perm]
        cx_perm = hebbian_weights(build_k_skeleton(7, 3), permuted_pats)
        inverse = np.argsort(perm)
        for s in cx.simplices:
            image = tuple(sorted(int(inverse[v]) for v in s))
            assert cx_perm.weight_of(image) == pytest.approx(cx.weight_of(s), abs=1e-12)


class TestEulerCharacteristic:
    # chi targets for N=100: C = 99 * 100 = 9900
    TARGETS = {
        "K1": -4850,
        "R1b2": -2375,
        "R1b2b": 100,
        "R12b": 2575,
        "R2": 5050,
    }

    @pytest.mark.parametrize("name,target", sorted(TARGETS.items()))
    def test_table_of_conditions_at_n100(self, name, target):
        cx = sample_diluted(100, condition_spec(name), seed=17)
        chi = functional_euler_characteristic(cx)
        assert abs(chi - target) <= 1  # rounding may shift counts by one

    def test_empty_functional_set(self):
        cx = FunctionalComplex(12, ())
        assert functional_euler_characteristic(cx) == 12


class TestDownwardClosure:
    def test_triangle_closure(self):
        cx = FunctionalComplex(3, ((0, 1, 2),), np.array([0.25]))
        closed = downward_closure(cx)
        assert set(closed.simplices) == {
            (0,), (1,), (2,), (0, 1), (0, 2), (1, 2), (0, 1, 2),
        }
        assert closed.weight_of((0, 1, 2)) == 0.25
        assert closed.weight_of((0, 1)) == 0.0

    def test_idempotent(self):
        cx = sample_diluted(12, condition_spec("R12b"), seed=1)
        once = downward_closure(cx)
        twice = downward_closure(once)
        assert once.simplices == twice.simplices
        assert np.array_equal(once.weights, twice.weights)

    def test_disjoint_edges_gain_vertices(self):
        cx = FunctionalComplex(4, ((0, 1), (2, 3)))
        closed = downward_closure(cx)
        assert set(closed.simplices) == {(0,), (1,), (2,), (3,), (0, 1), (2, 3)}

    def test_closure_is_closed(self):
        for seed in range(5):
            cx = sample_diluted(15, condition_spec("R1b2b3b"), seed=seed)
            assert not cx.is_downward_closed()
            assert downward_closure(cx).is_downward_closed()


class TestComplexType:
    def test_vertex_weight_must_be_zero(self):
        with pytest.raises(ValueError):
            FunctionalComplex(3, ((0,), (0, 1)), np.array([0.5, 1.0]))

    def test_duplicates_rejected(self):
        with pytest.raises(ValueError):
            FunctionalComplex(3, ((0, 1), (0, 1)))

    def test_vertices_must_increase(self):
        with pytest.raises(ValueError):
            FunctionalComplex(3, ((1, 0),))

    def test_out_of_range_rejected(self):
        with pytest.raises(ValueError):
            FunctionalComplex(3, ((0, 3),))

    def test_with_weights_mapping(self):
        cx = FunctionalComplex(4, ((0, 1), (1, 2, 3)))
        loaded = cx.with_weights({(1, 2, 3): -2.0})
        assert loaded.weight_of((1, 2, 3)) == -2.0
        assert loaded.weight_of((0, 1)) == 0.0

    def test_equality_of_simplex_values(self):
        cx = FunctionalComplex(5, ((0, 1), (1, 2)))
        assert (0, 1) in cx
        assert (0, 2) not in cx


class TestSerialization:
    def test_round_trip(self):
        pats = random_binary_patterns(3, 20, seed=0)
        cx = hebbian_weights(sample_diluted(20, condition_spec("R12b"), 4), pats)
        back = complex_from_json(complex_to_json(cx))
        assert back.n_vertices == cx.n_vertices
        assert back.simplices == cx.simplices
        assert np.allclose(back.weights, cx.weights)

    def test_dimension_major_lexicographic_order(self):
        cx = sample_diluted(10, condition_spec("R1b2b"), seed=8)
        obj = json.loads(complex_to_json(cx))
        keys = [(len(s), tuple(s)) for s in obj["simplices"]]
        assert keys == sorted(keys)

    def test_malformed_json_rejected(self):
        with pytest.raises(ValueError):
            complex_from_json('{"n_vertices": 3}')
