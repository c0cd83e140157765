"""Route agreement, merge-machinery identities, and the simplex integral oracle.

Expected values for the simplex integral were frozen from independent
oracles: the simplex volume and one-level closed forms analytically, the
two-level case against a seeded Monte-Carlo estimate, and random cases
against nested scipy quadrature.
"""

import json
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy import integrate

from mayerbounds.combinatorics import SizeLimitError, enumerate_labeled_trees
from mayerbounds.quadrature import stable_ratio
from mayerbounds.ursell import (
    HardCoreCutoffError,
    InteractionMatrix,
    InvalidBlockPairError,
    MergeState,
    SimplexIntegrand,
    block_pair_energy,
    merge_histories,
    merge_sequence_expansion,
    random_interaction_matrix,
    simplex_exponential_integral,
    subset_energy,
    tree_exponent_coefficients,
    ursell_graph_sum,
    ursell_partition_sum,
    ursell_tree_integral,
)


def rel_diff(x, y):
    scale = max(abs(x), abs(y))
    return 0.0 if scale < 1e-300 else abs(x - y) / scale


class TestInteractionMatrix:
    def test_json_round_trip(self):
        m = InteractionMatrix.from_entries(
            4, {(1, 2): 0.5, (3, 4): -1.25}, hard_core_pairs=[(1, 3)]
        )
        doc = m.to_json()
        assert doc == {
            "n": 4,
            "entries": [[1, 2, 0.5], [3, 4, -1.25]],
            "hard_core_pairs": [[1, 3]],
        }
        again = InteractionMatrix.from_json(json.dumps(doc))
        assert np.array_equal(
            np.nan_to_num(again.values, posinf=1e99),
            np.nan_to_num(m.values, posinf=1e99),
        )

    def test_missing_pairs_default_zero(self):
        m = InteractionMatrix.from_json({"n": 3, "entries": [[1, 2, 1.0]]})
        assert m.effective(1, 3) == 0.0
        assert m.effective(2, 3) == 0.0

    def test_asymmetric_rejected(self):
        v = np.zeros((2, 2))
        v[0, 1] = 1.0
        with pytest.raises(ValueError):
            InteractionMatrix(2, v)

    def test_hard_core_requires_cutoff(self):
        m = InteractionMatrix.from_entries(2, {}, hard_core_pairs=[(1, 2)])
        with pytest.raises(HardCoreCutoffError):
            m.effective(1, 2)
        with pytest.raises(HardCoreCutoffError):
            ursell_graph_sum(m, 1.0)
        assert m.with_cutoff(30.0).effective(1, 2) == 30.0
        assert m.with_cutoff().cutoff == 30.0

    def test_seeded_matrix_reproducible_and_in_range(self):
        a = random_interaction_matrix(5, 11)
        b = random_interaction_matrix(5, 11)
        assert np.array_equal(a.values, b.values)
        off_diag = a.values[~np.eye(5, dtype=bool)]
        assert np.all(off_diag >= -1.0) and np.all(off_diag <= 2.0)


class TestEnergies:
    def test_subset_energy_examples(self):
        m = random_interaction_matrix(4, 0)
        assert subset_energy(m, []) == 0.0
        assert subset_energy(m, [3]) == 0.0
        assert subset_energy(m, [1, 2]) == m.effective(1, 2)
        direct = sum(
            m.effective(i, j) for i in range(1, 5) for j in range(i + 1, 5)
        )
        assert math.isclose(subset_energy(m, [1, 2, 3, 4]), direct, rel_tol=1e-15)

    def test_block_pair_energy_examples(self):
        m = random_interaction_matrix(3, 1)
        assert block_pair_energy(m, ({1}, {2})) == m.effective(1, 2)
        assert math.isclose(
            block_pair_energy(m, ({1}, {2, 3})),
            m.effective(1, 2) + m.effective(1, 3),
            rel_tol=1e-15,
        )

    @given(st.integers(0, 50))
    @settings(max_examples=30, deadline=None)
    def test_block_pair_merge_identity(self, seed):
        rng = np.random.default_rng(seed + 1000)
        m = random_interaction_matrix(6, seed)
        members = list(rng.permutation(range(1, 7)))
        cut = int(rng.integers(1, 5))
        a, b = set(members[:cut]), set(members[cut : cut + int(rng.integers(1, 2))])
        w = block_pair_energy(m, (a, b))
        assert math.isclose(
            subset_energy(m, a) + subset_energy(m, b) + w,
            subset_energy(m, a | b),
            rel_tol=1e-12,
            abs_tol=1e-12,
        )

    def test_overlapping_blocks_rejected(self):
        m = random_interaction_matrix(3, 0)
        with pytest.raises(InvalidBlockPairError):
            block_pair_energy(m, ({1, 2}, {2, 3}))
        with pytest.raises(InvalidBlockPairError):
            block_pair_energy(m, (set(), {1}))


class TestGraphAndPartitionSums:
    def test_single_point_is_one(self):
        m = InteractionMatrix(1, np.zeros((1, 1)))
        assert ursell_graph_sum(m, 1.0) == 1.0
        assert ursell_partition_sum(m, 1.0) == 1.0

    def test_two_point_closed_form(self):
        m = InteractionMatrix.from_entries(2, {(1, 2): 0.8})
        for beta in (0.3, 1.0, 2.7):
            expected = math.expm1(-beta * 0.8)
            assert math.isclose(ursell_graph_sum(m, beta), expected, rel_tol=1e-14)
            assert math.isclose(ursell_partition_sum(m, beta), expected, rel_tol=1e-13)

    def test_zero_matrix_vanishes(self):
        m = InteractionMatrix(4, np.zeros((4, 4)))
        assert ursell_graph_sum(m, 1.0) == 0.0
        assert abs(ursell_partition_sum(m, 1.0)) < 1e-12

    def test_beta_zero(self):
        for n in (2, 3, 5, 7):
            m = random_interaction_matrix(n, n)
            assert ursell_graph_sum(m, 0.0) == 0.0
            assert abs(ursell_partition_sum(m, 0.0)) < 1e-10

    @pytest.mark.parametrize("n", range(2, 8))
    def test_graph_matches_partition(self, n):
        for seed in range(3):
            m = random_interaction_matrix(n, 97 * n + seed)
            for beta in (0.3, 1.0, 2.7):
                g = ursell_graph_sum(m, beta)
                p = ursell_partition_sum(m, beta)
                assert rel_diff(g, p) < 1e-10

    def test_size_guards(self):
        with pytest.raises(SizeLimitError):
            ursell_graph_sum(random_interaction_matrix(8, 0), 1.0)
        with pytest.raises(SizeLimitError):
            ursell_partition_sum(InteractionMatrix(13, np.zeros((13, 13))), 1.0)

    def test_deterministic_across_calls(self):
        m = random_interaction_matrix(6, 5)
        assert ursell_graph_sum(m, 1.7) == ursell_graph_sum(m, 1.7)


class TestSimplexIntegral:
    def test_zero_coefficients_give_simplex_volume(self):
        for m_levels in (1, 2, 3, 4):
            value = simplex_exponential_integral(
                SimplexIntegrand((0.0,) * m_levels, 1.7)
            )
            assert math.isclose(value, 1.7**m_levels / math.factorial(m_levels), rel_tol=1e-10)

    def test_one_level_closed_form(self):
        c, beta = 2.3, 1.1
        value = simplex_exponential_integral(SimplexIntegrand((c,), beta))
        assert math.isclose(value, (1 - math.exp(-c * beta)) / c, rel_tol=1e-12)

    def test_two_levels_against_monte_carlo(self):
        c1, c2, beta = 1.7, -0.9, 1.3
        value = simplex_exponential_integral(SimplexIntegrand((c1, c2), beta))
        rng = np.random.default_rng(2024)
        draws = rng.uniform(0.0, beta, size=(200_000, 2))
        b1 = draws.max(axis=1)
        b2 = draws.min(axis=1)
        samples = np.exp(-((b1 - b2) * c1 + b2 * c2))
        volume = beta**2 / 2.0
        estimate = volume * samples.mean()
        se = volume * samples.std(ddof=1) / math.sqrt(samples.size)
        assert abs(value - estimate) <= 3 * se

    @pytest.mark.parametrize("m_levels", [2, 3, 4])
    def test_against_nested_scipy(self, m_levels):
        rng = np.random.default_rng(m_levels)
        coeffs = tuple(np.cumsum(rng.uniform(-8, 8, m_levels)))
        beta = 1.9
        value = simplex_exponential_integral(SimplexIntegrand(coeffs, beta))
        diffs = (coeffs[0],) + tuple(np.diff(coeffs))

        def nested(level, upper):
            d = diffs[level]
            if level == len(diffs) - 1:
                return upper * stable_ratio(d * upper)
            return integrate.quad(
                lambda x: math.exp(-d * x) * nested(level + 1, x),
                0.0,
                upper,
                epsabs=1e-300,
                epsrel=1e-11,
                limit=300,
            )[0]

        expected = nested(0, beta)
        assert rel_diff(value, expected) < 1e-8

    def test_beta_zero(self):
        assert simplex_exponential_integral(SimplexIntegrand((1.0, 2.0), 0.0)) == 0.0

    def test_level_guard(self):
        with pytest.raises(SizeLimitError):
            simplex_exponential_integral(SimplexIntegrand((1.0,) * 5, 1.0))

    def test_validation(self):
        with pytest.raises(ValueError):
            SimplexIntegrand((), 1.0)
        with pytest.raises(ValueError):
            SimplexIntegrand((math.inf,), 1.0)
        with pytest.raises(ValueError):
            SimplexIntegrand((1.0,), -0.5)


class TestTreeRoute:
    def test_exponent_coefficients_two_and_three_points(self):
        m = random_interaction_matrix(3, 8)
        two = InteractionMatrix.from_entries(2, {(1, 2): 1.4})
        tree2 = next(enumerate_labeled_trees(2))
        assert tree_exponent_coefficients(tree2, two) == (1.4,)
        from mayerbounds.combinatorics import EdgeLabeledTree

        chain = EdgeLabeledTree(3, ((1, 2), (2, 3)))
        c1, c2 = tree_exponent_coefficients(chain, m)
        assert math.isclose(c1, m.effective(1, 2), rel_tol=1e-15)
        assert math.isclose(c2, subset_energy(m, [1, 2, 3]), rel_tol=1e-15)

    def test_exponent_coefficients_independent_component_scan(self):
        m = random_interaction_matrix(4, 21)
        for tree in enumerate_labeled_trees(4, with_labelings=True):
            coeffs = tree_exponent_coefficients(tree, m)
            for k in range(1, 4):
                # recompute components from scratch
                comps = []
                left = set(range(1, 5))
                kept = set()
                for i, j in tree.edges[:k]:
                    kept.add((i, j))
                while left:
                    v = min(left)
                    stack, seen = [v], {v}
                    while stack:
                        u = stack.pop()
                        for i, j in kept:
                            w = j if i == u else (i if j == u else None)
                            if w is not None and w not in seen:
                                seen.add(w)
                                stack.append(w)
                    comps.append(seen)
                    left -= seen
                expected = sum(subset_energy(m, comp) for comp in comps)
                assert math.isclose(coeffs[k - 1], expected, rel_tol=1e-12, abs_tol=1e-12)

    def test_two_point_closed_form(self):
        m = InteractionMatrix.from_entries(2, {(1, 2): 0.8})
        expected = math.expm1(-1.3 * 0.8)
        assert math.isclose(ursell_tree_integral(m, 1.3), expected, rel_tol=1e-9)

    def test_beta_zero(self):
        assert ursell_tree_integral(random_interaction_matrix(3, 0), 0.0) == 0.0

    def test_matches_partition_sum_n4(self):
        m = random_interaction_matrix(4, 123)
        tree = ursell_tree_integral(m, 1.0, tol=1e-6)
        part = ursell_partition_sum(m, 1.0)
        assert rel_diff(tree, part) < 1e-6

    def test_size_guard(self):
        with pytest.raises(SizeLimitError):
            ursell_tree_integral(random_interaction_matrix(6, 0), 1.0)


class TestMergeRoute:
    def test_history_counts(self):
        assert sum(1 for _ in merge_histories(2)) == 1
        assert sum(1 for _ in merge_histories(3)) == 3
        assert sum(1 for _ in merge_histories(4)) == 6 * 3
        assert sum(1 for _ in merge_histories(5)) == 10 * 6 * 3

    def test_state_invariants(self):
        for state in merge_histories(4):
            assert len(state.partition) == 1
            replay = MergeState.initial(4)
            for k, pair in enumerate(state.history, start=1):
                replay = replay.merge(pair)
                assert len(replay.partition) == 4 - k

    def test_invalid_merge_rejected(self):
        state = MergeState.initial(3)
        merged = state.merge((frozenset({1}), frozenset({2})))
        with pytest.raises(InvalidBlockPairError):
            merged.merge((frozenset({1}), frozenset({2})))  # no longer blocks

    def test_bijection_with_labeled_trees(self):
        # each complete history sigma corresponds to prod_i #edges(sigma_i)
        # labeled trees; totals must match n^(n-2) (n-1)!
        for n in (3, 4):
            total = 0
            for state in merge_histories(n):
                count = 1
                for a, b in state.history:
                    count *= len(a) * len(b)
                total += count
            assert total == n ** (n - 2) * math.factorial(n - 1)

    def test_two_point_value(self):
        m = InteractionMatrix.from_entries(2, {(1, 2): 0.8})
        expected = math.expm1(-1.3 * 0.8)
        assert math.isclose(merge_sequence_expansion(m, 1.3), expected, rel_tol=1e-9)

    def test_matches_tree_integral(self):
        m = random_interaction_matrix(4, 77)
        a = merge_sequence_expansion(m, 1.0, tol=1e-6)
        b = ursell_tree_integral(m, 1.0, tol=1e-6)
        assert rel_diff(a, b) < 1e-6

    @given(st.integers(0, 40))
    @settings(max_examples=20, deadline=None)
    def test_partial_sum_identity(self, seed):
        # sum of the first k merge energies equals the total energy of the
        # partition after k merges
        m = random_interaction_matrix(5, seed)
        rng = np.random.default_rng(seed)
        state = MergeState.initial(5)
        running = 0.0
        for _ in range(4):
            options = state.available_merges()
            pair = options[rng.integers(0, len(options))]
            running += block_pair_energy(m, pair)
            state = state.merge(pair)
            total = sum(subset_energy(m, block) for block in state.partition.blocks)
            assert math.isclose(running, total, rel_tol=1e-12, abs_tol=1e-12)

    @given(st.integers(0, 40))
    @settings(max_examples=20, deadline=None)
    def test_telescoping_identity(self, seed):
        # sum_i b_i W_i == sum_k (b_k - b_{k+1}) * total energy after k merges
        m = random_interaction_matrix(5, seed)
        rng = np.random.default_rng(seed + 7)
        state = MergeState.initial(5)
        energies = []
        partials = []
        for _ in range(4):
            options = state.available_merges()
            pair = options[rng.integers(0, len(options))]
            energies.append(block_pair_energy(m, pair))
            state = state.merge(pair)
            partials.append(
                sum(subset_energy(m, block) for block in state.partition.blocks)
            )
        betas = np.sort(rng.uniform(0.0, 2.0, size=4))[::-1]
        lhs = float(np.dot(betas, energies))
        rhs = sum(
            (betas[k] - (betas[k + 1] if k + 1 < 4 else 0.0)) * partials[k]
            for k in range(4)
        )
        assert math.isclose(lhs, rhs, rel_tol=1e-10, abs_tol=1e-10)


class TestHardCoreLimit:
    def test_cutoff_sequence_converges_to_exact_limit(self):
        base = random_interaction_matrix(4, 9)
        values = base.values.copy()
        values[0, 1] = values[1, 0] = np.inf
        values[2, 3] = values[3, 2] = np.inf
        m = InteractionMatrix(4, values)
        beta = 1.0
        # e^{-beta H} underflows to exactly 0 at H = 1e6: the exact hard-core
        # limit where every hard-core Mayer factor is -1
        limit = ursell_graph_sum(m.with_cutoff(1e6), beta)
        seq = [ursell_graph_sum(m.with_cutoff(h), beta) for h in (10.0, 20.0, 40.0)]
        gaps = [abs(s - limit) for s in seq]
        assert gaps[0] > gaps[1] > gaps[2]
        assert abs(seq[2] - seq[1]) < 1e-6
        assert gaps[2] < 1e-6

    def test_beta_zero_with_cutoff(self):
        m = InteractionMatrix.from_entries(3, {}, hard_core_pairs=[(1, 2)])
        assert ursell_graph_sum(m.with_cutoff(), 0.0) == 0.0


class TestFourRouteAgreement:
    @pytest.mark.parametrize("seed,n", [(0, 2), (1, 3), (2, 4)])
    def test_all_routes_agree(self, seed, n):
        m = random_interaction_matrix(n, seed)
        for beta in (0.3, 1.0, 2.7):
            g = ursell_graph_sum(m, beta)
            p = ursell_partition_sum(m, beta)
            t = ursell_tree_integral(m, beta)
            mg = merge_sequence_expansion(m, beta)
            assert rel_diff(g, p) < 1e-10
            assert rel_diff(t, g) < 1e-5
            assert rel_diff(mg, g) < 1e-5

    def test_n5_integral_routes(self):
        m = random_interaction_matrix(5, 4)
        g = ursell_graph_sum(m, 1.0)
        assert rel_diff(ursell_tree_integral(m, 1.0), g) < 1e-5
        assert rel_diff(merge_sequence_expansion(m, 1.0), g) < 1e-5
