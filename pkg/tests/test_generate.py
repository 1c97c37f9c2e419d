import itertools
import math

import pytest

from hosim import PlantedSpec, generate_planted, write_planted, \
    load_edge_list, load_communities


class TestPlantedSpec:
    def test_chain_memberships(self):
        spec = PlantedSpec.chain([20, 20], p_in=0.5, p_out=0.1, overlap=1)
        assert spec.node_count == 39
        shared = spec.overlap_nodes()
        assert len(shared) == 1
        assert spec.memberships[shared[0]] == frozenset({0, 1})

    def test_invalid_probabilities(self):
        with pytest.raises(ValueError):
            PlantedSpec.chain([10], p_in=0.2, p_out=0.5)
        with pytest.raises(ValueError):
            PlantedSpec.chain([10], p_in=1.2, p_out=0.0)

    def test_invalid_overlap(self):
        with pytest.raises(ValueError):
            PlantedSpec.chain([5, 5], p_in=0.5, p_out=0.0, overlap=5)

    def test_empty_block_rejected(self):
        with pytest.raises(ValueError):
            PlantedSpec.chain([10, 0], p_in=0.5, p_out=0.0)


class TestGeneratePlanted:
    def test_degenerate_probabilities_give_disjoint_cliques(self):
        spec = PlantedSpec.chain([6, 5], p_in=1.0, p_out=0.0, seed=1)
        g, blocks = generate_planted(spec)
        assert g.edge_count == 15 + 10
        for block in blocks:
            for a, b in itertools.combinations(sorted(block), 2):
                assert g.adjacent(a, b)
        assert not any(g.adjacent(a, b)
                       for a in blocks[0] for b in blocks[1])

    def test_deterministic_per_seed(self):
        spec = PlantedSpec.chain([15, 15], p_in=0.4, p_out=0.02, seed=9)
        g1, _ = generate_planted(spec)
        g2, _ = generate_planted(spec)
        assert sorted(g1.edges()) == sorted(g2.edges())

    def test_expected_edge_count_within_three_sigma(self):
        sizes = [18, 14]
        p_in, p_out = 0.3, 0.05
        pairs_in = sum(s * (s - 1) // 2 for s in sizes)
        n = sum(sizes)
        pairs_out = n * (n - 1) // 2 - pairs_in
        mean = p_in * pairs_in + p_out * pairs_out
        var = pairs_in * p_in * (1 - p_in) + pairs_out * p_out * (1 - p_out)
        total_mean = 20 * mean
        total_sd = math.sqrt(20 * var)
        total = 0
        for seed in range(20):
            g, _ = generate_planted(PlantedSpec.chain(
                sizes, p_in=p_in, p_out=p_out, seed=seed))
            total += g.edge_count
        assert abs(total - total_mean) <= 3 * total_sd

    def test_skewed_blocks_preserve_mean_density(self):
        # the rank-weighted wiring renormalizes so the expected number of
        # intra-block edges stays p_in * C(size, 2)
        sizes = [24]
        p_in = 0.35
        pairs = 24 * 23 // 2
        mean = p_in * pairs
        total = 0
        trials = 60
        for seed in range(trials):
            g, _ = generate_planted(PlantedSpec.chain(
                sizes, p_in=p_in, p_out=0.0, seed=seed, core_skew=0.9))
            total += g.edge_count
        sd_bound = math.sqrt(trials * pairs * 0.25)  # loose binomial bound
        assert abs(total - trials * mean) <= 3 * sd_bound

    def test_skew_creates_degree_elite(self):
        spec = PlantedSpec.chain([24], p_in=0.35, p_out=0.0, seed=4,
                                 core_skew=0.9)
        g, _ = generate_planted(spec)
        degrees = sorted((g.degree(u) for u in g.nodes()), reverse=True)
        assert degrees[0] >= 2 * (sum(degrees) / len(degrees))

    def test_pinned_overlap_degree(self):
        for seed in range(5):
            spec = PlantedSpec.chain([25, 25], p_in=0.35, p_out=0.0,
                                     overlap=1, seed=seed, overlap_degree=9)
            g, _ = generate_planted(spec)
            q = spec.overlap_nodes()[0]
            assert g.degree(q) == 18

    def test_overlap_split_keeps_query_marginal(self):
        # without pinning, overlap nodes split their edge budget: expected
        # degree stays near the block mean rather than doubling
        degs = []
        for seed in range(40):
            spec = PlantedSpec.chain([25, 25], p_in=0.4, p_out=0.0,
                                     overlap=1, seed=seed)
            g, _ = generate_planted(spec)
            degs.append(g.degree(spec.overlap_nodes()[0]))
        mean_deg = sum(degs) / len(degs)
        assert abs(mean_deg - 0.4 * 24) <= 2.0


class TestWritePlanted:
    def test_files_and_shared_label(self, tmp_path):
        spec = PlantedSpec.chain([20, 20], p_in=1.0, p_out=0.0, overlap=1,
                                 seed=0)
        e, c = tmp_path / "g.edges", tmp_path / "g.cmty"
        nodes, edges = write_planted(spec, e, c)
        assert nodes == 39
        lines = c.read_text().strip().splitlines()
        assert len(lines) == 2
        shared = set(lines[0].split()) & set(lines[1].split())
        assert len(shared) == 1

    def test_round_trip_through_loaders(self, tmp_path):
        spec = PlantedSpec.chain([15, 15], p_in=0.5, p_out=0.02, seed=2)
        e, c = tmp_path / "g.edges", tmp_path / "g.cmty"
        _, edge_count = write_planted(spec, e, c)
        g = load_edge_list(e)
        assert g.edge_count == edge_count
        truth = load_communities(c, g)
        assert len(truth) == 2
