// Copyright 2026 The cvcluster Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "cvcluster/cluster.hpp"

#include "gtest/gtest.h"

#include "cvcluster/ccr.hpp"

#include <algorithm>
#include <numeric>
#include <random>
#include <string>
#include <utility>
#include <vector>

using namespace cvcluster;

namespace {

constexpr double kA3dB = 0.9976311574844399;
constexpr double kB16dB = 0.012559432157547897;

std::vector<std::pair<std::string, Graph>> named_graphs(std::size_t n) {
    std::vector<std::pair<std::string, Graph>> out;
    out.emplace_back("path", path_graph(n));
    out.emplace_back("star", star_graph(n));
    out.emplace_back("cycle", cycle_graph(n));
    out.emplace_back("grid", family_graph(Family::Grid, n));
    return out;
}

Matrix edge_product(const Graph &g, const std::vector<std::size_t> &order) {
    SymplecticTransform s = SymplecticTransform::identity(g.n_vertices(), QuadratureOrdering::Block);
    for (std::size_t k : order) {
        const Edge &e = g.edges()[k];
        s = single_edge_cz(g.n_vertices(), e.i, e.j, e.weight) * s;
    }
    return s.matrix();
}

}  // namespace

TEST(CzSymplectic, linear_chain_lower_block) {
    const Graph g = path_graph(4);
    const SymplecticTransform s = cz_symplectic(g);
    EXPECT_EQ(Matrix(s.matrix().bottomLeftCorner(4, 4)), g.adjacency());
    EXPECT_EQ(Matrix(s.matrix().topLeftCorner(4, 4)), Matrix::Identity(4, 4));
    EXPECT_EQ(Matrix(s.matrix().bottomRightCorner(4, 4)), Matrix::Identity(4, 4));
    EXPECT_EQ(Matrix(s.matrix().topRightCorner(4, 4)), Matrix::Zero(4, 4));
    EXPECT_EQ(symplectic_residual(s.matrix(), QuadratureOrdering::Block), 0.0);
}

TEST(CzSymplectic, empty_graph_is_identity) {
    EXPECT_EQ(cz_symplectic(path_graph(1)).matrix(), Matrix::Identity(2, 2));
    EXPECT_EQ(cz_symplectic(Graph(5, {})).matrix(), Matrix::Identity(10, 10));
}

TEST(CzSymplectic, star_support) {
    const Matrix lower = cz_symplectic(star_graph(4)).matrix().bottomLeftCorner(4, 4);
    for (int i = 0; i < 4; ++i) {
        for (int j = 0; j < 4; ++j) {
            const bool expected = (i == 0) != (j == 0);
            EXPECT_EQ(lower(i, j) != 0.0, expected) << i << "," << j;
        }
    }
}

TEST(CzSymplectic, interleaved_is_symplectic_and_consistent) {
    const Graph g = cycle_graph(5);
    const SymplecticTransform inter = cz_symplectic(g, QuadratureOrdering::Interleaved);
    EXPECT_EQ(symplectic_residual(inter.matrix(), QuadratureOrdering::Interleaved), 0.0);
    EXPECT_EQ(inter.reordered(QuadratureOrdering::Block).matrix(), cz_symplectic(g).matrix());
}

TEST(CzSymplectic, weighted_edges_symplectic) {
    const Graph g = custom_graph(4, {{0, 1, 0.3}, {1, 3, -1.7}, {0, 2, 2.5}});
    EXPECT_LE(symplectic_residual(cz_symplectic(g).matrix(), QuadratureOrdering::Block), 1e-15);
}

TEST(SingleEdgeCz, path_product_in_both_orders) {
    const Graph g = path_graph(4);
    const Matrix s = cz_symplectic(g).matrix();
    EXPECT_EQ(edge_product(g, {0, 1, 2}), s);
    EXPECT_EQ(edge_product(g, {2, 1, 0}), s);
}

TEST(SingleEdgeCz, every_gate_order_gives_same_network) {
    for (const Graph &g : {path_graph(4), star_graph(4), cycle_graph(4)}) {
        const Matrix s = cz_symplectic(g).matrix();
        const GaussianState reference = build_cluster(g, SqueezingSpec::from_db(7.0));
        std::vector<std::size_t> order(g.edges().size());
        std::iota(order.begin(), order.end(), 0);
        int permutations = 0;
        do {
            const Matrix product = edge_product(g, order);
            EXPECT_EQ(product, s);
            const GaussianState v = apply_symplectic(
                squeezed_vacuum_covariance(4, SqueezingSpec::from_db(7.0)),
                SymplecticTransform(product, QuadratureOrdering::Block));
            EXPECT_EQ(v.covariance(), reference.covariance());
            ++permutations;
        } while (std::next_permutation(order.begin(), order.end()));
        EXPECT_EQ(permutations, g.edges().size() == 3 ? 6 : 24);
    }
}

TEST(SingleEdgeCz, two_mode_vacuum_correlation) {
    const auto vacuum = squeezed_vacuum_covariance(2, SqueezingSpec::from_r(0.0));
    const auto out = apply_symplectic(vacuum, single_edge_cz(2, 0, 1, 1.0));
    // V_{x1 p2}: block (0, 3).
    EXPECT_EQ(out.covariance()(0, 3), 0.5);
    EXPECT_THROW(single_edge_cz(3, 1, 1), std::invalid_argument);
    EXPECT_THROW(single_edge_cz(3, 0, 3), std::invalid_argument);
}

TEST(BuildCluster, matches_closed_form_up_to_64_modes) {
    for (std::size_t n : {4u, 5u, 9u, 16u, 33u, 64u}) {
        for (const auto &[label, g] : named_graphs(n)) {
            for (double db = 0.0; db <= 16.0; db += 2.0) {
                const auto sq = SqueezingSpec::from_db(db);
                const Matrix diff = build_cluster(g, sq).covariance() - closed_form_cluster_covariance(g, sq);
                EXPECT_LE(max_abs(diff), 1e-12) << label << " n=" << n << " db=" << db;
            }
        }
    }
}

TEST(BuildCluster, vacuum_input_closed_form) {
    const Graph g = cycle_graph(4);
    const Matrix &a = g.adjacency();
    Matrix expected(8, 8);
    expected << Matrix::Identity(4, 4), a, a, a * a + Matrix::Identity(4, 4);
    expected *= 0.5;
    EXPECT_EQ(build_cluster(g, SqueezingSpec::from_r(0.0)).covariance(), expected);
}

TEST(BuildCluster, cross_block_follows_adjacency) {
    const auto sq = SqueezingSpec::from_db(3.0);
    for (const Graph &g : {path_graph(4), cycle_graph(4), star_graph(4)}) {
        const Matrix v = build_cluster(g, sq).covariance();
        for (int i = 0; i < 4; ++i) {
            for (int j = 0; j < 4; ++j) {
                EXPECT_EQ(v(i, 4 + j) != 0.0, g.adjacency()(i, j) != 0.0);
                if (g.adjacency()(i, j) != 0.0) {
                    EXPECT_NEAR(v(i, 4 + j), kA3dB, 1e-15);
                }
            }
        }
    }
}

TEST(BuildCluster, star_hub_has_no_peripheral_cross_terms) {
    const Matrix v = build_cluster(star_graph(4), SqueezingSpec::from_db(10.0)).covariance();
    for (int i = 1; i < 4; ++i) {
        EXPECT_GT(v(0, 4 + i), 0.0);
        for (int j = 1; j < 4; ++j) {
            EXPECT_EQ(v(i, 4 + j), 0.0);
        }
    }
}

TEST(BuildCluster, outputs_are_pure) {
    for (const auto &[label, g] : named_graphs(8)) {
        for (double db = 0.0; db <= 16.0; db += 4.0) {
            EXPECT_TRUE(is_pure(build_cluster(g, SqueezingSpec::from_db(db)), 1e-9)) << label << " " << db;
        }
    }
}

TEST(ClosedForm, path_counting_entries) {
    const auto sq = SqueezingSpec::from_db(3.0);
    const double a = sq.anti_squeezed_variance();
    const Matrix path = closed_form_cluster_covariance(path_graph(4), sq);
    // (p_1, p_3) = a (A^2)_13: one length-2 walk 1-2-3.
    EXPECT_DOUBLE_EQ(path(4, 6), a);
    const Matrix cyc = closed_form_cluster_covariance(cycle_graph(4), sq);
    // Two walks 1-2-3 and 1-4-3.
    EXPECT_DOUBLE_EQ(cyc(4, 6), 2 * a);
    for (const Graph &g : {path_graph(4), cycle_graph(4), star_graph(4), grid_graph(3, 3)}) {
        const Matrix v = closed_form_cluster_covariance(g, sq);
        const auto n = static_cast<Eigen::Index>(g.n_vertices());
        EXPECT_EQ(Matrix(v.topLeftCorner(n, n)), a * Matrix::Identity(n, n));
    }
}

TEST(Nullifiers, variance_equals_squeezed_level) {
    for (std::size_t n : {4u, 9u, 16u}) {
        for (const auto &[label, g] : named_graphs(n)) {
            for (double db = 0.0; db <= 16.0; db += 0.5) {
                const auto sq = SqueezingSpec::from_db(db);
                const NullifierReport report = nullifier_report(build_cluster(g, sq), g, sq);
                const Matrix expected = sq.squeezed_variance() * Matrix::Identity(static_cast<Eigen::Index>(n),
                                                                                  static_cast<Eigen::Index>(n));
                EXPECT_LE(max_abs(report.nullifier_covariance - expected), 1e-12) << label << n << " " << db;
            }
        }
    }
}

TEST(Nullifiers, known_levels) {
    const auto vacuum = SqueezingSpec::from_r(0.0);
    const auto r0 = nullifier_report(build_cluster(star_graph(4), vacuum), star_graph(4));
    for (Eigen::Index k = 0; k < 4; ++k) {
        EXPECT_NEAR(r0.variances(k), 0.5, 1e-15);
    }
    const auto sq = SqueezingSpec::from_db(16.0);
    const auto r16 = nullifier_report(build_cluster(star_graph(4), sq), star_graph(4), sq);
    for (Eigen::Index k = 0; k < 4; ++k) {
        EXPECT_NEAR(r16.variances(k), kB16dB, 1e-12);
    }
    ASSERT_TRUE(r16.squeezing.has_value());
    EXPECT_EQ(r16.squeezing->db(), 16.0);
}

TEST(Nullifiers, decrease_with_squeezing) {
    const Graph g = cycle_graph(4);
    double previous = INFINITY;
    for (double db = 0.0; db <= 16.0; db += 0.5) {
        const auto report = nullifier_report(build_cluster(g, SqueezingSpec::from_db(db)), g);
        EXPECT_LT(report.variances.maxCoeff(), previous);
        previous = report.variances.minCoeff();
    }
}

TEST(Nullifiers, interleaved_input_and_mismatch) {
    const Graph g = path_graph(4);
    const auto sq = SqueezingSpec::from_db(5.0);
    const auto report = nullifier_report(build_cluster(g, sq, QuadratureOrdering::Interleaved), g);
    EXPECT_LE((report.variances.array() - sq.squeezed_variance()).abs().maxCoeff(), 1e-12);
    EXPECT_THROW(nullifier_report(build_cluster(path_graph(3), sq), g), std::invalid_argument);
}

TEST(MonteCarlo, sampled_covariance_within_five_standard_errors) {
    std::mt19937_64 rng(20260101);
    for (const Graph &g : {path_graph(4), star_graph(4)}) {
        const auto sq = SqueezingSpec::from_db(3.0);
        const SampledCovariance sampled = sample_cluster_covariance(g, sq, 100000, rng);
        const Matrix exact = build_cluster(g, sq).covariance();
        const Matrix z = (sampled.covariance - exact).cwiseAbs().cwiseQuotient(sampled.standard_error);
        EXPECT_LE(z.maxCoeff(), 5.0);
    }
}
