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

#pragma once

// Invariant battery run by `cvcluster verify`.

#include "cvcluster/ccr.hpp"
#include "cvcluster/cluster.hpp"
#include "cvcluster/gaussian.hpp"
#include "cvcluster/graph.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <optional>
#include <ostream>
#include <random>
#include <string>
#include <utility>
#include <vector>

namespace cvcluster {

struct CheckResult {
    std::string name;
    double residual = 0.0;
    double tolerance = 0.0;
    bool passed = false;
};

struct VerifyOptions {
    std::vector<std::pair<std::string, Graph>> topologies;
    double db_from = 3.0;
    double db_to = 16.0;
    double db_step = 0.5;
    /// Replaces every per-check tolerance except the Monte-Carlo z-score bound.
    std::optional<double> tolerance;
    std::uint64_t seed = 2026;
    std::size_t monte_carlo_samples = 100000;
    double monte_carlo_sigmas = 5.0;
};

inline std::vector<std::pair<std::string, Graph>> paper_topologies() {
    return {{"linear", path_graph(4)}, {"square", cycle_graph(4)}, {"tshape", star_graph(4)}};
}

/// Extended CCR read off the adjacency alone: pair (i, j) carries
/// a(2|A_ij| + |(A^2)_ij|) of inter-modal magnitude in an ideal cluster.
inline double extended_ccr_from_adjacency(const Graph &g) {
    const Matrix &adj = g.adjacency();
    const Matrix sq = adj * adj;
    double on_edge = 0.0;
    double total = 0.0;
    for (Eigen::Index i = 0; i < adj.rows(); ++i) {
        for (Eigen::Index j = i + 1; j < adj.cols(); ++j) {
            const double mass = 2.0 * std::abs(adj(i, j)) + std::abs(sq(i, j));
            total += mass;
            if (adj(i, j) != 0.0) {
                on_edge += mass;
            }
        }
    }
    return on_edge / total;
}

/// Max entrywise gap between cz_symplectic(g) and products of single-edge
/// gates over edge orderings: every permutation for up to 6 edges, otherwise
/// forward, reversed and 24 seeded shuffles.
inline double gate_order_residual(const Graph &g, std::uint64_t seed) {
    const std::size_t n = g.n_vertices();
    const Matrix target = cz_symplectic(g).matrix();
    std::vector<std::size_t> order(g.edges().size());
    std::iota(order.begin(), order.end(), 0);
    const auto product_gap = [&](const std::vector<std::size_t> &ord) {
        SymplecticTransform s = SymplecticTransform::identity(n, QuadratureOrdering::Block);
        for (std::size_t k : ord) {
            const Edge &e = g.edges()[k];
            s = single_edge_cz(n, e.i, e.j, e.weight) * s;
        }
        return max_abs(s.matrix() - target);
    };
    double worst = 0.0;
    if (order.size() <= 6) {
        do {
            worst = std::max(worst, product_gap(order));
        } while (std::next_permutation(order.begin(), order.end()));
        return worst;
    }
    worst = product_gap(order);
    std::reverse(order.begin(), order.end());
    worst = std::max(worst, product_gap(order));
    std::mt19937_64 rng(seed);
    for (int k = 0; k < 24; ++k) {
        std::shuffle(order.begin(), order.end(), rng);
        worst = std::max(worst, product_gap(order));
    }
    return worst;
}

inline std::vector<CheckResult> run_verification(const VerifyOptions &options) {
    const auto tol = [&](double fallback) { return options.tolerance.value_or(fallback); };
    std::vector<CheckResult> results;
    const auto record = [&](std::string name, double residual, double tolerance) {
        results.push_back({std::move(name), residual, tolerance, residual <= tolerance});
    };
    const std::vector<double> grid = db_grid(options.db_from, options.db_to, options.db_step);

    for (const auto &[label, g] : options.topologies) {
        const auto n = static_cast<double>(g.n_vertices());
        record(label + "/symplectic-condition", symplectic_residual(cz_symplectic(g).matrix(), QuadratureOrdering::Block),
               tol(kDefaultTolerance));
        record(label + "/gate-order-independence", gate_order_residual(g, options.seed), tol(0.0));

        double purity = 0.0;
        double det_rel = 0.0;
        double closed_form = 0.0;
        double nullifier = 0.0;
        double nullifier_monotone = 0.0;
        double strict_gap = 0.0;
        double extended_gap = 0.0;
        double previous_max_variance = INFINITY;
        const bool has_edges = !g.edges().empty();
        const double extended_expected = has_edges ? extended_ccr_from_adjacency(g) : 0.0;
        for (double db : grid) {
            const auto squeezing = SqueezingSpec::from_db(db);
            const GaussianState state = build_cluster(g, squeezing);
            purity = std::max(purity, purity_residual(state));
            det_rel = std::max(
                det_rel, std::abs(std::expm1(log_abs_determinant(state.covariance()) + n * std::log(4.0))));
            closed_form = std::max(closed_form, max_abs(state.covariance() - closed_form_cluster_covariance(g, squeezing)));
            const NullifierReport nr = nullifier_report(state, g, squeezing);
            const double b = squeezing.squeezed_variance();
            nullifier = std::max(nullifier, (nr.variances.array() - b).abs().maxCoeff());
            const double lowest = nr.variances.minCoeff();
            nullifier_monotone = std::max(nullifier_monotone, std::max(0.0, lowest - previous_max_variance));
            previous_max_variance = nr.variances.maxCoeff();
            if (has_edges) {
                strict_gap = std::max(strict_gap, std::abs(ccr(state, g, CcrMode::Strict).value - 1.0));
                extended_gap =
                    std::max(extended_gap, std::abs(ccr(state, g, CcrMode::Extended).value - extended_expected));
            }
        }
        record(label + "/purity", purity, tol(kDefaultTolerance));
        record(label + "/determinant", det_rel, tol(kDefaultTolerance));
        record(label + "/closed-form", closed_form, tol(1e-12));
        record(label + "/nullifier-variance", nullifier, tol(1e-12));
        record(label + "/nullifier-monotone", nullifier_monotone, tol(0.0));
        if (has_edges) {
            record(label + "/ccr-strict", strict_gap, tol(1e-12));
            record(label + "/ccr-extended", extended_gap, tol(1e-12));
        }

        std::mt19937_64 rng(options.seed);
        const auto squeezing = SqueezingSpec::from_db(options.db_from);
        const SampledCovariance sampled =
            sample_cluster_covariance(g, squeezing, options.monte_carlo_samples, rng);
        const Matrix z = (sampled.covariance - build_cluster(g, squeezing).covariance()).cwiseAbs().cwiseQuotient(
            sampled.standard_error);
        record(label + "/monte-carlo-sigmas", z.maxCoeff(), options.monte_carlo_sigmas);
    }
    return results;
}

inline bool all_passed(const std::vector<CheckResult> &results) {
    return std::all_of(results.begin(), results.end(), [](const CheckResult &r) { return r.passed; });
}

}  // namespace cvcluster
