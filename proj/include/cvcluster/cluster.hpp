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

// CV cluster states: CZ networks as symplectic maps, final covariances and
// nullifier statistics.

#include "cvcluster/gaussian.hpp"
#include "cvcluster/graph.hpp"

#include <cmath>
#include <cstddef>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>

namespace cvcluster {

namespace detail {

inline Matrix block_cz_matrix(const Matrix &adjacency) {
    const Eigen::Index n = adjacency.rows();
    Matrix s = Matrix::Identity(2 * n, 2 * n);
    s.bottomLeftCorner(n, n) = adjacency;
    return s;
}

}  // namespace detail

/// The CZ network of a graph: x -> x, p -> p + A x. In block ordering this
/// is [[I, 0], [A, I]].
inline SymplecticTransform cz_symplectic(const Graph &g, QuadratureOrdering ordering = QuadratureOrdering::Block) {
    SymplecticTransform s(detail::block_cz_matrix(g.adjacency()), QuadratureOrdering::Block);
    return s.reordered(ordering);
}

/// CZ gate of strength `weight` between modes i and j (0-based).
inline SymplecticTransform single_edge_cz(
    std::size_t n_modes, std::size_t i, std::size_t j, double weight = 1.0,
    QuadratureOrdering ordering = QuadratureOrdering::Block) {
    if (i == j) {
        throw std::invalid_argument("CZ gate needs two distinct modes, got " + std::to_string(i + 1) + " twice");
    }
    return cz_symplectic(Graph(n_modes, {{i, j, weight}}), ordering);
}

/// Momentum-squeezed vacua entangled by the graph's CZ network, V = S V0 S^T.
inline GaussianState build_cluster(
    const Graph &g, const SqueezingSpec &squeezing, QuadratureOrdering ordering = QuadratureOrdering::Block) {
    const GaussianState initial = squeezed_vacuum_covariance(g.n_vertices(), squeezing, ordering);
    return apply_symplectic(initial, cz_symplectic(g, ordering));
}

/// [[aI, aA], [aA, aA^2 + bI]] (block ordering) assembled directly from the
/// adjacency, with a = e^{2r}/2 and b = e^{-2r}/2. Never touches S.
inline Matrix closed_form_cluster_covariance(const Graph &g, const SqueezingSpec &squeezing) {
    const double a = squeezing.anti_squeezed_variance();
    const double b = squeezing.squeezed_variance();
    const Matrix &adj = g.adjacency();
    const Eigen::Index n = adj.rows();
    Matrix v(2 * n, 2 * n);
    v.topLeftCorner(n, n) = a * Matrix::Identity(n, n);
    v.topRightCorner(n, n) = a * adj;
    v.bottomLeftCorner(n, n) = a * adj;
    v.bottomRightCorner(n, n) = a * (adj * adj) + b * Matrix::Identity(n, n);
    return v;
}

struct NullifierReport {
    std::size_t n_modes = 0;
    /// Var(p_i - sum_j A_ij x_j) per mode.
    Vector variances;
    Matrix nullifier_covariance;
    std::optional<SqueezingSpec> squeezing;
};

/// Second moments of the nullifiers p_i - sum_j A_ij x_j, i.e. M V M^T for
/// M = [-A, I] in block ordering.
inline NullifierReport nullifier_report(
    const GaussianState &state, const Graph &g, std::optional<SqueezingSpec> squeezing = std::nullopt) {
    if (state.n_modes() != g.n_vertices()) {
        throw std::invalid_argument(
            "state has " + std::to_string(state.n_modes()) + " modes but graph has " +
            std::to_string(g.n_vertices()) + " vertices");
    }
    const GaussianState block = reorder_state(state, QuadratureOrdering::Block);
    const auto n = static_cast<Eigen::Index>(g.n_vertices());
    Matrix m(n, 2 * n);
    m.leftCols(n) = -g.adjacency();
    m.rightCols(n) = Matrix::Identity(n, n);
    const Matrix product = m * block.covariance() * m.transpose();
    NullifierReport report;
    report.n_modes = g.n_vertices();
    report.nullifier_covariance = 0.5 * (product + product.transpose());
    report.variances = report.nullifier_covariance.diagonal();
    report.squeezing = squeezing;
    return report;
}

struct SampledCovariance {
    Matrix covariance;
    /// Standard error of each entry, sqrt((V_ii V_jj + V_ij^2) / samples).
    Matrix standard_error;
    std::size_t samples = 0;
};

/// Monte-Carlo estimate of a cluster covariance (block ordering): draws
/// independent x ~ N(0, e^{2r}/2), p ~ N(0, e^{-2r}/2) per mode and applies
/// p -> p + A x sample by sample. The mean is known to be zero.
template <class Rng>
SampledCovariance sample_cluster_covariance(
    const Graph &g, const SqueezingSpec &squeezing, std::size_t samples, Rng &rng) {
    if (samples < 2) {
        throw std::invalid_argument("Monte-Carlo estimate needs at least 2 samples");
    }
    const auto n = static_cast<Eigen::Index>(g.n_vertices());
    std::normal_distribution<double> x_dist(0.0, std::sqrt(squeezing.anti_squeezed_variance()));
    std::normal_distribution<double> p_dist(0.0, std::sqrt(squeezing.squeezed_variance()));
    Matrix sum = Matrix::Zero(2 * n, 2 * n);
    Vector z(2 * n);
    for (std::size_t s = 0; s < samples; ++s) {
        for (Eigen::Index k = 0; k < n; ++k) {
            z(k) = x_dist(rng);
        }
        for (Eigen::Index k = 0; k < n; ++k) {
            z(n + k) = p_dist(rng);
        }
        z.tail(n) += g.adjacency() * z.head(n);
        sum.selfadjointView<Eigen::Lower>().rankUpdate(z);
    }
    SampledCovariance out;
    out.samples = samples;
    out.covariance = sum.selfadjointView<Eigen::Lower>();
    out.covariance /= static_cast<double>(samples);
    const Vector diag = out.covariance.diagonal();
    out.standard_error =
        ((diag * diag.transpose()).array() + out.covariance.array().square()).sqrt() /
        std::sqrt(static_cast<double>(samples));
    return out;
}

}  // namespace cvcluster
