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

// Correlation Concentration Ratio: the share of inter-modal correlation
// magnitude that sits on graph edges.
//
// Strict mode counts only cross-quadrature terms |V_{x_i p_j}| + |V_{p_i x_j}|.
// Extended mode also counts |V_{x_i x_j}| + |V_{p_i p_j}|. Both sum over
// unordered pairs i < j; the numerator keeps pairs joined by an edge.

#include "cvcluster/cluster.hpp"
#include "cvcluster/gaussian.hpp"
#include "cvcluster/graph.hpp"

#include <cmath>
#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace cvcluster {

enum class CcrMode { Strict, Extended };

inline std::string_view to_string(CcrMode mode) {
    return mode == CcrMode::Strict ? "strict" : "extended";
}

inline CcrMode parse_ccr_mode(std::string_view text) {
    if (text == "strict") {
        return CcrMode::Strict;
    }
    if (text == "extended") {
        return CcrMode::Extended;
    }
    throw std::invalid_argument("unknown CCR mode '" + std::string(text) + "'");
}

/// Distributed: correlations spread over many paths (square-like).
/// SemiCentralized: directional, bottlenecked on intermediate modes (chain-like).
/// Concentrated: routed through a hub mode (star-like).
enum class Regime { Distributed, SemiCentralized, Concentrated };

inline std::string_view to_string(Regime regime) {
    switch (regime) {
        case Regime::Distributed:
            return "distributed";
        case Regime::SemiCentralized:
            return "semi-centralized";
        case Regime::Concentrated:
            return "concentrated";
    }
    return "unknown";
}

/// Regime cut points. The defaults are repository conventions, not derived values.
struct RegimeThresholds {
    double lower = 0.4;
    double upper = 0.7;

    void validate() const {
        if (!(0.0 < lower && lower < upper && upper < 1.0)) {
            throw std::invalid_argument("regime thresholds must satisfy 0 < t1 < t2 < 1");
        }
    }
};

inline Regime classify_regime(double value, const RegimeThresholds &thresholds = {}) {
    thresholds.validate();
    if (!(value >= 0.0 && value <= 1.0)) {
        throw std::invalid_argument("CCR value must lie in [0, 1]");
    }
    if (value < thresholds.lower) {
        return Regime::Distributed;
    }
    if (value < thresholds.upper) {
        return Regime::SemiCentralized;
    }
    return Regime::Concentrated;
}

/// Raised when the ratio has no meaning: no edges, or zero total correlation.
class UndefinedCcrError : public std::domain_error {
   public:
    using std::domain_error::domain_error;
};

struct PairCorrelation {
    std::size_t i;
    std::size_t j;
    bool on_edge = false;
    double xp;  // |V_{x_i p_j}|
    double px;  // |V_{p_i x_j}|
    double xx;  // |V_{x_i x_j}|
    double pp;  // |V_{p_i p_j}|
};

/// Inter-modal magnitudes for every pair i < j of a block-ordered covariance.
/// With a graph, `on_edge` marks adjacent pairs.
inline std::vector<PairCorrelation> cross_quadrature_correlations(
    const Matrix &block_covariance, const Graph *graph = nullptr) {
    const std::size_t n = modes_from_dimension(block_covariance.rows(), block_covariance.cols());
    if (graph != nullptr && graph->n_vertices() != n) {
        throw std::invalid_argument(
            "covariance has " + std::to_string(n) + " modes but graph has " +
            std::to_string(graph->n_vertices()) + " vertices");
    }
    std::vector<PairCorrelation> pairs;
    pairs.reserve(n * (n - 1) / 2);
    const auto at = [&](std::size_t r, std::size_t c) {
        return std::abs(block_covariance(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)));
    };
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            pairs.push_back({
                i,
                j,
                graph != nullptr && graph->has_edge(i, j),
                at(i, n + j),
                at(n + i, j),
                at(i, j),
                at(n + i, n + j),
            });
        }
    }
    return pairs;
}

inline std::vector<PairCorrelation> cross_quadrature_correlations(const GaussianState &state) {
    return cross_quadrature_correlations(reorder_state(state, QuadratureOrdering::Block).covariance());
}

struct CcrReport {
    double value = 0.0;
    CcrMode mode = CcrMode::Strict;
    /// Edge-indicator numerator and total.
    double numerator = 0.0;
    double denominator = 0.0;
    /// Numerator weighted by A_ij; only present when some weight differs from 1.
    std::optional<double> weighted_numerator;
    std::vector<PairCorrelation> per_pair;
    Regime regime = Regime::Distributed;
};

inline CcrReport ccr(
    const Matrix &block_covariance, const Graph &g, CcrMode mode = CcrMode::Strict,
    const RegimeThresholds &thresholds = {}) {
    if (g.edges().empty()) {
        throw UndefinedCcrError("CCR is undefined for a graph without edges");
    }
    CcrReport report;
    report.mode = mode;
    report.per_pair = cross_quadrature_correlations(block_covariance, &g);
    double weighted = 0.0;
    for (const PairCorrelation &pc : report.per_pair) {
        double mass = pc.xp + pc.px;
        if (mode == CcrMode::Extended) {
            mass += pc.xx + pc.pp;
        }
        report.denominator += mass;
        if (pc.on_edge) {
            report.numerator += mass;
            weighted += g.adjacency()(static_cast<Eigen::Index>(pc.i), static_cast<Eigen::Index>(pc.j)) * mass;
        }
    }
    if (!(report.denominator > 0.0)) {
        throw UndefinedCcrError("CCR is undefined: total inter-modal correlation is zero");
    }
    if (!g.has_unit_weights()) {
        report.weighted_numerator = weighted;
    }
    report.value = report.numerator / report.denominator;
    report.regime = classify_regime(report.value, thresholds);
    return report;
}

inline CcrReport ccr(
    const GaussianState &state, const Graph &g, CcrMode mode = CcrMode::Strict,
    const RegimeThresholds &thresholds = {}) {
    return ccr(reorder_state(state, QuadratureOrdering::Block).covariance(), g, mode, thresholds);
}

// ---------------------------------------------------------------------------
// Squeezing sweeps and size scaling

struct SweepRow {
    double db;
    double r;
    double value;
};

struct CcrSweep {
    std::string topology;
    CcrMode mode = CcrMode::Strict;
    std::vector<SweepRow> rows;
};

/// Grid from db_from in steps of db_step up to db_to. Points are computed as
/// db_from + k * step; db_to is included when it lies on the grid up to
/// floating-point slack.
inline std::vector<double> db_grid(double db_from, double db_to, double db_step) {
    if (!(std::isfinite(db_from) && std::isfinite(db_to) && std::isfinite(db_step))) {
        throw std::invalid_argument("sweep bounds must be finite");
    }
    if (db_from < 0.0 || db_from > db_to || !(db_step > 0.0)) {
        throw std::invalid_argument("sweep needs 0 <= from <= to and step > 0");
    }
    const auto steps = static_cast<std::size_t>(std::floor((db_to - db_from) / db_step + 1e-9));
    std::vector<double> grid;
    grid.reserve(steps + 1);
    for (std::size_t k = 0; k <= steps; ++k) {
        grid.push_back(db_from + static_cast<double>(k) * db_step);
    }
    return grid;
}

inline CcrSweep ccr_sweep(
    const Graph &g, double db_from, double db_to, double db_step, CcrMode mode = CcrMode::Strict,
    std::string topology = "custom") {
    CcrSweep sweep{std::move(topology), mode, {}};
    for (double db : db_grid(db_from, db_to, db_step)) {
        const auto squeezing = SqueezingSpec::from_db(db);
        const auto report = ccr(build_cluster(g, squeezing), g, mode);
        sweep.rows.push_back({db, squeezing.r(), report.value});
    }
    return sweep;
}

enum class Family { Path, Cycle, Star, Grid };

inline std::string_view to_string(Family family) {
    switch (family) {
        case Family::Path:
            return "path";
        case Family::Cycle:
            return "cycle";
        case Family::Star:
            return "star";
        case Family::Grid:
            return "grid";
    }
    return "unknown";
}

/// Accepts the family names and the four-mode aliases linear/square/tshape.
inline Family parse_family(std::string_view text) {
    if (text == "path" || text == "linear") {
        return Family::Path;
    }
    if (text == "cycle" || text == "square") {
        return Family::Cycle;
    }
    if (text == "star" || text == "tshape") {
        return Family::Star;
    }
    if (text == "grid") {
        return Family::Grid;
    }
    throw std::invalid_argument("unknown graph family '" + std::string(text) + "'");
}

/// The most nearly square rows x cols factorization of n, rows <= cols.
inline std::pair<std::size_t, std::size_t> grid_shape(std::size_t n) {
    if (n == 0) {
        throw std::invalid_argument("grid needs at least one vertex");
    }
    std::size_t rows = 1;
    for (std::size_t d = 1; d * d <= n; ++d) {
        if (n % d == 0) {
            rows = d;
        }
    }
    return {rows, n / rows};
}

inline Graph family_graph(Family family, std::size_t n) {
    switch (family) {
        case Family::Path:
            return path_graph(n);
        case Family::Cycle:
            return cycle_graph(n);
        case Family::Star:
            return star_graph(n);
        case Family::Grid: {
            const auto [rows, cols] = grid_shape(n);
            return grid_graph(rows, cols);
        }
    }
    throw std::invalid_argument("unknown graph family");
}

struct ScalingRow {
    std::size_t n_modes;
    double value;
};

inline std::vector<ScalingRow> ccr_scaling(
    Family family, const std::vector<std::size_t> &n_values, const SqueezingSpec &squeezing,
    CcrMode mode = CcrMode::Strict) {
    std::vector<ScalingRow> rows;
    rows.reserve(n_values.size());
    for (std::size_t n : n_values) {
        const Graph g = family_graph(family, n);
        rows.push_back({n, ccr(build_cluster(g, squeezing), g, mode).value});
    }
    return rows;
}

}  // namespace cvcluster
