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

// Command-line front end: build | nullifiers | ccr | sweep | scale | verify.
//
// Exit codes: 0 success, 1 verification or metric failure, 2 usage or
// configuration error.

#include "cvcluster/cvcluster.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iomanip>
#include <optional>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace cvcluster::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitUsage = 2;

enum class Format { Csv, Json, Pgm };

struct RunConfig {
    std::string topology;
    std::optional<std::size_t> modes;
    std::optional<std::size_t> rows;
    std::optional<std::size_t> cols;
    std::string edges_path;
    double db = 3.0;
    double from_db = 3.0;
    double to_db = 16.0;
    double db_step = 0.5;
    std::string mode = "strict";
    std::string ordering = "block";
    std::string format;
    std::string out;
    std::optional<double> tolerance;
    double t1 = 0.4;
    double t2 = 0.7;
    std::uint64_t seed = 2026;
    std::string family = "star";
    std::size_t n_from = 4;
    std::size_t n_to = 16;
    std::size_t n_step = 1;
};

/// Invalid configuration; maps to exit code 2.
class ConfigError : public std::runtime_error {
   public:
    using std::runtime_error::runtime_error;
};

struct NamedGraph {
    std::string label;
    Graph graph;
};

inline NamedGraph resolve_graph(const RunConfig &cfg) {
    std::string topology = cfg.topology;
    if (topology.empty()) {
        topology = cfg.edges_path.empty() ? "linear" : "custom";
    }
    if (!cfg.edges_path.empty() && topology != "custom") {
        throw ConfigError("--edges only applies to --topology custom");
    }
    if ((cfg.rows || cfg.cols) && topology != "grid") {
        throw ConfigError("--rows/--cols only apply to --topology grid");
    }
    const std::size_t n = cfg.modes.value_or(4);
    if (topology == "linear") {
        return {topology, path_graph(n)};
    }
    if (topology == "square" || topology == "cycle") {
        return {topology, cycle_graph(n)};
    }
    if (topology == "tshape" || topology == "star") {
        return {topology, star_graph(n)};
    }
    if (topology == "grid") {
        if (cfg.rows || cfg.cols) {
            if (!cfg.rows || !cfg.cols) {
                throw ConfigError("grid needs both --rows and --cols");
            }
            if (cfg.modes && *cfg.modes != *cfg.rows * *cfg.cols) {
                throw ConfigError("--modes disagrees with --rows x --cols");
            }
            return {topology, grid_graph(*cfg.rows, *cfg.cols)};
        }
        return {topology, family_graph(Family::Grid, n)};
    }
    if (topology == "custom") {
        if (cfg.edges_path.empty()) {
            throw ConfigError("--topology custom needs --edges FILE");
        }
        std::ifstream in(cfg.edges_path);
        if (!in) {
            throw ConfigError("cannot read edge list '" + cfg.edges_path + "'");
        }
        return {topology, parse_edge_list(in, cfg.modes)};
    }
    throw ConfigError("unknown topology '" + topology + "'");
}

/// Explicit --format wins but must agree with a recognised --out extension;
/// otherwise the extension decides, falling back to CSV.
inline Format resolve_format(const RunConfig &cfg, const std::vector<Format> &allowed) {
    std::optional<Format> from_ext;
    if (!cfg.out.empty()) {
        const std::string ext = std::filesystem::path(cfg.out).extension().string();
        if (ext == ".csv") {
            from_ext = Format::Csv;
        } else if (ext == ".json") {
            from_ext = Format::Json;
        } else if (ext == ".pgm") {
            from_ext = Format::Pgm;
        }
    }
    Format format = Format::Csv;
    if (!cfg.format.empty()) {
        if (cfg.format == "csv") {
            format = Format::Csv;
        } else if (cfg.format == "json") {
            format = Format::Json;
        } else if (cfg.format == "pgm") {
            format = Format::Pgm;
        } else {
            throw ConfigError("unknown format '" + cfg.format + "'");
        }
        if (from_ext && *from_ext != format) {
            throw ConfigError("--format " + cfg.format + " does not match output file '" + cfg.out + "'");
        }
    } else if (from_ext) {
        format = *from_ext;
    }
    if (std::find(allowed.begin(), allowed.end(), format) == allowed.end()) {
        throw ConfigError("format not supported by this command");
    }
    return format;
}

inline RegimeThresholds thresholds(const RunConfig &cfg) {
    RegimeThresholds t{cfg.t1, cfg.t2};
    t.validate();
    return t;
}

inline io::Metadata base_metadata(const NamedGraph &ng, const RunConfig &cfg, const SqueezingSpec *squeezing) {
    io::Metadata meta{
        {"topology", ng.label},
        {"modes", std::to_string(ng.graph.n_vertices())},
        {"ordering", cfg.ordering},
    };
    if (squeezing != nullptr) {
        meta.emplace_back("squeezing_db", io::format_number(squeezing->db()));
        meta.emplace_back("r", io::format_number(squeezing->r()));
    }
    meta.emplace_back("adjacency", io::matrix_inline(ng.graph.adjacency()));
    return meta;
}

inline std::string cmd_build(const RunConfig &cfg) {
    const Format format = resolve_format(cfg, {Format::Csv, Format::Json, Format::Pgm});
    const NamedGraph ng = resolve_graph(cfg);
    const auto squeezing = SqueezingSpec::from_db(cfg.db);
    const QuadratureOrdering ordering = parse_ordering(cfg.ordering);
    const GaussianState state = build_cluster(ng.graph, squeezing, ordering);
    std::ostringstream out;
    switch (format) {
        case Format::Csv:
            io::write_matrix_csv(out, base_metadata(ng, cfg, &squeezing), state.covariance());
            break;
        case Format::Json: {
            io::Document doc;
            doc.modes = ng.graph.n_vertices();
            doc.ordering = ordering;
            doc.squeezing = squeezing;
            doc.adjacency = ng.graph.adjacency();
            doc.covariance = state.covariance();
            out << io::dump(io::to_json(doc));
            break;
        }
        case Format::Pgm:
            io::write_pgm(out, state.covariance());
            break;
    }
    return out.str();
}

inline std::string cmd_nullifiers(const RunConfig &cfg) {
    const Format format = resolve_format(cfg, {Format::Csv, Format::Json});
    const NamedGraph ng = resolve_graph(cfg);
    const auto squeezing = SqueezingSpec::from_db(cfg.db);
    const QuadratureOrdering ordering = parse_ordering(cfg.ordering);
    const NullifierReport report = nullifier_report(build_cluster(ng.graph, squeezing, ordering), ng.graph, squeezing);
    std::ostringstream out;
    if (format == Format::Json) {
        io::Document doc;
        doc.modes = ng.graph.n_vertices();
        doc.ordering = ordering;
        doc.squeezing = squeezing;
        doc.adjacency = ng.graph.adjacency();
        doc.nullifier_variances = report.variances;
        out << io::dump(io::to_json(doc));
        return out.str();
    }
    const double theory = squeezing.squeezed_variance();
    std::vector<std::vector<std::string>> rows;
    for (Eigen::Index k = 0; k < report.variances.size(); ++k) {
        const double v = report.variances(k);
        rows.push_back({std::to_string(k + 1), io::format_number(v), io::format_number(theory),
                        io::format_number(v - theory)});
    }
    io::write_table_csv(out, base_metadata(ng, cfg, &squeezing), {"mode", "variance", "theoretical", "difference"},
                        rows);
    return out.str();
}

inline std::string cmd_ccr(const RunConfig &cfg) {
    const Format format = resolve_format(cfg, {Format::Csv, Format::Json});
    const NamedGraph ng = resolve_graph(cfg);
    const auto squeezing = SqueezingSpec::from_db(cfg.db);
    const CcrMode mode = parse_ccr_mode(cfg.mode);
    const QuadratureOrdering ordering = parse_ordering(cfg.ordering);
    const RegimeThresholds t = thresholds(cfg);
    const CcrReport report = ccr(build_cluster(ng.graph, squeezing, ordering), ng.graph, mode, t);
    std::ostringstream out;
    if (format == Format::Json) {
        io::Document doc;
        doc.modes = ng.graph.n_vertices();
        doc.ordering = ordering;
        doc.squeezing = squeezing;
        doc.adjacency = ng.graph.adjacency();
        doc.ccr = report;
        out << io::dump(io::to_json(doc));
        return out.str();
    }
    io::Metadata meta = base_metadata(ng, cfg, &squeezing);
    meta.emplace_back("mode", std::string(to_string(mode)));
    meta.emplace_back("value", io::format_number(report.value));
    meta.emplace_back("numerator", io::format_number(report.numerator));
    meta.emplace_back("denominator", io::format_number(report.denominator));
    if (report.weighted_numerator) {
        meta.emplace_back("weighted_numerator", io::format_number(*report.weighted_numerator));
    }
    meta.emplace_back("regime", std::string(to_string(report.regime)));
    std::vector<std::vector<std::string>> rows;
    for (const PairCorrelation &pc : report.per_pair) {
        rows.push_back({std::to_string(pc.i + 1), std::to_string(pc.j + 1), pc.on_edge ? "1" : "0",
                        io::format_number(pc.xp), io::format_number(pc.px), io::format_number(pc.xx),
                        io::format_number(pc.pp)});
    }
    io::write_table_csv(out, meta, {"i", "j", "on_edge", "abs_xp", "abs_px", "abs_xx", "abs_pp"}, rows);
    return out.str();
}

inline std::string cmd_sweep(const RunConfig &cfg) {
    resolve_format(cfg, {Format::Csv});
    const NamedGraph ng = resolve_graph(cfg);
    const CcrMode mode = parse_ccr_mode(cfg.mode);
    const CcrSweep sweep = ccr_sweep(ng.graph, cfg.from_db, cfg.to_db, cfg.db_step, mode, ng.label);
    std::vector<std::vector<std::string>> rows;
    for (const SweepRow &row : sweep.rows) {
        rows.push_back({io::format_number(row.db), io::format_number(row.r), io::format_number(row.value)});
    }
    std::ostringstream out;
    io::write_table_csv(out,
                        {{"topology", sweep.topology},
                         {"modes", std::to_string(ng.graph.n_vertices())},
                         {"mode", std::string(to_string(mode))}},
                        {"db", "r", "ccr"}, rows);
    return out.str();
}

inline std::string cmd_scale(const RunConfig &cfg) {
    resolve_format(cfg, {Format::Csv});
    if (cfg.n_step == 0 || cfg.n_from > cfg.n_to) {
        throw ConfigError("scale needs --from <= --to and --step >= 1");
    }
    const Family family = parse_family(cfg.family);
    const CcrMode mode = parse_ccr_mode(cfg.mode);
    const auto squeezing = SqueezingSpec::from_db(cfg.db);
    std::vector<std::size_t> ns;
    for (std::size_t n = cfg.n_from; n <= cfg.n_to; n += cfg.n_step) {
        ns.push_back(n);
    }
    std::vector<std::vector<std::string>> rows;
    for (const ScalingRow &row : ccr_scaling(family, ns, squeezing, mode)) {
        rows.push_back({std::to_string(row.n_modes), io::format_number(row.value)});
    }
    std::ostringstream out;
    io::write_table_csv(out,
                        {{"topology", std::string(to_string(family))},
                         {"mode", std::string(to_string(mode))},
                         {"squeezing_db", io::format_number(squeezing.db())}},
                        {"n_modes", "ccr"}, rows);
    return out.str();
}

/// Returns the report text and whether every check passed.
inline std::pair<std::string, bool> cmd_verify(const RunConfig &cfg) {
    VerifyOptions options;
    if (!cfg.topology.empty() || !cfg.edges_path.empty()) {
        NamedGraph ng = resolve_graph(cfg);
        options.topologies.emplace_back(ng.label, std::move(ng.graph));
    } else {
        options.topologies = paper_topologies();
    }
    options.db_from = cfg.from_db;
    options.db_to = cfg.to_db;
    options.db_step = cfg.db_step;
    options.tolerance = cfg.tolerance;
    options.seed = cfg.seed;
    const auto results = run_verification(options);
    std::ostringstream out;
    std::size_t failed = 0;
    for (const CheckResult &r : results) {
        failed += r.passed ? 0 : 1;
        out << (r.passed ? "PASS " : "FAIL ") << std::left << std::setw(40) << r.name
            << " residual=" << io::format_number(r.residual) << " tolerance=" << io::format_number(r.tolerance)
            << "\n";
    }
    out << results.size() - failed << "/" << results.size() << " checks passed\n";
    return {out.str(), failed == 0};
}

inline void add_common_options(CLI::App &sub, RunConfig &cfg) {
    sub.add_option("--topology", cfg.topology, "linear|square|tshape|star|cycle|grid|custom");
    sub.add_option("--modes", cfg.modes, "number of modes");
    sub.add_option("--rows", cfg.rows, "grid rows");
    sub.add_option("--cols", cfg.cols, "grid columns");
    sub.add_option("--edges", cfg.edges_path, "edge-list file (1-based 'i j [weight]' lines)");
    sub.add_option("--ordering", cfg.ordering, "block|interleaved");
    sub.add_option("--mode", cfg.mode, "CCR mode: strict|extended");
    sub.add_option("--format", cfg.format, "csv|json|pgm");
    sub.add_option("--out", cfg.out, "output path (stdout when omitted)");
    sub.add_option("--t1", cfg.t1, "lower regime threshold");
    sub.add_option("--t2", cfg.t2, "upper regime threshold");
}

inline void write_output(const RunConfig &cfg, const std::string &payload, std::ostream &out) {
    if (cfg.out.empty()) {
        out << payload;
        return;
    }
    std::ofstream file(cfg.out, std::ios::binary | std::ios::trunc);
    if (!file) {
        throw ConfigError("cannot open '" + cfg.out + "' for writing");
    }
    file << payload;
    file.flush();
    if (!file) {
        throw ConfigError("failed writing '" + cfg.out + "'");
    }
}

inline int run(const std::vector<std::string> &args, std::ostream &out, std::ostream &err) {
    RunConfig cfg;
    CLI::App app{"Gaussian CV cluster-state simulator"};
    app.require_subcommand(1);

    auto *build = app.add_subcommand("build", "Build a cluster state and write its covariance");
    add_common_options(*build, cfg);
    build->add_option("--db", cfg.db, "squeezing level in dB");

    auto *nullifiers = app.add_subcommand("nullifiers", "Nullifier variances of a cluster state");
    add_common_options(*nullifiers, cfg);
    nullifiers->add_option("--db", cfg.db, "squeezing level in dB");

    auto *ccr_cmd = app.add_subcommand("ccr", "Correlation Concentration Ratio of a cluster state");
    add_common_options(*ccr_cmd, cfg);
    ccr_cmd->add_option("--db", cfg.db, "squeezing level in dB");

    auto *sweep = app.add_subcommand("sweep", "CCR over a squeezing range");
    add_common_options(*sweep, cfg);
    sweep->add_option("--from-db", cfg.from_db, "first squeezing level");
    sweep->add_option("--to-db", cfg.to_db, "last squeezing level");
    sweep->add_option("--step", cfg.db_step, "squeezing step in dB");

    auto *scale = app.add_subcommand("scale", "CCR as a function of mode count");
    add_common_options(*scale, cfg);
    scale->add_option("--family", cfg.family, "path|linear|cycle|square|star|tshape|grid");
    scale->add_option("--from", cfg.n_from, "smallest mode count");
    scale->add_option("--to", cfg.n_to, "largest mode count");
    scale->add_option("--step", cfg.n_step, "mode count increment");
    scale->add_option("--db", cfg.db, "squeezing level in dB");

    auto *verify = app.add_subcommand("verify", "Run the invariant battery");
    add_common_options(*verify, cfg);
    verify->add_option("--from-db", cfg.from_db, "first squeezing level");
    verify->add_option("--to-db", cfg.to_db, "last squeezing level");
    verify->add_option("--step", cfg.db_step, "squeezing step in dB");
    verify->add_option("--tolerance", cfg.tolerance, "override every numeric tolerance");
    verify->add_option("--seed", cfg.seed, "Monte-Carlo seed");

    std::vector<const char *> argv{"cvcluster"};
    for (const auto &a : args) {
        argv.push_back(a.c_str());
    }
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError &e) {
        return app.exit(e, out, err) == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (verify->parsed()) {
            std::pair<std::string, bool> result;
            try {
                result = cmd_verify(cfg);
            } catch (const std::invalid_argument &e) {
                err << "verify: rejected input: " << e.what() << "\n";
                return kExitFailure;
            } catch (const ConfigError &e) {
                err << "verify: rejected input: " << e.what() << "\n";
                return kExitFailure;
            }
            write_output(cfg, result.first, out);
            return result.second ? kExitOk : kExitFailure;
        }
        std::string payload;
        if (build->parsed()) {
            payload = cmd_build(cfg);
        } else if (nullifiers->parsed()) {
            payload = cmd_nullifiers(cfg);
        } else if (ccr_cmd->parsed()) {
            payload = cmd_ccr(cfg);
        } else if (sweep->parsed()) {
            payload = cmd_sweep(cfg);
        } else if (scale->parsed()) {
            payload = cmd_scale(cfg);
        }
        write_output(cfg, payload, out);
        return kExitOk;
    } catch (const UndefinedCcrError &e) {
        err << "error: " << e.what() << "\n";
        return kExitFailure;
    } catch (const ConfigError &e) {
        err << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::invalid_argument &e) {
        err << "error: " << e.what() << "\n";
        return kExitUsage;
    }
}

}  // namespace cvcluster::cli
