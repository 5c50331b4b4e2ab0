#pragma once

#include "clonescope/analysis.hpp"
#include "clonescope/asset_clone.hpp"
#include "clonescope/error.hpp"
#include "clonescope/ingest.hpp"
#include "clonescope/metrics.hpp"
#include "clonescope/report.hpp"
#include "clonescope/source_clone.hpp"

#include <cstdlib>
#include <fstream>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace clonescope {

struct RunConfig {
    std::vector<CloneType> detection_types{std::begin(kAllCloneTypes), std::end(kAllCloneTypes)};
    double dissimilarity_threshold = 0.3;
    ClusterMode clustering = ClusterMode::Components;
    BackendConfig backend;  // carries the clone threshold (0.8 by default)
    CiConvention ci_convention = CiConvention::UnorderedPairs;
    std::size_t min_lines = 10;
    std::size_t max_lines = 2500;
    OutputFormat output_format = OutputFormat::Json;
    std::optional<fs::path> output_path;

    bool source = true;
    bool assets = true;
    bool categories = false;
    bool libraries = false;
    bool version_diffs = false;
    CloneType analysis_type = CloneType::T3_2;  // used by library attribution and version diffs
    std::optional<fs::path> registry_path;

    void validate() const {
        if (!(dissimilarity_threshold > 0.0 && dissimilarity_threshold <= 1.0)) {
            throw Error(ErrorKind::InvalidArgument, "dissimilarity threshold must lie in (0, 1]");
        }
        backend.validate();
        if (!source && !assets) throw Error(ErrorKind::InvalidArgument, "nothing to detect: source and assets both off");
        if (source && detection_types.empty()) throw Error(ErrorKind::InvalidArgument, "no detection types selected");
        if (min_lines > max_lines) throw Error(ErrorKind::InvalidArgument, "min_lines exceeds max_lines");
    }

    DetectionConfig detection(CloneType t) const {
        return DetectionConfig::for_type(t, dissimilarity_threshold, min_lines, max_lines);
    }

    /// Everything that shapes the numbers, minus secrets.
    nlohmann::json echo() const {
        std::vector<std::string> types;
        for (auto t : detection_types) types.emplace_back(to_string(t));
        return {
            {"detection_types", types},
            {"dissimilarity_threshold", dissimilarity_threshold},
            {"clone_threshold", backend.clone_threshold},
            {"clustering", to_string(clustering)},
            {"backend", to_string(backend.kind)},
            {"model", backend.model_name.value_or("")},
            {"ci_convention", ci_convention == CiConvention::UnorderedPairs ? "unordered" : "ordered"},
            {"min_lines", min_lines},
            {"max_lines", max_lines},
            {"source", source},
            {"assets", assets},
            {"categories", categories},
            {"libraries", libraries},
            {"version_diffs", version_diffs},
            {"analysis_type", to_string(analysis_type)},
        };
    }
};

namespace detail {

inline bool parse_bool(const std::string& key, const std::string& v) {
    if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
    if (v == "false" || v == "0" || v == "no" || v == "off") return false;
    throw Error(ErrorKind::InvalidArgument, key + ": expected a boolean, got '" + v + "'");
}

inline double parse_double(const std::string& key, const std::string& v) {
    try {
        std::size_t used = 0;
        double d = std::stod(v, &used);
        if (used == v.size()) return d;
    } catch (const std::exception&) {
    }
    throw Error(ErrorKind::InvalidArgument, key + ": expected a number, got '" + v + "'");
}

inline std::size_t parse_count(const std::string& key, const std::string& v) {
    try {
        std::size_t used = 0;
        auto n = std::stoull(v, &used);
        if (used == v.size()) return n;
    } catch (const std::exception&) {
    }
    throw Error(ErrorKind::InvalidArgument, key + ": expected a count, got '" + v + "'");
}

} // namespace detail

inline std::vector<CloneType> parse_type_list(const std::string& list) {
    std::vector<CloneType> out;
    std::stringstream ss(list);
    for (std::string item; std::getline(ss, item, ',');) {
        item = std::string(detail::trim(item));
        if (item.empty()) continue;
        if (item == "all") {
            out.assign(std::begin(kAllCloneTypes), std::end(kAllCloneTypes));
            continue;
        }
        auto t = parse_clone_type(item);
        if (!t) throw Error(ErrorKind::InvalidArgument, "unknown clone type '" + item + "'");
        if (std::find(out.begin(), out.end(), *t) == out.end()) out.push_back(*t);
    }
    return out;
}

inline ClusterMode parse_cluster_mode(const std::string& v) {
    if (v == "components") return ClusterMode::Components;
    if (v == "cliques") return ClusterMode::Cliques;
    throw Error(ErrorKind::InvalidArgument, "clustering must be components or cliques, got '" + v + "'");
}

inline BackendKind parse_backend_kind(const std::string& v) {
    if (v == "structural") return BackendKind::Structural;
    if (v == "llm") return BackendKind::LLM;
    throw Error(ErrorKind::InvalidArgument, "backend must be structural or llm, got '" + v + "'");
}

/// Applies one `key = value` setting; shared by the config file and CLI overrides.
inline void apply_setting(RunConfig& c, const std::string& key, const std::string& value) {
    if (key == "types") c.detection_types = parse_type_list(value);
    else if (key == "dissimilarity") c.dissimilarity_threshold = detail::parse_double(key, value);
    else if (key == "clone_threshold") c.backend.clone_threshold = detail::parse_double(key, value);
    else if (key == "clustering") c.clustering = parse_cluster_mode(value);
    else if (key == "backend") c.backend.kind = parse_backend_kind(value);
    else if (key == "model") c.backend.model_name = value;
    else if (key == "cache_dir") c.backend.cache_dir = value;
    else if (key == "max_concurrent_requests") c.backend.max_concurrent_requests = detail::parse_count(key, value);
    else if (key == "max_prompt_chars") c.backend.max_prompt_chars = detail::parse_count(key, value);
    else if (key == "max_retries") c.backend.max_retries = static_cast<int>(detail::parse_count(key, value));
    else if (key == "retry_backoff_ms") c.backend.retry_backoff_ms = static_cast<int>(detail::parse_count(key, value));
    else if (key == "transcript") c.backend.transcript_path = value;
    else if (key == "ci_convention") {
        if (value == "unordered") c.ci_convention = CiConvention::UnorderedPairs;
        else if (value == "ordered") c.ci_convention = CiConvention::OrderedPairs;
        else throw Error(ErrorKind::InvalidArgument, "ci_convention must be unordered or ordered");
    }
    else if (key == "min_lines") c.min_lines = detail::parse_count(key, value);
    else if (key == "max_lines") c.max_lines = detail::parse_count(key, value);
    else if (key == "format") {
        if (value == "json") c.output_format = OutputFormat::Json;
        else if (value == "csv") c.output_format = OutputFormat::Csv;
        else throw Error(ErrorKind::InvalidArgument, "format must be json or csv");
    }
    else if (key == "out") c.output_path = value;
    else if (key == "source") c.source = detail::parse_bool(key, value);
    else if (key == "assets") c.assets = detail::parse_bool(key, value);
    else if (key == "categories") c.categories = detail::parse_bool(key, value);
    else if (key == "libraries") c.libraries = detail::parse_bool(key, value);
    else if (key == "version_diffs") c.version_diffs = detail::parse_bool(key, value);
    else if (key == "analysis_type") {
        auto t = parse_clone_type(value);
        if (!t) throw Error(ErrorKind::InvalidArgument, "unknown clone type '" + value + "'");
        c.analysis_type = *t;
    }
    else if (key == "registry") c.registry_path = value;
    else if (key == "endpoint" || key == "api_key") {
        throw Error(ErrorKind::InvalidArgument, key + " is read from the environment only");
    }
    else throw Error(ErrorKind::InvalidArgument, "unknown setting '" + key + "'");
}

/// `key = value` lines, `#` comments.
inline void load_config_file(RunConfig& c, const fs::path& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorKind::Io, "cannot open config file " + path.string());
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        auto t = detail::trim(line);
        if (t.empty()) continue;
        auto eq = t.find('=');
        if (eq == std::string_view::npos) {
            throw Error(ErrorKind::Parse, path.string() + ":" + std::to_string(line_no) + ": expected key = value");
        }
        try {
            apply_setting(c, std::string(detail::trim(t.substr(0, eq))), std::string(detail::trim(t.substr(eq + 1))));
        } catch (const Error& e) {
            throw Error(e.kind(), path.string() + ":" + std::to_string(line_no) + ": " + e.what());
        }
    }
}

inline void load_backend_env(RunConfig& c) {
    if (const char* e = std::getenv("CLONESCOPE_LLM_ENDPOINT"); e && *e) c.backend.endpoint = e;
    if (const char* k = std::getenv("CLONESCOPE_LLM_KEY"); k && *k) c.backend.api_key = k;
}

// ---------------------------------------------------------------------------
// Orchestration
// ---------------------------------------------------------------------------

struct RunResult {
    Report report;
    int exit_code = 0;  // 0 ok, 2 at least one project failed
};

/// Builds the LLM transport on demand; tests inject a stub.
using TransportFactory = std::function<std::unique_ptr<LlmTransport>(const BackendConfig&)>;

namespace detail {

inline ProjectReport analyse_project(const RunConfig& cfg, const ProjectSnapshot& snap,
                                     const LibraryRegistry& registry, LlmTransport* transport) {
    ProjectReport pr;
    pr.project_id = snap.project_id;
    pr.version_label = snap.version_label;
    pr.files_scanned = snap.files_scanned();
    pr.source_files = snap.source_units.size();
    pr.asset_files = snap.asset_units.size();
    pr.excluded_files = snap.excluded_count();
    pr.warnings = snap.warnings;

    if (cfg.source) {
        // Line-count filtering does not depend on renaming, so one extraction serves every type.
        auto extracted = extract_project_functions(snap, cfg.detection(CloneType::T1));
        pr.warnings.insert(pr.warnings.end(), extracted.diagnostics.begin(), extracted.diagnostics.end());
        std::optional<SourceDetection> for_libs;
        for (auto t : cfg.detection_types) {
            auto det = detect_source_clones(extracted.fragments, cfg.detection(t), cfg.clustering);
            pr.source.push_back({source_metrics_or_zero(t, det.classes, det.pairs, det.fragments.size()),
                                 class_size_distribution(det.classes)});
            if (cfg.libraries && t == cfg.analysis_type) for_libs = std::move(det);
        }
        if (cfg.libraries) {
            if (!for_libs) for_libs = detect_source_clones(extracted.fragments, cfg.detection(cfg.analysis_type), cfg.clustering);
            auto tp = attribute_third_party(snap, for_libs->fragments, for_libs->pairs, for_libs->classes, registry);
            pr.libraries = LibraryBlock{to_string(cfg.analysis_type), std::move(tp.libraries), tp.project_ncf,
                                        tp.project_ncc, tp.combined_ncf, tp.combined_ncc};
        }
    }

    if (cfg.assets) {
        AssetParseOptions popts;
        auto parsed = parse_assets(snap.asset_units, popts);
        for (const auto& p : parsed) {
            for (const auto& w : p.doc.warnings) pr.warnings.push_back(p.unit.rel_path + ": " + w);
        }
        std::unique_ptr<PairScorer> scorer;
        if (cfg.backend.kind == BackendKind::LLM) {
            if (!transport) throw Error(ErrorKind::Backend, "LLM backend selected but no transport available");
            scorer = std::make_unique<LlmScorer>(cfg.backend, *transport);
        } else {
            scorer = std::make_unique<StructuralScorer>();
        }
        auto det = detect_clone_files(parsed, cfg.backend, *scorer);
        pr.warnings.insert(pr.warnings.end(), det.warnings.begin(), det.warnings.end());
        auto groups = cluster_clone_groups(det.records, cfg.backend.clone_threshold, cfg.clustering);
        AssetBlock block;
        block.backend = to_string(cfg.backend.kind);
        if (parsed.empty()) {
            block.metrics.group_sizes = group_size_distribution(groups);
        } else {
            block.metrics = compute_asset_metrics(groups, det.clone_files, det.records, parsed.size(), cfg.ci_convention);
        }
        pr.assets = std::move(block);
        if (cfg.categories) {
            std::vector<AssetDocument> docs;
            for (const auto& p : parsed) docs.push_back(p.doc);
            pr.categories = per_category_clone_index(docs, det.records, cfg.backend.clone_threshold, cfg.clustering,
                                                     cfg.ci_convention)
                                .per_category;
        }
    }
    return pr;
}

inline FailureEntry failure_from(const ManifestEntry& t, const std::exception& e) {
    FailureEntry f{t.project_id, t.version_label.value_or(""), "error", e.what()};
    if (auto* ce = dynamic_cast<const Error*>(&e)) f.kind = to_string(ce->kind());
    return f;
}

} // namespace detail

/**
 * ingest -> detection -> metrics -> requested analyses, per target. A failing
 * project is recorded and the run continues; the exit code then becomes 2.
 * Projects appear in manifest order.
 */
inline RunResult run(const RunConfig& cfg, const std::vector<ManifestEntry>& targets,
                     const TransportFactory& make_transport = {}) {
    cfg.validate();
    RunResult res;
    res.report.config = cfg.echo();

    const auto registry = cfg.registry_path ? LibraryRegistry::load(*cfg.registry_path) : LibraryRegistry::builtin();
    std::unique_ptr<LlmTransport> transport;
    if (cfg.assets && cfg.backend.kind == BackendKind::LLM) {
        if (!make_transport) throw Error(ErrorKind::InvalidArgument, "LLM backend selected without a transport");
        transport = make_transport(cfg.backend);
    }

    std::vector<std::optional<ProjectSnapshot>> snapshots;
    for (const auto& t : targets) {
        try {
            auto snap = scan_project(t.root_path, {}, t.project_id);
            snap.version_label = t.version_label.value_or("");
            res.report.projects.push_back(detail::analyse_project(cfg, snap, registry, transport.get()));
            snapshots.emplace_back(cfg.version_diffs ? std::optional(std::move(snap)) : std::nullopt);
        } catch (const std::exception& e) {
            res.report.failures.push_back(detail::failure_from(t, e));
            snapshots.emplace_back(std::nullopt);
        }
    }

    if (cfg.version_diffs && cfg.source) {
        // Adjacent versions of the same project, in manifest order.
        std::map<std::string, std::vector<std::size_t>> by_project;
        std::vector<std::string> order;
        for (std::size_t i = 0; i < targets.size(); ++i) {
            if (!targets[i].version_label) continue;
            if (!by_project.contains(targets[i].project_id)) order.push_back(targets[i].project_id);
            by_project[targets[i].project_id].push_back(i);
        }
        for (const auto& pid : order) {
            const auto& idx = by_project[pid];
            for (std::size_t k = 0; k + 1 < idx.size(); ++k) {
                const auto& sa = snapshots[idx[k]];
                const auto& sb = snapshots[idx[k + 1]];
                if (!sa || !sb) {
                    res.report.warnings.push_back(pid + ": version diff " + targets[idx[k]].version_label.value_or("") +
                                                  " -> " + targets[idx[k + 1]].version_label.value_or("") +
                                                  " skipped, a version failed to scan");
                    continue;
                }
                try {
                    auto v = inter_version_clones(*sa, *sb, cfg.detection(cfg.analysis_type), cfg.clustering);
                    res.report.version_diffs.push_back({v.project_id, v.version_a, v.version_b,
                                                        to_string(cfg.analysis_type), v.cross_metrics, v.metrics_a,
                                                        v.metrics_b, v.intra_a_pairs, v.intra_b_pairs, v.cross_pairs,
                                                        v.cross_exact_pairs, v.fragments_with_cross_twin});
                } catch (const std::exception& e) {
                    res.report.failures.push_back(detail::failure_from(targets[idx[k + 1]], e));
                }
            }
        }
    }
    res.exit_code = res.report.failures.empty() ? 0 : 2;
    return res;
}

} // namespace clonescope
