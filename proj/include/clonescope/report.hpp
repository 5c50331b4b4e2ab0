#pragma once

#include "clonescope/analysis.hpp"
#include "clonescope/error.hpp"
#include "clonescope/metrics.hpp"

#include <nlohmann/json.hpp>

#include <cstdio>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace clonescope {

inline constexpr std::string_view kToolVersion = "clonescope 1.0.0";

struct SourceBlock {
    SourceCloneMetrics metrics;
    SizeDistribution class_sizes;

    bool operator==(const SourceBlock&) const = default;
};

struct AssetBlock {
    std::string backend;
    AssetCloneMetrics metrics;

    bool operator==(const AssetBlock&) const = default;
};

/// Third-party attribution as it appears in a report.
struct LibraryBlock {
    std::string clone_type;
    std::vector<LibraryAttribution> libraries;
    std::uint64_t project_ncf = 0;
    std::uint64_t project_ncc = 0;
    std::uint64_t combined_ncf = 0;
    std::uint64_t combined_ncc = 0;

    bool operator==(const LibraryBlock&) const = default;
};

struct ProjectReport {
    std::string project_id;
    std::string version_label;
    std::uint64_t files_scanned = 0;
    std::uint64_t source_files = 0;
    std::uint64_t asset_files = 0;
    std::uint64_t excluded_files = 0;
    std::vector<SourceBlock> source;
    std::optional<AssetBlock> assets;
    std::optional<std::map<FileCategory, CategoryStats>> categories;
    std::optional<LibraryBlock> libraries;
    std::vector<std::string> warnings;

    bool operator==(const ProjectReport&) const = default;
};

struct VersionDiffBlock {
    std::string project_id;
    std::string version_a;
    std::string version_b;
    std::string clone_type;
    SourceCloneMetrics cross_metrics;
    SourceCloneMetrics metrics_a;
    SourceCloneMetrics metrics_b;
    std::uint64_t intra_a_pairs = 0;
    std::uint64_t intra_b_pairs = 0;
    std::uint64_t cross_pairs = 0;
    std::uint64_t cross_exact_pairs = 0;
    std::uint64_t fragments_with_cross_twin = 0;

    bool operator==(const VersionDiffBlock&) const = default;
};

struct FailureEntry {
    std::string project_id;
    std::string version_label;
    std::string kind;
    std::string message;

    bool operator==(const FailureEntry&) const = default;
};

struct Report {
    std::string tool_version{kToolVersion};
    nlohmann::json config = nlohmann::json::object();
    std::vector<ProjectReport> projects;
    std::vector<VersionDiffBlock> version_diffs;
    std::vector<FailureEntry> failures;
    std::vector<std::string> warnings;

    bool operator==(const Report&) const = default;
};

// ---------------------------------------------------------------------------
// JSON. Keys are sorted (nlohmann's default object is a std::map); fractions
// appear raw next to their rendered percentage. Derived fields are ignored
// when reading back.
// ---------------------------------------------------------------------------

namespace detail {

inline nlohmann::json ratio_json(const Ratio& r, int decimals = 2) {
    return {{"num", r.num}, {"den", r.den}, {"value", r.value()}, {"percent", render_percent(r, decimals)}};
}

inline FileCategory parse_category(const std::string& s) {
    for (auto c : {FileCategory::Scene, FileCategory::Template, FileCategory::Material, FileCategory::Config,
                   FileCategory::Resource, FileCategory::Meta, FileCategory::Source, FileCategory::Unknown}) {
        if (s == to_string(c)) return c;
    }
    throw Error(ErrorKind::Parse, "unknown file category in report: " + s);
}

inline CloneType parse_type_or_throw(const std::string& s) {
    auto t = parse_clone_type(s);
    if (!t) throw Error(ErrorKind::Parse, "unknown clone type in report: " + s);
    return *t;
}

} // namespace detail

inline void to_json(nlohmann::json& j, const SizeDistribution& d) {
    j = nlohmann::json::object();
    j["total"] = d.total;
    auto& b = j["buckets"] = nlohmann::json::array();
    for (const auto& x : d.buckets) {
        b.push_back({{"label", x.label()}, {"lo", x.lo}, {"hi", x.hi}, {"count", x.count},
                     {"share", render_percent({x.count, d.total == 0 ? 1 : d.total}, 1)}});
    }
}

inline void from_json(const nlohmann::json& j, SizeDistribution& d) {
    d.total = j.at("total").get<std::uint64_t>();
    d.buckets.clear();
    for (const auto& x : j.at("buckets")) {
        d.buckets.push_back({x.at("lo").get<std::uint64_t>(), x.at("hi").get<std::uint64_t>(),
                             x.at("count").get<std::uint64_t>()});
    }
}

inline void to_json(nlohmann::json& j, const SourceCloneMetrics& m) {
    j = {{"clone_type", to_string(m.clone_type)}, {"ncf", m.ncf}, {"ncc", m.ncc},
         {"total_functions", m.total_functions}, {"rcf", detail::ratio_json(m.rcf())},
         {"rcc", detail::ratio_json(m.rcc())}};
}

inline void from_json(const nlohmann::json& j, SourceCloneMetrics& m) {
    m.clone_type = detail::parse_type_or_throw(j.at("clone_type").get<std::string>());
    m.ncf = j.at("ncf").get<std::uint64_t>();
    m.ncc = j.at("ncc").get<std::uint64_t>();
    m.total_functions = j.at("total_functions").get<std::uint64_t>();
}

inline void to_json(nlohmann::json& j, const SourceBlock& b) {
    j = b.metrics;
    j["class_sizes"] = b.class_sizes;
}

inline void from_json(const nlohmann::json& j, SourceBlock& b) {
    b.metrics = j.get<SourceCloneMetrics>();
    b.class_sizes = j.at("class_sizes").get<SizeDistribution>();
}

inline void to_json(nlohmann::json& j, const AssetBlock& b) {
    const auto& m = b.metrics;
    j = {{"backend", b.backend}, {"nca", m.nca}, {"ncg", m.ncg}, {"total_assets", m.total_assets},
         {"rca", detail::ratio_json(m.rca())}, {"rcg", detail::ratio_json(m.rcg())}, {"ci", m.ci},
         {"group_sizes", m.group_sizes}};
}

inline void from_json(const nlohmann::json& j, AssetBlock& b) {
    b.backend = j.at("backend").get<std::string>();
    b.metrics.nca = j.at("nca").get<std::uint64_t>();
    b.metrics.ncg = j.at("ncg").get<std::uint64_t>();
    b.metrics.total_assets = j.at("total_assets").get<std::uint64_t>();
    b.metrics.ci = j.at("ci").get<double>();
    b.metrics.group_sizes = j.at("group_sizes").get<SizeDistribution>();
}

inline void to_json(nlohmann::json& j, const CategoryStats& s) {
    j = {{"file_count", s.file_count}, {"ci", s.ci}, {"nca", s.nca}, {"ncg", s.ncg}, {"degenerate", s.degenerate}};
}

inline void from_json(const nlohmann::json& j, CategoryStats& s) {
    s.file_count = j.at("file_count").get<std::uint64_t>();
    s.ci = j.at("ci").get<double>();
    s.nca = j.at("nca").get<std::uint64_t>();
    s.ncg = j.at("ncg").get<std::uint64_t>();
    s.degenerate = j.at("degenerate").get<bool>();
}

inline void to_json(nlohmann::json& j, const LibraryAttribution& a) {
    j = {{"library", a.library_name}, {"detected", a.detected}, {"key_file", a.key_file}, {"prefix", a.prefix},
         {"lib_ncf", a.lib_ncf}, {"lib_ncc", a.lib_ncc}, {"share_ncf", detail::ratio_json(a.share_ncf)},
         {"share_ncc", detail::ratio_json(a.share_ncc)}};
}

inline void from_json(const nlohmann::json& j, LibraryAttribution& a) {
    a.library_name = j.at("library").get<std::string>();
    a.detected = j.at("detected").get<bool>();
    a.key_file = j.at("key_file").get<std::string>();
    a.prefix = j.at("prefix").get<std::string>();
    a.lib_ncf = j.at("lib_ncf").get<std::uint64_t>();
    a.lib_ncc = j.at("lib_ncc").get<std::uint64_t>();
    a.share_ncf = {j.at("share_ncf").at("num").get<std::uint64_t>(), j.at("share_ncf").at("den").get<std::uint64_t>()};
    a.share_ncc = {j.at("share_ncc").at("num").get<std::uint64_t>(), j.at("share_ncc").at("den").get<std::uint64_t>()};
}

inline void to_json(nlohmann::json& j, const LibraryBlock& b) {
    j = {{"clone_type", b.clone_type}, {"libraries", b.libraries}, {"project_ncf", b.project_ncf},
         {"project_ncc", b.project_ncc}, {"combined_ncf", b.combined_ncf}, {"combined_ncc", b.combined_ncc},
         {"combined_share_ncf", detail::ratio_json({b.combined_ncf, b.project_ncf})},
         {"combined_share_ncc", detail::ratio_json({b.combined_ncc, b.project_ncc})}};
}

inline void from_json(const nlohmann::json& j, LibraryBlock& b) {
    b.clone_type = j.at("clone_type").get<std::string>();
    b.libraries = j.at("libraries").get<std::vector<LibraryAttribution>>();
    b.project_ncf = j.at("project_ncf").get<std::uint64_t>();
    b.project_ncc = j.at("project_ncc").get<std::uint64_t>();
    b.combined_ncf = j.at("combined_ncf").get<std::uint64_t>();
    b.combined_ncc = j.at("combined_ncc").get<std::uint64_t>();
}

inline void to_json(nlohmann::json& j, const ProjectReport& p) {
    j = {{"project_id", p.project_id}, {"version", p.version_label}, {"files_scanned", p.files_scanned},
         {"source_files", p.source_files}, {"asset_files", p.asset_files}, {"excluded_files", p.excluded_files},
         {"source_metrics", p.source}, {"warnings", p.warnings}};
    j["asset_metrics"] = p.assets ? nlohmann::json(*p.assets) : nlohmann::json(nullptr);
    if (p.categories) {
        auto& c = j["categories"] = nlohmann::json::object();
        for (const auto& [cat, s] : *p.categories) c[to_string(cat)] = s;
    } else {
        j["categories"] = nullptr;
    }
    j["libraries"] = p.libraries ? nlohmann::json(*p.libraries) : nlohmann::json(nullptr);
}

inline void from_json(const nlohmann::json& j, ProjectReport& p) {
    p.project_id = j.at("project_id").get<std::string>();
    p.version_label = j.at("version").get<std::string>();
    p.files_scanned = j.at("files_scanned").get<std::uint64_t>();
    p.source_files = j.at("source_files").get<std::uint64_t>();
    p.asset_files = j.at("asset_files").get<std::uint64_t>();
    p.excluded_files = j.at("excluded_files").get<std::uint64_t>();
    p.source = j.at("source_metrics").get<std::vector<SourceBlock>>();
    p.warnings = j.at("warnings").get<std::vector<std::string>>();
    p.assets.reset();
    if (!j.at("asset_metrics").is_null()) p.assets = j["asset_metrics"].get<AssetBlock>();
    p.categories.reset();
    if (!j.at("categories").is_null()) {
        p.categories.emplace();
        for (const auto& [k, v] : j["categories"].items()) (*p.categories)[detail::parse_category(k)] = v.get<CategoryStats>();
    }
    p.libraries.reset();
    if (!j.at("libraries").is_null()) p.libraries = j["libraries"].get<LibraryBlock>();
}

inline void to_json(nlohmann::json& j, const VersionDiffBlock& d) {
    j = {{"project_id", d.project_id}, {"version_a", d.version_a}, {"version_b", d.version_b},
         {"clone_type", d.clone_type}, {"cross_metrics", d.cross_metrics}, {"metrics_a", d.metrics_a},
         {"metrics_b", d.metrics_b}, {"intra_a_pairs", d.intra_a_pairs}, {"intra_b_pairs", d.intra_b_pairs},
         {"cross_pairs", d.cross_pairs}, {"cross_exact_pairs", d.cross_exact_pairs},
         {"fragments_with_cross_twin", d.fragments_with_cross_twin}};
}

inline void from_json(const nlohmann::json& j, VersionDiffBlock& d) {
    d.project_id = j.at("project_id").get<std::string>();
    d.version_a = j.at("version_a").get<std::string>();
    d.version_b = j.at("version_b").get<std::string>();
    d.clone_type = j.at("clone_type").get<std::string>();
    d.cross_metrics = j.at("cross_metrics").get<SourceCloneMetrics>();
    d.metrics_a = j.at("metrics_a").get<SourceCloneMetrics>();
    d.metrics_b = j.at("metrics_b").get<SourceCloneMetrics>();
    d.intra_a_pairs = j.at("intra_a_pairs").get<std::uint64_t>();
    d.intra_b_pairs = j.at("intra_b_pairs").get<std::uint64_t>();
    d.cross_pairs = j.at("cross_pairs").get<std::uint64_t>();
    d.cross_exact_pairs = j.at("cross_exact_pairs").get<std::uint64_t>();
    d.fragments_with_cross_twin = j.at("fragments_with_cross_twin").get<std::uint64_t>();
}

inline void to_json(nlohmann::json& j, const FailureEntry& f) {
    j = {{"project_id", f.project_id}, {"version", f.version_label}, {"kind", f.kind}, {"message", f.message}};
}

inline void from_json(const nlohmann::json& j, FailureEntry& f) {
    f.project_id = j.at("project_id").get<std::string>();
    f.version_label = j.at("version").get<std::string>();
    f.kind = j.at("kind").get<std::string>();
    f.message = j.at("message").get<std::string>();
}

inline void to_json(nlohmann::json& j, const Report& r) {
    j = {{"tool_version", r.tool_version}, {"config", r.config}, {"projects", r.projects},
         {"version_diffs", r.version_diffs}, {"failures", r.failures}, {"warnings", r.warnings}};
}

inline void from_json(const nlohmann::json& j, Report& r) {
    r.tool_version = j.at("tool_version").get<std::string>();
    r.config = j.at("config");
    r.projects = j.at("projects").get<std::vector<ProjectReport>>();
    r.version_diffs = j.at("version_diffs").get<std::vector<VersionDiffBlock>>();
    r.failures = j.at("failures").get<std::vector<FailureEntry>>();
    r.warnings = j.at("warnings").get<std::vector<std::string>>();
}

inline std::string report_to_json(const Report& r) {
    return nlohmann::json(r).dump(2) + "\n";
}

inline Report report_from_json(std::string_view text) {
    auto j = nlohmann::json::parse(text, nullptr, false);
    if (j.is_discarded()) throw Error(ErrorKind::Parse, "report is not valid JSON");
    try {
        return j.get<Report>();
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorKind::Parse, std::string("malformed report: ") + e.what());
    }
}

// ---------------------------------------------------------------------------
// CSV: one fixed header; `record` says which columns a row fills.
// ---------------------------------------------------------------------------

inline constexpr std::string_view kCsvHeader =
    "record,project_id,version,clone_type,ncf,ncc,total_functions,rcf,rcc,nca,ncg,total_assets,rca,rcg,ci";

namespace detail {

inline std::string csv_cell(std::string_view s) {
    if (s.find_first_of(",\"\n\r") == std::string_view::npos) return std::string(s);
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + "\"";
}

inline std::string fixed4(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.4f", v);
    return buf;
}

} // namespace detail

inline std::string report_to_csv(const Report& r) {
    using detail::csv_cell;
    std::ostringstream out;
    out << kCsvHeader << "\n";
    for (const auto& p : r.projects) {
        const auto id = csv_cell(p.project_id) + "," + csv_cell(p.version_label);
        for (const auto& s : p.source) {
            const auto& m = s.metrics;
            out << "source," << id << "," << to_string(m.clone_type) << "," << m.ncf << "," << m.ncc << ","
                << m.total_functions << "," << render_percent(m.rcf()) << "," << render_percent(m.rcc())
                << ",,,,,,\n";
        }
        if (p.assets) {
            const auto& m = p.assets->metrics;
            out << "asset," << id << ",,,,,,," << m.nca << "," << m.ncg << "," << m.total_assets << ","
                << render_percent(m.rca()) << "," << render_percent(m.rcg()) << "," << detail::fixed4(m.ci) << "\n";
        }
    }
    return out.str();
}

enum class OutputFormat { Json, Csv };

inline std::string render_report(const Report& r, OutputFormat f) {
    return f == OutputFormat::Json ? report_to_json(r) : report_to_csv(r);
}

inline void emit_report(const Report& r, OutputFormat f, const fs::path& path) {
    if (path.has_parent_path()) {
        std::error_code ec;
        fs::create_directories(path.parent_path(), ec);
    }
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorKind::Io, "cannot write report to " + path.string());
    out << render_report(r, f);
    if (!out) throw Error(ErrorKind::Io, "write failed for " + path.string());
}

} // namespace clonescope
