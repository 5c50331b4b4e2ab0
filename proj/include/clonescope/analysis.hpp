#pragma once

#include "clonescope/asset_clone.hpp"
#include "clonescope/error.hpp"
#include "clonescope/ingest.hpp"
#include "clonescope/metrics.hpp"
#include "clonescope/source_clone.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <set>
#include <span>
#include <sstream>
#include <string>
#include <vector>

namespace clonescope {

/// Metrics that tolerate an empty fragment universe (all zeros, |F| = 0).
inline SourceCloneMetrics source_metrics_or_zero(CloneType type, std::span<const CloneClass> classes,
                                                 std::span<const ClonePair> pairs, std::uint64_t total) {
    if (total == 0) return {type, 0, 0, 0};
    return compute_source_metrics(type, classes, pairs, total);
}

// ---------------------------------------------------------------------------
// Inter-version clones
// ---------------------------------------------------------------------------

/// A fragment named by where it lives, so results survive relabelling of ids.
struct FragmentRef {
    std::string version;
    std::string unit_path;
    int start_line = 0;

    auto operator<=>(const FragmentRef&) const = default;
};

struct VersionedPair {
    FragmentRef a;  // a < b
    FragmentRef b;
    double similarity = 0.0;

    bool operator==(const VersionedPair&) const = default;
};

struct VersionPairReport {
    std::string project_id;
    std::string version_a;
    std::string version_b;
    SourceCloneMetrics cross_metrics;  // over the pooled universe, |F| = |F_a| + |F_b|
    SourceCloneMetrics metrics_a;
    SourceCloneMetrics metrics_b;
    std::uint64_t intra_a_pairs = 0;
    std::uint64_t intra_b_pairs = 0;
    std::uint64_t cross_pairs = 0;
    std::uint64_t cross_exact_pairs = 0;
    std::uint64_t fragments_with_cross_twin = 0;  // fragments of version_a with an exact counterpart in version_b
    std::vector<VersionedPair> pairs;
    std::vector<std::string> diagnostics;
};

inline VersionPairReport inter_version_clones(const ProjectSnapshot& a, const ProjectSnapshot& b,
                                              const DetectionConfig& config,
                                              ClusterMode mode = ClusterMode::Components) {
    if (a.project_id != b.project_id) {
        throw Error(ErrorKind::InvalidArgument,
                    "version diff needs snapshots of one project, got " + a.project_id + " and " + b.project_id);
    }
    if (a.version_label == b.version_label) {
        throw Error(ErrorKind::InvalidArgument, "identical version labels: '" + a.version_label + "'");
    }
    auto fa = extract_project_functions(a, config, 0);
    const auto n_a = static_cast<std::uint32_t>(fa.fragments.size());
    auto fb = extract_project_functions(b, config, n_a);

    std::vector<FunctionFragment> pooled = fa.fragments;
    pooled.insert(pooled.end(), fb.fragments.begin(), fb.fragments.end());
    const auto det = detect_source_clones(pooled, config, mode);

    VersionPairReport r;
    r.project_id = a.project_id;
    r.version_a = a.version_label;
    r.version_b = b.version_label;
    r.diagnostics = fa.diagnostics;
    r.diagnostics.insert(r.diagnostics.end(), fb.diagnostics.begin(), fb.diagnostics.end());

    auto in_a = [&](FragmentId id) { return id.value < n_a; };
    auto ref = [&](FragmentId id) {
        const auto& f = det.fragments[id.value];
        return FragmentRef{in_a(id) ? r.version_a : r.version_b, f.unit_path, f.start_line};
    };

    std::vector<ClonePair> only_a, only_b;
    std::set<FragmentId> twinned;
    for (const auto& p : det.pairs) {
        const bool pa = in_a(p.a), pb = in_a(p.b);
        if (pa && pb) {
            ++r.intra_a_pairs;
            only_a.push_back(p);
        } else if (!pa && !pb) {
            ++r.intra_b_pairs;
            only_b.push_back(p);
        } else {
            ++r.cross_pairs;
            if (p.similarity >= 1.0) {
                ++r.cross_exact_pairs;
                twinned.insert(pa ? p.a : p.b);
            }
        }
        auto x = ref(p.a), y = ref(p.b);
        if (y < x) std::swap(x, y);
        r.pairs.push_back({std::move(x), std::move(y), p.similarity});
    }
    std::sort(r.pairs.begin(), r.pairs.end(), [](const VersionedPair& x, const VersionedPair& y) {
        return std::tie(x.a, x.b) < std::tie(y.a, y.b);
    });
    r.fragments_with_cross_twin = twinned.size();

    r.cross_metrics = source_metrics_or_zero(config.clone_type, det.classes, det.pairs, pooled.size());
    r.metrics_a = source_metrics_or_zero(config.clone_type, cluster_clone_classes(only_a, mode), only_a, n_a);
    r.metrics_b = source_metrics_or_zero(config.clone_type, cluster_clone_classes(only_b, mode), only_b,
                                         fb.fragments.size());
    return r;
}

// ---------------------------------------------------------------------------
// Third-party library attribution
// ---------------------------------------------------------------------------

struct LibraryEntry {
    std::string name;
    std::string key_file;  // relative to the Unity project root
    std::string prefix;    // library directory, relative to the same root

    bool operator==(const LibraryEntry&) const = default;
};

class LibraryRegistry {
public:
    LibraryRegistry() = default;
    explicit LibraryRegistry(std::vector<LibraryEntry> entries) : entries_(std::move(entries)) {}

    /// The fourteen libraries examined for VR projects, keyed by a distinctive file each.
    static LibraryRegistry builtin() {
        return LibraryRegistry({
            {"SteamVR", "Assets/SteamVR/Input/SteamVR_Input.cs", "Assets/SteamVR/"},
            {"Oculus", "Assets/Oculus/VR/Scripts/OVRManager.cs", "Assets/Oculus/"},
            {"OpenVR", "Assets/Plugins/openvr/api.cs", "Assets/Plugins/openvr/"},
            {"Vive", "Assets/SteamVR/InteractionSystem/Core/Interfaces/Hand.cs", "Assets/SteamVR/InteractionSystem/"},
            {"GoogleVR", "Assets/GoogleVR/Legacy/Scripts/GvrViewer.cs", "Assets/GoogleVR/"},
            {"VRTK", "Assets/VRTK/SDK/Base/Scripts/VRTK_SDKManager.cs", "Assets/VRTK/"},
            {"UnityXR", "Assets/XR/Input/XRController.cs", "Assets/XR/"},
            {"OpenXR", "Assets/XR/OpenXR/Settings/OpenXRSettings.asset", "Assets/XR/OpenXR/"},
            {"OSVR", "Assets/OSVR/ClientKit/OSVR_ClientContext.cs", "Assets/OSVR/"},
            {"PicoSDK", "Assets/PicoMobileSDK/Scripts/PicoVR_Manager.cs", "Assets/PicoMobileSDK/"},
            {"WaveSDK", "Assets/WaveVR/Scripts/WaveVR_Reticle.cs", "Assets/WaveVR/"},
            {"VarjoBase", "Assets/Varjo/Scripts/VarjoManager.cs", "Assets/Varjo/"},
            {"Ultraleap", "Assets/Ultraleap/Hands/LeapHandController.cs", "Assets/Ultraleap/"},
            {"WebXR", "Assets/WebXR/Plugins/WebXRInterface.cs", "Assets/WebXR/"},
        });
    }

    /// `name key_file prefix` per line, `#` comments.
    static LibraryRegistry parse(std::istream& in) {
        std::vector<LibraryEntry> entries;
        std::string line;
        std::size_t line_no = 0;
        while (std::getline(in, line)) {
            ++line_no;
            if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
            std::istringstream fields(line);
            std::vector<std::string> cols;
            for (std::string f; fields >> f;) cols.push_back(std::move(f));
            if (cols.empty()) continue;
            if (cols.size() != 3) {
                throw Error(ErrorKind::Parse, "registry line " + std::to_string(line_no) +
                                                  ": expected 'name key_file prefix', got " +
                                                  std::to_string(cols.size()) + " field(s)");
            }
            if (!cols[2].ends_with('/')) cols[2] += '/';
            entries.push_back({cols[0], cols[1], cols[2]});
        }
        return LibraryRegistry(std::move(entries));
    }

    static LibraryRegistry load(const fs::path& path) {
        std::ifstream in(path);
        if (!in) throw Error(ErrorKind::Io, "cannot open library registry " + path.string());
        return parse(in);
    }

    const std::vector<LibraryEntry>& entries() const { return entries_; }

private:
    std::vector<LibraryEntry> entries_;
};

struct LibraryAttribution {
    std::string library_name;
    bool detected = false;
    std::string key_file;  // as found in the snapshot, empty when not detected
    std::string prefix;    // effective prefix in snapshot coordinates
    std::uint64_t lib_ncf = 0;
    std::uint64_t lib_ncc = 0;
    Ratio share_ncf;
    Ratio share_ncc;

    bool operator==(const LibraryAttribution&) const = default;
};

struct ThirdPartyReport {
    std::vector<LibraryAttribution> libraries;
    std::uint64_t project_ncf = 0;
    std::uint64_t project_ncc = 0;
    std::uint64_t combined_ncf = 0;  // distinct functions attributed to any detected library
    std::uint64_t combined_ncc = 0;

    Ratio combined_share_ncf() const { return {combined_ncf, project_ncf}; }
    Ratio combined_share_ncc() const { return {combined_ncc, project_ncc}; }
};

/// Summed library counts over a project total, as tabulated per project.
inline Ratio combined_share(std::uint64_t project_total, std::span<const std::uint64_t> library_counts) {
    std::uint64_t sum = 0;
    for (auto c : library_counts) sum += c;
    return {sum, project_total};
}

namespace detail {

// Key files are matched at the root or below a subdirectory holding the
// Unity project; the returned base is prepended to the registry prefix.
inline std::optional<std::string> find_key_file(const ProjectSnapshot& snap, const std::string& key) {
    std::optional<std::string> best;
    auto consider = [&](const std::string& path) {
        if (path == key || path.ends_with("/" + key)) {
            auto base = path.substr(0, path.size() - key.size());
            if (!best || base.size() < best->size() || (base.size() == best->size() && base < *best)) best = base;
        }
    };
    for (const auto& u : snap.source_units) consider(u.rel_path);
    for (const auto& u : snap.asset_units) consider(u.rel_path);
    for (const auto& u : snap.excluded) consider(u.rel_path);
    return best;
}

} // namespace detail

/**
 * A library is detected when its key file is present. Its clone functions
 * are those in a pair whose two ends both lie under the library prefix; its
 * clone classes those whose every member does. Straddling pairs and classes
 * stay with the project.
 */
inline ThirdPartyReport attribute_third_party(const ProjectSnapshot& snapshot,
                                              std::span<const FunctionFragment> fragments,
                                              std::span<const ClonePair> pairs, std::span<const CloneClass> classes,
                                              const LibraryRegistry& registry) {
    std::map<FragmentId, const FunctionFragment*> by_id;
    for (const auto& f : fragments) by_id[f.id] = &f;
    auto path_of = [&](FragmentId id) -> const std::string& {
        auto it = by_id.find(id);
        if (it == by_id.end()) {
            throw Error(ErrorKind::InvalidArgument, "clone refers to unknown fragment " + std::to_string(id.value));
        }
        return it->second->unit_path;
    };

    ThirdPartyReport rep;
    std::set<FragmentId> all_clone_fns;
    for (const auto& p : pairs) {
        all_clone_fns.insert(p.a);
        all_clone_fns.insert(p.b);
    }
    rep.project_ncf = all_clone_fns.size();
    rep.project_ncc = classes.size();

    std::set<FragmentId> combined_fns;
    std::set<std::size_t> combined_classes;
    for (const auto& lib : registry.entries()) {
        LibraryAttribution a;
        a.library_name = lib.name;
        const auto base = detail::find_key_file(snapshot, lib.key_file);
        if (base) {
            a.detected = true;
            a.key_file = *base + lib.key_file;
            a.prefix = *base + lib.prefix;
            auto inside = [&](FragmentId id) { return path_of(id).starts_with(a.prefix); };
            std::set<FragmentId> fns;
            for (const auto& p : pairs) {
                if (inside(p.a) && inside(p.b)) {
                    fns.insert(p.a);
                    fns.insert(p.b);
                }
            }
            for (std::size_t c = 0; c < classes.size(); ++c) {
                const auto& m = classes[c].members;
                if (!m.empty() && std::all_of(m.begin(), m.end(), inside)) {
                    ++a.lib_ncc;
                    combined_classes.insert(c);
                }
            }
            a.lib_ncf = fns.size();
            combined_fns.insert(fns.begin(), fns.end());
        }
        a.share_ncf = {a.lib_ncf, rep.project_ncf};
        a.share_ncc = {a.lib_ncc, rep.project_ncc};
        rep.libraries.push_back(std::move(a));
    }
    rep.combined_ncf = combined_fns.size();
    rep.combined_ncc = combined_classes.size();
    return rep;
}

// ---------------------------------------------------------------------------
// Per-category Clone Index
// ---------------------------------------------------------------------------

struct CategoryStats {
    std::uint64_t file_count = 0;
    double ci = 0.0;
    std::uint64_t nca = 0;
    std::uint64_t ncg = 0;
    bool degenerate = false;  // fewer than two files: no pairs exist, CI reported as 0

    bool operator==(const CategoryStats&) const = default;
};

struct CategoryBreakdown {
    std::map<FileCategory, CategoryStats> per_category;

    std::uint64_t total_files() const {
        std::uint64_t n = 0;
        for (const auto& [c, s] : per_category) n += s.file_count;
        return n;
    }
};

inline CategoryBreakdown per_category_clone_index(std::span<const AssetDocument> docs,
                                                  std::span<const SimilarityRecord> records,
                                                  double clone_threshold = 0.80,
                                                  ClusterMode mode = ClusterMode::Components,
                                                  CiConvention convention = CiConvention::UnorderedPairs) {
    std::map<std::string, FileCategory> category_of;
    CategoryBreakdown out;
    for (const auto& d : docs) {
        category_of[d.unit_path] = d.category;
        ++out.per_category[d.category].file_count;
    }
    std::map<FileCategory, std::vector<SimilarityRecord>> by_cat;
    for (const auto& r : records) {
        auto ia = category_of.find(r.a), ib = category_of.find(r.b);
        if (ia == category_of.end() || ib == category_of.end()) {
            throw Error(ErrorKind::InvalidArgument, "similarity record for unknown file " + r.a + " / " + r.b);
        }
        if (ia->second != ib->second) {
            throw Error(ErrorKind::InvalidArgument, "cross-category similarity record " + r.a + " / " + r.b);
        }
        by_cat[ia->second].push_back(r);
    }
    for (auto& [cat, stats] : out.per_category) {
        const auto& recs = by_cat[cat];
        if (stats.file_count < 2) {
            stats.degenerate = true;
            continue;
        }
        stats.ci = clone_index(recs, stats.file_count, convention);
        std::set<std::string> files;
        for (const auto& r : recs) {
            if (exceeds(r.score, clone_threshold)) {
                files.insert(r.a);
                files.insert(r.b);
            }
        }
        stats.nca = files.size();
        stats.ncg = cluster_clone_groups(recs, clone_threshold, mode).size();
    }
    return out;
}

} // namespace clonescope
