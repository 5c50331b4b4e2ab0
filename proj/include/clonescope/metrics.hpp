#pragma once

#include "clonescope/asset_clone.hpp"
#include "clonescope/error.hpp"
#include "clonescope/source_clone.hpp"

#include <cstdint>
#include <limits>
#include <numeric>
#include <set>
#include <span>
#include <string>
#include <vector>

namespace clonescope {

/// Exact non-negative ratio; rendering happens only at the edges.
struct Ratio {
    std::uint64_t num = 0;
    std::uint64_t den = 1;

    double value() const { return den == 0 ? 0.0 : static_cast<double>(num) / static_cast<double>(den); }

    /// num/den * 100 rounded half-up to `decimals` places, as an integer count of 10^-decimals units.
    std::uint64_t percent_units(int decimals) const {
        if (den == 0) return 0;
        std::uint64_t scale = 100;
        for (int i = 0; i < decimals; ++i) scale *= 10;
        // floor(num*scale/den + 1/2) == floor((2*num*scale + den) / (2*den))
        const auto n = static_cast<unsigned __int128>(num) * scale * 2 + den;
        return static_cast<std::uint64_t>(n / (static_cast<unsigned __int128>(den) * 2));
    }

    bool operator==(const Ratio&) const = default;
};

inline std::string format_fixed_units(std::uint64_t units, int decimals) {
    std::string digits = std::to_string(units);
    if (decimals == 0) return digits;
    if (digits.size() <= static_cast<std::size_t>(decimals)) {
        digits.insert(0, static_cast<std::size_t>(decimals) + 1 - digits.size(), '0');
    }
    digits.insert(digits.size() - static_cast<std::size_t>(decimals), ".");
    return digits;
}

/// "26.54%" style rendering with round-half-up.
inline std::string render_percent(const Ratio& r, int decimals = 2) {
    return format_fixed_units(r.percent_units(decimals), decimals) + "%";
}

struct SourceCloneMetrics {
    CloneType clone_type = CloneType::T3_2;
    std::uint64_t ncf = 0;
    std::uint64_t ncc = 0;
    std::uint64_t total_functions = 0;

    Ratio rcf() const { return {ncf, total_functions}; }
    Ratio rcc() const { return {ncc, total_functions}; }

    bool operator==(const SourceCloneMetrics&) const = default;
};

struct SizeBucket {
    std::uint64_t lo = 2;
    std::uint64_t hi = std::numeric_limits<std::uint64_t>::max();  // inclusive
    std::uint64_t count = 0;

    std::string label() const {
        if (hi == std::numeric_limits<std::uint64_t>::max()) return ">" + std::to_string(lo - 1);
        if (lo == hi) return std::to_string(lo);
        return "[" + std::to_string(lo) + "," + std::to_string(hi) + "]";
    }

    bool operator==(const SizeBucket&) const = default;
};

/// Counts of clusters per size interval; intervals partition [2, inf).
struct SizeDistribution {
    std::vector<SizeBucket> buckets;
    std::uint64_t total = 0;

    bool operator==(const SizeDistribution&) const = default;
};

/// Bucket edges used for clone classes: 2, [3,10], [11,100], >100.
inline const std::vector<std::uint64_t> kClassSizeEdges = {2, 3, 11, 101};
/// Bucket edges used for asset clone groups: 2, [3,10], >10.
inline const std::vector<std::uint64_t> kGroupSizeEdges = {2, 3, 11};

inline SizeDistribution size_distribution(std::span<const std::size_t> sizes,
                                          std::span<const std::uint64_t> lower_edges) {
    SizeDistribution dist;
    for (std::size_t i = 0; i < lower_edges.size(); ++i) {
        SizeBucket b;
        b.lo = lower_edges[i];
        if (i + 1 < lower_edges.size()) b.hi = lower_edges[i + 1] - 1;
        dist.buckets.push_back(b);
    }
    for (auto s : sizes) {
        for (auto& b : dist.buckets) {
            if (s >= b.lo && s <= b.hi) {
                ++b.count;
                ++dist.total;
                break;
            }
        }
    }
    return dist;
}

inline SizeDistribution class_size_distribution(std::span<const CloneClass> classes) {
    std::vector<std::size_t> sizes;
    for (const auto& c : classes) sizes.push_back(c.members.size());
    return size_distribution(sizes, kClassSizeEdges);
}

/// Bucket share rendered like "63.5%".
inline std::string bucket_share(const SizeDistribution& d, std::size_t bucket, int decimals = 1) {
    return render_percent({d.buckets.at(bucket).count, d.total == 0 ? 1 : d.total}, decimals);
}

/**
 * NCF counts distinct fragments touching any pair, NCC the number of
 * classes, both relative to |F|.
 */
inline SourceCloneMetrics compute_source_metrics(CloneType type, std::span<const CloneClass> classes,
                                                 std::span<const ClonePair> pairs, std::uint64_t total_functions) {
    if (total_functions == 0) {
        throw Error(ErrorKind::UndefinedMetric, "rcf/rcc undefined: project has no functions");
    }
    std::set<FragmentId> clone_functions;
    for (const auto& p : pairs) {
        clone_functions.insert(p.a);
        clone_functions.insert(p.b);
    }
    if (clone_functions.size() > total_functions) {
        throw Error(ErrorKind::InvalidArgument, "more clone functions (" + std::to_string(clone_functions.size()) +
                                                    ") than total functions (" + std::to_string(total_functions) + ")");
    }
    return {type, clone_functions.size(), classes.size(), total_functions};
}

struct AssetCloneMetrics {
    std::uint64_t nca = 0;
    std::uint64_t ncg = 0;
    std::uint64_t total_assets = 0;
    double ci = 0.0;
    SizeDistribution group_sizes;

    Ratio rca() const { return {nca, total_assets}; }
    Ratio rcg() const { return {ncg, total_assets}; }

    bool operator==(const AssetCloneMetrics&) const = default;
};

inline SizeDistribution group_size_distribution(std::span<const CloneGroup> groups) {
    std::vector<std::size_t> sizes;
    for (const auto& g : groups) sizes.push_back(g.members.size());
    return size_distribution(sizes, kGroupSizeEdges);
}

inline AssetCloneMetrics compute_asset_metrics(std::span<const CloneGroup> groups,
                                               const std::set<std::string>& clone_files,
                                               std::span<const SimilarityRecord> records, std::uint64_t total_assets,
                                               CiConvention convention = CiConvention::UnorderedPairs) {
    if (total_assets == 0) {
        throw Error(ErrorKind::UndefinedMetric, "rca/rcg undefined: project has no asset files");
    }
    if (clone_files.size() > total_assets) {
        throw Error(ErrorKind::InvalidArgument, "more clone files than asset files");
    }
    AssetCloneMetrics m;
    m.nca = clone_files.size();
    m.ncg = groups.size();
    m.total_assets = total_assets;
    m.ci = clone_index(records, total_assets, convention);
    m.group_sizes = group_size_distribution(groups);
    return m;
}

} // namespace clonescope
