#pragma once

#include "clonescope/asset_parse.hpp"
#include "clonescope/clustering.hpp"
#include "clonescope/error.hpp"
#include "clonescope/ingest.hpp"

#include <nlohmann/json.hpp>
#include <openssl/evp.h>

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdio>
#include <exception>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <optional>
#include <regex>
#include <set>
#include <span>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

namespace clonescope {

enum class BackendKind { Structural, LLM };

inline const char* to_string(BackendKind k) { return k == BackendKind::Structural ? "structural" : "llm"; }

/// How the Clone Index sums pairwise similarities.
enum class CiConvention {
    UnorderedPairs,  // each unordered pair once
    OrderedPairs,    // literal sum over i != j, every pair counted twice
};

struct SimilarityRecord {
    std::string a;
    std::string b;
    double score = 0.0;
    BackendKind backend = BackendKind::Structural;
    bool cached = false;

    bool operator==(const SimilarityRecord&) const = default;
};

struct CloneGroup {
    std::vector<std::string> members;
    ClusterMode mode = ClusterMode::Components;

    bool operator==(const CloneGroup&) const = default;
};

struct BackendConfig {
    BackendKind kind = BackendKind::Structural;
    double clone_threshold = 0.80;
    std::optional<std::string> endpoint;
    std::optional<std::string> api_key;
    std::optional<std::string> model_name;
    fs::path cache_dir = ".clonescope-cache";
    std::size_t max_concurrent_requests = 4;
    std::size_t max_prompt_chars = 400'000;
    int max_retries = 3;
    int retry_backoff_ms = 500;
    std::optional<fs::path> transcript_path;

    void validate() const {
        if (!(clone_threshold > 0.0 && clone_threshold <= 1.0)) {
            throw Error(ErrorKind::InvalidArgument, "clone threshold must lie in (0, 1]");
        }
        if (kind == BackendKind::LLM) {
            if (!endpoint || endpoint->empty()) {
                throw Error(ErrorKind::InvalidArgument, "LLM backend requires an endpoint (CLONESCOPE_LLM_ENDPOINT)");
            }
            if (!api_key || api_key->empty()) {
                throw Error(ErrorKind::InvalidArgument, "LLM backend requires a credential (CLONESCOPE_LLM_KEY)");
            }
        }
        if (max_concurrent_requests == 0) {
            throw Error(ErrorKind::InvalidArgument, "max_concurrent_requests must be positive");
        }
    }
};

/// Unit plus its parsed form; the LLM scorer needs the raw text, the structural one the entries.
struct ParsedAsset {
    AssetUnit unit;
    AssetDocument doc;
};

inline std::vector<ParsedAsset> parse_assets(std::span<const AssetUnit> units, const AssetParseOptions& opts = {}) {
    std::vector<ParsedAsset> out;
    out.reserve(units.size());
    for (const auto& u : units) out.push_back({u, parse_asset(u, opts)});
    return out;
}

// ---------------------------------------------------------------------------
// LLM scoring
// ---------------------------------------------------------------------------

inline constexpr std::string_view kStep1SimilarityPrompt =
    "Please analyze the similarity of the file pairs and provide a similarity score between 0% and 100%.";

inline constexpr std::string_view kStep2CountPrompt =
    "Please analyze the files in the folder and output the number of clone files and clone groups, "
    "referencing the cloning information of each file pair from the Output of Step 1.";

inline constexpr std::string_view kStep2IndexPrompt =
    "Please analyze the files in the folder and output the clone index of the files, "
    "referencing the cloning information of each file pair from the Output of Step 1.";

/// Text-in, text-out chat completion. Implementations throw Error(Backend) on transport failure.
class LlmTransport {
public:
    virtual ~LlmTransport() = default;
    virtual std::string complete(const std::string& prompt) = 0;
};

inline std::string sha256_hex(std::string_view data) {
    unsigned char digest[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    if (EVP_Digest(data.data(), data.size(), digest, &len, EVP_sha256(), nullptr) != 1) {
        throw Error(ErrorKind::Io, "SHA-256 computation failed");
    }
    static constexpr char hex[] = "0123456789abcdef";
    std::string out;
    out.reserve(len * 2);
    for (unsigned int i = 0; i < len; ++i) {
        out += hex[digest[i] >> 4];
        out += hex[digest[i] & 0xF];
    }
    return out;
}

/**
 * Step-1 prompt for one file pair. The two files are presented in content
 * hash order, so the prompt (and therefore the score) does not depend on
 * argument order.
 */
inline std::string step1_prompt(std::string_view first, std::string_view second) {
    std::ostringstream p;
    p << kStep1SimilarityPrompt << "\n\n";
    p << "File 1:\n```\n" << first << (first.ends_with('\n') ? "" : "\n") << "```\n\n";
    p << "File 2:\n```\n" << second << (second.ends_with('\n') ? "" : "\n") << "```\n\n";
    p << "Give the similarity score as a percentage on the final line of your answer.\n";
    return p.str();
}

/**
 * Reads the first number in [0, 100] on the last non-empty line of a reply
 * and returns it as a fraction. Numbers are always read in percentage units.
 */
inline double parse_similarity_response(const std::string& response) {
    std::string last;
    std::istringstream lines(response);
    for (std::string l; std::getline(lines, l);) {
        if (!detail::trim(l).empty()) last = l;
    }
    static const std::regex number(R"((\d+(?:\.\d+)?)\s*%?)");
    for (auto it = std::sregex_iterator(last.begin(), last.end(), number); it != std::sregex_iterator(); ++it) {
        const double v = std::stod((*it)[1].str());
        if (v >= 0.0 && v <= 100.0) return v / 100.0;
    }
    throw Error(ErrorKind::UnparseableResponse, "no similarity percentage in LLM response: " + response);
}

/**
 * One JSON file per unordered content-hash pair under `dir`. Writes go to a
 * temporary file that is renamed into place.
 */
class PairCache {
public:
    explicit PairCache(fs::path dir) : dir_(std::move(dir)) {}

    static std::pair<std::string, std::string> ordered(std::string h1, std::string h2) {
        if (h2 < h1) std::swap(h1, h2);
        return {std::move(h1), std::move(h2)};
    }

    fs::path path_for(const std::string& h1, const std::string& h2) const {
        auto [lo, hi] = ordered(h1, h2);
        return dir_ / (lo.substr(0, 32) + "_" + hi.substr(0, 32) + ".json");
    }

    std::optional<double> lookup(const std::string& h1, const std::string& h2) const {
        std::ifstream in(path_for(h1, h2));
        if (!in) return std::nullopt;
        auto j = nlohmann::json::parse(in, nullptr, false);
        if (j.is_discarded() || !j.contains("score") || !j["score"].is_number()) return std::nullopt;
        auto [lo, hi] = ordered(h1, h2);
        if (j.value("hash_a", "") != lo || j.value("hash_b", "") != hi) return std::nullopt;
        return j["score"].get<double>();
    }

    void store(const std::string& h1, const std::string& h2, double score, const std::string& model) const {
        std::error_code ec;
        fs::create_directories(dir_, ec);
        if (ec) throw Error(ErrorKind::Io, "cannot create cache directory " + dir_.string() + ": " + ec.message());
        auto [lo, hi] = ordered(h1, h2);
        nlohmann::json j = {{"score", score}, {"backend", "llm"}, {"model", model},
                            {"prompt", "step1-similarity"}, {"hash_a", lo}, {"hash_b", hi}};
        const auto final_path = path_for(h1, h2);
        std::ostringstream tid;
        tid << std::this_thread::get_id();
        auto tmp = final_path;
        tmp += ".tmp." + tid.str();
        {
            std::ofstream out(tmp, std::ios::trunc);
            if (!out) throw Error(ErrorKind::Io, "cannot write cache file " + tmp.string());
            out << j.dump(2) << '\n';
        }
        fs::rename(tmp, final_path, ec);
        if (ec) throw Error(ErrorKind::Io, "cannot move cache file into place: " + ec.message());
    }

private:
    fs::path dir_;
};

/// Counts transport calls; lets tests assert that a warm cache issues none.
struct LlmStats {
    std::atomic<std::size_t> requests{0};
    std::atomic<std::size_t> cache_hits{0};
    std::atomic<std::size_t> fallbacks{0};
};

inline void append_transcript(const BackendConfig& cfg, const std::string& prompt, const std::string& reply) {
    if (!cfg.transcript_path) return;
    static std::mutex mu;
    std::lock_guard lock(mu);
    std::ofstream out(*cfg.transcript_path, std::ios::app);
    out << nlohmann::json{{"prompt", prompt}, {"response", reply}}.dump() << '\n';
}

/**
 * Scores a pair with the Step-1 similarity prompt. Cached pairs cost no
 * request. Oversized prompts fall back to the structural scorer and say so
 * through `warnings`.
 */
inline SimilarityRecord llm_similarity(const AssetUnit& a, const AssetUnit& b, const BackendConfig& cfg,
                                       LlmTransport& transport, LlmStats* stats = nullptr,
                                       std::vector<std::string>* warnings = nullptr) {
    SimilarityRecord rec;
    rec.a = std::min(a.rel_path, b.rel_path);
    rec.b = std::max(a.rel_path, b.rel_path);
    rec.backend = BackendKind::LLM;

    const auto ha = sha256_hex(a.content);
    const auto hb = sha256_hex(b.content);
    PairCache cache(cfg.cache_dir);
    if (auto hit = cache.lookup(ha, hb)) {
        rec.score = *hit;
        rec.cached = true;
        if (stats) ++stats->cache_hits;
        return rec;
    }

    const bool a_first = ha <= hb;
    const std::string prompt = step1_prompt(a_first ? a.content : b.content, a_first ? b.content : a.content);
    if (prompt.size() > cfg.max_prompt_chars) {
        if (warnings) {
            warnings->push_back(rec.a + " <-> " + rec.b + ": prompt of " + std::to_string(prompt.size()) +
                                " chars exceeds budget, structural similarity used");
        }
        if (stats) ++stats->fallbacks;
        rec.backend = BackendKind::Structural;
        rec.score = structural_similarity(parse_asset(a), parse_asset(b));
        return rec;
    }

    std::string reply;
    for (int attempt = 0;; ++attempt) {
        try {
            if (stats) ++stats->requests;
            reply = transport.complete(prompt);
            break;
        } catch (const Error& e) {
            if (e.kind() != ErrorKind::Backend || attempt + 1 >= cfg.max_retries) throw;
            std::this_thread::sleep_for(std::chrono::milliseconds(cfg.retry_backoff_ms << attempt));
        }
    }
    append_transcript(cfg, prompt, reply);
    rec.score = parse_similarity_response(reply);
    cache.store(ha, hb, rec.score, cfg.model_name.value_or(""));
    return rec;
}

// ---------------------------------------------------------------------------
// Detection, clustering, Clone Index
// ---------------------------------------------------------------------------

/// Scores one same-category pair. Implementations must be safe to call concurrently.
class PairScorer {
public:
    virtual ~PairScorer() = default;
    virtual SimilarityRecord score(const ParsedAsset& a, const ParsedAsset& b) = 0;
    virtual std::size_t concurrency() const { return 1; }
    virtual std::vector<std::string> take_warnings() { return {}; }
};

class StructuralScorer final : public PairScorer {
public:
    SimilarityRecord score(const ParsedAsset& a, const ParsedAsset& b) override {
        SimilarityRecord r;
        r.a = std::min(a.unit.rel_path, b.unit.rel_path);
        r.b = std::max(a.unit.rel_path, b.unit.rel_path);
        r.score = structural_similarity(a.doc, b.doc);
        r.backend = BackendKind::Structural;
        return r;
    }
};

class LlmScorer final : public PairScorer {
public:
    LlmScorer(BackendConfig cfg, LlmTransport& transport) : cfg_(std::move(cfg)), transport_(transport) {}

    SimilarityRecord score(const ParsedAsset& a, const ParsedAsset& b) override {
        std::vector<std::string> local;
        auto rec = llm_similarity(a.unit, b.unit, cfg_, transport_, &stats_, &local);
        if (!local.empty()) {
            std::lock_guard lock(mu_);
            warnings_.insert(warnings_.end(), local.begin(), local.end());
        }
        return rec;
    }

    std::size_t concurrency() const override { return cfg_.max_concurrent_requests; }

    std::vector<std::string> take_warnings() override {
        std::lock_guard lock(mu_);
        auto w = std::move(warnings_);
        warnings_.clear();
        std::sort(w.begin(), w.end());
        return w;
    }

    const LlmStats& stats() const { return stats_; }

private:
    BackendConfig cfg_;
    LlmTransport& transport_;
    LlmStats stats_;
    std::mutex mu_;
    std::vector<std::string> warnings_;
};

/// Strict `score > threshold` with tolerance for representation error.
inline bool exceeds(double score, double threshold) {
    return score > threshold + 1e-9;
}

struct AssetDetection {
    std::set<std::string> clone_files;
    std::vector<SimilarityRecord> records;
    std::vector<std::string> warnings;
};

/**
 * Scores every unordered same-category pair and marks as clone files those
 * with at least one partner scoring strictly above the clone threshold.
 * Records come back sorted by (a, b) regardless of scoring order.
 */
inline AssetDetection detect_clone_files(std::span<const ParsedAsset> assets, const BackendConfig& cfg,
                                         PairScorer& scorer) {
    std::vector<std::pair<std::size_t, std::size_t>> work;
    for (std::size_t i = 0; i < assets.size(); ++i) {
        for (std::size_t j = i + 1; j < assets.size(); ++j) {
            if (assets[i].unit.category != assets[j].unit.category) continue;
            if (assets[i].unit.rel_path == assets[j].unit.rel_path) continue;
            work.emplace_back(i, j);
        }
    }
    AssetDetection out;
    out.records.resize(work.size());
    std::atomic<std::size_t> next{0};
    std::atomic<bool> failed{false};
    std::exception_ptr error;
    std::mutex error_mu;
    auto worker = [&] {
        while (!failed) {
            const auto k = next++;
            if (k >= work.size()) return;
            try {
                out.records[k] = scorer.score(assets[work[k].first], assets[work[k].second]);
            } catch (...) {
                std::lock_guard lock(error_mu);
                if (!error) error = std::current_exception();
                failed = true;
            }
        }
    };
    const auto n = std::max<std::size_t>(1, std::min(scorer.concurrency(), work.size()));
    if (n == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (std::size_t t = 0; t < n; ++t) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
    }
    if (error) std::rethrow_exception(error);

    std::sort(out.records.begin(), out.records.end(),
              [](const SimilarityRecord& x, const SimilarityRecord& y) { return std::tie(x.a, x.b) < std::tie(y.a, y.b); });
    for (const auto& r : out.records) {
        if (exceeds(r.score, cfg.clone_threshold)) {
            out.clone_files.insert(r.a);
            out.clone_files.insert(r.b);
        }
    }
    out.warnings = scorer.take_warnings();
    return out;
}

inline std::vector<CloneGroup> cluster_clone_groups(std::span<const SimilarityRecord> records, double threshold,
                                                    ClusterMode mode = ClusterMode::Components) {
    std::vector<std::pair<std::string, std::string>> edges;
    for (const auto& r : records) {
        if (exceeds(r.score, threshold)) edges.emplace_back(r.a, r.b);
    }
    std::vector<CloneGroup> groups;
    for (auto& m : cluster_edges<std::string>(edges, mode)) groups.push_back({std::move(m), mode});
    return groups;
}

/// Sum of pairwise similarities divided by the number of asset files; can exceed 1.
inline double clone_index(std::span<const SimilarityRecord> records, std::size_t total_files,
                          CiConvention convention = CiConvention::UnorderedPairs) {
    if (total_files == 0) throw Error(ErrorKind::UndefinedMetric, "clone index undefined: no asset files");
    double sum = 0.0;
    for (const auto& r : records) sum += r.score;
    if (convention == CiConvention::OrderedPairs) sum *= 2.0;
    return sum / static_cast<double>(total_files);
}

/**
 * Renders the two aggregation prompts with the Step-1 results attached, one
 * line per scored pair. The toolkit computes NCA/NCG/CI itself; this is for
 * replicating the LLM-aggregated workflow by hand.
 */
inline std::string emit_step2_prompt(std::span<const SimilarityRecord> records) {
    std::ostringstream p;
    p << kStep2CountPrompt << "\n\n" << kStep2IndexPrompt << "\n\n";
    p << "Output of Step 1:\n";
    for (const auto& r : records) {
        char buf[32];
        std::snprintf(buf, sizeof buf, "%.2f%%", r.score * 100.0);
        p << r.a << " | " << r.b << " | " << buf << "\n";
    }
    return p.str();
}

} // namespace clonescope
