#pragma once

#include "clonescope/clustering.hpp"
#include "clonescope/error.hpp"
#include "clonescope/ingest.hpp"
#include "clonescope/lexer.hpp"

#include <algorithm>
#include <cmath>
#include <compare>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <thread>
#include <tuple>
#include <unordered_set>
#include <unordered_map>
#include <vector>

namespace clonescope {

enum class CloneType { T1, T2, T2c, T3_1, T3_2, T3_2c };
enum class Renaming { None, Blind, Consistent };
enum class Granularity { Function };

inline constexpr CloneType kAllCloneTypes[] = {CloneType::T1,   CloneType::T2,   CloneType::T2c,
                                               CloneType::T3_1, CloneType::T3_2, CloneType::T3_2c};

inline const char* to_string(CloneType t) {
    switch (t) {
        case CloneType::T1:    return "Type1";
        case CloneType::T2:    return "Type2";
        case CloneType::T2c:   return "Type2c";
        case CloneType::T3_1:  return "Type3-1";
        case CloneType::T3_2:  return "Type3-2";
        case CloneType::T3_2c: return "Type3-2c";
    }
    return "?";
}

inline const char* to_string(Renaming r) {
    switch (r) {
        case Renaming::None:       return "none";
        case Renaming::Blind:      return "blind";
        case Renaming::Consistent: return "consistent";
    }
    return "?";
}

/// Accepts "t1", "type1", "Type3-2c", "t3_2c" and similar spellings.
inline std::optional<CloneType> parse_clone_type(std::string_view text) {
    std::string s;
    for (char ch : text) {
        const auto c = static_cast<char>(std::tolower(static_cast<unsigned char>(ch)));
        if (c != '-' && c != '_' && c != ' ') s += c;
    }
    if (s.rfind("type", 0) == 0) s = "t" + s.substr(4);
    if (s == "t1") return CloneType::T1;
    if (s == "t2") return CloneType::T2;
    if (s == "t2c") return CloneType::T2c;
    if (s == "t31") return CloneType::T3_1;
    if (s == "t32") return CloneType::T3_2;
    if (s == "t32c") return CloneType::T3_2c;
    return std::nullopt;
}

/**
 * One of the six detection configurations. Exact types (Type1/2/2c) use a
 * dissimilarity threshold of 0; near-miss types default to 0.3.
 */
struct DetectionConfig {
    CloneType clone_type = CloneType::T3_2;
    Renaming renaming = Renaming::Blind;
    double dissimilarity_threshold = 0.3;
    Granularity granularity = Granularity::Function;
    std::size_t min_lines = 10;
    std::size_t max_lines = 2500;

    double similarity_threshold() const { return 1.0 - dissimilarity_threshold; }

    static DetectionConfig for_type(CloneType type, double near_miss_dissimilarity = 0.3,
                                    std::size_t min_lines = 10, std::size_t max_lines = 2500) {
        DetectionConfig c;
        c.clone_type = type;
        c.min_lines = min_lines;
        c.max_lines = max_lines;
        switch (type) {
            case CloneType::T1:
            case CloneType::T3_1:  c.renaming = Renaming::None; break;
            case CloneType::T2:
            case CloneType::T3_2:  c.renaming = Renaming::Blind; break;
            case CloneType::T2c:
            case CloneType::T3_2c: c.renaming = Renaming::Consistent; break;
        }
        const bool exact = type == CloneType::T1 || type == CloneType::T2 || type == CloneType::T2c;
        c.dissimilarity_threshold = exact ? 0.0 : near_miss_dissimilarity;
        return c;
    }

    bool operator==(const DetectionConfig&) const = default;
};

struct FragmentId {
    std::uint32_t value = 0;
    auto operator<=>(const FragmentId&) const = default;
};

struct FunctionFragment {
    FragmentId id;
    std::string unit_path;
    Language language = Language::Other;
    int start_line = 1;
    int end_line = 1;
    std::vector<std::string> body_lines;

    bool operator==(const FunctionFragment&) const = default;
};

struct NormalizedFragment {
    FragmentId fragment_id;
    std::vector<std::string> lines;
    Renaming renaming = Renaming::None;

    bool operator==(const NormalizedFragment&) const = default;
};

struct ClonePair {
    FragmentId a;
    FragmentId b;
    double similarity = 0.0;

    bool operator==(const ClonePair&) const = default;
};

struct CloneClass {
    std::vector<FragmentId> members;
    ClusterMode mode = ClusterMode::Components;

    bool operator==(const CloneClass&) const = default;
};

struct ExtractionResult {
    std::vector<FunctionFragment> fragments;
    std::vector<std::string> diagnostics;
};

// ---------------------------------------------------------------------------
// Normalization
// ---------------------------------------------------------------------------

namespace detail {

inline std::string token_text(const Token& t) {
    std::string s;
    s.reserve(t.text.size());
    for (char ch : t.text) {
        if (ch == '\r') continue;
        if (ch == '\n') {
            s += "\\n";
        } else {
            s += ch;
        }
    }
    return s;
}

inline void rename_tokens(std::vector<Token>& tokens, Renaming mode) {
    if (mode == Renaming::None) return;
    std::unordered_map<std::string, std::string> names;
    for (auto& t : tokens) {
        if (t.kind != TokenKind::Identifier) continue;
        if (mode == Renaming::Blind) {
            t.text = "X";
            continue;
        }
        auto [it, inserted] = names.try_emplace(t.text, "");
        if (inserted) it->second = "X" + std::to_string(names.size());
        t.text = it->second;
    }
}

inline std::string join_tokens(std::span<const Token> toks) {
    std::string line;
    for (const auto& t : toks) {
        if (!line.empty()) line += ' ';
        line += token_text(t);
    }
    return line;
}

// One statement-like group per line: break after `;` and `{` outside
// parentheses, and put `}` on its own line (absorbing a trailing `;`/`,`).
inline std::vector<std::string> pretty_print_c_like(const std::vector<Token>& tokens) {
    std::vector<std::string> lines;
    std::vector<Token> cur;
    int paren = 0;
    auto flush = [&] {
        if (!cur.empty()) lines.push_back(join_tokens(cur));
        cur.clear();
    };
    for (std::size_t i = 0; i < tokens.size(); ++i) {
        const auto& t = tokens[i];
        const bool punct = t.kind == TokenKind::Punct;
        if (punct && (t.text == "(" || t.text == "[")) ++paren;
        if (punct && (t.text == ")" || t.text == "]") && paren > 0) --paren;
        if (punct && paren == 0 && t.text == "{") {
            cur.push_back(t);
            flush();
        } else if (punct && paren == 0 && t.text == "}") {
            flush();
            cur.push_back(t);
            while (i + 1 < tokens.size() && tokens[i + 1].kind == TokenKind::Punct &&
                   (tokens[i + 1].text == ";" || tokens[i + 1].text == ",")) {
                cur.push_back(tokens[++i]);
            }
            flush();
        } else if (punct && paren == 0 && t.text == ";") {
            cur.push_back(t);
            flush();
        } else {
            cur.push_back(t);
        }
    }
    flush();
    return lines;
}

inline std::vector<std::string> pretty_print_python(const std::vector<Token>& tokens) {
    std::vector<std::string> lines;
    std::vector<Token> cur;
    for (const auto& t : tokens) {
        if (t.kind == TokenKind::Newline) {
            if (!cur.empty()) lines.push_back(join_tokens(cur));
            cur.clear();
        } else {
            cur.push_back(t);
        }
    }
    if (!cur.empty()) lines.push_back(join_tokens(cur));
    return lines;
}

inline std::string join_lines(std::span<const std::string> lines) {
    std::string s;
    for (const auto& l : lines) {
        s += l;
        s += '\n';
    }
    return s;
}

} // namespace detail

/**
 * Lexes `lines`, drops comments and layout, pretty-prints one statement per
 * line and applies identifier renaming. Keywords and literals are kept.
 * Applying it to its own output is a no-op.
 */
inline std::vector<std::string> normalize_lines(std::span<const std::string> lines, Language lang,
                                                Renaming renaming) {
    auto lexed = lex(detail::join_lines(lines), lang);
    detail::rename_tokens(lexed.tokens, renaming);
    return lang == Language::Python ? detail::pretty_print_python(lexed.tokens)
                                    : detail::pretty_print_c_like(lexed.tokens);
}

inline NormalizedFragment normalize_fragment(const FunctionFragment& frag, Renaming renaming) {
    return {frag.id, normalize_lines(frag.body_lines, frag.language, renaming), renaming};
}

// ---------------------------------------------------------------------------
// Function extraction
// ---------------------------------------------------------------------------

namespace detail {

inline bool is_punct(const Token& t, std::string_view s) {
    return t.kind == TokenKind::Punct && t.text == s;
}

inline int last_line_of(const Token& t) {
    return t.line + static_cast<int>(std::count(t.text.begin(), t.text.end(), '\n'));
}

inline std::vector<std::string> split_lines(std::string_view text) {
    std::vector<std::string> lines;
    std::size_t start = 0;
    while (start <= text.size()) {
        auto nl = text.find('\n', start);
        if (nl == std::string_view::npos) {
            if (start < text.size()) lines.emplace_back(text.substr(start));
            break;
        }
        std::string line(text.substr(start, nl - start));
        if (!line.empty() && line.back() == '\r') line.pop_back();
        lines.push_back(std::move(line));
        start = nl + 1;
    }
    return lines;
}

// Decides whether the tokens [begin, brace) form a method/function/constructor
// header that owns the block opened at `brace`.
inline bool is_function_header(const std::vector<Token>& toks, std::size_t begin, std::size_t brace,
                               Language lang) {
    if (begin >= brace) return false;
    static const std::unordered_set<std::string_view> control = {
        "if", "else", "for", "foreach", "while", "do", "switch", "try", "catch", "finally",
        "using", "lock", "fixed", "unsafe", "checked", "unchecked", "synchronized", "return",
        "case", "default", "goto", "throw", "yield", "await", "new", "namespace", "static_assert",
    };
    if (control.count(toks[begin].text)) return false;

    int depth = 0;
    std::optional<std::size_t> open;
    for (std::size_t k = begin; k < brace; ++k) {
        const auto& t = toks[k];
        if (t.kind == TokenKind::Keyword || t.kind == TokenKind::Identifier) {
            if (depth == 0 && !open) {
                const auto& w = t.text;
                if (w == "class" || w == "interface" || w == "enum" || w == "record" || w == "new" ||
                    w == "namespace" || w == "delegate" || (w == "struct" && lang != Language::C)) {
                    return false;
                }
            }
        }
        if (t.kind != TokenKind::Punct) continue;
        if (depth == 0 && (t.text == "=" || t.text == "=>" || t.text == "->")) return false;
        if (t.text == "(" || t.text == "[") {
            if (depth == 0 && t.text == "(" && !open) open = k;
            ++depth;
        } else if (t.text == ")" || t.text == "]") {
            if (--depth < 0) return false;
        }
    }
    if (!open || depth != 0 || *open == begin) return false;
    const auto& name = toks[*open - 1];
    if (name.kind == TokenKind::Identifier) return true;
    // operator overloads: `operator +(`, `operator ==(`
    if (*open >= begin + 2 && toks[*open - 2].text == "operator") return true;
    return name.text == "operator";
}

struct Span {
    int start_line;
    int end_line;
};

/// Returns a diagnostic when braces do not balance.
inline std::optional<std::string> brace_imbalance(const std::vector<Token>& toks) {
    int depth = 0;
    for (const auto& t : toks) {
        if (is_punct(t, "{")) ++depth;
        if (is_punct(t, "}") && --depth < 0) {
            return "unbalanced braces: unexpected '}' at line " + std::to_string(t.line);
        }
    }
    if (depth != 0) return "unbalanced braces: " + std::to_string(depth) + " unclosed '{'";
    return std::nullopt;
}

inline std::vector<Span> extract_c_like(const std::vector<Token>& toks, Language lang) {
    std::vector<Span> spans;
    std::size_t stmt_start = 0;
    std::size_t i = 0;
    while (i < toks.size()) {
        const auto& t = toks[i];
        if (is_punct(t, "{")) {
            if (is_function_header(toks, stmt_start, i, lang)) {
                int depth = 0;
                std::size_t close = i;
                for (; close < toks.size(); ++close) {
                    if (is_punct(toks[close], "{")) ++depth;
                    if (is_punct(toks[close], "}") && --depth == 0) break;
                }
                spans.push_back({toks[stmt_start].line, last_line_of(toks[close])});
                i = close + 1;
                stmt_start = i;
                continue;
            }
            stmt_start = i + 1;
        } else if (is_punct(t, "}") || is_punct(t, ";")) {
            stmt_start = i + 1;
        }
        ++i;
    }
    return spans;
}

inline std::vector<Span> extract_python(const std::vector<Token>& toks) {
    struct Logical {
        std::size_t first;
        std::size_t last;
    };
    std::vector<Logical> lines;
    std::size_t begin = 0;
    for (std::size_t k = 0; k < toks.size(); ++k) {
        if (toks[k].kind == TokenKind::Newline) {
            if (k > begin) lines.push_back({begin, k - 1});
            begin = k + 1;
        }
    }
    if (begin < toks.size()) lines.push_back({begin, toks.size() - 1});

    std::vector<Span> spans;
    std::size_t i = 0;
    while (i < lines.size()) {
        const auto& head = toks[lines[i].first];
        const bool is_def =
            head.text == "def" ||
            (head.text == "async" && lines[i].first + 1 <= lines[i].last && toks[lines[i].first + 1].text == "def");
        if (!is_def) {
            ++i;
            continue;
        }
        const int indent = head.column;
        std::size_t j = i + 1;
        while (j < lines.size() && toks[lines[j].first].column > indent) ++j;
        spans.push_back({head.line, last_line_of(toks[lines[j - 1].last])});
        i = j;
    }
    return spans;
}

} // namespace detail

/**
 * Extracts maximal function/method/constructor bodies (signature included)
 * from one source unit. Fragments whose normalized line count falls outside
 * [min_lines, max_lines] are dropped. Ids are assigned sequentially from
 * `first_id` in source order.
 */
inline ExtractionResult extract_functions(const SourceUnit& unit, const DetectionConfig& config,
                                          std::uint32_t first_id = 0) {
    ExtractionResult result;
    if (unit.language == Language::Other) {
        result.diagnostics.push_back(unit.rel_path + ": unsupported language, no functions extracted");
        return result;
    }
    const auto lexed = lex(unit.content, unit.language);
    for (const auto& d : lexed.diagnostics) result.diagnostics.push_back(unit.rel_path + ": " + d);

    std::vector<detail::Span> spans;
    if (unit.language == Language::Python) {
        spans = detail::extract_python(lexed.tokens);
    } else {
        if (auto diag = detail::brace_imbalance(lexed.tokens)) {
            result.diagnostics.push_back(unit.rel_path + ": " + *diag + "; unit skipped");
            return result;
        }
        spans = detail::extract_c_like(lexed.tokens, unit.language);
    }

    const auto source_lines = detail::split_lines(unit.content);
    std::uint32_t next = first_id;
    for (const auto& span : spans) {
        FunctionFragment frag;
        frag.unit_path = unit.rel_path;
        frag.language = unit.language;
        frag.start_line = span.start_line;
        frag.end_line = std::max(span.end_line, span.start_line);
        for (int l = frag.start_line; l <= frag.end_line; ++l) {
            const auto idx = static_cast<std::size_t>(l - 1);
            frag.body_lines.push_back(idx < source_lines.size() ? source_lines[idx] : std::string{});
        }
        const auto normalized = normalize_lines(frag.body_lines, frag.language, Renaming::None);
        if (normalized.size() < config.min_lines || normalized.size() > config.max_lines) continue;
        frag.id = FragmentId{next++};
        result.fragments.push_back(std::move(frag));
    }
    return result;
}

/// Extracts from every source unit of a snapshot, with ids unique across the project.
inline ExtractionResult extract_project_functions(const ProjectSnapshot& snap, const DetectionConfig& config,
                                                  std::uint32_t first_id = 0) {
    ExtractionResult all;
    auto next = first_id;
    for (const auto& unit : snap.source_units) {
        auto r = extract_functions(unit, config, next);
        next += static_cast<std::uint32_t>(r.fragments.size());
        for (auto& f : r.fragments) all.fragments.push_back(std::move(f));
        for (auto& d : r.diagnostics) all.diagnostics.push_back(std::move(d));
    }
    return all;
}

// ---------------------------------------------------------------------------
// Similarity and pair detection
// ---------------------------------------------------------------------------

/// Longest common subsequence length, O(|a|*|b|) time and O(|b|) space.
template <class T>
std::size_t lcs_length(std::span<const T> a, std::span<const T> b) {
    if (a.empty() || b.empty()) return 0;
    std::vector<std::size_t> prev(b.size() + 1, 0), cur(b.size() + 1, 0);
    for (std::size_t i = 1; i <= a.size(); ++i) {
        for (std::size_t j = 1; j <= b.size(); ++j) {
            cur[j] = a[i - 1] == b[j - 1] ? prev[j - 1] + 1 : std::max(prev[j], cur[j - 1]);
        }
        std::swap(prev, cur);
    }
    return prev[b.size()];
}

/// |LCS| / max(|a|, |b|) over normalized lines. Two empty fragments are identical.
inline double fragment_similarity(const NormalizedFragment& a, const NormalizedFragment& b) {
    if (a.renaming != b.renaming) {
        throw Error(ErrorKind::InvalidArgument, "fragments normalized under different renaming modes");
    }
    const auto longest = std::max(a.lines.size(), b.lines.size());
    if (longest == 0) return 1.0;
    const auto common = lcs_length<std::string>(a.lines, b.lines);
    return static_cast<double>(common) / static_cast<double>(longest);
}

inline constexpr double kThresholdTolerance = 1e-9;

/**
 * Near-miss acceptance: at most `dissimilarity` of the longer fragment's
 * lines may be unmatched. With dissimilarity 0 this is exact equality of the
 * normalized line sequences.
 */
inline bool within_dissimilarity(std::size_t common, std::size_t longest, double dissimilarity) {
    if (longest == 0) return true;
    const double unmatched = static_cast<double>(longest - common);
    return unmatched <= dissimilarity * static_cast<double>(longest) + kThresholdTolerance;
}

namespace detail {

inline std::size_t multiset_overlap(const std::vector<std::uint32_t>& a, const std::vector<std::uint32_t>& b) {
    std::size_t i = 0, j = 0, n = 0;
    while (i < a.size() && j < b.size()) {
        if (a[i] < b[j]) {
            ++i;
        } else if (b[j] < a[i]) {
            ++j;
        } else {
            ++n, ++i, ++j;
        }
    }
    return n;
}

inline unsigned worker_count(std::size_t work) {
    const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
    if (work < 2000) return 1;
    return std::min<unsigned>(hw, 16);
}

} // namespace detail

/**
 * All unordered fragment pairs that pass the configuration's dissimilarity
 * threshold, sorted by (a, b) with a < b.
 */
inline std::vector<ClonePair> detect_clone_pairs(std::span<const NormalizedFragment> frags,
                                                 const DetectionConfig& config) {
    for (const auto& f : frags) {
        if (f.renaming != config.renaming) {
            throw Error(ErrorKind::InvalidArgument,
                        std::string("fragment normalized with ") + to_string(f.renaming) + " renaming, config expects " +
                            to_string(config.renaming));
        }
    }
    // Intern lines so comparisons are integer compares.
    std::unordered_map<std::string, std::uint32_t> intern;
    std::vector<std::vector<std::uint32_t>> seqs(frags.size());
    for (std::size_t i = 0; i < frags.size(); ++i) {
        for (const auto& line : frags[i].lines) {
            auto [it, inserted] = intern.try_emplace(line, static_cast<std::uint32_t>(intern.size()));
            seqs[i].push_back(it->second);
        }
    }

    std::vector<ClonePair> pairs;
    auto push = [&](std::vector<ClonePair>& out, std::size_t i, std::size_t j, double sim) {
        FragmentId a = frags[i].fragment_id, b = frags[j].fragment_id;
        if (a == b) return;
        if (b < a) std::swap(a, b);
        out.push_back({a, b, sim});
    };

    if (config.dissimilarity_threshold <= 0.0) {
        std::map<std::vector<std::uint32_t>, std::vector<std::size_t>> buckets;
        for (std::size_t i = 0; i < frags.size(); ++i) buckets[seqs[i]].push_back(i);
        for (const auto& [seq, members] : buckets) {
            for (std::size_t x = 0; x < members.size(); ++x) {
                for (std::size_t y = x + 1; y < members.size(); ++y) push(pairs, members[x], members[y], 1.0);
            }
        }
    } else {
        std::vector<std::vector<std::uint32_t>> sorted = seqs;
        for (auto& s : sorted) std::sort(s.begin(), s.end());
        const double d = config.dissimilarity_threshold;
        const unsigned workers = detail::worker_count(frags.size() * frags.size() / 2);
        std::vector<std::vector<ClonePair>> partial(workers);
        auto work = [&](unsigned w) {
            for (std::size_t i = w; i < frags.size(); i += workers) {
                for (std::size_t j = i + 1; j < frags.size(); ++j) {
                    const auto longest = std::max(seqs[i].size(), seqs[j].size());
                    const auto shortest = std::min(seqs[i].size(), seqs[j].size());
                    if (!within_dissimilarity(shortest, longest, d)) continue;
                    if (!within_dissimilarity(detail::multiset_overlap(sorted[i], sorted[j]), longest, d)) continue;
                    const auto common = lcs_length<std::uint32_t>(seqs[i], seqs[j]);
                    if (!within_dissimilarity(common, longest, d)) continue;
                    const double sim = longest == 0 ? 1.0 : static_cast<double>(common) / static_cast<double>(longest);
                    push(partial[w], i, j, sim);
                }
            }
        };
        if (workers == 1) {
            work(0);
        } else {
            std::vector<std::thread> pool;
            for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work, w);
            for (auto& t : pool) t.join();
        }
        for (auto& p : partial) pairs.insert(pairs.end(), p.begin(), p.end());
    }
    std::sort(pairs.begin(), pairs.end(), [](const ClonePair& x, const ClonePair& y) {
        return std::tie(x.a, x.b) < std::tie(y.a, y.b);
    });
    pairs.erase(std::unique(pairs.begin(), pairs.end(),
                            [](const ClonePair& x, const ClonePair& y) { return x.a == y.a && x.b == y.b; }),
                pairs.end());
    return pairs;
}

inline std::vector<CloneClass> cluster_clone_classes(std::span<const ClonePair> pairs,
                                                     ClusterMode mode = ClusterMode::Components) {
    std::vector<std::pair<FragmentId, FragmentId>> edges;
    edges.reserve(pairs.size());
    for (const auto& p : pairs) edges.emplace_back(p.a, p.b);
    std::vector<CloneClass> classes;
    for (auto& members : cluster_edges<FragmentId>(edges, mode)) classes.push_back({std::move(members), mode});
    return classes;
}

/// Everything one detection configuration produces for one fragment universe.
struct SourceDetection {
    DetectionConfig config;
    std::vector<FunctionFragment> fragments;
    std::vector<NormalizedFragment> normalized;
    std::vector<ClonePair> pairs;
    std::vector<CloneClass> classes;
    std::vector<std::string> diagnostics;
};

inline SourceDetection detect_source_clones(std::vector<FunctionFragment> fragments, const DetectionConfig& config,
                                            ClusterMode mode = ClusterMode::Components) {
    SourceDetection out;
    out.config = config;
    out.fragments = std::move(fragments);
    out.normalized.reserve(out.fragments.size());
    for (const auto& f : out.fragments) out.normalized.push_back(normalize_fragment(f, config.renaming));
    out.pairs = detect_clone_pairs(out.normalized, config);
    out.classes = cluster_clone_classes(out.pairs, mode);
    return out;
}

inline SourceDetection detect_source_clones(const ProjectSnapshot& snap, const DetectionConfig& config,
                                            ClusterMode mode = ClusterMode::Components) {
    auto extracted = extract_project_functions(snap, config);
    auto out = detect_source_clones(std::move(extracted.fragments), config, mode);
    out.diagnostics = std::move(extracted.diagnostics);
    return out;
}

} // namespace clonescope
