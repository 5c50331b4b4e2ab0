#pragma once

#include "clonescope/error.hpp"
#include "clonescope/ingest.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace clonescope {

/**
 * A serialized asset reduced to a multiset of `key.path=value` entries.
 * Object-identity keys (guid, fileID, ...) are dropped so that two copies of
 * the same object with fresh identities compare equal.
 */
struct AssetDocument {
    std::string unit_path;
    FileCategory category = FileCategory::Unknown;
    std::map<std::string, std::uint32_t> entries;  // entry -> multiplicity
    std::size_t raw_line_count = 0;
    std::vector<std::string> warnings;

    std::size_t entry_count() const {
        std::size_t n = 0;
        for (const auto& [e, c] : entries) n += c;
        return n;
    }

    bool operator==(const AssetDocument&) const = default;
};

struct AssetParseOptions {
    std::set<std::string, std::less<>> volatile_keys = {
        "guid", "fileID", "m_LocalIdentfierInFile", "m_FileID", "m_PathID",
    };
};

namespace detail {

inline std::string_view trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

inline std::string unquote(std::string_view v) {
    v = trim(v);
    if (v.size() >= 2 && ((v.front() == '"' && v.back() == '"') || (v.front() == '\'' && v.back() == '\''))) {
        return std::string(v.substr(1, v.size() - 2));
    }
    return std::string(v);
}

inline std::string join_path(const std::string& base, std::string_view key) {
    if (base.empty()) return std::string(key);
    return base + "." + std::string(key);
}

class EntrySink {
public:
    EntrySink(AssetDocument& doc, const AssetParseOptions& opts) : doc_(doc), opts_(opts) {}

    bool is_volatile(std::string_view key) const { return opts_.volatile_keys.count(key) > 0; }

    void add(const std::string& path, std::string_view value) {
        ++doc_.entries[path + "=" + std::string(value)];
    }

private:
    AssetDocument& doc_;
    const AssetParseOptions& opts_;
};

// Minimal YAML flow-collection reader for values like
// `{fileID: 0, guid: abc, type: 3}` or `[a, {x: 1}]`.
class FlowParser {
public:
    FlowParser(std::string_view text, EntrySink& sink) : s_(text), sink_(sink) {}

    bool parse(const std::string& path) {
        skip_ws();
        if (!value(path)) return false;
        skip_ws();
        return pos_ == s_.size();
    }

private:
    std::string_view s_;
    EntrySink& sink_;
    std::size_t pos_ = 0;

    void skip_ws() {
        while (pos_ < s_.size() && (s_[pos_] == ' ' || s_[pos_] == '\t')) ++pos_;
    }

    std::string scalar(std::string_view stops) {
        skip_ws();
        if (pos_ < s_.size() && (s_[pos_] == '"' || s_[pos_] == '\'')) {
            const char q = s_[pos_++];
            std::string out;
            while (pos_ < s_.size() && s_[pos_] != q) {
                if (s_[pos_] == '\\' && q == '"' && pos_ + 1 < s_.size()) ++pos_;
                out += s_[pos_++];
            }
            if (pos_ < s_.size()) ++pos_;
            return out;
        }
        const auto begin = pos_;
        while (pos_ < s_.size() && stops.find(s_[pos_]) == std::string_view::npos) ++pos_;
        return std::string(trim(s_.substr(begin, pos_ - begin)));
    }

    bool value(const std::string& path) {
        skip_ws();
        if (pos_ >= s_.size()) return false;
        if (s_[pos_] == '{') return mapping(path);
        if (s_[pos_] == '[') return sequence(path);
        sink_.add(path, scalar(",}]"));
        return true;
    }

    bool mapping(const std::string& path) {
        ++pos_;
        bool any = false;
        skip_ws();
        if (pos_ < s_.size() && s_[pos_] == '}') {
            ++pos_;
            sink_.add(path, "{}");
            return true;
        }
        while (pos_ < s_.size()) {
            const std::string key = scalar(":,}");
            if (pos_ >= s_.size() || s_[pos_] != ':') return false;
            ++pos_;
            if (sink_.is_volatile(key)) {
                skip_value();
            } else {
                if (!value(join_path(path, key))) return false;
                any = true;
            }
            skip_ws();
            if (pos_ < s_.size() && s_[pos_] == ',') {
                ++pos_;
                continue;
            }
            if (pos_ < s_.size() && s_[pos_] == '}') {
                ++pos_;
                if (!any) sink_.add(path, "{}");
                return true;
            }
            return false;
        }
        return false;
    }

    bool sequence(const std::string& path) {
        ++pos_;
        skip_ws();
        if (pos_ < s_.size() && s_[pos_] == ']') {
            ++pos_;
            sink_.add(path, "[]");
            return true;
        }
        while (pos_ < s_.size()) {
            if (!value(path + ".-")) return false;
            skip_ws();
            if (pos_ < s_.size() && s_[pos_] == ',') {
                ++pos_;
                continue;
            }
            if (pos_ < s_.size() && s_[pos_] == ']') {
                ++pos_;
                return true;
            }
            return false;
        }
        return false;
    }

    void skip_value() {
        skip_ws();
        int depth = 0;
        while (pos_ < s_.size()) {
            const char c = s_[pos_];
            if (c == '{' || c == '[') ++depth;
            if (c == '}' || c == ']') {
                if (depth == 0) return;
                --depth;
            }
            if (c == ',' && depth == 0) return;
            ++pos_;
        }
    }
};

inline void emit_value(EntrySink& sink, const std::string& path, std::string_view raw, AssetDocument& doc,
                       std::size_t line_no) {
    const auto v = trim(raw);
    if (!v.empty() && (v.front() == '{' || v.front() == '[')) {
        // Dry run first so a malformed value never leaves partial entries behind.
        AssetDocument scratch;
        const AssetParseOptions no_volatile_keys{{}};
        EntrySink scratch_sink(scratch, no_volatile_keys);
        if (FlowParser(v, scratch_sink).parse(path)) {
            FlowParser(v, sink).parse(path);
            return;
        }
        doc.warnings.push_back("line " + std::to_string(line_no) + ": malformed flow value kept verbatim");
    }
    sink.add(path, unquote(v));
}

// Net count of open flow brackets outside quotes.
inline int flow_depth(std::string_view v) {
    int depth = 0;
    char quote = 0;
    for (char c : v) {
        if (quote) {
            if (c == quote) quote = 0;
        } else if (c == '"' || c == '\'') {
            quote = c;
        } else if (c == '{' || c == '[') {
            ++depth;
        } else if (c == '}' || c == ']') {
            --depth;
        }
    }
    return depth;
}

struct YamlLevel {
    int indent;
    std::string path;
    bool skip;  // inside a volatile key's block
};

inline void parse_unity_yaml(std::string_view text, AssetDocument& doc, const AssetParseOptions& opts) {
    EntrySink sink(doc, opts);
    std::vector<YamlLevel> stack;
    std::size_t line_no = 0;
    std::size_t start = 0;
    while (start <= text.size()) {
        auto nl = text.find('\n', start);
        std::string_view line = text.substr(start, nl == std::string_view::npos ? text.size() - start : nl - start);
        start = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
        ++line_no;

        const auto body = trim(line);
        if (body.empty() || body.front() == '#') continue;
        if (body.front() == '%') continue;  // %YAML / %TAG directives
        if (body.rfind("---", 0) == 0) {
            stack.clear();
            continue;
        }

        int indent = 0;
        while (static_cast<std::size_t>(indent) < line.size() && line[static_cast<std::size_t>(indent)] == ' ') ++indent;
        std::string_view rest = body;

        if (rest == "-" || rest.rfind("- ", 0) == 0) {
            while (!stack.empty() && (stack.back().indent > indent ||
                                      (stack.back().indent == indent && stack.back().path.ends_with(".-")))) {
                stack.pop_back();
            }
            const std::string parent = stack.empty() ? std::string{} : stack.back().path;
            const bool skip = !stack.empty() && stack.back().skip;
            stack.push_back({indent, join_path(parent, "-"), skip});
            rest = trim(rest.substr(1));
            indent += 2;
            if (rest.empty()) continue;
        }

        while (!stack.empty() && stack.back().indent >= indent) stack.pop_back();
        const std::string parent = stack.empty() ? std::string{} : stack.back().path;
        const bool parent_skip = !stack.empty() && stack.back().skip;

        // `key: value` or `key:`; a colon must be followed by space or end of line.
        std::size_t colon = std::string_view::npos;
        if (!rest.empty() && rest.front() != '{' && rest.front() != '[' && rest.front() != '"' &&
            rest.front() != '\'') {
            for (std::size_t k = 0; k < rest.size(); ++k) {
                if (rest[k] == ':' && (k + 1 == rest.size() || rest[k + 1] == ' ')) {
                    colon = k;
                    break;
                }
            }
        }
        if (colon == std::string_view::npos) {
            if (!parent_skip) emit_value(sink, parent, rest, doc, line_no);
            continue;
        }
        const std::string key = unquote(rest.substr(0, colon));
        std::string value(trim(rest.substr(colon + 1)));
        // Long flow collections are wrapped over several physical lines.
        if (!value.empty() && (value.front() == '{' || value.front() == '[')) {
            while (flow_depth(value) > 0 && start <= text.size()) {
                nl = text.find('\n', start);
                auto more = text.substr(start, nl == std::string_view::npos ? text.size() - start : nl - start);
                start = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
                ++line_no;
                value += ' ';
                value += trim(more);
            }
        }
        const bool skip = parent_skip || sink.is_volatile(key);
        if (value.empty()) {
            stack.push_back({indent, join_path(parent, key), skip});
            continue;
        }
        if (!skip) emit_value(sink, join_path(parent, key), value, doc, line_no);
    }
}

inline void flatten_json(const nlohmann::json& j, const std::string& path, EntrySink& sink) {
    if (j.is_object()) {
        bool any = false;
        for (auto it = j.begin(); it != j.end(); ++it) {
            if (sink.is_volatile(it.key())) continue;
            flatten_json(it.value(), join_path(path, it.key()), sink);
            any = true;
        }
        if (!any) sink.add(path, "{}");
    } else if (j.is_array()) {
        if (j.empty()) sink.add(path, "[]");
        for (const auto& e : j) flatten_json(e, path + (path.empty() ? "-" : ".-"), sink);
    } else if (j.is_string()) {
        sink.add(path, j.get<std::string>());
    } else {
        sink.add(path, j.dump());
    }
}

inline void parse_lines(std::string_view text, AssetDocument& doc, EntrySink& sink) {
    std::size_t start = 0;
    while (start <= text.size()) {
        auto nl = text.find('\n', start);
        auto line = trim(text.substr(start, nl == std::string_view::npos ? text.size() - start : nl - start));
        start = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
        if (!line.empty()) sink.add("line", line);
    }
    (void)doc;
}

inline void parse_ini(std::string_view text, AssetDocument& doc, EntrySink& sink) {
    std::string section;
    std::size_t start = 0;
    std::size_t line_no = 0;
    while (start <= text.size()) {
        auto nl = text.find('\n', start);
        auto line = trim(text.substr(start, nl == std::string_view::npos ? text.size() - start : nl - start));
        start = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
        ++line_no;
        if (line.empty() || line.front() == ';' || line.front() == '#') continue;
        if (line.front() == '[') {
            const auto close = line.find(']');
            if (close == std::string_view::npos) {
                doc.warnings.push_back("line " + std::to_string(line_no) + ": unterminated section header");
                sink.add("line", line);
                continue;
            }
            section = std::string(trim(line.substr(1, close - 1)));
            continue;
        }
        const auto eq = line.find_first_of("=:");
        if (eq == std::string_view::npos) {
            sink.add(join_path(section, "line"), line);
            continue;
        }
        const auto key = trim(line.substr(0, eq));
        if (sink.is_volatile(key)) continue;
        sink.add(join_path(section, key), unquote(line.substr(eq + 1)));
    }
}

inline bool looks_like_unity_yaml(std::string_view text) {
    const auto head = trim(text.substr(0, std::min<std::size_t>(text.size(), 64)));
    return head.rfind("%YAML", 0) == 0 || text.find("--- !u!") != std::string_view::npos;
}

} // namespace detail

/**
 * Flattens Unity multi-document YAML, JSON and INI into path=value entries.
 * Anything else (shader sources, non-YAML scenes) becomes one entry per
 * non-blank line. Malformed input degrades to line entries with a warning.
 */
inline AssetDocument parse_asset(const AssetUnit& unit, const AssetParseOptions& opts = {}) {
    if (!is_asset_category(unit.category)) {
        throw Error(ErrorKind::InvalidArgument,
                    unit.rel_path + ": category " + to_string(unit.category) + " is not a serialized asset");
    }
    AssetDocument doc;
    doc.unit_path = unit.rel_path;
    doc.category = unit.category;
    const std::string_view text = unit.content;
    if (!text.empty()) {
        doc.raw_line_count = static_cast<std::size_t>(std::count(text.begin(), text.end(), '\n'));
        if (text.back() != '\n') ++doc.raw_line_count;
    }
    detail::EntrySink sink(doc, opts);
    const std::string ext = detail::lower_extension(unit.rel_path);

    if (detail::trim(text).empty()) return doc;
    if (ext == "json") {
        auto j = nlohmann::json::parse(text, nullptr, false);
        if (j.is_discarded()) {
            doc.warnings.push_back(unit.rel_path + ": invalid JSON, compared line by line");
            detail::parse_lines(text, doc, sink);
        } else {
            detail::flatten_json(j, "", sink);
        }
    } else if (ext == "ini") {
        detail::parse_ini(text, doc, sink);
    } else if (detail::looks_like_unity_yaml(text)) {
        detail::parse_unity_yaml(text, doc, opts);
    } else {
        if (unit.category != FileCategory::Material || (ext != "shader" && ext != "cginc")) {
            doc.warnings.push_back(unit.rel_path + ": not text-serialized YAML, compared line by line");
        }
        detail::parse_lines(text, doc, sink);
    }
    return doc;
}

/**
 * Dice coefficient over the entry multisets: 2|a n b| / (|a| + |b|).
 * Two empty documents are identical.
 */
inline double structural_similarity(const AssetDocument& a, const AssetDocument& b) {
    if (a.category != b.category) {
        throw Error(ErrorKind::InvalidArgument, "cannot compare " + std::string(to_string(a.category)) + " file " +
                                                    a.unit_path + " with " + to_string(b.category) + " file " +
                                                    b.unit_path);
    }
    const auto total = a.entry_count() + b.entry_count();
    if (total == 0) return 1.0;
    std::size_t shared = 0;
    auto ia = a.entries.begin();
    auto ib = b.entries.begin();
    while (ia != a.entries.end() && ib != b.entries.end()) {
        if (ia->first < ib->first) {
            ++ia;
        } else if (ib->first < ia->first) {
            ++ib;
        } else {
            shared += std::min(ia->second, ib->second);
            ++ia;
            ++ib;
        }
    }
    return 2.0 * static_cast<double>(shared) / static_cast<double>(total);
}

} // namespace clonescope
