#pragma once

#include "clonescope/error.hpp"

#include <algorithm>
#include <cctype>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <istream>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

namespace clonescope {

namespace fs = std::filesystem;

enum class FileCategory { Scene, Template, Material, Config, Resource, Meta, Source, Unknown };

enum class Language { CSharp, C, Python, Java, Other };

inline const char* to_string(FileCategory c) {
    switch (c) {
        case FileCategory::Scene:    return "Scene";
        case FileCategory::Template: return "Template";
        case FileCategory::Material: return "Material";
        case FileCategory::Config:   return "Config";
        case FileCategory::Resource: return "Resource";
        case FileCategory::Meta:     return "Meta";
        case FileCategory::Source:   return "Source";
        case FileCategory::Unknown:  return "Unknown";
    }
    return "Unknown";
}

inline const char* to_string(Language l) {
    switch (l) {
        case Language::CSharp: return "CSharp";
        case Language::C:      return "C";
        case Language::Python: return "Python";
        case Language::Java:   return "Java";
        case Language::Other:  return "Other";
    }
    return "Other";
}

/// Asset categories admitted to serialized-file clone detection.
inline bool is_asset_category(FileCategory c) {
    return c == FileCategory::Scene || c == FileCategory::Template ||
           c == FileCategory::Material || c == FileCategory::Config;
}

namespace detail {

inline std::string lower_extension(std::string_view rel_path) {
    // Final extension of the last path component; dotfiles like ".gitignore" have none.
    auto slash = rel_path.find_last_of("/\\");
    std::string_view name = slash == std::string_view::npos ? rel_path : rel_path.substr(slash + 1);
    auto dot = name.find_last_of('.');
    if (dot == std::string_view::npos || dot == 0 || dot + 1 == name.size()) {
        return {};
    }
    std::string ext(name.substr(dot + 1));
    std::transform(ext.begin(), ext.end(), ext.begin(),
                   [](unsigned char ch) { return static_cast<char>(std::tolower(ch)); });
    return ext;
}

} // namespace detail

/**
 * Extension table for serialized engine files and source code. Depends only
 * on the lowercase final extension; anything unlisted is Unknown.
 */
inline FileCategory classify_file(std::string_view rel_path) {
    const std::string ext = detail::lower_extension(rel_path);
    if (ext.empty()) return FileCategory::Unknown;

    if (ext == "unity" || ext == "scene" || ext == "navmesh") return FileCategory::Scene;
    if (ext == "prefab") return FileCategory::Template;
    if (ext == "mat" || ext == "shader" || ext == "cginc") return FileCategory::Material;
    if (ext == "json" || ext == "ini") return FileCategory::Config;
    if (ext == "fbx" || ext == "wav" || ext == "png") return FileCategory::Resource;
    if (ext == "meta") return FileCategory::Meta;

    static constexpr std::string_view source_exts[] = {
        "cs", "c", "h", "py", "java", "cpp", "cc", "cxx", "hpp", "hh", "hxx",
        "js", "ts", "go", "rs", "swift", "kt", "m", "mm", "lua", "gd",
    };
    for (auto s : source_exts) {
        if (ext == s) return FileCategory::Source;
    }
    return FileCategory::Unknown;
}

inline Language language_of(std::string_view rel_path) {
    const std::string ext = detail::lower_extension(rel_path);
    if (ext == "cs") return Language::CSharp;
    if (ext == "c" || ext == "h") return Language::C;
    if (ext == "py") return Language::Python;
    if (ext == "java") return Language::Java;
    return Language::Other;
}

/**
 * Replaces every ill-formed UTF-8 sequence with U+FFFD. Returns the number of
 * replacements made through `replaced`.
 */
inline std::string decode_utf8_lossy(std::string_view bytes, std::size_t* replaced = nullptr) {
    static constexpr std::string_view replacement = "\xEF\xBF\xBD";
    std::string out;
    out.reserve(bytes.size());
    std::size_t bad = 0;
    std::size_t i = 0;
    const auto n = bytes.size();
    auto cont = [&](std::size_t k) {
        return k < n && (static_cast<unsigned char>(bytes[k]) & 0xC0) == 0x80;
    };
    while (i < n) {
        const auto c = static_cast<unsigned char>(bytes[i]);
        std::size_t len = 0;
        if (c < 0x80) {
            len = 1;
        } else if (c >= 0xC2 && c <= 0xDF) {
            len = cont(i + 1) ? 2 : 0;
        } else if (c >= 0xE0 && c <= 0xEF) {
            if (cont(i + 1) && cont(i + 2)) {
                const auto c1 = static_cast<unsigned char>(bytes[i + 1]);
                const bool overlong = c == 0xE0 && c1 < 0xA0;
                const bool surrogate = c == 0xED && c1 >= 0xA0;
                len = (overlong || surrogate) ? 0 : 3;
            }
        } else if (c >= 0xF0 && c <= 0xF4) {
            if (cont(i + 1) && cont(i + 2) && cont(i + 3)) {
                const auto c1 = static_cast<unsigned char>(bytes[i + 1]);
                const bool overlong = c == 0xF0 && c1 < 0x90;
                const bool too_big = c == 0xF4 && c1 >= 0x90;
                len = (overlong || too_big) ? 0 : 4;
            }
        }
        if (len == 0) {
            out += replacement;
            ++bad;
            ++i;
        } else {
            out.append(bytes.substr(i, len));
            i += len;
        }
    }
    if (replaced) *replaced = bad;
    return out;
}

struct SourceUnit {
    std::string rel_path;
    Language language = Language::Other;
    std::string content;

    bool operator==(const SourceUnit&) const = default;
};

struct AssetUnit {
    std::string rel_path;
    FileCategory category = FileCategory::Unknown;
    std::string content;

    bool operator==(const AssetUnit&) const = default;
};

struct ExcludedFile {
    std::string rel_path;
    std::string reason;

    bool operator==(const ExcludedFile&) const = default;
};

struct ProjectSnapshot {
    std::string project_id;
    std::string version_label;  // empty unless scanned from a versioned manifest entry
    fs::path root_path;
    std::vector<SourceUnit> source_units;
    std::vector<AssetUnit> asset_units;
    std::vector<ExcludedFile> excluded;
    std::vector<std::string> warnings;

    std::size_t excluded_count() const { return excluded.size(); }
    std::size_t files_scanned() const {
        return source_units.size() + asset_units.size() + excluded.size();
    }

    /// True when `rel_path` was seen by the scan, whatever its category.
    bool contains(std::string_view rel_path) const {
        auto match = [&](const auto& u) { return u.rel_path == rel_path; };
        return std::any_of(source_units.begin(), source_units.end(), match) ||
               std::any_of(asset_units.begin(), asset_units.end(), match) ||
               std::any_of(excluded.begin(), excluded.end(), match);
    }

    bool operator==(const ProjectSnapshot&) const = default;
};

struct ScanOptions {
    std::uintmax_t max_file_bytes = 8u * 1024u * 1024u;
};

namespace detail {

inline bool is_vcs_dir(const fs::path& name) {
    return name == ".git" || name == ".svn" || name == ".hg";
}

inline std::optional<std::string> read_file_bytes(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    if (!in) return std::nullopt;
    std::ostringstream ss;
    ss << in.rdbuf();
    if (in.bad()) return std::nullopt;
    return std::move(ss).str();
}

} // namespace detail

/**
 * Walks `root` and classifies every regular file. Symlinks are neither
 * followed nor counted, VCS metadata directories are skipped, and units are
 * ordered by relative path so that rescans are identical.
 */
inline ProjectSnapshot scan_project(const fs::path& root, const ScanOptions& options = {},
                                    std::string project_id = {}) {
    std::error_code ec;
    if (!fs::is_directory(root, ec)) {
        throw Error(ErrorKind::Io, "project root is not a readable directory: " + root.string());
    }
    ProjectSnapshot snap;
    snap.root_path = root;
    if (project_id.empty()) {
        auto norm = fs::absolute(root).lexically_normal();
        if (!norm.has_filename()) norm = norm.parent_path();  // "dir/" names the same directory as "dir"
        project_id = norm.filename().string();
    }
    snap.project_id = std::move(project_id);
    if (snap.project_id.empty()) snap.project_id = "project";

    std::vector<std::pair<std::string, fs::path>> files;
    fs::recursive_directory_iterator it(root, fs::directory_options::none, ec);
    if (ec) {
        throw Error(ErrorKind::Io, "cannot read project root " + root.string() + ": " + ec.message());
    }
    for (const fs::recursive_directory_iterator end; it != end; it.increment(ec)) {
        if (ec) {
            snap.warnings.push_back("directory traversal error: " + ec.message());
            ec.clear();
            continue;
        }
        const auto& entry = *it;
        if (entry.is_symlink(ec)) {
            if (entry.is_directory(ec)) it.disable_recursion_pending();
            continue;
        }
        if (entry.is_directory(ec)) {
            if (detail::is_vcs_dir(entry.path().filename())) it.disable_recursion_pending();
            continue;
        }
        if (!entry.is_regular_file(ec)) continue;
        files.emplace_back(entry.path().lexically_relative(root).generic_string(), entry.path());
    }
    std::sort(files.begin(), files.end());

    for (const auto& [rel, full] : files) {
        const FileCategory category = classify_file(rel);
        if (category != FileCategory::Source && !is_asset_category(category)) {
            snap.excluded.push_back({rel, to_string(category)});
            continue;
        }
        const auto size = fs::file_size(full, ec);
        if (ec) {
            snap.warnings.push_back(rel + ": cannot stat file, excluded");
            snap.excluded.push_back({rel, "unreadable"});
            ec.clear();
            continue;
        }
        if (size > options.max_file_bytes) {
            snap.warnings.push_back(rel + ": larger than " + std::to_string(options.max_file_bytes) +
                                    " bytes, excluded");
            snap.excluded.push_back({rel, "oversize"});
            continue;
        }
        auto bytes = detail::read_file_bytes(full);
        if (!bytes) {
            snap.warnings.push_back(rel + ": unreadable, excluded");
            snap.excluded.push_back({rel, "unreadable"});
            continue;
        }
        std::size_t replaced = 0;
        std::string text = decode_utf8_lossy(*bytes, &replaced);
        if (replaced > 0) {
            snap.warnings.push_back(rel + ": " + std::to_string(replaced) +
                                    " invalid UTF-8 sequence(s) replaced");
        }
        if (category == FileCategory::Source) {
            snap.source_units.push_back({rel, language_of(rel), std::move(text)});
        } else {
            snap.asset_units.push_back({rel, category, std::move(text)});
        }
    }
    return snap;
}

struct ManifestEntry {
    std::string project_id;
    fs::path root_path;
    std::optional<std::string> version_label;

    bool operator==(const ManifestEntry&) const = default;
};

/**
 * Whitespace separated `project_id root_path [version_label]`, one entry per
 * line. `#` starts a comment; blank lines are ignored.
 */
inline std::vector<ManifestEntry> parse_corpus_manifest(std::istream& in) {
    std::vector<ManifestEntry> entries;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        std::istringstream fields(line);
        std::vector<std::string> cols;
        for (std::string f; fields >> f;) cols.push_back(std::move(f));
        if (cols.empty()) continue;
        if (cols.size() < 2 || cols.size() > 3) {
            throw Error(ErrorKind::Parse, "manifest line " + std::to_string(line_no) +
                                              ": expected `project_id root_path [version_label]`, got " +
                                              std::to_string(cols.size()) + " field(s)");
        }
        ManifestEntry e{cols[0], cols[1], std::nullopt};
        if (cols.size() == 3) e.version_label = cols[2];
        entries.push_back(std::move(e));
    }
    return entries;
}

inline std::vector<ManifestEntry> load_corpus_manifest(const fs::path& manifest) {
    std::ifstream in(manifest);
    if (!in) throw Error(ErrorKind::Io, "cannot open manifest " + manifest.string());
    auto entries = parse_corpus_manifest(in);
    // Relative roots resolve against the manifest's own directory.
    for (auto& e : entries) {
        if (e.root_path.is_relative()) e.root_path = manifest.parent_path() / e.root_path;
    }
    return entries;
}

} // namespace clonescope
