#include "clonescope/ingest.hpp"
#include "support/testkit.hpp"

#include <gtest/gtest.h>

#include <sstream>

using namespace clonescope;
using testkit::TempDir;
using testkit::write_file;

TEST(ClassifyFile, ExtensionTable) {
    EXPECT_EQ(classify_file("Assets/Ball.prefab"), FileCategory::Template);
    EXPECT_EQ(classify_file("a/b/scene.unity"), FileCategory::Scene);
    EXPECT_EQ(classify_file("x.scene"), FileCategory::Scene);
    EXPECT_EQ(classify_file("x.navmesh"), FileCategory::Scene);
    EXPECT_EQ(classify_file("m.mat"), FileCategory::Material);
    EXPECT_EQ(classify_file("m.shader"), FileCategory::Material);
    EXPECT_EQ(classify_file("m.cginc"), FileCategory::Material);
    EXPECT_EQ(classify_file("c.json"), FileCategory::Config);
    EXPECT_EQ(classify_file("c.ini"), FileCategory::Config);
    EXPECT_EQ(classify_file("r.fbx"), FileCategory::Resource);
    EXPECT_EQ(classify_file("r.wav"), FileCategory::Resource);
    EXPECT_EQ(classify_file("r.png"), FileCategory::Resource);
    EXPECT_EQ(classify_file("Ball.prefab.meta"), FileCategory::Meta);
    EXPECT_EQ(classify_file("readme"), FileCategory::Unknown);
    EXPECT_EQ(classify_file(".gitignore"), FileCategory::Unknown);
    EXPECT_EQ(classify_file("notes.txt"), FileCategory::Unknown);
    EXPECT_EQ(classify_file("Player.cs"), FileCategory::Source);
}

TEST(ClassifyFile, DependsOnlyOnLowercaseExtension) {
    EXPECT_EQ(classify_file("A/B/C.PREFAB"), classify_file("z.prefab"));
    EXPECT_EQ(classify_file("Scene.Unity"), FileCategory::Scene);
    EXPECT_EQ(classify_file("dir.mat/file"), FileCategory::Unknown);
}

TEST(ClassifyFile, AssetCategoriesExcludeResourceAndMeta) {
    EXPECT_TRUE(is_asset_category(FileCategory::Scene));
    EXPECT_TRUE(is_asset_category(FileCategory::Template));
    EXPECT_TRUE(is_asset_category(FileCategory::Material));
    EXPECT_TRUE(is_asset_category(FileCategory::Config));
    EXPECT_FALSE(is_asset_category(FileCategory::Resource));
    EXPECT_FALSE(is_asset_category(FileCategory::Meta));
    EXPECT_FALSE(is_asset_category(FileCategory::Source));
    EXPECT_FALSE(is_asset_category(FileCategory::Unknown));
}

TEST(LanguageOf, FromExtension) {
    EXPECT_EQ(language_of("a.cs"), Language::CSharp);
    EXPECT_EQ(language_of("a.c"), Language::C);
    EXPECT_EQ(language_of("a.h"), Language::C);
    EXPECT_EQ(language_of("a.py"), Language::Python);
    EXPECT_EQ(language_of("a.java"), Language::Java);
    EXPECT_EQ(language_of("a.cpp"), Language::Other);
}

TEST(DecodeUtf8, ReplacesInvalidSequencesAndCounts) {
    std::size_t bad = 0;
    EXPECT_EQ(decode_utf8_lossy("plain", &bad), "plain");
    EXPECT_EQ(bad, 0u);
    EXPECT_EQ(decode_utf8_lossy("caf\xC3\xA9", &bad), "caf\xC3\xA9");
    EXPECT_EQ(bad, 0u);
    EXPECT_EQ(decode_utf8_lossy("a\xFF" "b", &bad), "a\xEF\xBF\xBD" "b");
    EXPECT_EQ(bad, 1u);
    decode_utf8_lossy("\xC0\xAF\xED\xA0\x80", &bad);  // overlong and surrogate
    EXPECT_GE(bad, 2u);
}

TEST(ScanProject, EmptyDirectory) {
    TempDir d("cs-empty");
    auto s = scan_project(d.path);
    EXPECT_TRUE(s.source_units.empty());
    EXPECT_TRUE(s.asset_units.empty());
    EXPECT_EQ(s.files_scanned(), 0u);
    EXPECT_FALSE(s.project_id.empty());
}

TEST(ScanProject, MixedDirectoryClassification) {
    TempDir d("cs-mixed");
    write_file(d.path / "a.cs", "class A {}\n");
    write_file(d.path / "b.prefab", "%YAML 1.1\n");
    write_file(d.path / "c.png", "\x89PNG");
    write_file(d.path / "d.meta", "guid: 1\n");
    auto s = scan_project(d.path);
    ASSERT_EQ(s.source_units.size(), 1u);
    ASSERT_EQ(s.asset_units.size(), 1u);
    EXPECT_EQ(s.asset_units[0].category, FileCategory::Template);
    EXPECT_EQ(s.excluded_count(), 2u);
    EXPECT_EQ(s.files_scanned(), 4u);
}

TEST(ScanProject, AssetCategories) {
    TempDir d("cs-assets");
    write_file(d.path / "x.mat", "m");
    write_file(d.path / "y.unity", "s");
    write_file(d.path / "z.json", "{}");
    auto s = scan_project(d.path);
    ASSERT_EQ(s.asset_units.size(), 3u);
    EXPECT_EQ(s.asset_units[0].category, FileCategory::Material);
    EXPECT_EQ(s.asset_units[1].category, FileCategory::Scene);
    EXPECT_EQ(s.asset_units[2].category, FileCategory::Config);
}

TEST(ScanProject, SkipsVcsAndSymlinksAndSortsPaths) {
    TempDir d("cs-vcs");
    write_file(d.path / ".git" / "config.json", "{}");
    write_file(d.path / "z" / "b.cs", "x");
    write_file(d.path / "a.cs", "y");
    std::error_code ec;
    fs::create_symlink(d.path / "a.cs", d.path / "link.cs", ec);
    fs::create_directory_symlink(d.path / "z", d.path / "zlink", ec);
    auto s = scan_project(d.path);
    ASSERT_EQ(s.source_units.size(), 2u);
    EXPECT_EQ(s.source_units[0].rel_path, "a.cs");
    EXPECT_EQ(s.source_units[1].rel_path, "z/b.cs");
    EXPECT_EQ(s.files_scanned(), 2u);
}

TEST(ScanProject, RescanIsIdentical) {
    TempDir d("cs-rescan");
    write_file(d.path / "Assets" / "p.prefab", "a: 1\n");
    write_file(d.path / "Assets" / "q.cs", "void F() {}\n");
    write_file(d.path / "notes.txt", "n");
    EXPECT_EQ(scan_project(d.path, {}, "p"), scan_project(d.path, {}, "p"));
}

TEST(ScanProject, OversizeAndInvalidUtf8AreRecorded) {
    TempDir d("cs-odd");
    write_file(d.path / "big.json", std::string(64, 'x'));
    write_file(d.path / "odd.cs", "int x = 1; // \xFF\n");
    ScanOptions opts;
    opts.max_file_bytes = 32;
    auto s = scan_project(d.path, opts);
    ASSERT_EQ(s.excluded.size(), 1u);
    EXPECT_EQ(s.excluded[0].reason, "oversize");
    ASSERT_EQ(s.source_units.size(), 1u);
    EXPECT_NE(s.source_units[0].content.find("\xEF\xBF\xBD"), std::string::npos);
    EXPECT_EQ(s.warnings.size(), 2u);
}

TEST(ScanProject, MissingRootIsFatal) {
    try {
        scan_project("/nonexistent/clonescope/root");
        FAIL() << "expected an error";
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::Io);
    }
}

TEST(ScanProject, ExcludedKeyFilesStillVisible) {
    TempDir d("cs-key");
    write_file(d.path / "Assets/XR/OpenXR/Settings/OpenXRSettings.asset", "x");
    auto s = scan_project(d.path);
    EXPECT_TRUE(s.contains("Assets/XR/OpenXR/Settings/OpenXRSettings.asset"));
    EXPECT_FALSE(s.contains("Assets/missing.cs"));
}

TEST(Manifest, ParsesEntriesInOrder) {
    std::istringstream in("# corpus\n"
                          "gpac /data/gpac-v1 1.0.0\n"
                          "\n"
                          "gpac /data/gpac-v2 2.0.0   # newer\n"
                          "solo /data/solo\n");
    auto e = parse_corpus_manifest(in);
    ASSERT_EQ(e.size(), 3u);
    EXPECT_EQ(e[0].project_id, "gpac");
    EXPECT_EQ(e[0].version_label, "1.0.0");
    EXPECT_EQ(e[1].root_path, fs::path("/data/gpac-v2"));
    EXPECT_EQ(e[1].version_label, "2.0.0");
    EXPECT_FALSE(e[2].version_label.has_value());
}

TEST(Manifest, EmptyAndMalformed) {
    std::istringstream empty("");
    EXPECT_TRUE(parse_corpus_manifest(empty).empty());
    std::istringstream bad("ok /x\nlonely\n");
    try {
        parse_corpus_manifest(bad);
        FAIL() << "expected a parse error";
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::Parse);
        EXPECT_NE(std::string(e.what()).find("line 2"), std::string::npos);
    }
}

TEST(Manifest, RelativeRootsResolveAgainstManifest) {
    TempDir d("cs-manifest");
    write_file(d.path / "corpus.txt", "p sub/dir v1\n");
    auto e = load_corpus_manifest(d.path / "corpus.txt");
    ASSERT_EQ(e.size(), 1u);
    EXPECT_EQ(e[0].root_path, d.path / "sub/dir");
}
