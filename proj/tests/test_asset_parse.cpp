#include "clonescope/asset_parse.hpp"
#include "support/testkit.hpp"

#include <gtest/gtest.h>

using namespace clonescope;

namespace {

AssetDocument doc(const std::string& path, const std::string& text) {
    return parse_asset({path, classify_file(path), text});
}

bool has(const AssetDocument& d, const std::string& entry) { return d.entries.count(entry) > 0; }

const char* kPrefab =
    "%YAML 1.1\n"
    "%TAG !u! tag:unity3d.com,2011:\n"
    "--- !u!1 &4410771001\n"
    "GameObject:\n"
    "  m_ObjectHideFlags: 0\n"
    "  m_Component:\n"
    "  - component: {fileID: 4410771002}\n"
    "  - component: {fileID: 4410771003}\n"
    "  m_Layer: 0\n"
    "  m_Name: Door\n"
    "--- !u!4 &4410771002\n"
    "Transform:\n"
    "  m_GameObject: {fileID: 4410771001}\n"
    "  m_LocalPosition: {x: 0, y: 1.5, z: 0}\n"
    "  m_Children: []\n"
    "--- !u!114 &4410771003\n"
    "MonoBehaviour:\n"
    "  m_Script: {fileID: 11500000, guid: 0123456789abcdef0123456789abcdef,\n"
    "    type: 3}\n"
    "  speed: 2\n";

} // namespace

TEST(AssetParse, UnityYamlPaths) {
    auto d = doc("Door.prefab", kPrefab);
    EXPECT_TRUE(has(d, "GameObject.m_ObjectHideFlags=0"));
    EXPECT_TRUE(has(d, "GameObject.m_Name=Door"));
    EXPECT_TRUE(has(d, "GameObject.m_Layer=0"));
    EXPECT_EQ(d.entries.at("GameObject.m_Component.-.component={}"), 2u);
    EXPECT_TRUE(has(d, "Transform.m_GameObject={}"));
    EXPECT_TRUE(has(d, "Transform.m_LocalPosition.y=1.5"));
    EXPECT_TRUE(has(d, "Transform.m_Children=[]"));
    EXPECT_TRUE(has(d, "MonoBehaviour.m_Script.type=3"));  // wrapped flow mapping joined
    EXPECT_TRUE(has(d, "MonoBehaviour.speed=2"));
    EXPECT_TRUE(d.warnings.empty());
    for (const auto& [e, n] : d.entries) {
        EXPECT_EQ(e.find("guid"), std::string::npos) << e;
        EXPECT_EQ(e.find("fileID"), std::string::npos) << e;
        EXPECT_EQ(e.find("4410771"), std::string::npos) << e;
    }
}

TEST(AssetParse, VolatileBlocksAreSkipped) {
    auto d = doc("a.mat", "%YAML 1.1\n--- !u!21 &1\nMaterial:\n  m_Name: M\n  guid:\n    nested: 1\n  after: 2\n");
    EXPECT_TRUE(has(d, "Material.m_Name=M"));
    EXPECT_TRUE(has(d, "Material.after=2"));
    EXPECT_EQ(d.entry_count(), 2u);
}

TEST(AssetParse, JsonFlattensWithoutVolatileKeys) {
    auto d = doc("settings.json", R"({"b": {"c": [1, 2]}, "guid": "zz", "a": true})");
    EXPECT_TRUE(has(d, "a=true"));
    EXPECT_TRUE(has(d, "b.c.-=1"));
    EXPECT_TRUE(has(d, "b.c.-=2"));
    EXPECT_EQ(d.entry_count(), 3u);
}

TEST(AssetParse, InvalidJsonFallsBackToLines) {
    auto d = doc("bad.json", "{ not json\n");
    EXPECT_EQ(d.warnings.size(), 1u);
    EXPECT_EQ(d.entry_count(), 1u);
}

TEST(AssetParse, IniSections) {
    auto d = doc("game.ini", "; comment\n[Audio]\nvolume = 3\n[Video]\nvsync=on\n");
    EXPECT_TRUE(has(d, "Audio.volume=3"));
    EXPECT_TRUE(has(d, "Video.vsync=on"));
}

TEST(AssetParse, ShaderComparedByLinesWithoutWarning) {
    auto d = doc("s.shader", "Shader \"X\" {\n  Pass { }\n}\n");
    EXPECT_TRUE(d.warnings.empty());
    EXPECT_EQ(d.entry_count(), 3u);
}

TEST(AssetParse, RejectsNonAssets) {
    EXPECT_THROW(parse_asset({"a.png", FileCategory::Resource, ""}), Error);
    EXPECT_THROW(parse_asset({"a.cs", FileCategory::Source, ""}), Error);
}

TEST(StructuralSimilarity, Basics) {
    auto a = doc("a.prefab", kPrefab);
    EXPECT_DOUBLE_EQ(structural_similarity(a, a), 1.0);
    auto empty1 = doc("e1.prefab", ""), empty2 = doc("e2.prefab", "");
    EXPECT_DOUBLE_EQ(structural_similarity(empty1, empty2), 1.0);
    EXPECT_DOUBLE_EQ(structural_similarity(a, empty1), 0.0);
    EXPECT_THROW(structural_similarity(a, doc("m.mat", kPrefab)), Error);
}

TEST(StructuralSimilarity, DiceOverMultisets) {
    auto a = doc("a.json", R"({"x": 1, "y": 2, "z": 3, "w": 4})");
    auto b = doc("b.json", R"({"x": 1, "y": 2, "z": 9})");
    // shared 2, sizes 4 + 3
    EXPECT_DOUBLE_EQ(structural_similarity(a, b), 4.0 / 7.0);
}

TEST(StructuralSimilarity, PropertyAxioms) {
    std::mt19937 ids(5);
    testkit::YamlGen gen(17);
    for (int i = 0; i < 1000; ++i) {
        const bool mat = i % 3 == 0;
        const std::string ext = mat ? ".mat" : ".prefab";
        auto ta = mat ? gen.material(ids) : gen.prefab(ids, 1 + i % 5);
        auto tb = mat ? gen.material(ids) : gen.prefab(ids, 1 + (i / 5) % 5);
        auto a = doc("a" + ext, ta), b = doc("b" + ext, tb);
        const double s = structural_similarity(a, b);
        ASSERT_GE(s, 0.0);
        ASSERT_LE(s, 1.0);
        ASSERT_EQ(s, structural_similarity(b, a));
        ASSERT_EQ(structural_similarity(a, a), 1.0);
    }
}

TEST(StructuralSimilarity, InvariantUnderGuidAndFileIdChanges) {
    for (std::uint32_t seed = 0; seed < 200; ++seed) {
        std::mt19937 ids1(seed), ids2(seed + 100000);
        testkit::YamlGen g1(seed), g2(seed);  // same structure stream, different ids
        auto a1 = doc("a.prefab", g1.prefab(ids1, 4));
        auto a2 = doc("a.prefab", g2.prefab(ids2, 4));
        EXPECT_EQ(a1.entries, a2.entries);
    }
}
