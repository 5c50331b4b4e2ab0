// Acceptance run: one PASS/FAIL line per criterion, non-zero exit if any fails.
// Tolerances are pinned below and never adjusted per run.

#include "clonescope/analysis.hpp"
#include "clonescope/report.hpp"
#include "support/testkit.hpp"

#include <sys/wait.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <sstream>

using namespace clonescope;

namespace {

constexpr double kPercentTolerancePP = 0.01;  // criterion 1, percentage points on printed values
constexpr double kCriterion1Seconds = 1.0;
constexpr double kCriterion2Seconds = 60.0;
constexpr int kSubsumptionSeeds = 50;
constexpr std::size_t kMinSubsumptionFragments = 100;
constexpr std::size_t kMinPlantedFragments = 500;
constexpr int kLcsPairs = 1000;
constexpr std::size_t kMaxLcsLength = 60;
constexpr int kCliqueGraphs = 200;
constexpr int kMaxGraphVertices = 12;
constexpr int kMinAssetPropertyCases = 1000;
constexpr double kCiTolerance = 1e-12;

struct Outcome {
    bool pass = true;
    std::string detail;

    void require(bool ok, const std::string& what) {
        if (!ok && pass) detail = what;
        pass = pass && ok;
    }
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

// Printed two-decimal percentage as an integer count of hundredths.
long hundredths(const std::string& printed) {
    return std::lround(std::stod(printed) * 100.0);
}

// ---- 1 -------------------------------------------------------------------

Outcome metric_fixtures() {
    Outcome o;
    const auto t0 = std::chrono::steady_clock::now();
    struct AssetRow {
        const char* project;
        std::uint64_t nca, ncg, total;
        const char* rca;
        const char* rcg;
    };
    const AssetRow rows[] = {
        {"RhythmAttack-VR", 286, 44, 658, "43.47", "6.69"},
        {"Dungeon-VR", 941, 66, 1737, "54.17", "3.80"},
        {"VR-Escape-Room", 154, 20, 355, "43.38", "5.63"},
        {"Terminal", 268, 28, 450, "59.56", "6.22"},
        {"elite-vr-cockpit", 97, 14, 212, "45.75", "6.60"},
        {"VRHamsterBall", 108, 16, 194, "55.67", "8.25"},
        {"epicslash", 145, 21, 210, "69.05", "10.00"},
        {"AirAttack", 265, 22, 352, "75.28", "6.25"},
        {"GolfVR", 56, 9, 116, "48.28", "7.76"},
        {"XR-Keyboard", 70, 9, 159, "44.03", "5.66"},
        {"HorrorGame", 349, 46, 506, "68.97", "9.09"},
        {"Pokemon-Themed-Kiosk-VR", 172, 19, 239, "71.97", "7.95"},
        {"Situated-Empathy-in-VR", 158, 6, 209, "75.60", "2.87"},
        {"mineRVa", 235, 19, 411, "57.18", "4.62"},
        {"vrtist", 293, 43, 408, "71.81", "10.54"},
        {"OpendagVR2", 699, 57, 947, "73.81", "6.02"},
        {"Procrastination-VR", 438, 12, 478, "91.63", "2.51"},
        {"Group6_ProjectNurture", 777, 51, 1099, "70.70", "4.64"},
        {"SoundSpace", 207, 28, 391, "52.94", "7.16"},
        {"CityMatrixAR", 70, 10, 115, "60.87", "8.70"},
    };
    const long tol = std::lround(kPercentTolerancePP * 100.0);
    for (const auto& r : rows) {
        AssetCloneMetrics m;
        m.nca = r.nca;
        m.ncg = r.ncg;
        m.total_assets = r.total;
        const long rca = static_cast<long>(m.rca().percent_units(2));
        const long rcg = static_cast<long>(m.rcg().percent_units(2));
        o.require(std::labs(rca - hundredths(r.rca)) <= tol, std::string(r.project) + " rca " + render_percent(m.rca()));
        o.require(std::labs(rcg - hundredths(r.rcg)) <= tol, std::string(r.project) + " rcg " + render_percent(m.rcg()));
    }
    struct SourceRow {
        const char* project;
        std::uint64_t ncf, total;
        const char* rcf;
    };
    const SourceRow src[] = {{"gpac", 2699, 10170, "26.54"}, {"BlenderXR", 4448, 27822, "16.00"}};
    std::string blender;
    for (const auto& r : src) {
        SourceCloneMetrics m{CloneType::T3_2, r.ncf, 0, r.total};
        const long got = static_cast<long>(m.rcf().percent_units(2));
        o.require(std::labs(got - hundredths(r.rcf)) <= tol, std::string(r.project) + " rcf " + render_percent(m.rcf()));
        if (std::string(r.project) == "BlenderXR") blender = render_percent(m.rcf());
    }
    const double secs = seconds_since(t0);
    o.require(secs < kCriterion1Seconds, "too slow");
    if (o.pass) {
        o.detail = "20 asset rows + 2 rcf rows within 0.01 pp of print (BlenderXR renders " + blender +
                   " vs printed 16.00%)";
    }
    return o;
}

// ---- 2 -------------------------------------------------------------------

using SitePairs = std::set<std::pair<testkit::Site, testkit::Site>>;

bool subset(const SitePairs& a, const SitePairs& b) {
    return std::includes(b.begin(), b.end(), a.begin(), a.end());
}

std::set<testkit::Site> touched(const SitePairs& p) {
    std::set<testkit::Site> s;
    for (const auto& [a, b] : p) {
        s.insert(a);
        s.insert(b);
    }
    return s;
}

Outcome subsumption() {
    Outcome o;
    const auto t0 = std::chrono::steady_clock::now();
    std::size_t min_fragments = SIZE_MAX;
    for (int seed = 0; seed < kSubsumptionSeeds; ++seed) {
        testkit::CorpusPlanter planter(static_cast<std::uint32_t>(1000 + seed));
        std::vector<testkit::PlantedFamily> truth;
        ProjectSnapshot snap;
        snap.source_units = planter.plant(60, 5, truth);
        std::map<CloneType, SitePairs> found;
        for (auto t : kAllCloneTypes) {
            auto det = detect_source_clones(snap, DetectionConfig::for_type(t, 0.3, 3));
            min_fragments = std::min(min_fragments, det.fragments.size());
            found[t] = testkit::site_pairs(det.fragments, det.pairs);
        }
        const std::string s = "seed " + std::to_string(seed) + ": ";
        o.require(subset(found[CloneType::T1], found[CloneType::T2c]), s + "T1 not within T2c");
        o.require(subset(found[CloneType::T2c], found[CloneType::T2]), s + "T2c not within T2");
        o.require(subset(found[CloneType::T1], found[CloneType::T3_1]), s + "T1 not within T3-1");
        o.require(subset(found[CloneType::T2], found[CloneType::T3_2]), s + "T2 not within T3-2");
        o.require(subset(found[CloneType::T2c], found[CloneType::T3_2c]), s + "T2c not within T3-2c");
        auto ncf = [&](CloneType t) { return touched(found[t]).size(); };
        o.require(ncf(CloneType::T1) <= ncf(CloneType::T2c) && ncf(CloneType::T2c) <= ncf(CloneType::T2) &&
                      ncf(CloneType::T1) <= ncf(CloneType::T3_1) && ncf(CloneType::T2) <= ncf(CloneType::T3_2) &&
                      ncf(CloneType::T2c) <= ncf(CloneType::T3_2c),
                  s + "NCF ordering violated");
    }
    o.require(min_fragments >= kMinSubsumptionFragments, "corpus too small");
    const double secs = seconds_since(t0);
    o.require(secs < kCriterion2Seconds, "too slow");
    if (o.pass) {
        char buf[160];
        std::snprintf(buf, sizeof buf, "%d seeds x %zu fragments, chains and NCF order hold (%.1fs)",
                      kSubsumptionSeeds, min_fragments, secs);
        o.detail = buf;
    }
    return o;
}

// ---- 3 -------------------------------------------------------------------

Outcome planted_recall_precision() {
    Outcome o;
    testkit::CorpusPlanter planter(77);
    std::vector<testkit::PlantedFamily> truth;
    ProjectSnapshot snap;
    snap.source_units = planter.plant(260, 20, truth);
    std::size_t fragments = 0, near_in = 0, near_out = 0;
    for (auto t : {CloneType::T1, CloneType::T2, CloneType::T2c, CloneType::T3_2}) {
        auto det = detect_source_clones(snap, DetectionConfig::for_type(t, 0.3, 3));
        fragments = det.fragments.size();
        const auto found = testkit::site_pairs(det.fragments, det.pairs);
        SitePairs expected;
        for (const auto& f : truth) {
            auto want = testkit::expected_for(f, t);
            if (want && *want) expected.insert(testkit::family_key(f));
            if (t == CloneType::T3_2 && (f.kind == testkit::Variant::Replace || f.kind == testkit::Variant::Delete ||
                                         f.kind == testkit::Variant::Insert)) {
                (f.dissimilarity() <= 0.3 + 1e-12 ? near_in : near_out) += 1;
            }
        }
        std::size_t tp = 0;
        for (const auto& p : found) tp += expected.count(p);
        const std::string name = to_string(t);
        o.require(tp == expected.size(), name + " recall " + std::to_string(tp) + "/" + std::to_string(expected.size()));
        o.require(tp == found.size(), name + " precision " + std::to_string(tp) + "/" + std::to_string(found.size()));
    }
    o.require(fragments >= kMinPlantedFragments, "only " + std::to_string(fragments) + " fragments");
    o.require(near_in > 0 && near_out > 0, "edits do not straddle 30%");
    if (o.pass) {
        o.detail = std::to_string(fragments) + " fragments; T1/T2/T2c/T3-2 at 100% precision and recall; " +
                   std::to_string(near_in) + " edits <= 30% found, " + std::to_string(near_out) + " > 30% rejected";
    }
    return o;
}

// ---- 4 -------------------------------------------------------------------

Outcome lcs_oracle() {
    Outcome o;
    std::mt19937 rng(4);
    std::uniform_int_distribution<std::size_t> len(0, kMaxLcsLength);
    std::uniform_int_distribution<int> sym(0, 5);
    for (int i = 0; i < kLcsPairs; ++i) {
        NormalizedFragment a{FragmentId{0}, {}, Renaming::None}, b{FragmentId{1}, {}, Renaming::None};
        a.lines.resize(len(rng));
        b.lines.resize(len(rng));
        for (auto& s : a.lines) s = "line " + std::to_string(sym(rng));
        for (auto& s : b.lines) s = "line " + std::to_string(sym(rng));
        const auto longest = std::max(a.lines.size(), b.lines.size());
        const double want = longest == 0 ? 1.0 : static_cast<double>(testkit::brute_lcs(a.lines, b.lines)) / longest;
        o.require(fragment_similarity(a, b) == want, "mismatch at pair " + std::to_string(i));
    }
    if (o.pass) o.detail = std::to_string(kLcsPairs) + " random pairs equal brute-force LCS exactly";
    return o;
}

// ---- 5 -------------------------------------------------------------------

Outcome clustering_oracles() {
    Outcome o;
    std::mt19937 rng(5);
    for (int g = 0; g < kCliqueGraphs; ++g) {
        const int n = std::uniform_int_distribution<int>(1, kMaxGraphVertices)(rng);
        const double density = std::uniform_real_distribution<double>(0.05, 0.95)(rng);
        const auto edges = testkit::random_graph(rng, n, density);
        o.require(cluster_edges<int>(edges, ClusterMode::Cliques) == testkit::brute_maximal_cliques(n, edges),
                  "cliques differ on graph " + std::to_string(g));
        o.require(cluster_edges<int>(edges, ClusterMode::Components) == testkit::union_find_components(n, edges),
                  "components differ on graph " + std::to_string(g));
    }
    if (o.pass) o.detail = std::to_string(kCliqueGraphs) + " graphs match both oracles";
    return o;
}

// ---- 6 -------------------------------------------------------------------

AssetDocument parse(const std::string& path, const std::string& text) {
    return parse_asset({path, classify_file(path), text});
}

Outcome asset_axioms() {
    Outcome o;
    int cases = 0;
    std::mt19937 ids(6);
    testkit::YamlGen gen(66);
    for (int i = 0; i < 600; ++i) {
        const bool mat = i % 2 == 0;
        const std::string ext = mat ? ".mat" : ".prefab";
        auto a = parse("a" + ext, mat ? gen.material(ids) : gen.prefab(ids, 1 + i % 4));
        auto b = parse("b" + ext, mat ? gen.material(ids) : gen.prefab(ids, 1 + (i / 4) % 4));
        const double s = structural_similarity(a, b);
        o.require(s >= 0.0 && s <= 1.0, "range");
        o.require(s == structural_similarity(b, a), "symmetry");
        o.require(structural_similarity(a, a) == 1.0, "reflexivity");
        cases += 3;
    }
    for (std::uint32_t seed = 0; seed < 400; ++seed) {
        std::mt19937 ids1(seed), ids2(seed ^ 0x9e3779b9u);
        testkit::YamlGen g1(seed), g2(seed);
        const bool mat = seed % 2 == 0;
        const std::string p = mat ? "x.mat" : "x.prefab";
        auto a = parse(p, mat ? g1.material(ids1) : g1.prefab(ids1, 3));
        auto b = parse(p, mat ? g2.material(ids2) : g2.prefab(ids2, 3));
        o.require(structural_similarity(a, b) == 1.0, "guid/fileID changed the score");
        ++cases;
    }
    o.require(cases >= kMinAssetPropertyCases, "too few cases");

    auto rec = [](std::string a, std::string b, double s) {
        return SimilarityRecord{std::move(a), std::move(b), s, BackendKind::Structural, false};
    };
    std::vector<SimilarityRecord> three = {rec("a", "b", 0.9), rec("a", "c", 0.9), rec("b", "c", 0.9)};
    const double ci3 = clone_index(three, 3);
    o.require(std::fabs(ci3 - 0.9) <= kCiTolerance, "3-file CI " + std::to_string(ci3));

    std::vector<AssetUnit> units = {{"p.prefab", FileCategory::Template, "%YAML 1.1\n--- !u!1 &1\nGameObject:\n  m_Name: A\n"},
                                    {"q.prefab", FileCategory::Template, "%YAML 1.1\n--- !u!1 &9\nGameObject:\n  m_Name: A\n"}};
    auto parsed = parse_assets(units);
    StructuralScorer scorer;
    auto det = detect_clone_files(parsed, BackendConfig{}, scorer);
    const double ci2 = clone_index(det.records, 2);
    o.require(std::fabs(ci2 - 0.5) <= kCiTolerance, "2-file CI " + std::to_string(ci2));
    if (o.pass) {
        o.detail = std::to_string(cases) + " property cases; CI(3 x 0.9) = " + std::to_string(ci3) +
                   ", CI(2 identical) = " + std::to_string(ci2);
    }
    return o;
}

// ---- 7 -------------------------------------------------------------------

Outcome threshold_boundary() {
    Outcome o;
    // Dice 2*4/(5+5) = 0.8 exactly, computed by the real structural scorer.
    std::vector<AssetUnit> units = {
        {"a.json", FileCategory::Config, R"({"k1":1,"k2":2,"k3":3,"k4":4,"k5":5})"},
        {"b.json", FileCategory::Config, R"({"k1":1,"k2":2,"k3":3,"k4":4,"k6":6})"},
        {"c.json", FileCategory::Config, R"({"k1":1,"k2":2,"k3":3,"k4":4,"k5":5,"k6":6,"k7":7,"k8":8,"k9":9})"},
    };
    auto parsed = parse_assets(units);
    StructuralScorer scorer;
    BackendConfig cfg;  // default threshold 0.80
    auto det = detect_clone_files(parsed, cfg, scorer);
    double ab = -1.0;
    for (const auto& r : det.records) {
        if (r.a == "a.json" && r.b == "b.json") ab = r.score;
    }
    o.require(ab == 0.8, "fixture pair scored " + std::to_string(ab));
    o.require(det.clone_files.count("a.json") == 0 && det.clone_files.count("b.json") == 0,
              "pair at exactly 0.80 counted as clone");
    o.require(cluster_clone_groups(det.records, cfg.clone_threshold).empty(), "pair at 0.80 formed a group");
    o.require(!exceeds(0.80, 0.80) && exceeds(0.8000001, 0.80), "exceeds() boundary");
    if (o.pass) o.detail = "pair at exactly 0.80 excluded from clone files and groups";
    return o;
}

// ---- 8 -------------------------------------------------------------------

Outcome llm_contract() {
    Outcome o;
    testkit::TempDir tmp("cs-accept-llm");
    BackendConfig cfg;
    cfg.kind = BackendKind::LLM;
    cfg.endpoint = "http://stub";
    cfg.api_key = "stub";
    cfg.cache_dir = tmp.path / "cache";
    testkit::ScriptedTransport stub([](const std::string&) { return "Similarity: 85%"; });
    std::vector<AssetUnit> units = {{"a.mat", FileCategory::Material, "m_Name: A\n"},
                                    {"b.mat", FileCategory::Material, "m_Name: B\n"},
                                    {"c.mat", FileCategory::Material, "m_Name: C\n"}};
    auto parsed = parse_assets(units);

    LlmScorer cold(cfg, stub);
    auto first = detect_clone_files(parsed, cfg, cold);
    o.require(!stub.prompts.empty() &&
                  stub.prompts[0].find("provide a similarity score between 0% and 100%") != std::string::npos,
              "Step-1 sentence missing from prompt");
    o.require(first.records.size() == 3 && first.records[0].score == 0.85, "85% did not parse to 0.85");
    o.require(parse_similarity_response("85%") == 0.85, "parse 85%");
    bool errored = false;
    try {
        parse_similarity_response("They look fairly similar.");
    } catch (const Error& e) {
        errored = e.kind() == ErrorKind::UnparseableResponse;
    }
    o.require(errored, "non-numeric reply did not error");

    LlmScorer warm(cfg, stub);
    auto second = detect_clone_files(parsed, cfg, warm);
    o.require(warm.stats().requests.load() == 0, "warm cache issued requests");
    o.require(second.records.size() == 3, "warm run lost records");
    for (std::size_t i = 0; i < second.records.size(); ++i) {
        o.require(second.records[i].score == first.records[i].score && second.records[i].cached, "cache mismatch");
    }
    if (o.pass) {
        o.detail = "cold run " + std::to_string(cold.stats().requests.load()) + " requests, warm run " +
                   std::to_string(warm.stats().requests.load());
    }
    return o;
}

// ---- 9 -------------------------------------------------------------------

int run_cli(const std::string& args, const fs::path& out) {
    const std::string cmd = std::string("\"") + CLONESCOPE_CLI + "\" " + args + " --out \"" + out.string() +
                            "\" 2>/dev/null";
    const int rc = std::system(cmd.c_str());
    return WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
}

Outcome determinism() {
    Outcome o;
    testkit::TempDir tmp("cs-accept-cli");
    const std::string manifest = std::string("--manifest \"") + CLONESCOPE_SAMPLES + "/manifest.txt\"";
    for (const char* fmt : {"json", "csv"}) {
        const auto a = tmp.path / (std::string("a.") + fmt), b = tmp.path / (std::string("b.") + fmt);
        o.require(run_cli("--all --backend structural --format " + std::string(fmt) + " " + manifest, a) == 0,
                  std::string(fmt) + " run 1 failed");
        o.require(run_cli("--all --backend structural --format " + std::string(fmt) + " " + manifest, b) == 0,
                  std::string(fmt) + " run 2 failed");
        const auto ta = testkit::read_file(a), tb = testkit::read_file(b);
        o.require(!ta.empty() && ta == tb, std::string(fmt) + " reports differ");
    }
    if (o.pass) o.detail = "two --all runs on samples/ give byte-identical JSON and CSV";
    return o;
}

// ---- 10 ------------------------------------------------------------------

std::string method(int seed, int tweak) {
    std::string s = "    public int M" + std::to_string(seed) + "(int a, int b)\n    {\n";
    for (int i = 0; i < 12; ++i) s += "        a = a + b * " + std::to_string(seed * 1000 + i + (i == 5 ? tweak : 0)) + ";\n";
    return s + "        return a;\n    }\n";
}

Outcome reproducibility_note_and_fixtures() {
    Outcome o;
    const auto readme = testkit::read_file(CLONESCOPE_README);
    o.require(readme.find("not desk-reproducible") != std::string::npos && readme.find("345") != std::string::npos &&
                  readme.find("GPT-4o") != std::string::npos,
              "README lacks the non-reproducibility note");

    // Per-category fixture: 5 scenes whose pair scores sum to 0.5, 2 identical materials.
    std::vector<AssetDocument> docs;
    for (int i = 0; i < 5; ++i) docs.push_back({"s" + std::to_string(i) + ".unity", FileCategory::Scene, {}, 0, {}});
    docs.push_back({"m0.mat", FileCategory::Material, {}, 0, {}});
    docs.push_back({"m1.mat", FileCategory::Material, {}, 0, {}});
    std::vector<SimilarityRecord> recs = {{"m0.mat", "m1.mat", 1.0, BackendKind::Structural, false},
                                          {"s0.unity", "s1.unity", 0.3, BackendKind::Structural, false},
                                          {"s2.unity", "s4.unity", 0.2, BackendKind::Structural, false}};
    auto b = per_category_clone_index(docs, recs);
    const double scene = b.per_category.at(FileCategory::Scene).ci;
    const double material = b.per_category.at(FileCategory::Material).ci;
    o.require(std::fabs(scene - 0.1) <= kCiTolerance, "scene CI " + std::to_string(scene));
    o.require(std::fabs(material - 0.5) <= kCiTolerance, "material CI " + std::to_string(material));

    // Version fixture: N functions, one edited in the second version -> N-1 exact twins.
    constexpr int n = 8;
    std::string v1 = "public class K\n{\n", v2 = v1;
    for (int i = 1; i <= n; ++i) {
        v1 += method(i, 0);
        v2 += method(i, i == 3 ? 500 : 0);
    }
    v1 += "}\n";
    v2 += "}\n";
    ProjectSnapshot a, c;
    a.project_id = c.project_id = "fixture";
    a.version_label = "v1";
    c.version_label = "v2";
    a.source_units = {{"Assets/K.cs", Language::CSharp, v1}};
    c.source_units = {{"Assets/K.cs", Language::CSharp, v2}};
    auto r = inter_version_clones(a, c, DetectionConfig::for_type(CloneType::T1));
    o.require(r.cross_exact_pairs == n - 1 && r.fragments_with_cross_twin == n - 1,
              "cross-version exact twins " + std::to_string(r.cross_exact_pairs));
    if (o.pass) {
        o.detail = "README note present; scene CI 0.1, material CI 0.5; " + std::to_string(r.cross_exact_pairs) +
                   " exact twins for " + std::to_string(n) + " functions with one edit";
    }
    return o;
}

} // namespace

int main() {
    const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria = {
        {"metric arithmetic fixtures", metric_fixtures},
        {"subsumption suite", subsumption},
        {"planted-clone recall/precision", planted_recall_precision},
        {"similarity oracle equivalence", lcs_oracle},
        {"clique/component clustering", clustering_oracles},
        {"asset similarity axioms and CI", asset_axioms},
        {"asset threshold boundary", threshold_boundary},
        {"LLM backend contract", llm_contract},
        {"end-to-end determinism", determinism},
        {"reproducibility note and fixtures", reproducibility_note_and_fixtures},
    };
    int failed = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        Outcome o;
        try {
            o = criteria[i].second();
        } catch (const std::exception& e) {
            o.pass = false;
            o.detail = std::string("exception: ") + e.what();
        }
        std::cout << (o.pass ? "PASS" : "FAIL") << " criterion " << (i + 1) << " (" << criteria[i].first
                  << "): " << o.detail << std::endl;
        failed += o.pass ? 0 : 1;
    }
    std::cout << (criteria.size() - static_cast<std::size_t>(failed)) << "/" << criteria.size() << " criteria passed"
              << std::endl;
    return failed == 0 ? 0 : 1;
}
