#include "clonescope/llm_http.hpp"
#include "clonescope/pipeline.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>

namespace cs = clonescope;

namespace {

struct Options {
    std::string root;
    std::string manifest;
    std::string config_file;
    std::string types;
    std::optional<double> dissimilarity;
    std::optional<double> clone_threshold;
    std::string clustering;
    std::string backend;
    std::string out;
    std::string format;
    std::string registry;
    std::string step2_out;
};

std::vector<cs::ManifestEntry> resolve_targets(const Options& o) {
    if (!o.manifest.empty()) return cs::load_corpus_manifest(o.manifest);
    if (o.root.empty()) throw cs::Error(cs::ErrorKind::InvalidArgument, "give a project root or --manifest");
    return {{"", o.root, std::nullopt}};
}

cs::RunConfig build_config(const Options& o) {
    cs::RunConfig c;
    if (!o.config_file.empty()) cs::load_config_file(c, o.config_file);
    if (!o.types.empty()) cs::apply_setting(c, "types", o.types);
    if (o.dissimilarity) c.dissimilarity_threshold = *o.dissimilarity;
    if (o.clone_threshold) c.backend.clone_threshold = *o.clone_threshold;
    if (!o.clustering.empty()) cs::apply_setting(c, "clustering", o.clustering);
    if (!o.backend.empty()) cs::apply_setting(c, "backend", o.backend);
    if (!o.out.empty()) c.output_path = o.out;
    if (!o.format.empty()) cs::apply_setting(c, "format", o.format);
    if (!o.registry.empty()) c.registry_path = o.registry;
    cs::load_backend_env(c);
    return c;
}

void write_output(const cs::RunConfig& c, const std::string& text) {
    if (!c.output_path) {
        std::cout << text;
        return;
    }
    std::ofstream out(*c.output_path, std::ios::binary | std::ios::trunc);
    if (!out || !(out << text)) throw cs::Error(cs::ErrorKind::Io, "cannot write " + c.output_path->string());
}

int run_pipeline(cs::RunConfig c, const Options& o) {
    auto targets = resolve_targets(o);
    cs::TransportFactory factory = [](const cs::BackendConfig& b) -> std::unique_ptr<cs::LlmTransport> {
        return std::make_unique<cs::HttpChatTransport>(b);
    };
    auto res = cs::run(c, targets, factory);
    write_output(c, cs::render_report(res.report, c.output_format));
    for (const auto& f : res.report.failures) {
        std::cerr << "clonescope: " << f.project_id << (f.version_label.empty() ? "" : "@" + f.version_label)
                  << ": " << f.kind << ": " << f.message << "\n";
    }
    return res.exit_code;
}

int run_scan(const Options& o) {
    nlohmann::json out = nlohmann::json::array();
    for (const auto& t : resolve_targets(o)) {
        auto snap = cs::scan_project(t.root_path, {}, t.project_id);
        nlohmann::json excluded = nlohmann::json::array();
        for (const auto& e : snap.excluded) excluded.push_back({{"path", e.rel_path}, {"reason", e.reason}});
        nlohmann::json sources = nlohmann::json::array();
        for (const auto& u : snap.source_units) sources.push_back({{"path", u.rel_path}, {"language", to_string(u.language)}});
        nlohmann::json assets = nlohmann::json::array();
        for (const auto& u : snap.asset_units) assets.push_back({{"path", u.rel_path}, {"category", to_string(u.category)}});
        out.push_back({{"project_id", snap.project_id}, {"version", t.version_label.value_or("")},
                       {"files_scanned", snap.files_scanned()}, {"source_units", sources}, {"asset_units", assets},
                       {"excluded", excluded}, {"warnings", snap.warnings}});
    }
    std::cout << out.dump(2) << "\n";
    return 0;
}

int run_step2(cs::RunConfig c, const Options& o) {
    // Score one project's assets, then write the aggregation prompts with the Step-1 results attached.
    auto targets = resolve_targets(o);
    if (targets.size() != 1) throw cs::Error(cs::ErrorKind::InvalidArgument, "--step2-prompt needs a single project");
    auto snap = cs::scan_project(targets[0].root_path, {}, targets[0].project_id);
    auto parsed = cs::parse_assets(snap.asset_units);
    std::unique_ptr<cs::LlmTransport> transport;
    std::unique_ptr<cs::PairScorer> scorer;
    if (c.backend.kind == cs::BackendKind::LLM) {
        c.backend.validate();
        transport = std::make_unique<cs::HttpChatTransport>(c.backend);
        scorer = std::make_unique<cs::LlmScorer>(c.backend, *transport);
    } else {
        scorer = std::make_unique<cs::StructuralScorer>();
    }
    auto det = cs::detect_clone_files(parsed, c.backend, *scorer);
    std::ofstream out(o.step2_out);
    if (!out) throw cs::Error(cs::ErrorKind::Io, "cannot write " + o.step2_out);
    out << cs::emit_step2_prompt(det.records);
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Function-level and serialized-asset clone analysis for VR projects"};
    app.require_subcommand(0, 1);
    Options o;
    bool all = false;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("root", o.root, "Project root directory");
        sub->add_option("--manifest", o.manifest, "Corpus manifest: project_id root [version] per line");
        sub->add_option("--config", o.config_file, "key = value configuration file");
        sub->add_option("--out", o.out, "Output file (stdout when omitted)");
        sub->add_option("--format", o.format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
    };
    auto add_source = [&](CLI::App* sub) {
        sub->add_option("--types", o.types, "Comma list, e.g. t1,t2c,t3-2 or all");
        sub->add_option("--dissimilarity", o.dissimilarity, "Near-miss dissimilarity threshold")
            ->check(CLI::Range(0.0, 1.0));
        sub->add_option("--clustering", o.clustering, "components or cliques")
            ->check(CLI::IsMember({"components", "cliques"}));
    };
    auto add_assets = [&](CLI::App* sub) {
        sub->add_option("--clone-threshold", o.clone_threshold, "Asset clone threshold")->check(CLI::Range(0.0, 1.0));
        sub->add_option("--backend", o.backend, "structural or llm")->check(CLI::IsMember({"structural", "llm"}));
        if (!sub->get_option_no_throw("--clustering")) {
            sub->add_option("--clustering", o.clustering, "components or cliques")
                ->check(CLI::IsMember({"components", "cliques"}));
        }
    };

    // Top level doubles as `--all` entry point.
    add_common(&app);
    add_source(&app);
    app.add_option("--clone-threshold", o.clone_threshold, "Asset clone threshold")->check(CLI::Range(0.0, 1.0));
    app.add_option("--backend", o.backend, "structural or llm")->check(CLI::IsMember({"structural", "llm"}));
    app.add_option("--registry", o.registry, "Library registry file");
    app.add_flag("--all", all, "Run the full pipeline: all types, assets, categories, libraries, version diffs");

    auto* scan = app.add_subcommand("scan", "Classify the files of a project");
    scan->add_option("root", o.root, "Project root directory");
    scan->add_option("--manifest", o.manifest, "Corpus manifest");

    auto* dsrc = app.add_subcommand("detect-source", "Function-level clone metrics");
    add_common(dsrc);
    add_source(dsrc);

    auto* dast = app.add_subcommand("detect-assets", "Serialized asset clone metrics");
    add_common(dast);
    add_assets(dast);
    dast->add_option("--step2-prompt", o.step2_out, "Also write the Step-2 aggregation prompt to this file");

    auto* met = app.add_subcommand("metrics", "Source and asset metrics");
    add_common(met);
    add_source(met);
    add_assets(met);

    auto* diff = app.add_subcommand("diff-versions", "Clones across adjacent versions listed in a manifest");
    add_common(diff);
    add_source(diff);

    auto* libs = app.add_subcommand("attribute-libs", "Attribute source clones to third-party libraries");
    add_common(libs);
    add_source(libs);
    libs->add_option("--registry", o.registry, "Library registry file (name key_file prefix)");

    auto* rep = app.add_subcommand("report", "Full pipeline report");
    add_common(rep);
    add_source(rep);
    add_assets(rep);
    rep->add_option("--registry", o.registry, "Library registry file");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 1;
    }

    try {
        if (*scan) return run_scan(o);
        auto c = build_config(o);
        auto full = [&] {
            c.source = c.assets = c.categories = c.libraries = true;
            c.version_diffs = !o.manifest.empty();
        };
        if (*dsrc) {
            c.assets = false;
        } else if (*dast) {
            c.source = false;
            if (!o.step2_out.empty()) {
                c.validate();
                run_step2(c, o);
            }
        } else if (*met) {
            c.source = c.assets = true;
        } else if (*diff) {
            if (o.manifest.empty()) throw cs::Error(cs::ErrorKind::InvalidArgument, "diff-versions needs --manifest");
            c.assets = false;
            c.version_diffs = true;
        } else if (*libs) {
            c.assets = false;
            c.libraries = true;
        } else if (*rep || all) {
            full();
        } else {
            std::cerr << app.help();
            return 1;
        }
        return run_pipeline(c, o);
    } catch (const cs::Error& e) {
        std::cerr << "clonescope: " << to_string(e.kind()) << ": " << e.what() << "\n";
        const bool usage = e.kind() == cs::ErrorKind::InvalidArgument || e.kind() == cs::ErrorKind::Parse;
        return usage ? 1 : 2;
    } catch (const std::exception& e) {
        std::cerr << "clonescope: " << e.what() << "\n";
        return 2;
    }
}
