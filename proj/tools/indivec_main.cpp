// indivec command-line entry point: forge, predict, evaluate, ablate,
// sweep, stats, export. Exit codes: 0 success, 1 runtime failure, 2 usage
// error.

#include <chrono>
#include <cstdint>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "indivec/indivec.hpp"

using nlohmann::json;
using namespace indivec;

namespace {

struct RunConfig {
    std::string provider_kind = "mock";  // mock | http
    ProviderConfig provider;
    std::string fixtures_path;
    uint64_t seed = 0;
    size_t m = 10;
    std::string space = "binary";
    int threshold = 6;
    size_t max_descriptors = 8;
    bool desc_ex = true;
    bool verification = true;
    bool direct = false;
    bool fallback_direct = false;
    size_t workers = 1;
};

// Config file layer; precedence is CLI flag > config file > environment >
// default (the API key environment fallback lives in HttpProvider).
void apply_config_file(RunConfig& cfg, const std::string& path) {
    std::ifstream in(path);
    if (!in) raise(ErrorCode::IoError, "cannot open config file " + path);
    json doc;
    try {
        in >> doc;
    } catch (const json::exception& e) {
        raise(ErrorCode::FormatError, "config file " + path + ": " + e.what());
    }
    if (doc.contains("provider")) cfg.provider_kind = doc["provider"].get<std::string>();
    if (doc.contains("base_url")) cfg.provider.base_url = doc["base_url"].get<std::string>();
    if (doc.contains("api_key")) cfg.provider.api_key = doc["api_key"].get<std::string>();
    if (doc.contains("completion_model"))
        cfg.provider.completion_model = doc["completion_model"].get<std::string>();
    if (doc.contains("embedding_model"))
        cfg.provider.embedding_model = doc["embedding_model"].get<std::string>();
    if (doc.contains("dim")) cfg.provider.embedding_dim = doc["dim"].get<size_t>();
    if (doc.contains("max_retries")) cfg.provider.max_retries = doc["max_retries"].get<int>();
    if (doc.contains("timeout_ms"))
        cfg.provider.timeout = std::chrono::milliseconds(doc["timeout_ms"].get<int64_t>());
    if (doc.contains("max_parallel_requests"))
        cfg.provider.max_parallel_requests = doc["max_parallel_requests"].get<int>();
    if (doc.contains("temperature")) cfg.provider.temperature = doc["temperature"].get<double>();
    if (doc.contains("fixtures")) cfg.fixtures_path = doc["fixtures"].get<std::string>();
    if (doc.contains("seed")) cfg.seed = doc["seed"].get<uint64_t>();
    if (doc.contains("m")) cfg.m = doc["m"].get<size_t>();
    if (doc.contains("space")) cfg.space = doc["space"].get<std::string>();
    if (doc.contains("threshold")) cfg.threshold = doc["threshold"].get<int>();
    if (doc.contains("max_descriptors")) cfg.max_descriptors = doc["max_descriptors"].get<size_t>();
    if (doc.contains("desc_ex")) cfg.desc_ex = doc["desc_ex"].get<bool>();
    if (doc.contains("verification")) cfg.verification = doc["verification"].get<bool>();
    if (doc.contains("workers")) cfg.workers = doc["workers"].get<size_t>();
}

json config_as_json(const RunConfig& cfg) {
    return json{
        {"provider", cfg.provider_kind},
        {"base_url", cfg.provider.base_url},
        {"completion_model", cfg.provider.completion_model},
        {"embedding_model", cfg.provider.embedding_model},
        {"dim", cfg.provider.embedding_dim},
        {"max_retries", cfg.provider.max_retries},
        {"timeout_ms", cfg.provider.timeout.count()},
        {"max_parallel_requests", cfg.provider.max_parallel_requests},
        {"temperature", cfg.provider.temperature},
        {"fixtures", cfg.fixtures_path},
        {"seed", cfg.seed},
        {"m", cfg.m},
        {"space", cfg.space},
        {"threshold", cfg.threshold},
        {"max_descriptors", cfg.max_descriptors},
        {"desc_ex", cfg.desc_ex},
        {"verification", cfg.verification},
        {"direct", cfg.direct},
        {"fallback_direct", cfg.fallback_direct},
        {"workers", cfg.workers},
        // api_key intentionally absent
    };
}

std::string utc_timestamp() {
    const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    char buf[32];
    std::tm tm_utc{};
    gmtime_r(&now, &tm_utc);
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm_utc);
    return buf;
}

void write_manifest(const std::string& path, const std::string& command, const RunConfig& cfg,
                    json extra = json::object()) {
    json manifest = {
        {"command", command},
        {"timestamp_utc", utc_timestamp()},
        {"config", config_as_json(cfg)},
    };
    manifest.update(extra);
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) raise(ErrorCode::IoError, "cannot write manifest " + path);
    out << manifest.dump(2) << '\n';
}

std::unique_ptr<Provider> make_provider(const RunConfig& cfg) {
    if (cfg.provider_kind == "mock") {
        FixtureMap fixtures;
        if (!cfg.fixtures_path.empty()) fixtures = load_fixture_file(cfg.fixtures_path);
        return std::make_unique<MockProvider>(cfg.seed, std::move(fixtures),
                                              cfg.provider.embedding_dim,
                                              cfg.provider.max_parallel_requests);
    }
    return std::make_unique<HttpProvider>(cfg.provider);
}

ForgeOptions forge_options(const RunConfig& cfg) {
    ForgeOptions options;
    options.confidence_threshold = cfg.threshold;
    options.use_desc_ex = cfg.desc_ex;
    options.use_verification = cfg.verification;
    options.parallel_docs = cfg.workers;
    return options;
}

PredictOptions predict_options(const RunConfig& cfg) {
    PredictOptions options;
    options.m = cfg.m;
    options.space = space_from_string(cfg.space);
    options.mode = cfg.direct ? PredictionMode::Direct : PredictionMode::Descriptor;
    options.max_descriptors = cfg.max_descriptors;
    options.fallback_to_direct = cfg.fallback_direct;
    options.use_desc_ex = cfg.desc_ex;
    return options;
}

void write_text(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) raise(ErrorCode::IoError, "cannot write " + path);
    out << text;
}

struct ForgeArgs {
    std::string corpus_path;
    std::string out_base;
    std::string checkpoint;
    bool fresh = false;
};

struct PredictArgs {
    std::string store_base;
    std::string input_path;
    std::string text;
    std::string out_path;
    bool explain = false;
    size_t explain_k = 1;
    std::string explain_out;
};

struct EvaluateArgs {
    std::string pred_path;
    std::string gold_path;
    std::string dataset_spec_path;
    std::string out_path;
};

struct AblateArgs {
    std::string corpus_path;
    std::string test_path;
    std::string out_path;
    bool all_combinations = false;
};

struct SweepArgs {
    std::string store_base;
    std::string test_path;
    std::vector<size_t> sizes;
    std::string out_path;
};

struct StatsArgs {
    std::string store_base;
    std::string indicators_path;
    std::string out_path;
};

struct ExportArgs {
    std::string store_base;
    std::string out_path;
};

int run_forge(const RunConfig& cfg, const ForgeArgs& args) {
    const auto corpus = load_corpus(args.corpus_path);
    auto provider = make_provider(cfg);

    ForgeOptions options = forge_options(cfg);
    options.checkpoint_path =
        args.checkpoint.empty() ? args.out_base + ".checkpoint.jsonl" : args.checkpoint;
    if (args.fresh) std::filesystem::remove(options.checkpoint_path);
    if (const auto parent = std::filesystem::path(args.out_base).parent_path(); !parent.empty()) {
        std::error_code ec;
        std::filesystem::create_directories(parent, ec);
    }

    const auto result = forge_database(corpus, *provider, options);
    const auto store = build_store(result.indicators, *provider, cfg.workers);
    store.save(args.out_base);

    const std::string report = forge_report_to_json(result.report, true);
    std::cout << report << "\n";
    write_text(args.out_base + ".report.json", report + "\n");
    write_manifest(args.out_base + ".manifest.json", "forge", cfg,
                   {{"corpus", args.corpus_path},
                    {"out", args.out_base},
                    {"checkpoint", options.checkpoint_path},
                    {"forge_report", json::parse(report)}});
    return 0;
}

int run_predict(const RunConfig& cfg, const PredictArgs& args) {
    if (args.input_path.empty() == args.text.empty()) {
        raise(ErrorCode::InvalidArgument, "pass exactly one of --input or --text");
    }
    const auto store = VectorStore::load(args.store_base);
    auto provider = make_provider(cfg);

    std::vector<QueryInput> queries;
    if (!args.text.empty()) {
        queries.push_back(QueryInput{"q0", args.text, TextLevel::Sentence, ""});
    } else {
        queries = load_queries(args.input_path);
    }

    const auto predictions =
        predict_batch(queries, store, *provider, predict_options(cfg), cfg.workers);

    std::string lines;
    size_t descriptor_total = 0;
    for (const Prediction& p : predictions) {
        lines += prediction_to_jsonl(p) + "\n";
        descriptor_total += p.per_descriptor.size();
    }
    if (args.out_path.empty()) {
        std::cout << lines;
    } else {
        write_text(args.out_path, lines);
    }

    if (args.explain || !args.explain_out.empty()) {
        std::string rendered;
        for (const Prediction& p : predictions) rendered += explain(p, args.explain_k) + "\n";
        if (args.explain_out.empty()) {
            std::cerr << rendered;
        } else {
            write_text(args.explain_out, rendered);
        }
    }

    if (!args.out_path.empty()) {
        const double mean_descriptors =
            predictions.empty()
                ? 0.0
                : static_cast<double>(descriptor_total) / static_cast<double>(predictions.size());
        write_manifest(args.out_path + ".manifest.json", "predict", cfg,
                       {{"store", args.store_base},
                        {"queries", predictions.size()},
                        {"mean_descriptors", mean_descriptors}});
    }
    return 0;
}

int run_evaluate(const RunConfig& cfg, const EvaluateArgs& args) {
    if (args.gold_path.empty() == args.dataset_spec_path.empty()) {
        raise(ErrorCode::InvalidArgument, "pass exactly one of --gold or --dataset");
    }
    const auto preds = load_labeled_ids(args.pred_path);
    std::vector<LabeledId> golds;
    if (!args.gold_path.empty()) {
        golds = load_labeled_ids(args.gold_path);
    } else {
        std::ifstream in(args.dataset_spec_path);
        if (!in) raise(ErrorCode::IoError, "cannot open " + args.dataset_spec_path);
        std::stringstream buffer;
        buffer << in.rdbuf();
        const auto spec = dataset_spec_from_json(buffer.str());
        golds = gold_labels(load_dataset(spec));
    }

    const auto report = evaluate(preds, golds, space_from_string(cfg.space));
    const std::string rendered = eval_report_to_json(report, true);
    std::cout << rendered << "\n";
    if (!args.out_path.empty()) {
        write_text(args.out_path, rendered + "\n");
        write_manifest(
            args.out_path + ".manifest.json", "evaluate", cfg,
            {{"pred", args.pred_path},
             {"gold", args.gold_path.empty() ? args.dataset_spec_path : args.gold_path}});
    }
    return 0;
}

json outcome_to_json(const AblationOutcome& outcome) {
    return json{
        {"flags",
         {{"desc_ex", outcome.flags.desc_ex},
          {"verification", outcome.flags.verification},
          {"descriptor_mapping", outcome.flags.descriptor_mapping}}},
        {"forge_report", json::parse(forge_report_to_json(outcome.forge))},
        {"eval", json::parse(eval_report_to_json(outcome.eval))},
    };
}

int run_ablate(const RunConfig& cfg, const AblateArgs& args) {
    const auto corpus = load_corpus(args.corpus_path);
    const auto testset = load_queries(args.test_path);
    auto provider = make_provider(cfg);

    std::vector<AblationFlags> configs;
    if (args.all_combinations) {
        for (int mask = 7; mask >= 0; --mask) {
            configs.push_back(AblationFlags{(mask & 4) != 0, (mask & 2) != 0, (mask & 1) != 0});
        }
    } else {
        // Cumulative removals plus the verification-only branch.
        configs = {
            {true, true, true},    {false, true, true}, {false, false, true},
            {false, false, false}, {true, false, true}, {true, false, false},
        };
    }

    PipelineConfig pipeline;
    pipeline.forge = forge_options(cfg);
    pipeline.predict = predict_options(cfg);
    pipeline.workers = cfg.workers;

    const auto outcomes = run_ablation(configs, corpus, testset, *provider, pipeline);
    json rows = json::array();
    for (const auto& outcome : outcomes) rows.push_back(outcome_to_json(outcome));
    const std::string rendered = rows.dump(2);
    std::cout << rendered << "\n";
    if (!args.out_path.empty()) {
        write_text(args.out_path, rendered + "\n");
        write_manifest(args.out_path + ".manifest.json", "ablate", cfg,
                       {{"corpus", args.corpus_path},
                        {"test", args.test_path},
                        {"configurations", configs.size()}});
    }
    return 0;
}

int run_sweep(const RunConfig& cfg, const SweepArgs& args) {
    const auto store = VectorStore::load(args.store_base);
    const auto testset = load_queries(args.test_path);
    auto provider = make_provider(cfg);

    const auto points = db_size_sweep(store, args.sizes, cfg.seed, testset, *provider,
                                      predict_options(cfg), cfg.workers);

    std::string csv = "size,n,biased_precision,biased_recall,biased_f1,micro_f1,macro_f1\n";
    char buf[192];
    for (const SweepPoint& point : points) {
        std::snprintf(buf, sizeof buf, "%zu,%zu,%.10g,%.10g,%.10g,%.10g,%.10g\n", point.size,
                      point.eval.n, point.eval.biased_precision, point.eval.biased_recall,
                      point.eval.biased_f1, point.eval.micro_f1, point.eval.macro_f1);
        csv += buf;
    }
    if (args.out_path.empty()) {
        std::cout << csv;
    } else {
        write_text(args.out_path, csv);
        write_manifest(
            args.out_path + ".manifest.json", "sweep", cfg,
            {{"store", args.store_base}, {"test", args.test_path}, {"sizes", args.sizes}});
    }
    return 0;
}

int run_stats(const RunConfig& cfg, const StatsArgs& args) {
    if (args.store_base.empty() == args.indicators_path.empty()) {
        raise(ErrorCode::InvalidArgument, "pass exactly one of --store or --indicators");
    }
    std::vector<Indicator> indicators;
    if (!args.store_base.empty()) {
        const auto store = VectorStore::load(args.store_base);
        indicators.assign(store.metadata().begin(), store.metadata().end());
    } else {
        std::ifstream in(args.indicators_path);
        if (!in) raise(ErrorCode::IoError, "cannot open " + args.indicators_path);
        std::string line;
        while (std::getline(in, line)) {
            if (!line.empty()) indicators.push_back(indicator_from_jsonl(line));
        }
    }
    const std::string rendered = stats_report_to_json(indicator_stats(indicators), true);
    std::cout << rendered << "\n";
    if (!args.out_path.empty()) {
        write_text(args.out_path, rendered + "\n");
        write_manifest(args.out_path + ".manifest.json", "stats", cfg, json::object());
    }
    return 0;
}

int run_export(const RunConfig& cfg, const ExportArgs& args) {
    const auto store = VectorStore::load(args.store_base);
    export_embeddings(store, args.out_path);
    write_manifest(args.out_path + ".manifest.json", "export", cfg,
                   {{"store", args.store_base}, {"rows", store.size()}});
    return 0;
}

std::string find_config_path(int argc, char** argv) {
    for (int i = 1; i < argc; ++i) {
        const std::string_view arg = argv[i];
        if (arg == "--config" && i + 1 < argc) return argv[i + 1];
        if (arg.rfind("--config=", 0) == 0) return std::string(arg.substr(9));
    }
    return {};
}

}  // namespace

int main(int argc, char** argv) {
    RunConfig cfg;
    try {
        const std::string config_path = find_config_path(argc, argv);
        if (!config_path.empty()) apply_config_file(cfg, config_path);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }

    CLI::App app{
        "indivec: bias-indicator database construction and retrieval-based bias prediction"};
    app.require_subcommand(1);
    app.fallthrough();

    std::string config_dummy;
    app.add_option("--config", config_dummy, "JSON config file (flags take precedence)");
    app.add_option("--seed", cfg.seed, "seed for the mock embedder and all subsampling");
    app.add_option("--provider", cfg.provider_kind, "LLM provider backend")
        ->check(CLI::IsMember({"mock", "http"}));
    app.add_option("--base-url", cfg.provider.base_url, "HTTP provider base URL");
    app.add_option("--dim", cfg.provider.embedding_dim, "embedding dimension");
    app.add_option("--fixtures", cfg.fixtures_path, "mock fixture file (JSON marker->response)");
    app.add_option("--completion-model", cfg.provider.completion_model, "completion model name");
    app.add_option("--embedding-model", cfg.provider.embedding_model, "embedding model name");
    app.add_option("--max-retries", cfg.provider.max_retries, "transient-failure retry budget");
    app.add_option("--max-parallel", cfg.provider.max_parallel_requests, "in-flight request cap");
    app.add_option("--workers", cfg.workers, "worker threads for documents/queries");
    app.add_option("--space", cfg.space, "label space")->check(CLI::IsMember({"binary", "3way"}));
    app.add_option("--m", cfg.m, "retrieved indicators per descriptor");
    app.add_option("--threshold", cfg.threshold, "verification confidence threshold (1..10)")
        ->check(CLI::Range(1, 10));
    app.add_option("--max-descriptors", cfg.max_descriptors, "descriptor cap per query");
    app.add_flag("!--no-desc-ex", cfg.desc_ex, "drop category demonstrations from prompts");

    ForgeArgs forge_args;
    auto* cmd_forge = app.add_subcommand("forge", "generate, verify and index bias indicators");
    cmd_forge->add_option("--corpus", forge_args.corpus_path, "labeled corpus JSONL")->required();
    cmd_forge->add_option("--out", forge_args.out_base, "output store base path")->required();
    cmd_forge->add_option("--checkpoint", forge_args.checkpoint,
                          "checkpoint path (default <out>.checkpoint.jsonl)");
    cmd_forge->add_flag("--fresh", forge_args.fresh, "discard any existing checkpoint");
    cmd_forge->add_flag("!--no-verify", cfg.verification, "skip backward verification");

    PredictArgs predict_args;
    auto* cmd_predict = app.add_subcommand("predict", "classify queries against a store");
    cmd_predict->add_option("--store", predict_args.store_base, "store base path")->required();
    cmd_predict->add_option("--input", predict_args.input_path, "query JSONL file");
    cmd_predict->add_option("--text", predict_args.text, "single query text");
    cmd_predict->add_option("--out", predict_args.out_path, "prediction JSONL output");
    cmd_predict->add_flag("--direct", cfg.direct, "embed the raw text (descriptor-mapping off)");
    cmd_predict->add_flag("--fallback-direct", cfg.fallback_direct,
                          "fall back to direct mode when no descriptors parse");
    cmd_predict->add_flag("--explain", predict_args.explain, "render matched indicators to stderr");
    cmd_predict->add_option("--explain-k", predict_args.explain_k, "matches shown per descriptor");
    cmd_predict->add_option("--explain-out", predict_args.explain_out,
                            "write the rendering to a file");

    EvaluateArgs evaluate_args;
    auto* cmd_evaluate = app.add_subcommand("evaluate", "score predictions against references");
    cmd_evaluate->add_option("--pred", evaluate_args.pred_path, "prediction JSONL")->required();
    cmd_evaluate->add_option("--gold", evaluate_args.gold_path, "reference JSONL (id,label)");
    cmd_evaluate->add_option("--dataset", evaluate_args.dataset_spec_path,
                             "dataset spec JSON for references");
    cmd_evaluate->add_option("--out", evaluate_args.out_path, "report JSON output");

    AblateArgs ablate_args;
    auto* cmd_ablate = app.add_subcommand("ablate", "run the ablation ladder");
    cmd_ablate->add_option("--corpus", ablate_args.corpus_path, "labeled corpus JSONL")->required();
    cmd_ablate->add_option("--test", ablate_args.test_path, "query JSONL with gold labels")
        ->required();
    cmd_ablate->add_option("--out", ablate_args.out_path, "outcome JSON output");
    cmd_ablate->add_flag("--all", ablate_args.all_combinations, "all 8 flag combinations");

    SweepArgs sweep_args;
    auto* cmd_sweep = app.add_subcommand("sweep", "evaluate across database sizes");
    cmd_sweep->add_option("--store", sweep_args.store_base, "store base path")->required();
    cmd_sweep->add_option("--test", sweep_args.test_path, "query JSONL with gold labels")
        ->required();
    cmd_sweep->add_option("--sizes", sweep_args.sizes, "subset sizes")->required()->delimiter(',');
    cmd_sweep->add_option("--out", sweep_args.out_path, "CSV output");

    StatsArgs stats_args;
    auto* cmd_stats = app.add_subcommand("stats", "indicator-set statistics");
    cmd_stats->add_option("--store", stats_args.store_base, "store base path");
    cmd_stats->add_option("--indicators", stats_args.indicators_path, "indicator JSONL");
    cmd_stats->add_option("--out", stats_args.out_path, "stats JSON output");

    ExportArgs export_args;
    auto* cmd_export = app.add_subcommand("export", "export stored embeddings as CSV");
    cmd_export->add_option("--store", export_args.store_base, "store base path")->required();
    cmd_export->add_option("--out", export_args.out_path, "CSV output path")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (app.got_subcommand(cmd_forge)) return run_forge(cfg, forge_args);
        if (app.got_subcommand(cmd_predict)) return run_predict(cfg, predict_args);
        if (app.got_subcommand(cmd_evaluate)) return run_evaluate(cfg, evaluate_args);
        if (app.got_subcommand(cmd_ablate)) return run_ablate(cfg, ablate_args);
        if (app.got_subcommand(cmd_sweep)) return run_sweep(cfg, sweep_args);
        if (app.got_subcommand(cmd_stats)) return run_stats(cfg, stats_args);
        if (app.got_subcommand(cmd_export)) return run_export(cfg, export_args);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
