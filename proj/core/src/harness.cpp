#include "indivec/harness.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <sstream>

#include "json.hpp"

#include "indivec/error.hpp"
#include "hashing.hpp"
#include "parallel.hpp"

namespace indivec {

using nlohmann::json;

StatsReport indicator_stats(std::span<const Indicator> indicators) {
    StatsReport report;
    report.total = indicators.size();
    size_t token_sum = 0;
    for (const Indicator& ind : indicators) {
        report.counts[std::string(to_string(ind.category))][std::string(to_string(ind.leaning))] += 1;
        std::istringstream tokens(ind.text);
        std::string tok;
        while (tokens >> tok) ++token_sum;
        if (ind.confidence >= 1 && ind.confidence <= 10) {
            report.confidence_histogram[static_cast<size_t>(ind.confidence - 1)] += 1;
        }
    }
    report.mean_token_length =
        indicators.empty() ? 0.0 : static_cast<double>(token_sum) / static_cast<double>(indicators.size());
    return report;
}

std::string stats_report_to_json(const StatsReport& report, bool pretty) {
    json histogram = json::object();
    for (size_t i = 0; i < report.confidence_histogram.size(); ++i) {
        histogram[std::to_string(i + 1)] = report.confidence_histogram[i];
    }
    const json j = {
        {"total", report.total},
        {"mean_token_length", report.mean_token_length},
        {"counts", report.counts},
        {"confidence_histogram", std::move(histogram)},
    };
    return pretty ? j.dump(2) : j.dump();
}

void export_embeddings(const VectorStore& store, const std::string& csv_path) {
    if (store.empty()) raise(ErrorCode::InvalidArgument, "cannot export an empty store");
    std::ofstream out(csv_path, std::ios::binary | std::ios::trunc);
    if (!out) raise(ErrorCode::IoError, "cannot write " + csv_path);

    out << "id,leaning,category";
    for (size_t d = 0; d < store.dim(); ++d) out << ",v" << d;
    out << '\n';

    char buf[32];
    for (size_t i = 0; i < store.size(); ++i) {
        const Indicator& meta = store.meta_at(i);
        out << meta.id << ',' << to_string(meta.leaning) << ",\"" << to_string(meta.category) << '"';
        for (float v : store.row(i)) {
            // 9 significant digits round-trip float32 exactly.
            std::snprintf(buf, sizeof buf, "%.9g", static_cast<double>(v));
            out << ',' << buf;
        }
        out << '\n';
    }
    out.close();
    if (!out) raise(ErrorCode::IoError, "write failed for " + csv_path);
}

VectorStore build_store(std::span<const Indicator> indicators, Provider& provider,
                        size_t workers) {
    std::vector<Embedding> vectors(indicators.size());
    detail::parallel_for(indicators.size(), workers,
                         [&](size_t i) { vectors[i] = provider.embed_text(indicators[i].text); });
    VectorStore store(provider.embedding_dim());
    for (size_t i = 0; i < indicators.size(); ++i) store.insert(indicators[i], vectors[i]);
    return store;
}

std::vector<LabeledId> gold_labels(std::span<const QueryInput> testset) {
    std::vector<LabeledId> out;
    out.reserve(testset.size());
    for (const QueryInput& q : testset) {
        if (q.gold.empty()) {
            raise(ErrorCode::InvalidArgument, "query \"" + q.id + "\" has no gold label");
        }
        out.emplace_back(q.id, q.gold);
    }
    return out;
}

namespace {

std::vector<LabeledId> predicted_labels(std::span<const Prediction> predictions) {
    std::vector<LabeledId> out;
    out.reserve(predictions.size());
    for (const Prediction& p : predictions) out.emplace_back(p.query_id, p.label);
    return out;
}

}  // namespace

std::vector<AblationOutcome> run_ablation(std::span<const AblationFlags> configs,
                                          std::span<const SourceDocument> corpus,
                                          std::span<const QueryInput> testset, Provider& provider,
                                          const PipelineConfig& config) {
    const auto golds = gold_labels(testset);

    struct ForgedState {
        ForgeReport report;
        VectorStore store;
    };
    // Key: (desc_ex, verification). Stores are reused across configs that
    // share forge settings.
    std::map<std::pair<bool, bool>, ForgedState> cache;

    std::vector<AblationOutcome> out;
    out.reserve(configs.size());
    for (const AblationFlags& flags : configs) {
        const auto key = std::make_pair(flags.desc_ex, flags.verification);
        auto it = cache.find(key);
        if (it == cache.end()) {
            ForgeOptions forge_options = config.forge;
            forge_options.use_desc_ex = flags.desc_ex;
            forge_options.use_verification = flags.verification;
            forge_options.checkpoint_path.clear();  // caching replaces resume here
            ForgeResult forged = forge_database(corpus, provider, forge_options);
            VectorStore store = build_store(forged.indicators, provider, config.workers);
            it = cache.emplace(key, ForgedState{forged.report, std::move(store)}).first;
        }

        PredictOptions predict_options = config.predict;
        predict_options.use_desc_ex = flags.desc_ex;
        predict_options.mode =
            flags.descriptor_mapping ? PredictionMode::Descriptor : PredictionMode::Direct;

        const auto predictions =
            predict_batch(testset, it->second.store, provider, predict_options, config.workers);
        EvalReport eval =
            evaluate(predicted_labels(predictions), golds, predict_options.space);
        out.push_back(AblationOutcome{flags, it->second.report, std::move(eval)});
    }
    return out;
}

std::vector<size_t> sample_indices(size_t population, size_t k, uint64_t seed) {
    if (k > population) {
        raise(ErrorCode::SizeTooLarge, "cannot sample " + std::to_string(k) + " of " +
                                           std::to_string(population) + " entries");
    }
    // Substream per sample size: mixing k into the seed keeps draws for
    // different sizes independent.
    detail::SplitMix64 rng(detail::splitmix64(seed ^ (0x5157eef3u + 0x9e3779b97f4a7c15ULL * k)));

    std::vector<size_t> indices(population);
    std::iota(indices.begin(), indices.end(), size_t{0});
    for (size_t i = 0; i < k; ++i) {
        const size_t j = i + static_cast<size_t>(rng.bounded(population - i));
        std::swap(indices[i], indices[j]);
    }
    indices.resize(k);
    std::sort(indices.begin(), indices.end());
    return indices;
}

std::vector<SweepPoint> db_size_sweep(const VectorStore& store, std::span<const size_t> sizes,
                                      uint64_t seed, std::span<const QueryInput> testset,
                                      Provider& provider, const PredictOptions& options,
                                      size_t workers) {
    const auto golds = gold_labels(testset);

    std::vector<SweepPoint> out;
    out.reserve(sizes.size());
    for (size_t size : sizes) {
        if (size == 0) raise(ErrorCode::InvalidArgument, "sweep sizes must be >= 1");
        if (size > store.size()) {
            raise(ErrorCode::SizeTooLarge, "sweep size " + std::to_string(size) +
                                               " exceeds store size " + std::to_string(store.size()));
        }
        const auto indices = sample_indices(store.size(), size, seed);
        const VectorStore subset = store.subset(indices);
        const auto predictions = predict_batch(testset, subset, provider, options, workers);
        out.push_back(SweepPoint{size, evaluate(predicted_labels(predictions), golds, options.space)});
    }
    return out;
}

}  // namespace indivec
