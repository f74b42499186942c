#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "indivec/eval.hpp"
#include "indivec/forge.hpp"
#include "indivec/predictor.hpp"
#include "indivec/store.hpp"

namespace indivec {

/// Indicator-set statistics: the category x leaning matrix, whitespace
/// token length, and the confidence histogram.
struct StatsReport {
    std::map<std::string, std::map<std::string, size_t>> counts;  // category -> leaning -> n
    double mean_token_length = 0.0;
    std::array<size_t, 10> confidence_histogram{};  // index i holds score i+1
    size_t total = 0;
};

StatsReport indicator_stats(std::span<const Indicator> indicators);
std::string stats_report_to_json(const StatsReport& report, bool pretty = false);

/// CSV export of the stored vectors: header, then one row per entry with
/// id, leaning, category and the dim float32 coordinates, in store order.
/// Raises InvalidArgument on an empty store.
void export_embeddings(const VectorStore& store, const std::string& csv_path);

/// Embed every indicator and insert in order; the standard index step
/// between forging and prediction.
VectorStore build_store(std::span<const Indicator> indicators, Provider& provider,
                        size_t workers = 1);

struct PipelineConfig {
    ForgeOptions forge;
    PredictOptions predict;
    size_t workers = 1;
};

/// One ablation row: which mechanisms stay enabled.
struct AblationFlags {
    bool desc_ex = true;
    bool verification = true;
    bool descriptor_mapping = true;  // off = Direct mode
};

struct AblationOutcome {
    AblationFlags flags;
    ForgeReport forge;
    EvalReport eval;
};

/// Run forge + predict + evaluate once per configuration. Configurations
/// sharing forge settings (desc_ex, verification) reuse the same indicator
/// database and store. Every test query must carry a gold label.
std::vector<AblationOutcome> run_ablation(std::span<const AblationFlags> configs,
                                          std::span<const SourceDocument> corpus,
                                          std::span<const QueryInput> testset, Provider& provider,
                                          const PipelineConfig& config);

/// Seed-deterministic uniform sample of k distinct indices from
/// [0, population), returned in ascending order. The PRNG is a fixed
/// splitmix64 stream over (seed, k), so every size gets its own substream
/// and results are identical across platforms.
std::vector<size_t> sample_indices(size_t population, size_t k, uint64_t seed);

struct SweepPoint {
    size_t size;
    EvalReport eval;
};

/// Evaluate on random store subsets of the given sizes. size == store
/// size reproduces plain evaluation exactly. Raises SizeTooLarge.
std::vector<SweepPoint> db_size_sweep(const VectorStore& store, std::span<const size_t> sizes,
                                      uint64_t seed, std::span<const QueryInput> testset,
                                      Provider& provider, const PredictOptions& options,
                                      size_t workers = 1);

/// (id, gold) pairs pulled from a test set; raises InvalidArgument when a
/// query has no gold label.
std::vector<LabeledId> gold_labels(std::span<const QueryInput> testset);

}  // namespace indivec
