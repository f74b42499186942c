#pragma once

#include <map>
#include <span>
#include <string>
#include <vector>

#include "indivec/embedding.hpp"
#include "indivec/indicator.hpp"
#include "indivec/provider.hpp"
#include "indivec/store.hpp"
#include "indivec/taxonomy.hpp"

namespace indivec {

/// A text to classify. gold is the optional serialized reference label in
/// the active space ("" when absent).
struct QueryInput {
    std::string id;
    std::string text;
    TextLevel level = TextLevel::Sentence;
    std::string gold;
};

/// An indicator-like tag extracted from the query at prediction time.
struct Descriptor {
    std::string text;
    size_t index = 0;  // position within the query's descriptor list
    Embedding vector;
};

enum class PredictionMode : uint8_t { Descriptor, Direct };

std::string_view to_string(PredictionMode mode);

struct PredictedMatch {
    std::string indicator_id;
    std::string text;
    Leaning leaning = Leaning::Center;
    double similarity = 0.0;
    size_t rank = 0;
};

struct DescriptorMatches {
    Descriptor descriptor;
    std::vector<PredictedMatch> matches;
};

struct Prediction {
    std::string query_id;
    std::string label;  // serialized label in the active space
    std::map<std::string, int> tally;
    PredictionMode mode = PredictionMode::Descriptor;
    std::vector<DescriptorMatches> per_descriptor;

    size_t vote_count() const;
};

struct PredictOptions {
    size_t m = 10;
    LabelSpace space = LabelSpace::Binary;
    PredictionMode mode = PredictionMode::Descriptor;
    size_t max_descriptors = 8;
    bool fallback_to_direct = false;  // on empty descriptors, retry as Direct
    bool use_desc_ex = true;          // demonstrations in descriptor prompts
};

/// Same structure as the indicator-generation prompt, minus the gold-label
/// slot, asking for `<Category>: <text>` lines without leaning tags.
std::string build_descriptor_prompt(const std::string& text,
                                    std::span<const CategoryGuide> categories,
                                    bool use_desc_ex = true);

/// Parse `<Category>: <text>` lines; the category prefix is validated and
/// then discarded. Order is preserved; output is truncated at
/// max_descriptors. Raises ParseEmpty when nothing parses.
std::vector<std::string> parse_descriptors(const std::string& response, size_t max_descriptors);

/// Classify one query. Descriptor mode retrieves top-m indicators per
/// generated descriptor and majority-votes the |D|*m labels; Direct mode
/// embeds the query text itself and votes over one top-m list.
Prediction predict(const QueryInput& query, const VectorStore& store, Provider& provider,
                   const PredictOptions& options);

/// predict() over a batch with bounded parallelism; results are in input
/// order regardless of completion order.
std::vector<Prediction> predict_batch(std::span<const QueryInput> queries,
                                      const VectorStore& store, Provider& provider,
                                      const PredictOptions& options, size_t workers = 1);

/// Two-column rendering: each descriptor beside its top-k matched
/// indicators, leaning-tagged.
std::string explain(const Prediction& prediction, size_t top_k = 1);

/// One JSONL object: {"id","label","tally","mode","descriptors":[
///   {"text","matches":[{"indicator_id","text","leaning","similarity"}]}]}
std::string prediction_to_jsonl(const Prediction& prediction);

}  // namespace indivec
