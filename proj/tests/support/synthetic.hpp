#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "indivec/indivec.hpp"

namespace indivec::testing {

/// Mock-provider corpus with three linearly separated topic clusters (one
/// per leaning) plus held-out queries, everything driven by fixture
/// completions. Topic tokens are repeated so the hash embedder places
/// same-topic texts close together and cross-topic texts far apart.
struct SyntheticData {
    std::vector<SourceDocument> corpus;
    FixtureMap fixtures;  // generation + verification + descriptor scripts
    std::vector<QueryInput> queries;  // gold labels in binary space
    size_t dim = 64;
    uint64_t seed = 0;
};

SyntheticData make_synthetic(size_t docs_per_leaning, size_t indicators_per_doc,
                             size_t queries_per_leaning, size_t dim = 64,
                             uint64_t seed = 20240901);

/// Fixture corpus whose verification scores cycle 1..10, ten indicators
/// per document; gold is always Left so the conflict filter drops nothing.
struct LadderData {
    std::vector<SourceDocument> corpus;
    FixtureMap fixtures;
};

LadderData make_confidence_ladder(size_t docs = 10, size_t indicators_per_doc = 10);

// File helpers for tests that drive the CLI.
void write_corpus_jsonl(const std::filesystem::path& path, std::span<const SourceDocument> docs);
void write_queries_jsonl(const std::filesystem::path& path, std::span<const QueryInput> queries);
void write_fixtures_json(const std::filesystem::path& path, const FixtureMap& fixtures);

std::string slurp(const std::filesystem::path& path);

/// Unique scratch directory under the system temp dir, removed on scope
/// exit.
class TempDir {
public:
    explicit TempDir(const std::string& tag);
    ~TempDir();
    TempDir(const TempDir&) = delete;
    TempDir& operator=(const TempDir&) = delete;

    const std::filesystem::path& path() const { return path_; }
    std::string str(const std::string& name) const { return (path_ / name).string(); }

private:
    std::filesystem::path path_;
};

}  // namespace indivec::testing
