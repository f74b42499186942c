#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "indivec/embedding.hpp"
#include "indivec/indicator.hpp"

namespace indivec {

/// One retrieval hit. Within a result list, similarity is non-increasing
/// with rank and ranks run 1..M consecutively.
struct Match {
    std::string indicator_id;
    double similarity = 0.0;  // in [-1, 1]
    size_t rank = 0;
    size_t index = 0;  // position within the store
};

/// Dimension-fixed store of unit-normalized indicator embeddings with
/// exact top-M cosine retrieval.
///
/// Vectors are held as a contiguous row-major float32 matrix (row i pairs
/// with metadata record i); dot products accumulate in float64 over the
/// row in index order, so every query path computes bit-identical scores.
/// The store is immutable after build/load; concurrent reads need no
/// coordination.
///
/// On-disk format, little-endian throughout:
///   <name>.meta.jsonl  one indicator record per line, in index order
///   <name>.vec         magic "IVDB", version u32=1, count u64, dim u32,
///                      then count x dim float32, row-major
class VectorStore {
public:
    explicit VectorStore(size_t dim);

    size_t dim() const { return dim_; }
    size_t size() const { return meta_.size(); }
    bool empty() const { return meta_.empty(); }

    /// Normalizes the vector (ZeroVector on all-zero input) and appends it.
    /// Raises DuplicateId / DimensionMismatch. Returns the new entry index.
    size_t insert(const Indicator& meta, const Embedding& vector);

    const Indicator& meta_at(size_t index) const;
    std::span<const float> row(size_t index) const;
    Embedding vector_at(size_t index) const;  // float32 row widened to double
    std::optional<size_t> find(const std::string& indicator_id) const;
    std::span<const Indicator> metadata() const { return meta_; }

    /// Exact top-M by cosine similarity (dot product against unit rows):
    /// min(m, size) matches sorted by similarity descending, ties broken by
    /// ascending indicator id. Equivalent to a full scan-and-sort.
    std::vector<Match> top_m(const Embedding& query, size_t m) const;

    /// New store with the given rows (in the given order), bit-identical
    /// row copies.
    VectorStore subset(std::span<const size_t> indices) const;

    void save(const std::string& base_path) const;
    static VectorStore load(const std::string& base_path);

private:
    size_t dim_;
    std::vector<Indicator> meta_;
    std::vector<float> matrix_;  // size() * dim_, row-major
    std::unordered_map<std::string, size_t> id_index_;
};

}  // namespace indivec
