#pragma once

#include <cstddef>
#include <vector>

namespace indivec {

/// Dense text embedding. Values are kept in double precision end to end;
/// the vector store rounds to float32 on insert.
struct Embedding {
    std::vector<double> values;

    size_t dim() const { return values.size(); }
    bool empty() const { return values.empty(); }
};

/// Scale to unit L2 norm (within 1e-9), preserving direction.
/// Raises ZeroVector for an all-zero input.
Embedding normalize(const Embedding& v);

/// (a.b) / (|a||b|), accumulated in double, clamped to [-1, 1].
/// Raises DimensionMismatch or ZeroVector.
double cosine_similarity(const Embedding& a, const Embedding& b);

}  // namespace indivec
