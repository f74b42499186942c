#include "indivec/embedding.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "indivec/error.hpp"

namespace indivec {

namespace {

double l2_norm(const Embedding& v) {
    double sum = 0.0;
    for (double x : v.values) {
        if (!std::isfinite(x)) raise(ErrorCode::InvalidArgument, "non-finite embedding entry");
        sum += x * x;
    }
    return std::sqrt(sum);
}

}  // namespace

Embedding normalize(const Embedding& v) {
    if (v.empty()) raise(ErrorCode::InvalidArgument, "cannot normalize an empty vector");
    const double norm = l2_norm(v);
    if (norm == 0.0) raise(ErrorCode::ZeroVector, "cannot normalize the zero vector");
    Embedding out;
    out.values.reserve(v.dim());
    for (double x : v.values) out.values.push_back(x / norm);
    return out;
}

double cosine_similarity(const Embedding& a, const Embedding& b) {
    if (a.dim() != b.dim()) {
        raise(ErrorCode::DimensionMismatch,
              "cosine_similarity: dims " + std::to_string(a.dim()) + " vs " + std::to_string(b.dim()));
    }
    if (a.empty()) raise(ErrorCode::InvalidArgument, "cosine_similarity on empty vectors");

    double dot = 0.0, na = 0.0, nb = 0.0;
    for (size_t i = 0; i < a.dim(); ++i) {
        const double x = a.values[i], y = b.values[i];
        if (!std::isfinite(x) || !std::isfinite(y)) {
            raise(ErrorCode::InvalidArgument, "non-finite embedding entry");
        }
        dot += x * y;
        na += x * x;
        nb += y * y;
    }
    if (na == 0.0 || nb == 0.0) raise(ErrorCode::ZeroVector, "cosine_similarity with a zero vector");
    const double sim = dot / (std::sqrt(na) * std::sqrt(nb));
    return std::clamp(sim, -1.0, 1.0);
}

}  // namespace indivec
