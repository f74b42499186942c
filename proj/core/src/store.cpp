#include "indivec/store.hpp"

#include <algorithm>
#include <bit>
#include <cstdint>
#include <cstring>
#include <filesystem>
#include <fstream>

#include "indivec/error.hpp"

namespace indivec {

namespace {

constexpr char kMagic[4] = {'I', 'V', 'D', 'B'};
constexpr uint32_t kVersion = 1;

void put_u32(std::string& out, uint32_t v) {
    out.push_back(static_cast<char>(v & 0xff));
    out.push_back(static_cast<char>((v >> 8) & 0xff));
    out.push_back(static_cast<char>((v >> 16) & 0xff));
    out.push_back(static_cast<char>((v >> 24) & 0xff));
}

void put_u64(std::string& out, uint64_t v) {
    put_u32(out, static_cast<uint32_t>(v & 0xffffffffu));
    put_u32(out, static_cast<uint32_t>(v >> 32));
}

uint32_t get_u32(const unsigned char* p) {
    return static_cast<uint32_t>(p[0]) | (static_cast<uint32_t>(p[1]) << 8) |
           (static_cast<uint32_t>(p[2]) << 16) | (static_cast<uint32_t>(p[3]) << 24);
}

uint64_t get_u64(const unsigned char* p) {
    return static_cast<uint64_t>(get_u32(p)) | (static_cast<uint64_t>(get_u32(p + 4)) << 32);
}

}  // namespace

VectorStore::VectorStore(size_t dim) : dim_(dim) {
    if (dim_ == 0) raise(ErrorCode::InvalidArgument, "store dimension must be positive");
}

size_t VectorStore::insert(const Indicator& meta, const Embedding& vector) {
    if (vector.dim() != dim_) {
        raise(ErrorCode::DimensionMismatch, "entry dim " + std::to_string(vector.dim()) +
                                                " does not match store dim " + std::to_string(dim_));
    }
    if (id_index_.contains(meta.id)) {
        raise(ErrorCode::DuplicateId, "indicator id \"" + meta.id + "\" already present");
    }
    const Embedding unit = normalize(vector);
    const size_t index = meta_.size();
    meta_.push_back(meta);
    matrix_.reserve(matrix_.size() + dim_);
    for (double v : unit.values) matrix_.push_back(static_cast<float>(v));
    id_index_.emplace(meta.id, index);
    return index;
}

const Indicator& VectorStore::meta_at(size_t index) const {
    if (index >= meta_.size()) raise(ErrorCode::InvalidArgument, "store index out of range");
    return meta_[index];
}

std::span<const float> VectorStore::row(size_t index) const {
    if (index >= meta_.size()) raise(ErrorCode::InvalidArgument, "store index out of range");
    return {matrix_.data() + index * dim_, dim_};
}

Embedding VectorStore::vector_at(size_t index) const {
    const auto r = row(index);
    Embedding out;
    out.values.assign(r.begin(), r.end());
    return out;
}

std::optional<size_t> VectorStore::find(const std::string& indicator_id) const {
    const auto it = id_index_.find(indicator_id);
    if (it == id_index_.end()) return std::nullopt;
    return it->second;
}

std::vector<Match> VectorStore::top_m(const Embedding& query, size_t m) const {
    if (empty()) raise(ErrorCode::EmptyStore, "top_m on an empty store");
    if (m == 0) raise(ErrorCode::InvalidArgument, "top_m requires m >= 1");
    if (query.dim() != dim_) {
        raise(ErrorCode::DimensionMismatch, "query dim " + std::to_string(query.dim()) +
                                                " does not match store dim " + std::to_string(dim_));
    }
    const Embedding unit = normalize(query);  // ZeroVector for all-zero queries

    struct Scored {
        double similarity;
        size_t index;
    };
    std::vector<Scored> scored;
    scored.reserve(size());
    const double* q = unit.values.data();
    for (size_t i = 0; i < size(); ++i) {
        const float* r = matrix_.data() + i * dim_;
        double dot = 0.0;
        for (size_t k = 0; k < dim_; ++k) dot += static_cast<double>(r[k]) * q[k];
        scored.push_back({std::clamp(dot, -1.0, 1.0), i});
    }

    const size_t take = std::min(m, scored.size());
    const auto better = [this](const Scored& a, const Scored& b) {
        if (a.similarity != b.similarity) return a.similarity > b.similarity;
        return meta_[a.index].id < meta_[b.index].id;
    };
    std::partial_sort(scored.begin(), scored.begin() + static_cast<ptrdiff_t>(take), scored.end(),
                      better);

    std::vector<Match> out;
    out.reserve(take);
    for (size_t r = 0; r < take; ++r) {
        out.push_back(Match{meta_[scored[r].index].id, scored[r].similarity, r + 1, scored[r].index});
    }
    return out;
}

VectorStore VectorStore::subset(std::span<const size_t> indices) const {
    VectorStore out(dim_);
    out.meta_.reserve(indices.size());
    out.matrix_.reserve(indices.size() * dim_);
    for (size_t idx : indices) {
        if (idx >= size()) raise(ErrorCode::InvalidArgument, "subset index out of range");
        if (out.id_index_.contains(meta_[idx].id)) {
            raise(ErrorCode::DuplicateId, "subset repeats index " + std::to_string(idx));
        }
        out.id_index_.emplace(meta_[idx].id, out.meta_.size());
        out.meta_.push_back(meta_[idx]);
        const float* r = matrix_.data() + idx * dim_;
        out.matrix_.insert(out.matrix_.end(), r, r + dim_);
    }
    return out;
}

void VectorStore::save(const std::string& base_path) const {
    const std::string meta_path = base_path + ".meta.jsonl";
    const std::string vec_path = base_path + ".vec";

    if (const auto parent = std::filesystem::path(base_path).parent_path(); !parent.empty()) {
        std::error_code ec;
        std::filesystem::create_directories(parent, ec);
    }

    std::ofstream meta(meta_path, std::ios::binary | std::ios::trunc);
    if (!meta) raise(ErrorCode::IoError, "cannot write " + meta_path);
    for (const Indicator& ind : meta_) meta << indicator_to_jsonl(ind) << '\n';
    meta.close();
    if (!meta) raise(ErrorCode::IoError, "write failed for " + meta_path);

    std::string header;
    header.append(kMagic, 4);
    put_u32(header, kVersion);
    put_u64(header, static_cast<uint64_t>(size()));
    put_u32(header, static_cast<uint32_t>(dim_));

    std::ofstream vec(vec_path, std::ios::binary | std::ios::trunc);
    if (!vec) raise(ErrorCode::IoError, "cannot write " + vec_path);
    vec.write(header.data(), static_cast<std::streamsize>(header.size()));
    std::string buf;
    buf.reserve(matrix_.size() * 4);
    for (float f : matrix_) put_u32(buf, std::bit_cast<uint32_t>(f));
    vec.write(buf.data(), static_cast<std::streamsize>(buf.size()));
    vec.close();
    if (!vec) raise(ErrorCode::IoError, "write failed for " + vec_path);
}

VectorStore VectorStore::load(const std::string& base_path) {
    const std::string meta_path = base_path + ".meta.jsonl";
    const std::string vec_path = base_path + ".vec";

    std::ifstream vec(vec_path, std::ios::binary);
    if (!vec) raise(ErrorCode::IoError, "cannot open " + vec_path);
    std::string bytes((std::istreambuf_iterator<char>(vec)), std::istreambuf_iterator<char>());
    if (bytes.size() < 20) raise(ErrorCode::FormatError, vec_path + ": truncated header");
    const auto* p = reinterpret_cast<const unsigned char*>(bytes.data());
    if (std::memcmp(p, kMagic, 4) != 0) raise(ErrorCode::FormatError, vec_path + ": bad magic");
    const uint32_t version = get_u32(p + 4);
    if (version != kVersion) {
        raise(ErrorCode::FormatError, vec_path + ": unsupported version " + std::to_string(version));
    }
    const uint64_t count = get_u64(p + 8);
    const uint32_t dim = get_u32(p + 16);
    if (dim == 0) raise(ErrorCode::FormatError, vec_path + ": zero dimension");
    const uint64_t expected = 20 + count * static_cast<uint64_t>(dim) * 4;
    if (bytes.size() != expected) {
        raise(ErrorCode::FormatError, vec_path + ": size " + std::to_string(bytes.size()) +
                                          " does not match header (expected " +
                                          std::to_string(expected) + ")");
    }

    VectorStore store(dim);
    store.meta_.reserve(count);
    store.matrix_.reserve(count * dim);

    std::ifstream meta(meta_path);
    if (!meta) raise(ErrorCode::IoError, "cannot open " + meta_path);
    std::string line;
    uint64_t rows = 0;
    while (std::getline(meta, line)) {
        if (line.empty()) continue;
        if (rows >= count) {
            raise(ErrorCode::FormatError,
                  meta_path + ": more metadata lines than header count " + std::to_string(count));
        }
        Indicator ind = indicator_from_jsonl(line);
        if (store.id_index_.contains(ind.id)) {
            raise(ErrorCode::FormatError, meta_path + ": duplicate id \"" + ind.id + "\"");
        }
        store.id_index_.emplace(ind.id, store.meta_.size());
        store.meta_.push_back(std::move(ind));
        ++rows;
    }
    if (rows != count) {
        raise(ErrorCode::FormatError, meta_path + ": " + std::to_string(rows) +
                                          " metadata lines but header count is " +
                                          std::to_string(count));
    }

    const unsigned char* f = p + 20;
    for (uint64_t i = 0; i < count * static_cast<uint64_t>(dim); ++i, f += 4) {
        store.matrix_.push_back(std::bit_cast<float>(get_u32(f)));
    }
    return store;
}

}  // namespace indivec
