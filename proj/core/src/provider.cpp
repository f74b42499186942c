#define CPPHTTPLIB_OPENSSL_SUPPORT
#include "httplib.h"

#include "indivec/provider.hpp"

#include <cctype>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <thread>

#include "json.hpp"

#include "indivec/error.hpp"
#include "hashing.hpp"

namespace indivec {

using nlohmann::json;

// ---------------------------------------------------------------------------
// Provider base: input validation + in-flight request cap.

class Provider::Slot {
public:
    explicit Slot(Provider& owner) : owner_(owner) {}
    ~Slot() {
        std::lock_guard lock(owner_.gate_mutex_);
        --owner_.in_flight_;
        owner_.gate_cv_.notify_one();
    }
    Slot(const Slot&) = delete;
    Slot& operator=(const Slot&) = delete;

private:
    Provider& owner_;
};

Provider::Provider(int max_parallel, size_t embedding_dim)
    : embedding_dim_(embedding_dim), max_parallel_(max_parallel) {
    if (max_parallel_ < 1) raise(ErrorCode::InvalidArgument, "max_parallel_requests must be >= 1");
    if (embedding_dim_ == 0) raise(ErrorCode::InvalidArgument, "embedding_dim must be positive");
}

Provider::Slot Provider::acquire_slot() {
    std::unique_lock lock(gate_mutex_);
    gate_cv_.wait(lock, [&] { return in_flight_ < max_parallel_; });
    ++in_flight_;
    int peak = peak_in_flight_.load();
    while (in_flight_ > peak && !peak_in_flight_.compare_exchange_weak(peak, in_flight_)) {
    }
    return Slot(*this);
}

std::string Provider::complete(const std::string& prompt) {
    if (prompt.empty()) raise(ErrorCode::InvalidArgument, "complete() requires a non-empty prompt");
    Slot slot = acquire_slot();
    requests_served_.fetch_add(1);
    return do_complete(prompt);
}

Embedding Provider::embed_text(const std::string& text) {
    if (text.empty()) raise(ErrorCode::InvalidArgument, "embed_text() requires non-empty text");
    Embedding out;
    {
        Slot slot = acquire_slot();
        requests_served_.fetch_add(1);
        out = do_embed(text);
    }
    if (out.dim() != embedding_dim_) {
        raise(ErrorCode::DimensionMismatch,
              "provider returned a " + std::to_string(out.dim()) + "-dim embedding, expected " +
                  std::to_string(embedding_dim_));
    }
    for (double v : out.values) {
        if (!std::isfinite(v)) raise(ErrorCode::ProviderError, "provider returned a non-finite embedding entry");
    }
    return out;
}

// ---------------------------------------------------------------------------
// MockProvider

MockProvider::MockProvider(uint64_t seed, FixtureMap fixtures, size_t embedding_dim, int max_parallel)
    : Provider(max_parallel, embedding_dim),
      seed_(seed),
      seed_state_(detail::splitmix64(seed)),
      fixtures_(std::move(fixtures)) {}

std::string MockProvider::do_complete(const std::string& prompt) {
    // Lexicographically smallest matching marker wins; std::map iteration
    // order makes the scan deterministic.
    for (const auto& [marker, response] : fixtures_) {
        if (!marker.empty() && prompt.find(marker) != std::string::npos) return response;
    }
    return std::string(kMockRefusal);
}

Embedding MockProvider::do_embed(const std::string& text) {
    const size_t dim = embedding_dim();
    std::vector<double> acc(dim, 0.0);

    const std::string_view sv(text);
    size_t i = 0;
    while (i < sv.size()) {
        while (i < sv.size() && std::isspace(static_cast<unsigned char>(sv[i]))) ++i;
        const size_t start = i;
        while (i < sv.size() && !std::isspace(static_cast<unsigned char>(sv[i]))) ++i;
        if (i == start) break;
        uint64_t h = detail::fnv1a64(sv.substr(start, i - start)) ^ seed_state_;
        for (int k = 0; k < 4; ++k) {
            h = detail::splitmix64(h);
            const size_t bucket = static_cast<size_t>(h % dim);
            // Top 53 hash bits mapped to [-1, 1).
            const double w =
                static_cast<double>(h >> 11) * (1.0 / 4503599627370496.0) - 1.0;
            acc[bucket] += w;
        }
    }

    double norm2 = 0.0;
    for (double v : acc) norm2 += v * v;
    if (norm2 == 0.0) {
        // Whitespace-only text (or exact cancellation): pin to a fixed axis.
        acc[0] = 1.0;
        norm2 = 1.0;
    }
    const double norm = std::sqrt(norm2);
    for (double& v : acc) v /= norm;
    return Embedding{std::move(acc)};
}

FixtureMap load_fixture_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) raise(ErrorCode::IoError, "cannot open fixture file " + path);
    json doc;
    try {
        in >> doc;
    } catch (const json::exception& e) {
        raise(ErrorCode::FormatError, "fixture file " + path + ": " + e.what());
    }
    if (!doc.is_object()) raise(ErrorCode::FormatError, "fixture file must be a JSON object");
    FixtureMap out;
    for (const auto& [marker, response] : doc.items()) {
        if (!response.is_string()) {
            raise(ErrorCode::FormatError, "fixture response for marker \"" + marker + "\" is not a string");
        }
        out[marker] = response.get<std::string>();
    }
    return out;
}

// ---------------------------------------------------------------------------
// HttpProvider

HttpProvider::HttpProvider(ProviderConfig cfg, Sleeper sleeper)
    : Provider(cfg.max_parallel_requests, cfg.embedding_dim),
      cfg_(std::move(cfg)),
      sleeper_(std::move(sleeper)),
      jitter_state_(detail::splitmix64(
          static_cast<uint64_t>(std::chrono::steady_clock::now().time_since_epoch().count()))) {
    if (cfg_.api_key.empty()) {
        if (const char* env = std::getenv("INDIVEC_API_KEY")) cfg_.api_key = env;
    }
    if (cfg_.max_retries < 0) raise(ErrorCode::InvalidArgument, "max_retries must be >= 0");
}

std::string HttpProvider::scrub(std::string message) const {
    if (cfg_.api_key.empty()) return message;
    size_t pos = 0;
    while ((pos = message.find(cfg_.api_key, pos)) != std::string::npos) {
        message.replace(pos, cfg_.api_key.size(), "***");
        pos += 3;
    }
    return message;
}

std::chrono::milliseconds HttpProvider::backoff_delay(int retry) {
    uint64_t r;
    {
        std::lock_guard lock(jitter_mutex_);
        jitter_state_ = detail::splitmix64(jitter_state_);
        r = jitter_state_;
    }
    const double u = static_cast<double>(r >> 11) * (1.0 / 9007199254740992.0);  // [0, 1)
    const double jitter = 0.8 + 0.4 * u;
    const double ms = 1000.0 * std::pow(2.0, retry) * jitter;
    return std::chrono::milliseconds(static_cast<int64_t>(std::llround(ms)));
}

std::string HttpProvider::post_json(const std::string& path, const std::string& body) {
    const int attempts = cfg_.max_retries + 1;
    std::string last_detail = "no attempt made";

    for (int attempt = 0; attempt < attempts; ++attempt) {
        if (attempt > 0) {
            const auto delay = backoff_delay(attempt - 1);
            if (sleeper_) {
                sleeper_(delay);
            } else {
                std::this_thread::sleep_for(delay);
            }
        }

        httplib::Client client(cfg_.base_url);
        client.set_connection_timeout(cfg_.timeout);
        client.set_read_timeout(cfg_.timeout);
        client.set_write_timeout(cfg_.timeout);

        httplib::Headers headers = {{"Authorization", "Bearer " + cfg_.api_key}};
        auto res = client.Post(path, headers, body, "application/json");

        if (!res) {
            last_detail = "transport error: " + httplib::to_string(res.error());
            continue;
        }
        const int status = res->status;
        if (status == 401 || status == 403) {
            raise(ErrorCode::AuthError,
                  scrub("authentication rejected (HTTP " + std::to_string(status) + ") on " + path));
        }
        if (status >= 200 && status < 300) return res->body;
        if (status == 429 || status >= 500) {
            last_detail = "HTTP " + std::to_string(status);
            continue;
        }
        raise(ErrorCode::ProviderError,
              scrub("HTTP " + std::to_string(status) + " on " + path + ": " + res->body.substr(0, 512)));
    }
    raise(ErrorCode::ProviderError,
          scrub("gave up on " + path + " after " + std::to_string(attempts) + " attempts; last: " +
                last_detail));
}

std::string HttpProvider::do_complete(const std::string& prompt) {
    const json body = {
        {"model", cfg_.completion_model},
        {"messages", json::array({json{{"role", "user"}, {"content", prompt}}})},
        {"temperature", cfg_.temperature},
    };
    const std::string raw = post_json("/v1/chat/completions", body.dump());
    try {
        const json doc = json::parse(raw);
        return doc.at("choices").at(0).at("message").at("content").get<std::string>();
    } catch (const json::exception& e) {
        raise(ErrorCode::ProviderError, scrub(std::string("malformed completion response: ") + e.what()));
    }
}

Embedding HttpProvider::do_embed(const std::string& text) {
    const json body = {
        {"model", cfg_.embedding_model},
        {"input", text},
    };
    const std::string raw = post_json("/v1/embeddings", body.dump());
    try {
        const json doc = json::parse(raw);
        const json& vec = doc.at("data").at(0).at("embedding");
        Embedding out;
        out.values.reserve(vec.size());
        for (const auto& v : vec) out.values.push_back(v.get<double>());
        return out;
    } catch (const json::exception& e) {
        raise(ErrorCode::ProviderError, scrub(std::string("malformed embedding response: ") + e.what()));
    }
}

}  // namespace indivec
