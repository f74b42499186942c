#pragma once

#include <atomic>
#include <chrono>
#include <condition_variable>
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <string_view>

#include "indivec/embedding.hpp"

namespace indivec {

struct ProviderConfig {
    std::string base_url = "https://api.openai.com";
    std::string api_key;  // empty: resolved from $INDIVEC_API_KEY
    std::string completion_model = "gpt-3.5-turbo-16k";
    std::string embedding_model = "text-embedding-ada-002";
    size_t embedding_dim = 1536;
    int max_retries = 3;
    std::chrono::milliseconds timeout{30000};
    int max_parallel_requests = 4;
    double temperature = 0.0;
};

/// Text-completion and text-embedding access. The public entry points
/// validate inputs and enforce the in-flight request cap; subclasses
/// supply the transport. Handles are shareable across threads.
class Provider {
public:
    virtual ~Provider() = default;

    Provider(const Provider&) = delete;
    Provider& operator=(const Provider&) = delete;

    /// Raises InvalidArgument on an empty prompt, ProviderError when the
    /// transport gives up, AuthError on rejected credentials.
    std::string complete(const std::string& prompt);

    /// Returns an embedding_dim()-length finite vector.
    /// Raises DimensionMismatch when the transport returns a wrong length.
    Embedding embed_text(const std::string& text);

    size_t embedding_dim() const { return embedding_dim_; }

    // Diagnostics.
    int peak_in_flight() const { return peak_in_flight_.load(); }
    uint64_t requests_served() const { return requests_served_.load(); }

protected:
    Provider(int max_parallel, size_t embedding_dim);

    virtual std::string do_complete(const std::string& prompt) = 0;
    virtual Embedding do_embed(const std::string& text) = 0;

private:
    class Slot;
    Slot acquire_slot();

    size_t embedding_dim_;
    int max_parallel_;
    int in_flight_ = 0;
    std::mutex gate_mutex_;
    std::condition_variable gate_cv_;
    std::atomic<int> peak_in_flight_{0};
    std::atomic<uint64_t> requests_served_{0};
};

/// Fixture table for the mock provider: marker substring -> scripted
/// response. complete() returns the response of the lexicographically
/// smallest marker that occurs in the prompt.
using FixtureMap = std::map<std::string, std::string>;

/// Returned by the mock when no fixture marker matches the prompt.
inline constexpr std::string_view kMockRefusal =
    "I cannot produce indicators for this input.";

/// Fully deterministic offline provider.
///
/// embed_text hashes each whitespace token (FNV-1a mixed with the seed),
/// folds four derived (bucket, weight) pairs per token into dim
/// accumulators, and scales the result to unit norm. Only integer hashing
/// and double operations in a fixed order are used, so the output is
/// bitwise reproducible across runs and platforms.
class MockProvider final : public Provider {
public:
    explicit MockProvider(uint64_t seed, FixtureMap fixtures = {}, size_t embedding_dim = 1536,
                          int max_parallel = 8);

    uint64_t seed() const { return seed_; }

private:
    std::string do_complete(const std::string& prompt) override;
    Embedding do_embed(const std::string& text) override;

    uint64_t seed_;
    uint64_t seed_state_;
    FixtureMap fixtures_;
};

/// Parse a fixture file: a JSON object mapping marker strings to response
/// strings.
FixtureMap load_fixture_file(const std::string& path);

/// JSON-over-HTTP provider compatible with OpenAI-style chat and
/// embedding endpoints (POST {base_url}/v1/chat/completions and
/// {base_url}/v1/embeddings, Bearer auth).
///
/// Transient failures (HTTP 429/5xx, timeouts, transport errors) are
/// retried up to max_retries with exponential backoff: base 1s, factor 2,
/// jitter +/-20%. 401/403 raise AuthError without retry. The API key is
/// scrubbed from every error message.
class HttpProvider final : public Provider {
public:
    using Sleeper = std::function<void(std::chrono::milliseconds)>;

    /// sleeper is injectable for tests; the default really sleeps.
    explicit HttpProvider(ProviderConfig cfg, Sleeper sleeper = {});

    const ProviderConfig& config() const { return cfg_; }

private:
    std::string do_complete(const std::string& prompt) override;
    Embedding do_embed(const std::string& text) override;

    std::string post_json(const std::string& path, const std::string& body);
    std::string scrub(std::string message) const;
    std::chrono::milliseconds backoff_delay(int attempt);

    ProviderConfig cfg_;
    Sleeper sleeper_;
    std::mutex jitter_mutex_;
    uint64_t jitter_state_;
};

}  // namespace indivec
