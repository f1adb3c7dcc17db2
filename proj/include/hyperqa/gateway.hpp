#pragma once

#include <chrono>
#include <cstddef>
#include <filesystem>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

namespace hyperqa::gateway {

struct DecodingParams {
    double temperature = 0.0;  // all pipeline calls run deterministic decoding
    int max_tokens = 2048;

    bool operator==(const DecodingParams&) const = default;
};

struct ModelRequest {
    std::string model_id;
    std::string prompt;
    DecodingParams params;
};

struct EmbeddingVector {
    std::vector<double> values;
    std::string model_id;
};

class ChatProvider {
public:
    virtual ~ChatProvider() = default;
    virtual std::string complete(const ModelRequest& request) = 0;
};

class EmbeddingProvider {
public:
    virtual ~EmbeddingProvider() = default;
    // One vector per input text, order preserved, equal dimensionality.
    virtual std::vector<std::vector<double>> embed(const std::string& model_id,
                                                   const std::vector<std::string>& texts) = 0;
};

// Adapter so tests and scripted pipelines can register plain lambdas.
class FunctionChatProvider : public ChatProvider {
public:
    explicit FunctionChatProvider(std::function<std::string(const ModelRequest&)> fn)
        : fn_(std::move(fn)) {}
    std::string complete(const ModelRequest& request) override { return fn_(request); }

private:
    std::function<std::string(const ModelRequest&)> fn_;
};

// Deterministic playback provider: a map from sha256(prompt) to response text.
// Unknown prompts raise; fixture drift should fail loudly, not degrade.
class FixtureChatProvider : public ChatProvider {
public:
    FixtureChatProvider() = default;

    static std::string key_for(std::string_view prompt);
    static FixtureChatProvider from_file(const std::filesystem::path& path);

    void add(const std::string& prompt, const std::string& response);
    void add_hashed(const std::string& key, const std::string& response);
    bool knows(const std::string& prompt) const;
    std::size_t size() const { return responses_.size(); }

    nlohmann::json to_json() const;
    void save(const std::filesystem::path& path) const;

    std::string complete(const ModelRequest& request) override;

private:
    std::map<std::string, std::string> responses_;
};

// Deterministic embedder for offline runs: a unit vector drawn from an RNG
// seeded by the text hash. Identical texts map to identical vectors.
class HashEmbeddingProvider : public EmbeddingProvider {
public:
    explicit HashEmbeddingProvider(std::size_t dim = 64) : dim_(dim) {}
    std::vector<std::vector<double>> embed(const std::string& model_id,
                                           const std::vector<std::string>& texts) override;

private:
    std::size_t dim_;
};

// Test embedder with caller-prescribed vectors per exact text.
class StubEmbeddingProvider : public EmbeddingProvider {
public:
    void set(const std::string& text, std::vector<double> vector) {
        vectors_[text] = std::move(vector);
    }
    std::vector<std::vector<double>> embed(const std::string& model_id,
                                           const std::vector<std::string>& texts) override;

private:
    std::map<std::string, std::vector<double>> vectors_;
};

using Tokenizer = std::function<std::size_t(std::string_view)>;

struct RetryPolicy {
    int attempts = 3;  // transport errors only; content errors are not retried
    std::chrono::milliseconds initial_backoff{50};
};

struct GatewayStats {
    std::size_t chat_provider_calls = 0;
    std::size_t chat_cache_hits = 0;
    std::size_t chat_requests = 0;
    std::size_t embed_provider_batches = 0;
    std::size_t embed_cache_hits = 0;
    std::size_t embed_texts = 0;
};

// Append-only response cache: an in-memory map in front of an optional
// content-addressed on-disk store. Disk writes go through atomic rename.
class ResponseCache {
public:
    explicit ResponseCache(std::filesystem::path dir = {});

    std::optional<nlohmann::json> get(const std::string& key) const;
    void put(const std::string& key, const nlohmann::json& value);
    const std::filesystem::path& dir() const { return dir_; }

private:
    std::filesystem::path path_for(const std::string& key) const;

    std::filesystem::path dir_;
    mutable std::mutex mutex_;
    mutable std::map<std::string, nlohmann::json> memory_;
};

// Uniform access to chat and embedding providers with caching, retries and
// token accounting. Safe for concurrent use.
class Gateway {
public:
    explicit Gateway(std::filesystem::path cache_dir = {});

    void register_chat_provider(const std::string& model_id, std::shared_ptr<ChatProvider> p);
    void register_embedding_provider(const std::string& model_id,
                                     std::shared_ptr<EmbeddingProvider> p);
    void register_tokenizer(const std::string& tokenizer_id, Tokenizer tokenizer);
    void set_retry_policy(RetryPolicy policy) { retry_ = policy; }

    std::string chat(const ModelRequest& request);
    std::vector<EmbeddingVector> embed(const std::string& model_id,
                                       const std::vector<std::string>& texts);
    std::size_t count_tokens(std::string_view text, const std::string& tokenizer_id) const;

    static std::string chat_request_key(const ModelRequest& request);
    static std::string embed_request_key(const std::string& model_id, const std::string& text);

    GatewayStats stats() const;
    ResponseCache& cache() { return cache_; }

private:
    std::shared_ptr<ChatProvider> chat_provider_for(const std::string& model_id) const;
    std::shared_ptr<EmbeddingProvider> embedding_provider_for(const std::string& model_id) const;

    ResponseCache cache_;
    RetryPolicy retry_;
    mutable std::mutex registry_mutex_;
    std::map<std::string, std::shared_ptr<ChatProvider>> chat_providers_;
    std::map<std::string, std::shared_ptr<EmbeddingProvider>> embedding_providers_;
    std::map<std::string, Tokenizer> tokenizers_;
    mutable std::mutex stats_mutex_;
    GatewayStats stats_;
};

constexpr const char* kWhitespaceTokenizer = "whitespace";

}  // namespace hyperqa::gateway
