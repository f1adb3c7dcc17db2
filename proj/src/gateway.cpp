#include "hyperqa/gateway.hpp"

#include <cmath>
#include <fstream>
#include <random>
#include <thread>

#include "hyperqa/errors.hpp"
#include "hyperqa/hash.hpp"
#include "hyperqa/text.hpp"

namespace hyperqa::gateway {

// ---------------------------------------------------------------------------
// FixtureChatProvider

std::string FixtureChatProvider::key_for(std::string_view prompt) {
    return hash::sha256_hex(prompt);
}

FixtureChatProvider FixtureChatProvider::from_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw LoadError("cannot open fixture responses " + path.string());
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw LoadError("cannot parse fixture responses " + path.string() + ": " + e.what());
    }
    if (!j.is_object()) throw LoadError(path.string() + ": expected an object of key -> response");
    FixtureChatProvider provider;
    for (auto it = j.begin(); it != j.end(); ++it) {
        if (!it.value().is_string())
            throw LoadError(path.string() + ": response for " + it.key() + " is not a string");
        provider.responses_[it.key()] = it.value().get<std::string>();
    }
    return provider;
}

void FixtureChatProvider::add(const std::string& prompt, const std::string& response) {
    responses_[key_for(prompt)] = response;
}

void FixtureChatProvider::add_hashed(const std::string& key, const std::string& response) {
    responses_[key] = response;
}

bool FixtureChatProvider::knows(const std::string& prompt) const {
    return responses_.count(key_for(prompt)) > 0;
}

nlohmann::json FixtureChatProvider::to_json() const {
    nlohmann::json j = nlohmann::json::object();
    for (const auto& [key, response] : responses_) j[key] = response;
    return j;
}

void FixtureChatProvider::save(const std::filesystem::path& path) const {
    std::ofstream out(path);
    if (!out) throw Error("cannot write fixture responses " + path.string());
    out << to_json().dump(2) << "\n";
}

std::string FixtureChatProvider::complete(const ModelRequest& request) {
    const std::string key = key_for(request.prompt);
    auto it = responses_.find(key);
    if (it == responses_.end())
        throw GatewayError("fixture provider has no response for prompt hash " + key, key);
    return it->second;
}

// ---------------------------------------------------------------------------
// Embedding providers

std::vector<std::vector<double>> HashEmbeddingProvider::embed(
    const std::string& model_id, const std::vector<std::string>& texts) {
    std::vector<std::vector<double>> out;
    out.reserve(texts.size());
    for (const std::string& t : texts) {
        std::mt19937_64 rng(hash::sha256_seed(model_id + "\x1f" + t));
        std::normal_distribution<double> dist(0.0, 1.0);
        std::vector<double> v(dim_);
        double norm_sq = 0.0;
        for (double& x : v) {
            x = dist(rng);
            norm_sq += x * x;
        }
        double norm = std::sqrt(norm_sq);
        for (double& x : v) x /= norm;
        out.push_back(std::move(v));
    }
    return out;
}

std::vector<std::vector<double>> StubEmbeddingProvider::embed(
    const std::string&, const std::vector<std::string>& texts) {
    std::vector<std::vector<double>> out;
    out.reserve(texts.size());
    for (const std::string& t : texts) {
        auto it = vectors_.find(t);
        if (it == vectors_.end())
            throw GatewayError("stub embedder has no vector for text: " + t);
        out.push_back(it->second);
    }
    return out;
}

// ---------------------------------------------------------------------------
// ResponseCache

namespace {

std::string now_iso8601() {
    auto now = std::chrono::system_clock::now();
    std::time_t t = std::chrono::system_clock::to_time_t(now);
    char buf[32];
    std::tm tm_utc{};
    gmtime_r(&t, &tm_utc);
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm_utc);
    return buf;
}

}  // namespace

ResponseCache::ResponseCache(std::filesystem::path dir) : dir_(std::move(dir)) {
    if (!dir_.empty()) std::filesystem::create_directories(dir_);
}

std::filesystem::path ResponseCache::path_for(const std::string& key) const {
    return dir_ / key.substr(0, 2) / (key + ".json");
}

std::optional<nlohmann::json> ResponseCache::get(const std::string& key) const {
    {
        std::lock_guard lock(mutex_);
        auto it = memory_.find(key);
        if (it != memory_.end()) return it->second;
    }
    if (dir_.empty()) return std::nullopt;
    std::filesystem::path path = path_for(key);
    std::ifstream in(path);
    if (!in) return std::nullopt;
    nlohmann::json record;
    try {
        in >> record;
    } catch (const nlohmann::json::exception&) {
        return std::nullopt;  // truncated write from a crashed run; treat as miss
    }
    if (!record.contains("value")) return std::nullopt;
    nlohmann::json value = record["value"];
    std::lock_guard lock(mutex_);
    memory_[key] = value;
    return value;
}

void ResponseCache::put(const std::string& key, const nlohmann::json& value) {
    {
        std::lock_guard lock(mutex_);
        memory_[key] = value;
    }
    if (dir_.empty()) return;
    std::filesystem::path path = path_for(key);
    std::filesystem::create_directories(path.parent_path());
    nlohmann::json record{{"key", key}, {"value", value}, {"created_at", now_iso8601()}};
    // Unique temp name per writer, then atomic rename.
    std::filesystem::path tmp = path;
    tmp += ".tmp." + std::to_string(
                         std::hash<std::thread::id>{}(std::this_thread::get_id()) % 100000);
    {
        std::ofstream out(tmp);
        if (!out) throw Error("cannot write cache file " + tmp.string());
        out << record.dump() << "\n";
    }
    std::filesystem::rename(tmp, path);
}

// ---------------------------------------------------------------------------
// Gateway

Gateway::Gateway(std::filesystem::path cache_dir) : cache_(std::move(cache_dir)) {
    tokenizers_[kWhitespaceTokenizer] = [](std::string_view t) {
        return text::whitespace_token_count(t);
    };
}

void Gateway::register_chat_provider(const std::string& model_id,
                                     std::shared_ptr<ChatProvider> p) {
    std::lock_guard lock(registry_mutex_);
    chat_providers_[model_id] = std::move(p);
}

void Gateway::register_embedding_provider(const std::string& model_id,
                                          std::shared_ptr<EmbeddingProvider> p) {
    std::lock_guard lock(registry_mutex_);
    embedding_providers_[model_id] = std::move(p);
}

void Gateway::register_tokenizer(const std::string& tokenizer_id, Tokenizer tokenizer) {
    std::lock_guard lock(registry_mutex_);
    tokenizers_[tokenizer_id] = std::move(tokenizer);
}

std::shared_ptr<ChatProvider> Gateway::chat_provider_for(const std::string& model_id) const {
    std::lock_guard lock(registry_mutex_);
    auto it = chat_providers_.find(model_id);
    if (it == chat_providers_.end())
        throw ConfigError("no chat provider registered for model '" + model_id + "'");
    return it->second;
}

std::shared_ptr<EmbeddingProvider> Gateway::embedding_provider_for(
    const std::string& model_id) const {
    std::lock_guard lock(registry_mutex_);
    auto it = embedding_providers_.find(model_id);
    if (it == embedding_providers_.end())
        throw ConfigError("no embedding provider registered for model '" + model_id + "'");
    return it->second;
}

std::string Gateway::chat_request_key(const ModelRequest& request) {
    // nlohmann::json orders object keys, so semantically identical parameter
    // sets serialize identically.
    nlohmann::json j{{"kind", "chat"},
                     {"model_id", request.model_id},
                     {"prompt", request.prompt},
                     {"params",
                      {{"temperature", request.params.temperature},
                       {"max_tokens", request.params.max_tokens}}}};
    return hash::sha256_hex(j.dump());
}

std::string Gateway::embed_request_key(const std::string& model_id, const std::string& text) {
    nlohmann::json j{{"kind", "embed"}, {"model_id", model_id}, {"text", text}};
    return hash::sha256_hex(j.dump());
}

std::string Gateway::chat(const ModelRequest& request) {
    if (request.prompt.empty()) throw InputError("chat: empty prompt");
    if (request.params.temperature < 0.0 || request.params.temperature > 2.0)
        throw InputError("chat: temperature out of [0, 2]");

    const std::string key = chat_request_key(request);
    {
        std::lock_guard lock(stats_mutex_);
        ++stats_.chat_requests;
    }
    if (auto cached = cache_.get(key)) {
        std::lock_guard lock(stats_mutex_);
        ++stats_.chat_cache_hits;
        return cached->get<std::string>();
    }

    auto provider = chat_provider_for(request.model_id);
    std::string response;
    auto backoff = retry_.initial_backoff;
    for (int attempt = 1;; ++attempt) {
        try {
            {
                std::lock_guard lock(stats_mutex_);
                ++stats_.chat_provider_calls;
            }
            response = provider->complete(request);
            break;
        } catch (const TransportError& e) {
            if (attempt >= retry_.attempts)
                throw TransportError(std::string(e.what()) + " (after " +
                                         std::to_string(attempt) + " attempts)",
                                     key);
            std::this_thread::sleep_for(backoff);
            backoff *= 2;
        } catch (const GatewayError& e) {
            throw GatewayError(e.what(), key);  // content error: no retry
        }
    }
    cache_.put(key, response);
    return response;
}

std::vector<EmbeddingVector> Gateway::embed(const std::string& model_id,
                                            const std::vector<std::string>& texts) {
    if (texts.empty()) throw InputError("embed: empty batch");
    for (const std::string& t : texts)
        if (t.empty()) throw InputError("embed: batch contains an empty text");

    std::vector<std::optional<std::vector<double>>> values(texts.size());
    std::vector<std::size_t> miss_indices;
    std::vector<std::string> miss_texts;
    for (std::size_t i = 0; i < texts.size(); ++i) {
        if (auto cached = cache_.get(embed_request_key(model_id, texts[i]))) {
            values[i] = cached->get<std::vector<double>>();
        } else {
            miss_indices.push_back(i);
            miss_texts.push_back(texts[i]);
        }
    }
    {
        std::lock_guard lock(stats_mutex_);
        stats_.embed_texts += texts.size();
        stats_.embed_cache_hits += texts.size() - miss_texts.size();
    }

    if (!miss_texts.empty()) {
        auto provider = embedding_provider_for(model_id);
        std::vector<std::vector<double>> fresh;
        auto backoff = retry_.initial_backoff;
        for (int attempt = 1;; ++attempt) {
            try {
                {
                    std::lock_guard lock(stats_mutex_);
                    ++stats_.embed_provider_batches;
                }
                fresh = provider->embed(model_id, miss_texts);
                break;
            } catch (const TransportError& e) {
                if (attempt >= retry_.attempts) throw;
                std::this_thread::sleep_for(backoff);
                backoff *= 2;
            }
        }
        if (fresh.size() != miss_texts.size())
            throw GatewayError("embedding provider returned " + std::to_string(fresh.size()) +
                               " vectors for " + std::to_string(miss_texts.size()) + " texts");
        for (std::size_t m = 0; m < fresh.size(); ++m) {
            for (double x : fresh[m])
                if (!std::isfinite(x))
                    throw GatewayError("embedding provider returned a non-finite value");
            cache_.put(embed_request_key(model_id, miss_texts[m]), fresh[m]);
            values[miss_indices[m]] = std::move(fresh[m]);
        }
    }

    std::vector<EmbeddingVector> out;
    out.reserve(texts.size());
    std::size_t dim = values[0]->size();
    for (auto& v : values) {
        if (v->size() != dim)
            throw GatewayError("embedding dimension mismatch within one model: " +
                               std::to_string(v->size()) + " vs " + std::to_string(dim));
        out.push_back(EmbeddingVector{std::move(*v), model_id});
    }
    return out;
}

std::size_t Gateway::count_tokens(std::string_view text_in, const std::string& tokenizer_id) const {
    Tokenizer tokenizer;
    {
        std::lock_guard lock(registry_mutex_);
        auto it = tokenizers_.find(tokenizer_id);
        if (it == tokenizers_.end())
            throw ConfigError("unknown tokenizer '" + tokenizer_id + "'");
        tokenizer = it->second;
    }
    if (text_in.empty()) return 0;
    return tokenizer(text_in);
}

GatewayStats Gateway::stats() const {
    std::lock_guard lock(stats_mutex_);
    return stats_;
}

}  // namespace hyperqa::gateway
