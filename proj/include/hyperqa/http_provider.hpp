#pragma once

#include <string>

#include "hyperqa/gateway.hpp"

namespace hyperqa::gateway {

// OpenAI-compatible chat-completions / embeddings endpoints over HTTP JSON.
// The auth token is read from an environment variable at call time, never
// stored in run artifacts.
struct HttpProviderConfig {
    std::string base_url = "https://api.openai.com";
    std::string auth_env = "OPENAI_API_KEY";
    std::string chat_path = "/v1/chat/completions";
    std::string embeddings_path = "/v1/embeddings";
    int timeout_seconds = 120;
};

class OpenAiChatProvider : public ChatProvider {
public:
    explicit OpenAiChatProvider(HttpProviderConfig config) : config_(std::move(config)) {}
    std::string complete(const ModelRequest& request) override;

private:
    HttpProviderConfig config_;
};

class OpenAiEmbeddingProvider : public EmbeddingProvider {
public:
    explicit OpenAiEmbeddingProvider(HttpProviderConfig config) : config_(std::move(config)) {}
    std::vector<std::vector<double>> embed(const std::string& model_id,
                                           const std::vector<std::string>& texts) override;

private:
    HttpProviderConfig config_;
};

}  // namespace hyperqa::gateway
