#include "hyperqa/http_provider.hpp"

#include <cstdlib>

#define CPPHTTPLIB_OPENSSL_SUPPORT
#include <httplib.h>

#include "hyperqa/errors.hpp"

namespace hyperqa::gateway {

namespace {

httplib::Headers auth_headers(const HttpProviderConfig& config) {
    httplib::Headers headers;
    if (const char* token = std::getenv(config.auth_env.c_str()); token && *token)
        headers.emplace("Authorization", std::string("Bearer ") + token);
    return headers;
}

// POSTs the payload and classifies failures: connection-level problems and
// 429/5xx are retryable transport errors, everything else is a content error.
nlohmann::json post_json(const HttpProviderConfig& config, const std::string& path,
                         const nlohmann::json& payload) {
    httplib::Client client(config.base_url);
    client.set_connection_timeout(config.timeout_seconds);
    client.set_read_timeout(config.timeout_seconds);
    client.set_write_timeout(config.timeout_seconds);

    httplib::Result result =
        client.Post(path, auth_headers(config), payload.dump(), "application/json");
    if (!result)
        throw TransportError("HTTP request to " + config.base_url + path +
                             " failed: " + httplib::to_string(result.error()));
    if (result->status == 429 || result->status >= 500)
        throw TransportError("HTTP " + std::to_string(result->status) + " from " + path + ": " +
                             result->body);
    if (result->status != 200)
        throw GatewayError("HTTP " + std::to_string(result->status) + " from " + path + ": " +
                           result->body);
    try {
        return nlohmann::json::parse(result->body);
    } catch (const nlohmann::json::exception& e) {
        throw GatewayError(std::string("invalid JSON from provider: ") + e.what());
    }
}

}  // namespace

std::string OpenAiChatProvider::complete(const ModelRequest& request) {
    nlohmann::json payload{
        {"model", request.model_id},
        {"messages", nlohmann::json::array({{{"role", "user"}, {"content", request.prompt}}})},
        {"temperature", request.params.temperature},
        {"max_tokens", request.params.max_tokens}};
    nlohmann::json response = post_json(config_, config_.chat_path, payload);
    if (!response.contains("choices") || !response["choices"].is_array() ||
        response["choices"].empty())
        throw GatewayError("chat response has no choices: " + response.dump());
    const nlohmann::json& message = response["choices"][0];
    if (!message.contains("message") || !message["message"].contains("content"))
        throw GatewayError("chat response has no message content: " + response.dump());
    return message["message"]["content"].get<std::string>();
}

std::vector<std::vector<double>> OpenAiEmbeddingProvider::embed(
    const std::string& model_id, const std::vector<std::string>& texts) {
    nlohmann::json payload{{"model", model_id}, {"input", texts}};
    nlohmann::json response = post_json(config_, config_.embeddings_path, payload);
    if (!response.contains("data") || !response["data"].is_array())
        throw GatewayError("embeddings response has no data array: " + response.dump());

    // The endpoint may return items out of order; honor the index field.
    std::vector<std::vector<double>> out(texts.size());
    std::size_t filled = 0;
    for (const nlohmann::json& item : response["data"]) {
        if (!item.contains("embedding") || !item["embedding"].is_array())
            throw GatewayError("embeddings item lacks an embedding array");
        std::size_t index = item.value("index", filled);
        if (index >= out.size()) throw GatewayError("embeddings item index out of range");
        out[index] = item["embedding"].get<std::vector<double>>();
        ++filled;
    }
    if (filled != texts.size())
        throw GatewayError("embeddings response covered " + std::to_string(filled) + " of " +
                           std::to_string(texts.size()) + " inputs");
    return out;
}

}  // namespace hyperqa::gateway
