#pragma once

#include <stdexcept>
#include <string>

namespace hyperqa {

// Base type for everything this library throws on purpose.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Misconfiguration: unregistered model/tokenizer ids, bad flag combinations.
class ConfigError : public Error {
public:
    using Error::Error;
};

// Dataset / fixture file problems. Messages name the offending record.
class LoadError : public Error {
public:
    using Error::Error;
};

// Caller handed us something invalid (empty text batch, zero vector, ...).
class InputError : public Error {
public:
    using Error::Error;
};

// Provider-side failure surfaced through the gateway. Carries the cache key
// of the request that failed so runs can be diagnosed from logs alone.
class GatewayError : public Error {
public:
    GatewayError(const std::string& message, std::string request_key)
        : Error(message), request_key_(std::move(request_key)) {}
    explicit GatewayError(const std::string& message) : Error(message) {}

    const std::string& request_key() const { return request_key_; }

private:
    std::string request_key_;
};

// Retryable transport-level failure (connection refused, 5xx, timeout).
class TransportError : public GatewayError {
public:
    using GatewayError::GatewayError;
};

// Clustering metric preconditions (single cluster, too few points, ...).
class MetricError : public Error {
public:
    using Error::Error;
};

// Hard pipeline failures: empty schema at pruning, prompt construction on an
// empty fact list, traversal called with k = 0.
class PipelineError : public Error {
public:
    using Error::Error;
};

}  // namespace hyperqa
