#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>

#include "chartlint/rules.hpp"

namespace chartlint {

struct EndpointConfig {
    std::string base_url;  // e.g. http://localhost:11434
    std::string model;
    double timeout_s = 120.0;
    int max_parallel = 4;
    int repetitions = 5;
    std::uint64_t seed = 0;
    double backoff_base_s = 0.5;  // transport retry backoff: base, 2*base
    std::string api_key_env = "CHARTLINT_API_KEY";
};

enum class FailureKind { timeout, transport, parse };

std::string_view to_string(FailureKind k);

struct QueryResult {
    std::optional<std::string> text;         // completion text, verbatim
    std::optional<FailureKind> failure;      // set iff text is absent
    std::string error_detail;
    double latency_s = 0.0;
};

// One model endpoint. Implementations must tolerate concurrent query() calls.
class Endpoint {
  public:
    virtual ~Endpoint() = default;
    virtual QueryResult query(const std::string& instance_id, int repetition,
                              const std::string& prompt) = 0;
};

// Chat-completion wire contract: POST {base_url}/v1/chat/completions with the
// model name and a single user message, no sampling overrides; the completion
// is read from choices[0].message.content. Transport errors are retried twice
// with exponential backoff; requests running past the timeout are failures.
std::unique_ptr<Endpoint> make_http_endpoint(const EndpointConfig& config);

// Offline endpoints so the whole pipeline runs without a live model.
// oracle: answers with the instance's ground truth; empty: always "[]";
// noisy: corrupts the oracle answer with probability p (seeded).
std::unique_ptr<Endpoint> make_oracle_endpoint(std::map<std::string, ViolationSet> truth);
std::unique_ptr<Endpoint> make_empty_endpoint();
std::unique_ptr<Endpoint> make_noisy_endpoint(std::map<std::string, ViolationSet> truth,
                                              double p, std::uint64_t seed);

}  // namespace chartlint
