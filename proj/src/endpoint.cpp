#include "chartlint/endpoint.hpp"

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <thread>

#include <httplib.h>
#include <json.hpp>

#include "chartlint/rng.hpp"

namespace chartlint {

using nlohmann::json;

std::string_view to_string(FailureKind k) {
    switch (k) {
        case FailureKind::timeout: return "timeout";
        case FailureKind::transport: return "transport";
        case FailureKind::parse: return "parse";
    }
    return "?";
}

namespace {

double seconds_since(std::chrono::steady_clock::time_point start) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

class HttpEndpoint final : public Endpoint {
  public:
    explicit HttpEndpoint(EndpointConfig config) : config_(std::move(config)) {
        // httplib clients take scheme://host:port only; any path in the
        // base URL becomes a prefix of the request path.
        host_ = config_.base_url;
        const auto scheme_end = host_.find("://");
        const auto path_start = host_.find('/', scheme_end == std::string::npos
                                                    ? 0
                                                    : scheme_end + 3);
        if (path_start != std::string::npos) {
            path_prefix_ = host_.substr(path_start);
            host_.resize(path_start);
            while (!path_prefix_.empty() && path_prefix_.back() == '/') {
                path_prefix_.pop_back();
            }
        }
    }

    QueryResult query(const std::string&, int, const std::string& prompt) override {
        const json body = {
            {"model", config_.model},
            {"messages", json::array({json{{"role", "user"}, {"content", prompt}}})},
        };
        const std::string payload = body.dump();

        httplib::Headers headers;
        if (const char* key = std::getenv(config_.api_key_env.c_str()); key && *key) {
            headers.emplace("Authorization", std::string("Bearer ") + key);
        }

        const auto start = std::chrono::steady_clock::now();
        QueryResult result;
        std::string last_error;

        for (int attempt = 0; attempt <= 2; ++attempt) {
            if (attempt > 0) {
                const double backoff = config_.backoff_base_s * std::pow(2.0, attempt - 1);
                std::this_thread::sleep_for(std::chrono::duration<double>(backoff));
            }

            // A fresh client per attempt; httplib keeps connection state.
            httplib::Client client(host_);
            const auto timeout_ms =
                std::chrono::milliseconds(static_cast<long long>(config_.timeout_s * 1000));
            client.set_connection_timeout(timeout_ms);
            client.set_read_timeout(timeout_ms);
            client.set_write_timeout(timeout_ms);

            const auto attempt_start = std::chrono::steady_clock::now();
            auto res = client.Post(path_prefix_ + "/v1/chat/completions", headers, payload,
                                   "application/json");
            const double attempt_s = seconds_since(attempt_start);

            if (!res) {
                // read/write errors at the deadline are terminated generations
                if (attempt_s >= config_.timeout_s * 0.95) {
                    result.failure = FailureKind::timeout;
                    result.error_detail = "request exceeded " +
                                          std::to_string(config_.timeout_s) + "s";
                    result.latency_s = seconds_since(start);
                    return result;
                }
                last_error = "transport error: " + httplib::to_string(res.error());
                continue;
            }
            if (res->status != 200) {
                last_error = "HTTP status " + std::to_string(res->status);
                continue;
            }

            json envelope = json::parse(res->body, nullptr, false);
            if (envelope.is_discarded() || !envelope.contains("choices") ||
                !envelope["choices"].is_array() || envelope["choices"].empty() ||
                !envelope["choices"][0].contains("message") ||
                !envelope["choices"][0]["message"].contains("content") ||
                !envelope["choices"][0]["message"]["content"].is_string()) {
                result.failure = FailureKind::transport;
                result.error_detail = "malformed response envelope";
                result.latency_s = seconds_since(start);
                return result;
            }

            result.text = envelope["choices"][0]["message"]["content"].get<std::string>();
            result.latency_s = seconds_since(start);
            return result;
        }

        result.failure = FailureKind::transport;
        result.error_detail = last_error + " (after 3 attempts)";
        result.latency_s = seconds_since(start);
        return result;
    }

  private:
    EndpointConfig config_;
    std::string host_;         // scheme://host:port
    std::string path_prefix_;  // leading path from base_url, possibly empty
};

std::string violations_as_array(const ViolationSet& v) {
    json arr = json::array();
    for (const auto& name : v.names) arr.push_back(name);
    return arr.dump();
}

class OracleEndpoint final : public Endpoint {
  public:
    explicit OracleEndpoint(std::map<std::string, ViolationSet> truth)
        : truth_(std::move(truth)) {}

    QueryResult query(const std::string& instance_id, int, const std::string&) override {
        QueryResult result;
        auto it = truth_.find(instance_id);
        if (it == truth_.end()) {
            result.failure = FailureKind::transport;
            result.error_detail = "oracle has no ground truth for '" + instance_id + "'";
            return result;
        }
        result.text = violations_as_array(it->second);
        return result;
    }

  private:
    const std::map<std::string, ViolationSet> truth_;
};

class EmptyEndpoint final : public Endpoint {
  public:
    QueryResult query(const std::string&, int, const std::string&) override {
        QueryResult result;
        result.text = "[]";
        return result;
    }
};

// Oracle that garbles its answer with probability p: either prose around the
// array, a bogus rule name, or a dropped bracket. Deterministic per
// (seed, instance, repetition).
class NoisyEndpoint final : public Endpoint {
  public:
    NoisyEndpoint(std::map<std::string, ViolationSet> truth, double p, std::uint64_t seed)
        : oracle_(std::move(truth)), p_(p), seed_(seed) {}

    QueryResult query(const std::string& instance_id, int repetition,
                      const std::string& prompt) override {
        QueryResult result = oracle_.query(instance_id, repetition, prompt);
        if (!result.text) return result;

        const std::uint64_t h =
            splitmix64(splitmix64(seed_ ^ fnv1a64(instance_id)) + static_cast<std::uint64_t>(repetition));
        const double draw = static_cast<double>(h >> 11) * 0x1.0p-53;
        if (draw >= p_) return result;

        switch (h % 3) {
            case 0:  // prose, nothing parseable
                result.text =
                    "The chart looks mostly fine to me, though the axes could use work.";
                break;
            case 1:  // adherent but wrong
                result.text = "[]";
                break;
            default:  // truncated mid-array
                result.text = result.text->substr(0, result.text->size() / 2);
                break;
        }
        return result;
    }

  private:
    OracleEndpoint oracle_;
    const double p_;
    const std::uint64_t seed_;
};

}  // namespace

std::unique_ptr<Endpoint> make_http_endpoint(const EndpointConfig& config) {
    return std::make_unique<HttpEndpoint>(config);
}

std::unique_ptr<Endpoint> make_oracle_endpoint(std::map<std::string, ViolationSet> truth) {
    return std::make_unique<OracleEndpoint>(std::move(truth));
}

std::unique_ptr<Endpoint> make_empty_endpoint() {
    return std::make_unique<EmptyEndpoint>();
}

std::unique_ptr<Endpoint> make_noisy_endpoint(std::map<std::string, ViolationSet> truth,
                                              double p, std::uint64_t seed) {
    return std::make_unique<NoisyEndpoint>(std::move(truth), p, seed);
}

}  // namespace chartlint
