#pragma once

// Chat-completion transport over HTTP(S). Kept apart from asset_clone.hpp so
// that only code talking to a real endpoint pulls in cpp-httplib.

#ifndef CPPHTTPLIB_OPENSSL_SUPPORT
#define CPPHTTPLIB_OPENSSL_SUPPORT
#endif
#include <httplib.h>

#include "clonescope/asset_clone.hpp"

#include <nlohmann/json.hpp>

#include <regex>
#include <string>

namespace clonescope {

/**
 * POSTs an OpenAI-style chat completion request and returns the first
 * choice's message content. `endpoint` is a full URL such as
 * https://api.example.com/v1/chat/completions.
 */
class HttpChatTransport final : public LlmTransport {
public:
    explicit HttpChatTransport(const BackendConfig& cfg, int timeout_seconds = 120)
        : key_(cfg.api_key.value_or("")), model_(cfg.model_name.value_or("gpt-4o")), timeout_(timeout_seconds) {
        static const std::regex url(R"(^(https?://[^/]+)(/.*)?$)");
        std::smatch m;
        const auto endpoint = cfg.endpoint.value_or("");
        if (!std::regex_match(endpoint, m, url)) {
            throw Error(ErrorKind::InvalidArgument, "LLM endpoint is not an http(s) URL: " + endpoint);
        }
        host_ = m[1].str();
        path_ = m[2].matched ? m[2].str() : "/v1/chat/completions";
    }

    std::string complete(const std::string& prompt) override {
        httplib::Client cli(host_);
        cli.set_connection_timeout(timeout_, 0);
        cli.set_read_timeout(timeout_, 0);
        httplib::Headers headers = {{"Authorization", "Bearer " + key_}};
        const nlohmann::json body = {
            {"model", model_},
            {"temperature", 0},
            {"messages", nlohmann::json::array({{{"role", "user"}, {"content", prompt}}})},
        };
        auto res = cli.Post(path_, headers, body.dump(), "application/json");
        if (!res) {
            throw Error(ErrorKind::Backend, "LLM request failed: " + httplib::to_string(res.error()));
        }
        if (res->status == 429 || res->status >= 500) {
            throw Error(ErrorKind::Backend, "LLM endpoint returned HTTP " + std::to_string(res->status));
        }
        if (res->status != 200) {
            // Not retryable: auth or request errors will not fix themselves.
            throw Error(ErrorKind::UnparseableResponse,
                        "LLM endpoint returned HTTP " + std::to_string(res->status) + ": " + res->body);
        }
        auto j = nlohmann::json::parse(res->body, nullptr, false);
        try {
            return j.at("choices").at(0).at("message").at("content").get<std::string>();
        } catch (const nlohmann::json::exception&) {
            throw Error(ErrorKind::UnparseableResponse, "unexpected LLM response body: " + res->body);
        }
    }

private:
    std::string host_;
    std::string path_;
    std::string key_;
    std::string model_;
    int timeout_;
};

} // namespace clonescope
