#pragma once

#include <atomic>
#include <chrono>
#include <cstddef>
#include <filesystem>
#include <map>
#include <mutex>
#include <string>
#include <string_view>
#include <vector>

namespace longrag {

struct ChatMessage {
    std::string role;
    std::string content;
};

/// One independent conversation sent to the model.
struct ChatRequest {
    std::vector<ChatMessage> messages;

    static ChatRequest user(std::string content) { return {{{"user", std::move(content)}}}; }
};

/// A chat-completion endpoint. complete() returns the raw assistant text and
/// throws TransportError (retryable) or RemoteError. Implementations must be
/// safe to share between threads.
class ChatClient {
public:
    virtual ~ChatClient() = default;
    virtual std::string complete(const ChatRequest& request) = 0;
};

enum class ResponseFormat {
    Content,  ///< {"content": "..."}
    OpenAI,   ///< {"choices": [{"message": {"content": "..."}}]}
};

/// Accepts "content" and "openai"; throws ConfigError.
ResponseFormat parse_response_format(std::string_view name);

struct HttpChatConfig {
    std::string url;
    std::string model;
    double temperature = 0.0;
    std::chrono::milliseconds timeout{120000};
    ResponseFormat response_format = ResponseFormat::Content;
    std::map<std::string, std::string> headers;
    /// Environment variable holding a bearer token, if any.
    std::string api_key_env = "LONGRAG_READER_API_KEY";
};

/// POSTs {"model", "messages", "temperature"} and extracts the completion
/// according to `response_format`. Non-200 statuses raise RemoteError.
class HttpChatClient final : public ChatClient {
public:
    explicit HttpChatClient(HttpChatConfig cfg);
    std::string complete(const ChatRequest& request) override;

    /// Request body for `request`; exposed for wire-format tests.
    std::string request_body(const ChatRequest& request) const;

private:
    HttpChatConfig cfg_;
};

/// Test double that replays scripted responses.
///
/// Each entry has an optional `match` string and a queue of responses. A call
/// consumes the next response of the first entry whose `match` occurs in the
/// last message (entries with an empty match accept any prompt). A response
/// may be a string or {"error": "transport"|"remote", "status": N} to inject a
/// failure.
class ScriptedChatClient final : public ChatClient {
public:
    struct Response {
        std::string text;
        enum class Kind { Text, TransportFailure, RemoteFailure } kind = Kind::Text;
        int status = 500;
    };
    struct Entry {
        std::string match;
        std::vector<Response> responses;
    };

    explicit ScriptedChatClient(std::vector<Entry> entries);
    /// A single catch-all entry replaying `texts` in order.
    static ScriptedChatClient sequence(std::vector<std::string> texts);
    /// Loads entries from JSON lines: {"match": "...", "responses": [...]}.
    static ScriptedChatClient from_file(const std::filesystem::path& path);

    std::string complete(const ChatRequest& request) override;

    std::size_t call_count() const noexcept { return calls_.load(); }
    std::vector<ChatRequest> requests() const;

    ScriptedChatClient(ScriptedChatClient&& other) noexcept;

private:
    std::vector<Entry> entries_;
    std::vector<std::size_t> cursor_;
    std::vector<ChatRequest> log_;
    std::atomic<std::size_t> calls_{0};
    mutable std::mutex mu_;
};

}  // namespace longrag
