#include "longrag/chat_client.hpp"

#include <json.hpp>

#include "http_transport.hpp"
#include "jsonl.hpp"
#include "longrag/errors.hpp"

namespace longrag {

using nlohmann::json;

ResponseFormat parse_response_format(std::string_view name) {
    if (name == "content") return ResponseFormat::Content;
    if (name == "openai") return ResponseFormat::OpenAI;
    throw ConfigError("unknown chat response format: " + std::string(name));
}

HttpChatClient::HttpChatClient(HttpChatConfig cfg) : cfg_(std::move(cfg)) {
    if (cfg_.url.empty()) throw ConfigError("reader URL is empty");
}

std::string HttpChatClient::request_body(const ChatRequest& request) const {
    json body;
    body["model"] = cfg_.model;
    body["messages"] = json::array();
    for (const auto& m : request.messages) body["messages"].push_back({{"role", m.role}, {"content", m.content}});
    body["temperature"] = cfg_.temperature;
    return body.dump();
}

std::string HttpChatClient::complete(const ChatRequest& request) {
    detail::HeaderList headers(cfg_.headers.begin(), cfg_.headers.end());
    detail::add_bearer_from_env(headers, cfg_.api_key_env);
    const auto response = detail::post_json(cfg_.url, request_body(request), headers, cfg_.timeout);
    if (response.status != 200) throw RemoteError(response.status, response.body);

    json parsed;
    try {
        parsed = json::parse(response.body);
    } catch (const json::parse_error& e) {
        throw RemoteError(response.status, std::string("unparseable chat response: ") + e.what());
    }
    const json* content = nullptr;
    if (cfg_.response_format == ResponseFormat::Content) {
        if (parsed.is_object() && parsed.contains("content")) content = &parsed["content"];
    } else if (parsed.is_object() && parsed.contains("choices") && parsed["choices"].is_array() &&
               !parsed["choices"].empty()) {
        const auto& choice = parsed["choices"][0];
        if (choice.contains("message") && choice["message"].contains("content"))
            content = &choice["message"]["content"];
    }
    if (content == nullptr) throw RemoteError(response.status, "chat response lacks content");
    if (content->is_null()) return {};
    if (!content->is_string()) throw RemoteError(response.status, "chat content is not a string");
    return content->get<std::string>();
}

ScriptedChatClient::ScriptedChatClient(std::vector<Entry> entries)
        : entries_(std::move(entries)), cursor_(entries_.size(), 0) {}

ScriptedChatClient::ScriptedChatClient(ScriptedChatClient&& other) noexcept
        : entries_(std::move(other.entries_)),
          cursor_(std::move(other.cursor_)),
          log_(std::move(other.log_)),
          calls_(other.calls_.load()) {}

ScriptedChatClient ScriptedChatClient::sequence(std::vector<std::string> texts) {
    Entry entry;
    for (auto& t : texts) entry.responses.push_back({std::move(t)});
    return ScriptedChatClient({std::move(entry)});
}

ScriptedChatClient ScriptedChatClient::from_file(const std::filesystem::path& path) {
    const auto source = path.string();
    std::vector<Entry> entries;
    detail::for_each_jsonl(detail::read_file(path), source, [&](const json& obj, std::size_t line) {
        Entry entry;
        if (auto m = obj.find("match"); m != obj.end()) {
            if (!m->is_string()) throw ParseError(source, line, "\"match\" must be a string");
            entry.match = m->get<std::string>();
        }
        auto rs = obj.find("responses");
        if (rs == obj.end() || !rs->is_array()) throw ParseError(source, line, "\"responses\" must be an array");
        for (const auto& r : *rs) {
            Response resp;
            if (r.is_string()) {
                resp.text = r.get<std::string>();
            } else if (r.is_object() && r.contains("error")) {
                const auto kind = r["error"].get<std::string>();
                if (kind == "transport") {
                    resp.kind = Response::Kind::TransportFailure;
                } else if (kind == "remote") {
                    resp.kind = Response::Kind::RemoteFailure;
                    resp.status = r.value("status", 500);
                } else {
                    throw ParseError(source, line, "unknown scripted error: " + kind);
                }
            } else {
                throw ParseError(source, line, "responses must be strings or error objects");
            }
            entry.responses.push_back(std::move(resp));
        }
        entries.push_back(std::move(entry));
    });
    return ScriptedChatClient(std::move(entries));
}

std::string ScriptedChatClient::complete(const ChatRequest& request) {
    ++calls_;
    const std::string prompt = request.messages.empty() ? std::string() : request.messages.back().content;
    Response picked;
    {
        std::lock_guard lock(mu_);
        log_.push_back(request);
        std::size_t chosen = entries_.size();
        for (std::size_t i = 0; i < entries_.size() && chosen == entries_.size(); ++i) {
            if (cursor_[i] < entries_[i].responses.size() && !entries_[i].match.empty() &&
                prompt.find(entries_[i].match) != std::string::npos)
                chosen = i;
        }
        for (std::size_t i = 0; i < entries_.size() && chosen == entries_.size(); ++i) {
            if (cursor_[i] < entries_[i].responses.size() && entries_[i].match.empty()) chosen = i;
        }
        if (chosen == entries_.size()) throw RemoteError(404, "no scripted response left for prompt");
        picked = entries_[chosen].responses[cursor_[chosen]++];
    }
    switch (picked.kind) {
        case Response::Kind::TransportFailure:
            throw TransportError("scripted transport failure");
        case Response::Kind::RemoteFailure:
            throw RemoteError(picked.status, "scripted remote failure");
        case Response::Kind::Text:
            break;
    }
    return picked.text;
}

std::vector<ChatRequest> ScriptedChatClient::requests() const {
    std::lock_guard lock(mu_);
    return log_;
}

}  // namespace longrag
