#pragma once

// Minimal JSON-over-HTTP POST shared by the embedder and chat clients.

#include <chrono>
#include <string>
#include <utility>
#include <vector>

namespace longrag::detail {

struct HttpResponse {
    int status = 0;
    std::string body;
};

using HeaderList = std::vector<std::pair<std::string, std::string>>;

/// POSTs `body` as application/json to an absolute http(s) URL. Throws
/// TransportError when no response is received and ConfigError on a URL that
/// cannot be parsed.
HttpResponse post_json(const std::string& url, const std::string& body, const HeaderList& headers,
                       std::chrono::milliseconds timeout);

/// Adds "Authorization: Bearer <value>" when the environment variable is set.
void add_bearer_from_env(HeaderList& headers, const std::string& env_var);

}  // namespace longrag::detail
