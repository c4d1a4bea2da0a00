#include "http_transport.hpp"

#include <cstdlib>

#include <httplib.h>

#include "longrag/errors.hpp"

namespace longrag::detail {

namespace {

struct SplitUrl {
    std::string origin;  // scheme://host[:port]
    std::string path;
};

SplitUrl split_url(const std::string& url) {
    const auto scheme_end = url.find("://");
    if (scheme_end == std::string::npos) throw ConfigError("endpoint URL has no scheme: " + url);
    const std::string scheme = url.substr(0, scheme_end);
    if (scheme != "http" && scheme != "https")
        throw ConfigError("unsupported URL scheme: " + scheme);
    const auto path_start = url.find('/', scheme_end + 3);
    if (path_start == std::string::npos) return {url, "/"};
    return {url.substr(0, path_start), url.substr(path_start)};
}

}  // namespace

HttpResponse post_json(const std::string& url, const std::string& body, const HeaderList& headers,
                       std::chrono::milliseconds timeout) {
    const auto parts = split_url(url);
    httplib::Client client(parts.origin);
    if (!client.is_valid()) throw ConfigError("cannot create HTTP client for " + parts.origin);
    const auto secs = std::chrono::duration_cast<std::chrono::seconds>(timeout);
    const auto usecs = std::chrono::duration_cast<std::chrono::microseconds>(timeout - secs);
    client.set_connection_timeout(secs.count(), usecs.count());
    client.set_read_timeout(secs.count(), usecs.count());
    client.set_write_timeout(secs.count(), usecs.count());

    httplib::Headers hdrs;
    for (const auto& [k, v] : headers) hdrs.emplace(k, v);
    auto res = client.Post(parts.path, hdrs, body, "application/json");
    if (!res) throw TransportError("POST " + url + " failed: " + httplib::to_string(res.error()));
    return {res->status, res->body};
}

void add_bearer_from_env(HeaderList& headers, const std::string& env_var) {
    if (env_var.empty()) return;
    if (const char* value = std::getenv(env_var.c_str()); value != nullptr && *value != '\0')
        headers.emplace_back("Authorization", std::string("Bearer ") + value);
}

}  // namespace longrag::detail
