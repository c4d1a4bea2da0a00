#include <atomic>
#include <cmath>
#include <cstdlib>

#include <gtest/gtest.h>
#include <json.hpp>

#include "local_server.hpp"
#include "longrag/embedder.hpp"
#include "longrag/errors.hpp"

using namespace longrag;
using nlohmann::json;

namespace {

double norm(const EmbeddingVector& v) {
    double s = 0.0;
    for (float x : v) s += static_cast<double>(x) * x;
    return std::sqrt(s);
}

// Serves {"vectors": [[len, 1, 0], ...]} for each posted text.
void serve_lengths(testutil::LocalServer& srv, std::atomic<int>& requests, std::size_t dim = 3) {
    srv.server().Post("/embed", [&requests, dim](const httplib::Request& req, httplib::Response& res) {
        ++requests;
        const auto body = json::parse(req.body);
        json out;
        out["vectors"] = json::array();
        for (const auto& t : body["texts"]) {
            std::vector<float> v(dim, 0.0f);
            v[0] = static_cast<float>(t.get<std::string>().size());
            if (dim > 1) v[1] = 1.0f;
            out["vectors"].push_back(v);
        }
        out["dim"] = dim;
        res.set_content(out.dump(), "application/json");
    });
}

HttpEmbedderConfig fast_config(std::string url) {
    HttpEmbedderConfig cfg;
    cfg.url = std::move(url);
    cfg.timeout = std::chrono::milliseconds(2000);
    cfg.retry.initial_backoff = std::chrono::milliseconds(1);
    return cfg;
}

}  // namespace

TEST(HashEmbedder, Deterministic) {
    HashEmbedder e(64, 3);
    EXPECT_EQ(e.embed_one("abc"), e.embed_one("abc"));
    EXPECT_EQ(HashEmbedder(64, 3).embed_one("abc def"), e.embed_one("abc def"));
    EXPECT_NE(HashEmbedder(64, 4).embed_one("abc def"), e.embed_one("abc def"));
}

TEST(HashEmbedder, UnitNormAndCaseInsensitive) {
    HashEmbedder e(32);
    const auto v = e.embed_one("Port Calder harbour");
    EXPECT_EQ(v.size(), 32u);
    EXPECT_NEAR(norm(v), 1.0, 1e-6);
    EXPECT_EQ(v, e.embed_one("port calder, HARBOUR"));
    EXPECT_EQ(norm(e.embed_one("")), 0.0);
}

TEST(HashEmbedder, RejectsZeroDimension) {
    EXPECT_THROW(HashEmbedder(0), ConfigError);
}

TEST(EmbedTexts, ShapeContract) {
    HashEmbedder e(16, 0, 2);
    const std::vector<std::string> texts = {"one", "two", "three", "four", "five"};
    const auto out = embed_texts(texts, e, 3);
    ASSERT_EQ(out.size(), 5u);
    for (std::size_t i = 0; i < texts.size(); ++i) EXPECT_EQ(out[i], e.embed_one(texts[i]));
    EXPECT_TRUE(embed_texts({}, e).empty());
}

TEST(EmbedTexts, RejectsNonFinite) {
    std::vector<float> bad = {1.0f, std::nanf("")};
    EXPECT_THROW(require_finite(bad), Error);
}

TEST(HttpEmbedder, BatchesAndPreservesOrder) {
    testutil::LocalServer srv;
    std::atomic<int> requests{0};
    serve_lengths(srv, requests);
    srv.start();

    auto cfg = fast_config(srv.url("/embed"));
    cfg.batch_size = 2;
    cfg.dim = 3;
    HttpEmbedder e(cfg);
    const std::vector<std::string> texts = {"a", "bb", "ccc", "dddd", "eeeee"};
    const auto out = embed_texts(texts, e, 2);
    ASSERT_EQ(out.size(), 5u);
    for (std::size_t i = 0; i < texts.size(); ++i) EXPECT_EQ(out[i][0], static_cast<float>(i + 1));
    EXPECT_EQ(requests.load(), 3);
}

TEST(HttpEmbedder, LearnsDimension) {
    testutil::LocalServer srv;
    std::atomic<int> requests{0};
    serve_lengths(srv, requests, 5);
    srv.start();
    HttpEmbedder e(fast_config(srv.url("/embed")));
    EXPECT_EQ(e.dimension(), 5u);
}

TEST(HttpEmbedder, DimensionMismatch) {
    testutil::LocalServer srv;
    std::atomic<int> requests{0};
    serve_lengths(srv, requests, 4);
    srv.start();
    auto cfg = fast_config(srv.url("/embed"));
    cfg.dim = 3;
    HttpEmbedder e(cfg);
    const std::vector<std::string> texts = {"x"};
    EXPECT_THROW(embed_texts(texts, e), DimensionMismatch);
}

TEST(HttpEmbedder, RemoteErrorPassesStatus) {
    testutil::LocalServer srv;
    srv.server().Post("/embed", [](const httplib::Request&, httplib::Response& res) {
        res.status = 503;
        res.set_content("overloaded", "text/plain");
    });
    srv.start();
    auto cfg = fast_config(srv.url("/embed"));
    cfg.dim = 3;
    HttpEmbedder e(cfg);
    const std::vector<std::string> texts = {"x"};
    try {
        e.embed_batch(texts);
        FAIL() << "expected RemoteError";
    } catch (const RemoteError& err) {
        EXPECT_EQ(err.status(), 503);
        EXPECT_NE(std::string(err.what()).find("overloaded"), std::string::npos);
    }
}

TEST(HttpEmbedder, TransportFailureRetriedWithBackoff) {
    std::vector<std::chrono::milliseconds> waits;
    auto cfg = fast_config("http://127.0.0.1:9/embed");
    cfg.dim = 3;
    cfg.timeout = std::chrono::milliseconds(200);
    cfg.retry.max_retries = 2;
    cfg.retry.initial_backoff = std::chrono::milliseconds(10);
    HttpEmbedder e(cfg, [&](std::chrono::milliseconds d) { waits.push_back(d); });
    const std::vector<std::string> texts = {"x"};
    EXPECT_THROW(e.embed_batch(texts), TransportError);
    EXPECT_EQ(waits, (std::vector<std::chrono::milliseconds>{std::chrono::milliseconds(10),
                                                             std::chrono::milliseconds(20)}));
}

TEST(HttpEmbedder, SendsBearerFromEnvironment) {
    testutil::LocalServer srv;
    std::string auth;
    srv.server().Post("/embed", [&](const httplib::Request& req, httplib::Response& res) {
        auth = req.get_header_value("Authorization");
        res.set_content(R"({"vectors":[[1,0]]})", "application/json");
    });
    srv.start();
    ::setenv("LONGRAG_TEST_EMBED_KEY", "sekret", 1);
    auto cfg = fast_config(srv.url("/embed"));
    cfg.api_key_env = "LONGRAG_TEST_EMBED_KEY";
    HttpEmbedder e(cfg);
    const std::vector<std::string> texts = {"x"};
    e.embed_batch(texts);
    EXPECT_EQ(auth, "Bearer sekret");
    ::unsetenv("LONGRAG_TEST_EMBED_KEY");
}
