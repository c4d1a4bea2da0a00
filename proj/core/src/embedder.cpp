#include "longrag/embedder.hpp"

#include <cmath>

#include <json.hpp>

#include "http_transport.hpp"
#include "longrag/errors.hpp"
#include "longrag/parallel.hpp"

namespace longrag {

void require_finite(std::span<const float> values) {
    for (float v : values) {
        if (!std::isfinite(v))
            throw Error(ErrorKind::Data, "NonFiniteValue", "embedding contains NaN or Inf");
    }
}

std::vector<EmbeddingVector> embed_texts(std::span<const std::string> texts, Embedder& embedder,
                                         std::size_t concurrency) {
    std::vector<EmbeddingVector> out(texts.size());
    if (texts.empty()) return out;
    const std::size_t batch = std::max<std::size_t>(embedder.max_batch(), 1);
    const std::size_t num_batches = (texts.size() + batch - 1) / batch;
    const std::size_t dim = embedder.dimension();

    parallel_for(num_batches, concurrency, [&](std::size_t b) {
        const std::size_t begin = b * batch;
        const std::size_t count = std::min(batch, texts.size() - begin);
        auto vectors = embedder.embed_batch(texts.subspan(begin, count));
        if (vectors.size() != count) throw LengthMismatch(count, vectors.size());
        for (std::size_t i = 0; i < count; ++i) {
            if (vectors[i].size() != dim) throw DimensionMismatch(dim, vectors[i].size());
            require_finite(vectors[i]);
            out[begin + i] = std::move(vectors[i]);
        }
    });
    return out;
}

namespace {

// FNV-1a, seeded through the offset basis so different seeds give unrelated
// bucket assignments.
std::uint64_t fnv1a(std::string_view s, std::uint64_t seed) {
    std::uint64_t h = 14695981039346656037ull ^ (seed * 0x9E3779B97F4A7C15ull);
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

}  // namespace

HashEmbedder::HashEmbedder(std::size_t dim, std::uint64_t seed, std::size_t max_batch)
        : dim_(dim), seed_(seed), max_batch_(max_batch) {
    if (dim_ == 0) throw ConfigError("embedding dimension must be positive");
    if (max_batch_ == 0) throw ConfigError("embedder batch size must be positive");
}

std::string HashEmbedder::identifier() const {
    return "hash:dim=" + std::to_string(dim_) + ",seed=" + std::to_string(seed_);
}

EmbeddingVector HashEmbedder::embed_one(std::string_view text) const {
    std::vector<double> acc(dim_, 0.0);
    for (const auto& tok : tokenize(text, tokenizer_)) {
        const std::uint64_t h = fnv1a(tok, seed_);
        const double sign = (h >> 63) != 0 ? -1.0 : 1.0;
        acc[h % dim_] += sign;
    }
    double norm = 0.0;
    for (double v : acc) norm += v * v;
    norm = std::sqrt(norm);
    EmbeddingVector out(dim_, 0.0f);
    if (norm > 0.0) {
        for (std::size_t i = 0; i < dim_; ++i) out[i] = static_cast<float>(acc[i] / norm);
    }
    return out;
}

std::vector<EmbeddingVector> HashEmbedder::embed_batch(std::span<const std::string> texts) {
    std::vector<EmbeddingVector> out;
    out.reserve(texts.size());
    for (const auto& t : texts) out.push_back(embed_one(t));
    return out;
}

HttpEmbedder::HttpEmbedder(HttpEmbedderConfig cfg, Sleeper sleeper)
        : cfg_(std::move(cfg)), sleeper_(std::move(sleeper)), learned_dim_(cfg_.dim) {
    if (cfg_.url.empty()) throw ConfigError("embedder URL is empty");
    if (cfg_.batch_size == 0) throw ConfigError("embedder batch size must be positive");
}

std::size_t HttpEmbedder::dimension() const {
    if (learned_dim_.load() == 0) {
        // Unconfigured dimension: learn it from a one-text probe request.
        const std::string probe[] = {"dimension probe"};
        request(probe);
    }
    return learned_dim_.load();
}

std::vector<EmbeddingVector> HttpEmbedder::request(std::span<const std::string> texts) const {
    using nlohmann::json;
    json body;
    body["texts"] = json::array();
    for (const auto& t : texts) body["texts"].push_back(t);
    const std::string payload = body.dump();

    detail::HeaderList headers;
    detail::add_bearer_from_env(headers, cfg_.api_key_env);

    const auto response = with_retry(
            cfg_.retry,
            [&] { return detail::post_json(cfg_.url, payload, headers, cfg_.timeout); }, sleeper_);
    if (response.status != 200) throw RemoteError(response.status, response.body);

    json parsed;
    try {
        parsed = json::parse(response.body);
    } catch (const json::parse_error& e) {
        throw RemoteError(response.status, std::string("unparseable embedder response: ") + e.what());
    }
    if (!parsed.is_object() || !parsed.contains("vectors") || !parsed["vectors"].is_array())
        throw RemoteError(response.status, "embedder response lacks \"vectors\"");

    std::vector<EmbeddingVector> out;
    out.reserve(parsed["vectors"].size());
    for (const auto& row : parsed["vectors"]) {
        if (!row.is_array()) throw RemoteError(response.status, "embedder vector is not an array");
        EmbeddingVector v;
        v.reserve(row.size());
        for (const auto& x : row) {
            if (!x.is_number()) throw RemoteError(response.status, "embedder vector has a non-number");
            v.push_back(x.get<float>());
        }
        out.push_back(std::move(v));
    }
    if (out.size() != texts.size()) throw LengthMismatch(texts.size(), out.size());

    std::size_t reported = out.empty() ? 0 : out.front().size();
    if (auto it = parsed.find("dim"); it != parsed.end() && it->is_number_unsigned())
        reported = it->get<std::size_t>();
    for (const auto& v : out) {
        if (v.size() != reported) throw DimensionMismatch(reported, v.size());
    }
    std::size_t expected = 0;
    if (!learned_dim_.compare_exchange_strong(expected, reported) && expected != reported)
        throw DimensionMismatch(expected, reported);
    return out;
}

}  // namespace longrag
