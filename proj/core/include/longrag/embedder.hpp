#pragma once

#include <atomic>
#include <chrono>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "longrag/retry.hpp"
#include "longrag/tokenizer.hpp"

namespace longrag {

using EmbeddingVector = std::vector<float>;

/// Maps texts to fixed-dimension vectors. Implementations must be safe to
/// call from several threads at once.
class Embedder {
public:
    virtual ~Embedder() = default;

    virtual std::size_t dimension() const = 0;
    /// Largest batch accepted by embed_batch().
    virtual std::size_t max_batch() const = 0;
    /// Stable description recorded in index provenance.
    virtual std::string identifier() const = 0;

    /// Embeds at most max_batch() texts. Returns one vector per text.
    virtual std::vector<EmbeddingVector> embed_batch(std::span<const std::string> texts) = 0;
};

/// Splits `texts` into max_batch()-sized batches, runs up to `concurrency`
/// batches at a time and returns vectors in input order.
///
/// Throws DimensionMismatch when a vector's length differs from the
/// embedder's dimension, LengthMismatch when a batch returns the wrong number
/// of vectors, and a data error on non-finite values.
std::vector<EmbeddingVector> embed_texts(std::span<const std::string> texts, Embedder& embedder,
                                         std::size_t concurrency = 1);

/// Throws a data error ("NonFiniteValue") if any entry is NaN or infinite.
void require_finite(std::span<const float> values);

/// Deterministic bag-of-words embedder for tests and offline runs.
///
/// Each token (unicode-word, lowercased) is hashed with the seed into one of
/// `dim` buckets with a pseudo-random sign; the count vector is scaled to unit
/// length. Texts without tokens map to the zero vector.
class HashEmbedder final : public Embedder {
public:
    explicit HashEmbedder(std::size_t dim = 256, std::uint64_t seed = 0, std::size_t max_batch = 64);

    std::size_t dimension() const override { return dim_; }
    std::size_t max_batch() const override { return max_batch_; }
    std::string identifier() const override;
    std::vector<EmbeddingVector> embed_batch(std::span<const std::string> texts) override;

    EmbeddingVector embed_one(std::string_view text) const;

private:
    std::size_t dim_;
    std::uint64_t seed_;
    std::size_t max_batch_;
    TokenizerConfig tokenizer_{TokenScheme::UnicodeWord, Normalization::Lowercase};
};

struct HttpEmbedderConfig {
    std::string url;  ///< full endpoint URL, e.g. http://localhost:8080/embed
    /// Expected dimension; 0 accepts whatever the first response reports.
    std::size_t dim = 0;
    std::size_t batch_size = 32;
    std::chrono::milliseconds timeout{30000};
    RetryPolicy retry;
    /// Environment variable holding a bearer token, if any.
    std::string api_key_env = "LONGRAG_EMBEDDER_API_KEY";
};

/// Client for the embedding service:
///   POST {"texts": [...]}  ->  {"vectors": [[...], ...], "dim": N}
/// Transport failures are retried with backoff; a non-200 status raises
/// RemoteError.
class HttpEmbedder final : public Embedder {
public:
    explicit HttpEmbedder(HttpEmbedderConfig cfg, Sleeper sleeper = sleep_for);

    std::size_t dimension() const override;
    std::size_t max_batch() const override { return cfg_.batch_size; }
    std::string identifier() const override { return "http:" + cfg_.url; }
    std::vector<EmbeddingVector> embed_batch(std::span<const std::string> texts) override {
        return request(texts);
    }

private:
    std::vector<EmbeddingVector> request(std::span<const std::string> texts) const;

    HttpEmbedderConfig cfg_;
    Sleeper sleeper_;
    mutable std::atomic<std::size_t> learned_dim_{0};
};

}  // namespace longrag
