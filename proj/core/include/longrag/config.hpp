#pragma once

#include <chrono>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "longrag/chat_client.hpp"
#include "longrag/grouper.hpp"
#include "longrag/metrics.hpp"
#include "longrag/retry.hpp"
#include "longrag/tokenizer.hpp"

namespace longrag {

enum class EmbedderKind { Mock, Http };
enum class ReaderKind { None, Http, Scripted };

struct EmbedderSettings {
    EmbedderKind kind = EmbedderKind::Mock;
    std::size_t dim = 256;
    std::size_t batch_size = 64;
    std::string url;
    std::chrono::milliseconds timeout{30000};
    RetryPolicy retry;
    std::string api_key_env = "LONGRAG_EMBEDDER_API_KEY";
    /// Batches embedded concurrently during indexing.
    std::size_t concurrency = 1;
    /// Offline embeddings in index-file format; skips the embedder for chunks.
    std::optional<std::filesystem::path> precomputed_vectors;
};

struct ReaderSettings {
    ReaderKind kind = ReaderKind::None;
    std::string url;
    std::string model;
    double temperature = 0.0;
    ResponseFormat response_format = ResponseFormat::Content;
    std::map<std::string, std::string> headers;
    std::string api_key_env = "LONGRAG_READER_API_KEY";
    std::chrono::milliseconds timeout{120000};
    RetryPolicy retry;
    std::size_t short_context_threshold = 1000;
    std::optional<std::filesystem::path> exemplars;
    std::optional<std::size_t> exemplar_count;
    std::optional<std::filesystem::path> script;
    std::size_t max_in_flight = 4;
};

struct SweepGrid {
    std::vector<GroupingMode> modes;
    std::vector<std::optional<std::int64_t>> chunk_sizes;  ///< nullopt = whole document
    std::vector<std::size_t> ks;
    std::vector<std::optional<std::size_t>> budgets;  ///< nullopt = unbounded
};

/// Everything a pipeline run needs. Relative paths in a config file resolve
/// against the file's directory.
struct PipelineConfig {
    std::filesystem::path corpus;
    TokenizerConfig tokenizer;
    GroupingConfig grouping;
    std::optional<std::int64_t> chunk_size = 512;
    EmbedderSettings embedder;
    std::size_t k = 8;
    std::optional<std::size_t> budget_tokens = 30000;
    ReaderSettings reader;
    std::filesystem::path cases;
    std::vector<std::size_t> eval_ks;
    AnswerNormalizer answer_normalizer;
    std::filesystem::path out_dir = "out";
    std::optional<std::filesystem::path> units_path;
    std::optional<std::filesystem::path> index_path;
    std::size_t workers = 4;
    std::uint64_t seed = 0;
    SweepGrid sweep;

    std::filesystem::path units_file() const { return units_path.value_or(out_dir / "units.jsonl"); }
    std::filesystem::path index_file() const { return index_path.value_or(out_dir / "index.lrix"); }
    std::filesystem::path stats_file() const { return out_dir / "corpus_stats.json"; }
    std::filesystem::path retrieval_file() const { return out_dir / "retrieval.jsonl"; }
    std::filesystem::path answers_file() const { return out_dir / "answers.jsonl"; }
    std::filesystem::path report_json_file() const { return out_dir / "report.json"; }
    std::filesystem::path report_tsv_file() const { return out_dir / "report.tsv"; }

    /// Throws ConfigError on out-of-range values (k = 0, non-positive sizes).
    void validate() const;
};

/// Parses a JSON config document. Unknown keys raise ConfigError.
PipelineConfig parse_config(std::string_view json_text, const std::filesystem::path& base_dir = ".");
PipelineConfig load_config(const std::filesystem::path& path);

}  // namespace longrag
