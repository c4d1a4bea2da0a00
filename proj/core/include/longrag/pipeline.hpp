#pragma once

#include <cstddef>
#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "longrag/chat_client.hpp"
#include "longrag/config.hpp"
#include "longrag/corpus.hpp"
#include "longrag/embedder.hpp"
#include "longrag/evaluate.hpp"
#include "longrag/prompt.hpp"
#include "longrag/reader.hpp"
#include "longrag/retriever.hpp"

namespace longrag {

// Stage commands. Each reads the previous stage's artifacts from the paths in
// the config, writes its own atomically and produces byte-identical output
// for identical inputs.

struct IngestSummary {
    std::size_t documents = 0;
    std::size_t total_tokens = 0;
    LinkReport links;
};

IngestSummary cmd_ingest(const PipelineConfig& cfg);
/// Returns the number of units written.
std::size_t cmd_group(const PipelineConfig& cfg);
/// Returns the number of indexed chunks.
std::size_t cmd_index(const PipelineConfig& cfg);
/// Retrieves for every case in `questions` (defaults to cfg.cases).
std::size_t cmd_retrieve(const PipelineConfig& cfg,
                         const std::optional<std::filesystem::path>& questions = std::nullopt);
std::size_t cmd_answer(const PipelineConfig& cfg);
MetricsReport cmd_eval(const PipelineConfig& cfg);
/// Runs the grid in cfg.sweep; writes one report per grid point under
/// <out>/sweep/ and a combined <out>/sweep.tsv. Returns the grid labels.
std::vector<std::string> cmd_sweep(const PipelineConfig& cfg);

std::unique_ptr<Embedder> make_embedder(const EmbedderSettings& settings, std::uint64_t seed);
std::unique_ptr<ChatClient> make_chat_client(const ReaderSettings& settings);
PromptTemplate make_prompt_template(const ReaderSettings& settings);

/// One line of retrieval.jsonl.
struct RetrievalResult {
    std::string case_id;
    std::string question;
    std::size_t k = 0;
    std::vector<ScoredUnit> units;
    std::vector<UnitId> context_unit_ids;
    std::size_t context_tokens = 0;
};

std::string serialize_retrieval(const RetrievalResult& r);
std::vector<RetrievalResult> load_retrieval(const std::filesystem::path& path);

/// One line of answers.jsonl.
struct AnswerResult {
    std::string case_id;
    std::string mode;  ///< "single-turn" or "two-turn"
    std::string long_answer;
    std::string short_answer;
    std::optional<std::string> error_code;
    std::optional<std::string> error_message;
    std::vector<Exchange> transcripts;
};

std::string serialize_answer(const AnswerResult& a);
std::vector<AnswerResult> load_answers(const std::filesystem::path& path);

}  // namespace longrag
