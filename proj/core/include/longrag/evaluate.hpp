#pragma once

#include <cstddef>
#include <filesystem>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "longrag/corpus.hpp"
#include "longrag/grouper.hpp"
#include "longrag/metrics.hpp"
#include "longrag/retriever.hpp"

namespace longrag {

struct EvalCase {
    std::string id;
    std::string question;
    std::vector<std::string> answers;  ///< non-empty
    std::vector<DocId> gold_doc_ids;
    std::optional<std::string> type;  ///< e.g. "bridge", "comparison", "yes-no"
};

/// Cases file: JSON lines with `id`, `question`, `answers`, optional
/// `gold_doc_ids` and `type`. Throws ParseError, DuplicateId.
std::vector<EvalCase> parse_cases(std::string_view bytes, std::string_view source = "<memory>");
std::vector<EvalCase> load_cases(const std::filesystem::path& path);

/// Ranked retrieval output for one case.
struct RetrievalRecord {
    std::string case_id;
    std::vector<UnitId> ranked_units;
};

/// Final prediction for one case (empty when the reader failed).
struct ReaderRecord {
    std::string case_id;
    std::string prediction;
};

struct Rate {
    std::size_t hits = 0;
    std::size_t denominator = 0;
    /// hits / denominator; nullopt when nothing was counted.
    std::optional<double> value() const;
};

struct Mean {
    double sum = 0.0;
    std::size_t denominator = 0;
    std::optional<double> value() const;
};

struct RecallAtK {
    std::size_t k = 0;
    Rate answer_recall;
    Rate doc_recall;
};

struct CaseMetrics {
    std::string id;
    /// 1-based rank of the first unit containing an answer (nullopt: none,
    /// or the case is excluded from answer recall).
    std::optional<std::size_t> answer_rank;
    bool answer_recall_counted = false;
    /// Smallest k whose top-k units cover every gold document.
    std::optional<std::size_t> doc_rank;
    std::optional<std::string> prediction;
    std::optional<bool> em;
    std::optional<bool> refined_em;
    std::optional<double> f1;
};

struct MetricsReport {
    std::size_t cases = 0;
    std::vector<RecallAtK> retrieval;  ///< one row per evaluated k
    std::optional<Rate> exact_match;
    std::optional<Rate> refined_exact_match;
    std::optional<Mean> f1;
    std::vector<CaseMetrics> per_case;
};

struct EvalOptions {
    /// Cut-offs for AR@k / R@k. Empty means 1..(longest ranked list).
    std::vector<std::size_t> ks;
    /// When any case carries a type, cases of these types are left out of
    /// answer recall.
    std::vector<std::string> non_span_types = {"comparison", "yes-no", "yes/no", "yesno"};
    AnswerNormalizer normalizer;
};

/// Resolves unit ids to membership and text for retrieval metrics.
struct UnitResolver {
    const UnitCatalog& units;
    std::function<std::string(const RetrievalUnit&)> text_of;
};

/// Computes every metric the inputs allow: retrieval metrics when
/// `retrievals` is given (needs `resolver`), QA metrics when `readings` is.
///
/// Throws AlignmentError on an empty case list, duplicate ids, records for
/// unknown cases, or cases missing from a supplied record set.
MetricsReport evaluate_run(std::span<const EvalCase> cases,
                           std::optional<std::span<const RetrievalRecord>> retrievals,
                           std::optional<std::span<const ReaderRecord>> readings,
                           const UnitResolver* resolver, const EvalOptions& options = {});

/// Report JSON: aggregates with denominators, plus per-case rows when
/// `per_case` is set. Deterministic byte output.
std::string report_to_json(const MetricsReport& report, bool per_case = true);

/// Flat TSV header for sweep tables.
std::string report_tsv_header();
/// One TSV row per retrieval cut-off (or a single row without retrieval),
/// each prefixed with `label`.
std::string report_to_tsv_rows(const MetricsReport& report, std::string_view label);

}  // namespace longrag
