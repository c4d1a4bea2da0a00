#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "longrag/chunk_index.hpp"
#include "longrag/corpus.hpp"
#include "longrag/grouper.hpp"

namespace longrag {

struct ScoredUnit {
    UnitId unit_id;
    double score = 0.0;  ///< best chunk inner product
    std::string best_chunk_id;

    friend bool operator==(const ScoredUnit&, const ScoredUnit&) = default;
};

/// Top-`k` distinct units by MaxP score: a unit scores the maximum inner
/// product over its chunks. Ordered by score descending, then unit id
/// ascending. Ties between chunks of one unit pick the smaller chunk id.
///
/// Throws ConfigError when k == 0 and DimensionMismatch on a bad query.
std::vector<ScoredUnit> retrieve_units(const ChunkIndex& index, std::span<const float> query,
                                       std::size_t k);

/// Read-only lookup of units by id.
class UnitCatalog {
public:
    explicit UnitCatalog(std::span<const RetrievalUnit> units);

    /// Throws NotFound.
    const RetrievalUnit& get(std::string_view unit_id) const;
    bool contains(std::string_view unit_id) const;
    std::span<const RetrievalUnit> units() const noexcept { return units_; }

private:
    std::span<const RetrievalUnit> units_;
    std::unordered_map<std::string_view, std::size_t> by_id_;
};

/// One document (or passage) as shown to the reader.
struct ContextDocument {
    std::string title;
    std::string text;

    friend bool operator==(const ContextDocument&, const ContextDocument&) = default;
};

/// Ordered concatenation of retrieved units.
struct RetrievalContext {
    std::vector<UnitId> unit_ids;
    std::vector<ContextDocument> documents;
    /// Every document rendered as `"Title": <title> "Text": <text>`, one per
    /// line, in unit order.
    std::string text;
    /// Sum of the kept units' token counts.
    std::size_t total_tokens = 0;

    bool empty() const noexcept { return unit_ids.empty(); }
};

/// Renders one document line of a context.
std::string render_document(const ContextDocument& doc);

/// Concatenates the scored units in order. With a budget, whole units are
/// dropped from the tail until total_tokens <= budget; the first unit is
/// always kept. Passage units contribute only their span of text.
RetrievalContext aggregate_context(std::span<const ScoredUnit> scored, const UnitCatalog& units,
                                   const Corpus& corpus,
                                   std::optional<std::size_t> budget_tokens = std::nullopt,
                                   const TokenizerConfig& tokenizer = {});

/// Plain text of a unit (titles and texts of its members, one line each);
/// used for answer-recall checks.
std::string unit_text(const RetrievalUnit& unit, const Corpus& corpus,
                      const TokenizerConfig& tokenizer = {});

}  // namespace longrag
