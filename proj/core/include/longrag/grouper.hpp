#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "longrag/corpus.hpp"
#include "longrag/tokenizer.hpp"

namespace longrag {

using UnitId = std::string;

/// Half-open range of token positions within one document.
struct TokenRange {
    std::size_t begin = 0;
    std::size_t end = 0;

    std::size_t size() const noexcept { return end - begin; }
    friend bool operator==(const TokenRange&, const TokenRange&) = default;
};

/// The atomic item the retriever scores and returns.
///
/// Grouped and whole-document units cover their member documents entirely.
/// Passage units have exactly one member and a `span` selecting a window of
/// that member's tokens.
struct RetrievalUnit {
    UnitId id;
    std::vector<DocId> members;
    std::size_t token_count = 0;
    std::optional<TokenRange> span;

    friend bool operator==(const RetrievalUnit&, const RetrievalUnit&) = default;
};

enum class GroupingMode {
    Group,          ///< hyperlink grouping under a token budget
    WholeDocument,  ///< one unit per document
    Passage,        ///< one unit per fixed-size passage
};

std::string_view to_string(GroupingMode mode) noexcept;
/// Accepts "group", "whole-document" and "passage"; throws ConfigError.
GroupingMode parse_grouping_mode(std::string_view name);

struct GroupingConfig {
    GroupingMode mode = GroupingMode::Group;
    /// Maximum tokens per multi-document group.
    std::int64_t max_tokens = 4000;
    /// Treat a link in either direction as relatedness.
    bool symmetric_links = false;
    /// Window size for passage mode.
    std::int64_t passage_tokens = 100;
    TokenizerConfig tokenizer;
};

/// Canonical unit id for the n-th surviving unit ("u0000000", "u0000001", ...).
UnitId make_unit_id(std::size_t n);

/// Number of related documents per document: resolvable out-links, or the
/// union of in- and out-links when `symmetric` is set. Dangling links are
/// excluded.
std::unordered_map<DocId, std::size_t> compute_degrees(const Corpus& corpus,
                                                       bool symmetric = false);

/// Packs documents into groups by hyperlink relatedness.
///
/// Documents are visited from low to high degree (ties by ascending id). Each
/// document opens a new group, then absorbs the existing groups holding any of
/// its related documents, smallest first (ties by group creation order),
/// while the combined token count stays within `cfg.max_tokens`. Absorbed
/// groups are removed. A document larger than the budget stays a singleton.
///
/// Output order is group creation order; ids are assigned sequentially over
/// the surviving groups. Throws ConfigError if max_tokens <= 0.
std::vector<RetrievalUnit> group_documents(const Corpus& corpus, const GroupingConfig& cfg);

/// One unit per document, in corpus order.
std::vector<RetrievalUnit> units_from_whole_documents(const Corpus& corpus,
                                                      const TokenizerConfig& tokenizer = {});

/// Tiles every document into non-overlapping windows of `passage_tokens`
/// tokens; each window is one unit. Empty documents yield no unit.
std::vector<RetrievalUnit> units_from_passages(const Corpus& corpus, std::int64_t passage_tokens,
                                               const TokenizerConfig& tokenizer = {});

/// Dispatches on `cfg.mode`.
std::vector<RetrievalUnit> build_units(const Corpus& corpus, const GroupingConfig& cfg);

/// Id of the first unit containing `doc_id`. Throws NotFound.
UnitId unit_of(std::span<const RetrievalUnit> units, std::string_view doc_id);

/// Units file: one JSON object per line with `unit_id`, `member_doc_ids`,
/// `token_count` and, for passage units, `span` as [begin, end).
std::string serialize_units(std::span<const RetrievalUnit> units);
std::vector<RetrievalUnit> parse_units(std::string_view bytes, std::string_view source = "<memory>");
void save_units(const std::filesystem::path& path, std::span<const RetrievalUnit> units);
std::vector<RetrievalUnit> load_units(const std::filesystem::path& path);

}  // namespace longrag
