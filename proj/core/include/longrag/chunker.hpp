#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "longrag/corpus.hpp"
#include "longrag/grouper.hpp"

namespace longrag {

/// A window of one document's tokens inside one retrieval unit.
struct Chunk {
    std::string id;  ///< "<unit_id>/<doc_id>#<n>"
    UnitId unit_id;
    DocId doc_id;
    std::string text;
    TokenRange span;  ///< token positions in the source document

    friend bool operator==(const Chunk&, const Chunk&) = default;
};

/// Tiles each document of each unit into consecutive, non-overlapping windows
/// of `chunk_size` tokens (the last one possibly shorter). Passage units tile
/// only their span. A chunk's text is the original byte range from its first
/// to its last token. `std::nullopt` means one chunk per document.
///
/// Throws ConfigError when chunk_size <= 0 and NotFound for a member missing
/// from the corpus.
std::vector<Chunk> chunk_units(std::span<const RetrievalUnit> units, const Corpus& corpus,
                               std::optional<std::int64_t> chunk_size,
                               const TokenizerConfig& tokenizer = {});

}  // namespace longrag
