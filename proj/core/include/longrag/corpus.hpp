#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "longrag/tokenizer.hpp"

namespace longrag {

using DocId = std::string;

/// One corpus article. `out_links` holds hyperlink targets in file order,
/// without duplicates and without the document's own id.
struct Document {
    DocId id;
    std::string title;
    std::string text;
    std::vector<DocId> out_links;

    friend bool operator==(const Document&, const Document&) = default;
};

/// Immutable, ordered collection of documents keyed by id.
///
/// Iteration order is insertion (file) order. Links to ids that are not in
/// the corpus are kept on the documents; see validate_links().
class Corpus {
public:
    Corpus() = default;

    /// Throws DuplicateId on a repeated id and ParseError on an empty id.
    explicit Corpus(std::vector<Document> docs);

    std::size_t size() const noexcept { return docs_.size(); }
    bool empty() const noexcept { return docs_.empty(); }

    std::span<const Document> documents() const noexcept { return docs_; }
    const Document& at(std::size_t index) const { return docs_.at(index); }

    bool contains(std::string_view id) const;
    /// Position of `id` in corpus order, or nullopt.
    std::optional<std::size_t> index_of(std::string_view id) const;
    /// Throws NotFound.
    const Document& get(std::string_view id) const;

    auto begin() const noexcept { return docs_.begin(); }
    auto end() const noexcept { return docs_.end(); }

    friend bool operator==(const Corpus& a, const Corpus& b) { return a.docs_ == b.docs_; }

private:
    struct StringHash {
        using is_transparent = void;
        std::size_t operator()(std::string_view s) const noexcept {
            return std::hash<std::string_view>{}(s);
        }
    };

    std::vector<Document> docs_;
    std::unordered_map<std::string, std::size_t, StringHash, std::equal_to<>> by_id_;
};

/// Reads the line-delimited JSON corpus format: one object per line with
/// `id`, `title`, `text` and optional `links`. Blank lines are skipped.
///
/// Throws IoError, ParseError (with the 1-based line number) or DuplicateId.
Corpus load_corpus(const std::filesystem::path& path);

/// Same as load_corpus() but from an in-memory buffer; `source` names the
/// buffer in error messages.
Corpus parse_corpus(std::string_view bytes, std::string_view source = "<memory>");

struct LinkReport {
    std::size_t resolvable = 0;
    std::size_t dangling = 0;
    /// (source, target) for each link whose target is not in the corpus.
    std::vector<std::pair<DocId, DocId>> dangling_pairs;
};

LinkReport validate_links(const Corpus& corpus);

/// Token count of a document's text under `cfg`.
inline std::size_t document_tokens(const Document& doc, const TokenizerConfig& cfg) {
    return count_tokens(doc.text, cfg);
}

}  // namespace longrag
