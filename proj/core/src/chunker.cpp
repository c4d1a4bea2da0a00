#include "longrag/chunker.hpp"

#include <algorithm>
#include <unordered_map>

#include "longrag/errors.hpp"

namespace longrag {

std::vector<Chunk> chunk_units(std::span<const RetrievalUnit> units, const Corpus& corpus,
                               std::optional<std::int64_t> chunk_size,
                               const TokenizerConfig& tokenizer) {
    if (chunk_size && *chunk_size <= 0)
        throw ConfigError("chunk size must be positive, got " + std::to_string(*chunk_size));

    // Passage units share documents; tokenize each document once.
    std::unordered_map<std::size_t, std::vector<ByteSpan>> span_cache;
    auto spans_of = [&](std::size_t doc_index) -> const std::vector<ByteSpan>& {
        auto it = span_cache.find(doc_index);
        if (it == span_cache.end())
            it = span_cache.emplace(doc_index, token_spans(corpus.at(doc_index).text, tokenizer)).first;
        return it->second;
    };

    std::vector<Chunk> chunks;
    for (const auto& unit : units) {
        for (const auto& member : unit.members) {
            auto index = corpus.index_of(member);
            if (!index) throw NotFound("unit " + unit.id + " references unknown document " + member);
            const auto& doc = corpus.at(*index);
            const auto& spans = spans_of(*index);

            std::size_t begin = 0;
            std::size_t end = spans.size();
            if (unit.span) {
                begin = std::min(unit.span->begin, spans.size());
                end = std::min(unit.span->end, spans.size());
            }
            const std::size_t width =
                    chunk_size ? static_cast<std::size_t>(*chunk_size) : std::max<std::size_t>(end - begin, 1);

            std::size_t n = 0;
            for (std::size_t start = begin; start < end; start += width, ++n) {
                const std::size_t stop = std::min(end, start + width);
                const std::size_t byte_begin = spans[start].begin;
                const std::size_t byte_end = spans[stop - 1].end;
                chunks.push_back({unit.id + "/" + doc.id + "#" + std::to_string(n), unit.id, doc.id,
                                  doc.text.substr(byte_begin, byte_end - byte_begin),
                                  TokenRange{start, stop}});
            }
        }
    }
    return chunks;
}

}  // namespace longrag
