#include "longrag/retriever.hpp"

#include <algorithm>
#include <limits>

#include "longrag/errors.hpp"

namespace longrag {

std::vector<ScoredUnit> retrieve_units(const ChunkIndex& index, std::span<const float> query,
                                       std::size_t k) {
    if (k == 0) throw ConfigError("k must be at least 1");
    const auto scores = index.score(query);

    constexpr std::size_t kUnset = std::numeric_limits<std::size_t>::max();
    std::vector<std::size_t> best(index.unit_ids().size(), kUnset);
    for (std::size_t row = 0; row < scores.size(); ++row) {
        std::size_t& b = best[index.unit_ordinal(row)];
        if (b == kUnset || scores[row] > scores[b] ||
            (scores[row] == scores[b] && index.chunk_id(row) < index.chunk_id(b)))
            b = row;
    }

    std::vector<ScoredUnit> ranked;
    ranked.reserve(best.size());
    for (std::size_t u = 0; u < best.size(); ++u) {
        if (best[u] == kUnset) continue;
        ranked.push_back({index.unit_ids()[u], scores[best[u]], index.chunk_id(best[u])});
    }
    auto before = [](const ScoredUnit& a, const ScoredUnit& b) {
        if (a.score != b.score) return a.score > b.score;
        return a.unit_id < b.unit_id;
    };
    const std::size_t keep = std::min(k, ranked.size());
    std::partial_sort(ranked.begin(), ranked.begin() + static_cast<std::ptrdiff_t>(keep), ranked.end(),
                      before);
    ranked.resize(keep);
    return ranked;
}

UnitCatalog::UnitCatalog(std::span<const RetrievalUnit> units) : units_(units) {
    by_id_.reserve(units.size());
    for (std::size_t i = 0; i < units.size(); ++i) {
        if (!by_id_.emplace(units[i].id, i).second) throw DuplicateId(units[i].id);
    }
}

const RetrievalUnit& UnitCatalog::get(std::string_view unit_id) const {
    auto it = by_id_.find(unit_id);
    if (it == by_id_.end()) throw NotFound("unknown unit: " + std::string(unit_id));
    return units_[it->second];
}

bool UnitCatalog::contains(std::string_view unit_id) const { return by_id_.count(unit_id) != 0; }

std::string render_document(const ContextDocument& doc) {
    return "\"Title\": " + doc.title + " \"Text\": " + doc.text;
}

namespace {

std::vector<ContextDocument> unit_documents(const RetrievalUnit& unit, const Corpus& corpus,
                                            const TokenizerConfig& tokenizer) {
    std::vector<ContextDocument> docs;
    docs.reserve(unit.members.size());
    for (const auto& member : unit.members) {
        const auto& doc = corpus.get(member);
        if (!unit.span) {
            docs.push_back({doc.title, doc.text});
            continue;
        }
        const auto spans = token_spans(doc.text, tokenizer);
        const std::size_t begin = std::min(unit.span->begin, spans.size());
        const std::size_t end = std::min(unit.span->end, spans.size());
        std::string text;
        if (begin < end)
            text = doc.text.substr(spans[begin].begin, spans[end - 1].end - spans[begin].begin);
        docs.push_back({doc.title, std::move(text)});
    }
    return docs;
}

}  // namespace

RetrievalContext aggregate_context(std::span<const ScoredUnit> scored, const UnitCatalog& units,
                                   const Corpus& corpus, std::optional<std::size_t> budget_tokens,
                                   const TokenizerConfig& tokenizer) {
    std::size_t keep = scored.size();
    if (budget_tokens) {
        std::size_t total = 0;
        for (const auto& s : scored) total += units.get(s.unit_id).token_count;
        while (keep > 1 && total > *budget_tokens) {
            --keep;
            total -= units.get(scored[keep].unit_id).token_count;
        }
    }

    RetrievalContext ctx;
    for (std::size_t i = 0; i < keep; ++i) {
        const auto& unit = units.get(scored[i].unit_id);
        ctx.unit_ids.push_back(unit.id);
        ctx.total_tokens += unit.token_count;
        for (auto& doc : unit_documents(unit, corpus, tokenizer)) {
            if (!ctx.text.empty()) ctx.text += '\n';
            ctx.text += render_document(doc);
            ctx.documents.push_back(std::move(doc));
        }
    }
    return ctx;
}

std::string unit_text(const RetrievalUnit& unit, const Corpus& corpus,
                      const TokenizerConfig& tokenizer) {
    std::string out;
    for (const auto& doc : unit_documents(unit, corpus, tokenizer)) {
        if (!out.empty()) out += '\n';
        out += doc.title;
        out += '\n';
        out += doc.text;
    }
    return out;
}

}  // namespace longrag
