#include "longrag/corpus.hpp"

#include <unordered_set>

#include "jsonl.hpp"
#include "longrag/errors.hpp"

namespace longrag {

Corpus::Corpus(std::vector<Document> docs) : docs_(std::move(docs)) {
    by_id_.reserve(docs_.size());
    for (std::size_t i = 0; i < docs_.size(); ++i) {
        auto& doc = docs_[i];
        if (doc.id.empty()) throw ParseError("<corpus>", i + 1, "empty document id");
        if (!by_id_.emplace(doc.id, i).second) throw DuplicateId(doc.id);
        // Self links and repeats carry no grouping signal.
        std::unordered_set<std::string> linked;
        std::vector<DocId> kept;
        kept.reserve(doc.out_links.size());
        for (auto& t : doc.out_links) {
            if (t == doc.id || !linked.insert(t).second) continue;
            kept.push_back(std::move(t));
        }
        doc.out_links = std::move(kept);
    }
}

bool Corpus::contains(std::string_view id) const { return by_id_.find(id) != by_id_.end(); }

std::optional<std::size_t> Corpus::index_of(std::string_view id) const {
    auto it = by_id_.find(id);
    if (it == by_id_.end()) return std::nullopt;
    return it->second;
}

const Document& Corpus::get(std::string_view id) const {
    auto it = by_id_.find(id);
    if (it == by_id_.end()) throw NotFound("document not in corpus: " + std::string(id));
    return docs_[it->second];
}

Corpus parse_corpus(std::string_view bytes, std::string_view source) {
    std::vector<Document> docs;
    std::unordered_set<std::string> seen;
    detail::for_each_jsonl(bytes, source, [&](const detail::json& obj, std::size_t line) {
        Document doc;
        doc.id = detail::require_string(obj, "id", source, line);
        if (doc.id.empty()) throw ParseError(std::string(source), line, "empty \"id\"");
        doc.title = detail::require_string(obj, "title", source, line);
        doc.text = detail::require_string(obj, "text", source, line);
        if (auto it = obj.find("links"); it != obj.end() && !it->is_null()) {
            if (!it->is_array())
                throw ParseError(std::string(source), line, "\"links\" must be an array");
            for (const auto& target : *it) {
                if (!target.is_string())
                    throw ParseError(std::string(source), line, "\"links\" entries must be strings");
                doc.out_links.push_back(target.get<std::string>());
            }
        }
        if (!seen.insert(doc.id).second) throw DuplicateId(doc.id);
        docs.push_back(std::move(doc));
    });
    return Corpus(std::move(docs));
}

Corpus load_corpus(const std::filesystem::path& path) {
    return parse_corpus(detail::read_file(path), path.string());
}

LinkReport validate_links(const Corpus& corpus) {
    LinkReport report;
    for (const auto& doc : corpus) {
        for (const auto& target : doc.out_links) {
            if (corpus.contains(target)) {
                ++report.resolvable;
            } else {
                ++report.dangling;
                report.dangling_pairs.emplace_back(doc.id, target);
            }
        }
    }
    return report;
}

}  // namespace longrag
