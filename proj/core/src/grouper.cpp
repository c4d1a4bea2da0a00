#include "longrag/grouper.hpp"

#include <algorithm>
#include <cstdio>
#include <numeric>

#include "longrag/errors.hpp"

namespace longrag {

namespace {

constexpr std::size_t kNone = static_cast<std::size_t>(-1);

// Resolvable related-document indices per document, in link order. With
// `symmetric`, in-links are appended after out-links in corpus order.
std::vector<std::vector<std::size_t>> related_indices(const Corpus& corpus, bool symmetric) {
    std::vector<std::vector<std::size_t>> adj(corpus.size());
    for (std::size_t i = 0; i < corpus.size(); ++i) {
        for (const auto& target : corpus.at(i).out_links) {
            if (auto j = corpus.index_of(target)) adj[i].push_back(*j);
        }
    }
    if (symmetric) {
        auto forward = adj;
        for (std::size_t i = 0; i < corpus.size(); ++i) {
            for (std::size_t j : forward[i]) {
                if (std::find(adj[j].begin(), adj[j].end(), i) == adj[j].end())
                    adj[j].push_back(i);
            }
        }
    }
    return adj;
}

struct Group {
    std::vector<std::size_t> members;
    std::size_t tokens = 0;
    bool alive = true;
};

}  // namespace

std::string_view to_string(GroupingMode mode) noexcept {
    switch (mode) {
        case GroupingMode::Group:
            return "group";
        case GroupingMode::WholeDocument:
            return "whole-document";
        case GroupingMode::Passage:
            return "passage";
    }
    return "group";
}

GroupingMode parse_grouping_mode(std::string_view name) {
    if (name == "group") return GroupingMode::Group;
    if (name == "whole-document") return GroupingMode::WholeDocument;
    if (name == "passage") return GroupingMode::Passage;
    throw ConfigError("unknown grouping mode: " + std::string(name));
}

UnitId make_unit_id(std::size_t n) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "u%07zu", n);
    return buf;
}

std::unordered_map<DocId, std::size_t> compute_degrees(const Corpus& corpus, bool symmetric) {
    auto adj = related_indices(corpus, symmetric);
    std::unordered_map<DocId, std::size_t> degrees;
    degrees.reserve(corpus.size());
    for (std::size_t i = 0; i < corpus.size(); ++i) degrees.emplace(corpus.at(i).id, adj[i].size());
    return degrees;
}

std::vector<RetrievalUnit> group_documents(const Corpus& corpus, const GroupingConfig& cfg) {
    if (cfg.max_tokens <= 0)
        throw ConfigError("max tokens per group must be positive, got " +
                          std::to_string(cfg.max_tokens));
    const auto budget = static_cast<std::size_t>(cfg.max_tokens);
    const std::size_t n = corpus.size();

    const auto adj = related_indices(corpus, cfg.symmetric_links);
    std::vector<std::size_t> tokens(n);
    for (std::size_t i = 0; i < n; ++i) tokens[i] = document_tokens(corpus.at(i), cfg.tokenizer);

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        if (adj[a].size() != adj[b].size()) return adj[a].size() < adj[b].size();
        return corpus.at(a).id < corpus.at(b).id;
    });

    // Groups are never mutated in place: a merge retires the absorbed groups
    // and `forward` points each retired group at its successor.
    std::vector<Group> groups;
    std::vector<std::size_t> forward;
    std::vector<std::size_t> owner(n, kNone);
    groups.reserve(n);
    forward.reserve(n);

    auto resolve = [&](std::size_t g) {
        std::size_t root = g;
        while (forward[root] != root) root = forward[root];
        while (forward[g] != root) {
            std::size_t next = forward[g];
            forward[g] = root;
            g = next;
        }
        return root;
    };

    std::vector<std::size_t> related;
    for (std::size_t d : order) {
        related.clear();
        for (std::size_t r : adj[d]) {
            if (owner[r] != kNone) related.push_back(resolve(owner[r]));
        }
        std::sort(related.begin(), related.end());
        related.erase(std::unique(related.begin(), related.end()), related.end());
        // Group index doubles as creation order for the tiebreak.
        std::stable_sort(related.begin(), related.end(), [&](std::size_t a, std::size_t b) {
            return groups[a].tokens < groups[b].tokens;
        });

        const std::size_t id = groups.size();
        Group fresh;
        fresh.members.push_back(d);
        fresh.tokens = tokens[d];
        for (std::size_t g : related) {
            if (fresh.tokens + groups[g].tokens <= budget) {
                fresh.members.insert(fresh.members.end(), groups[g].members.begin(),
                                     groups[g].members.end());
                fresh.tokens += groups[g].tokens;
                groups[g].alive = false;
                groups[g].members.clear();
                groups[g].members.shrink_to_fit();
                forward[g] = id;
            }
        }
        groups.push_back(std::move(fresh));
        forward.push_back(id);
        owner[d] = id;
    }

    std::vector<RetrievalUnit> units;
    for (const auto& g : groups) {
        if (!g.alive) continue;
        RetrievalUnit unit;
        unit.id = make_unit_id(units.size());
        unit.members.reserve(g.members.size());
        for (std::size_t m : g.members) unit.members.push_back(corpus.at(m).id);
        unit.token_count = g.tokens;
        units.push_back(std::move(unit));
    }
    return units;
}

std::vector<RetrievalUnit> units_from_whole_documents(const Corpus& corpus,
                                                      const TokenizerConfig& tokenizer) {
    std::vector<RetrievalUnit> units;
    units.reserve(corpus.size());
    for (const auto& doc : corpus) {
        units.push_back({make_unit_id(units.size()), {doc.id}, document_tokens(doc, tokenizer), {}});
    }
    return units;
}

std::vector<RetrievalUnit> units_from_passages(const Corpus& corpus, std::int64_t passage_tokens,
                                               const TokenizerConfig& tokenizer) {
    if (passage_tokens <= 0)
        throw ConfigError("passage size must be positive, got " + std::to_string(passage_tokens));
    const auto width = static_cast<std::size_t>(passage_tokens);
    std::vector<RetrievalUnit> units;
    for (const auto& doc : corpus) {
        const std::size_t total = document_tokens(doc, tokenizer);
        for (std::size_t start = 0; start < total; start += width) {
            const std::size_t stop = std::min(total, start + width);
            units.push_back({make_unit_id(units.size()), {doc.id}, stop - start,
                             TokenRange{start, stop}});
        }
    }
    return units;
}

std::vector<RetrievalUnit> build_units(const Corpus& corpus, const GroupingConfig& cfg) {
    switch (cfg.mode) {
        case GroupingMode::Group:
            return group_documents(corpus, cfg);
        case GroupingMode::WholeDocument:
            return units_from_whole_documents(corpus, cfg.tokenizer);
        case GroupingMode::Passage:
            return units_from_passages(corpus, cfg.passage_tokens, cfg.tokenizer);
    }
    return {};
}

UnitId unit_of(std::span<const RetrievalUnit> units, std::string_view doc_id) {
    for (const auto& unit : units) {
        if (std::find(unit.members.begin(), unit.members.end(), doc_id) != unit.members.end())
            return unit.id;
    }
    throw NotFound("document is in no retrieval unit: " + std::string(doc_id));
}

}  // namespace longrag
