#include "longrag/metrics.hpp"

#include <algorithm>
#include <cctype>
#include <unordered_map>

#include "longrag/errors.hpp"

namespace longrag {

namespace {

bool is_ascii_punct(unsigned char c) { return c < 0x80 && std::ispunct(c); }

std::vector<std::string> clean_tokens(std::string_view s, bool drop_articles) {
    std::vector<std::string> tokens;
    std::string cur;
    auto flush = [&] {
        if (cur.empty()) return;
        if (!(drop_articles && (cur == "a" || cur == "an" || cur == "the"))) tokens.push_back(cur);
        cur.clear();
    };
    for (char ch : s) {
        const auto c = static_cast<unsigned char>(ch);
        if (c < 0x80 && std::isspace(c)) {
            flush();
        } else if (!is_ascii_punct(c)) {
            cur.push_back(c < 0x80 ? static_cast<char>(std::tolower(c)) : ch);
        }
    }
    flush();
    return tokens;
}

std::string join(const std::vector<std::string>& tokens) {
    std::string out;
    for (const auto& t : tokens) {
        if (!out.empty()) out += ' ';
        out += t;
    }
    return out;
}

double f1_single(const std::vector<std::string>& pred, const std::vector<std::string>& gold) {
    if (pred.empty() || gold.empty()) return pred.empty() && gold.empty() ? 1.0 : 0.0;
    std::unordered_map<std::string_view, int> counts;
    for (const auto& t : gold) ++counts[t];
    std::size_t overlap = 0;
    for (const auto& t : pred) {
        auto it = counts.find(t);
        if (it != counts.end() && it->second > 0) {
            --it->second;
            ++overlap;
        }
    }
    if (overlap == 0) return 0.0;
    const double precision = static_cast<double>(overlap) / static_cast<double>(pred.size());
    const double recall = static_cast<double>(overlap) / static_cast<double>(gold.size());
    return 2.0 * precision * recall / (precision + recall);
}

}  // namespace

std::string normalize_answer(std::string_view s, const AnswerNormalizer& norm) {
    return join(clean_tokens(s, norm.drop_articles));
}

std::string normalize_for_recall(std::string_view s) { return join(clean_tokens(s, false)); }

bool answer_recall(std::string_view retrieved_text, std::span<const std::string> gold_answers) {
    const std::string haystack = " " + normalize_for_recall(retrieved_text) + " ";
    for (const auto& gold : gold_answers) {
        const std::string needle = normalize_for_recall(gold);
        if (needle.empty()) continue;
        if (haystack.find(" " + needle + " ") != std::string::npos) return true;
    }
    return false;
}

bool doc_recall(std::span<const UnitId> retrieved_units, const UnitCatalog& membership,
                std::span<const DocId> gold_doc_ids) {
    if (gold_doc_ids.empty()) throw PreconditionError("doc recall needs at least one gold document");
    for (const auto& gold : gold_doc_ids) {
        const bool found = std::any_of(retrieved_units.begin(), retrieved_units.end(), [&](const UnitId& u) {
            const auto& members = membership.get(u).members;
            return std::find(members.begin(), members.end(), gold) != members.end();
        });
        if (!found) return false;
    }
    return true;
}

bool exact_match(std::string_view prediction, std::span<const std::string> gold_answers,
                 const AnswerNormalizer& norm) {
    const std::string pred = normalize_answer(prediction, norm);
    return std::any_of(gold_answers.begin(), gold_answers.end(),
                       [&](const std::string& g) { return normalize_answer(g, norm) == pred; });
}

bool refined_exact_match(std::string_view prediction, std::span<const std::string> gold_answers,
                         const AnswerNormalizer& norm) {
    if (exact_match(prediction, gold_answers, norm)) return true;
    const auto tokens = clean_tokens(prediction, norm.drop_articles);
    if (tokens.empty() || tokens.size() >= 5) return false;
    const std::string pred = join(tokens);
    return std::any_of(gold_answers.begin(), gold_answers.end(), [&](const std::string& g) {
        const std::string gold = normalize_answer(g, norm);
        if (gold.empty()) return false;
        return gold.find(pred) != std::string::npos || pred.find(gold) != std::string::npos;
    });
}

double token_f1(std::string_view prediction, std::span<const std::string> gold_answers,
                const AnswerNormalizer& norm) {
    const auto pred = clean_tokens(prediction, norm.drop_articles);
    double best = 0.0;
    for (const auto& g : gold_answers)
        best = std::max(best, f1_single(pred, clean_tokens(g, norm.drop_articles)));
    return best;
}

}  // namespace longrag
