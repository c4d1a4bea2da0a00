#pragma once

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "longrag/corpus.hpp"
#include "longrag/grouper.hpp"
#include "longrag/retriever.hpp"

namespace longrag {

/// Answer normalization for EM, refined EM and F1. The default is SQuAD:
/// ASCII lowercase, drop ASCII punctuation, drop the articles a/an/the,
/// collapse whitespace.
struct AnswerNormalizer {
    bool drop_articles = true;
};

std::string normalize_answer(std::string_view s, const AnswerNormalizer& norm = {});

/// Normalization for answer-recall matching: ASCII lowercase, drop ASCII
/// punctuation, collapse whitespace. Articles are kept.
std::string normalize_for_recall(std::string_view s);

/// True iff some gold answer occurs in the retrieved text as a run of whole
/// tokens, after normalize_for_recall() on both sides.
bool answer_recall(std::string_view retrieved_text, std::span<const std::string> gold_answers);

/// True iff every gold document is a member of some retrieved unit. Throws
/// PreconditionError when `gold_doc_ids` is empty.
bool doc_recall(std::span<const UnitId> retrieved_units, const UnitCatalog& membership,
                std::span<const DocId> gold_doc_ids);

bool exact_match(std::string_view prediction, std::span<const std::string> gold_answers,
                 const AnswerNormalizer& norm = {});

/// Exact match, or: the normalized prediction has fewer than five tokens and
/// it is a substring of a normalized gold answer or contains one.
bool refined_exact_match(std::string_view prediction, std::span<const std::string> gold_answers,
                         const AnswerNormalizer& norm = {});

/// SQuAD token F1, maximized over gold answers.
double token_f1(std::string_view prediction, std::span<const std::string> gold_answers,
                const AnswerNormalizer& norm = {});

}  // namespace longrag
