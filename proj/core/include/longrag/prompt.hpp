#pragma once

#include <cstddef>
#include <filesystem>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "longrag/retriever.hpp"

namespace longrag {

struct Exemplar {
    std::string question;
    std::string long_answer;
    std::string short_answer;

    friend bool operator==(const Exemplar&, const Exemplar&) = default;
};

/// Reader prompt templates. Placeholders are written `{name}`:
///
///   turn1 / single_turn : {context} {question}, optional {titles}
///   turn2               : {exemplars} {question} {long_answer}
///
/// Substituted values are inserted verbatim and never re-scanned.
struct PromptTemplate {
    std::string turn1;
    std::string turn2;
    std::string single_turn;
    std::vector<Exemplar> exemplars;
    /// Number of exemplars rendered into Turn 2.
    std::size_t exemplar_count = 8;
};

/// The built-in templates with eight general-knowledge exemplars.
PromptTemplate default_prompt_template();

/// Reads exemplars from JSON lines with `question`, `long_answer`,
/// `short_answer`.
std::vector<Exemplar> load_exemplars(const std::filesystem::path& path);

/// Replaces every `{name}` in `tpl` with its value. Throws TemplateError on
/// an unknown placeholder or a required one that is absent from `tpl`.
std::string render_template(std::string_view tpl,
                            const std::vector<std::pair<std::string, std::string>>& values,
                            const std::vector<std::string>& required);

/// Turn 1: the retrieved documents in context order followed by the
/// question. Throws TemplateError on an empty question and
/// PreconditionError on an empty context.
std::string build_turn1(std::string_view question, const RetrievalContext& context,
                        const PromptTemplate& tpl);

/// Turn 2: the exemplars, then the question and long answer with an empty
/// short-answer slot. Throws TemplateError on an empty long answer or when
/// fewer exemplars exist than `exemplar_count`.
std::string build_turn2(std::string_view question, std::string_view long_answer,
                        const PromptTemplate& tpl);

/// Single-turn direct-answer prompt for short contexts.
std::string build_single_turn(std::string_view question, const RetrievalContext& context,
                              const PromptTemplate& tpl);

}  // namespace longrag
