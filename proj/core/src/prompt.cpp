#include "longrag/prompt.hpp"

#include <algorithm>

#include "jsonl.hpp"
#include "longrag/errors.hpp"

namespace longrag {

namespace {

constexpr std::string_view kTurn1 =
        "Go through the following context and then answer the question. "
        "The context is a list of Wikipedia documents, ordered by title: {titles}.\n"
        "Each Wikipedia document contains a title field and a text field. The context is:\n"
        "{context}\n"
        "Find the useful documents from the context, then answer the question: {question}. "
        "Answer the question directly. Your response should be very concise.";

constexpr std::string_view kTurn2 =
        "You have been provided with a question and its long answer. Your task is to derive a "
        "very concise short answer from the given long answer. It's important to ensure that the "
        "output short answer remains as simple as possible. Here a few examples:\n"
        "{exemplars}\n"
        "Extract the short answer of the following question and long answer:\n"
        "\"Question\": {question} \"Long Answer\": {long_answer} \"Short Answer\":";

constexpr std::string_view kSingleTurn =
        "Go through the following context and then answer the question. "
        "The context is a list of Wikipedia documents, ordered by title: {titles}.\n"
        "Each Wikipedia document contains a title field and a text field. The context is:\n"
        "{context}\n"
        "Answer the question directly with a short answer of a few words and don't output other "
        "thing. Question: {question}";

std::vector<Exemplar> builtin_exemplars() {
    return {
            {"who wrote the novel pride and prejudice",
             "Pride and Prejudice is an 1813 novel of manners written by Jane Austen.",
             "Jane Austen"},
            {"what is the capital city of australia",
             "The capital of Australia is Canberra, which was chosen as a compromise between "
             "Sydney and Melbourne.",
             "Canberra"},
            {"when did the berlin wall fall",
             "The Berlin Wall fell on 9 November 1989, when East German authorities opened the "
             "border crossings.",
             "9 November 1989"},
            {"how many players are on the field for one team in soccer",
             "Each soccer team has eleven players on the field, including the goalkeeper.",
             "eleven"},
            {"who painted the mona lisa",
             "The Mona Lisa was painted by the Italian artist Leonardo da Vinci in the early 16th "
             "century.",
             "Leonardo da Vinci"},
            {"what is the largest planet in the solar system",
             "Jupiter is the largest planet in the Solar System, more than twice as massive as all "
             "the other planets combined.",
             "Jupiter"},
            {"which element has the chemical symbol fe",
             "The chemical symbol Fe stands for iron, from the Latin word ferrum.", "iron"},
            {"in which country is the city of kyoto",
             "Kyoto is a city on the island of Honshu in Japan and was the imperial capital for "
             "over a thousand years.",
             "Japan"},
    };
}

std::string join_titles(const RetrievalContext& context) {
    std::string out;
    for (const auto& doc : context.documents) {
        if (!out.empty()) out += ", ";
        out += doc.title;
    }
    return out;
}

}  // namespace

PromptTemplate default_prompt_template() {
    PromptTemplate tpl;
    tpl.turn1 = kTurn1;
    tpl.turn2 = kTurn2;
    tpl.single_turn = kSingleTurn;
    tpl.exemplars = builtin_exemplars();
    tpl.exemplar_count = tpl.exemplars.size();
    return tpl;
}

std::vector<Exemplar> load_exemplars(const std::filesystem::path& path) {
    const auto source = path.string();
    std::vector<Exemplar> out;
    detail::for_each_jsonl(detail::read_file(path), source, [&](const detail::json& obj, std::size_t line) {
        out.push_back({detail::require_string(obj, "question", source, line),
                       detail::require_string(obj, "long_answer", source, line),
                       detail::require_string(obj, "short_answer", source, line)});
    });
    return out;
}

std::string render_template(std::string_view tpl,
                            const std::vector<std::pair<std::string, std::string>>& values,
                            const std::vector<std::string>& required) {
    auto is_ident = [](char c) {
        return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') || c == '_';
    };
    std::vector<std::string> seen;
    std::string out;
    out.reserve(tpl.size());
    std::size_t i = 0;
    while (i < tpl.size()) {
        if (tpl[i] == '{') {
            std::size_t j = i + 1;
            while (j < tpl.size() && is_ident(tpl[j])) ++j;
            if (j < tpl.size() && tpl[j] == '}' && j > i + 1) {
                const std::string name(tpl.substr(i + 1, j - i - 1));
                auto it = std::find_if(values.begin(), values.end(),
                                       [&](const auto& kv) { return kv.first == name; });
                if (it == values.end()) throw TemplateError("unknown placeholder {" + name + "}");
                out += it->second;
                seen.push_back(name);
                i = j + 1;
                continue;
            }
        }
        out += tpl[i++];
    }
    for (const auto& name : required) {
        if (std::find(seen.begin(), seen.end(), name) == seen.end())
            throw TemplateError("template lacks required placeholder {" + name + "}");
    }
    return out;
}

std::string build_turn1(std::string_view question, const RetrievalContext& context,
                        const PromptTemplate& tpl) {
    if (question.empty()) throw TemplateError("question is empty");
    if (context.documents.empty()) throw PreconditionError("retrieval context is empty");
    return render_template(tpl.turn1,
                           {{"context", context.text},
                            {"question", std::string(question)},
                            {"titles", join_titles(context)}},
                           {"context", "question"});
}

std::string build_turn2(std::string_view question, std::string_view long_answer,
                        const PromptTemplate& tpl) {
    if (question.empty()) throw TemplateError("question is empty");
    if (long_answer.empty()) throw TemplateError("long answer is empty");
    if (tpl.exemplars.size() < tpl.exemplar_count)
        throw TemplateError("template needs " + std::to_string(tpl.exemplar_count) +
                            " exemplars, has " + std::to_string(tpl.exemplars.size()));
    std::string blocks;
    for (std::size_t i = 0; i < tpl.exemplar_count; ++i) {
        const auto& ex = tpl.exemplars[i];
        if (!blocks.empty()) blocks += '\n';
        blocks += "\"Question\": " + ex.question + " \"Long Answer\": " + ex.long_answer +
                  " \"Short Answer\": " + ex.short_answer;
    }
    return render_template(tpl.turn2,
                           {{"exemplars", blocks},
                            {"question", std::string(question)},
                            {"long_answer", std::string(long_answer)}},
                           {"exemplars", "question", "long_answer"});
}

std::string build_single_turn(std::string_view question, const RetrievalContext& context,
                              const PromptTemplate& tpl) {
    if (question.empty()) throw TemplateError("question is empty");
    if (context.documents.empty()) throw PreconditionError("retrieval context is empty");
    return render_template(tpl.single_turn,
                           {{"context", context.text},
                            {"question", std::string(question)},
                            {"titles", join_titles(context)}},
                           {"context", "question"});
}

}  // namespace longrag
