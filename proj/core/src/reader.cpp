#include "longrag/reader.hpp"

#include "longrag/errors.hpp"

namespace longrag {

namespace {

std::string call(ChatClient& llm, const std::string& prompt, const ReaderOptions& opts,
                 ReaderResult& result) {
    const auto request = ChatRequest::user(prompt);
    std::string response = with_retry(opts.retry, [&] { return llm.complete(request); }, opts.sleeper);
    result.transcripts.push_back({prompt, response});
    return trim(response);
}

}  // namespace

std::string trim(std::string_view s) {
    constexpr std::string_view kSpace = " \t\n\r\f\v";
    const auto first = s.find_first_not_of(kSpace);
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(kSpace);
    return std::string(s.substr(first, last - first + 1));
}

ReaderResult answer(std::string_view question, const RetrievalContext& context, ChatClient& llm,
                    const PromptTemplate& tpl, const ReaderOptions& opts) {
    ReaderResult result;
    result.long_answer = call(llm, build_turn1(question, context, tpl), opts, result);
    if (result.long_answer.empty()) throw EmptyCompletion("turn 1 returned a blank completion", "");

    result.short_answer = call(llm, build_turn2(question, result.long_answer, tpl), opts, result);
    if (result.short_answer.empty())
        throw EmptyCompletion("turn 2 returned a blank completion", result.long_answer);
    return result;
}

ReaderResult answer_short_context(std::string_view question, const RetrievalContext& context,
                                  ChatClient& llm, const PromptTemplate& tpl,
                                  const ReaderOptions& opts) {
    if (context.documents.empty()) throw PreconditionError("retrieval context is empty");
    if (context.total_tokens >= opts.short_context_threshold)
        throw PreconditionError("context has " + std::to_string(context.total_tokens) +
                                " tokens, single-turn threshold is " +
                                std::to_string(opts.short_context_threshold));
    ReaderResult result;
    result.short_answer = call(llm, build_single_turn(question, context, tpl), opts, result);
    if (result.short_answer.empty()) throw EmptyCompletion("blank completion", "");
    result.long_answer = result.short_answer;
    return result;
}

ReaderResult read(std::string_view question, const RetrievalContext& context, ChatClient& llm,
                  const PromptTemplate& tpl, const ReaderOptions& opts) {
    if (context.total_tokens < opts.short_context_threshold)
        return answer_short_context(question, context, llm, tpl, opts);
    return answer(question, context, llm, tpl, opts);
}

}  // namespace longrag
