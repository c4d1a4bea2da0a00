#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "longrag/chat_client.hpp"
#include "longrag/prompt.hpp"
#include "longrag/retriever.hpp"
#include "longrag/retry.hpp"

namespace longrag {

struct Exchange {
    std::string prompt;
    std::string response;

    friend bool operator==(const Exchange&, const Exchange&) = default;
};

struct ReaderResult {
    std::string long_answer;
    std::string short_answer;
    std::vector<Exchange> transcripts;
};

struct ReaderOptions {
    /// Contexts with fewer tokens than this use the single-turn prompt.
    std::size_t short_context_threshold = 1000;
    RetryPolicy retry;
    Sleeper sleeper = sleep_for;
};

/// Two-turn protocol. Turn 1 asks for a free-form answer over the full
/// context; Turn 2 is a fresh conversation that distills a short answer from
/// the question and long answer with few-shot exemplars. Both answers are
/// whitespace-trimmed.
///
/// Transport failures are retried per `opts.retry`; if Turn 1 still fails no
/// Turn 2 is sent. A blank completion raises EmptyCompletion whose partial()
/// carries the long answer when Turn 2 was the blank one.
ReaderResult answer(std::string_view question, const RetrievalContext& context, ChatClient& llm,
                    const PromptTemplate& tpl, const ReaderOptions& opts = {});

/// Single call; the completion is both the long and the short answer.
/// Throws PreconditionError on an empty context or one at or above the
/// threshold.
ReaderResult answer_short_context(std::string_view question, const RetrievalContext& context,
                                  ChatClient& llm, const PromptTemplate& tpl,
                                  const ReaderOptions& opts = {});

/// Routes to answer_short_context() below the threshold, answer() otherwise.
ReaderResult read(std::string_view question, const RetrievalContext& context, ChatClient& llm,
                  const PromptTemplate& tpl, const ReaderOptions& opts = {});

/// Strips leading and trailing ASCII whitespace.
std::string trim(std::string_view s);

}  // namespace longrag
