#include <gtest/gtest.h>

#include "longrag/chat_client.hpp"
#include "longrag/errors.hpp"
#include "longrag/reader.hpp"

using namespace longrag;

namespace {

RetrievalContext context(std::size_t tokens) {
    RetrievalContext ctx;
    ctx.unit_ids = {"u0000000"};
    ctx.documents = {{"The Bob and Tom Show", "The show is broadcast from WFBQ in Indianapolis, Indiana."}};
    ctx.text = render_document(ctx.documents[0]);
    ctx.total_tokens = tokens;
    return ctx;
}

ReaderOptions no_wait() {
    ReaderOptions opts;
    opts.retry.max_retries = 2;
    opts.sleeper = [](std::chrono::milliseconds) {};
    return opts;
}

ScriptedChatClient::Response transport() {
    ScriptedChatClient::Response r;
    r.kind = ScriptedChatClient::Response::Kind::TransportFailure;
    return r;
}

const char* kQ = "where does the bob and tom show broadcast from";

}  // namespace

TEST(Reader, TwoTurnPassThrough) {
    auto llm = ScriptedChatClient::sequence({"Indianapolis, Indiana", "Indianapolis"});
    const auto r = answer(kQ, context(5000), llm, default_prompt_template(), no_wait());
    EXPECT_EQ(r.long_answer, "Indianapolis, Indiana");
    EXPECT_EQ(r.short_answer, "Indianapolis");
    EXPECT_EQ(llm.call_count(), 2u);
    ASSERT_EQ(r.transcripts.size(), 2u);
    EXPECT_EQ(r.transcripts[1].response, "Indianapolis");
}

TEST(Reader, Turn2IsFreshConversation) {
    auto llm = ScriptedChatClient::sequence({"Indianapolis, Indiana", "Indianapolis"});
    answer(kQ, context(5000), llm, default_prompt_template(), no_wait());
    const auto reqs = llm.requests();
    ASSERT_EQ(reqs.size(), 2u);
    ASSERT_EQ(reqs[1].messages.size(), 1u);
    EXPECT_EQ(reqs[1].messages[0].role, "user");
    EXPECT_EQ(reqs[1].messages[0].content.find("WFBQ"), std::string::npos);
    EXPECT_NE(reqs[1].messages[0].content.find("\"Long Answer\": Indianapolis, Indiana \"Short Answer\":"),
              std::string::npos);
}

TEST(Reader, TrimsWhitespace) {
    auto llm = ScriptedChatClient::sequence({"  long \n", "\tshort\n"});
    const auto r = answer(kQ, context(5000), llm, default_prompt_template(), no_wait());
    EXPECT_EQ(r.long_answer, "long");
    EXPECT_EQ(r.short_answer, "short");
    EXPECT_EQ(r.transcripts[0].response, "  long \n");
}

TEST(Reader, Turn1TransportFailureStopsBeforeTurn2) {
    ScriptedChatClient llm({{"", {transport(), transport(), transport(), {"never"}}}});
    EXPECT_THROW(answer(kQ, context(5000), llm, default_prompt_template(), no_wait()), TransportError);
    EXPECT_EQ(llm.call_count(), 3u);
    for (const auto& req : llm.requests())
        EXPECT_EQ(req.messages[0].content.find("Short Answer"), std::string::npos);
}

TEST(Reader, TransientFailureRecovers) {
    ScriptedChatClient llm({{"", {transport(), {"long"}, {"short"}}}});
    const auto r = answer(kQ, context(5000), llm, default_prompt_template(), no_wait());
    EXPECT_EQ(r.short_answer, "short");
    EXPECT_EQ(llm.call_count(), 3u);
}

TEST(Reader, RemoteErrorNotRetried) {
    ScriptedChatClient::Response remote;
    remote.kind = ScriptedChatClient::Response::Kind::RemoteFailure;
    remote.status = 429;
    ScriptedChatClient llm({{"", {remote, {"long"}}}});
    EXPECT_THROW(answer(kQ, context(5000), llm, default_prompt_template(), no_wait()), RemoteError);
    EXPECT_EQ(llm.call_count(), 1u);
}

TEST(Reader, BlankTurn2CarriesLongAnswer) {
    auto llm = ScriptedChatClient::sequence({"Indianapolis, Indiana", "   "});
    try {
        answer(kQ, context(5000), llm, default_prompt_template(), no_wait());
        FAIL() << "expected EmptyCompletion";
    } catch (const EmptyCompletion& e) {
        EXPECT_EQ(e.partial(), "Indianapolis, Indiana");
        EXPECT_EQ(e.kind(), ErrorKind::Upstream);
    }
}

TEST(Reader, ShortContextUsesOneCall) {
    auto llm = ScriptedChatClient::sequence({"Indianapolis"});
    const auto r = answer_short_context(kQ, context(200), llm, default_prompt_template(), no_wait());
    EXPECT_EQ(llm.call_count(), 1u);
    EXPECT_EQ(r.short_answer, "Indianapolis");
    EXPECT_EQ(r.long_answer, "Indianapolis");
}

TEST(Reader, ThresholdRouting) {
    const auto tpl = default_prompt_template();
    auto below = ScriptedChatClient::sequence({"a", "b"});
    read(kQ, context(999), below, tpl, no_wait());
    EXPECT_EQ(below.call_count(), 1u);

    auto above = ScriptedChatClient::sequence({"a", "b"});
    read(kQ, context(4001), above, tpl, no_wait());
    EXPECT_EQ(above.call_count(), 2u);

    auto at = ScriptedChatClient::sequence({"a", "b"});
    read(kQ, context(1000), at, tpl, no_wait());
    EXPECT_EQ(at.call_count(), 2u);
}

TEST(Reader, EmptyContextRejected) {
    auto llm = ScriptedChatClient::sequence({"x"});
    EXPECT_THROW(answer_short_context(kQ, RetrievalContext{}, llm, default_prompt_template(), no_wait()),
                 PreconditionError);
    EXPECT_THROW(answer_short_context(kQ, context(5000), llm, default_prompt_template(), no_wait()),
                 PreconditionError);
    EXPECT_EQ(llm.call_count(), 0u);
}
