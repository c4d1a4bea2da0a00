#include <fstream>

#include <gtest/gtest.h>

#include "longrag/errors.hpp"
#include "longrag/prompt.hpp"
#include "test_util.hpp"

using namespace longrag;

namespace {

std::size_t occurrences(const std::string& hay, const std::string& needle) {
    std::size_t n = 0;
    for (auto p = hay.find(needle); p != std::string::npos; p = hay.find(needle, p + 1)) ++n;
    return n;
}

RetrievalContext context_of(std::vector<ContextDocument> docs) {
    RetrievalContext ctx;
    for (const auto& d : docs) {
        ctx.unit_ids.push_back("u" + d.title);
        if (!ctx.text.empty()) ctx.text += '\n';
        ctx.text += render_document(d);
    }
    ctx.documents = std::move(docs);
    ctx.total_tokens = 50;
    return ctx;
}

const char* kEaglesQ = "when did the philadelphia eagles play in the super bowl last";
const char* kEaglesLong =
        "The Philadelphia Eagles last played in the Super Bowl on February 4, 2018, in Super Bowl LII.";

}  // namespace

TEST(Prompt, Turn1SingleDocument) {
    const auto tpl = default_prompt_template();
    const auto p = build_turn1("q", context_of({{"Doc", "body"}}), tpl);
    EXPECT_EQ(occurrences(p, "\"Title\":"), 1u);
    EXPECT_EQ(occurrences(p, "\"Text\":"), 1u);
    EXPECT_NE(p.find("answer the question: q."), std::string::npos);
    EXPECT_EQ(p.find('{'), std::string::npos);
}

TEST(Prompt, Turn1KeepsContextOrder) {
    const auto tpl = default_prompt_template();
    const auto p = build_turn1("q", context_of({{"Zeta", "z"}, {"Alpha", "a"}, {"Mid", "m"}}), tpl);
    const auto z = p.find("\"Title\": Zeta");
    const auto a = p.find("\"Title\": Alpha");
    const auto m = p.find("\"Title\": Mid");
    ASSERT_NE(z, std::string::npos);
    EXPECT_LT(z, a);
    EXPECT_LT(a, m);
    EXPECT_TRUE(p.starts_with("Go through the following context and then answer the question."));
    EXPECT_TRUE(p.ends_with("Answer the question directly. Your response should be very concise."));
}

TEST(Prompt, Turn1HasNoExemplars) {
    const auto tpl = default_prompt_template();
    const auto p = build_turn1("q", context_of({{"Doc", "body"}}), tpl);
    EXPECT_EQ(p.find("\"Short Answer\""), std::string::npos);
    EXPECT_EQ(p.find(tpl.exemplars[0].question), std::string::npos);
}

TEST(Prompt, EmptyQuestionOrContext) {
    const auto tpl = default_prompt_template();
    EXPECT_THROW(build_turn1("", context_of({{"Doc", "body"}}), tpl), TemplateError);
    EXPECT_THROW(build_turn1("q", RetrievalContext{}, tpl), PreconditionError);
    EXPECT_THROW(build_turn2("", "long", tpl), TemplateError);
}

TEST(Prompt, Turn2HasEightExemplars) {
    const auto tpl = default_prompt_template();
    EXPECT_EQ(tpl.exemplars.size(), 8u);
    const auto p = build_turn2("q", "long", tpl);
    EXPECT_EQ(occurrences(p, "\"Short Answer\":"), 9u);
    for (const auto& ex : tpl.exemplars) EXPECT_NE(p.find(ex.short_answer), std::string::npos);
}

TEST(Prompt, Turn2ZeroExemplars) {
    auto tpl = default_prompt_template();
    tpl.exemplar_count = 0;
    const auto p = build_turn2("q", "long", tpl);
    EXPECT_EQ(occurrences(p, "\"Short Answer\":"), 1u);
    EXPECT_TRUE(p.ends_with("\"Short Answer\":"));
}

TEST(Prompt, Turn2EndsWithEmptyShortAnswerSlot) {
    const auto p = build_turn2(kEaglesQ, kEaglesLong, default_prompt_template());
    const std::string tail = std::string("Extract the short answer of the following question and long answer:\n") +
                             "\"Question\": " + kEaglesQ + " \"Long Answer\": " + kEaglesLong +
                             " \"Short Answer\":";
    EXPECT_TRUE(p.ends_with(tail));
    EXPECT_TRUE(p.starts_with("You have been provided with a question and its long answer."));
}

TEST(Prompt, Turn2DoesNotLeakContext) {
    const auto tpl = default_prompt_template();
    const auto p = build_turn2("q", "long answer", tpl);
    EXPECT_EQ(p.find("\"Title\":"), std::string::npos);
}

TEST(Prompt, TooFewExemplars) {
    auto tpl = default_prompt_template();
    tpl.exemplar_count = 9;
    EXPECT_THROW(build_turn2("q", "long", tpl), TemplateError);
}

TEST(Prompt, RenderTemplateValidatesPlaceholders) {
    EXPECT_EQ(render_template("a {x} b", {{"x", "1"}}, {"x"}), "a 1 b");
    EXPECT_THROW(render_template("a {y}", {{"x", "1"}}, {}), TemplateError);
    EXPECT_THROW(render_template("a", {{"x", "1"}}, {"x"}), TemplateError);
    EXPECT_EQ(render_template("{ not a slot }", {}, {}), "{ not a slot }");
    // Substituted values are not re-scanned.
    EXPECT_EQ(render_template("{x}", {{"x", "{x}"}}, {}), "{x}");
}

TEST(Prompt, SingleTurn) {
    const auto p = build_single_turn("who", context_of({{"Doc", "body"}}), default_prompt_template());
    EXPECT_TRUE(p.ends_with("Question: who"));
    EXPECT_EQ(occurrences(p, "\"Title\":"), 1u);
}

TEST(Prompt, LoadExemplars) {
    testutil::TempDir dir;
    std::ofstream(dir / "ex.jsonl") << R"({"question":"q1","long_answer":"l1","short_answer":"s1"})" << "\n"
                                    << R"({"question":"q2","long_answer":"l2","short_answer":"s2"})" << "\n";
    const auto ex = load_exemplars(dir / "ex.jsonl");
    ASSERT_EQ(ex.size(), 2u);
    EXPECT_EQ(ex[1], (Exemplar{"q2", "l2", "s2"}));
}
