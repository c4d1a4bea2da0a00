#include <algorithm>
#include <numeric>
#include <random>

#include <gtest/gtest.h>

#include "longrag/errors.hpp"
#include "longrag/grouper.hpp"
#include "longrag/retriever.hpp"
#include "oracles/maxp_oracle.hpp"
#include "test_util.hpp"

using namespace longrag;
using testutil::doc;
using testutil::words;

namespace {

struct Instance {
    std::vector<std::string> chunk_ids;
    std::vector<UnitId> units;
    std::vector<float> rows;
    std::size_t dim = 0;
};

Instance random_instance(std::mt19937_64& rng, std::size_t units, std::size_t per_unit, std::size_t dim) {
    Instance in;
    in.dim = dim;
    std::normal_distribution<float> g;
    for (std::size_t u = 0; u < units; ++u) {
        for (std::size_t c = 0; c < per_unit; ++c) {
            in.units.push_back(make_unit_id(u));
            in.chunk_ids.push_back(make_unit_id(u) + "/d#" + std::to_string(c));
            for (std::size_t j = 0; j < dim; ++j) in.rows.push_back(g(rng));
        }
    }
    return in;
}

ChunkIndex to_index(const Instance& in) {
    return build_index_from_rows(in.chunk_ids, in.units, in.rows, in.dim);
}

}  // namespace

TEST(Retriever, MaxOverChunks) {
    const auto idx = build_index_from_rows({"U/a#0", "U/a#1"}, {"U", "U"}, {0.2f, 0.0f, 0.9f, 0.0f}, 2);
    const std::vector<float> q = {1.0f, 0.0f};
    const auto top = retrieve_units(idx, q, 3);
    ASSERT_EQ(top.size(), 1u);
    EXPECT_EQ(top[0].unit_id, "U");
    EXPECT_DOUBLE_EQ(top[0].score, static_cast<double>(0.9f));
    EXPECT_EQ(top[0].best_chunk_id, "U/a#1");
}

TEST(Retriever, SingleChunkUnitEqualsDirectScore) {
    std::mt19937_64 rng(1);
    const auto in = random_instance(rng, 5, 1, 8);
    const auto idx = to_index(in);
    const std::vector<float> q(in.rows.begin(), in.rows.begin() + 8);
    const auto direct = idx.score(q);
    for (const auto& s : retrieve_units(idx, q, 5)) {
        const auto row = static_cast<std::size_t>(std::find(in.units.begin(), in.units.end(), s.unit_id) - in.units.begin());
        EXPECT_EQ(s.score, direct[row]);
    }
}

TEST(Retriever, MatchesBruteForce) {
    std::mt19937_64 rng(2);
    for (int t = 0; t < 50; ++t) {
        const auto in = random_instance(rng, 20, 3, 12);
        const auto idx = to_index(in);
        std::vector<float> q(12);
        std::normal_distribution<float> g;
        for (auto& x : q) x = g(rng);
        const auto got = retrieve_units(idx, q, 5);
        const auto want = oracle::maxp(in.rows, in.dim, in.units, q, 5);
        ASSERT_EQ(got.size(), want.size());
        for (std::size_t i = 0; i < got.size(); ++i) {
            EXPECT_EQ(got[i].unit_id, want[i].unit);
            EXPECT_NEAR(got[i].score, want[i].score, 1e-6);
        }
    }
}

TEST(Retriever, TiesBreakByUnitId) {
    const auto idx = build_index_from_rows({"b/x#0", "a/x#0", "c/x#0"}, {"b", "a", "c"},
                                           {1.0f, 1.0f, 0.5f}, 1);
    const std::vector<float> q = {1.0f};
    const auto top = retrieve_units(idx, q, 3);
    ASSERT_EQ(top.size(), 3u);
    EXPECT_EQ(top[0].unit_id, "a");
    EXPECT_EQ(top[1].unit_id, "b");
    EXPECT_EQ(top[2].unit_id, "c");
}

TEST(Retriever, ScaleCovariance) {
    std::mt19937_64 rng(3);
    const auto in = random_instance(rng, 10, 4, 6);
    const auto idx = to_index(in);
    std::vector<float> q = {0.5f, -1.0f, 0.25f, 2.0f, 0.0f, 1.0f};
    std::vector<float> q4 = q;
    for (auto& x : q4) x *= 4.0f;
    const auto a = retrieve_units(idx, q, 10);
    const auto b = retrieve_units(idx, q4, 10);
    for (std::size_t i = 0; i < a.size(); ++i) {
        EXPECT_EQ(a[i].unit_id, b[i].unit_id);
        EXPECT_NEAR(b[i].score, 4.0 * a[i].score, 1e-9);
    }
}

TEST(Retriever, PermutationInvariance) {
    std::mt19937_64 rng(4);
    const auto in = random_instance(rng, 12, 3, 5);
    std::vector<std::size_t> perm(in.units.size());
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), rng);
    Instance shuffled;
    shuffled.dim = in.dim;
    for (std::size_t p : perm) {
        shuffled.chunk_ids.push_back(in.chunk_ids[p]);
        shuffled.units.push_back(in.units[p]);
        shuffled.rows.insert(shuffled.rows.end(), in.rows.begin() + p * in.dim, in.rows.begin() + (p + 1) * in.dim);
    }
    const std::vector<float> q = {1.0f, 0.5f, -0.5f, 0.25f, 2.0f};
    EXPECT_EQ(retrieve_units(to_index(in), q, 6), retrieve_units(to_index(shuffled), q, 6));
}

TEST(Retriever, FewerUnitsThanK) {
    std::mt19937_64 rng(5);
    const auto idx = to_index(random_instance(rng, 3, 2, 4));
    const std::vector<float> q = {1.0f, 0.0f, 0.0f, 0.0f};
    EXPECT_EQ(retrieve_units(idx, q, 8).size(), 3u);
    EXPECT_THROW(retrieve_units(idx, q, 0), ConfigError);
    EXPECT_TRUE(retrieve_units(ChunkIndex{}, q, 3).empty());
    const std::vector<float> wrong = {1.0f};
    EXPECT_THROW(retrieve_units(idx, wrong, 3), DimensionMismatch);
}

class AggregateTest : public ::testing::Test {
protected:
    AggregateTest()
            : corpus_({doc("A", words(10000), {}, "Alpha"), doc("B", words(10000), {}, "Beta"),
                       doc("C", words(10000), {}, "Gamma"), doc("D", words(10000), {}, "Delta")}),
              units_(units_from_whole_documents(corpus_)),
              catalog_(units_) {}

    std::vector<ScoredUnit> ranked() const {
        return {{units_[2].id, 0.9, ""}, {units_[0].id, 0.8, ""}, {units_[3].id, 0.7, ""}, {units_[1].id, 0.6, ""}};
    }

    Corpus corpus_;
    std::vector<RetrievalUnit> units_;
    UnitCatalog catalog_;
};

TEST_F(AggregateTest, BudgetDropsWholeUnitsFromTail) {
    const auto scored = ranked();
    const auto ctx = aggregate_context(scored, catalog_, corpus_, 25000);
    EXPECT_EQ(ctx.unit_ids, (std::vector<UnitId>{units_[2].id, units_[0].id}));
    EXPECT_EQ(ctx.total_tokens, 20000u);
}

TEST_F(AggregateTest, NoBudgetKeepsAll) {
    const auto scored = ranked();
    const auto ctx = aggregate_context(scored, catalog_, corpus_);
    EXPECT_EQ(ctx.unit_ids.size(), 4u);
    EXPECT_EQ(ctx.total_tokens, 40000u);
}

TEST_F(AggregateTest, TopUnitAlwaysKept) {
    const auto scored = ranked();
    const auto ctx = aggregate_context(scored, catalog_, corpus_, 10);
    EXPECT_EQ(ctx.unit_ids, (std::vector<UnitId>{units_[2].id}));
}

TEST_F(AggregateTest, SingleUnitRendering) {
    const std::vector<ScoredUnit> one = {{units_[3].id, 1.0, ""}};
    const auto ctx = aggregate_context(one, catalog_, corpus_);
    ASSERT_EQ(ctx.documents.size(), 1u);
    EXPECT_EQ(ctx.documents[0].title, "Delta");
    EXPECT_EQ(ctx.text, render_document(ctx.documents[0]));
    EXPECT_EQ(render_document({"T", "x y"}), "\"Title\": T \"Text\": x y");
}

TEST(Aggregate, GroupedMembersInUnitOrder) {
    Corpus c({doc("A", "alpha text", {"B"}, "A title"), doc("B", "beta text", {"A"}, "B title"),
              doc("C", "gamma", {}, "C title")});
    GroupingConfig cfg;
    cfg.max_tokens = 100;
    const auto units = group_documents(c, cfg);
    const UnitCatalog catalog(units);
    const std::vector<ScoredUnit> scored = {{units[1].id, 0.9, ""}, {units[0].id, 0.1, ""}};
    const auto ctx = aggregate_context(scored, catalog, c);
    ASSERT_EQ(ctx.documents.size(), 3u);
    EXPECT_EQ(ctx.documents[0].title, "B title");
    EXPECT_EQ(ctx.documents[1].title, "A title");
    EXPECT_EQ(ctx.documents[2].title, "C title");
    EXPECT_NE(unit_text(units[1], c).find("alpha text"), std::string::npos);
}
