#include <gtest/gtest.h>

#include "longrag/chunker.hpp"
#include "longrag/errors.hpp"
#include "longrag/grouper.hpp"
#include "test_util.hpp"

using namespace longrag;
using testutil::doc;
using testutil::words;

namespace {

std::vector<Chunk> chunk_whole_docs(const Corpus& c, std::optional<std::int64_t> size) {
    const auto units = units_from_whole_documents(c);
    return chunk_units(units, c, size);
}

}  // namespace

TEST(Chunker, TilesIntoFixedWindows) {
    const auto chunks = chunk_whole_docs(Corpus({doc("A", words(1030))}), 512);
    ASSERT_EQ(chunks.size(), 3u);
    EXPECT_EQ(chunks[0].span.size(), 512u);
    EXPECT_EQ(chunks[1].span.size(), 512u);
    EXPECT_EQ(chunks[2].span.size(), 6u);
    EXPECT_EQ(chunks[0].id, "u0000000/A#0");
    EXPECT_EQ(chunks[2].id, "u0000000/A#2");
    EXPECT_EQ(chunks[2].text, "w1024 w1025 w1026 w1027 w1028 w1029");
}

TEST(Chunker, ShortDocumentIsOneChunk) {
    EXPECT_EQ(chunk_whole_docs(Corpus({doc("A", words(100))}), 512).size(), 1u);
}

TEST(Chunker, EmptyDocumentHasNoChunks) {
    EXPECT_TRUE(chunk_whole_docs(Corpus({doc("A", "")}), 512).empty());
}

TEST(Chunker, TextIsOriginalByteSpan) {
    const auto chunks = chunk_whole_docs(Corpus({doc("A", "one  two\tthree four")}), 3);
    ASSERT_EQ(chunks.size(), 2u);
    EXPECT_EQ(chunks[0].text, "one  two\tthree");
    EXPECT_EQ(chunks[1].text, "four");
}

TEST(Chunker, WholeDocumentChunk) {
    const auto chunks = chunk_whole_docs(Corpus({doc("A", words(700))}), std::nullopt);
    ASSERT_EQ(chunks.size(), 1u);
    EXPECT_EQ(chunks[0].span, (TokenRange{0, 700}));
}

TEST(Chunker, GroupedUnitChunksEachMember) {
    Corpus c({doc("A", words(5), {"B"}), doc("B", words(3), {"A"})});
    GroupingConfig cfg;
    cfg.max_tokens = 100;
    const auto units = group_documents(c, cfg);
    const auto chunks = chunk_units(units, c, 4);
    ASSERT_EQ(chunks.size(), 3u);
    for (const auto& ch : chunks) EXPECT_EQ(ch.unit_id, units[0].id);
    EXPECT_EQ(chunks[0].doc_id, "B");
}

TEST(Chunker, PassageUnitsChunkOnlyTheirSpan) {
    Corpus c({doc("A", words(10))});
    const auto units = units_from_passages(c, 4);
    const auto chunks = chunk_units(units, c, std::nullopt);
    ASSERT_EQ(chunks.size(), 3u);
    EXPECT_EQ(chunks[1].text, "w4 w5 w6 w7");
    EXPECT_EQ(chunks[1].unit_id, units[1].id);
}

TEST(Chunker, NonPositiveSizeRejected) {
    Corpus c({doc("A", words(3))});
    EXPECT_THROW(chunk_whole_docs(c, 0), ConfigError);
    EXPECT_THROW(chunk_whole_docs(c, -4), ConfigError);
}
