#include <fstream>
#include <random>

#include <gtest/gtest.h>

#include "longrag/chunk_index.hpp"
#include "longrag/errors.hpp"
#include "test_util.hpp"

using namespace longrag;

namespace {

std::vector<Chunk> chunks(std::size_t n, std::size_t units) {
    std::vector<Chunk> out;
    for (std::size_t i = 0; i < n; ++i) {
        const std::string u = "u" + std::to_string(i % units);
        out.push_back({u + "/d#" + std::to_string(i), u, "d", "", {}});
    }
    return out;
}

std::vector<EmbeddingVector> random_vectors(std::size_t n, std::size_t dim, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<float> g;
    std::vector<EmbeddingVector> out(n, EmbeddingVector(dim));
    for (auto& v : out)
        for (auto& x : v) x = g(rng);
    return out;
}

}  // namespace

TEST(ChunkIndex, Shape) {
    const auto idx = build_index(chunks(5, 2), random_vectors(5, 4, 1));
    EXPECT_EQ(idx.size(), 5u);
    EXPECT_EQ(idx.dimension(), 4u);
    EXPECT_EQ(idx.unit_ids().size(), 2u);
    EXPECT_EQ(idx.unit_id(3), "u1");
}

TEST(ChunkIndex, EmptyIndexIsValid) {
    const auto idx = build_index({}, {});
    EXPECT_TRUE(idx.empty());
    const std::vector<float> q = {1.0f, 2.0f};
    EXPECT_TRUE(idx.score(q).empty());
    EXPECT_EQ(ChunkIndex::deserialize(idx.serialize()), idx);
}

TEST(ChunkIndex, BuildValidatesInputs) {
    EXPECT_THROW(build_index(chunks(3, 1), random_vectors(2, 4, 1)), LengthMismatch);
    auto vecs = random_vectors(3, 4, 1);
    vecs[2].push_back(0.0f);
    EXPECT_THROW(build_index(chunks(3, 1), vecs), DimensionMismatch);
}

TEST(ChunkIndex, ScoresAreDotProducts) {
    const auto idx = build_index(chunks(2, 2), std::vector<EmbeddingVector>{{0.2f, 0.0f}, {0.9f, 0.0f}});
    const std::vector<float> q = {1.0f, 0.0f};
    const auto s = idx.score(q);
    ASSERT_EQ(s.size(), 2u);
    EXPECT_DOUBLE_EQ(s[0], static_cast<double>(0.2f));
    EXPECT_DOUBLE_EQ(s[1], static_cast<double>(0.9f));
    const std::vector<float> zero = {0.0f, 0.0f};
    for (double x : idx.score(zero)) EXPECT_EQ(x, 0.0);
    const std::vector<float> wrong = {1.0f};
    EXPECT_THROW(idx.score(wrong), DimensionMismatch);
}

TEST(ChunkIndex, MatchesNaiveDoubleLoop) {
    const auto vecs = random_vectors(50, 16, 2);
    const auto idx = build_index(chunks(50, 7), vecs);
    const auto q = random_vectors(1, 16, 3)[0];
    const auto s = idx.score(q);
    for (std::size_t i = 0; i < 50; ++i) {
        double expect = 0.0;
        for (std::size_t j = 0; j < 16; ++j) expect += static_cast<double>(vecs[i][j]) * q[j];
        EXPECT_NEAR(s[i], expect, 1e-6);
    }
}

TEST(ChunkIndex, SaveLoadRoundTrip) {
    testutil::TempDir dir;
    const auto idx = build_index(chunks(40, 6), random_vectors(40, 8, 4), {"hash:dim=8,seed=0", 512});
    idx.save(dir / "a.lrix");
    const auto back = ChunkIndex::load(dir / "a.lrix");
    EXPECT_EQ(back, idx);
    EXPECT_EQ(back.provenance().chunk_size, 512);
    back.save(dir / "b.lrix");
    std::ifstream a(dir / "a.lrix", std::ios::binary), b(dir / "b.lrix", std::ios::binary);
    EXPECT_EQ(std::string(std::istreambuf_iterator<char>(a), {}), std::string(std::istreambuf_iterator<char>(b), {}));
}

TEST(ChunkIndex, RejectsCorruption) {
    const auto bytes = build_index(chunks(4, 2), random_vectors(4, 3, 5)).serialize();
    auto bad_magic = bytes;
    bad_magic[0] = 'X';
    EXPECT_THROW(ChunkIndex::deserialize(bad_magic), CorruptIndex);
    EXPECT_THROW(ChunkIndex::deserialize(bytes.substr(0, bytes.size() - 3)), CorruptIndex);
    EXPECT_THROW(ChunkIndex::deserialize(""), CorruptIndex);
    auto bad_version = bytes;
    bad_version[4] = 9;
    EXPECT_THROW(ChunkIndex::deserialize(bad_version), CorruptIndex);
    try {
        ChunkIndex::deserialize(bad_magic);
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::Data);
    }
}

TEST(ChunkIndex, ReusesPrecomputedVectors) {
    const auto cs = chunks(6, 2);
    const auto vecs = random_vectors(6, 4, 6);
    const auto pre = build_index(cs, vecs);
    std::vector<Chunk> subset = {cs[4], cs[1]};
    const auto got = vectors_for_chunks(pre, subset);
    EXPECT_EQ(got[0], vecs[4]);
    EXPECT_EQ(got[1], vecs[1]);
    subset.push_back({"nope", "u0", "d", "", {}});
    EXPECT_THROW(vectors_for_chunks(pre, subset), NotFound);
}
