#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "longrag/chunker.hpp"
#include "longrag/embedder.hpp"

namespace longrag {

struct IndexProvenance {
    std::string embedder;
    /// Chunk window in tokens; nullopt when each document was one chunk.
    std::optional<std::int64_t> chunk_size;

    friend bool operator==(const IndexProvenance&, const IndexProvenance&) = default;
};

/// Flat, immutable store of chunk embeddings for exact inner-product search.
///
/// On-disk layout (little-endian):
///
///     "LRIX"  u32 version=1  u32 dim  u64 rows
///     rows * dim float32, row-major
///     JSON trailer {"chunks": [[chunk_id, unit_id], ...], "provenance": {...}}
///     u64 trailer length
class ChunkIndex {
public:
    static constexpr std::uint32_t kVersion = 1;

    ChunkIndex() = default;

    std::size_t dimension() const noexcept { return dim_; }
    std::size_t size() const noexcept { return chunk_ids_.size(); }
    bool empty() const noexcept { return chunk_ids_.empty(); }

    std::span<const float> row(std::size_t i) const { return {data_.data() + i * dim_, dim_}; }
    const std::string& chunk_id(std::size_t i) const { return chunk_ids_.at(i); }
    const UnitId& unit_id(std::size_t i) const { return unit_names_.at(unit_of_row_.at(i)); }
    const IndexProvenance& provenance() const noexcept { return provenance_; }

    /// Distinct unit ids, in order of first appearance.
    std::span<const UnitId> unit_ids() const noexcept { return unit_names_; }
    /// Position of the row's unit in unit_ids().
    std::size_t unit_ordinal(std::size_t i) const { return unit_of_row_.at(i); }

    /// Raw inner product of `query` with every row, accumulated in double.
    /// Throws DimensionMismatch unless the index is empty.
    std::vector<double> score(std::span<const float> query) const;

    std::string serialize() const;
    static ChunkIndex deserialize(std::string_view bytes);
    void save(const std::filesystem::path& path) const;
    static ChunkIndex load(const std::filesystem::path& path);

    friend bool operator==(const ChunkIndex&, const ChunkIndex&) = default;

private:
    friend ChunkIndex build_index(std::span<const Chunk>, std::span<const EmbeddingVector>,
                                  IndexProvenance);
    friend ChunkIndex build_index_from_rows(std::vector<std::string>, std::vector<UnitId>,
                                            std::vector<float>, std::size_t, IndexProvenance);

    std::size_t dim_ = 0;
    std::vector<float> data_;
    std::vector<std::string> chunk_ids_;
    std::vector<std::size_t> unit_of_row_;
    std::vector<UnitId> unit_names_;
    IndexProvenance provenance_;
};

/// Builds an index with one row per chunk. Throws LengthMismatch when the
/// counts differ, DimensionMismatch on ragged vectors and a data error on
/// non-finite values.
ChunkIndex build_index(std::span<const Chunk> chunks, std::span<const EmbeddingVector> vectors,
                       IndexProvenance provenance = {});

/// Low-level constructor used by the loader and by precomputed-vector input.
ChunkIndex build_index_from_rows(std::vector<std::string> chunk_ids, std::vector<UnitId> unit_ids,
                                 std::vector<float> data, std::size_t dim,
                                 IndexProvenance provenance = {});

/// Reorders the vectors of a precomputed index file to match `chunks`.
/// Throws NotFound when a chunk id is absent and DataError-kind errors when
/// a stored row is attached to a different unit.
std::vector<EmbeddingVector> vectors_for_chunks(const ChunkIndex& precomputed,
                                                std::span<const Chunk> chunks);

}  // namespace longrag
