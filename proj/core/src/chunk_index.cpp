#include "longrag/chunk_index.hpp"

#include <bit>
#include <cstring>
#include <type_traits>
#include <unordered_map>

#include "jsonl.hpp"
#include "longrag/errors.hpp"
#include "longrag/file_util.hpp"

namespace longrag {

namespace {

constexpr char kMagic[4] = {'L', 'R', 'I', 'X'};
constexpr std::size_t kHeaderBytes = 4 + 4 + 4 + 8;

template <typename T>
void put_le(std::string& out, T value) {
    using U = std::make_unsigned_t<T>;
    auto u = static_cast<U>(value);
    for (std::size_t i = 0; i < sizeof(T); ++i) out.push_back(static_cast<char>((u >> (8 * i)) & 0xFF));
}

template <typename T>
T get_le(std::string_view in, std::size_t offset) {
    T value = 0;
    for (std::size_t i = 0; i < sizeof(T); ++i)
        value |= static_cast<T>(static_cast<unsigned char>(in[offset + i])) << (8 * i);
    return value;
}

}  // namespace

ChunkIndex build_index_from_rows(std::vector<std::string> chunk_ids, std::vector<UnitId> unit_ids,
                                 std::vector<float> data, std::size_t dim,
                                 IndexProvenance provenance) {
    if (chunk_ids.size() != unit_ids.size()) throw LengthMismatch(chunk_ids.size(), unit_ids.size());
    if (data.size() != chunk_ids.size() * dim) throw LengthMismatch(chunk_ids.size() * dim, data.size());
    require_finite(data);

    ChunkIndex index;
    index.dim_ = dim;
    index.data_ = std::move(data);
    index.provenance_ = std::move(provenance);
    std::unordered_map<std::string, std::size_t> ordinals;
    index.unit_of_row_.reserve(unit_ids.size());
    for (auto& unit : unit_ids) {
        auto [it, inserted] = ordinals.emplace(unit, index.unit_names_.size());
        if (inserted) index.unit_names_.push_back(std::move(unit));
        index.unit_of_row_.push_back(it->second);
    }
    std::unordered_map<std::string_view, bool> seen;
    for (const auto& id : chunk_ids) {
        if (!seen.emplace(id, true).second) throw DuplicateId(id);
    }
    index.chunk_ids_ = std::move(chunk_ids);
    return index;
}

ChunkIndex build_index(std::span<const Chunk> chunks, std::span<const EmbeddingVector> vectors,
                       IndexProvenance provenance) {
    if (chunks.size() != vectors.size()) throw LengthMismatch(chunks.size(), vectors.size());
    const std::size_t dim = vectors.empty() ? 0 : vectors.front().size();
    std::vector<float> data;
    data.reserve(chunks.size() * dim);
    std::vector<std::string> chunk_ids;
    std::vector<UnitId> unit_ids;
    chunk_ids.reserve(chunks.size());
    unit_ids.reserve(chunks.size());
    for (std::size_t i = 0; i < chunks.size(); ++i) {
        if (vectors[i].size() != dim) throw DimensionMismatch(dim, vectors[i].size());
        data.insert(data.end(), vectors[i].begin(), vectors[i].end());
        chunk_ids.push_back(chunks[i].id);
        unit_ids.push_back(chunks[i].unit_id);
    }
    return build_index_from_rows(std::move(chunk_ids), std::move(unit_ids), std::move(data), dim,
                                 std::move(provenance));
}

std::vector<double> ChunkIndex::score(std::span<const float> query) const {
    if (empty()) return {};
    if (query.size() != dim_) throw DimensionMismatch(dim_, query.size());
    std::vector<double> scores(size());
    const float* row_ptr = data_.data();
    for (std::size_t i = 0; i < scores.size(); ++i, row_ptr += dim_) {
        double acc = 0.0;
        for (std::size_t j = 0; j < dim_; ++j)
            acc += static_cast<double>(query[j]) * static_cast<double>(row_ptr[j]);
        scores[i] = acc;
    }
    return scores;
}

std::string ChunkIndex::serialize() const {
    detail::json trailer;
    trailer["chunks"] = detail::json::array();
    for (std::size_t i = 0; i < size(); ++i) trailer["chunks"].push_back({chunk_ids_[i], unit_id(i)});
    trailer["provenance"]["embedder"] = provenance_.embedder;
    if (provenance_.chunk_size)
        trailer["provenance"]["chunk_size"] = *provenance_.chunk_size;
    else
        trailer["provenance"]["chunk_size"] = nullptr;
    const std::string tail = trailer.dump();

    std::string out;
    out.reserve(kHeaderBytes + data_.size() * 4 + tail.size() + 8);
    out.append(kMagic, 4);
    put_le<std::uint32_t>(out, kVersion);
    put_le<std::uint32_t>(out, static_cast<std::uint32_t>(dim_));
    put_le<std::uint64_t>(out, size());
    for (float v : data_) put_le<std::uint32_t>(out, std::bit_cast<std::uint32_t>(v));
    out += tail;
    put_le<std::uint64_t>(out, tail.size());
    return out;
}

ChunkIndex ChunkIndex::deserialize(std::string_view bytes) {
    if (bytes.size() < kHeaderBytes + 8) throw CorruptIndex("index file too short");
    if (std::memcmp(bytes.data(), kMagic, 4) != 0) throw CorruptIndex("bad magic bytes");
    const auto version = get_le<std::uint32_t>(bytes, 4);
    if (version != kVersion) throw CorruptIndex("unsupported index version " + std::to_string(version));
    const std::size_t dim = get_le<std::uint32_t>(bytes, 8);
    const auto rows = get_le<std::uint64_t>(bytes, 12);
    const auto tail_len = get_le<std::uint64_t>(bytes, bytes.size() - 8);

    const std::size_t available = bytes.size() - kHeaderBytes - 8;
    if (dim != 0 && rows > available / 4 / dim) throw CorruptIndex("row count exceeds file size");
    const std::size_t float_bytes = static_cast<std::size_t>(rows) * dim * 4;
    if (tail_len > available || float_bytes != available - tail_len)
        throw CorruptIndex("section lengths do not match file size");

    std::vector<float> data(static_cast<std::size_t>(rows) * dim);
    for (std::size_t i = 0; i < data.size(); ++i)
        data[i] = std::bit_cast<float>(get_le<std::uint32_t>(bytes, kHeaderBytes + 4 * i));

    detail::json trailer;
    try {
        trailer = detail::json::parse(bytes.substr(kHeaderBytes + float_bytes, tail_len));
    } catch (const detail::json::parse_error& e) {
        throw CorruptIndex(std::string("bad trailer: ") + e.what());
    }
    if (!trailer.is_object() || !trailer.contains("chunks") || !trailer["chunks"].is_array())
        throw CorruptIndex("trailer lacks chunk table");
    const auto& table = trailer["chunks"];
    if (table.size() != rows) throw CorruptIndex("chunk table length differs from row count");

    std::vector<std::string> chunk_ids;
    std::vector<UnitId> unit_ids;
    chunk_ids.reserve(rows);
    unit_ids.reserve(rows);
    for (const auto& entry : table) {
        if (!entry.is_array() || entry.size() != 2 || !entry[0].is_string() || !entry[1].is_string())
            throw CorruptIndex("malformed chunk table entry");
        chunk_ids.push_back(entry[0].get<std::string>());
        unit_ids.push_back(entry[1].get<std::string>());
    }

    IndexProvenance prov;
    if (auto p = trailer.find("provenance"); p != trailer.end() && p->is_object()) {
        if (auto e = p->find("embedder"); e != p->end() && e->is_string()) prov.embedder = e->get<std::string>();
        if (auto c = p->find("chunk_size"); c != p->end() && c->is_number_integer())
            prov.chunk_size = c->get<std::int64_t>();
    }
    try {
        return build_index_from_rows(std::move(chunk_ids), std::move(unit_ids), std::move(data), dim,
                                     std::move(prov));
    } catch (const Error& e) {
        throw CorruptIndex(e.what());
    }
}

void ChunkIndex::save(const std::filesystem::path& path) const { write_file_atomic(path, serialize()); }

ChunkIndex ChunkIndex::load(const std::filesystem::path& path) {
    return deserialize(detail::read_file(path));
}

std::vector<EmbeddingVector> vectors_for_chunks(const ChunkIndex& precomputed,
                                                std::span<const Chunk> chunks) {
    std::unordered_map<std::string_view, std::size_t> rows;
    rows.reserve(precomputed.size());
    for (std::size_t i = 0; i < precomputed.size(); ++i) rows.emplace(precomputed.chunk_id(i), i);

    std::vector<EmbeddingVector> out;
    out.reserve(chunks.size());
    for (const auto& chunk : chunks) {
        auto it = rows.find(chunk.id);
        if (it == rows.end()) throw NotFound("precomputed vectors lack chunk " + chunk.id);
        if (precomputed.unit_id(it->second) != chunk.unit_id)
            throw AlignmentError("precomputed chunk " + chunk.id + " belongs to unit " +
                                 precomputed.unit_id(it->second) + ", expected " + chunk.unit_id);
        auto row = precomputed.row(it->second);
        out.emplace_back(row.begin(), row.end());
    }
    return out;
}

}  // namespace longrag
