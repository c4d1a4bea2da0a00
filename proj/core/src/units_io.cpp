#include "jsonl.hpp"
#include "longrag/errors.hpp"
#include "longrag/file_util.hpp"
#include "longrag/grouper.hpp"

namespace longrag {

std::string serialize_units(std::span<const RetrievalUnit> units) {
    std::string out;
    for (const auto& unit : units) {
        detail::json obj;
        obj["unit_id"] = unit.id;
        obj["member_doc_ids"] = unit.members;
        obj["token_count"] = unit.token_count;
        if (unit.span) obj["span"] = {unit.span->begin, unit.span->end};
        out += obj.dump();
        out += '\n';
    }
    return out;
}

std::vector<RetrievalUnit> parse_units(std::string_view bytes, std::string_view source) {
    std::vector<RetrievalUnit> units;
    detail::for_each_jsonl(bytes, source, [&](const detail::json& obj, std::size_t line) {
        auto fail = [&](const std::string& msg) { throw ParseError(std::string(source), line, msg); };
        RetrievalUnit unit;
        unit.id = detail::require_string(obj, "unit_id", source, line);
        auto members = obj.find("member_doc_ids");
        if (members == obj.end() || !members->is_array() || members->empty())
            fail("\"member_doc_ids\" must be a non-empty array");
        for (const auto& m : *members) {
            if (!m.is_string()) fail("\"member_doc_ids\" entries must be strings");
            unit.members.push_back(m.get<std::string>());
        }
        auto count = obj.find("token_count");
        if (count == obj.end() || !count->is_number_unsigned()) fail("\"token_count\" must be a non-negative integer");
        unit.token_count = count->get<std::size_t>();
        if (auto span = obj.find("span"); span != obj.end()) {
            if (!span->is_array() || span->size() != 2 || !(*span)[0].is_number_unsigned() ||
                !(*span)[1].is_number_unsigned())
                fail("\"span\" must be [begin, end]");
            unit.span = TokenRange{(*span)[0].get<std::size_t>(), (*span)[1].get<std::size_t>()};
            if (unit.span->end < unit.span->begin || unit.members.size() != 1)
                fail("invalid passage span");
        }
        units.push_back(std::move(unit));
    });
    return units;
}

void save_units(const std::filesystem::path& path, std::span<const RetrievalUnit> units) {
    write_file_atomic(path, serialize_units(units));
}

std::vector<RetrievalUnit> load_units(const std::filesystem::path& path) {
    return parse_units(detail::read_file(path), path.string());
}

}  // namespace longrag
