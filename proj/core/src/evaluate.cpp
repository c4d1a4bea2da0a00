#include "longrag/evaluate.hpp"

#include <algorithm>
#include <cstdio>
#include <unordered_map>
#include <unordered_set>

#include "jsonl.hpp"
#include "longrag/errors.hpp"
#include "longrag/metrics.hpp"

namespace longrag {

using detail::json;

std::optional<double> Rate::value() const {
    if (denominator == 0) return std::nullopt;
    return static_cast<double>(hits) / static_cast<double>(denominator);
}

std::optional<double> Mean::value() const {
    if (denominator == 0) return std::nullopt;
    return sum / static_cast<double>(denominator);
}

std::vector<EvalCase> parse_cases(std::string_view bytes, std::string_view source) {
    std::vector<EvalCase> cases;
    std::unordered_set<std::string> seen;
    auto strings = [&](const json& obj, const char* key, std::size_t line, bool required) {
        std::vector<std::string> out;
        auto it = obj.find(key);
        if (it == obj.end() || it->is_null()) {
            if (required) throw ParseError(std::string(source), line, std::string("missing \"") + key + "\"");
            return out;
        }
        if (!it->is_array()) throw ParseError(std::string(source), line, std::string("\"") + key + "\" must be an array");
        for (const auto& v : *it) {
            if (!v.is_string()) throw ParseError(std::string(source), line, std::string("\"") + key + "\" entries must be strings");
            out.push_back(v.get<std::string>());
        }
        return out;
    };
    detail::for_each_jsonl(bytes, source, [&](const json& obj, std::size_t line) {
        EvalCase c;
        c.id = detail::require_string(obj, "id", source, line);
        c.question = detail::require_string(obj, "question", source, line);
        c.answers = strings(obj, "answers", line, true);
        if (c.answers.empty()) throw ParseError(std::string(source), line, "\"answers\" must be non-empty");
        c.gold_doc_ids = strings(obj, "gold_doc_ids", line, false);
        if (auto t = obj.find("type"); t != obj.end() && !t->is_null()) {
            if (!t->is_string()) throw ParseError(std::string(source), line, "\"type\" must be a string");
            c.type = t->get<std::string>();
        }
        if (!seen.insert(c.id).second) throw DuplicateId(c.id);
        cases.push_back(std::move(c));
    });
    return cases;
}

std::vector<EvalCase> load_cases(const std::filesystem::path& path) {
    return parse_cases(detail::read_file(path), path.string());
}

namespace {

template <typename Record>
std::vector<const Record*> align(std::span<const EvalCase> cases, std::span<const Record> records,
                                 const char* what) {
    std::unordered_map<std::string_view, std::size_t> position;
    for (std::size_t i = 0; i < cases.size(); ++i) position.emplace(cases[i].id, i);
    std::vector<const Record*> aligned(cases.size(), nullptr);
    for (const auto& r : records) {
        auto it = position.find(r.case_id);
        if (it == position.end())
            throw AlignmentError(std::string(what) + " record for unknown case " + r.case_id);
        if (aligned[it->second] != nullptr)
            throw AlignmentError(std::string("duplicate ") + what + " record for case " + r.case_id);
        aligned[it->second] = &r;
    }
    for (std::size_t i = 0; i < cases.size(); ++i) {
        if (aligned[i] == nullptr)
            throw AlignmentError(std::string("case ") + cases[i].id + " has no " + what + " record");
    }
    return aligned;
}

}  // namespace

MetricsReport evaluate_run(std::span<const EvalCase> cases,
                           std::optional<std::span<const RetrievalRecord>> retrievals,
                           std::optional<std::span<const ReaderRecord>> readings,
                           const UnitResolver* resolver, const EvalOptions& options) {
    if (cases.empty()) throw AlignmentError("evaluation needs at least one case");
    {
        std::unordered_set<std::string_view> ids;
        for (const auto& c : cases) {
            if (!ids.insert(c.id).second) throw AlignmentError("duplicate case id " + c.id);
        }
    }

    MetricsReport report;
    report.cases = cases.size();
    report.per_case.resize(cases.size());
    for (std::size_t i = 0; i < cases.size(); ++i) report.per_case[i].id = cases[i].id;

    if (retrievals) {
        if (resolver == nullptr) throw ConfigError("retrieval metrics need a unit resolver");
        const auto aligned = align(cases, *retrievals, "retrieval");
        const bool tagged = std::any_of(cases.begin(), cases.end(), [](const EvalCase& c) { return c.type.has_value(); });

        std::vector<std::size_t> ks = options.ks;
        if (ks.empty()) {
            std::size_t longest = 0;
            for (const auto* r : aligned) longest = std::max(longest, r->ranked_units.size());
            for (std::size_t k = 1; k <= longest; ++k) ks.push_back(k);
        }
        std::sort(ks.begin(), ks.end());
        ks.erase(std::unique(ks.begin(), ks.end()), ks.end());
        if (!ks.empty() && ks.front() == 0) throw ConfigError("k must be at least 1");

        std::unordered_map<std::string, std::string> text_cache;
        auto text = [&](const UnitId& id) -> const std::string& {
            auto it = text_cache.find(id);
            if (it == text_cache.end()) it = text_cache.emplace(id, resolver->text_of(resolver->units.get(id))).first;
            return it->second;
        };

        for (std::size_t i = 0; i < cases.size(); ++i) {
            const auto& c = cases[i];
            const auto& ranked = aligned[i]->ranked_units;
            auto& row = report.per_case[i];

            row.answer_recall_counted =
                    !tagged || !c.type ||
                    std::find(options.non_span_types.begin(), options.non_span_types.end(), *c.type) ==
                            options.non_span_types.end();
            if (row.answer_recall_counted) {
                for (std::size_t r = 0; r < ranked.size() && !row.answer_rank; ++r) {
                    if (answer_recall(text(ranked[r]), c.answers)) row.answer_rank = r + 1;
                }
            }
            if (!c.gold_doc_ids.empty()) {
                // Rank at which the last gold document is first covered.
                std::size_t worst = 0;
                bool all = true;
                for (const auto& gold : c.gold_doc_ids) {
                    std::size_t found = 0;
                    for (std::size_t r = 0; r < ranked.size() && found == 0; ++r) {
                        const auto& members = resolver->units.get(ranked[r]).members;
                        if (std::find(members.begin(), members.end(), gold) != members.end()) found = r + 1;
                    }
                    if (found == 0) {
                        all = false;
                        break;
                    }
                    worst = std::max(worst, found);
                }
                if (all) row.doc_rank = worst;
            }
        }

        for (std::size_t k : ks) {
            RecallAtK at{k, {}, {}};
            for (std::size_t i = 0; i < cases.size(); ++i) {
                const auto& row = report.per_case[i];
                if (row.answer_recall_counted) {
                    ++at.answer_recall.denominator;
                    if (row.answer_rank && *row.answer_rank <= k) ++at.answer_recall.hits;
                }
                if (!cases[i].gold_doc_ids.empty()) {
                    ++at.doc_recall.denominator;
                    if (row.doc_rank && *row.doc_rank <= k) ++at.doc_recall.hits;
                }
            }
            report.retrieval.push_back(at);
        }
    }

    if (readings) {
        const auto aligned = align(cases, *readings, "reader");
        Rate em, refined;
        Mean f1;
        for (std::size_t i = 0; i < cases.size(); ++i) {
            auto& row = report.per_case[i];
            const auto& pred = aligned[i]->prediction;
            row.prediction = pred;
            row.em = exact_match(pred, cases[i].answers, options.normalizer);
            row.refined_em = refined_exact_match(pred, cases[i].answers, options.normalizer);
            row.f1 = token_f1(pred, cases[i].answers, options.normalizer);
            ++em.denominator;
            ++refined.denominator;
            ++f1.denominator;
            em.hits += *row.em ? 1 : 0;
            refined.hits += *row.refined_em ? 1 : 0;
            f1.sum += *row.f1;
        }
        report.exact_match = em;
        report.refined_exact_match = refined;
        report.f1 = f1;
    }
    return report;
}

namespace {

json rate_json(const Rate& r) {
    json j;
    j["hits"] = r.hits;
    j["denominator"] = r.denominator;
    if (auto v = r.value())
        j["value"] = *v;
    else
        j["value"] = nullptr;
    return j;
}

template <typename T>
json opt_json(const std::optional<T>& v) {
    return v ? json(*v) : json(nullptr);
}

std::string fmt_value(const std::optional<double>& v) {
    if (!v) return "";
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.6f", *v);
    return buf;
}

}  // namespace

std::string report_to_json(const MetricsReport& report, bool per_case) {
    json j;
    j["cases"] = report.cases;
    j["retrieval"] = json::array();
    for (const auto& row : report.retrieval) {
        j["retrieval"].push_back(
                {{"k", row.k}, {"answer_recall", rate_json(row.answer_recall)}, {"doc_recall", rate_json(row.doc_recall)}});
    }
    j["exact_match"] = report.exact_match ? rate_json(*report.exact_match) : json(nullptr);
    j["refined_exact_match"] = report.refined_exact_match ? rate_json(*report.refined_exact_match) : json(nullptr);
    if (report.f1) {
        j["f1"] = {{"denominator", report.f1->denominator}, {"value", opt_json(report.f1->value())}};
    } else {
        j["f1"] = nullptr;
    }
    if (per_case) {
        j["per_case"] = json::array();
        for (const auto& row : report.per_case) {
            json r;
            r["id"] = row.id;
            r["answer_rank"] = opt_json(row.answer_rank);
            r["answer_recall_counted"] = row.answer_recall_counted;
            r["doc_rank"] = opt_json(row.doc_rank);
            r["prediction"] = opt_json(row.prediction);
            r["em"] = opt_json(row.em);
            r["refined_em"] = opt_json(row.refined_em);
            r["f1"] = opt_json(row.f1);
            j["per_case"].push_back(std::move(r));
        }
    }
    return j.dump(2) + "\n";
}

std::string report_tsv_header() {
    return "label\tk\tanswer_recall\tar_n\tdoc_recall\tr_n\tem\trefined_em\tf1\tqa_n\n";
}

std::string report_to_tsv_rows(const MetricsReport& report, std::string_view label) {
    const std::string qa = fmt_value(report.exact_match ? report.exact_match->value() : std::nullopt) + "\t" +
                           fmt_value(report.refined_exact_match ? report.refined_exact_match->value() : std::nullopt) +
                           "\t" + fmt_value(report.f1 ? report.f1->value() : std::nullopt) + "\t" +
                           (report.f1 ? std::to_string(report.f1->denominator) : std::string());
    std::string out;
    if (report.retrieval.empty()) {
        out += std::string(label) + "\t\t\t\t\t\t" + qa + "\n";
        return out;
    }
    for (const auto& row : report.retrieval) {
        out += std::string(label) + "\t" + std::to_string(row.k) + "\t" + fmt_value(row.answer_recall.value()) + "\t" +
               std::to_string(row.answer_recall.denominator) + "\t" + fmt_value(row.doc_recall.value()) + "\t" +
               std::to_string(row.doc_recall.denominator) + "\t" + qa + "\n";
    }
    return out;
}

}  // namespace longrag
