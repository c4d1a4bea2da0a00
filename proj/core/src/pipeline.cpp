#include "longrag/pipeline.hpp"

#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include "jsonl.hpp"
#include "longrag/chunk_index.hpp"
#include "longrag/chunker.hpp"
#include "longrag/errors.hpp"
#include "longrag/file_util.hpp"
#include "longrag/grouper.hpp"
#include "longrag/parallel.hpp"
#include "longrag/reader.hpp"

namespace longrag {

using detail::json;

namespace {

spdlog::logger& log() {
    static const auto logger = [] {
        if (auto existing = spdlog::get("longrag")) return existing;
        return spdlog::stderr_color_mt("longrag");
    }();
    return *logger;
}

void require_input(const std::filesystem::path& path, const char* what) {
    if (path.empty()) throw ConfigError(std::string(what) + " path is not configured");
    if (!std::filesystem::exists(path))
        throw IoError(std::string(what) + " not found: " + path.string() + " (run the earlier stage first)");
}

std::string join_lines(const std::vector<std::string>& lines) {
    std::string out;
    for (const auto& l : lines) {
        out += l;
        out += '\n';
    }
    return out;
}

}  // namespace

std::unique_ptr<Embedder> make_embedder(const EmbedderSettings& settings, std::uint64_t seed) {
    if (settings.kind == EmbedderKind::Mock)
        return std::make_unique<HashEmbedder>(settings.dim, seed, settings.batch_size);
    HttpEmbedderConfig http;
    http.url = settings.url;
    http.dim = settings.dim;
    http.batch_size = settings.batch_size;
    http.timeout = settings.timeout;
    http.retry = settings.retry;
    http.api_key_env = settings.api_key_env;
    return std::make_unique<HttpEmbedder>(std::move(http));
}

std::unique_ptr<ChatClient> make_chat_client(const ReaderSettings& settings) {
    switch (settings.kind) {
        case ReaderKind::None:
            throw ConfigError("no reader configured");
        case ReaderKind::Scripted:
            return std::make_unique<ScriptedChatClient>(ScriptedChatClient::from_file(*settings.script));
        case ReaderKind::Http: {
            HttpChatConfig http;
            http.url = settings.url;
            http.model = settings.model;
            http.temperature = settings.temperature;
            http.timeout = settings.timeout;
            http.response_format = settings.response_format;
            http.headers = settings.headers;
            http.api_key_env = settings.api_key_env;
            return std::make_unique<HttpChatClient>(std::move(http));
        }
    }
    throw ConfigError("unknown reader kind");
}

PromptTemplate make_prompt_template(const ReaderSettings& settings) {
    auto tpl = default_prompt_template();
    if (settings.exemplars) {
        tpl.exemplars = load_exemplars(*settings.exemplars);
        tpl.exemplar_count = tpl.exemplars.size();
    }
    if (settings.exemplar_count) tpl.exemplar_count = *settings.exemplar_count;
    if (tpl.exemplar_count > tpl.exemplars.size())
        throw ConfigError("exemplar_count exceeds the available exemplars");
    return tpl;
}

IngestSummary cmd_ingest(const PipelineConfig& cfg) {
    require_input(cfg.corpus, "corpus");
    const auto corpus = load_corpus(cfg.corpus);
    IngestSummary summary;
    summary.documents = corpus.size();
    for (const auto& doc : corpus) summary.total_tokens += document_tokens(doc, cfg.tokenizer);
    summary.links = validate_links(corpus);

    json stats;
    stats["documents"] = summary.documents;
    stats["total_tokens"] = summary.total_tokens;
    stats["tokenizer"] = {{"scheme", to_string(cfg.tokenizer.scheme)},
                          {"normalization", to_string(cfg.tokenizer.normalization)}};
    stats["links"]["resolvable"] = summary.links.resolvable;
    stats["links"]["dangling"] = summary.links.dangling;
    stats["links"]["dangling_pairs"] = json::array();
    for (const auto& [src, dst] : summary.links.dangling_pairs)
        stats["links"]["dangling_pairs"].push_back({src, dst});
    write_file_atomic(cfg.stats_file(), stats.dump(2) + "\n");
    log().info("ingest: {} documents, {} tokens, {} resolvable / {} dangling links", summary.documents,
                 summary.total_tokens, summary.links.resolvable, summary.links.dangling);
    return summary;
}

std::size_t cmd_group(const PipelineConfig& cfg) {
    require_input(cfg.corpus, "corpus");
    const auto corpus = load_corpus(cfg.corpus);
    auto grouping = cfg.grouping;
    grouping.tokenizer = cfg.tokenizer;
    const auto units = build_units(corpus, grouping);
    save_units(cfg.units_file(), units);
    log().info("group: {} documents -> {} units ({})", corpus.size(), units.size(), to_string(grouping.mode));
    return units.size();
}

std::size_t cmd_index(const PipelineConfig& cfg) {
    require_input(cfg.corpus, "corpus");
    require_input(cfg.units_file(), "units file");
    const auto corpus = load_corpus(cfg.corpus);
    const auto units = load_units(cfg.units_file());
    const auto chunks = chunk_units(units, corpus, cfg.chunk_size, cfg.tokenizer);

    std::vector<EmbeddingVector> vectors;
    std::string embedder_id;
    if (cfg.embedder.precomputed_vectors) {
        require_input(*cfg.embedder.precomputed_vectors, "precomputed vectors");
        const auto pre = ChunkIndex::load(*cfg.embedder.precomputed_vectors);
        vectors = vectors_for_chunks(pre, chunks);
        embedder_id = pre.provenance().embedder;
    } else {
        auto embedder = make_embedder(cfg.embedder, cfg.seed);
        std::vector<std::string> texts;
        texts.reserve(chunks.size());
        for (const auto& c : chunks) texts.push_back(c.text);
        vectors = embed_texts(texts, *embedder, cfg.embedder.concurrency);
        embedder_id = embedder->identifier();
    }
    const auto index = build_index(chunks, vectors, {embedder_id, cfg.chunk_size});
    index.save(cfg.index_file());
    log().info("index: {} chunks from {} units, dim {}", index.size(), units.size(), index.dimension());
    return index.size();
}

std::string serialize_retrieval(const RetrievalResult& r) {
    json j;
    j["id"] = r.case_id;
    j["question"] = r.question;
    j["k"] = r.k;
    j["units"] = json::array();
    for (const auto& u : r.units)
        j["units"].push_back({{"unit_id", u.unit_id}, {"score", u.score}, {"best_chunk_id", u.best_chunk_id}});
    j["context_unit_ids"] = r.context_unit_ids;
    j["context_tokens"] = r.context_tokens;
    return j.dump();
}

std::vector<RetrievalResult> load_retrieval(const std::filesystem::path& path) {
    const auto source = path.string();
    std::vector<RetrievalResult> out;
    detail::for_each_jsonl(detail::read_file(path), source, [&](const json& j, std::size_t line) {
        try {
            RetrievalResult r;
            r.case_id = j.at("id").get<std::string>();
            r.question = j.at("question").get<std::string>();
            r.k = j.at("k").get<std::size_t>();
            for (const auto& u : j.at("units"))
                r.units.push_back({u.at("unit_id").get<std::string>(), u.at("score").get<double>(),
                                   u.at("best_chunk_id").get<std::string>()});
            r.context_unit_ids = j.at("context_unit_ids").get<std::vector<std::string>>();
            r.context_tokens = j.at("context_tokens").get<std::size_t>();
            out.push_back(std::move(r));
        } catch (const json::exception& e) {
            throw ParseError(source, line, e.what());
        }
    });
    return out;
}

std::size_t cmd_retrieve(const PipelineConfig& cfg, const std::optional<std::filesystem::path>& questions) {
    const auto cases_path = questions.value_or(cfg.cases);
    require_input(cfg.corpus, "corpus");
    require_input(cfg.units_file(), "units file");
    require_input(cfg.index_file(), "index file");
    require_input(cases_path, "questions file");

    const auto corpus = load_corpus(cfg.corpus);
    const auto units = load_units(cfg.units_file());
    const UnitCatalog catalog(units);
    const auto index = ChunkIndex::load(cfg.index_file());
    for (const auto& id : index.unit_ids()) {
        if (!catalog.contains(id)) throw AlignmentError("index references unknown unit " + id);
    }
    const auto cases = load_cases(cases_path);

    auto embedder = make_embedder(cfg.embedder, cfg.seed);
    std::vector<std::string> texts;
    texts.reserve(cases.size());
    for (const auto& c : cases) texts.push_back(c.question);
    const auto queries = embed_texts(texts, *embedder, cfg.embedder.concurrency);

    // Rank deep enough for every evaluated k; the reader context still uses the top k.
    std::size_t depth = cfg.k;
    for (std::size_t k : cfg.eval_ks) depth = std::max(depth, k);

    std::vector<std::string> lines(cases.size());
    parallel_for(cases.size(), cfg.workers, [&](std::size_t i) {
        RetrievalResult r;
        r.case_id = cases[i].id;
        r.question = cases[i].question;
        r.k = cfg.k;
        r.units = retrieve_units(index, queries[i], depth);
        const std::span<const ScoredUnit> top(r.units.data(), std::min(cfg.k, r.units.size()));
        const auto ctx = aggregate_context(top, catalog, corpus, cfg.budget_tokens, cfg.tokenizer);
        r.context_unit_ids = ctx.unit_ids;
        r.context_tokens = ctx.total_tokens;
        lines[i] = serialize_retrieval(r);
    });
    write_file_atomic(cfg.retrieval_file(), join_lines(lines));
    log().info("retrieve: {} questions, k={}", cases.size(), cfg.k);
    return cases.size();
}

std::string serialize_answer(const AnswerResult& a) {
    json j;
    j["id"] = a.case_id;
    j["mode"] = a.mode;
    j["long_answer"] = a.long_answer;
    j["short_answer"] = a.short_answer;
    if (a.error_code) {
        j["error"] = {{"code", *a.error_code}, {"message", a.error_message.value_or("")}};
    } else {
        j["error"] = nullptr;
    }
    j["transcripts"] = json::array();
    for (const auto& t : a.transcripts) j["transcripts"].push_back({{"prompt", t.prompt}, {"response", t.response}});
    return j.dump();
}

std::vector<AnswerResult> load_answers(const std::filesystem::path& path) {
    const auto source = path.string();
    std::vector<AnswerResult> out;
    detail::for_each_jsonl(detail::read_file(path), source, [&](const json& j, std::size_t line) {
        try {
            AnswerResult a;
            a.case_id = j.at("id").get<std::string>();
            a.mode = j.at("mode").get<std::string>();
            a.long_answer = j.at("long_answer").get<std::string>();
            a.short_answer = j.at("short_answer").get<std::string>();
            if (const auto& e = j.at("error"); !e.is_null()) {
                a.error_code = e.at("code").get<std::string>();
                a.error_message = e.at("message").get<std::string>();
            }
            for (const auto& t : j.at("transcripts"))
                a.transcripts.push_back({t.at("prompt").get<std::string>(), t.at("response").get<std::string>()});
            out.push_back(std::move(a));
        } catch (const json::exception& e) {
            throw ParseError(source, line, e.what());
        }
    });
    return out;
}

std::size_t cmd_answer(const PipelineConfig& cfg) {
    require_input(cfg.corpus, "corpus");
    require_input(cfg.units_file(), "units file");
    require_input(cfg.retrieval_file(), "retrieval results");
    const auto corpus = load_corpus(cfg.corpus);
    const auto units = load_units(cfg.units_file());
    const UnitCatalog catalog(units);
    const auto retrievals = load_retrieval(cfg.retrieval_file());

    auto llm = make_chat_client(cfg.reader);
    const auto tpl = make_prompt_template(cfg.reader);
    ReaderOptions opts;
    opts.short_context_threshold = cfg.reader.short_context_threshold;
    opts.retry = cfg.reader.retry;

    std::vector<std::string> lines(retrievals.size());
    parallel_for(retrievals.size(), cfg.reader.max_in_flight, [&](std::size_t i) {
        const auto& r = retrievals[i];
        std::vector<ScoredUnit> kept;
        for (const auto& id : r.context_unit_ids) kept.push_back({id, 0.0, {}});
        const auto ctx = aggregate_context(kept, catalog, corpus, std::nullopt, cfg.tokenizer);

        AnswerResult a;
        a.case_id = r.case_id;
        a.mode = ctx.total_tokens < opts.short_context_threshold ? "single-turn" : "two-turn";
        try {
            auto result = read(r.question, ctx, *llm, tpl, opts);
            a.long_answer = std::move(result.long_answer);
            a.short_answer = std::move(result.short_answer);
            a.transcripts = std::move(result.transcripts);
        } catch (const EmptyCompletion& e) {
            // Keep the salvageable long answer; the case scores as a miss.
            a.long_answer = e.partial();
            a.error_code = e.code();
            a.error_message = e.what();
        }
        lines[i] = serialize_answer(a);
    });
    write_file_atomic(cfg.answers_file(), join_lines(lines));
    log().info("answer: {} questions", retrievals.size());
    return retrievals.size();
}

MetricsReport cmd_eval(const PipelineConfig& cfg) {
    require_input(cfg.cases, "cases file");
    const auto cases = load_cases(cfg.cases);

    std::vector<RetrievalRecord> retrieval_records;
    std::vector<ReaderRecord> reader_records;
    const bool have_retrieval = std::filesystem::exists(cfg.retrieval_file());
    const bool have_answers = std::filesystem::exists(cfg.answers_file());
    if (!have_retrieval && !have_answers)
        throw IoError("nothing to evaluate: neither " + cfg.retrieval_file().string() + " nor " +
                      cfg.answers_file().string() + " exists");

    std::optional<Corpus> corpus;
    std::vector<RetrievalUnit> units;
    std::optional<UnitCatalog> catalog;
    std::optional<UnitResolver> resolver;
    if (have_retrieval) {
        require_input(cfg.corpus, "corpus");
        require_input(cfg.units_file(), "units file");
        corpus = load_corpus(cfg.corpus);
        units = load_units(cfg.units_file());
        catalog.emplace(units);
        for (const auto& r : load_retrieval(cfg.retrieval_file())) {
            RetrievalRecord rec{r.case_id, {}};
            for (const auto& u : r.units) rec.ranked_units.push_back(u.unit_id);
            retrieval_records.push_back(std::move(rec));
        }
        resolver.emplace(UnitResolver{*catalog, [&](const RetrievalUnit& u) {
                                          return unit_text(u, *corpus, cfg.tokenizer);
                                      }});
    }
    if (have_answers) {
        for (const auto& a : load_answers(cfg.answers_file())) reader_records.push_back({a.case_id, a.short_answer});
    }

    EvalOptions opts;
    opts.ks = cfg.eval_ks;
    opts.normalizer = cfg.answer_normalizer;
    const auto report = evaluate_run(
            cases, have_retrieval ? std::optional<std::span<const RetrievalRecord>>(retrieval_records) : std::nullopt,
            have_answers ? std::optional<std::span<const ReaderRecord>>(reader_records) : std::nullopt,
            resolver ? &*resolver : nullptr, opts);
    write_file_atomic(cfg.report_json_file(), report_to_json(report));
    write_file_atomic(cfg.report_tsv_file(), report_tsv_header() + report_to_tsv_rows(report, "run"));
    log().info("eval: {} cases", report.cases);
    return report;
}

namespace {

std::string chunk_label(const std::optional<std::int64_t>& cs) {
    return cs ? std::to_string(*cs) : std::string("whole");
}

std::string budget_label(const std::optional<std::size_t>& b) {
    return b ? std::to_string(*b) : std::string("none");
}

}  // namespace

std::vector<std::string> cmd_sweep(const PipelineConfig& cfg) {
    auto modes = cfg.sweep.modes.empty() ? std::vector<GroupingMode>{cfg.grouping.mode} : cfg.sweep.modes;
    auto chunk_sizes = cfg.sweep.chunk_sizes.empty() ? std::vector<std::optional<std::int64_t>>{cfg.chunk_size}
                                                     : cfg.sweep.chunk_sizes;
    auto ks = cfg.sweep.ks.empty() ? std::vector<std::size_t>{cfg.k} : cfg.sweep.ks;
    auto budgets = cfg.sweep.budgets.empty() ? std::vector<std::optional<std::size_t>>{cfg.budget_tokens}
                                             : cfg.sweep.budgets;

    const auto sweep_dir = cfg.out_dir / "sweep";
    std::string tsv = report_tsv_header();
    std::vector<std::string> labels;
    for (auto mode : modes) {
        for (const auto& cs : chunk_sizes) {
            PipelineConfig base = cfg;
            base.grouping.mode = mode;
            base.chunk_size = cs;
            const auto shared = sweep_dir / (std::string(to_string(mode)) + "_c" + chunk_label(cs));
            base.out_dir = shared;
            base.units_path = shared / "units.jsonl";
            base.index_path = shared / "index.lrix";
            base.validate();
            cmd_group(base);
            cmd_index(base);

            for (std::size_t k : ks) {
                for (const auto& budget : budgets) {
                    PipelineConfig point = base;
                    point.k = k;
                    point.budget_tokens = budget;
                    point.eval_ks = {k};
                    const std::string label = std::string(to_string(mode)) + "_c" + chunk_label(cs) + "_k" +
                                              std::to_string(k) + "_b" + budget_label(budget);
                    point.out_dir = sweep_dir / label;
                    point.validate();
                    cmd_retrieve(point);
                    if (point.reader.kind != ReaderKind::None) cmd_answer(point);
                    const auto report = cmd_eval(point);
                    tsv += report_to_tsv_rows(report, label);
                    labels.push_back(label);
                }
            }
        }
    }
    write_file_atomic(cfg.out_dir / "sweep.tsv", tsv);
    log().info("sweep: {} grid points", labels.size());
    return labels;
}

}  // namespace longrag
