// longrag: command-line driver for the long-unit retrieval pipeline.
//
//   longrag <ingest|group|index|retrieve|answer|eval|sweep> --config cfg.json [overrides]
//
// Exit codes: 0 success, 2 config error, 3 upstream-service error, 4 data error.
// Failures print a single JSON object on stderr.

#include <cstdio>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>
#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include "longrag/config.hpp"
#include "longrag/errors.hpp"
#include "longrag/evaluate.hpp"
#include "longrag/pipeline.hpp"

namespace {

using nlohmann::json;

struct Overrides {
    std::string config_path;
    std::string out_dir;
    std::optional<std::uint64_t> seed;
    std::optional<std::size_t> k;
    std::string mode;
    std::optional<std::int64_t> max_tokens;
    std::string chunk_size;
    std::string budget;
    std::optional<std::size_t> workers;
    std::string questions;
    bool symmetric = false;
    bool quiet = false;
};

int fail(const std::string& code, const std::string& kind, const std::string& message, int exit_code) {
    json err = {{"error", code}, {"kind", kind}, {"message", message}};
    std::cerr << err.dump() << std::endl;
    return exit_code;
}

const char* kind_name(longrag::ErrorKind kind) {
    switch (kind) {
        case longrag::ErrorKind::Config:
            return "config";
        case longrag::ErrorKind::Upstream:
            return "upstream";
        case longrag::ErrorKind::Data:
            return "data";
    }
    return "unknown";
}

longrag::PipelineConfig resolve_config(const Overrides& o) {
    longrag::PipelineConfig cfg;
    if (!o.config_path.empty()) cfg = longrag::load_config(o.config_path);
    if (!o.out_dir.empty()) cfg.out_dir = o.out_dir;
    if (o.seed) cfg.seed = *o.seed;
    if (o.k) cfg.k = *o.k;
    if (!o.mode.empty()) cfg.grouping.mode = longrag::parse_grouping_mode(o.mode);
    if (o.max_tokens) cfg.grouping.max_tokens = *o.max_tokens;
    if (o.symmetric) cfg.grouping.symmetric_links = true;
    if (!o.chunk_size.empty()) {
        if (o.chunk_size == "whole") {
            cfg.chunk_size = std::nullopt;
        } else {
            try {
                cfg.chunk_size = std::stoll(o.chunk_size);
            } catch (const std::exception&) {
                throw longrag::ConfigError("--chunk-size must be an integer or \"whole\"");
            }
        }
    }
    if (!o.budget.empty()) {
        if (o.budget == "none") {
            cfg.budget_tokens = std::nullopt;
        } else {
            try {
                cfg.budget_tokens = static_cast<std::size_t>(std::stoull(o.budget));
            } catch (const std::exception&) {
                throw longrag::ConfigError("--budget must be a positive integer or \"none\"");
            }
        }
    }
    if (o.workers) cfg.workers = *o.workers;
    cfg.grouping.tokenizer = cfg.tokenizer;
    cfg.validate();
    return cfg;
}

json report_summary(const longrag::MetricsReport& report) {
    json j;
    j["cases"] = report.cases;
    for (const auto& row : report.retrieval) {
        auto value = [](const longrag::Rate& r) { return r.value() ? json(*r.value()) : json(nullptr); };
        j["retrieval"].push_back({{"k", row.k}, {"answer_recall", value(row.answer_recall)},
                                  {"doc_recall", value(row.doc_recall)}});
    }
    if (report.exact_match) j["exact_match"] = report.exact_match->value().value_or(0.0);
    if (report.refined_exact_match) j["refined_exact_match"] = report.refined_exact_match->value().value_or(0.0);
    if (report.f1) j["f1"] = report.f1->value().value_or(0.0);
    return j;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Long retrieval units: group, index, retrieve, read and evaluate"};
    app.require_subcommand(1);
    Overrides o;

    app.add_option("--config", o.config_path, "Pipeline config (JSON)");
    app.add_option("--out", o.out_dir, "Output directory for artifacts");
    app.add_option("--seed", o.seed, "Seed for the mock embedder");
    app.add_option("--workers", o.workers, "Worker threads for retrieval");
    app.add_flag("-q,--quiet", o.quiet, "Only log warnings and errors");

    auto* ingest = app.add_subcommand("ingest", "Load and validate the corpus, write corpus_stats.json");
    auto* group = app.add_subcommand("group", "Form retrieval units, write units.jsonl");
    group->add_option("--mode", o.mode, "group | whole-document | passage");
    group->add_option("--max-tokens", o.max_tokens, "Token budget per group");
    group->add_flag("--symmetric", o.symmetric, "Treat links as undirected");
    auto* index = app.add_subcommand("index", "Chunk and embed units, write index.lrix");
    index->add_option("--chunk-size", o.chunk_size, "Chunk size in tokens or \"whole\"");
    auto* retrieve = app.add_subcommand("retrieve", "Retrieve top-k units per question");
    retrieve->add_option("--k", o.k, "Units per question");
    retrieve->add_option("--budget", o.budget, "Context token budget or \"none\"");
    retrieve->add_option("--questions", o.questions, "Questions file (defaults to eval cases)");
    auto* answer = app.add_subcommand("answer", "Run the reader over retrieval results");
    auto* eval = app.add_subcommand("eval", "Compute retrieval and QA metrics");
    auto* sweep = app.add_subcommand("sweep", "Run the configured ablation grid");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        return fail("UsageError", "config", e.what(), 2);
    }
    auto logger = spdlog::get("longrag");
    spdlog::set_default_logger(logger ? logger : spdlog::stderr_color_mt("longrag"));
    spdlog::set_level(o.quiet ? spdlog::level::warn : spdlog::level::info);

    try {
        const auto cfg = resolve_config(o);
        json out;
        if (ingest->parsed()) {
            const auto s = longrag::cmd_ingest(cfg);
            out = {{"documents", s.documents}, {"total_tokens", s.total_tokens},
                   {"resolvable_links", s.links.resolvable}, {"dangling_links", s.links.dangling}};
        } else if (group->parsed()) {
            out = {{"units", longrag::cmd_group(cfg)}, {"path", cfg.units_file().string()}};
        } else if (index->parsed()) {
            out = {{"chunks", longrag::cmd_index(cfg)}, {"path", cfg.index_file().string()}};
        } else if (retrieve->parsed()) {
            std::optional<std::filesystem::path> q;
            if (!o.questions.empty()) q = o.questions;
            out = {{"questions", longrag::cmd_retrieve(cfg, q)}, {"path", cfg.retrieval_file().string()}};
        } else if (answer->parsed()) {
            out = {{"answered", longrag::cmd_answer(cfg)}, {"path", cfg.answers_file().string()}};
        } else if (eval->parsed()) {
            out = report_summary(longrag::cmd_eval(cfg));
        } else if (sweep->parsed()) {
            out = {{"grid_points", longrag::cmd_sweep(cfg)}, {"path", (cfg.out_dir / "sweep.tsv").string()}};
        }
        std::cout << out.dump() << std::endl;
        return 0;
    } catch (const longrag::Error& e) {
        return fail(e.code(), kind_name(e.kind()), e.what(), longrag::exit_code_for(e.kind()));
    } catch (const std::exception& e) {
        return fail("InternalError", "internal", e.what(), 1);
    }
}
