#include "longrag/config.hpp"

#include <set>

#include "jsonl.hpp"
#include "longrag/errors.hpp"

namespace longrag {

using detail::json;

namespace {

void check_keys(const json& obj, std::string_view where, std::initializer_list<const char*> allowed) {
    if (!obj.is_object()) throw ConfigError(std::string(where) + " must be an object");
    std::set<std::string> names(allowed.begin(), allowed.end());
    for (const auto& [key, _] : obj.items()) {
        if (!names.count(key)) throw ConfigError("unknown key \"" + key + "\" in " + std::string(where));
    }
}

template <typename T>
T get(const json& obj, const char* key, T fallback) {
    auto it = obj.find(key);
    if (it == obj.end() || it->is_null()) return fallback;
    try {
        return it->get<T>();
    } catch (const json::exception&) {
        throw ConfigError(std::string("bad value for \"") + key + "\"");
    }
}

std::size_t get_count(const json& obj, const char* key, std::size_t fallback) {
    auto it = obj.find(key);
    if (it == obj.end() || it->is_null()) return fallback;
    if (!it->is_number_integer() || it->get<std::int64_t>() < 0)
        throw ConfigError(std::string("\"") + key + "\" must be a non-negative integer");
    return it->get<std::size_t>();
}

std::filesystem::path resolve(const std::filesystem::path& base, const std::string& p) {
    std::filesystem::path path(p);
    return path.is_absolute() ? path : base / path;
}

std::optional<std::int64_t> parse_chunk_size(const json& v) {
    if (v.is_string()) {
        if (v.get<std::string>() == "whole") return std::nullopt;
        throw ConfigError("chunk size must be an integer or \"whole\"");
    }
    if (!v.is_number_integer()) throw ConfigError("chunk size must be an integer or \"whole\"");
    return v.get<std::int64_t>();
}

std::optional<std::size_t> parse_budget(const json& v) {
    if (v.is_null()) return std::nullopt;
    if (!v.is_number_integer() || v.get<std::int64_t>() <= 0)
        throw ConfigError("budget must be a positive integer or null");
    return v.get<std::size_t>();
}

void parse_retry(const json& obj, RetryPolicy& retry) {
    retry.max_retries = get<int>(obj, "max_retries", retry.max_retries);
    retry.initial_backoff = std::chrono::milliseconds(
            get<std::int64_t>(obj, "initial_backoff_ms", retry.initial_backoff.count()));
}

}  // namespace

void PipelineConfig::validate() const {
    if (k == 0) throw ConfigError("k must be at least 1");
    if (grouping.mode == GroupingMode::Group && grouping.max_tokens <= 0)
        throw ConfigError("grouping.max_tokens must be positive");
    if (grouping.mode == GroupingMode::Passage && grouping.passage_tokens <= 0)
        throw ConfigError("grouping.passage_tokens must be positive");
    if (chunk_size && *chunk_size <= 0) throw ConfigError("chunk_size must be positive or \"whole\"");
    if (budget_tokens && *budget_tokens == 0) throw ConfigError("budget_tokens must be positive");
    if (embedder.kind == EmbedderKind::Http && embedder.url.empty())
        throw ConfigError("embedder.url is required for the http embedder");
    if (embedder.batch_size == 0) throw ConfigError("embedder.batch_size must be positive");
    if (reader.kind == ReaderKind::Http && reader.url.empty())
        throw ConfigError("reader.url is required for the http reader");
    if (reader.kind == ReaderKind::Scripted && !reader.script)
        throw ConfigError("reader.script is required for the scripted reader");
    for (auto k_value : eval_ks) {
        if (k_value == 0) throw ConfigError("eval.ks entries must be at least 1");
    }
}

PipelineConfig parse_config(std::string_view json_text, const std::filesystem::path& base_dir) {
    json root;
    try {
        root = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("config is not valid JSON: ") + e.what());
    }
    check_keys(root, "config",
               {"corpus", "tokenizer", "grouping", "chunk_size", "embedder", "k", "budget_tokens", "reader",
                "eval", "out", "units", "index", "workers", "seed", "sweep"});

    PipelineConfig cfg;
    if (auto v = get<std::string>(root, "corpus", ""); !v.empty()) cfg.corpus = resolve(base_dir, v);

    if (auto it = root.find("tokenizer"); it != root.end()) {
        check_keys(*it, "tokenizer", {"scheme", "normalization"});
        cfg.tokenizer.scheme = parse_token_scheme(get<std::string>(*it, "scheme", "whitespace"));
        cfg.tokenizer.normalization = parse_normalization(get<std::string>(*it, "normalization", "none"));
    }
    cfg.grouping.tokenizer = cfg.tokenizer;

    if (auto it = root.find("grouping"); it != root.end()) {
        check_keys(*it, "grouping", {"mode", "max_tokens", "symmetric_links", "passage_tokens"});
        cfg.grouping.mode = parse_grouping_mode(get<std::string>(*it, "mode", "group"));
        cfg.grouping.max_tokens = get<std::int64_t>(*it, "max_tokens", cfg.grouping.max_tokens);
        cfg.grouping.symmetric_links = get<bool>(*it, "symmetric_links", false);
        cfg.grouping.passage_tokens = get<std::int64_t>(*it, "passage_tokens", cfg.grouping.passage_tokens);
    }
    if (auto it = root.find("chunk_size"); it != root.end()) cfg.chunk_size = parse_chunk_size(*it);

    if (auto it = root.find("embedder"); it != root.end()) {
        check_keys(*it, "embedder",
                   {"kind", "dim", "batch_size", "url", "timeout_ms", "max_retries", "initial_backoff_ms",
                    "api_key_env", "concurrency", "vectors"});
        const auto kind = get<std::string>(*it, "kind", "mock");
        if (kind == "mock") {
            cfg.embedder.kind = EmbedderKind::Mock;
        } else if (kind == "http") {
            cfg.embedder.kind = EmbedderKind::Http;
            cfg.embedder.dim = 0;
        } else {
            throw ConfigError("unknown embedder kind: " + kind);
        }
        cfg.embedder.dim = get_count(*it, "dim", cfg.embedder.dim);
        cfg.embedder.batch_size = get_count(*it, "batch_size", cfg.embedder.batch_size);
        cfg.embedder.url = get<std::string>(*it, "url", "");
        cfg.embedder.timeout = std::chrono::milliseconds(get<std::int64_t>(*it, "timeout_ms", 30000));
        parse_retry(*it, cfg.embedder.retry);
        cfg.embedder.api_key_env = get<std::string>(*it, "api_key_env", cfg.embedder.api_key_env);
        cfg.embedder.concurrency = get_count(*it, "concurrency", 1);
        if (auto v = get<std::string>(*it, "vectors", ""); !v.empty())
            cfg.embedder.precomputed_vectors = resolve(base_dir, v);
    }

    cfg.k = get_count(root, "k", cfg.k);
    if (auto it = root.find("budget_tokens"); it != root.end()) cfg.budget_tokens = parse_budget(*it);

    if (auto it = root.find("reader"); it != root.end()) {
        check_keys(*it, "reader",
                   {"kind", "url", "model", "temperature", "response_format", "headers", "api_key_env",
                    "timeout_ms", "max_retries", "initial_backoff_ms", "threshold", "exemplars",
                    "exemplar_count", "script", "max_in_flight"});
        const auto kind = get<std::string>(*it, "kind", "none");
        if (kind == "none") {
            cfg.reader.kind = ReaderKind::None;
        } else if (kind == "http") {
            cfg.reader.kind = ReaderKind::Http;
        } else if (kind == "scripted") {
            cfg.reader.kind = ReaderKind::Scripted;
        } else {
            throw ConfigError("unknown reader kind: " + kind);
        }
        cfg.reader.url = get<std::string>(*it, "url", "");
        cfg.reader.model = get<std::string>(*it, "model", "");
        cfg.reader.temperature = get<double>(*it, "temperature", 0.0);
        cfg.reader.response_format = parse_response_format(get<std::string>(*it, "response_format", "content"));
        cfg.reader.headers = get<std::map<std::string, std::string>>(*it, "headers", {});
        cfg.reader.api_key_env = get<std::string>(*it, "api_key_env", cfg.reader.api_key_env);
        cfg.reader.timeout = std::chrono::milliseconds(get<std::int64_t>(*it, "timeout_ms", 120000));
        parse_retry(*it, cfg.reader.retry);
        cfg.reader.short_context_threshold = get_count(*it, "threshold", cfg.reader.short_context_threshold);
        if (auto v = get<std::string>(*it, "exemplars", ""); !v.empty()) cfg.reader.exemplars = resolve(base_dir, v);
        if (it->contains("exemplar_count")) cfg.reader.exemplar_count = get_count(*it, "exemplar_count", 8);
        if (auto v = get<std::string>(*it, "script", ""); !v.empty()) cfg.reader.script = resolve(base_dir, v);
        cfg.reader.max_in_flight = get_count(*it, "max_in_flight", cfg.reader.max_in_flight);
    }

    if (auto it = root.find("eval"); it != root.end()) {
        check_keys(*it, "eval", {"cases", "ks", "drop_articles"});
        if (auto v = get<std::string>(*it, "cases", ""); !v.empty()) cfg.cases = resolve(base_dir, v);
        cfg.eval_ks = get<std::vector<std::size_t>>(*it, "ks", {});
        cfg.answer_normalizer.drop_articles = get<bool>(*it, "drop_articles", true);
    }
    if (auto v = get<std::string>(root, "out", ""); !v.empty()) cfg.out_dir = resolve(base_dir, v);
    if (auto v = get<std::string>(root, "units", ""); !v.empty()) cfg.units_path = resolve(base_dir, v);
    if (auto v = get<std::string>(root, "index", ""); !v.empty()) cfg.index_path = resolve(base_dir, v);
    cfg.workers = get_count(root, "workers", cfg.workers);
    cfg.seed = get<std::uint64_t>(root, "seed", 0);

    if (auto it = root.find("sweep"); it != root.end()) {
        check_keys(*it, "sweep", {"modes", "chunk_sizes", "ks", "budgets"});
        for (const auto& m : get<std::vector<std::string>>(*it, "modes", {})) cfg.sweep.modes.push_back(parse_grouping_mode(m));
        if (auto cs = it->find("chunk_sizes"); cs != it->end())
            for (const auto& v : *cs) cfg.sweep.chunk_sizes.push_back(parse_chunk_size(v));
        cfg.sweep.ks = get<std::vector<std::size_t>>(*it, "ks", {});
        if (auto bs = it->find("budgets"); bs != it->end())
            for (const auto& v : *bs) cfg.sweep.budgets.push_back(parse_budget(v));
    }

    cfg.validate();
    return cfg;
}

PipelineConfig load_config(const std::filesystem::path& path) {
    std::string text;
    try {
        text = detail::read_file(path);
    } catch (const IoError& e) {
        throw ConfigError(e.what());
    }
    return parse_config(text, path.has_parent_path() ? path.parent_path() : std::filesystem::path("."));
}

}  // namespace longrag
