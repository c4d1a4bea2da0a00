#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace longrag {

enum class TokenScheme {
    Whitespace,   ///< maximal runs of non-whitespace bytes
    UnicodeWord,  ///< word-boundary segments containing an alphanumeric character
};

enum class Normalization { None, Lowercase };

struct TokenizerConfig {
    TokenScheme scheme = TokenScheme::Whitespace;
    Normalization normalization = Normalization::None;

    friend bool operator==(const TokenizerConfig&, const TokenizerConfig&) = default;
};

/// Half-open byte range [begin, end) into the tokenized text.
struct ByteSpan {
    std::size_t begin = 0;
    std::size_t end = 0;

    friend bool operator==(const ByteSpan&, const ByteSpan&) = default;
};

/// Byte spans of every token in `text`, in order. Normalization does not
/// affect spans.
std::vector<ByteSpan> token_spans(std::string_view text, const TokenizerConfig& cfg);

std::size_t count_tokens(std::string_view text, const TokenizerConfig& cfg);

/// Token strings with the configured normalization applied (ASCII case
/// folding only; non-ASCII bytes pass through unchanged).
std::vector<std::string> tokenize(std::string_view text, const TokenizerConfig& cfg);

std::string_view to_string(TokenScheme scheme) noexcept;
std::string_view to_string(Normalization norm) noexcept;

/// Accepts "whitespace" and "unicode-word"; throws ConfigError otherwise.
TokenScheme parse_token_scheme(std::string_view name);
/// Accepts "none" and "lowercase"; throws ConfigError otherwise.
Normalization parse_normalization(std::string_view name);

}  // namespace longrag
