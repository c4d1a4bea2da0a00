#include "longrag/tokenizer.hpp"

#include <cctype>

#include "longrag/errors.hpp"

namespace longrag {

namespace {

bool is_ascii_space(unsigned char c) {
    return c == ' ' || c == '\t' || c == '\n' || c == '\v' || c == '\f' || c == '\r';
}

// Word-break classes for the unicode-word scheme. This is a reduced form of
// the UAX #29 word rules without a full property table: ASCII is classified
// exactly, and non-ASCII code points fall into letters unless they sit in a
// known space, punctuation, symbol or ideograph block.
enum class WordClass { Space, Letter, Digit, Extend, Ideograph, MidLetter, MidNum, MidNumLet, Other };

struct CodePoint {
    char32_t value;
    std::size_t length;  // bytes consumed
};

CodePoint decode_utf8(std::string_view s, std::size_t i) {
    const auto b0 = static_cast<unsigned char>(s[i]);
    auto cont = [&](std::size_t k) -> int {
        if (i + k >= s.size()) return -1;
        const auto b = static_cast<unsigned char>(s[i + k]);
        return (b & 0xC0) == 0x80 ? (b & 0x3F) : -1;
    };
    if (b0 < 0x80) return {b0, 1};
    if ((b0 & 0xE0) == 0xC0) {
        int c1 = cont(1);
        if (c1 >= 0) return {static_cast<char32_t>(((b0 & 0x1F) << 6) | c1), 2};
    } else if ((b0 & 0xF0) == 0xE0) {
        int c1 = cont(1), c2 = cont(2);
        if (c1 >= 0 && c2 >= 0)
            return {static_cast<char32_t>(((b0 & 0x0F) << 12) | (c1 << 6) | c2), 3};
    } else if ((b0 & 0xF8) == 0xF0) {
        int c1 = cont(1), c2 = cont(2), c3 = cont(3);
        if (c1 >= 0 && c2 >= 0 && c3 >= 0)
            return {static_cast<char32_t>(((b0 & 0x07) << 18) | (c1 << 12) | (c2 << 6) | c3),
                    4};
    }
    // Invalid sequence: consume one byte as an unclassifiable symbol.
    return {0xFFFD, 1};
}

bool in(char32_t c, char32_t lo, char32_t hi) { return c >= lo && c <= hi; }

WordClass classify(char32_t c) {
    if (c < 0x80) {
        if (is_ascii_space(static_cast<unsigned char>(c))) return WordClass::Space;
        if (std::isalpha(static_cast<int>(c)) || c == '_') return WordClass::Letter;
        if (std::isdigit(static_cast<int>(c))) return WordClass::Digit;
        if (c == '\'' || c == '.') return WordClass::MidNumLet;
        if (c == ':') return WordClass::MidLetter;
        if (c == ',' || c == ';') return WordClass::MidNum;
        return WordClass::Other;
    }
    if (c == 0x85 || c == 0xA0 || c == 0x1680 || in(c, 0x2000, 0x200A) || c == 0x2028 ||
        c == 0x2029 || c == 0x202F || c == 0x205F || c == 0x3000)
        return WordClass::Space;
    if (c == 0x2018 || c == 0x2019 || c == 0x2024 || c == 0xFE52 || c == 0xFF07 || c == 0xFF0E)
        return WordClass::MidNumLet;
    if (c == 0xB7 || c == 0x2027) return WordClass::MidLetter;
    if (in(c, 0x0300, 0x036F) || in(c, 0x1AB0, 0x1AFF) || in(c, 0x1DC0, 0x1DFF) ||
        in(c, 0x20D0, 0x20FF) || in(c, 0xFE20, 0xFE2F) || c == 0x200D)
        return WordClass::Extend;
    if (c == 0xAA || c == 0xB5 || c == 0xBA) return WordClass::Letter;
    if (in(c, 0x80, 0xBF) || c == 0xD7 || c == 0xF7) return WordClass::Other;
    if (in(c, 0x2000, 0x2BFF) || in(c, 0x2E00, 0x2E7F) || in(c, 0x3000, 0x303F) ||
        in(c, 0xFF00, 0xFF0F) || in(c, 0xFF1A, 0xFF20) || in(c, 0xFF3B, 0xFF40) ||
        in(c, 0xFF5B, 0xFF65) || in(c, 0x1F000, 0x1FAFF) || c == 0xFFFD)
        return WordClass::Other;
    if (in(c, 0x3040, 0x30FF) || in(c, 0x3400, 0x4DBF) || in(c, 0x4E00, 0x9FFF) ||
        in(c, 0xF900, 0xFAFF) || in(c, 0x20000, 0x2FFFF))
        return WordClass::Ideograph;
    if (in(c, 0xFF10, 0xFF19)) return WordClass::Digit;
    return WordClass::Letter;
}

bool is_word_char(WordClass k) { return k == WordClass::Letter || k == WordClass::Digit; }

std::vector<ByteSpan> whitespace_spans(std::string_view text) {
    std::vector<ByteSpan> spans;
    std::size_t i = 0;
    while (i < text.size()) {
        while (i < text.size() && is_ascii_space(static_cast<unsigned char>(text[i]))) ++i;
        if (i == text.size()) break;
        std::size_t start = i;
        while (i < text.size() && !is_ascii_space(static_cast<unsigned char>(text[i]))) ++i;
        spans.push_back({start, i});
    }
    return spans;
}

std::vector<ByteSpan> unicode_word_spans(std::string_view text) {
    struct Cp {
        std::size_t pos;
        std::size_t len;
        WordClass cls;
    };
    std::vector<Cp> cps;
    cps.reserve(text.size());
    for (std::size_t i = 0; i < text.size();) {
        auto cp = decode_utf8(text, i);
        cps.push_back({i, cp.length, classify(cp.value)});
        i += cp.length;
    }

    std::vector<ByteSpan> spans;
    std::size_t i = 0;
    while (i < cps.size()) {
        if (cps[i].cls == WordClass::Ideograph) {
            std::size_t end = i + 1;
            while (end < cps.size() && cps[end].cls == WordClass::Extend) ++end;
            spans.push_back({cps[i].pos, cps[end - 1].pos + cps[end - 1].len});
            i = end;
            continue;
        }
        if (!is_word_char(cps[i].cls)) {
            ++i;
            continue;
        }
        std::size_t end = i;
        WordClass last = cps[i].cls;
        ++end;
        while (end < cps.size()) {
            const WordClass k = cps[end].cls;
            if (is_word_char(k)) {
                last = k;
                ++end;
            } else if (k == WordClass::Extend) {
                ++end;
            } else if (end + 1 < cps.size()) {
                // A single medial character joins two letters (don't, U.S)
                // or two digits (3.14, 1,000).
                const WordClass next = cps[end + 1].cls;
                const bool letters = last == WordClass::Letter && next == WordClass::Letter &&
                                     (k == WordClass::MidLetter || k == WordClass::MidNumLet);
                const bool digits = last == WordClass::Digit && next == WordClass::Digit &&
                                    (k == WordClass::MidNum || k == WordClass::MidNumLet);
                if (!letters && !digits) break;
                end += 2;
                last = next;
            } else {
                break;
            }
        }
        spans.push_back({cps[i].pos, cps[end - 1].pos + cps[end - 1].len});
        i = end;
    }
    return spans;
}

}  // namespace

std::vector<ByteSpan> token_spans(std::string_view text, const TokenizerConfig& cfg) {
    switch (cfg.scheme) {
        case TokenScheme::Whitespace:
            return whitespace_spans(text);
        case TokenScheme::UnicodeWord:
            return unicode_word_spans(text);
    }
    return {};
}

std::size_t count_tokens(std::string_view text, const TokenizerConfig& cfg) {
    if (cfg.scheme != TokenScheme::Whitespace) return token_spans(text, cfg).size();
    std::size_t n = 0;
    bool in_token = false;
    for (char ch : text) {
        const bool space = is_ascii_space(static_cast<unsigned char>(ch));
        if (!space && !in_token) ++n;
        in_token = !space;
    }
    return n;
}

std::vector<std::string> tokenize(std::string_view text, const TokenizerConfig& cfg) {
    std::vector<std::string> out;
    for (const auto& span : token_spans(text, cfg)) {
        std::string tok(text.substr(span.begin, span.end - span.begin));
        if (cfg.normalization == Normalization::Lowercase) {
            for (auto& ch : tok) {
                if (static_cast<unsigned char>(ch) < 0x80)
                    ch = static_cast<char>(std::tolower(static_cast<unsigned char>(ch)));
            }
        }
        out.push_back(std::move(tok));
    }
    return out;
}

std::string_view to_string(TokenScheme scheme) noexcept {
    return scheme == TokenScheme::Whitespace ? "whitespace" : "unicode-word";
}

std::string_view to_string(Normalization norm) noexcept {
    return norm == Normalization::None ? "none" : "lowercase";
}

TokenScheme parse_token_scheme(std::string_view name) {
    if (name == "whitespace") return TokenScheme::Whitespace;
    if (name == "unicode-word") return TokenScheme::UnicodeWord;
    throw ConfigError("unknown tokenizer scheme: " + std::string(name));
}

Normalization parse_normalization(std::string_view name) {
    if (name == "none") return Normalization::None;
    if (name == "lowercase") return Normalization::Lowercase;
    throw ConfigError("unknown tokenizer normalization: " + std::string(name));
}

}  // namespace longrag
