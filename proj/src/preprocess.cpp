#include "lexchain/preprocess.hpp"

#include <cstdint>
#include <unordered_set>

namespace lexchain {

namespace {

const std::vector<std::string> kStopwords = {
    "i",          "me",      "my",      "myself",  "we",       "our",     "ours",
    "ourselves",  "you",     "your",    "yours",   "yourself", "yourselves",
    "he",         "him",     "his",     "himself", "she",      "her",     "hers",
    "herself",    "it",      "its",     "itself",  "they",     "them",    "their",
    "theirs",     "themselves",         "what",    "which",    "who",     "whom",
    "this",       "that",    "these",   "those",   "am",       "is",      "are",
    "was",        "were",    "be",      "been",    "being",    "have",    "has",
    "had",        "having",  "do",      "does",    "did",      "doing",   "a",
    "an",         "the",     "and",     "but",     "if",       "or",      "because",
    "as",         "until",   "while",   "of",      "at",       "by",      "for",
    "with",       "about",   "against", "between", "into",     "through", "during",
    "before",     "after",   "above",   "below",   "to",       "from",    "up",
    "down",       "in",      "out",     "on",      "off",      "over",    "under",
    "again",      "further", "then",    "once",    "here",     "there",   "when",
    "where",      "why",     "how",     "all",     "any",      "both",    "each",
    "few",        "more",    "most",    "other",   "some",     "such",    "no",
    "nor",        "not",     "only",    "own",     "same",     "so",      "than",
    "too",        "very",    "s",       "t",       "can",      "will",    "just",
    "don",        "should",  "now",
};

const std::unordered_set<std::string_view>& stopword_set() {
    static const std::unordered_set<std::string_view> set(kStopwords.begin(), kStopwords.end());
    return set;
}

// Decodes one UTF-8 code point; advances i. Invalid bytes decode as
// themselves so the tokenizer degrades gracefully on binary noise.
std::uint32_t decode_utf8(std::string_view text, std::size_t& i) {
    const unsigned char c = static_cast<unsigned char>(text[i]);
    std::size_t len = 1;
    std::uint32_t cp = c;
    if ((c & 0xE0) == 0xC0) {
        len = 2;
        cp = c & 0x1F;
    } else if ((c & 0xF0) == 0xE0) {
        len = 3;
        cp = c & 0x0F;
    } else if ((c & 0xF8) == 0xF0) {
        len = 4;
        cp = c & 0x07;
    }
    if (i + len > text.size()) {
        ++i;
        return c;
    }
    for (std::size_t k = 1; k < len; ++k) {
        const unsigned char cont = static_cast<unsigned char>(text[i + k]);
        if ((cont & 0xC0) != 0x80) {
            ++i;
            return c;
        }
        cp = (cp << 6) | (cont & 0x3F);
    }
    i += len;
    return cp;
}

// Common punctuation blocks beyond ASCII; everything else non-ASCII is kept
// as a token character (accented letters survive).
bool is_punct_codepoint(std::uint32_t cp) {
    if (cp < 128) return !((cp >= 'a' && cp <= 'z') || (cp >= 'A' && cp <= 'Z') ||
                           (cp >= '0' && cp <= '9'));
    return (cp >= 0x00A1 && cp <= 0x00BF) ||  // latin-1 punctuation and signs
           (cp >= 0x2010 && cp <= 0x205E) ||  // general punctuation (dashes, quotes, ellipsis)
           (cp >= 0x3000 && cp <= 0x303F) ||  // CJK symbols and punctuation
           (cp >= 0xFF01 && cp <= 0xFF0F) || (cp >= 0xFF1A && cp <= 0xFF20);
}

void append_codepoint(std::string& out, std::string_view text, std::size_t begin, std::size_t end,
                      std::uint32_t cp) {
    if (cp < 128) {
        char c = static_cast<char>(cp);
        if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
        out.push_back(c);
    } else {
        out.append(text.substr(begin, end - begin));
    }
}

}  // namespace

const std::vector<std::string>& stopword_list() { return kStopwords; }

bool is_stopword(std::string_view token) { return stopword_set().count(token) != 0; }

std::vector<std::string> preprocess(std::string_view text) {
    std::vector<std::string> tokens;
    std::string current;
    auto flush = [&] {
        if (!current.empty() && !is_stopword(current)) tokens.push_back(current);
        current.clear();
    };
    std::size_t i = 0;
    while (i < text.size()) {
        const std::size_t begin = i;
        const std::uint32_t cp = decode_utf8(text, i);
        if (is_punct_codepoint(cp)) {
            flush();
        } else {
            append_codepoint(current, text, begin, i, cp);
        }
    }
    flush();
    return tokens;
}

}  // namespace lexchain
