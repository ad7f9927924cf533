#include "gendetect/text.hpp"

#include <cctype>

namespace gendetect {

namespace {

bool is_space(char c) {
    return std::isspace(static_cast<unsigned char>(c)) != 0;
}

// ASCII punctuation only; multibyte UTF-8 sequences stay attached to their
// chunk.
bool is_punct(char c) {
    unsigned char u = static_cast<unsigned char>(c);
    return u < 128 && std::ispunct(u) != 0;
}

bool is_upper(char c) {
    return c >= 'A' && c <= 'Z';
}

void tokenize_chunk(std::string_view chunk, std::vector<std::string>& out) {
    size_t begin = 0;
    size_t end = chunk.size();
    while (begin < end && is_punct(chunk[begin])) {
        out.emplace_back(1, chunk[begin]);
        ++begin;
    }
    size_t core_end = end;
    while (core_end > begin && is_punct(chunk[core_end - 1])) --core_end;
    if (core_end > begin) out.emplace_back(chunk.substr(begin, core_end - begin));
    for (size_t i = core_end; i < end; ++i) out.emplace_back(1, chunk[i]);
}

}  // namespace

std::vector<std::string> word_tokens(std::string_view text) {
    std::vector<std::string> tokens;
    size_t i = 0;
    while (i < text.size()) {
        while (i < text.size() && is_space(text[i])) ++i;
        size_t start = i;
        while (i < text.size() && !is_space(text[i])) ++i;
        if (i > start) tokenize_chunk(text.substr(start, i - start), tokens);
    }
    return tokens;
}

size_t word_count(std::string_view text) {
    return word_tokens(text).size();
}

std::vector<std::string> split_sentences(std::string_view text) {
    std::vector<std::string> sentences;
    size_t start = 0;
    size_t i = 0;
    auto flush = [&](size_t end) {
        std::string s = trim_copy(text.substr(start, end - start));
        if (!s.empty()) sentences.push_back(std::move(s));
        start = end;
    };
    while (i < text.size()) {
        char c = text[i];
        if (c == '.' || c == '?' || c == '!') {
            size_t run_end = i + 1;
            while (run_end < text.size() &&
                   (text[run_end] == '.' || text[run_end] == '?' || text[run_end] == '!'))
                ++run_end;
            size_t next = run_end;
            while (next < text.size() && is_space(text[next])) ++next;
            bool at_end = next >= text.size();
            bool new_sentence = next > run_end && next < text.size() && is_upper(text[next]);
            if (at_end || new_sentence) {
                flush(run_end);
                i = next;
                start = next;
                continue;
            }
            i = run_end;
            continue;
        }
        ++i;
    }
    flush(text.size());
    return sentences;
}

size_t sentence_count(std::string_view text) {
    return split_sentences(text).size();
}

std::string ascii_lower(std::string_view s) {
    std::string out(s);
    for (char& c : out)
        if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
    return out;
}

std::string trim_copy(std::string_view s) {
    size_t b = 0;
    size_t e = s.size();
    while (b < e && is_space(s[b])) ++b;
    while (e > b && is_space(s[e - 1])) --e;
    return std::string(s.substr(b, e - b));
}

std::string join_tokens(std::span<const std::string> tokens) {
    std::string out;
    for (size_t i = 0; i < tokens.size(); ++i) {
        if (i > 0) out += ' ';
        out += tokens[i];
    }
    return out;
}

}  // namespace gendetect
