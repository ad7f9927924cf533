#pragma once

#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace gendetect {

// Word tokenizer: split on whitespace, then detach ASCII punctuation from
// both ends of each chunk as single-character tokens. Interior punctuation
// (hyphens, decimal points) stays attached, so "state-of-the-art" and "2.5"
// are single tokens while "three." is two.
std::vector<std::string> word_tokens(std::string_view text);
size_t word_count(std::string_view text);

// Sentence boundary: a run of '.', '?' or '!' followed by whitespace and an
// ASCII uppercase letter, or by end of text. A trailing segment without a
// terminator still counts as a sentence.
std::vector<std::string> split_sentences(std::string_view text);
size_t sentence_count(std::string_view text);

std::string ascii_lower(std::string_view s);
std::string trim_copy(std::string_view s);

// Joins tokens with single spaces.
std::string join_tokens(std::span<const std::string> tokens);

}  // namespace gendetect
