#pragma once

#include <atomic>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <unistd.h>

#include "gendetect/corpus.hpp"

namespace testutil {

inline std::filesystem::path make_temp_dir(const std::string& tag) {
    static std::atomic<uint64_t> counter{0};
    auto dir = std::filesystem::temp_directory_path() /
               ("gendetect-test-" + tag + "-" + std::to_string(::getpid()) + "-" +
                std::to_string(counter.fetch_add(1) + 1));
    std::filesystem::create_directories(dir);
    return dir;
}

inline void write_file(const std::filesystem::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    out << content;
}

inline std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

// Labeled corpus with synthetic ids; texts default to distinct one-liners.
inline gendetect::Corpus label_corpus(size_t n_human, size_t n_generated) {
    std::vector<gendetect::Excerpt> items;
    items.reserve(n_human + n_generated);
    for (size_t i = 0; i < n_human; ++i) {
        gendetect::Excerpt e;
        e.id = "h" + std::to_string(i + 1);
        e.text = "human text " + std::to_string(i + 1);
        e.label = gendetect::ClassLabel::Human;
        items.push_back(std::move(e));
    }
    for (size_t i = 0; i < n_generated; ++i) {
        gendetect::Excerpt e;
        e.id = "g" + std::to_string(i + 1);
        e.text = "generated text " + std::to_string(i + 1);
        e.label = gendetect::ClassLabel::Generated;
        items.push_back(std::move(e));
    }
    return gendetect::Corpus(std::move(items));
}

}  // namespace testutil
