#include "gendetect/rng.hpp"

#include <stdexcept>

namespace gendetect {

uint64_t fnv1a64(std::string_view data) {
    uint64_t h = 0xcbf29ce484222325ull;
    for (unsigned char c : data) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

uint64_t splitmix64(uint64_t x) {
    x += 0x9e3779b97f4a7c15ull;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
    return x ^ (x >> 31);
}

uint64_t stage_seed(uint64_t global_seed, std::string_view stage) {
    return splitmix64(global_seed ^ fnv1a64(stage));
}

uint64_t rand_below(RngEngine& rng, uint64_t n) {
    if (n == 0) throw std::invalid_argument("rand_below: empty range");
    return static_cast<uint64_t>((static_cast<unsigned __int128>(rng()) * n) >> 64);
}

std::vector<size_t> sample_indices(size_t n, size_t k, RngEngine& rng) {
    if (k > n) throw std::invalid_argument("sample_indices: k exceeds population");
    std::vector<size_t> pool(n);
    for (size_t i = 0; i < n; ++i) pool[i] = i;
    for (size_t i = 0; i < k; ++i) {
        size_t j = i + static_cast<size_t>(rand_below(rng, n - i));
        std::swap(pool[i], pool[j]);
    }
    pool.resize(k);
    return pool;
}

}  // namespace gendetect
