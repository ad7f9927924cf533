#pragma once

#include <cstdint>
#include <random>
#include <string_view>
#include <vector>

namespace gendetect {

// Seeded randomness helpers. std::shuffle and the standard distributions are
// implementation-defined, so every sampling step in the pipeline goes through
// these instead; output is identical across standard libraries and platforms
// for a fixed seed.
using RngEngine = std::mt19937_64;

uint64_t fnv1a64(std::string_view data);
uint64_t splitmix64(uint64_t x);

// Seed splitting rule: stage_seed = splitmix64(global_seed XOR fnv1a64(name)).
// Stage names are short strings such as "folds", "imbalance", "train",
// "augment:0". Every command derives its per-stage seeds this way from the
// single global seed, so any stage can be reproduced in isolation.
uint64_t stage_seed(uint64_t global_seed, std::string_view stage);

// Uniform integer in [0, n), n > 0. Fixed-point multiply, no rejection loop.
uint64_t rand_below(RngEngine& rng, uint64_t n);

template <typename T>
void shuffle_in_place(std::vector<T>& v, RngEngine& rng) {
    for (size_t i = v.size(); i > 1; --i) {
        size_t j = static_cast<size_t>(rand_below(rng, i));
        std::swap(v[i - 1], v[j]);
    }
}

// First k entries of a seeded permutation of [0, n). Requires k <= n.
std::vector<size_t> sample_indices(size_t n, size_t k, RngEngine& rng);

}  // namespace gendetect
