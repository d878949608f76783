#pragma once

#include <array>
#include <string>
#include <vector>

#include "kge/triple_store.hpp"

namespace kge {

// Triple indices (into the source store) per split.
struct SplitManifest {
    std::vector<std::uint32_t> train;
    std::vector<std::uint32_t> valid;
    std::vector<std::uint32_t> test;

    void save(const std::string& path) const;
    static SplitManifest load(const std::string& path);
};

// Three disjoint stores over one vocabulary, partitioning the source.
struct SplitSet {
    TripleStore train;
    TripleStore valid;
    TripleStore test;
    std::array<double, 3> ratios{0.8, 0.1, 0.1};
    SplitManifest manifest;
};

// Deterministic shuffled split. Valid and test sizes are floor(ratio * n);
// the remainder goes to train. When a triple's exact reverse (o, p, s) is
// also in the store, the pair is kept in the same split so symmetric
// augmentation cannot leak across splits.
SplitSet make_splits(const TripleStore& store, std::array<double, 3> ratios,
                     std::uint64_t seed);

// Reassembles a SplitSet from a source store and a saved manifest.
SplitSet apply_manifest(const TripleStore& store, const SplitManifest& manifest,
                        std::array<double, 3> ratios = {0.8, 0.1, 0.1});

}  // namespace kge
