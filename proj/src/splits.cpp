#include "kge/splits.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <random>
#include <unordered_map>

#include "json.hpp"

namespace kge {

void SplitManifest::save(const std::string& path) const {
    nlohmann::json j{{"train", train}, {"valid", valid}, {"test", test}};
    std::ofstream out(path);
    if (!out) throw Error("cannot open for writing: " + path);
    out << j.dump(2) << '\n';
}

SplitManifest SplitManifest::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open: " + path);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw FormatError("bad split manifest " + path + ": " + e.what());
    }
    SplitManifest m;
    m.train = j.at("train").get<std::vector<std::uint32_t>>();
    m.valid = j.at("valid").get<std::vector<std::uint32_t>>();
    m.test = j.at("test").get<std::vector<std::uint32_t>>();
    return m;
}

namespace {

// Groups each triple with its reverse (same relation, swapped endpoints)
// when the reverse is present. Units are singletons otherwise.
std::vector<std::vector<std::uint32_t>> pair_units(const TripleStore& store) {
    std::unordered_map<Triple, std::uint32_t, TripleHash> pos;
    pos.reserve(store.size());
    for (std::uint32_t i = 0; i < store.size(); ++i) pos.emplace(store.triple(i), i);

    std::vector<std::vector<std::uint32_t>> units;
    std::vector<bool> used(store.size(), false);
    for (std::uint32_t i = 0; i < store.size(); ++i) {
        if (used[i]) continue;
        const Triple& t = store.triple(i);
        used[i] = true;
        if (t.s != t.o) {
            auto it = pos.find(Triple{t.o, t.p, t.s});
            if (it != pos.end() && !used[it->second]) {
                used[it->second] = true;
                units.push_back({i, it->second});
                continue;
            }
        }
        units.push_back({i});
    }
    return units;
}

}  // namespace

SplitSet make_splits(const TripleStore& store, std::array<double, 3> ratios,
                     std::uint64_t seed) {
    if (store.empty()) throw ConfigError("cannot split an empty store");
    double sum = ratios[0] + ratios[1] + ratios[2];
    if (std::abs(sum - 1.0) > 1e-9) throw ConfigError("split ratios must sum to 1");
    for (double r : ratios)
        if (r <= 0) throw ConfigError("split ratios must be positive");

    const std::size_t n = store.size();
    std::size_t n_valid = static_cast<std::size_t>(std::floor(ratios[1] * n));
    std::size_t n_test = static_cast<std::size_t>(std::floor(ratios[2] * n));

    auto units = pair_units(store);
    std::mt19937_64 rng(seed);
    std::shuffle(units.begin(), units.end(), rng);

    SplitManifest m;
    std::size_t cap_valid = n_valid, cap_test = n_test;
    std::vector<std::uint32_t> overflow;
    for (const auto& u : units) {
        if (u.size() <= cap_valid) {
            m.valid.insert(m.valid.end(), u.begin(), u.end());
            cap_valid -= u.size();
        } else if (u.size() <= cap_test) {
            m.test.insert(m.test.end(), u.begin(), u.end());
            cap_test -= u.size();
        } else {
            m.train.insert(m.train.end(), u.begin(), u.end());
        }
    }
    // Only reachable when pairs outnumber singleton capacity; exact sizes win
    // over pair cohesion for the last slot.
    while (cap_valid > 0 && !m.train.empty()) {
        m.valid.push_back(m.train.back());
        m.train.pop_back();
        --cap_valid;
    }
    while (cap_test > 0 && !m.train.empty()) {
        m.test.push_back(m.train.back());
        m.train.pop_back();
        --cap_test;
    }

    return apply_manifest(store, m, ratios);
}

SplitSet apply_manifest(const TripleStore& store, const SplitManifest& manifest,
                        std::array<double, 3> ratios) {
    SplitSet s;
    s.train = store.subset(manifest.train);
    s.valid = store.subset(manifest.valid);
    s.test = store.subset(manifest.test);
    s.ratios = ratios;
    s.manifest = manifest;
    return s;
}

}  // namespace kge
