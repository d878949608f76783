#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <vector>

namespace kge {

// Gray-code Sobol sequence (Joe-Kuo direction numbers, up to 24 dimensions)
// with optional per-dimension digital-shift scrambling. The digital shift
// preserves dyadic equidistribution, so any prefix of the sequence keeps the
// usual Sobol stratification in every coordinate.
class SobolSequence {
public:
    static constexpr int kMaxDims = 24;

    explicit SobolSequence(int dims,
                           std::optional<std::uint64_t> scramble_seed = std::nullopt);

    // Next point in [0, 1)^dims.
    std::vector<double> next();
    void skip(std::uint64_t count);
    std::uint64_t index() const { return index_; }

private:
    int dims_;
    std::uint64_t index_ = 0;
    std::vector<std::array<std::uint32_t, 33>> v_;  // v_[dim][1..32]
    std::vector<std::uint32_t> state_;
    std::vector<std::uint32_t> shift_;
};

}  // namespace kge
