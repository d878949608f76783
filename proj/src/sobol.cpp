#include "kge/sobol.hpp"

#include <bit>
#include <random>
#include <stdexcept>

namespace kge {

namespace {

// Primitive polynomials and initial direction numbers for dimensions 2..24
// (dimension 1 is the van der Corput sequence in base 2). Values from the
// Joe-Kuo "new-joe-kuo-6" tables. poly encodes the full polynomial bits;
// degree = bit_length - 1, a = middle bits.
struct JoeKuoRow {
    std::uint32_t poly;
    std::array<std::uint32_t, 8> m;
};

constexpr JoeKuoRow kJoeKuo[] = {
    {3, {1}},
    {7, {1, 3}},
    {11, {1, 3, 1}},
    {13, {1, 1, 1}},
    {19, {1, 1, 3, 3}},
    {25, {1, 3, 5, 13}},
    {37, {1, 1, 5, 5, 17}},
    {41, {1, 1, 5, 5, 5}},
    {47, {1, 1, 7, 11, 19}},
    {55, {1, 1, 5, 1, 1}},
    {59, {1, 1, 1, 3, 11}},
    {61, {1, 3, 5, 5, 31}},
    {67, {1, 3, 3, 9, 7, 49}},
    {91, {1, 1, 1, 15, 21, 21}},
    {97, {1, 3, 1, 13, 27, 49}},
    {103, {1, 1, 1, 15, 7, 5}},
    {109, {1, 3, 1, 15, 13, 25}},
    {115, {1, 1, 5, 5, 19, 61}},
    {131, {1, 3, 7, 11, 23, 15, 103}},
    {137, {1, 3, 7, 13, 13, 15, 69}},
    {143, {1, 1, 3, 13, 7, 35, 63}},
    {145, {1, 3, 5, 9, 1, 25, 53}},
    {157, {1, 3, 1, 13, 9, 35, 107}},
};

int bit_length(std::uint32_t x) { return 32 - std::countl_zero(x); }

}  // namespace

SobolSequence::SobolSequence(int dims, std::optional<std::uint64_t> scramble_seed)
    : dims_(dims) {
    if (dims < 1 || dims > kMaxDims)
        throw std::invalid_argument("SobolSequence supports 1..24 dimensions");

    v_.resize(dims);
    state_.assign(dims, 0);
    shift_.assign(dims, 0);

    // dimension 0: van der Corput base 2
    for (int k = 1; k <= 32; ++k) v_[0][k] = 1u << (32 - k);

    for (int d = 1; d < dims; ++d) {
        const JoeKuoRow& row = kJoeKuo[d - 1];
        const int s = bit_length(row.poly) - 1;
        const std::uint32_t a = (row.poly >> 1) & ((1u << (s - 1)) - 1);
        for (int k = 1; k <= s && k <= 32; ++k) v_[d][k] = row.m[k - 1] << (32 - k);
        for (int k = s + 1; k <= 32; ++k) {
            std::uint32_t val = v_[d][k - s] ^ (v_[d][k - s] >> s);
            for (int i = 1; i <= s - 1; ++i)
                if ((a >> (s - 1 - i)) & 1u) val ^= v_[d][k - i];
            v_[d][k] = val;
        }
    }

    if (scramble_seed) {
        std::mt19937_64 rng(*scramble_seed);
        for (int d = 0; d < dims_; ++d)
            shift_[d] = static_cast<std::uint32_t>(rng() >> 32);
    }
}

std::vector<double> SobolSequence::next() {
    std::vector<double> point(dims_);
    constexpr double kScale = 1.0 / 4294967296.0;  // 2^-32
    for (int d = 0; d < dims_; ++d)
        point[d] = double(state_[d] ^ shift_[d]) * kScale;
    ++index_;
    const int c = std::countr_zero(index_) + 1;  // lowest set bit of the new index
    if (c <= 32)
        for (int d = 0; d < dims_; ++d) state_[d] ^= v_[d][c];
    return point;
}

void SobolSequence::skip(std::uint64_t count) {
    for (std::uint64_t i = 0; i < count; ++i) next();
}

}  // namespace kge
