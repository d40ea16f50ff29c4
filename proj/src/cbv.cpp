#include "scot/cbv.hpp"

#include <algorithm>
#include <bit>
#include <stdexcept>

#include <fmt/format.h>

namespace scot {

ClusterBitVector::ClusterBitVector(std::size_t width)
    : width_(width), words_((width + 63) / 64, 0) {}

void ClusterBitVector::check(std::size_t i) const {
    if (i >= width_)
        throw std::out_of_range(fmt::format("bit {} outside vector of width {}", i, width_));
}

void ClusterBitVector::set_bit(std::size_t i) {
    check(i);
    words_[i / 64] |= std::uint64_t{1} << (i % 64);
}

void ClusterBitVector::clear_bit(std::size_t i) {
    check(i);
    words_[i / 64] &= ~(std::uint64_t{1} << (i % 64));
}

bool ClusterBitVector::test(std::size_t i) const {
    check(i);
    return (words_[i / 64] >> (i % 64)) & 1U;
}

bool ClusterBitVector::is_empty() const {
    return std::all_of(words_.begin(), words_.end(), [](std::uint64_t w) { return w == 0; });
}

std::size_t ClusterBitVector::count() const {
    std::size_t n = 0;
    for (auto w : words_) n += static_cast<std::size_t>(std::popcount(w));
    return n;
}

std::vector<std::size_t> ClusterBitVector::set_indexes() const {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < width_; ++i)
        if (test(i)) out.push_back(i);
    return out;
}

std::string ClusterBitVector::str() const {
    std::string s(width_, '0');
    for (std::size_t i = 0; i < width_; ++i)
        if (test(i)) s[width_ - 1 - i] = '1';
    return s;
}

}  // namespace scot
