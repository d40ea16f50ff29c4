#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

namespace scot {

// Cluster bit vector. One bit per cluster, bit i stands for cluster i and
// is printed right-to-left (bit 0 is the rightmost character).
class ClusterBitVector {
public:
    ClusterBitVector() = default;
    explicit ClusterBitVector(std::size_t width);

    std::size_t width() const { return width_; }

    void set_bit(std::size_t i);
    void clear_bit(std::size_t i);
    bool test(std::size_t i) const;
    bool is_empty() const;
    std::size_t count() const;
    std::vector<std::size_t> set_indexes() const;

    std::string str() const;

    bool operator==(const ClusterBitVector&) const = default;

private:
    void check(std::size_t i) const;

    std::size_t width_ = 0;
    std::vector<std::uint64_t> words_;
};

}  // namespace scot
