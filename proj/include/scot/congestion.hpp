#pragma once

#include <cstddef>
#include <cstdint>

namespace scot {

struct CongestionParams {
    double tau = 10.0;
    std::int64_t window = 50;  // t_w in ticks
};

// Per directed link. qIn/qOut count copies entering and leaving the output
// queue during the current window; last_ce comes from the window before.
struct LinkStatusRecord {
    std::uint64_t q_in = 0;
    std::uint64_t q_out = 0;
    double last_ce = 1.0;
    bool congested_flag = false;
};

inline double congestion_element(std::uint64_t q_in, std::uint64_t q_out) {
    return (1.0 + static_cast<double>(q_in)) / (1.0 + static_cast<double>(q_out));
}

// Q_l * CE > tau, with CE from the last completed window.
inline bool congested(const LinkStatusRecord& lsr, std::size_t queue_length, double tau) {
    return static_cast<double>(queue_length) * lsr.last_ce > tau;
}

// Closes the current window: recomputes CE, re-evaluates the flag against
// the queue length at the boundary and clears the counters.
inline void roll_window(LinkStatusRecord& lsr, std::size_t queue_length, double tau) {
    lsr.last_ce = congestion_element(lsr.q_in, lsr.q_out);
    lsr.congested_flag = congested(lsr, queue_length, tau);
    lsr.q_in = 0;
    lsr.q_out = 0;
}

}  // namespace scot
