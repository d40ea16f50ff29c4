#pragma once

#include <cstdint>
#include <optional>
#include <random>

#include "scot/simulator.hpp"

namespace scot {

// Seeded draws that give the same sequence on every platform (the
// standard distributions are implementation-defined).
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}
    // Uniform in [0, n).
    std::uint64_t below(std::uint64_t n);
    // Uniform in [0, 1).
    double unit();

private:
    std::mt19937_64 engine_;
};

struct HrpSpec {
    double rate_npm = 1000;
    std::size_t count = 1000;
    Tick start = 0;
    std::optional<BrokerIndex> broker;  // drawn when unset
    double interested_fraction = 0.002;
};

struct WorkloadSpec {
    std::size_t subscribers = 0;
    std::size_t publishers = 0;
    std::size_t notifications_per_publisher = 0;
    double rate_npm = 60;  // gamma, per publisher
    double selectivity = 0.02;
    Tick start_spread = 5000;
    std::size_t symbols = 500;
    std::size_t attributes = 10;
    std::optional<HrpSpec> hrp;
};

// Subscriptions are issued at tick 0. Publication ticks are relative to
// the start of publishing.
//
// Every notification carries `sym` (drawn from the first m symbols, with
// m = floor(1 / selectivity)), a two-decimal `price` in [0, 100) and
// `attributes - 2` integer attributes a2, a3, .... A subscription is
// `sym eq <symbol>`, plus `price lt q` when 1/m overshoots the target.
// Client ids: subscribers 0..N-1, then publishers, then the HRP.
Workload generate_workload(const WorkloadSpec& spec, const ScotTopology& topology,
                           std::uint64_t seed);

// Throws ConfigError naming the achievable selectivity range.
void validate(const WorkloadSpec& spec);

}  // namespace scot
