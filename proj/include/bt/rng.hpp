#pragma once

#include <cstdint>
#include <string_view>

namespace bt {

// xoshiro256++ with splitmix64 seeding. Every run derives named streams from
// one master seed so that e.g. a policy drawing extra prices can never perturb
// the valuation sequence of the environment.
class Rng {
public:
    Rng() : Rng(0x9e3779b97f4a7c15ull) {}
    explicit Rng(std::uint64_t seed);

    // Stream derivation: (master, stream name, replication) -> independent rng.
    static Rng stream(std::uint64_t master, std::string_view name, std::uint64_t replication = 0);

    std::uint64_t next_u64();

    // Uniform in [0, 1).
    double uniform01();
    // Uniform in [lo, hi).
    double uniform(double lo, double hi);
    // Uniform integer in {0, ..., n-1}, n >= 1.
    std::uint64_t uniform_int(std::uint64_t n);
    // Standard normal (Box-Muller).
    double normal();

private:
    std::uint64_t s_[4];
    bool have_spare_ = false;
    double spare_ = 0.0;
};

}  // namespace bt
