#pragma once

#include "embedlab/io.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace embedlab::acceptance {

struct Criterion {
    int id = 0;
    std::string name;
    bool pass = false;        // verdict on values alone
    double seconds = 0.0;
    double time_limit = 0.0;  // 0: no limit
    std::string detail;
    io::Json values = io::Json::object();

    [[nodiscard]] bool within_time() const { return time_limit <= 0.0 || seconds < time_limit; }
    [[nodiscard]] bool ok() const { return pass && within_time(); }
};

inline constexpr std::uint64_t kDefaultSeed = 42;

// Criteria 1-12 at the current thread count.
std::vector<Criterion> run_core(std::uint64_t seed);
// Criteria 1-13; 13 reruns the core suite with the same seed and with the other of {1, 8} threads.
std::vector<Criterion> run_all(std::uint64_t seed);

// Timing-free report, byte-stable for a fixed seed.
io::Json report(const std::vector<Criterion>& results, std::uint64_t seed);
// One "PASS"/"FAIL" line per criterion.
std::string table(const std::vector<Criterion>& results);
bool all_ok(const std::vector<Criterion>& results);

}  // namespace embedlab::acceptance
