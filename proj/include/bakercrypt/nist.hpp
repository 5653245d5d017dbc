#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "bakercrypt/bits.hpp"

namespace bakercrypt::nist {

// SP 800-22 p-values; each raises Errc::insufficient_bits when the stream is
// structurally too short to evaluate (e.g. zero complete blocks).
double frequency(const BitString& bits);
double block_frequency(const BitString& bits, uint32_t block_len);
double runs(const BitString& bits);
std::pair<double, double> cumulative_sums(const BitString& bits); // forward, reverse
double approximate_entropy(const BitString& bits, uint32_t m);

struct TestResult {
    std::string name;
    double p_value = 0.0;
    bool pass = false; // p_value >= 0.01

    bool operator==(const TestResult&) const = default;
};

struct SubsetReport {
    std::vector<TestResult> tests;
    uint64_t bit_count = 0;
    bool advisory = false; // stream shorter than the 10^6-bit recommendation
    bool all_pass = false;
};

// Frequency, Block Frequency (block 128), Runs, Cumulative Sums (both
// directions), Approximate Entropy (m = 10). Raises Errc::insufficient_bits
// below 1024 bits.
SubsetReport nist_subset(const BitString& bits);

} // namespace bakercrypt::nist
