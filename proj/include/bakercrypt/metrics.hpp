#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "bakercrypt/bits.hpp"

namespace bakercrypt::metrics {

enum class Direction { horizontal, vertical, diagonal };

// Pearson correlation over all adjacent pairs of a rows x cols grid in the
// given direction. Returns nullopt when either paired series is constant
// (degenerate variance) or when the grid has no pairs in that direction.
std::optional<double> adjacent_correlation(const std::vector<int32_t>& values,
                                           uint64_t rows, uint64_t cols,
                                           Direction direction);

struct DiffStats {
    double npcr = 0.0; // fraction of positions that differ
    double uaci = 0.0; // mean |a - b| / depth_max
};

// depth_max is the largest representable value of the plane (>= 1)
DiffStats npcr_uaci(const std::vector<int32_t>& a, const std::vector<int32_t>& b,
                    uint32_t depth_max);

// 100 * Hamming distance / bit count
double avalanche_percent(const BitString& a, const BitString& b);

// Shannon entropy in bits of the empirical symbol distribution;
// alphabet_size only sizes the histogram, larger symbols still count
double entropy_bits(const std::vector<uint32_t>& symbols, uint32_t alphabet_size);

} // namespace bakercrypt::metrics
