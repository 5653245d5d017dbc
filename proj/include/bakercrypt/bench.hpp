#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "bakercrypt/chaos.hpp"
#include "bakercrypt/gif.hpp"
#include "bakercrypt/jpeg.hpp"

namespace bakercrypt::bench {

struct BenchRow {
    std::string format; // "jpeg" or "gif"
    uint32_t side = 0;  // square image edge in pixels
    uint64_t payload_bytes = 0;
    double seconds = 0.0; // best encrypt time across repeats

    double throughput() const { return double(payload_bytes) / seconds; }
};

// deterministic synthetic inputs: a 4:2:0 coefficient grid and a 256-color
// frame, both filled from a seeded generator
jpeg::JpegModel synthetic_jpeg(uint32_t side, uint32_t seed);
gif::GifModel synthetic_gif(uint32_t side, uint32_t seed);

// times encrypt_jpeg/encrypt_gif per size class, best of `repeats` runs
std::vector<BenchRow> run_bench(const std::vector<uint32_t>& sides,
                                const chaos::KeyMaterial& key, int repeats);

std::string format_table(const std::vector<BenchRow>& rows);

} // namespace bakercrypt::bench
