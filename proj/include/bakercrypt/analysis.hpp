#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "bakercrypt/bits.hpp"
#include "bakercrypt/gif.hpp"
#include "bakercrypt/jpeg.hpp"
#include "bakercrypt/nist.hpp"

namespace bakercrypt::analysis {

struct ChannelCorrelation {
    std::string channel;
    std::optional<double> horizontal;
    std::optional<double> vertical;
    std::optional<double> diagonal;
};

struct ChannelEntropy {
    std::string channel;
    double bits = 0.0;
};

struct ChannelDiff {
    std::string channel;
    double npcr = 0.0;
    double uaci = 0.0;
};

struct MetricsReport {
    std::string format; // "jpeg" or "gif"
    uint64_t payload_bit_count = 0;
    std::vector<ChannelCorrelation> correlations;
    std::vector<ChannelEntropy> entropies; // per channel plus "total"
    // populated only when a reference image is supplied
    std::vector<ChannelDiff> differences;
    std::optional<double> avalanche_pct;
    // empty with advisory set when the payload is too short to evaluate
    std::vector<nist::TestResult> nist_tests;
    bool nist_advisory = false;
    bool nist_all_pass = false;
};

// Statistics of `subject` (typically a ciphertext); `reference`, when given,
// is what NPCR/UACI/avalanche compare against (typically the plaintext).
// Errc::shape_mismatch when the reference geometry differs.
//
// JPEG channels are y/cb/cr: correlation over the de-zigzagged 8Rx8C
// coefficient grid, entropy and NPCR/UACI over the low-7-bit residues
// (alphabet 128, depth 127).  GIF channels are the palette-mapped r/g/b of
// frame 0 for correlation, all frames pooled for entropy; NPCR/UACI runs per
// frame on the index arrays with depth = palette size - 1.
MetricsReport analyze(const jpeg::JpegModel& subject, const jpeg::JpegModel* reference);
MetricsReport analyze(const gif::GifModel& subject, const gif::GifModel* reference);

// one JSON object mirroring MetricsReport, stable field order, 2-space indent
std::string to_json(const MetricsReport& report);

// channel planes the metrics run over, exposed for tests
std::vector<int32_t> jpeg_coefficient_plane(const jpeg::JpegModel& model, size_t comp,
                                            uint64_t& rows, uint64_t& cols);
std::vector<int32_t> gif_channel_plane(const gif::GifModel& model, size_t frame, int channel);

// payload bits packed MSB-first, zero padding to a whole byte
void export_bitstream(const BitString& bits, const std::string& path);
BitString import_bitstream(const std::string& path); // 8 * file size bits

} // namespace bakercrypt::analysis
