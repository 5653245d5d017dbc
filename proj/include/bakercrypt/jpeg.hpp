#pragma once

#include <array>
#include <cstdint>
#include <utility>
#include <vector>

#include "bakercrypt/error.hpp"

namespace bakercrypt::jpeg {

// Natural (row-major) coefficient index for each zigzag position.
extern const std::array<uint8_t, 64> kZigzagToNatural;
// Zigzag position for each natural index (inverse of the above).
extern const std::array<uint8_t, 64> kNaturalToZigzag;

struct JpegComponent {
    uint8_t id = 0;       // identifier from the frame header
    uint8_t h = 1;        // horizontal sampling factor
    uint8_t v = 1;        // vertical sampling factor
    uint8_t quant_id = 0; // quantization table selector
    uint32_t rows = 0;    // block-grid rows, V * mcu_rows (MCU padded)
    uint32_t cols = 0;    // block-grid cols, H * mcu_cols (MCU padded)
    // rows*cols blocks, row-major; 64 coefficients in zigzag order with the
    // DC prediction already accumulated into absolute values.
    std::vector<std::array<int16_t, 64>> blocks;
};

// Baseline JPEG reduced to what the cipher needs: coefficient grids plus the
// verbatim pre-scan segments (APPn, COM, DQT) required to rebuild the file.
struct JpegModel {
    uint16_t width = 0;  // pixels per line
    uint16_t height = 0; // number of lines
    uint8_t hmax = 1;
    uint8_t vmax = 1;
    uint32_t mcu_rows = 0;
    uint32_t mcu_cols = 0;
    std::vector<JpegComponent> components; // exactly Y, Cb, Cr
    // complete segments (marker through payload) preserved in file order
    std::vector<std::vector<uint8_t>> segments;
};

// Decodes a baseline sequential Huffman 3-component interleaved JPEG down to
// its quantized coefficient blocks.  Errc::unsupported_jpeg for progressive/
// arithmetic/12-bit/other component counts, Errc::corrupt_stream for framing
// or entropy-coding violations.
JpegModel parse_jpeg(const std::vector<uint8_t>& bytes);

// Re-encodes a model as a baseline JPEG with Huffman tables rebuilt from the
// model's own symbol statistics (so post-encryption DC categories up to the
// baseline maximum stay encodable).  Restart markers are never emitted.
// Errc::encoding_overflow when a coefficient needs a category beyond
// baseline limits (DC > 11, AC > 10).
std::vector<uint8_t> serialize_jpeg(const JpegModel& model);

// Block-grid dimensions (rows, cols) of one component, the (M, N) the
// permutation operates on.
std::pair<uint32_t, uint32_t> component_grid_dims(const JpegModel& model, size_t index);

} // namespace bakercrypt::jpeg
