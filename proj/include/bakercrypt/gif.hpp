#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <vector>

#include "bakercrypt/error.hpp"

namespace bakercrypt::gif {

// RGB triples, length always a power of two between 2 and 256.
using Palette = std::vector<std::array<uint8_t, 3>>;

struct Frame {
    uint16_t left = 0;
    uint16_t top = 0;
    uint16_t width = 0;
    uint16_t height = 0;
    bool interlaced = false;
    uint8_t packed = 0;            // original descriptor flags (sort, reserved)
    std::optional<Palette> local_palette;
    uint8_t min_code_size = 2;     // original LZW minimum code size, reused on write
    std::vector<uint8_t> indices;  // width*height, logical row order
};

// One file-order item: either an extension preserved verbatim (introducer,
// label and sub-block framing included) or an image by frame list position.
struct Item {
    bool is_frame = false;
    size_t frame = 0;               // index into GifModel::frames
    std::vector<uint8_t> extension; // raw bytes when !is_frame
};

struct GifModel {
    bool is89a = true;
    uint16_t width = 0;
    uint16_t height = 0;
    uint8_t screen_packed = 0;  // logical-screen packed field, kept verbatim
    uint8_t background = 0;
    uint8_t aspect = 0;
    std::optional<Palette> global_palette;
    std::vector<Frame> frames;
    std::vector<Item> items;

    // palette a frame's indices refer to
    const Palette& active_palette(size_t frame) const;
};

// Decodes a GIF87a/89a stream: LZW-expands every frame (interlaced frames
// are stored in logical row order with the flag retained) and keeps
// extensions verbatim in file order.  Errc::corrupt_gif on violations.
GifModel parse_gif(const std::vector<uint8_t>& bytes);

// Re-encodes the model, re-applying interlacing and each frame's original
// minimum code size.  Errc::encoding_error when an index exceeds the active
// palette.
std::vector<uint8_t> serialize_gif(const GifModel& model);

// Raw LZW codec over index streams (GIF variable-code-width flavor),
// exposed for property tests.
std::vector<uint8_t> lzw_decode(const std::vector<uint8_t>& data, uint8_t min_code_size,
                                size_t expected);
std::vector<uint8_t> lzw_encode(const std::vector<uint8_t>& indices, uint8_t min_code_size);

} // namespace bakercrypt::gif
