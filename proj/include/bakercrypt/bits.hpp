#pragma once

#include <cstdint>
#include <vector>

namespace bakercrypt {

// growable bit vector packed MSB-first within each byte
struct BitString {
    std::vector<uint8_t> bytes;
    uint64_t nbits = 0;

    void push_bit(uint32_t b) {
        if (nbits % 8 == 0) bytes.push_back(0);
        if (b & 1u) bytes[nbits / 8] |= static_cast<uint8_t>(0x80u >> (nbits % 8));
        ++nbits;
    }

    // append the low `width` bits of value, most significant first
    void push(uint32_t value, int width) {
        for (int i = width - 1; i >= 0; --i) push_bit((value >> i) & 1u);
    }

    int bit(uint64_t i) const { return (bytes[i / 8] >> (7 - i % 8)) & 1; }

    bool operator==(const BitString&) const = default;
};

} // namespace bakercrypt
