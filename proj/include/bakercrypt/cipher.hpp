#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "bakercrypt/bits.hpp"
#include "bakercrypt/chaos.hpp"
#include "bakercrypt/error.hpp"
#include "bakercrypt/gif.hpp"
#include "bakercrypt/jpeg.hpp"

namespace bakercrypt::cipher {

// One contiguous run of chaotic iterates handed to a named consumer.
struct StreamSegment {
    std::string consumer;
    uint64_t offset = 0; // position in the post-warm-up iterate stream
    uint64_t length = 0;

    bool operator==(const StreamSegment&) const = default;
};

// Record of every keystream draw an encrypt/decrypt made, in order.  The
// segments are contiguous and disjoint; decryption replays the same layout.
struct CipherPlan {
    chaos::KeyMaterial key;
    std::vector<StreamSegment> segments;
};

// Single-pass diffusion over 16-bit words: the low 7 bits are shifted by the
// keystream modulo 128 and XOR-chained with the previous output's low bits;
// the high 9 bits pass through.  ks needs words.size() + 1 entries, the last
// seeding the chain.
std::vector<int16_t> diffuse_words_forward(const std::vector<int16_t>& words,
                                           const std::vector<uint32_t>& ks);
std::vector<int16_t> diffuse_words_inverse(const std::vector<int16_t>& words,
                                           const std::vector<uint32_t>& ks);

// Same chain over whole symbols modulo a power-of-two alphabet size.
// Errc::bad_modulus unless modulus is a power of two >= 2.
std::vector<uint8_t> diffuse_bytes_forward(const std::vector<uint8_t>& values, uint32_t modulus,
                                           const std::vector<uint32_t>& ks);
std::vector<uint8_t> diffuse_bytes_inverse(const std::vector<uint8_t>& values, uint32_t modulus,
                                           const std::vector<uint32_t>& ks);

// Full pipelines: bilateral diffusion (a forward pass, then another over the
// reversed sequence) followed by `key.rounds` fresh baker permutations per
// channel.  An optional plan receives the keystream layout.
jpeg::JpegModel encrypt_jpeg(const jpeg::JpegModel& model, const chaos::KeyMaterial& key,
                             CipherPlan* plan = nullptr);
jpeg::JpegModel decrypt_jpeg(const jpeg::JpegModel& model, const chaos::KeyMaterial& key,
                             CipherPlan* plan = nullptr);
gif::GifModel encrypt_gif(const gif::GifModel& model, const chaos::KeyMaterial& key,
                          CipherPlan* plan = nullptr);
gif::GifModel decrypt_gif(const gif::GifModel& model, const chaos::KeyMaterial& key,
                          CipherPlan* plan = nullptr);

// Coefficients in diffusion order: MCU-interleaved across components, 8x8
// blocks unfolded row-major (natural order).
std::vector<int16_t> jpeg_word_sequence(const jpeg::JpegModel& model);
void jpeg_store_word_sequence(jpeg::JpegModel& model, const std::vector<int16_t>& words);

// Cipher payload packed for randomness analysis: the 7 diffused bits per
// coefficient, or log2(palette size) bits per pixel index in file order.
BitString jpeg_payload_bits(const jpeg::JpegModel& model);
BitString gif_payload_bits(const gif::GifModel& model);

} // namespace bakercrypt::cipher
