#include "bakercrypt/cipher.hpp"

#include <algorithm>
#include <bit>

#include "bakercrypt/baker3d.hpp"

namespace bakercrypt::cipher {

namespace {

// Draws from one chaotic generator in canonical order, recording the layout.
class Cursor {
public:
    Cursor(const chaos::KeyMaterial& key, CipherPlan* plan)
        : state_(chaos::make_generator(key)), warmup_(key.warmup), plan_(plan) {
        if (plan_) {
            plan_->key = key;
            plan_->segments.clear();
        }
    }

    std::vector<uint32_t> bytes(uint64_t count, std::string label) {
        record(std::move(label), count);
        return state_.keystream(count, 256);
    }

    std::vector<double> raws(uint64_t count, std::string label) {
        record(std::move(label), count);
        std::vector<double> out(count);
        for (auto& v : out) v = state_.next_z();
        return out;
    }

private:
    void record(std::string label, uint64_t count) {
        if (plan_ && count > 0)
            plan_->segments.push_back({std::move(label), state_.emitted() - warmup_, count});
    }

    chaos::ChaoticState state_;
    uint64_t warmup_;
    CipherPlan* plan_;
};

uint32_t checked_modulus(uint32_t modulus) {
    if (modulus < 2 || !std::has_single_bit(modulus))
        raise(Errc::bad_modulus, "alphabet size must be a power of two >= 2");
    return modulus;
}

void check_ks(size_t values, size_t ks) {
    if (ks != values + 1)
        raise(Errc::keystream_exhausted, "keystream must hold one entry per value plus the seed");
}

template <typename T, typename Pass>
std::vector<T> bilateral(std::vector<T> v, const std::vector<uint32_t>& ks1,
                         const std::vector<uint32_t>& ks2, Pass pass) {
    v = pass(v, ks1);
    std::reverse(v.begin(), v.end());
    v = pass(v, ks2);
    std::reverse(v.begin(), v.end());
    return v;
}

template <typename T, typename Inverse>
std::vector<T> bilateral_undo(std::vector<T> v, const std::vector<uint32_t>& ks1,
                              const std::vector<uint32_t>& ks2, Inverse inverse) {
    std::reverse(v.begin(), v.end());
    v = inverse(v, ks2);
    std::reverse(v.begin(), v.end());
    return inverse(v, ks1);
}

// Partitions both chaotic axes and assembles the round's geometry.  Piece
// counts clamp to the axis size minus one; a unit axis needs no draw at all.
baker3d::BakerGeometry draw_geometry(Cursor& cur, uint32_t rows, uint32_t cols,
                                     const chaos::KeyMaterial& key, const std::string& label) {
    auto d = baker3d::cube_dims(rows, cols);
    std::vector<uint32_t> n, m;
    if (d.width == 1) {
        n = {1};
    } else {
        uint32_t pieces = std::min<uint64_t>(key.k, d.width - 1);
        n = baker3d::partition_axis(d.width, pieces, cur.raws(pieces - 1, label + ".x"));
    }
    if (d.length == 1) {
        m = {1};
    } else {
        uint32_t pieces = std::min<uint64_t>(key.t, d.length - 1);
        m = baker3d::partition_axis(d.length, pieces, cur.raws(pieces - 1, label + ".y"));
    }
    return baker3d::make_geometry(d.width, d.length, d.height, std::move(n), std::move(m));
}

std::vector<uint8_t> palette_bytes(const gif::Palette& p) {
    std::vector<uint8_t> out;
    out.reserve(p.size() * 3);
    for (const auto& c : p) out.insert(out.end(), c.begin(), c.end());
    return out;
}

gif::Palette bytes_palette(const std::vector<uint8_t>& b) {
    gif::Palette p(b.size() / 3);
    for (size_t i = 0; i < p.size(); ++i) p[i] = {b[3 * i], b[3 * i + 1], b[3 * i + 2]};
    return p;
}

const char* kComponentNames[3] = {"y", "cb", "cr"};

} // namespace

std::vector<int16_t> diffuse_words_forward(const std::vector<int16_t>& words,
                                           const std::vector<uint32_t>& ks) {
    check_ks(words.size(), ks.size());
    std::vector<int16_t> out(words.size());
    uint32_t prev = ks[words.size()] % 128;
    for (size_t i = 0; i < words.size(); ++i) {
        uint16_t w = static_cast<uint16_t>(words[i]);
        uint32_t enc = ((ks[i] % 128 + (w & 0x7Fu)) % 128) ^ prev;
        out[i] = static_cast<int16_t>((w & 0xFF80u) | enc);
        prev = enc;
    }
    return out;
}

std::vector<int16_t> diffuse_words_inverse(const std::vector<int16_t>& words,
                                           const std::vector<uint32_t>& ks) {
    check_ks(words.size(), ks.size());
    std::vector<int16_t> out(words.size());
    uint32_t prev = ks[words.size()] % 128;
    for (size_t i = 0; i < words.size(); ++i) {
        uint16_t w = static_cast<uint16_t>(words[i]);
        uint32_t cur = w & 0x7Fu;
        uint32_t low = ((prev ^ cur) + 128 - ks[i] % 128) % 128;
        out[i] = static_cast<int16_t>((w & 0xFF80u) | low);
        prev = cur;
    }
    return out;
}

std::vector<uint8_t> diffuse_bytes_forward(const std::vector<uint8_t>& values, uint32_t modulus,
                                           const std::vector<uint32_t>& ks) {
    uint32_t n = checked_modulus(modulus);
    check_ks(values.size(), ks.size());
    std::vector<uint8_t> out(values.size());
    uint32_t prev = ks[values.size()] % n;
    for (size_t i = 0; i < values.size(); ++i) {
        uint32_t enc = ((ks[i] % n + values[i]) % n) ^ prev;
        out[i] = static_cast<uint8_t>(enc);
        prev = enc;
    }
    return out;
}

std::vector<uint8_t> diffuse_bytes_inverse(const std::vector<uint8_t>& values, uint32_t modulus,
                                           const std::vector<uint32_t>& ks) {
    uint32_t n = checked_modulus(modulus);
    check_ks(values.size(), ks.size());
    std::vector<uint8_t> out(values.size());
    uint32_t prev = ks[values.size()] % n;
    for (size_t i = 0; i < values.size(); ++i) {
        uint32_t cur = values[i];
        out[i] = static_cast<uint8_t>(((prev ^ cur) + n - ks[i] % n) % n);
        prev = cur;
    }
    return out;
}

std::vector<int16_t> jpeg_word_sequence(const jpeg::JpegModel& model) {
    std::vector<int16_t> words;
    size_t total = 0;
    for (const auto& c : model.components) total += c.blocks.size() * 64;
    words.reserve(total);
    for (uint32_t mr = 0; mr < model.mcu_rows; ++mr)
        for (uint32_t mc = 0; mc < model.mcu_cols; ++mc)
            for (const auto& c : model.components)
                for (uint32_t v = 0; v < c.v; ++v)
                    for (uint32_t h = 0; h < c.h; ++h) {
                        const auto& blk =
                            c.blocks[size_t(mr * c.v + v) * c.cols + (size_t(mc) * c.h + h)];
                        for (int i = 0; i < 64; ++i)
                            words.push_back(blk[jpeg::kNaturalToZigzag[i]]);
                    }
    return words;
}

void jpeg_store_word_sequence(jpeg::JpegModel& model, const std::vector<int16_t>& words) {
    size_t total = 0;
    for (const auto& c : model.components) total += c.blocks.size() * 64;
    if (words.size() != total)
        raise(Errc::length_mismatch, "word count does not match the model");
    size_t pos = 0;
    for (uint32_t mr = 0; mr < model.mcu_rows; ++mr)
        for (uint32_t mc = 0; mc < model.mcu_cols; ++mc)
            for (auto& c : model.components)
                for (uint32_t v = 0; v < c.v; ++v)
                    for (uint32_t h = 0; h < c.h; ++h) {
                        auto& blk = c.blocks[size_t(mr * c.v + v) * c.cols + (size_t(mc) * c.h + h)];
                        for (int i = 0; i < 64; ++i)
                            blk[jpeg::kNaturalToZigzag[i]] = words[pos++];
                    }
}

jpeg::JpegModel encrypt_jpeg(const jpeg::JpegModel& model, const chaos::KeyMaterial& key,
                             CipherPlan* plan) {
    chaos::validate_key(key);
    Cursor cur(key, plan);
    jpeg::JpegModel out = model;

    auto words = jpeg_word_sequence(model);
    auto ks1 = cur.bytes(words.size() + 1, "coeff.forward");
    auto ks2 = cur.bytes(words.size() + 1, "coeff.backward");
    jpeg_store_word_sequence(out, bilateral(std::move(words), ks1, ks2, diffuse_words_forward));

    for (size_t ci = 0; ci < out.components.size(); ++ci) {
        auto [rows, cols] = jpeg::component_grid_dims(out, ci);
        auto& blocks = out.components[ci].blocks;
        for (uint32_t r = 1; r <= key.rounds; ++r) {
            auto g = draw_geometry(cur, rows, cols, key,
                                   std::string(kComponentNames[ci]) + ".round" + std::to_string(r));
            blocks = baker3d::permute(blocks, rows, cols, g, 1);
        }
    }
    return out;
}

jpeg::JpegModel decrypt_jpeg(const jpeg::JpegModel& model, const chaos::KeyMaterial& key,
                             CipherPlan* plan) {
    chaos::validate_key(key);
    Cursor cur(key, plan);
    jpeg::JpegModel out = model;

    size_t total = 0;
    for (const auto& c : model.components) total += c.blocks.size() * 64;
    auto ks1 = cur.bytes(total + 1, "coeff.forward");
    auto ks2 = cur.bytes(total + 1, "coeff.backward");

    // regenerate the geometries in encryption order, then apply backwards
    for (size_t ci = 0; ci < out.components.size(); ++ci) {
        auto [rows, cols] = jpeg::component_grid_dims(out, ci);
        std::vector<baker3d::BakerGeometry> gs;
        gs.reserve(key.rounds);
        for (uint32_t r = 1; r <= key.rounds; ++r)
            gs.push_back(draw_geometry(cur, rows, cols, key,
                                       std::string(kComponentNames[ci]) + ".round" +
                                           std::to_string(r)));
        auto& blocks = out.components[ci].blocks;
        for (size_t r = gs.size(); r > 0; --r)
            blocks = baker3d::unpermute(blocks, rows, cols, gs[r - 1], 1);
    }

    jpeg_store_word_sequence(
        out, bilateral_undo(jpeg_word_sequence(out), ks1, ks2, diffuse_words_inverse));
    return out;
}

gif::GifModel encrypt_gif(const gif::GifModel& model, const chaos::KeyMaterial& key,
                          CipherPlan* plan) {
    chaos::validate_key(key);
    Cursor cur(key, plan);
    gif::GifModel out = model;

    if (out.global_palette) {
        auto flat = palette_bytes(*out.global_palette);
        auto ks1 = cur.bytes(flat.size() + 1, "palette.forward");
        auto ks2 = cur.bytes(flat.size() + 1, "palette.backward");
        *out.global_palette = bytes_palette(
            bilateral(std::move(flat), ks1, ks2, [](const auto& v, const auto& ks) {
                return diffuse_bytes_forward(v, 256, ks);
            }));
    }

    for (size_t fi = 0; fi < out.frames.size(); ++fi) {
        auto& f = out.frames[fi];
        std::string tag = "frame" + std::to_string(fi);
        if (f.local_palette) {
            auto flat = palette_bytes(*f.local_palette);
            auto ks1 = cur.bytes(flat.size() + 1, tag + ".palette.forward");
            auto ks2 = cur.bytes(flat.size() + 1, tag + ".palette.backward");
            *f.local_palette = bytes_palette(
                bilateral(std::move(flat), ks1, ks2, [](const auto& v, const auto& ks) {
                    return diffuse_bytes_forward(v, 256, ks);
                }));
        }

        uint32_t alphabet = static_cast<uint32_t>(model.active_palette(fi).size());
        auto ks1 = cur.bytes(f.indices.size() + 1, tag + ".indices.forward");
        auto ks2 = cur.bytes(f.indices.size() + 1, tag + ".indices.backward");
        f.indices = bilateral(std::move(f.indices), ks1, ks2,
                              [alphabet](const auto& v, const auto& ks) {
                                  return diffuse_bytes_forward(v, alphabet, ks);
                              });

        for (uint32_t r = 1; r <= key.rounds; ++r) {
            auto g = draw_geometry(cur, f.height, f.width, key,
                                   tag + ".round" + std::to_string(r));
            f.indices = baker3d::permute(f.indices, f.height, f.width, g, 1);
        }
    }
    return out;
}

gif::GifModel decrypt_gif(const gif::GifModel& model, const chaos::KeyMaterial& key,
                          CipherPlan* plan) {
    chaos::validate_key(key);
    Cursor cur(key, plan);
    gif::GifModel out = model;

    std::vector<uint32_t> gks1, gks2;
    if (out.global_palette) {
        size_t n = out.global_palette->size() * 3;
        gks1 = cur.bytes(n + 1, "palette.forward");
        gks2 = cur.bytes(n + 1, "palette.backward");
    }

    struct FrameDraws {
        std::vector<uint32_t> pks1, pks2, iks1, iks2;
        std::vector<baker3d::BakerGeometry> gs;
    };
    std::vector<FrameDraws> draws(out.frames.size());
    for (size_t fi = 0; fi < out.frames.size(); ++fi) {
        auto& f = out.frames[fi];
        auto& d = draws[fi];
        std::string tag = "frame" + std::to_string(fi);
        if (f.local_palette) {
            size_t n = f.local_palette->size() * 3;
            d.pks1 = cur.bytes(n + 1, tag + ".palette.forward");
            d.pks2 = cur.bytes(n + 1, tag + ".palette.backward");
        }
        d.iks1 = cur.bytes(f.indices.size() + 1, tag + ".indices.forward");
        d.iks2 = cur.bytes(f.indices.size() + 1, tag + ".indices.backward");
        for (uint32_t r = 1; r <= key.rounds; ++r)
            d.gs.push_back(
                draw_geometry(cur, f.height, f.width, key, tag + ".round" + std::to_string(r)));
    }

    if (out.global_palette) {
        *out.global_palette = bytes_palette(bilateral_undo(
            palette_bytes(*out.global_palette), gks1, gks2, [](const auto& v, const auto& ks) {
                return diffuse_bytes_inverse(v, 256, ks);
            }));
    }
    for (size_t fi = 0; fi < out.frames.size(); ++fi) {
        auto& f = out.frames[fi];
        auto& d = draws[fi];
        if (f.local_palette) {
            *f.local_palette = bytes_palette(bilateral_undo(
                palette_bytes(*f.local_palette), d.pks1, d.pks2, [](const auto& v, const auto& ks) {
                    return diffuse_bytes_inverse(v, 256, ks);
                }));
        }
        for (size_t r = d.gs.size(); r > 0; --r)
            f.indices = baker3d::unpermute(f.indices, f.height, f.width, d.gs[r - 1], 1);
        uint32_t alphabet = static_cast<uint32_t>(model.active_palette(fi).size());
        f.indices = bilateral_undo(std::move(f.indices), d.iks1, d.iks2,
                                   [alphabet](const auto& v, const auto& ks) {
                                       return diffuse_bytes_inverse(v, alphabet, ks);
                                   });
    }
    return out;
}

BitString jpeg_payload_bits(const jpeg::JpegModel& model) {
    BitString bits;
    for (int16_t w : jpeg_word_sequence(model))
        bits.push(static_cast<uint16_t>(w) & 0x7Fu, 7);
    return bits;
}

BitString gif_payload_bits(const gif::GifModel& model) {
    BitString bits;
    for (size_t fi = 0; fi < model.frames.size(); ++fi) {
        uint32_t alphabet = static_cast<uint32_t>(model.active_palette(fi).size());
        int width = std::countr_zero(alphabet);
        for (uint8_t idx : model.frames[fi].indices) bits.push(idx, width);
    }
    return bits;
}

} // namespace bakercrypt::cipher
