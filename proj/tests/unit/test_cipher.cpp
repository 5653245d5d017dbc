#include <doctest.h>

#include <functional>
#include <optional>
#include <random>
#include <vector>

#include "bakercrypt/chaos.hpp"
#include "bakercrypt/cipher.hpp"
#include "bakercrypt/error.hpp"
#include "bakercrypt/gif.hpp"
#include "bakercrypt/io.hpp"
#include "bakercrypt/jpeg.hpp"

using namespace bakercrypt;

namespace {

std::optional<Errc> errc_of(const std::function<void()>& fn) {
    try {
        fn();
    } catch (const Error& e) {
        return e.code();
    }
    return std::nullopt;
}

chaos::KeyMaterial test_key(double x0 = 0.1, double y0 = 0.2, uint32_t k = 2, uint32_t t = 2,
                            uint32_t rounds = 2) {
    chaos::KeyMaterial key;
    key.x0 = x0;
    key.y0 = y0;
    key.k = k;
    key.t = t;
    key.rounds = rounds;
    return key;
}

std::vector<uint32_t> random_ks(size_t n, uint32_t seed) {
    std::mt19937 rng(seed);
    std::uniform_int_distribution<uint32_t> d(0, 255);
    std::vector<uint32_t> out(n);
    for (auto& v : out) v = d(rng);
    return out;
}

std::string corpus(const std::string& name) {
    return std::string(CORPUS_DIR) + "/" + name;
}

gif::GifModel tiny_gif() {
    gif::GifModel m;
    m.width = 4;
    m.height = 4;
    m.global_palette = gif::Palette{{1, 2, 3}, {4, 5, 6}, {7, 8, 9}, {10, 11, 12}};
    gif::Frame f;
    f.width = 4;
    f.height = 4;
    f.min_code_size = 2;
    f.indices.resize(16);
    for (size_t i = 0; i < 16; ++i) f.indices[i] = uint8_t((i * 7 + 3) % 4);
    m.frames.push_back(std::move(f));
    m.items.push_back({true, 0, {}});
    return m;
}

jpeg::JpegModel tiny_jpeg(uint16_t w, uint16_t h,
                          std::array<std::pair<uint8_t, uint8_t>, 3> sampling, uint32_t seed) {
    jpeg::JpegModel m;
    m.width = w;
    m.height = h;
    for (auto [sh, sv] : sampling) {
        m.hmax = std::max(m.hmax, sh);
        m.vmax = std::max(m.vmax, sv);
    }
    m.mcu_cols = (w + 8u * m.hmax - 1) / (8u * m.hmax);
    m.mcu_rows = (h + 8u * m.vmax - 1) / (8u * m.vmax);
    std::mt19937 rng(seed);
    std::uniform_int_distribution<int> dc(-800, 800), ac(-120, 120), pick(0, 99);
    for (int i = 0; i < 3; ++i) {
        jpeg::JpegComponent c;
        c.id = uint8_t(i + 1);
        c.h = sampling[i].first;
        c.v = sampling[i].second;
        c.quant_id = i == 0 ? 0 : 1;
        c.rows = c.v * m.mcu_rows;
        c.cols = c.h * m.mcu_cols;
        c.blocks.assign(size_t(c.rows) * c.cols, {});
        for (auto& b : c.blocks) {
            b[0] = int16_t(dc(rng));
            for (int j = 1; j < 64; ++j)
                if (pick(rng) < 25) b[j] = int16_t(ac(rng));
        }
        m.components.push_back(std::move(c));
    }
    return m;
}

} // namespace

TEST_CASE("word diffusion reproduces the worked examples") {
    CHECK(cipher::diffuse_words_forward({5}, {10, 3}) == std::vector<int16_t>{12});
    CHECK(cipher::diffuse_words_forward({-5}, {10, 3}) == std::vector<int16_t>{-122});
    CHECK(cipher::diffuse_words_inverse({12}, {10, 3}) == std::vector<int16_t>{5});
    CHECK(cipher::diffuse_words_inverse({-122}, {10, 3}) == std::vector<int16_t>{-5});
}

TEST_CASE("byte diffusion reproduces the worked examples") {
    CHECK(cipher::diffuse_bytes_forward({100}, 256, {200, 50}) == std::vector<uint8_t>{30});
    CHECK(cipher::diffuse_bytes_inverse({30}, 256, {200, 50}) == std::vector<uint8_t>{100});
}

TEST_CASE("diffusion passes invert each other on random data") {
    std::mt19937 rng(5);
    std::uniform_int_distribution<int> wd(-2047, 2047);
    for (int trial = 0; trial < 50; ++trial) {
        size_t n = 1 + rng() % 300;
        std::vector<int16_t> words(n);
        for (auto& w : words) w = int16_t(wd(rng));
        auto ks = random_ks(n + 1, 1000 + trial);
        auto enc = cipher::diffuse_words_forward(words, ks);
        CHECK(cipher::diffuse_words_inverse(enc, ks) == words);
        for (size_t i = 0; i < n; ++i)
            CHECK((uint16_t(enc[i]) & 0xFF80) == (uint16_t(words[i]) & 0xFF80));
    }
    for (uint32_t mod : {2u, 4u, 8u, 16u, 32u, 64u, 128u, 256u}) {
        size_t n = 1 + rng() % 300;
        std::vector<uint8_t> vals(n);
        for (auto& v : vals) v = uint8_t(rng() % mod);
        auto ks = random_ks(n + 1, 2000 + mod);
        auto enc = cipher::diffuse_bytes_forward(vals, mod, ks);
        for (auto e : enc) CHECK(e < mod);
        CHECK(cipher::diffuse_bytes_inverse(enc, mod, ks) == vals);
    }
}

TEST_CASE("byte diffusion rejects alphabets that are not a power of two") {
    for (uint32_t mod : {0u, 1u, 3u, 100u, 255u})
        CHECK(errc_of([&] { cipher::diffuse_bytes_forward({0}, mod, {1, 2}); }) ==
              Errc::bad_modulus);
}

TEST_CASE("diffusion validates the keystream length") {
    CHECK(errc_of([] { cipher::diffuse_words_forward({1, 2}, {1, 2}); }) ==
          Errc::keystream_exhausted);
    CHECK(errc_of([] { cipher::diffuse_bytes_inverse({1}, 256, {1, 2, 3}); }) ==
          Errc::keystream_exhausted);
}

TEST_CASE("generator-fed word diffusion matches the frozen vector") {
    auto key = test_key();
    auto gen = chaos::make_generator(key);
    std::vector<int16_t> words{5, -5, 0, 100, -100, 1023, -1023, 2047};
    auto ks1 = gen.keystream(9, 256);
    auto ks2 = gen.keystream(9, 256);
    auto a = cipher::diffuse_words_forward(words, ks1);
    std::reverse(a.begin(), a.end());
    a = cipher::diffuse_words_forward(a, ks2);
    std::reverse(a.begin(), a.end());
    CHECK(a == std::vector<int16_t>{34, -44, 111, 101, -91, 1002, -913, 2021});
}

TEST_CASE("gif encryption matches the frozen vector and records its plan") {
    auto m = tiny_gif();
    auto key = test_key(0.1, 0.2, 1, 1, 1);
    cipher::CipherPlan plan;
    auto enc = cipher::encrypt_gif(m, key, &plan);

    CHECK((*enc.global_palette)[0] == std::array<uint8_t, 3>{68, 22, 155});
    CHECK((*enc.global_palette)[1] == std::array<uint8_t, 3>{232, 238, 164});
    CHECK((*enc.global_palette)[2] == std::array<uint8_t, 3>{39, 38, 251});
    CHECK((*enc.global_palette)[3] == std::array<uint8_t, 3>{249, 204, 161});
    CHECK(enc.frames[0].indices ==
          std::vector<uint8_t>{1, 0, 1, 0, 1, 3, 0, 2, 0, 3, 2, 0, 2, 3, 0, 0});

    // canonical draw order: palette both passes, then the frame's indices;
    // the 4x4 grid folds to a 1x1x16 cube, so no partition draws appear
    REQUIRE(plan.segments.size() == 4);
    CHECK(plan.segments[0] == cipher::StreamSegment{"palette.forward", 0, 13});
    CHECK(plan.segments[1] == cipher::StreamSegment{"palette.backward", 13, 13});
    CHECK(plan.segments[2] == cipher::StreamSegment{"frame0.indices.forward", 26, 17});
    CHECK(plan.segments[3] == cipher::StreamSegment{"frame0.indices.backward", 43, 17});

    cipher::CipherPlan dplan;
    auto dec = cipher::decrypt_gif(enc, key, &dplan);
    CHECK(dec.frames[0].indices == m.frames[0].indices);
    CHECK(*dec.global_palette == *m.global_palette);
    CHECK(dplan.segments == plan.segments);
}

TEST_CASE("word sequence and store are inverse over synthetic models") {
    for (uint32_t seed : {1u, 2u, 3u}) {
        auto m = tiny_jpeg(48, 32, {{{2, 2}, {1, 1}, {1, 1}}}, seed);
        auto words = cipher::jpeg_word_sequence(m);
        size_t blocks = 0;
        for (auto& c : m.components) blocks += c.blocks.size();
        CHECK(words.size() == blocks * 64);
        auto copy = m;
        cipher::jpeg_store_word_sequence(copy, words);
        for (size_t c = 0; c < 3; ++c)
            CHECK(copy.components[c].blocks == m.components[c].blocks);
    }
    auto m = tiny_jpeg(16, 16, {{{1, 1}, {1, 1}, {1, 1}}}, 9);
    CHECK(errc_of([&] { cipher::jpeg_store_word_sequence(m, {1, 2, 3}); }) ==
          Errc::length_mismatch);
}

TEST_CASE("the word sequence interleaves by mcu in natural block order") {
    // 4:2:0, two MCUs wide: first 64*4 words are the Y blocks of MCU(0,0),
    // then one Cb and one Cr block, then MCU(0,1)
    auto m = tiny_jpeg(32, 16, {{{2, 2}, {1, 1}, {1, 1}}}, 4);
    auto words = cipher::jpeg_word_sequence(m);
    REQUIRE(words.size() == (4 + 1 + 1) * 64 * 2);
    // block (0,0) of Y unfolds row-major: word 0 is the DC, word 1 its right
    // neighbour (natural index 1 = zigzag position 1), word 8 the one below
    // (natural 8 = zigzag 2)
    const auto& blk = m.components[0].blocks[0];
    CHECK(words[0] == blk[0]);
    CHECK(words[1] == blk[1]);
    CHECK(words[8] == blk[2]);
    // second Y block of the first MCU is grid cell (0,1)
    CHECK(words[64] == m.components[0].blocks[1][0]);
    // third is grid cell (1,0) on the second block row
    CHECK(words[128] == m.components[0].blocks[m.components[0].cols][0]);
    // after 4 Y blocks come Cb then Cr
    CHECK(words[256] == m.components[1].blocks[0][0]);
    CHECK(words[320] == m.components[2].blocks[0][0]);
    // next MCU starts with Y grid cell (0,2)
    CHECK(words[384] == m.components[0].blocks[2][0]);
}

TEST_CASE("jpeg encrypt/decrypt round-trips synthetic models") {
    for (auto [w, h] : std::vector<std::pair<uint16_t, uint16_t>>{{16, 16}, {17, 19}, {64, 48}}) {
        for (uint32_t rounds : {1u, 3u}) {
            auto m = tiny_jpeg(w, h, {{{2, 2}, {1, 1}, {1, 1}}}, w + h + rounds);
            auto key = test_key(0.31, -0.47, 3, 2, rounds);
            auto enc = cipher::encrypt_jpeg(m, key);
            bool changed = false;
            for (size_t c = 0; c < 3; ++c)
                if (enc.components[c].blocks != m.components[c].blocks) changed = true;
            CHECK(changed);
            auto dec = cipher::decrypt_jpeg(enc, key);
            for (size_t c = 0; c < 3; ++c)
                CHECK(dec.components[c].blocks == m.components[c].blocks);
        }
    }
}

TEST_CASE("jpeg encrypt and decrypt draw identical keystream layouts") {
    auto m = tiny_jpeg(40, 24, {{{2, 1}, {1, 1}, {1, 1}}}, 77);
    auto key = test_key(0.11, 0.21, 4, 3, 2);
    cipher::CipherPlan eplan, dplan;
    auto enc = cipher::encrypt_jpeg(m, key, &eplan);
    cipher::decrypt_jpeg(enc, key, &dplan);
    CHECK(eplan.segments == dplan.segments);
    REQUIRE(!eplan.segments.empty());
    CHECK(eplan.segments[0].consumer == "coeff.forward");
    CHECK(eplan.segments[0].offset == 0);
    CHECK(eplan.segments[1].consumer == "coeff.backward");
    // segments tile the stream with no gaps
    uint64_t pos = 0;
    for (const auto& s : eplan.segments) {
        CHECK(s.offset == pos);
        pos += s.length;
    }
}

TEST_CASE("gif encrypt/decrypt round-trips corpus files through bytes") {
    for (const char* name : {"gif_4c_16x16.gif", "gif_anim_local_4f_32x32.gif",
                             "gif_interlaced_16c_40x33.gif", "gif_anim_gce_3f_24x24.gif"}) {
        CAPTURE(name);
        auto plain = gif::parse_gif(io::read_file(corpus(name)));
        auto key = test_key(-0.318, 0.443, 3, 3, 2);
        auto enc = cipher::encrypt_gif(plain, key);

        // the encrypted model must survive a file round-trip
        auto enc2 = gif::parse_gif(gif::serialize_gif(enc));
        auto dec = cipher::decrypt_gif(enc2, key);
        for (size_t f = 0; f < plain.frames.size(); ++f) {
            CHECK(dec.frames[f].indices == plain.frames[f].indices);
            CHECK(dec.frames[f].local_palette == plain.frames[f].local_palette);
        }
        CHECK(dec.global_palette == plain.global_palette);
    }
}

TEST_CASE("jpeg encrypt/decrypt round-trips corpus files through bytes") {
    for (const char* name :
         {"jpeg_q75_444_64x64.jpg", "jpeg_odd_420_17x19.jpg", "jpeg_q95_422_64x64.jpg"}) {
        CAPTURE(name);
        auto plain = jpeg::parse_jpeg(io::read_file(corpus(name)));
        auto key = test_key(0.205, -0.381, 2, 4, 3);
        auto enc = cipher::encrypt_jpeg(plain, key);
        auto enc2 = jpeg::parse_jpeg(jpeg::serialize_jpeg(enc));
        auto dec = cipher::decrypt_jpeg(enc2, key);
        for (size_t c = 0; c < 3; ++c)
            CHECK(dec.components[c].blocks == plain.components[c].blocks);
    }
}

TEST_CASE("a wrong key or perturbed seed fails to decrypt") {
    auto m = tiny_gif();
    auto key = test_key(0.1, 0.2, 1, 1, 1);
    auto enc = cipher::encrypt_gif(m, key);

    auto wrong = key;
    wrong.x0 = 0.100001;
    CHECK(cipher::decrypt_gif(enc, wrong).frames[0].indices != m.frames[0].indices);

    auto nearby = key;
    nearby.x0 = 0.1 + 1e-14;
    CHECK(cipher::decrypt_gif(enc, nearby).frames[0].indices != m.frames[0].indices);
}

TEST_CASE("encryption rejects invalid keys") {
    auto m = tiny_gif();
    auto bad = test_key(1.5, 0.2);
    CHECK(errc_of([&] { cipher::encrypt_gif(m, bad); }) == Errc::out_of_range);
    auto fixed = test_key(0.0, 0.5);
    CHECK(errc_of([&] { cipher::encrypt_gif(m, fixed); }) == Errc::fixed_point_seed);
    auto zk = test_key();
    zk.k = 0;
    CHECK(errc_of([&] { cipher::encrypt_gif(m, zk); }) == Errc::bad_key);
}

TEST_CASE("payload bit extraction sizes and order") {
    auto jm = tiny_jpeg(16, 16, {{{1, 1}, {1, 1}, {1, 1}}}, 3);
    auto bits = cipher::jpeg_payload_bits(jm);
    size_t words = 0;
    for (auto& c : jm.components) words += c.blocks.size() * 64;
    CHECK(bits.nbits == words * 7);
    // first 7 bits are the low bits of the first word, most significant first
    auto seq = cipher::jpeg_word_sequence(jm);
    uint32_t low = uint16_t(seq[0]) & 0x7F;
    for (int i = 0; i < 7; ++i) CHECK(uint32_t(bits.bit(i)) == ((low >> (6 - i)) & 1));

    auto gm = tiny_gif();
    auto gbits = cipher::gif_payload_bits(gm);
    CHECK(gbits.nbits == 16 * 2); // 4-colour palette, two bits per pixel
    CHECK(gbits.bit(0) == ((gm.frames[0].indices[0] >> 1) & 1));
    CHECK(gbits.bit(1) == (gm.frames[0].indices[0] & 1));
}
