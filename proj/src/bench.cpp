#include "bakercrypt/bench.hpp"

#include <chrono>
#include <cstdio>
#include <random>

#include "bakercrypt/cipher.hpp"

namespace bakercrypt::bench {
namespace {

std::vector<uint8_t> flat_quant_table(uint8_t id) {
    std::vector<uint8_t> seg(5 + 64, 16);
    seg[0] = 0xFF, seg[1] = 0xDB, seg[2] = 0x00, seg[3] = 0x43, seg[4] = id;
    return seg;
}

template <typename Fn>
double best_of(int repeats, Fn&& fn) {
    double best = 1e300;
    for (int i = 0; i < repeats; ++i) {
        auto t0 = std::chrono::steady_clock::now();
        fn();
        auto t1 = std::chrono::steady_clock::now();
        best = std::min(best, std::chrono::duration<double>(t1 - t0).count());
    }
    return best;
}

} // namespace

jpeg::JpegModel synthetic_jpeg(uint32_t side, uint32_t seed) {
    jpeg::JpegModel m;
    m.width = uint16_t(side);
    m.height = uint16_t(side);
    m.hmax = 2;
    m.vmax = 2;
    m.mcu_rows = (side + 15) / 16;
    m.mcu_cols = (side + 15) / 16;
    m.segments = {flat_quant_table(0), flat_quant_table(1)};
    std::mt19937 rng(seed);
    std::uniform_int_distribution<int> coeff(-128, 127);
    const uint8_t ids[3] = {1, 2, 3};
    for (int ci = 0; ci < 3; ++ci) {
        jpeg::JpegComponent c;
        c.id = ids[ci];
        c.h = c.v = (ci == 0) ? 2 : 1;
        c.quant_id = (ci == 0) ? 0 : 1;
        c.rows = c.v * m.mcu_rows;
        c.cols = c.h * m.mcu_cols;
        c.blocks.resize(size_t(c.rows) * c.cols);
        for (auto& blk : c.blocks)
            for (auto& v : blk) v = int16_t(coeff(rng));
        m.components.push_back(std::move(c));
    }
    return m;
}

gif::GifModel synthetic_gif(uint32_t side, uint32_t seed) {
    gif::GifModel m;
    m.width = uint16_t(side);
    m.height = uint16_t(side);
    m.screen_packed = 0xF7; // global table, 8 bits per primary
    std::mt19937 rng(seed);
    gif::Palette pal(256);
    for (auto& rgb : pal)
        for (auto& v : rgb) v = uint8_t(rng());
    m.global_palette = std::move(pal);
    gif::Frame f;
    f.width = uint16_t(side);
    f.height = uint16_t(side);
    f.min_code_size = 8;
    f.indices.resize(size_t(side) * side);
    for (auto& idx : f.indices) idx = uint8_t(rng());
    m.frames.push_back(std::move(f));
    m.items.push_back({true, 0, {}});
    return m;
}

std::vector<BenchRow> run_bench(const std::vector<uint32_t>& sides,
                                const chaos::KeyMaterial& key, int repeats) {
    std::vector<BenchRow> rows;
    for (uint32_t side : sides) {
        auto jm = synthetic_jpeg(side, side * 2 + 1);
        uint64_t jbytes = 0;
        for (const auto& c : jm.components) jbytes += c.blocks.size() * 64 * 2;
        jpeg::JpegModel jout;
        double jt = best_of(repeats, [&] { jout = cipher::encrypt_jpeg(jm, key); });
        rows.push_back({"jpeg", side, jbytes, jt});

        auto gm = synthetic_gif(side, side * 2 + 2);
        gif::GifModel gout;
        double gt = best_of(repeats, [&] { gout = cipher::encrypt_gif(gm, key); });
        rows.push_back({"gif", side, uint64_t(side) * side, gt});
    }
    return rows;
}

std::string format_table(const std::vector<BenchRow>& rows) {
    std::string out = "format  size       payload_bytes  seconds     MB/s\n";
    char line[128];
    for (const auto& r : rows) {
        std::snprintf(line, sizeof line, "%-7s %4ux%-5u %13llu  %9.4f  %8.2f\n",
                      r.format.c_str(), r.side, r.side,
                      static_cast<unsigned long long>(r.payload_bytes), r.seconds,
                      r.throughput() / 1e6);
        out += line;
    }
    return out;
}

} // namespace bakercrypt::bench
