#include "bakercrypt/analysis.hpp"

#include <json.hpp>

#include <utility>

#include "bakercrypt/cipher.hpp"
#include "bakercrypt/error.hpp"
#include "bakercrypt/io.hpp"
#include "bakercrypt/metrics.hpp"

namespace bakercrypt::analysis {
namespace {

using metrics::Direction;

const char* kJpegChannels[3] = {"y", "cb", "cr"};
const char* kGifChannels[3] = {"r", "g", "b"};

ChannelCorrelation grid_correlations(std::string channel, const std::vector<int32_t>& plane,
                                     uint64_t rows, uint64_t cols) {
    return {std::move(channel),
            metrics::adjacent_correlation(plane, rows, cols, Direction::horizontal),
            metrics::adjacent_correlation(plane, rows, cols, Direction::vertical),
            metrics::adjacent_correlation(plane, rows, cols, Direction::diagonal)};
}

// the 7-bit residues the diffusion layer acts on, in block storage order
std::vector<int32_t> low7_symbols(const jpeg::JpegComponent& c) {
    std::vector<int32_t> out;
    out.reserve(c.blocks.size() * 64);
    for (const auto& blk : c.blocks)
        for (int z = 0; z < 64; ++z)
            out.push_back(int32_t(uint16_t(blk[z]) & 0x7Fu));
    return out;
}

std::vector<uint32_t> to_symbols(const std::vector<int32_t>& v) {
    return std::vector<uint32_t>(v.begin(), v.end());
}

void run_nist(MetricsReport& rep, const BitString& payload) {
    rep.payload_bit_count = payload.nbits;
    try {
        auto sub = nist::nist_subset(payload);
        rep.nist_tests = std::move(sub.tests);
        rep.nist_advisory = sub.advisory;
        rep.nist_all_pass = sub.all_pass;
    } catch (const Error& e) {
        if (e.code() != Errc::insufficient_bits) throw;
        rep.nist_advisory = true;
    }
}

} // namespace

std::vector<int32_t> jpeg_coefficient_plane(const jpeg::JpegModel& model, size_t comp,
                                            uint64_t& rows, uint64_t& cols) {
    const auto& c = model.components.at(comp);
    rows = uint64_t(c.rows) * 8;
    cols = uint64_t(c.cols) * 8;
    std::vector<int32_t> plane(rows * cols);
    for (uint32_t br = 0; br < c.rows; ++br)
        for (uint32_t bc = 0; bc < c.cols; ++bc) {
            const auto& blk = c.blocks[size_t(br) * c.cols + bc];
            for (int n = 0; n < 64; ++n)
                plane[(size_t(br) * 8 + size_t(n) / 8) * cols + size_t(bc) * 8 + size_t(n) % 8] =
                    blk[jpeg::kNaturalToZigzag[n]];
        }
    return plane;
}

std::vector<int32_t> gif_channel_plane(const gif::GifModel& model, size_t frame, int channel) {
    const auto& f = model.frames.at(frame);
    const auto& pal = model.active_palette(frame);
    std::vector<int32_t> plane(f.indices.size());
    for (size_t i = 0; i < f.indices.size(); ++i)
        plane[i] = pal[f.indices[i]][size_t(channel)];
    return plane;
}

MetricsReport analyze(const jpeg::JpegModel& subject, const jpeg::JpegModel* reference) {
    MetricsReport rep;
    rep.format = "jpeg";
    std::vector<uint32_t> pooled;
    for (size_t ci = 0; ci < subject.components.size(); ++ci) {
        uint64_t rows = 0, cols = 0;
        auto plane = jpeg_coefficient_plane(subject, ci, rows, cols);
        rep.correlations.push_back(grid_correlations(kJpegChannels[ci], plane, rows, cols));
        auto sym = to_symbols(low7_symbols(subject.components[ci]));
        rep.entropies.push_back({kJpegChannels[ci], metrics::entropy_bits(sym, 128)});
        pooled.insert(pooled.end(), sym.begin(), sym.end());
    }
    rep.entropies.push_back({"total", metrics::entropy_bits(pooled, 128)});

    if (reference) {
        if (reference->components.size() != subject.components.size())
            raise(Errc::shape_mismatch, "reference component count differs");
        for (size_t ci = 0; ci < subject.components.size(); ++ci) {
            const auto& a = subject.components[ci];
            const auto& b = reference->components[ci];
            if (a.rows != b.rows || a.cols != b.cols)
                raise(Errc::shape_mismatch, "reference component grid differs");
            auto d = metrics::npcr_uaci(low7_symbols(a), low7_symbols(b), 127);
            rep.differences.push_back({kJpegChannels[ci], d.npcr, d.uaci});
        }
        rep.avalanche_pct = metrics::avalanche_percent(cipher::jpeg_payload_bits(subject),
                                                       cipher::jpeg_payload_bits(*reference));
    }
    run_nist(rep, cipher::jpeg_payload_bits(subject));
    return rep;
}

MetricsReport analyze(const gif::GifModel& subject, const gif::GifModel* reference) {
    MetricsReport rep;
    rep.format = "gif";
    if (!subject.frames.empty()) {
        const auto& f0 = subject.frames[0];
        for (int ch = 0; ch < 3; ++ch)
            rep.correlations.push_back(grid_correlations(
                kGifChannels[ch], gif_channel_plane(subject, 0, ch), f0.height, f0.width));
        std::vector<uint32_t> chan[3];
        std::vector<uint32_t> pooled;
        for (size_t fi = 0; fi < subject.frames.size(); ++fi)
            for (int ch = 0; ch < 3; ++ch)
                for (int32_t v : gif_channel_plane(subject, fi, ch)) {
                    chan[ch].push_back(uint32_t(v));
                    pooled.push_back(uint32_t(v));
                }
        for (int ch = 0; ch < 3; ++ch)
            rep.entropies.push_back({kGifChannels[ch], metrics::entropy_bits(chan[ch], 256)});
        rep.entropies.push_back({"total", metrics::entropy_bits(pooled, 256)});
    }

    if (reference) {
        if (reference->frames.size() != subject.frames.size())
            raise(Errc::shape_mismatch, "reference frame count differs");
        for (size_t fi = 0; fi < subject.frames.size(); ++fi) {
            const auto& a = subject.frames[fi];
            const auto& b = reference->frames[fi];
            if (a.width != b.width || a.height != b.height)
                raise(Errc::shape_mismatch, "reference frame dimensions differ");
            const auto pa = uint32_t(subject.active_palette(fi).size());
            if (pa != uint32_t(reference->active_palette(fi).size()))
                raise(Errc::shape_mismatch, "reference palette size differs");
            auto d = metrics::npcr_uaci(std::vector<int32_t>(a.indices.begin(), a.indices.end()),
                                        std::vector<int32_t>(b.indices.begin(), b.indices.end()),
                                        pa - 1);
            rep.differences.push_back({"frame" + std::to_string(fi), d.npcr, d.uaci});
        }
        rep.avalanche_pct = metrics::avalanche_percent(cipher::gif_payload_bits(subject),
                                                       cipher::gif_payload_bits(*reference));
    }
    run_nist(rep, cipher::gif_payload_bits(subject));
    return rep;
}

std::string to_json(const MetricsReport& rep) {
    using json = nlohmann::ordered_json;
    auto opt = [](const std::optional<double>& v) { return v ? json(*v) : json(nullptr); };

    json j;
    j["format"] = rep.format;
    j["payload_bits"] = rep.payload_bit_count;

    json corr = json::array();
    for (const auto& c : rep.correlations)
        corr.push_back({{"channel", c.channel},
                        {"horizontal", opt(c.horizontal)},
                        {"vertical", opt(c.vertical)},
                        {"diagonal", opt(c.diagonal)}});
    j["correlations"] = std::move(corr);

    json ent = json::array();
    for (const auto& e : rep.entropies)
        ent.push_back({{"channel", e.channel}, {"bits", e.bits}});
    j["entropies"] = std::move(ent);

    json diff = json::array();
    for (const auto& d : rep.differences)
        diff.push_back({{"channel", d.channel}, {"npcr", d.npcr}, {"uaci", d.uaci}});
    j["differences"] = std::move(diff);

    j["avalanche_pct"] = opt(rep.avalanche_pct);

    json tests = json::array();
    for (const auto& t : rep.nist_tests)
        tests.push_back({{"name", t.name}, {"p_value", t.p_value}, {"pass", t.pass}});
    j["nist"] = {{"advisory", rep.nist_advisory},
                 {"all_pass", rep.nist_all_pass},
                 {"tests", std::move(tests)}};

    return j.dump(2) + "\n";
}

void export_bitstream(const BitString& bits, const std::string& path) {
    io::write_file_atomic(path, bits.bytes);
}

BitString import_bitstream(const std::string& path) {
    BitString b;
    b.bytes = io::read_file(path);
    b.nbits = uint64_t(b.bytes.size()) * 8;
    return b;
}

} // namespace bakercrypt::analysis
