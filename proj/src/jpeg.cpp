#include "bakercrypt/jpeg.hpp"

#include <cstring>

namespace bakercrypt::jpeg {

const std::array<uint8_t, 64> kZigzagToNatural = {
    0,  1,  8,  16, 9,  2,  3,  10, 17, 24, 32, 25, 18, 11, 4,  5,
    12, 19, 26, 33, 40, 48, 41, 34, 27, 20, 13, 6,  7,  14, 21, 28,
    35, 42, 49, 56, 57, 50, 43, 36, 29, 22, 15, 23, 30, 37, 44, 51,
    58, 59, 52, 45, 38, 31, 39, 46, 53, 60, 61, 54, 47, 55, 62, 63,
};

const std::array<uint8_t, 64> kNaturalToZigzag = [] {
    std::array<uint8_t, 64> inv{};
    for (uint8_t i = 0; i < 64; ++i) inv[kZigzagToNatural[i]] = i;
    return inv;
}();

namespace {

constexpr uint8_t kSOI = 0xD8, kEOI = 0xD9, kSOS = 0xDA, kDQT = 0xDB, kDHT = 0xC4,
                  kDRI = 0xDD, kCOM = 0xFE, kSOF0 = 0xC0;

[[noreturn]] void corrupt(const char* why) { raise(Errc::corrupt_stream, why); }

// ---- marker-level reading ----

class ByteReader {
public:
    explicit ByteReader(const std::vector<uint8_t>& bytes) : data_(bytes) {}

    uint8_t u8() {
        if (pos_ >= data_.size()) corrupt("unexpected end of file");
        return data_[pos_++];
    }
    uint16_t u16() {
        uint16_t hi = u8();
        return static_cast<uint16_t>(hi << 8 | u8());
    }
    size_t pos() const { return pos_; }
    size_t size() const { return data_.size(); }
    const uint8_t* at(size_t p) const { return data_.data() + p; }
    void seek(size_t p) { pos_ = p; }

    // next marker byte, skipping 0xFF fill bytes
    uint8_t marker() {
        uint8_t b = u8();
        if (b != 0xFF) corrupt("expected a marker");
        do {
            b = u8();
        } while (b == 0xFF);
        if (b == 0x00) corrupt("expected a marker, found stuffed byte");
        return b;
    }

private:
    const std::vector<uint8_t>& data_;
    size_t pos_ = 0;
};

// ---- Huffman tables ----

struct HuffDecode {
    bool present = false;
    std::array<int32_t, 17> mincode{};
    std::array<int32_t, 17> maxcode{}; // -1 where no codes of that length
    std::array<int32_t, 17> valptr{};
    std::vector<uint8_t> values;
};

void build_decode_table(HuffDecode& t, const uint8_t* counts, const uint8_t* vals,
                        uint32_t nvals) {
    t.present = true;
    t.values.assign(vals, vals + nvals);
    int32_t code = 0;
    uint32_t k = 0;
    for (int l = 1; l <= 16; ++l) {
        uint8_t c = counts[l - 1];
        if (c == 0) {
            t.maxcode[l] = -1;
            code <<= 1;
            continue;
        }
        t.valptr[l] = static_cast<int32_t>(k);
        t.mincode[l] = code;
        code += c;
        k += c;
        t.maxcode[l] = code - 1;
        code <<= 1;
    }
}

// ---- entropy-coded segment reading ----

class BitReader {
public:
    BitReader(const std::vector<uint8_t>& data, size_t pos) : data_(data), pos_(pos) {}

    int bit() {
        if (cnt_ == 0) fill();
        --cnt_;
        return (buf_ >> cnt_) & 1;
    }

    int32_t bits(int n) {
        int32_t v = 0;
        for (int i = 0; i < n; ++i) v = v << 1 | bit();
        return v;
    }

    // discards partial bits and consumes the expected restart marker
    void restart(int phase) {
        cnt_ = 0;
        if (pos_ + 1 >= data_.size()) corrupt("missing restart marker");
        if (data_[pos_] != 0xFF || data_[pos_ + 1] != (0xD0 | phase))
            corrupt("restart marker out of sequence");
        pos_ += 2;
    }

    // byte position after discarding partial bits
    size_t finish() {
        cnt_ = 0;
        return pos_;
    }

private:
    void fill() {
        if (pos_ >= data_.size()) corrupt("entropy data truncated");
        uint8_t b = data_[pos_++];
        if (b == 0xFF) {
            if (pos_ >= data_.size()) corrupt("entropy data truncated");
            uint8_t next = data_[pos_];
            if (next != 0x00) corrupt("marker inside entropy-coded data");
            ++pos_; // stuffed zero
        }
        buf_ = b;
        cnt_ = 8;
    }

    const std::vector<uint8_t>& data_;
    size_t pos_;
    uint8_t buf_ = 0;
    int cnt_ = 0;
};

uint8_t huff_decode(BitReader& in, const HuffDecode& t) {
    int32_t code = in.bit();
    int l = 1;
    while (code > t.maxcode[l]) {
        if (++l > 16) corrupt("invalid Huffman code");
        code = code << 1 | in.bit();
    }
    return t.values[static_cast<size_t>(t.valptr[l] + code - t.mincode[l])];
}

int32_t extend(int32_t v, int s) { return v < (1 << (s - 1)) ? v - (1 << s) + 1 : v; }

// ---- optimal Huffman construction (two-pass, K.2 style) ----

struct HuffSpec {
    std::array<uint8_t, 17> bits{}; // bits[l] = number of codes of length l
    std::vector<uint8_t> vals;
};

HuffSpec build_optimal(std::array<uint32_t, 257> freq) {
    std::array<int, 257> codesize{};
    std::array<int, 257> others;
    others.fill(-1);
    freq[256] = 1; // reserved symbol keeps the all-ones code unused

    for (;;) {
        int c1 = -1, c2 = -1;
        uint32_t v = UINT32_MAX;
        for (int i = 0; i <= 256; ++i)
            if (freq[i] && freq[i] <= v) {
                v = freq[i];
                c1 = i;
            }
        v = UINT32_MAX;
        for (int i = 0; i <= 256; ++i)
            if (freq[i] && freq[i] <= v && i != c1) {
                v = freq[i];
                c2 = i;
            }
        if (c2 < 0) break;

        freq[c1] += freq[c2];
        freq[c2] = 0;
        for (++codesize[c1]; others[c1] >= 0; ++codesize[c1]) c1 = others[c1];
        others[c1] = c2;
        for (++codesize[c2]; others[c2] >= 0; ++codesize[c2]) c2 = others[c2];
    }

    std::array<int, 33> counts{};
    for (int i = 0; i <= 256; ++i)
        if (codesize[i]) ++counts[codesize[i]];

    // fold code lengths beyond 16 back into the tree (K.2 Adjust_BITS)
    for (int i = 32; i > 16; --i) {
        while (counts[i] > 0) {
            int j = i - 2;
            while (counts[j] == 0) --j;
            counts[i] -= 2;
            ++counts[i - 1];
            counts[j + 1] += 2;
            --counts[j];
        }
    }
    int i = 16;
    while (counts[i] == 0) --i;
    --counts[i]; // drop the reserved symbol's slot

    HuffSpec spec;
    for (int l = 1; l <= 16; ++l) spec.bits[l] = static_cast<uint8_t>(counts[l]);
    for (int l = 1; l <= 32; ++l)
        for (int s = 0; s < 256; ++s)
            if (codesize[s] == l) spec.vals.push_back(static_cast<uint8_t>(s));
    return spec;
}

struct HuffEncode {
    std::array<uint16_t, 256> code{};
    std::array<uint8_t, 256> size{}; // 0 = symbol absent
};

HuffEncode derive_codes(const HuffSpec& spec) {
    HuffEncode enc;
    uint16_t code = 0;
    size_t k = 0;
    for (int l = 1; l <= 16; ++l) {
        for (int c = 0; c < spec.bits[l]; ++c) {
            uint8_t sym = spec.vals[k++];
            enc.code[sym] = code++;
            enc.size[sym] = static_cast<uint8_t>(l);
        }
        code = static_cast<uint16_t>(code << 1);
    }
    return enc;
}

// ---- bit-level writing with byte stuffing ----

class BitWriter {
public:
    explicit BitWriter(std::vector<uint8_t>& out) : out_(out) {}

    void put(uint32_t v, int n) {
        buf_ = buf_ << n | (v & ((1u << n) - 1));
        cnt_ += n;
        while (cnt_ >= 8) {
            emit(static_cast<uint8_t>(buf_ >> (cnt_ - 8)));
            cnt_ -= 8;
        }
    }

    void flush() {
        if (cnt_ > 0) {
            uint8_t pad = static_cast<uint8_t>((buf_ << (8 - cnt_)) | ((1u << (8 - cnt_)) - 1));
            emit(pad);
            cnt_ = 0;
        }
        buf_ = 0;
    }

private:
    void emit(uint8_t b) {
        out_.push_back(b);
        if (b == 0xFF) out_.push_back(0x00); // stuffing
    }

    std::vector<uint8_t>& out_;
    uint32_t buf_ = 0;
    int cnt_ = 0;
};

int category(int32_t v) {
    uint32_t a = static_cast<uint32_t>(v < 0 ? -v : v);
    int s = 0;
    while (a) {
        a >>= 1;
        ++s;
    }
    return s;
}

void push_u16(std::vector<uint8_t>& out, uint16_t v) {
    out.push_back(static_cast<uint8_t>(v >> 8));
    out.push_back(static_cast<uint8_t>(v));
}

} // namespace

JpegModel parse_jpeg(const std::vector<uint8_t>& bytes) {
    ByteReader in(bytes);
    if (in.u8() != 0xFF || in.u8() != kSOI) corrupt("missing SOI marker");

    JpegModel model;
    std::array<HuffDecode, 4> dc_tables, ac_tables;
    uint32_t restart_interval = 0;
    bool have_sof = false;

    uint8_t mk;
    for (;;) {
        mk = in.marker();
        if (mk == kSOS) break;
        if (mk == kEOI) corrupt("EOI before any scan");
        if (mk >= 0xD0 && mk <= 0xD7) corrupt("restart marker outside a scan");
        if (mk == 0x01) continue; // TEM, standalone

        size_t seg_start = in.pos() - 2; // include FF xx
        uint16_t len = in.u16();
        if (len < 2) corrupt("segment length too small");
        size_t seg_end = seg_start + 2 + len;
        if (seg_end > in.size()) corrupt("segment overruns the file");

        switch (mk) {
        case kSOF0: {
            if (have_sof) corrupt("multiple frame headers");
            have_sof = true;
            uint8_t precision = in.u8();
            if (precision != 8) raise(Errc::unsupported_jpeg, "only 8-bit precision supported");
            model.height = in.u16();
            model.width = in.u16();
            uint8_t ncomp = in.u8();
            if (ncomp != 3)
                raise(Errc::unsupported_jpeg, "only 3-component (YCbCr) images supported");
            if (model.width == 0 || model.height == 0) corrupt("zero image dimension");
            for (int i = 0; i < 3; ++i) {
                JpegComponent comp;
                comp.id = in.u8();
                uint8_t hv = in.u8();
                comp.h = hv >> 4;
                comp.v = hv & 0x0F;
                if (comp.h < 1 || comp.h > 4 || comp.v < 1 || comp.v > 4)
                    corrupt("sampling factor out of range");
                comp.quant_id = in.u8();
                model.components.push_back(comp);
                model.hmax = std::max(model.hmax, comp.h);
                model.vmax = std::max(model.vmax, comp.v);
            }
            model.mcu_cols = (model.width + 8u * model.hmax - 1) / (8u * model.hmax);
            model.mcu_rows = (model.height + 8u * model.vmax - 1) / (8u * model.vmax);
            for (auto& comp : model.components) {
                comp.cols = comp.h * model.mcu_cols;
                comp.rows = comp.v * model.mcu_rows;
                comp.blocks.assign(size_t(comp.rows) * comp.cols, std::array<int16_t, 64>{});
            }
            break;
        }
        case 0xC1:
        case 0xC2:
        case 0xC3:
        case 0xC5:
        case 0xC6:
        case 0xC7:
        case 0xC8:
        case 0xC9:
        case 0xCA:
        case 0xCB:
        case 0xCC:
        case 0xCD:
        case 0xCE:
        case 0xCF:
            raise(Errc::unsupported_jpeg, "only baseline sequential Huffman JPEG supported");
        case kDHT: {
            size_t remaining = len - 2;
            while (remaining > 0) {
                if (remaining < 17) corrupt("truncated Huffman table");
                uint8_t tc_th = in.u8();
                uint8_t tclass = tc_th >> 4, id = tc_th & 0x0F;
                if (tclass > 1 || id > 3) corrupt("bad Huffman table class or id");
                uint8_t counts[16];
                uint32_t nvals = 0;
                for (auto& c : counts) {
                    c = in.u8();
                    nvals += c;
                }
                if (remaining < 17 + nvals || nvals > 256) corrupt("truncated Huffman table");
                std::vector<uint8_t> vals(nvals);
                for (auto& v : vals) v = in.u8();
                build_decode_table(tclass == 0 ? dc_tables[id] : ac_tables[id], counts,
                                   vals.data(), nvals);
                remaining -= 17 + nvals;
            }
            break;
        }
        case kDRI:
            if (len != 4) corrupt("bad DRI length");
            restart_interval = in.u16();
            break;
        case kDQT:
        case kCOM:
        default:
            if (mk == kDQT || mk == kCOM || (mk >= 0xE0 && mk <= 0xEF)) {
                model.segments.emplace_back(in.at(seg_start), in.at(seg_end));
            } else {
                corrupt("unexpected marker before scan");
            }
            break;
        }
        in.seek(seg_end);
    }

    if (!have_sof) corrupt("scan before frame header");

    // scan header
    uint16_t slen = in.u16();
    uint8_t ns = in.u8();
    if (ns != 3) raise(Errc::unsupported_jpeg, "only single interleaved 3-component scans");
    if (slen != 6 + 2u * ns) corrupt("bad SOS length");
    struct ScanComp {
        const HuffDecode* dc;
        const HuffDecode* ac;
    };
    std::array<ScanComp, 3> scan{};
    for (int i = 0; i < 3; ++i) {
        uint8_t id = in.u8();
        if (id != model.components[i].id)
            raise(Errc::unsupported_jpeg, "scan component order differs from frame order");
        uint8_t tsel = in.u8();
        uint8_t dcid = tsel >> 4, acid = tsel & 0x0F;
        if (dcid > 3 || acid > 3 || !dc_tables[dcid].present || !ac_tables[acid].present)
            corrupt("scan references a missing Huffman table");
        scan[i] = {&dc_tables[dcid], &ac_tables[acid]};
    }
    in.u8(); // Ss
    in.u8(); // Se
    in.u8(); // Ah/Al

    // entropy-coded data
    BitReader bits(bytes, in.pos());
    std::array<int32_t, 3> pred{};
    uint64_t mcu_count = uint64_t(model.mcu_rows) * model.mcu_cols;
    int rst_phase = 0;
    for (uint64_t mcu = 0; mcu < mcu_count; ++mcu) {
        if (restart_interval && mcu > 0 && mcu % restart_interval == 0) {
            bits.restart(rst_phase);
            rst_phase = (rst_phase + 1) & 7;
            pred.fill(0);
        }
        uint32_t r = static_cast<uint32_t>(mcu / model.mcu_cols);
        uint32_t c = static_cast<uint32_t>(mcu % model.mcu_cols);
        for (int ci = 0; ci < 3; ++ci) {
            JpegComponent& comp = model.components[ci];
            for (uint8_t v = 0; v < comp.v; ++v) {
                for (uint8_t h = 0; h < comp.h; ++h) {
                    auto& block = comp.blocks[size_t(r * comp.v + v) * comp.cols +
                                              (c * comp.h + h)];
                    int s = huff_decode(bits, *scan[ci].dc);
                    if (s > 15) corrupt("DC category out of range");
                    int32_t diff = s ? extend(bits.bits(s), s) : 0;
                    pred[ci] += diff;
                    if (pred[ci] < INT16_MIN || pred[ci] > INT16_MAX)
                        corrupt("DC value exceeds 16 bits");
                    block[0] = static_cast<int16_t>(pred[ci]);
                    int k = 1;
                    while (k < 64) {
                        uint8_t sym = huff_decode(bits, *scan[ci].ac);
                        int run = sym >> 4, size = sym & 0x0F;
                        if (size == 0) {
                            if (run != 15) break; // EOB
                            k += 16;
                            continue;
                        }
                        k += run;
                        if (k > 63) corrupt("AC run exceeds the block");
                        block[k++] = static_cast<int16_t>(extend(bits.bits(size), size));
                    }
                }
            }
        }
    }

    in.seek(bits.finish());
    if (in.marker() != kEOI) corrupt("expected EOI after the scan");
    return model;
}

std::pair<uint32_t, uint32_t> component_grid_dims(const JpegModel& model, size_t index) {
    const auto& comp = model.components.at(index);
    return {comp.rows, comp.cols};
}

std::vector<uint8_t> serialize_jpeg(const JpegModel& model) {
    if (model.components.size() != 3)
        raise(Errc::unsupported_jpeg, "model must hold exactly three components");

    // one statistics pass, one emission pass
    std::array<std::array<uint32_t, 257>, 2> dc_freq{}, ac_freq{};
    std::array<HuffEncode, 2> dc_enc, ac_enc;

    auto walk = [&](auto&& dc_sym, auto&& ac_sym) {
        std::array<int32_t, 3> pred{};
        for (uint32_t r = 0; r < model.mcu_rows; ++r) {
            for (uint32_t c = 0; c < model.mcu_cols; ++c) {
                for (int ci = 0; ci < 3; ++ci) {
                    const JpegComponent& comp = model.components[ci];
                    int tbl = ci == 0 ? 0 : 1;
                    for (uint8_t v = 0; v < comp.v; ++v) {
                        for (uint8_t h = 0; h < comp.h; ++h) {
                            const auto& block = comp.blocks[size_t(r * comp.v + v) * comp.cols +
                                                            (c * comp.h + h)];
                            int32_t diff = block[0] - pred[ci];
                            pred[ci] = block[0];
                            int s = category(diff);
                            if (s > 11)
                                raise(Errc::encoding_overflow,
                                      "DC difference beyond baseline category 11");
                            dc_sym(tbl, s, diff);
                            int run = 0;
                            for (int k = 1; k < 64; ++k) {
                                int32_t a = block[k];
                                if (a == 0) {
                                    ++run;
                                    continue;
                                }
                                while (run > 15) {
                                    ac_sym(tbl, 0xF0, 0, 0);
                                    run -= 16;
                                }
                                int as = category(a);
                                if (as > 10)
                                    raise(Errc::encoding_overflow,
                                          "AC coefficient beyond baseline category 10");
                                ac_sym(tbl, (run << 4) | as, a, as);
                                run = 0;
                            }
                            if (run > 0) ac_sym(tbl, 0x00, 0, 0); // EOB
                        }
                    }
                }
            }
        }
    };

    walk([&](int tbl, int s, int32_t) { ++dc_freq[tbl][s]; },
         [&](int tbl, int sym, int32_t, int) { ++ac_freq[tbl][sym]; });

    std::array<HuffSpec, 2> dc_spec, ac_spec;
    for (int t = 0; t < 2; ++t) {
        dc_spec[t] = build_optimal(dc_freq[t]);
        ac_spec[t] = build_optimal(ac_freq[t]);
        dc_enc[t] = derive_codes(dc_spec[t]);
        ac_enc[t] = derive_codes(ac_spec[t]);
    }

    std::vector<uint8_t> out;
    out.push_back(0xFF);
    out.push_back(kSOI);
    for (const auto& seg : model.segments) out.insert(out.end(), seg.begin(), seg.end());

    // frame header
    out.push_back(0xFF);
    out.push_back(kSOF0);
    push_u16(out, 8 + 3 * 3);
    out.push_back(8);
    push_u16(out, model.height);
    push_u16(out, model.width);
    out.push_back(3);
    for (const auto& comp : model.components) {
        out.push_back(comp.id);
        out.push_back(static_cast<uint8_t>(comp.h << 4 | comp.v));
        out.push_back(comp.quant_id);
    }

    // Huffman tables, all four in one segment
    {
        uint16_t len = 2;
        for (int t = 0; t < 2; ++t)
            len += static_cast<uint16_t>(2 * 17 + dc_spec[t].vals.size() + ac_spec[t].vals.size());
        out.push_back(0xFF);
        out.push_back(kDHT);
        push_u16(out, len);
        for (int t = 0; t < 2; ++t) {
            auto emit_table = [&](uint8_t tclass, const HuffSpec& spec) {
                out.push_back(static_cast<uint8_t>(tclass << 4 | t));
                for (int l = 1; l <= 16; ++l) out.push_back(spec.bits[l]);
                out.insert(out.end(), spec.vals.begin(), spec.vals.end());
            };
            emit_table(0, dc_spec[t]);
            emit_table(1, ac_spec[t]);
        }
    }

    // scan header
    out.push_back(0xFF);
    out.push_back(kSOS);
    push_u16(out, 6 + 2 * 3);
    out.push_back(3);
    for (int ci = 0; ci < 3; ++ci) {
        out.push_back(model.components[ci].id);
        uint8_t t = ci == 0 ? 0 : 1;
        out.push_back(static_cast<uint8_t>(t << 4 | t));
    }
    out.push_back(0);    // Ss
    out.push_back(63);   // Se
    out.push_back(0);    // Ah/Al

    BitWriter bw(out);
    walk(
        [&](int tbl, int s, int32_t diff) {
            const HuffEncode& e = dc_enc[tbl];
            bw.put(e.code[s], e.size[s]);
            if (s) bw.put(static_cast<uint32_t>(diff >= 0 ? diff : diff + (1 << s) - 1), s);
        },
        [&](int tbl, int sym, int32_t a, int as) {
            const HuffEncode& e = ac_enc[tbl];
            bw.put(e.code[sym], e.size[sym]);
            if (as) bw.put(static_cast<uint32_t>(a >= 0 ? a : a + (1 << as) - 1), as);
        });
    bw.flush();

    out.push_back(0xFF);
    out.push_back(kEOI);
    return out;
}

} // namespace bakercrypt::jpeg
