#include "bakercrypt/gif.hpp"

#include <cstring>

namespace bakercrypt::gif {

namespace {

[[noreturn]] void corrupt(const char* why) { raise(Errc::corrupt_gif, why); }

class ByteReader {
public:
    explicit ByteReader(const std::vector<uint8_t>& bytes) : data_(bytes) {}

    uint8_t u8() {
        if (pos_ >= data_.size()) corrupt("unexpected end of file");
        return data_[pos_++];
    }
    uint16_t le16() {
        uint16_t lo = u8();
        return static_cast<uint16_t>(u8() << 8 | lo);
    }
    void read(uint8_t* dst, size_t n) {
        if (pos_ + n > data_.size()) corrupt("unexpected end of file");
        std::memcpy(dst, data_.data() + pos_, n);
        pos_ += n;
    }
    size_t pos() const { return pos_; }
    const uint8_t* at(size_t p) const { return data_.data() + p; }

private:
    const std::vector<uint8_t>& data_;
    size_t pos_ = 0;
};

void push_le16(std::vector<uint8_t>& out, uint16_t v) {
    out.push_back(static_cast<uint8_t>(v));
    out.push_back(static_cast<uint8_t>(v >> 8));
}

Palette read_palette(ByteReader& in, uint32_t entries) {
    Palette pal(entries);
    for (auto& rgb : pal) in.read(rgb.data(), 3);
    return pal;
}

// size field for the packed byte: log2(len) - 1
uint8_t palette_size_bits(const Palette& pal) {
    size_t len = pal.size();
    for (uint8_t bits = 0; bits < 8; ++bits)
        if (len == (2u << bits)) return bits;
    raise(Errc::encoding_error, "palette length must be a power of two in [2, 256]");
}

// concatenated data sub-blocks until the 0 terminator
std::vector<uint8_t> read_sub_blocks(ByteReader& in) {
    std::vector<uint8_t> data;
    for (;;) {
        uint8_t n = in.u8();
        if (n == 0) break;
        size_t at = data.size();
        data.resize(at + n);
        in.read(data.data() + at, n);
    }
    return data;
}

void write_sub_blocks(std::vector<uint8_t>& out, const std::vector<uint8_t>& data) {
    size_t p = 0;
    while (p < data.size()) {
        size_t n = std::min<size_t>(255, data.size() - p);
        out.push_back(static_cast<uint8_t>(n));
        out.insert(out.end(), data.begin() + p, data.begin() + p + n);
        p += n;
    }
    out.push_back(0);
}

// interlaced storage order: every 8th row from 0, from 4, every 4th from 2,
// every 2nd from 1
std::vector<uint32_t> interlace_rows(uint32_t height) {
    std::vector<uint32_t> rows;
    rows.reserve(height);
    static constexpr uint32_t start[4] = {0, 4, 2, 1};
    static constexpr uint32_t step[4] = {8, 8, 4, 2};
    for (int pass = 0; pass < 4; ++pass)
        for (uint32_t r = start[pass]; r < height; r += step[pass]) rows.push_back(r);
    return rows;
}

class LsbBitReader {
public:
    explicit LsbBitReader(const std::vector<uint8_t>& data) : data_(data) {}

    // next `width` bits, or -1 when the stream is exhausted
    int32_t code(int width) {
        while (cnt_ < width) {
            if (pos_ >= data_.size()) return -1;
            buf_ |= uint32_t(data_[pos_++]) << cnt_;
            cnt_ += 8;
        }
        int32_t v = static_cast<int32_t>(buf_ & ((1u << width) - 1));
        buf_ >>= width;
        cnt_ -= width;
        return v;
    }

private:
    const std::vector<uint8_t>& data_;
    size_t pos_ = 0;
    uint32_t buf_ = 0;
    int cnt_ = 0;
};

class LsbBitWriter {
public:
    void put(uint32_t v, int width) {
        buf_ |= (v & ((1u << width) - 1)) << cnt_;
        cnt_ += width;
        while (cnt_ >= 8) {
            out_.push_back(static_cast<uint8_t>(buf_));
            buf_ >>= 8;
            cnt_ -= 8;
        }
    }
    std::vector<uint8_t> finish() {
        if (cnt_ > 0) out_.push_back(static_cast<uint8_t>(buf_));
        return std::move(out_);
    }

private:
    std::vector<uint8_t> out_;
    uint32_t buf_ = 0;
    int cnt_ = 0;
};

} // namespace

std::vector<uint8_t> lzw_decode(const std::vector<uint8_t>& data, uint8_t min_code_size,
                                size_t expected) {
    if (min_code_size < 2 || min_code_size > 11) corrupt("LZW minimum code size out of range");
    const int32_t clear = 1 << min_code_size;
    const int32_t eoi = clear + 1;
    const int32_t first = clear + 2;

    std::array<uint16_t, 4096> prefix{};
    std::array<uint8_t, 4096> tail{};
    std::array<uint8_t, 4096> head{};
    for (int32_t c = 0; c < clear; ++c) head[c] = tail[c] = static_cast<uint8_t>(c);

    std::vector<uint8_t> out;
    out.reserve(expected);
    LsbBitReader in(data);
    int width = min_code_size + 1;
    int32_t next = first;
    int32_t prev = -1;
    uint8_t scratch[4096];

    auto emit = [&](int32_t code) {
        size_t n = 0;
        int32_t c = code;
        while (c >= clear) {
            scratch[n++] = tail[c];
            c = prefix[c];
        }
        scratch[n++] = tail[c];
        if (out.size() + n > expected) corrupt("LZW data exceeds the image size");
        for (size_t i = n; i > 0; --i) out.push_back(scratch[i - 1]);
    };

    while (out.size() < expected) {
        int32_t code = in.code(width);
        if (code < 0) corrupt("image data truncated");
        if (code == clear) {
            width = min_code_size + 1;
            next = first;
            prev = -1;
            continue;
        }
        if (code == eoi) corrupt("early end-of-information code");
        if (prev < 0) {
            if (code >= clear) corrupt("first LZW code is not a root");
            emit(code);
            prev = code;
            continue;
        }
        if (code > next || code == eoi) corrupt("LZW code beyond the table");
        uint8_t first_char;
        if (code == next) {
            if (next >= 4096) corrupt("LZW code beyond the table");
            first_char = head[prev]; // KwKwK
        } else {
            first_char = head[code];
        }
        if (next < 4096) {
            prefix[next] = static_cast<uint16_t>(prev);
            tail[next] = first_char;
            head[next] = head[prev];
            ++next;
            if (next == (1 << width) && width < 12) ++width;
        }
        emit(code);
        prev = code;
    }

    // the stream should close with EOI, but tolerate its absence
    int32_t code = in.code(width);
    if (code >= 0 && code != eoi && code != clear) corrupt("trailing LZW data after the image");
    return out;
}

std::vector<uint8_t> lzw_encode(const std::vector<uint8_t>& indices, uint8_t min_code_size) {
    if (min_code_size < 2 || min_code_size > 11)
        raise(Errc::encoding_error, "LZW minimum code size out of range");
    const int32_t clear = 1 << min_code_size;
    const int32_t eoi = clear + 1;
    const int32_t first = clear + 2;

    // (prefix, symbol) -> code lookup, epoch-stamped so clears are O(1)
    std::vector<int32_t> child(size_t(4096) << 8, -1);
    std::vector<uint32_t> stamp(size_t(4096) << 8, 0);
    uint32_t epoch = 1;

    LsbBitWriter out;
    int width = min_code_size + 1;
    int32_t next = first;
    out.put(static_cast<uint32_t>(clear), width);

    size_t i = 0;
    while (i < indices.size()) {
        int32_t prefix = indices[i++];
        if (prefix >= clear) raise(Errc::encoding_error, "index exceeds the code alphabet");
        while (i < indices.size()) {
            uint8_t sym = indices[i];
            if (sym >= clear) raise(Errc::encoding_error, "index exceeds the code alphabet");
            size_t slot = (size_t(prefix) << 8) | sym;
            if (stamp[slot] == epoch) {
                prefix = child[slot];
                ++i;
                continue;
            }
            out.put(static_cast<uint32_t>(prefix), width);
            if (next < 4096) {
                stamp[slot] = epoch;
                child[slot] = next++;
                // the decoder lags one table entry, so the width grows one
                // code later here than its next == (1 << width) rule
                if (next > (1 << width) && width < 12) ++width;
            } else {
                out.put(static_cast<uint32_t>(clear), width);
                width = min_code_size + 1;
                next = first;
                ++epoch;
            }
            break; // the missed symbol restarts the phrase
        }
        if (i == indices.size()) {
            out.put(static_cast<uint32_t>(prefix), width);
            break;
        }
    }
    out.put(static_cast<uint32_t>(eoi), width);
    return out.finish();
}

const Palette& GifModel::active_palette(size_t frame) const {
    const Frame& f = frames.at(frame);
    if (f.local_palette) return *f.local_palette;
    if (global_palette) return *global_palette;
    raise(Errc::corrupt_gif, "frame has no palette");
}

GifModel parse_gif(const std::vector<uint8_t>& bytes) {
    ByteReader in(bytes);
    char sig[6];
    in.read(reinterpret_cast<uint8_t*>(sig), 6);
    GifModel model;
    if (std::memcmp(sig, "GIF89a", 6) == 0) {
        model.is89a = true;
    } else if (std::memcmp(sig, "GIF87a", 6) == 0) {
        model.is89a = false;
    } else {
        corrupt("not a GIF signature");
    }

    model.width = in.le16();
    model.height = in.le16();
    model.screen_packed = in.u8();
    model.background = in.u8();
    model.aspect = in.u8();
    if (model.width == 0 || model.height == 0) corrupt("zero logical screen dimension");
    if (model.screen_packed & 0x80)
        model.global_palette = read_palette(in, 2u << (model.screen_packed & 0x07));

    for (;;) {
        uint8_t b = in.u8();
        if (b == 0x3B) break; // trailer
        if (b == 0x21) {      // extension, preserved verbatim
            size_t start = in.pos() - 1;
            in.u8(); // label
            read_sub_blocks(in);
            Item item;
            item.extension.assign(in.at(start), in.at(in.pos()));
            model.items.push_back(std::move(item));
            continue;
        }
        if (b != 0x2C) corrupt("unknown block introducer");

        Frame f;
        f.left = in.le16();
        f.top = in.le16();
        f.width = in.le16();
        f.height = in.le16();
        f.packed = in.u8();
        if (f.width == 0 || f.height == 0) corrupt("zero frame dimension");
        if (uint32_t(f.left) + f.width > model.width ||
            uint32_t(f.top) + f.height > model.height)
            corrupt("frame exceeds the logical screen");
        f.interlaced = (f.packed & 0x40) != 0;
        if (f.packed & 0x80) f.local_palette = read_palette(in, 2u << (f.packed & 0x07));

        f.min_code_size = in.u8();
        std::vector<uint8_t> data = read_sub_blocks(in);
        size_t pixels = size_t(f.width) * f.height;
        f.indices = lzw_decode(data, f.min_code_size, pixels);

        if (f.interlaced) {
            std::vector<uint8_t> logical(pixels);
            auto rows = interlace_rows(f.height);
            for (uint32_t stored = 0; stored < f.height; ++stored)
                std::memcpy(logical.data() + size_t(rows[stored]) * f.width,
                            f.indices.data() + size_t(stored) * f.width, f.width);
            f.indices = std::move(logical);
        }

        size_t frame_idx = model.frames.size();
        model.frames.push_back(std::move(f));
        const Palette& pal = model.active_palette(frame_idx);
        for (uint8_t idx : model.frames.back().indices)
            if (idx >= pal.size()) corrupt("index beyond the active palette");

        Item item;
        item.is_frame = true;
        item.frame = frame_idx;
        model.items.push_back(std::move(item));
    }
    return model;
}

std::vector<uint8_t> serialize_gif(const GifModel& model) {
    std::vector<uint8_t> out;
    const char* sig = model.is89a ? "GIF89a" : "GIF87a";
    out.insert(out.end(), sig, sig + 6);
    push_le16(out, model.width);
    push_le16(out, model.height);
    uint8_t packed = static_cast<uint8_t>(model.screen_packed & 0x78);
    if (model.global_palette)
        packed |= 0x80 | palette_size_bits(*model.global_palette);
    else
        packed |= model.screen_packed & 0x07;
    out.push_back(packed);
    out.push_back(model.background);
    out.push_back(model.aspect);
    if (model.global_palette)
        for (const auto& rgb : *model.global_palette)
            out.insert(out.end(), rgb.begin(), rgb.end());

    for (const Item& item : model.items) {
        if (!item.is_frame) {
            out.insert(out.end(), item.extension.begin(), item.extension.end());
            continue;
        }
        const Frame& f = model.frames.at(item.frame);
        if (f.indices.size() != size_t(f.width) * f.height)
            raise(Errc::encoding_error, "frame index count does not match its size");
        const Palette& pal = model.active_palette(item.frame);
        for (uint8_t idx : f.indices)
            if (idx >= pal.size())
                raise(Errc::encoding_error, "index beyond the active palette");

        out.push_back(0x2C);
        push_le16(out, f.left);
        push_le16(out, f.top);
        push_le16(out, f.width);
        push_le16(out, f.height);
        uint8_t fp = static_cast<uint8_t>(f.packed & 0x38);
        if (f.interlaced) fp |= 0x40;
        if (f.local_palette) fp |= 0x80 | palette_size_bits(*f.local_palette);
        out.push_back(fp);
        if (f.local_palette)
            for (const auto& rgb : *f.local_palette) out.insert(out.end(), rgb.begin(), rgb.end());

        const std::vector<uint8_t>* rowsrc = &f.indices;
        std::vector<uint8_t> stored;
        if (f.interlaced) {
            stored.resize(f.indices.size());
            auto rows = interlace_rows(f.height);
            for (uint32_t s = 0; s < f.height; ++s)
                std::memcpy(stored.data() + size_t(s) * f.width,
                            f.indices.data() + size_t(rows[s]) * f.width, f.width);
            rowsrc = &stored;
        }
        out.push_back(f.min_code_size);
        write_sub_blocks(out, lzw_encode(*rowsrc, f.min_code_size));
    }
    out.push_back(0x3B);
    return out;
}

} // namespace bakercrypt::gif
