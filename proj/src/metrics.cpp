#include "bakercrypt/metrics.hpp"

#include <algorithm>
#include <bit>
#include <cmath>

#include "bakercrypt/error.hpp"

namespace bakercrypt::metrics {

std::optional<double> adjacent_correlation(const std::vector<int32_t>& values,
                                           uint64_t rows, uint64_t cols,
                                           Direction direction) {
    if (rows * cols != values.size())
        raise(Errc::shape_mismatch, "correlation grid does not match rows*cols");
    uint64_t dr = 0, dc = 0;
    switch (direction) {
        case Direction::horizontal: dc = 1; break;
        case Direction::vertical: dr = 1; break;
        case Direction::diagonal: dr = 1, dc = 1; break;
    }
    if (rows <= dr || cols <= dc) return std::nullopt;
    const uint64_t prows = rows - dr, pcols = cols - dc;
    const double n = double(prows) * double(pcols);

    double sx = 0.0, sy = 0.0;
    for (uint64_t r = 0; r < prows; ++r)
        for (uint64_t c = 0; c < pcols; ++c) {
            sx += values[r * cols + c];
            sy += values[(r + dr) * cols + (c + dc)];
        }
    const double mx = sx / n, my = sy / n;

    double sxx = 0.0, syy = 0.0, sxy = 0.0;
    for (uint64_t r = 0; r < prows; ++r)
        for (uint64_t c = 0; c < pcols; ++c) {
            const double x = values[r * cols + c] - mx;
            const double y = values[(r + dr) * cols + (c + dc)] - my;
            sxx += x * x;
            syy += y * y;
            sxy += x * y;
        }
    if (sxx == 0.0 || syy == 0.0) return std::nullopt;
    return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

DiffStats npcr_uaci(const std::vector<int32_t>& a, const std::vector<int32_t>& b,
                    uint32_t depth_max) {
    if (a.size() != b.size())
        raise(Errc::shape_mismatch, "npcr/uaci inputs differ in shape");
    if (depth_max == 0)
        raise(Errc::shape_mismatch, "npcr/uaci depth must be positive");
    if (a.empty()) return {};
    uint64_t differing = 0;
    double absdiff = 0.0;
    for (size_t i = 0; i < a.size(); ++i) {
        if (a[i] != b[i]) ++differing;
        absdiff += std::abs(double(a[i]) - double(b[i]));
    }
    const double n = double(a.size());
    return {double(differing) / n, absdiff / (n * double(depth_max))};
}

double avalanche_percent(const BitString& a, const BitString& b) {
    if (a.nbits != b.nbits)
        raise(Errc::length_mismatch, "avalanche inputs differ in length");
    if (a.nbits == 0) return 0.0;
    uint64_t distance = 0;
    for (size_t i = 0; i < a.bytes.size(); ++i)
        distance += std::popcount(static_cast<uint32_t>(a.bytes[i] ^ b.bytes[i]));
    return 100.0 * double(distance) / double(a.nbits);
}

double entropy_bits(const std::vector<uint32_t>& symbols, uint32_t alphabet_size) {
    if (symbols.empty()) return 0.0;
    size_t width = alphabet_size;
    for (uint32_t s : symbols) width = std::max(width, size_t(s) + 1);
    std::vector<uint64_t> hist(width, 0);
    for (uint32_t s : symbols) ++hist[s];
    const double n = double(symbols.size());
    double h = 0.0;
    for (uint64_t c : hist)
        if (c) {
            const double p = double(c) / n;
            h -= p * std::log2(p);
        }
    return h;
}

} // namespace bakercrypt::metrics
