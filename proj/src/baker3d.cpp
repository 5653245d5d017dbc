#include "bakercrypt/baker3d.hpp"

#include <numeric>

namespace bakercrypt::baker3d {

CubeDims cube_dims(uint32_t m, uint32_t n) {
    if (m % 4 != 0) return {m, n, 1};
    uint32_t w = m / 4;
    if (n % 8 == 0) return {w, n / 8, 32};
    if (n % 4 == 0) return {w, n / 4, 16};
    if (n % 2 == 0) return {w, n / 2, 8};
    return {w, n, 4};
}

std::vector<uint32_t> partition_axis(uint32_t total, uint32_t count,
                                     const std::vector<double>& raw) {
    if (count >= total)
        raise(Errc::infeasible_partition, "piece count must be smaller than the axis extent");
    if (raw.size() + 1 < count)
        raise(Errc::keystream_exhausted, "partition_axis needs count-1 raw draws");

    std::vector<uint32_t> pieces;
    pieces.reserve(count);
    uint32_t remaining = total;
    for (uint32_t i = 1; i < count; ++i) {
        double frac = (raw[i - 1] + 1.0) / 2.0;
        auto size = static_cast<int64_t>(frac * static_cast<double>(remaining));
        int64_t hi = int64_t(remaining) - int64_t(count - i); // leave >= 1 per later piece
        if (size < 1) size = 1;
        if (size > hi) size = hi;
        pieces.push_back(static_cast<uint32_t>(size));
        remaining -= static_cast<uint32_t>(size);
    }
    pieces.push_back(remaining);
    return pieces;
}

BakerGeometry make_geometry(uint32_t width, uint32_t length, uint32_t height,
                            std::vector<uint32_t> n, std::vector<uint32_t> m) {
    BakerGeometry geo;
    geo.width = width;
    geo.length = length;
    geo.height = height;
    geo.n = std::move(n);
    geo.m = std::move(m);
    uint32_t sum = 0;
    geo.f.reserve(geo.n.size());
    for (uint32_t piece : geo.n) {
        if (piece < 1) raise(Errc::infeasible_partition, "zero-width x piece");
        geo.f.push_back(sum);
        sum += piece;
    }
    if (sum != width) raise(Errc::dimension_mismatch, "x pieces do not sum to W");
    sum = 0;
    geo.g.reserve(geo.m.size());
    for (uint32_t piece : geo.m) {
        if (piece < 1) raise(Errc::infeasible_partition, "zero-length y piece");
        geo.g.push_back(sum);
        sum += piece;
    }
    if (sum != length) raise(Errc::dimension_mismatch, "y pieces do not sum to L");
    return geo;
}

void baker_map(const BakerGeometry& g, uint32_t x, uint32_t y, uint32_t z,
               uint32_t& ox, uint32_t& oy, uint32_t& oz) {
    // locate the (i, j) block containing (x, y)
    size_t i = g.f.size() - 1;
    while (g.f[i] > x) --i;
    size_t j = g.g.size() - 1;
    while (g.g[j] > y) --j;

    uint64_t w = g.width, l = g.length, h = g.height;
    uint64_t ni = g.n[i], mj = g.m[j], fi = g.f[i], gj = g.g[j];
    uint64_t num = (w * gj + mj * fi) * h + uint64_t(z) * mj * ni + (y - gj) * ni + (x - fi);
    uint64_t wl = w * l;
    ox = static_cast<uint32_t>((num % wl) % w);
    oy = static_cast<uint32_t>((num % wl) / w);
    oz = static_cast<uint32_t>(num / wl);
}

std::vector<uint32_t> make_permutation(const BakerGeometry& g) {
    // Relinearizing the mapped cell with the same raster rule collapses the
    // coordinate form back to num, so dest[p] is num evaluated at cell p.
    uint64_t w = g.width, h = g.height;
    std::vector<uint32_t> dest(g.volume());

    // piece index per coordinate, so the block lookup is O(1)
    std::vector<uint32_t> xpiece(g.width), ypiece(g.length);
    for (size_t i = 0, x = 0; i < g.n.size(); ++i)
        for (uint32_t c = 0; c < g.n[i]; ++c, ++x) xpiece[x] = static_cast<uint32_t>(i);
    for (size_t j = 0, y = 0; j < g.m.size(); ++j)
        for (uint32_t c = 0; c < g.m[j]; ++c, ++y) ypiece[y] = static_cast<uint32_t>(j);

    uint64_t p = 0;
    for (uint32_t z = 0; z < g.height; ++z) {
        for (uint32_t y = 0; y < g.length; ++y) {
            uint64_t j = ypiece[y];
            uint64_t mj = g.m[j], gj = g.g[j];
            for (uint32_t x = 0; x < g.width; ++x, ++p) {
                uint64_t i = xpiece[x];
                uint64_t ni = g.n[i], fi = g.f[i];
                uint64_t num = (w * gj + mj * fi) * h + uint64_t(z) * mj * ni + (y - gj) * ni + (x - fi);
                dest[p] = static_cast<uint32_t>(num);
            }
        }
    }
    return dest;
}

} // namespace bakercrypt::baker3d
