#pragma once

#include <cstdint>
#include <vector>

#include "bakercrypt/error.hpp"

namespace bakercrypt::baker3d {

// Cube geometry plus the chaotic axis partitions.  n holds the x-axis piece
// widths (sum W), m the y-axis piece lengths (sum L); f and g are their
// prefix sums with f[0] = g[0] = 0.
struct BakerGeometry {
    uint32_t width = 1;  // W, x extent
    uint32_t length = 1; // L, y extent
    uint32_t height = 1; // H, z extent
    std::vector<uint32_t> n;
    std::vector<uint32_t> m;
    std::vector<uint32_t> f;
    std::vector<uint32_t> g;

    uint64_t volume() const { return uint64_t(width) * length * height; }
};

struct CubeDims {
    uint32_t width;
    uint32_t length;
    uint32_t height;
};

// Chooses cube dimensions for an M x N array.  When 4 | M the case is picked
// by N's divisibility (mod 8, mod 4, mod 2, else H = 4); otherwise the array
// degenerates to a flat W = M, L = N, H = 1 cube.  Always W*L*H = M*N.
CubeDims cube_dims(uint32_t m, uint32_t n);

// Splits `total` cells into `count` pieces, the first count-1 sized by the
// raw chaotic draws via floor((raw+1)/2 * remaining) clamped so every piece
// is >= 1 and later pieces stay feasible; the last piece takes the
// remainder.  Requires count < total (Errc::infeasible_partition) and
// raw.size() >= count-1.
std::vector<uint32_t> partition_axis(uint32_t total, uint32_t count,
                                     const std::vector<double>& raw);

// Builds a geometry from per-axis piece lists (sizes must sum to W and L).
BakerGeometry make_geometry(uint32_t width, uint32_t length, uint32_t height,
                            std::vector<uint32_t> n, std::vector<uint32_t> m);

// One application of the 3D baker map to a cell.  Caller guarantees the
// coordinates lie inside the cube.
void baker_map(const BakerGeometry& g, uint32_t x, uint32_t y, uint32_t z,
               uint32_t& ox, uint32_t& oy, uint32_t& oz);

// dest[p] for every linear cell index p, using the raster embedding
// x = p mod W, y = (p mod WL) / W, z = p / WL.
std::vector<uint32_t> make_permutation(const BakerGeometry& g);

// Applies the baker permutation `rounds` times to a linear array of
// M*N elements.  Errc::dimension_mismatch when sizes disagree.
template <typename T>
std::vector<T> permute(const std::vector<T>& elements, uint32_t m, uint32_t n,
                       const BakerGeometry& g, uint32_t rounds) {
    if (elements.size() != uint64_t(m) * n || g.volume() != elements.size())
        raise(Errc::dimension_mismatch, "element count does not match geometry volume");
    std::vector<uint32_t> dest = make_permutation(g);
    std::vector<T> cur = elements;
    std::vector<T> next(elements.size());
    for (uint32_t r = 0; r < rounds; ++r) {
        for (size_t p = 0; p < cur.size(); ++p) next[dest[p]] = std::move(cur[p]);
        cur.swap(next);
    }
    return cur;
}

// Exact inverse of permute with the same geometry and rounds.
template <typename T>
std::vector<T> unpermute(const std::vector<T>& elements, uint32_t m, uint32_t n,
                         const BakerGeometry& g, uint32_t rounds) {
    if (elements.size() != uint64_t(m) * n || g.volume() != elements.size())
        raise(Errc::dimension_mismatch, "element count does not match geometry volume");
    std::vector<uint32_t> dest = make_permutation(g);
    std::vector<T> cur = elements;
    std::vector<T> next(elements.size());
    for (uint32_t r = 0; r < rounds; ++r) {
        for (size_t p = 0; p < cur.size(); ++p) next[p] = std::move(cur[dest[p]]);
        cur.swap(next);
    }
    return cur;
}

} // namespace bakercrypt::baker3d
