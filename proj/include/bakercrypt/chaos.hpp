#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <vector>

#include "bakercrypt/error.hpp"

namespace bakercrypt::chaos {

// Full secret key: two seeds for the compound map, block counts for the
// baker partitions, warm-up discard count and permutation round count.
struct KeyMaterial {
    double x0 = 0.0;
    double y0 = 0.0;
    uint32_t k = 1;
    uint32_t t = 1;
    uint32_t rounds = 1;
    uint32_t warmup = 100;

    bool operator==(const KeyMaterial&) const = default;
};

// Fixed points of the two track maps.  f0(x) = 4x^3 - 3x has fixed points
// {-1, 0, 1}; f1(y) = 8y^4 - 8y^2 + 1 has real fixed points in [-1, 1] at
// {-(1+sqrt5)/4, -1/2, (sqrt5-1)/4, 1}.
const std::array<double, 3>& f0_fixed_points();
const std::array<double, 4>& f1_fixed_points();

// Distance below which a seed is rejected as degenerate.
inline constexpr double kSeedFixedPointTol = 1e-12;
// Distance below which a running track value gets nudged off a fixed point.
inline constexpr double kPerturbTol = 1e-10;

// Accepts iff both values lie in (-1, 1) and are farther than 1e-12 from
// every fixed point of their map.  Throws Errc::out_of_range or
// Errc::fixed_point_seed.
void validate_seed(double x0, double y0);

// Validates the whole key (seeds plus k/t/rounds >= 1).
void validate_key(const KeyMaterial& key);

// Iteration state of the compound map.
class ChaoticState {
public:
    // Key must already be validated.
    explicit ChaoticState(const KeyMaterial& key);

    // One compound-map step: advances the track selected by sign(x + y) and
    // returns the new track value as z.  If the stored track value lands
    // within 1e-10 of a fixed point of its map it is nudged toward the
    // interval interior by ((perturb_counter mod 9) + 1) * 1e-9 so the orbit
    // cannot stall; the returned z is the pre-nudge value.
    double next_z();

    // quantize(next_z(), n) repeated `count` times.
    std::vector<uint32_t> keystream(uint64_t count, uint32_t n);

    double x() const noexcept { return x_; }
    double y() const noexcept { return y_; }
    uint64_t emitted() const noexcept { return emitted_; }
    uint64_t perturb_counter() const noexcept { return perturb_counter_; }

private:
    double x_;
    double y_;
    uint64_t emitted_ = 0;
    uint64_t perturb_counter_ = 0;

    double perturb(double v, const double* fps, size_t nfps);
};

// Maps z in [-1, 1] to an integer in [0, n-1] through the arccos transform.
// z == 1 maps to n-1.
uint32_t quantize(double z, uint32_t n);

// Constructs a state from the key and discards key.warmup iterates.
ChaoticState make_generator(const KeyMaterial& key);

// Key file: one value per line -- x0, y0, k, t, rounds, and an optional
// sixth line with the warm-up count (default 100).
KeyMaterial parse_key_text(const std::string& text);
KeyMaterial load_key_file(const std::filesystem::path& path);
std::string format_key_text(const KeyMaterial& key);
void save_key_file(const KeyMaterial& key, const std::filesystem::path& path);

} // namespace bakercrypt::chaos
