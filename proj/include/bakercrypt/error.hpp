#pragma once

#include <stdexcept>
#include <string>

namespace bakercrypt {

// Error kinds, one per failure mode a module can report.
enum class Errc {
    out_of_range,         // seed outside (-1, 1)
    fixed_point_seed,     // seed too close to a fixed point of f0/f1
    infeasible_partition, // axis partition piece count >= extent
    dimension_mismatch,   // array length does not match geometry volume
    unsupported_jpeg,     // progressive / arithmetic / 12-bit / non-3-component
    corrupt_stream,       // JPEG marker or entropy-coded data violation
    encoding_overflow,    // coefficient category beyond baseline limits
    corrupt_gif,          // bad signature, truncated blocks, LZW violation
    encoding_error,       // GIF index exceeds palette
    keystream_exhausted,  // diffusion given too few keystream entries
    bad_modulus,          // diffusion modulus not a power of two
    shape_mismatch,       // NPCR/UACI inputs differ in shape
    length_mismatch,      // avalanche bitstreams differ in length
    insufficient_bits,    // randomness test input too short to evaluate
    bad_key,              // malformed key file
    io_error,             // filesystem failure
};

class Error : public std::runtime_error {
public:
    Error(Errc code, const std::string& what) : std::runtime_error(what), code_(code) {}
    Errc code() const noexcept { return code_; }

private:
    Errc code_;
};

[[noreturn]] inline void raise(Errc code, const std::string& what) { throw Error(code, what); }

} // namespace bakercrypt
