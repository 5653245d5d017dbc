#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "bakercrypt/error.hpp"

namespace bakercrypt::io {

enum class ImageKind { jpeg, gif, unknown };

// whole-file read; Errc::io_error on any failure
std::vector<uint8_t> read_file(const std::string& path);

// write via a temp file in the same directory plus rename, so a crash never
// leaves a half-written output; Errc::io_error on any failure
void write_file_atomic(const std::string& path, const std::vector<uint8_t>& bytes);

// identify a payload by its leading magic bytes
ImageKind sniff_magic(const std::vector<uint8_t>& bytes);

} // namespace bakercrypt::io
