#pragma once

#include "stablepd/field.hpp"

#include <filesystem>
#include <stdexcept>

namespace stablepd {

/// Raised for unreadable, corrupt, or unsupported image files.
class ImageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Decodes an 8-bit gray or RGB PNG, or a binary P5 PGM. Alpha and 16-bit data are rejected.
RasterImage load_image(const std::filesystem::path& path);

void save_png(const RasterImage& img, const std::filesystem::path& path);
/// Gray images only.
void save_pgm(const RasterImage& img, const std::filesystem::path& path);

}  // namespace stablepd
