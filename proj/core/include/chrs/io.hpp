#pragma once

#include <string>

#include "chrs/types.hpp"

namespace chrs {

// CHRS dump format: 16-byte header (magic "CHRS", u32 version = 1, u64 dim,
// both little-endian) followed by row-major little-endian float64 (re, im)
// pairs. A matrix payload holds dim*dim pairs, a vector payload dim pairs;
// readers distinguish the two by file size. Bit-exact across platforms.

inline constexpr std::uint32_t kDumpVersion = 1;

void write_dump(const std::string& path, const Mat& m);
void write_dump(const std::string& path, const Vec& v);

struct Dump {
  Index dim = 0;
  bool is_matrix = false;
  Mat matrix;  // set when is_matrix
  Vec vector;  // set otherwise
};

Dump read_dump(const std::string& path);

}  // namespace chrs
