#include "chrs/io.hpp"

#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <vector>

namespace chrs {

namespace {

void put_u32(std::string& out, std::uint32_t x) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<char>((x >> (8 * i)) & 0xff));
}

void put_u64(std::string& out, std::uint64_t x) {
  for (int i = 0; i < 8; ++i) out.push_back(static_cast<char>((x >> (8 * i)) & 0xff));
}

void put_f64(std::string& out, double d) { put_u64(out, std::bit_cast<std::uint64_t>(d)); }

std::uint64_t get_u64(const unsigned char* p) {
  std::uint64_t x = 0;
  for (int i = 0; i < 8; ++i) x |= static_cast<std::uint64_t>(p[i]) << (8 * i);
  return x;
}

std::uint32_t get_u32(const unsigned char* p) {
  std::uint32_t x = 0;
  for (int i = 0; i < 4; ++i) x |= static_cast<std::uint32_t>(p[i]) << (8 * i);
  return x;
}

double get_f64(const unsigned char* p) { return std::bit_cast<double>(get_u64(p)); }

void write_payload(const std::string& path, Index dim, const Cx* data, Index count) {
  std::string out;
  out.reserve(16 + static_cast<std::size_t>(count) * 16);
  out += "CHRS";
  put_u32(out, kDumpVersion);
  put_u64(out, static_cast<std::uint64_t>(dim));
  for (Index i = 0; i < count; ++i) {
    put_f64(out, data[i].real());
    put_f64(out, data[i].imag());
  }
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw ConfigError("cannot open '" + path + "' for writing");
  f.write(out.data(), static_cast<std::streamsize>(out.size()));
  if (!f) throw ConfigError("failed writing '" + path + "'");
}

}  // namespace

void write_dump(const std::string& path, const Mat& m) {
  if (m.rows() != m.cols()) throw ConfigError("dump matrices must be square");
  // Row-major order regardless of Eigen's internal storage.
  std::vector<Cx> row_major(static_cast<std::size_t>(m.rows()) * m.cols());
  for (Index i = 0; i < m.rows(); ++i) {
    for (Index j = 0; j < m.cols(); ++j) row_major[i * m.cols() + j] = m(i, j);
  }
  write_payload(path, m.rows(), row_major.data(), static_cast<Index>(row_major.size()));
}

void write_dump(const std::string& path, const Vec& v) {
  write_payload(path, v.size(), v.data(), v.size());
}

Dump read_dump(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw ConfigError("cannot open '" + path + "'");
  std::string bytes((std::istreambuf_iterator<char>(f)), std::istreambuf_iterator<char>());
  if (bytes.size() < 16) throw ConfigError("'" + path + "' is too short for a CHRS dump");
  const auto* p = reinterpret_cast<const unsigned char*>(bytes.data());
  if (std::memcmp(p, "CHRS", 4) != 0) throw ConfigError("'" + path + "' has no CHRS magic");
  std::uint32_t version = get_u32(p + 4);
  if (version != kDumpVersion) {
    throw ConfigError("'" + path + "' has unsupported version " + std::to_string(version));
  }
  std::uint64_t dim = get_u64(p + 8);
  if (dim == 0 || dim > (1ull << 40)) throw ConfigError("'" + path + "' has implausible dim");

  const std::size_t payload = bytes.size() - 16;
  const std::size_t vec_bytes = static_cast<std::size_t>(dim) * 16;
  Dump d;
  d.dim = static_cast<Index>(dim);
  if (payload == vec_bytes * dim) {
    d.is_matrix = true;
    d.matrix.resize(d.dim, d.dim);
    const unsigned char* q = p + 16;
    for (Index i = 0; i < d.dim; ++i) {
      for (Index j = 0; j < d.dim; ++j, q += 16) {
        d.matrix(i, j) = Cx(get_f64(q), get_f64(q + 8));
      }
    }
  } else if (payload == vec_bytes) {
    d.is_matrix = false;
    d.vector.resize(d.dim);
    const unsigned char* q = p + 16;
    for (Index i = 0; i < d.dim; ++i, q += 16) d.vector(i) = Cx(get_f64(q), get_f64(q + 8));
  } else {
    throw ConfigError("'" + path + "' payload matches neither a dim vector nor a dim x dim matrix");
  }
  return d;
}

}  // namespace chrs
