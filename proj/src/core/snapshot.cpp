#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <iterator>

#include "phnls/state.hpp"

namespace phnls {
namespace {

constexpr char kMagic[4] = {'P', 'H', 'N', '1'};
constexpr std::size_t kHeaderBytes = 4 + 4 + 4 + 4 + 8 + 8;

void put_u32(std::vector<unsigned char>& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<unsigned char>(v >> (8 * i)));
}

void put_f64(std::vector<unsigned char>& out, double v) {
  const auto bits = std::bit_cast<std::uint64_t>(v);
  for (int i = 0; i < 8; ++i) out.push_back(static_cast<unsigned char>(bits >> (8 * i)));
}

std::uint32_t get_u32(std::span<const unsigned char> in, std::size_t at) {
  std::uint32_t v = 0;
  for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(in[at + i]) << (8 * i);
  return v;
}

double get_f64(std::span<const unsigned char> in, std::size_t at) {
  std::uint64_t v = 0;
  for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(in[at + i]) << (8 * i);
  return std::bit_cast<double>(v);
}

}  // namespace

std::vector<unsigned char> encode_snapshot(const Field& field) {
  const Grid& g = field.grid();
  std::vector<unsigned char> out;
  out.reserve(kHeaderBytes + 16 * g.size());
  out.insert(out.end(), std::begin(kMagic), std::end(kMagic));
  put_u32(out, kSnapshotVersion);
  put_u32(out, static_cast<std::uint32_t>(g.n_y()));
  put_u32(out, static_cast<std::uint32_t>(g.n_h()));
  put_f64(out, g.box_len());
  put_f64(out, field.time());
  for (int a = 0; a < g.n_y(); ++a)
    for (int b = 0; b < g.n_y(); ++b)
      for (int n = 0; n < g.n_h(); ++n) {
        const cplx c = field.at(a, b, n);
        put_f64(out, c.real());
        put_f64(out, c.imag());
      }
  return out;
}

Field decode_snapshot(std::span<const unsigned char> bytes, int quad_count) {
  if (bytes.size() < kHeaderBytes || std::memcmp(bytes.data(), kMagic, 4) != 0)
    fail(ErrorCode::io, "not a PHN1 snapshot");
  const std::uint32_t version = get_u32(bytes, 4);
  if (version != kSnapshotVersion)
    fail(ErrorCode::io, "unsupported snapshot version " + std::to_string(version));
  const std::uint32_t n_y = get_u32(bytes, 8);
  const std::uint32_t n_h = get_u32(bytes, 12);
  const double box_len = get_f64(bytes, 16);
  const double t = get_f64(bytes, 24);
  if (n_y == 0 || n_h == 0 || n_y > (1u << 14) || n_h > static_cast<std::uint32_t>(kMaxHermiteIndex))
    fail(ErrorCode::io, "snapshot header has implausible dimensions");
  const std::size_t count = static_cast<std::size_t>(n_y) * n_y * n_h;
  if (bytes.size() != kHeaderBytes + 16 * count)
    fail(ErrorCode::io, "snapshot payload is " + std::to_string(bytes.size() - kHeaderBytes) +
                            " bytes, header implies " + std::to_string(16 * count));
  GridPtr grid = Grid::create(static_cast<int>(n_y), box_len, static_cast<int>(n_h), quad_count);
  Field field(grid, t);
  std::size_t at = kHeaderBytes;
  for (std::uint32_t a = 0; a < n_y; ++a)
    for (std::uint32_t b = 0; b < n_y; ++b)
      for (std::uint32_t n = 0; n < n_h; ++n) {
        const double re = get_f64(bytes, at);
        const double im = get_f64(bytes, at + 8);
        at += 16;
        field.at(static_cast<int>(a), static_cast<int>(b), static_cast<int>(n)) = cplx(re, im);
      }
  return field;
}

void write_snapshot(const Field& field, const std::string& path) {
  const std::vector<unsigned char> bytes = encode_snapshot(field);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) fail(ErrorCode::io, "cannot open " + path + " for writing");
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) fail(ErrorCode::io, "write failed for " + path);
}

Field read_snapshot(const std::string& path, int quad_count) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorCode::io, "cannot open snapshot " + path);
  std::vector<unsigned char> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  try {
    return decode_snapshot(bytes, quad_count);
  } catch (const Error& e) {
    fail(e.code(), path + ": " + e.what());
  }
}

}  // namespace phnls
