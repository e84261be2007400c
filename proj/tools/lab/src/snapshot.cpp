#include "gkdv/lab/snapshot.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cstring>
#include <fstream>
#include <iterator>
#include <string>
#include <vector>

#include "gkdv/lab/errors.hpp"

namespace gkdv::lab {

namespace {

constexpr std::array<char, 4> kMagic{'G', 'K', 'D', 'V'};
constexpr std::size_t kHeaderBytes = 4 + 4 + 4 + 8 + 8 + 8;

template <class T>
void put(std::vector<unsigned char>& buf, T value) {
  auto bits = std::bit_cast<std::array<unsigned char, sizeof(T)>>(value);
  if constexpr (std::endian::native == std::endian::big) std::reverse(bits.begin(), bits.end());
  buf.insert(buf.end(), bits.begin(), bits.end());
}

template <class T>
T get(const unsigned char* at) {
  std::array<unsigned char, sizeof(T)> bits;
  std::memcpy(bits.data(), at, sizeof(T));
  if constexpr (std::endian::native == std::endian::big) std::reverse(bits.begin(), bits.end());
  return std::bit_cast<T>(bits);
}

}  // namespace

void save_snapshot(const Field& u, const std::filesystem::path& path) {
  std::vector<unsigned char> buf;
  buf.reserve(kHeaderBytes + 8 * u.size());
  buf.insert(buf.end(), kMagic.begin(), kMagic.end());
  put<std::uint32_t>(buf, kSnapshotVersion);
  put<std::uint32_t>(buf, static_cast<std::uint32_t>(u.exponent().value()));
  put<double>(buf, u.grid().length());
  put<std::uint64_t>(buf, u.grid().points());
  put<double>(buf, u.time());
  for (double v : u.values()) put<double>(buf, v);

  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  out.write(reinterpret_cast<const char*>(buf.data()), static_cast<std::streamsize>(buf.size()));
  if (!out) throw IoError("write failed for " + path.string());
}

Field load_snapshot(const std::filesystem::path& path, double dt) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  const std::vector<unsigned char> buf((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  if (in.bad()) throw IoError("read failed for " + path.string());

  if (buf.size() < kHeaderBytes) throw FormatError(path.string() + ": truncated header");
  if (std::memcmp(buf.data(), kMagic.data(), kMagic.size()) != 0) throw FormatError(path.string() + ": bad magic");
  const auto version = get<std::uint32_t>(buf.data() + 4);
  if (version != kSnapshotVersion)
    throw FormatError(path.string() + ": unsupported version " + std::to_string(version));
  const auto p = get<std::uint32_t>(buf.data() + 8);
  const auto length = get<double>(buf.data() + 12);
  const auto n = get<std::uint64_t>(buf.data() + 20);
  const auto t = get<double>(buf.data() + 28);
  if (n > (buf.size() - kHeaderBytes) / 8 || buf.size() != kHeaderBytes + 8 * n)
    throw FormatError(path.string() + ": payload size does not match N = " + std::to_string(n));

  std::vector<double> values(n);
  for (std::size_t j = 0; j < n; ++j) values[j] = get<double>(buf.data() + kHeaderBytes + 8 * j);
  try {
    return Field(GridSpec(length, n, dt), Exponent(static_cast<int>(p)), t, std::move(values));
  } catch (const gkdv::ParameterError& e) {
    throw FormatError(path.string() + ": " + e.what());
  }
}

}  // namespace gkdv::lab
