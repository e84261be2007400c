#pragma once

#include <cstdint>
#include <filesystem>

#include "gkdv/grid.hpp"

namespace gkdv::lab {

// Layout (little-endian):
//   char[4] "GKDV", u32 version, u32 p, f64 L, u64 N, f64 t, f64[N] values
inline constexpr std::uint32_t kSnapshotVersion = 1;

void save_snapshot(const Field& u, const std::filesystem::path& path);

// The file holds no time step; the returned grid uses `dt`.
Field load_snapshot(const std::filesystem::path& path, double dt = 1e-3);

}  // namespace gkdv::lab
