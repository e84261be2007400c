#pragma once

#include <filesystem>
#include <string>
#include <vector>

namespace gkdv::lab {

struct Series {
  std::string name;
  std::vector<double> values;
};

// First line "# config_hash=<hash>", then the header row, then one row per time. Values use %.17g.
void write_csv(const std::filesystem::path& path, const std::string& hash, const std::vector<double>& t,
               const std::vector<Series>& columns);

// Minimal SVG line plot; log_y drops non-positive points.
void write_svg(const std::filesystem::path& path, const std::string& title, const std::vector<double>& t,
               const std::vector<Series>& lines, bool log_y = false);

}  // namespace gkdv::lab
