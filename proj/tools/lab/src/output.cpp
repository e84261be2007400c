#include "gkdv/lab/output.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>

#include "gkdv/lab/errors.hpp"

namespace gkdv::lab {

namespace {

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  return out;
}

}  // namespace

void write_csv(const std::filesystem::path& path, const std::string& hash, const std::vector<double>& t,
               const std::vector<Series>& columns) {
  for (const auto& c : columns)
    if (c.values.size() != t.size()) throw Error("column " + c.name + " length differs from the time column");
  auto out = open_out(path);
  out << "# config_hash=" << hash << '\n' << 't';
  for (const auto& c : columns) out << ',' << c.name;
  out << '\n';
  for (std::size_t k = 0; k < t.size(); ++k) {
    out << num(t[k]);
    for (const auto& c : columns) out << ',' << num(c.values[k]);
    out << '\n';
  }
  if (!out) throw IoError("write failed for " + path.string());
}

void write_svg(const std::filesystem::path& path, const std::string& title, const std::vector<double>& t,
               const std::vector<Series>& lines, bool log_y) {
  constexpr double W = 640, H = 400, pad = 50;
  static const char* colors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"};
  auto y_of = [log_y](double v) { return log_y ? std::log10(v) : v; };
  auto usable = [log_y](double v) { return std::isfinite(v) && (!log_y || v > 0.0); };

  double x0 = t.empty() ? 0.0 : t.front(), x1 = t.empty() ? 1.0 : t.back();
  double y0 = std::numeric_limits<double>::infinity(), y1 = -y0;
  for (const auto& s : lines)
    for (double v : s.values)
      if (usable(v)) {
        y0 = std::min(y0, y_of(v));
        y1 = std::max(y1, y_of(v));
      }
  if (!(y1 > y0)) {
    y0 = std::isfinite(y0) ? y0 - 1.0 : 0.0;
    y1 = y0 + 2.0;
  }
  if (!(x1 > x0)) x1 = x0 + 1.0;
  auto px = [&](double x) { return pad + (x - x0) / (x1 - x0) * (W - 2 * pad); };
  auto py = [&](double y) { return H - pad - (y - y0) / (y1 - y0) * (H - 2 * pad); };

  auto out = open_out(path);
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H << "\">\n"
      << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
      << "<text x=\"" << pad << "\" y=\"20\" font-size=\"14\">" << title << "</text>\n"
      << "<rect x=\"" << pad << "\" y=\"" << pad << "\" width=\"" << W - 2 * pad << "\" height=\"" << H - 2 * pad
      << "\" fill=\"none\" stroke=\"black\"/>\n"
      << "<text x=\"" << pad << "\" y=\"" << H - pad + 16 << "\" font-size=\"11\">" << num(x0) << "</text>\n"
      << "<text x=\"" << W - pad - 40 << "\" y=\"" << H - pad + 16 << "\" font-size=\"11\">" << num(x1) << "</text>\n"
      << "<text x=\"4\" y=\"" << pad + 4 << "\" font-size=\"11\">" << (log_y ? "1e" : "") << num(y1) << "</text>\n"
      << "<text x=\"4\" y=\"" << H - pad << "\" font-size=\"11\">" << (log_y ? "1e" : "") << num(y0) << "</text>\n";
  for (std::size_t i = 0; i < lines.size(); ++i) {
    const char* color = colors[i % 6];
    out << "<polyline fill=\"none\" stroke=\"" << color << "\" points=\"";
    for (std::size_t k = 0; k < t.size() && k < lines[i].values.size(); ++k)
      if (usable(lines[i].values[k])) out << px(t[k]) << ',' << py(y_of(lines[i].values[k])) << ' ';
    out << "\"/>\n<text x=\"" << W - pad - 120 << "\" y=\"" << pad + 16 * (i + 1) << "\" font-size=\"11\" fill=\""
        << color << "\">" << lines[i].name << "</text>\n";
  }
  out << "</svg>\n";
  if (!out) throw IoError("write failed for " + path.string());
}

}  // namespace gkdv::lab
