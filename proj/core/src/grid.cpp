#include "gkdv/grid.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "gkdv/errors.hpp"

namespace gkdv {

GridSpec::GridSpec(double length, std::size_t points, double dt) : length_(length), points_(points), dt_(dt) {
  if (!(std::isfinite(length) && length > 0.0)) throw ParameterError("grid length must be positive");
  if (points < 64 || (points & (points - 1)) != 0)
    throw ParameterError("grid points must be a power of two >= 64, got " + std::to_string(points));
  if (!(std::isfinite(dt) && dt > 0.0)) throw ParameterError("time step must be positive");
}

std::vector<double> GridSpec::coordinates() const {
  std::vector<double> xs(points_);
  for (std::size_t j = 0; j < points_; ++j) xs[j] = x(j);
  return xs;
}

Field::Field(GridSpec grid, Exponent p, double t, std::vector<double> values)
    : grid_(grid), p_(p), t_(t), values_(std::move(values)) {
  if (values_.size() != grid_.points())
    throw ParameterError("field has " + std::to_string(values_.size()) + " values for a grid of " +
                         std::to_string(grid_.points()));
  if (!std::isfinite(t_)) throw ParameterError("field time must be finite");
  for (double v : values_)
    if (!std::isfinite(v)) throw ParameterError("field values must be finite");
}

Field Field::zeros(GridSpec grid, Exponent p, double t) {
  return Field(grid, p, t, std::vector<double>(grid.points(), 0.0));
}

Field Field::shifted(long cells) const {
  const long n = static_cast<long>(values_.size());
  long k = cells % n;
  if (k < 0) k += n;
  std::vector<double> out(values_.size());
  std::rotate_copy(values_.begin(), values_.end() - k, values_.end(), out.begin());
  return with_values(std::move(out));
}

void Trajectory::rethrow() const {
  if (!truncation) return;
  if (truncation->kind == TruncationKind::Blowup) throw BlowupError(truncation->message);
  throw DomainError(truncation->message);
}

std::vector<double> Trajectory::times() const {
  std::vector<double> ts;
  ts.reserve(frames.size());
  for (const auto& f : frames) ts.push_back(f.time());
  return ts;
}

Trajectory Trajectory::reversed() const {
  Trajectory out;
  if (frames.empty()) return out;
  const double t_end = frames.back().time();
  const double t_start = frames.front().time();
  for (std::size_t k = frames.size(); k-- > 0;) {
    out.frames.push_back(frames[k].with_time(t_start + t_end - frames[k].time()));
    out.records.push_back(records[k]);
  }
  return out;
}

}  // namespace gkdv
