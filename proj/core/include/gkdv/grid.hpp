#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "gkdv/exponent.hpp"

namespace gkdv {

// Periodic grid on [-L/2, L/2) with N points and a time step.
class GridSpec {
 public:
  GridSpec(double length, std::size_t points, double dt);

  double length() const { return length_; }
  std::size_t points() const { return points_; }
  double dt() const { return dt_; }
  double dx() const { return length_ / static_cast<double>(points_); }
  double left() const { return -0.5 * length_; }
  double x(std::size_t j) const { return left() + dx() * static_cast<double>(j); }
  std::vector<double> coordinates() const;

  // Same spatial grid, different step.
  GridSpec with_dt(double dt) const { return GridSpec(length_, points_, dt); }

  friend bool operator==(const GridSpec&, const GridSpec&) = default;

 private:
  double length_;
  std::size_t points_;
  double dt_;
};

// One snapshot u(t, .). Immutable once built.
class Field {
 public:
  Field(GridSpec grid, Exponent p, double t, std::vector<double> values);
  static Field zeros(GridSpec grid, Exponent p, double t = 0.0);

  const GridSpec& grid() const { return grid_; }
  Exponent exponent() const { return p_; }
  double time() const { return t_; }
  std::span<const double> values() const { return values_; }
  double operator[](std::size_t j) const { return values_[j]; }
  std::size_t size() const { return values_.size(); }

  Field with_values(std::vector<double> values) const { return Field(grid_, p_, t_, std::move(values)); }
  Field with_time(double t) const { return Field(grid_, p_, t, values_); }
  // Cyclic shift by whole cells: result[j] = u[j - cells].
  Field shifted(long cells) const;

 private:
  GridSpec grid_;
  Exponent p_;
  double t_;
  std::vector<double> values_;
};

struct ConservedRecord {
  double mass = 0.0;
  double energy = 0.0;
  std::optional<double> h2_invariant;
  double boundary_amplitude = 0.0;
};

enum class TruncationKind { Blowup, Domain };

struct Truncation {
  TruncationKind kind;
  double time;
  std::string message;
};

struct Trajectory {
  std::vector<Field> frames;
  std::vector<ConservedRecord> records;
  std::optional<Truncation> truncation;

  bool truncated() const { return truncation.has_value(); }
  // Re-raises the stored truncation as BlowupError or DomainError.
  void rethrow() const;
  std::vector<double> times() const;
  Trajectory reversed() const;
};

}  // namespace gkdv
