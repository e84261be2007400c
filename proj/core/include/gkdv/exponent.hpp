#pragma once

namespace gkdv {

// Nonlinearity power p of d_t u + d_x(d_x^2 u + u^p) = 0.
class Exponent {
 public:
  explicit Exponent(int p);

  int value() const { return p_; }
  bool odd() const { return p_ % 2 == 1; }
  // sigma(p) = 1/2 - 2/(p-1); negative subcritical, zero critical.
  double criticality() const { return 0.5 - 2.0 / (p_ - 1); }

  friend bool operator==(Exponent a, Exponent b) { return a.p_ == b.p_; }

 private:
  int p_;
};

}  // namespace gkdv
