#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "gkdv/errors.hpp"
#include "gkdv/profiles.hpp"
#include "gkdv/solver.hpp"
#include "oracles.hpp"

using namespace gkdv;

namespace {

double trapz(double a, double b, int n, auto f) {
  const double h = (b - a) / n;
  double acc = 0.5 * (f(a) + f(b));
  for (int k = 1; k < n; ++k) acc += f(a + k * h);
  return acc * h;
}

}  // namespace

TEST(Exponent, RejectsBelowTwo) {
  EXPECT_THROW(Exponent(1), ParameterError);
  EXPECT_NO_THROW(Exponent(2));
  EXPECT_DOUBLE_EQ(Exponent(5).criticality(), 0.0);
  EXPECT_LT(Exponent(3).criticality(), 0.0);
}

TEST(GroundState, PeakValues) {
  EXPECT_DOUBLE_EQ(ground_state(Exponent(2), 0.0), 1.5);
  EXPECT_NEAR(ground_state(Exponent(3), 0.0), std::sqrt(2.0), 1e-15);
  for (const auto& o : oracle::kGroundStates) EXPECT_NEAR(ground_state(Exponent(o.p), 0.0), o.peak, 1e-14);
}

TEST(GroundState, ClosedFormIntegralsMatchQuadrature) {
  for (const auto& o : oracle::kGroundStates) {
    EXPECT_NEAR(ground_state_mass(Exponent(o.p)), o.mass, 1e-12) << "p=" << o.p;
    EXPECT_NEAR(ground_state_gradient_mass(Exponent(o.p)), o.gradient, 1e-12) << "p=" << o.p;
  }
}

TEST(GroundState, SolvesProfileEquation) {
  // Q'' + Q^p = Q, with Q' = -tanh((p-1)x/2) Q.
  for (int p = 2; p <= 5; ++p) {
    const Exponent e(p);
    for (double x : {-3.0, -0.7, 0.0, 0.4, 2.5}) {
      const double h = 1e-4;
      const double d2 = (ground_state(e, x + h) - 2 * ground_state(e, x) + ground_state(e, x - h)) / (h * h);
      EXPECT_NEAR(d2 + std::pow(ground_state(e, x), p), ground_state(e, x), 1e-6);
      const double d1 = (ground_state(e, x + h) - ground_state(e, x - h)) / (2 * h);
      EXPECT_NEAR(ground_state_derivative(e, x), d1, 1e-8);
    }
  }
}

TEST(GroundState, FarTailIsFinite) {
  EXPECT_GT(ground_state(Exponent(2), 700.0), 0.0);
  EXPECT_TRUE(std::isfinite(ground_state(Exponent(5), -2000.0)));
}

TEST(SolitonProfile, ScalingExamples) {
  EXPECT_DOUBLE_EQ(soliton_profile(Exponent(2), 4.0, 0.0), 6.0);
  for (double x : {-2.0, 0.0, 1.3}) EXPECT_DOUBLE_EQ(soliton_profile(Exponent(3), 1.0, x), ground_state(Exponent(3), x));
  // int Q_c^2 = c^{2/(p-1) - 1/2} int Q^2
  const double m4 = trapz(-40, 40, 80000, [](double x) { return std::pow(soliton_profile(Exponent(2), 4.0, x), 2); });
  EXPECT_NEAR(m4, 48.0, 1e-9);
}

TEST(SolitonProfile, DerivativesMatchFiniteDifferences) {
  const Exponent e(4);
  const double c = 2.3, h = 1e-4;
  for (double x : {-1.1, 0.3, 2.0}) {
    const auto f = [&](double y) { return soliton_profile(e, c, y); };
    EXPECT_NEAR(soliton_profile_derivative(e, c, x, 1), (f(x + h) - f(x - h)) / (2 * h), 1e-7);
    EXPECT_NEAR(soliton_profile_derivative(e, c, x, 2), (f(x + h) - 2 * f(x) + f(x - h)) / (h * h), 1e-5);
  }
}

TEST(Soliton, TravelsAtItsSpeed) {
  EXPECT_DOUBLE_EQ(soliton({1.0, 0.0, 1}, Exponent(2), 0.0, 0.0), 1.5);
  EXPECT_DOUBLE_EQ(soliton({1.0, 0.0, 1}, Exponent(2), 3.0, 3.0), 1.5);
  EXPECT_NEAR(soliton({1.0, 0.0, -1}, Exponent(3), 0.0, 0.0), -std::sqrt(2.0), 1e-15);
}

TEST(Soliton, Validation) {
  EXPECT_THROW(validate(SolitonParams{0.0, 0.0, 1}, Exponent(2)), ParameterError);
  EXPECT_THROW(validate(SolitonParams{1.0, 0.0, 2}, Exponent(3)), ParameterError);
  EXPECT_THROW(validate(SolitonParams{1.0, 0.0, -1}, Exponent(2)), ParameterError);
  EXPECT_NO_THROW(validate(SolitonParams{1.0, 0.0, -1}, Exponent(5)));
}

TEST(Breather, VelocitiesAndValues) {
  const BreatherParams b{1.0, 1.0, 0.0, 0.0};
  EXPECT_DOUBLE_EQ(b.gamma(), -2.0);
  EXPECT_DOUBLE_EQ(b.delta(), 2.0);
  const double a = std::sqrt(2.0) / 2;
  EXPECT_NEAR(breather({a, a, 0, 0}, 0.0, 0.0), oracle::kBreatherSymmetricOrigin, 1e-13);
  EXPECT_NEAR(breather({a, a, 0, 0}, 0.0, 1.0), oracle::kBreatherSymmetricX1, 1e-13);
  EXPECT_NEAR(breather({0.5, 1.0, 0, 0}, 1.0, 0.5), oracle::kBreatherMoving, 1e-13);
}

TEST(Breather, PdeResidualShrinksQuadratically) {
  // d_t B + d_x(B_xx + B^3) by central differences at a few points.
  const BreatherParams b{0.6, 0.9, 0.3, -0.2};
  auto residual = [&](double h) {
    double worst = 0.0;
    for (double t : {0.0, 0.7}) {
      for (double x : {-1.5, 0.0, 0.8, 2.1}) {
        auto B = [&](double tt, double xx) { return breather(b, tt, xx); };
        const double bt = (B(t + h, x) - B(t - h, x)) / (2 * h);
        const double bxxx = (B(t, x + 2 * h) - 2 * B(t, x + h) + 2 * B(t, x - h) - B(t, x - 2 * h)) / (2 * h * h * h);
        const double cube = (std::pow(B(t, x + h), 3) - std::pow(B(t, x - h), 3)) / (2 * h);
        worst = std::max(worst, std::abs(bt + bxxx + cube));
      }
    }
    return worst;
  };
  const double r1 = residual(2e-2), r2 = residual(1e-2);
  EXPECT_LT(r2, 1e-2);
  EXPECT_NEAR(r1 / r2, 4.0, 0.5);
}

TEST(Breather, PeriodicUpToTranslation) {
  const BreatherParams b{0.7, 1.1, 0.0, 0.0};
  const double T = b.period();
  for (double x : {-2.0, 0.0, 1.5})
    EXPECT_NEAR(breather(b, T, x + b.gamma() * T), breather(b, 0.0, x), 1e-10);
}

TEST(Breather, Validation) {
  EXPECT_THROW(validate(BreatherParams{0.0, 1.0, 0, 0}), ParameterError);
  EXPECT_THROW(validate(BreatherParams{1.0, -1.0, 0, 0}), ParameterError);
}

TEST(TranslationBound, ClosedFormAndInequality) {
  const Exponent e(2);
  for (double r : {0.1, 0.5, 2.0}) {
    EXPECT_NEAR(translation_bound(e, 1.0, r, 0),
                std::sqrt(oracle::kGradL2Squared + r * oracle::kGradSup * oracle::kGradSup) * r, 1e-6);
    EXPECT_NEAR(translation_bound(e, 1.0, r, 1),
                std::sqrt(oracle::kSecondL2Squared + (r + 2 * oracle::kZ1) * oracle::kSecondSup * oracle::kSecondSup) * r,
                1e-6);
  }
  for (int p = 2; p <= 5; ++p)
    for (double c : {0.5, 2.0})
      for (double r : {0.05, 0.7, 3.0})
        for (int s : {0, 1}) {
          const Exponent ep(p);
          const double diff = std::sqrt(trapz(-60, 60, 60000, [&](double x) {
            return std::pow(soliton_profile_derivative(ep, c, x - r, s) - soliton_profile_derivative(ep, c, x, s), 2);
          }));
          EXPECT_LE(diff, translation_bound(ep, c, r, s)) << "p=" << p << " c=" << c << " r=" << r << " s=" << s;
        }
}

TEST(Sampling, SolitonWrapsToNearestImage) {
  const GridSpec g(64, 256, 1e-3);
  const Field u = sample_soliton({1.0, 31.0, 1}, Exponent(2), g);
  EXPECT_NEAR(u[0], soliton_profile(Exponent(2), 1.0, -1.0), 1e-14);  // x = -32 sits 1 to the right of 31 - 64
}

TEST(Superpose, SingleItemEqualsSampling) {
  const GridSpec g(128, 512, 1e-3);
  const SolitonParams s{2.0, 10.0, 1};
  const auto sf = superpose(std::vector<SolitonParams>{s}, Exponent(3), g);
  const Field direct = sample_soliton(s, Exponent(3), g);
  for (std::size_t j = 0; j < g.points(); ++j) EXPECT_EQ(sf.field[j], direct[j]);
  EXPECT_EQ(sf.interaction, 0.0);
}

TEST(Superpose, SeparatedInteractionIsTiny) {
  const GridSpec g(256, 2048, 1e-3);
  const std::vector<SolitonParams> s{{1.0, -20.0, 1}, {4.0, 20.0, 1}};
  const auto sf = superpose(s, Exponent(2), g);
  EXPECT_LE(sf.interaction, 1e-8);
  EXPECT_NEAR(sf.interaction, 2 * oracle::kInteractionGap40, 1e-17);
}

TEST(Superpose, RejectsBadLayouts) {
  const GridSpec g(256, 2048, 1e-3);
  EXPECT_THROW(superpose(std::vector<SolitonParams>{{4.0, 20.0, 1}, {1.0, -20.0, 1}}, Exponent(2), g), OverlapError);
  EXPECT_THROW(superpose(std::vector<SolitonParams>{{1.0, 0.0, 1}, {1.0, 5.0, 1}}, Exponent(2), g), OverlapError);
  EXPECT_THROW(superpose(std::vector<SolitonParams>{{1.0, 120.0, 1}}, Exponent(2), g), DomainError);
}
