#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "gkdv/diagnostics.hpp"
#include "gkdv/errors.hpp"
#include "gkdv/profiles.hpp"
#include "gkdv/solver.hpp"
#include "oracles.hpp"

using namespace gkdv;

namespace {

const GridSpec kGrid(128, 1024, 1e-3);

Trajectory zero_trajectory(std::size_t frames) {
  Trajectory tr;
  for (std::size_t k = 0; k < frames; ++k) {
    tr.frames.push_back(Field::zeros(kGrid, Exponent(2), 0.5 * static_cast<double>(k)));
    tr.records.push_back(conserved(tr.frames.back()));
  }
  return tr;
}

Field two_solitons(double gap) {
  return superpose(std::vector<SolitonParams>{{1.0, -gap / 2, 1}, {4.0, gap / 2, 1}}, Exponent(2), kGrid).field;
}

}  // namespace

TEST(Weights, PhiShapeAndBounds) {
  const PhiWeight phi(0.3);
  EXPECT_NEAR(phi(0.0), 0.25, 1e-15);
  EXPECT_NEAR(phi(-1e3), 0.5, 1e-15);
  EXPECT_NEAR(phi(1e3), 0.0, 1e-15);
  const double l0 = phi.lambda0();
  for (double x : {-40.0, -3.0, 0.0, 0.5, 7.0, 40.0}) {
    const double h = 1e-5;
    EXPECT_NEAR(phi.d1(x), (phi(x + h) - phi(x - h)) / (2 * h), 1e-9);
    EXPECT_NEAR(phi.d3(x), (phi.d1(x + h) - 2 * phi.d1(x) + phi.d1(x - h)) / (h * h), 1e-5);
    const double e = std::exp(-0.3 * std::abs(x));
    EXPECT_LT(l0 * e, -phi.d1(x));
    EXPECT_LT(-phi.d1(x), e / l0);
    // |phi'''| <= kappa^2 |phi'|
    EXPECT_LE(std::abs(phi.d3(x)), 0.09 * std::abs(phi.d1(x)) * (1 + 1e-12));
    if (x >= 0) EXPECT_GE(phi(x), PhiWeight::lambda1() * std::exp(-0.3 * x));
  }
}

TEST(Weights, PsiShape) {
  const PsiWeight psi(1.0);
  EXPECT_NEAR(psi(0.0), 0.5, 1e-15);
  EXPECT_NEAR(psi(-200.0), 1.0, 1e-15);
  for (double x : {-5.0, 0.0, 3.0}) {
    const double h = 1e-5;
    EXPECT_LT(psi.d1(x), 0.0);
    EXPECT_NEAR(psi.d1(x), (psi(x + h) - psi(x - h)) / (2 * h), 1e-9);
    EXPECT_NEAR(psi.d3(x), (psi.d1(x + h) - 2 * psi.d1(x) + psi.d1(x - h)) / (h * h), 1e-5);
  }
}

TEST(Partition, SumsToOne) {
  const Partition part(0.8, {-10.0, 5.0, 30.0});
  ASSERT_EQ(part.count(), 4u);
  for (double x : {-50.0, -10.0, 0.0, 17.0, 60.0}) {
    double s = 0.0;
    for (std::size_t i = 1; i <= 4; ++i) {
      EXPECT_GE(part.phi(i, x), 0.0);
      s += part.phi(i, x);
    }
    EXPECT_NEAR(s, 1.0, 1e-14);
    EXPECT_EQ(part.psi(4, x), 1.0);
  }
  EXPECT_EQ(part.psi(0, 0.0), 0.0);
  EXPECT_THROW(part.phi(0, 0.0), IndexError);
  EXPECT_THROW(part.phi(5, 0.0), IndexError);
  EXPECT_THROW(Partition(0.5, {3.0, 1.0}), OrderingError);
}

TEST(TailMass, Examples) {
  const Field q = sample_soliton({1.0, 0.0, 1}, Exponent(2), kGrid);
  EXPECT_EQ(tail_mass(Field::zeros(kGrid, Exponent(2)), 0.0), 0.0);
  EXPECT_NEAR(tail_mass(q, 64.0), mass(q), 1e-12);
  EXPECT_NEAR(tail_mass(q, -10.0), oracle::kTailBeyondTen, 2e-9);
  EXPECT_THROW(tail_mass(q, 70.0), DomainError);
}

TEST(TailMass, MonotoneInCut) {
  const Field q = sample_soliton({1.0, 0.0, 1}, Exponent(2), kGrid);
  double prev = 0.0;
  for (double x = -64.0; x <= 64.0; x += 0.37) {
    const double m = tail_mass(q, x);
    EXPECT_GE(m, prev);
    prev = m;
  }
}

TEST(Nondispersion, ZeroAndSoliton) {
  EXPECT_EQ(nondispersion_profile(zero_trajectory(3), 0.5, 20.0), 0.0);
  const auto tr = evolve(sample_soliton({1.0, 0.0, 1}, Exponent(2), kGrid), 5.0, SolverOptions{.frame_stride = 500});
  const double eps = nondispersion_profile(tr, 0.5, 20.0);
  EXPECT_LE(eps, 1e-14);
  EXPECT_THROW(nondispersion_profile(tr, 0.0, 20.0), ParameterError);
}

TEST(TildeM, Examples) {
  EXPECT_DOUBLE_EQ(tilde_m(5.0, 5.0), 5.0);
  EXPECT_NEAR(tilde_m(0.0, 2.0), 2.0 - std::sqrt(2.0), 1e-15);
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> U(-10, 10);
  for (int k = 0; k < 100; ++k) {
    const double a = U(rng), b = U(rng);
    EXPECT_DOUBLE_EQ(tilde_m(a, b), tilde_m(b, a));
    EXPECT_GE(tilde_m(a, b), std::min(a, b) - 1e-12);
    EXPECT_LE(tilde_m(a, b), std::min(a, b) + 1.0 + 1e-12);
  }
}

TEST(MonotoneFunctional, ZeroTrajectory) {
  const auto I = monotone_functional(zero_trajectory(4), 0.0, 0.0, 0.2, 0.25, [](double t) { return 0.5 * t; });
  ASSERT_EQ(I.size(), 4u);
  for (const auto& v : I) EXPECT_EQ(v.value, 0.0);
}

TEST(MonotoneFunctional, DecaysBehindSoliton) {
  const auto tr = evolve(sample_soliton({1.0, 0.0, 1}, Exponent(2), kGrid), 10.0, SolverOptions{.frame_stride = 500});
  const auto mt = [](double t) { return 0.5 * t; };
  const double kappa = default_kappa(0.5, 0.25);
  const auto I = monotone_functional(tr, 0.0, 0.0, kappa, 0.25, mt);
  for (std::size_t k = 1; k < I.size(); ++k) EXPECT_LE(I[k].value, I[k - 1].value * (1 + 1e-9));
  EXPECT_LT(I.back().value, 0.5 * I.front().value);
  const double x0s[] = {-20.0, 0.0};
  const auto fit = fit_monotone_bound(tr, x0s, kappa, 0.25, mt);
  EXPECT_GT(fit.pairs, 0u);
  EXPECT_LE(fit.worst_margin, 1e-12);
}

TEST(DefaultKappa, FormulaAndRange) {
  EXPECT_NEAR(default_kappa(0.5, 0.25), std::sqrt(0.5 * 0.25 / 2), 1e-15);
  EXPECT_THROW(default_kappa(0.25, 0.5), ParameterError);
}

TEST(LocalizedMass, Examples) {
  const Field u = two_solitons(40.0);
  const Partition part(1.0, {0.0});
  EXPECT_NEAR(localized_mass(u, part, 2), mass(u), 1e-12);
  EXPECT_EQ(localized_mass(Field::zeros(kGrid, Exponent(2)), part, 1), 0.0);
  EXPECT_NEAR(localized_mass(u, part, 1), 6.0, 48.0 * std::exp(-0.5 * 20.0));
}

TEST(LocalizedEnergy, Examples) {
  const Field u = two_solitons(40.0);
  const Partition part(1.0, {0.0});
  EXPECT_NEAR(localized_energy(u, part, 2, 0.1, 1.0), energy(u) + 0.1 * mass(u), 1e-11);
  EXPECT_EQ(localized_energy(Field::zeros(kGrid, Exponent(2)), part, 1, 0.1, 1.0), 0.0);
  EXPECT_THROW(localized_energy(u, part, 1, 0.5, 1.0), KappaRangeError);
}

TEST(Monotonicity, ZeroTrajectory) {
  const auto tr = zero_trajectory(5);
  const std::vector<std::vector<double>> mids(5, std::vector<double>{0.0});
  const auto rep = monotonicity_report(tr, mids, 0.1, 1.0, 1.0);
  EXPECT_EQ(rep.k1, 0.0);
  EXPECT_TRUE(rep.ok());
  for (const auto& s : rep.series) {
    EXPECT_EQ(s.max_mass_deficit, 0.0);
    EXPECT_EQ(s.max_energy_deficit, 0.0);
  }
}

TEST(Weinstein, ZeroInputs) {
  const Field z = Field::zeros(kGrid, Exponent(2));
  const std::vector<ProfileTerm> sols{{1.0, -20.0, 1}, {4.0, 20.0, 1}};
  const Partition part(1.0, {0.0});
  EXPECT_EQ(weinstein_H(z, sols, part), 0.0);
  const auto F = weinstein_F(z, sols, part, 0.1);
  EXPECT_EQ(F.direct, 0.0);
  EXPECT_EQ(F.abel, 0.0);
}

TEST(Weinstein, SolitonItselfGivesNegativeH) {
  const std::vector<ProfileTerm> one{{1.0, 0.0, 1}};
  const Field r = sample_soliton({1.0, 0.0, 1}, Exponent(2), kGrid);
  // <L Q, Q> = -(p - 1) int Q^{p+1}
  EXPECT_NEAR(weinstein_H(r, one, Partition(1.0, {})), -7.2, 1e-9);
}

TEST(Weinstein, LayoutErrors) {
  const Field z = Field::zeros(kGrid, Exponent(2));
  const std::vector<ProfileTerm> sols{{4.0, 20.0, 1}, {1.0, -20.0, 1}};
  EXPECT_THROW(weinstein_H(z, sols, Partition(1.0, {0.0})), OrderingError);
  const std::vector<ProfileTerm> two{{1.0, -20.0, 1}, {4.0, 20.0, 1}};
  EXPECT_THROW(weinstein_H(z, two, Partition(1.0, {})), OrderingError);
}

TEST(Weinstein, AbelIdentityOnRandomFields) {
  std::mt19937_64 rng(11);
  std::normal_distribution<double> n;
  std::uniform_real_distribution<double> U(0, 1);
  for (int k = 0; k < 20; ++k) {
    const double c1 = 0.5 + U(rng), c2 = c1 + 0.5 + 2 * U(rng), c3 = c2 + 0.5 + U(rng);
    std::vector<double> v(kGrid.points());
    for (auto& x : v) x = n(rng);
    const Field u(kGrid, Exponent(2 + k % 3), 0.0, v);
    const std::vector<ProfileTerm> sols{{c1, -30.0, 1}, {c2, 0.0, 1}, {c3, 25.0, 1}};
    const auto F = weinstein_F(u, sols, Partition(0.7, {-15.0, 12.0}), 0.1 * c1, 1.0);
    EXPECT_LE(F.relative_gap(), 1e-10);
  }
}

TEST(Weinstein, SingleSolitonTelescopes) {
  const Field u = sample_soliton({2.0, 0.0, 1}, Exponent(3), kGrid);
  const std::vector<ProfileTerm> one{{2.0, 0.0, 1}};
  const double kappa = 0.2;
  const auto F = weinstein_F(u, one, Partition(1.0, {}), kappa);
  const Partition part(1.0, {});
  const double expected =
      localized_energy(u, part, 1, kappa, 2.0) / 4.0 + (0.5 - kappa / 2.0) * localized_mass(u, part, 1) / 2.0;
  EXPECT_NEAR(F.abel, expected, 1e-12);
}

TEST(Coercivity, SampleIsDeterministicAndOrthogonal) {
  const std::vector<ProfileTerm> sols{{1.0, -20.0, 1}, {4.0, 20.0, 1}};
  const Partition part(1.0, {0.0});
  CoercivityOptions o;
  o.samples = 20;
  const auto a = coercivity_sample(kGrid, Exponent(2), sols, part, o);
  const auto b = coercivity_sample(kGrid, Exponent(2), sols, part, o);
  ASSERT_EQ(a.samples.size(), 20u);
  for (std::size_t k = 0; k < 20; ++k) {
    EXPECT_EQ(a.samples[k].h, b.samples[k].h);
    EXPECT_NEAR(a.samples[k].norm2, 1e-4, 1e-12);
  }
  EXPECT_GT(a.lambda_quadratic, 0.0);
  if (a.lambda0)
    for (const auto& s : a.samples) EXPECT_LE(s.norm2, (*a.lambda0 * s.h + s.overlap2 / *a.lambda0) * (1 + 1e-9));
}

TEST(DecayFit, ExactExponential) {
  std::vector<TimeValue> s;
  for (int k = 0; k < 10; ++k) s.push_back({0.5 * k, 5.0 * std::exp(-2.0 * 0.5 * k)});
  const auto f = fit_exponential_decay(s, 0.0);
  EXPECT_NEAR(f.rate, 2.0, 1e-12);
  EXPECT_NEAR(f.amplitude, 5.0, 1e-10);
  EXPECT_LT(f.residual, 1e-12);
}

TEST(DecayFit, ConstantAndErrors) {
  std::vector<TimeValue> s;
  for (int k = 0; k < 10; ++k) s.push_back({double(k), 3.0});
  EXPECT_NEAR(fit_exponential_decay(s).rate, 0.0, 1e-14);
  s[4].value = 0.0;
  EXPECT_THROW(fit_exponential_decay(s), NonPositiveValueError);
  s.resize(5);
  EXPECT_THROW(fit_exponential_decay(s), ParameterError);
}

TEST(SpatialDecay, RecoversSqrtC) {
  const double centers[] = {0.0};
  for (double c : {1.0, 4.0}) {
    const Field q = sample_soliton({c, 0.0, 1}, Exponent(2), kGrid);
    EXPECT_NEAR(fit_spatial_decay(q, 0, centers, Side::Right).rate, std::sqrt(c), 1e-3 * std::sqrt(c));
    EXPECT_NEAR(fit_spatial_decay(q, 1, centers, Side::Left).rate, std::sqrt(c), 2e-3 * std::sqrt(c));
  }
}

TEST(SpatialDecay, NoiseFloorIsRejected) {
  std::mt19937_64 rng(5);
  std::normal_distribution<double> n;
  const Field q = sample_soliton({1.0, 0.0, 1}, Exponent(2), kGrid);
  std::vector<double> v(q.values().begin(), q.values().end());
  for (auto& x : v) x += 1e-3 * n(rng);
  const double centers[] = {0.0};
  EXPECT_THROW(fit_spatial_decay(q.with_values(v), 0, centers, Side::Right), SpectralTailError);
}
