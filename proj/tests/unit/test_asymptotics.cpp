#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "tqft/asymptotics.hpp"

using namespace tqft;

namespace {

DominantWeight W(std::vector<int> c) { return DominantWeight(std::move(c)); }

ScaledSequence synthetic(const std::vector<int>& ks, double (*f)(double)) {
  ScaledSequence seq;
  for (int k : ks) seq.points.push_back({k, std::nullopt, 0.0, f(static_cast<double>(k))});
  return seq;
}

ErrorKind kind_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  ADD_FAILURE() << "no error raised";
  return ErrorKind::invalid_input;
}

}  // namespace

TEST(Asymptotics, ScalingExponent) {
  EXPECT_EQ(scaling_exponent(2, 2), 3);
  EXPECT_EQ(scaling_exponent(3, 2), 8);
  EXPECT_EQ(scaling_exponent(2, 3), 6);
  EXPECT_EQ(scaling_exponent(4, 3), 30);
}

TEST(Asymptotics, RichardsonIsExactOnPolynomialsInOneOverK) {
  const auto lin = richardson_extrapolate(synthetic({10, 20, 40}, [](double k) { return 3.0 + 5.0 / k; }), 1);
  EXPECT_NEAR(lin.value.real(), 3.0, 1e-13);
  EXPECT_LT(lin.error_bound, 1e-12);
  EXPECT_TRUE(lin.converged);
  const auto quad =
      richardson_extrapolate(synthetic({8, 16, 24, 32}, [](double k) { return -1.0 + 2.0 / k + 7.0 / (k * k); }), 2);
  EXPECT_NEAR(quad.value.real(), -1.0, 1e-12);
  const auto flat = richardson_extrapolate(synthetic({1, 2, 3}, [](double) { return 0.25; }), 0);
  EXPECT_EQ(flat.value, std::complex<double>(0.25, 0.0));
  EXPECT_EQ(flat.error_bound, 0.0);
}

TEST(Asymptotics, RichardsonErrors) {
  const auto seq = synthetic({10, 20, 30}, [](double k) { return 1.0 / k; });
  EXPECT_EQ(kind_of([&] { richardson_extrapolate(seq, 5); }), ErrorKind::invalid_input);
  EXPECT_EQ(kind_of([&] { richardson_extrapolate(seq, -1); }), ErrorKind::invalid_input);
  const auto dup = synthetic({10, 10, 30}, [](double k) { return 1.0 / k; });
  EXPECT_EQ(kind_of([&] { richardson_extrapolate(dup, 1); }), ErrorKind::invalid_input);
}

TEST(Asymptotics, ScaledDimensionTendsToOneSixth) {
  // identity pairing on SU(2), genus 2: k^-3·dim Z = (k+2)((k+2)²−1)/(6k³)
  const std::vector<int> ks{32, 48, 64, 96, 128, 192, 256};
  const auto seq = scaled_hs_sequence(nonseparating_cut(2, 2), {}, {}, ks);
  EXPECT_EQ(seq.m, 3);
  EXPECT_EQ(seq.scaling, "k^-3");
  for (const auto& pt : seq.points) {
    const double N = pt.k + 2.0;
    EXPECT_NEAR(pt.raw.real(), N * (N * N - 1) / 6.0, 1e-6);
  }
  const auto est = richardson_extrapolate(seq, 2);
  EXPECT_NEAR(est.value.real(), 1.0 / 6.0, 1e-6);
}

TEST(Asymptotics, CurvePairingLimitMatchesIntegral) {
  // ⟨Z(γ,1),Z(γ,1)⟩ for SU(2) genus 2: Σ_m 4cos²(π(m+1)/(k+2))·(m+1)(k+1−m);
  // scaled by k^-3 its limit is ∫₀¹ 4cos²(πx)·x(1−x) dx = 1/3 − 1/π²
  const std::vector<int> ks{125, 250, 500, 1000, 2000};
  const auto mc = single_curve("c1", W({1}));
  const auto seq = scaled_hs_sequence(nonseparating_cut(2, 2), mc, mc, ks);
  const auto est = richardson_extrapolate(seq, 2);
  const double exact = 1.0 / 3.0 - 1.0 / (std::numbers::pi * std::numbers::pi);
  EXPECT_NEAR(est.value.real(), exact, 1e-7);
  EXPECT_LT(est.error_bound, 1e-6);
}

TEST(Asymptotics, MnSequenceAgreesWithLevelSequence) {
  const auto cut = nonseparating_cut(2, 2);
  const auto mc = single_curve("c1", W({1}));
  std::vector<int> ks{100, 200, 400, 800}, ps;
  for (int k : ks) ps.push_back(2 * k + 4);
  const auto a = richardson_extrapolate(scaled_hs_sequence(cut, mc, mc, ks), 2);
  const auto mn = mn_scaled_sequence(cut, mc, mc, ps);
  EXPECT_EQ(mn.m, 3);
  for (std::size_t i = 0; i < mn.points.size(); ++i) {
    EXPECT_EQ(mn.points[i].k, ks[i]);
    EXPECT_EQ(*mn.points[i].p, ps[i]);
  }
  const auto b = richardson_extrapolate(mn, 2);
  EXPECT_NEAR(std::abs(a.value - b.value), 0.0, 1e-6);
  EXPECT_TRUE(limits_agree(a, b) || std::abs(a.value - b.value) < 1e-7);
}

TEST(Asymptotics, MnScopeErrors) {
  const auto cut = nonseparating_cut(2, 2);
  const auto mc = single_curve("c1", W({1}));
  const std::vector<int> odd{7, 10};
  EXPECT_EQ(kind_of([&] { mn_scaled_sequence(cut, mc, mc, odd); }), ErrorKind::out_of_scope);
  const auto big = single_curve("c1", W({2}));
  const std::vector<int> ps{10, 20};
  EXPECT_EQ(kind_of([&] { mn_scaled_sequence(cut, big, big, ps); }), ErrorKind::out_of_scope);
  const auto su3 = single_curve("c1", W({1, 0}));
  EXPECT_EQ(kind_of([&] { mn_scaled_sequence(nonseparating_cut(3, 2), su3, su3, ps); }), ErrorKind::out_of_scope);
  const std::vector<int> unsorted{20, 10};
  EXPECT_EQ(kind_of([&] { mn_scaled_sequence(cut, mc, mc, unsorted); }), ErrorKind::invalid_input);
}

TEST(Asymptotics, Su2NormMatchesClosedForm) {
  std::vector<int> ks;
  for (int k = 1; k <= 300; ++k) ks.push_back(k);
  const auto report = norm_limit_check(nonseparating_cut(2, 2), single_curve("c1", W({1})), ks);
  ASSERT_EQ(report.rows.size(), ks.size());
  for (const auto& r : report.rows) {
    EXPECT_NEAR(r.norm, 2.0 * std::cos(std::numbers::pi / (r.k + 2)), 1e-13);
    EXPECT_EQ(r.dim, 2);
  }
  EXPECT_TRUE(report.passed());
}

TEST(Asymptotics, NormOfTrivialLabelIsOne) {
  const std::vector<int> ks{2, 4, 8};
  const auto report = norm_limit_check(nonseparating_cut(3, 2), single_curve("c1", W({0, 0})), ks);
  for (const auto& r : report.rows) EXPECT_NEAR(r.gap, 0.0, 1e-13);
  EXPECT_TRUE(report.passed());
}

TEST(Asymptotics, NormCheckScope) {
  const std::vector<int> ks{4, 8};
  EXPECT_EQ(kind_of([&] { norm_limit_check(nonseparating_cut(3, 2, 1), single_curve("c1", W({1, 0})), ks); }),
            ErrorKind::out_of_scope);
  EXPECT_EQ(kind_of([&] { norm_limit_check(separating_cut(2, 2, 1), single_curve("c1", W({1})), ks); }),
            ErrorKind::invalid_input);
}
