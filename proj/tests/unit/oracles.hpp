#pragma once

// Reference values computed along routes that share no code with the
// library: tableau sums for characters, hook-content products for
// dimensions, sine sums for SU(2), and quadrature on the sphere.

#include <cmath>
#include <complex>
#include <cstdint>
#include <functional>
#include <numbers>
#include <span>
#include <vector>

#include <boost/math/quadrature/gauss.hpp>
#include <boost/multiprecision/cpp_int.hpp>

namespace oracle {

using boost::multiprecision::cpp_int;
using boost::multiprecision::cpp_rational;

/// Partition (row lengths) from Dynkin labels: row i = a_i + ... + a_{n−1}.
inline std::vector<int> rows_from_dynkin(std::span<const int> a) {
  std::vector<int> rows(a.size(), 0);
  int acc = 0;
  for (std::size_t i = a.size(); i-- > 0;) {
    acc += a[i];
    rows[i] = acc;
  }
  return rows;
}

/// Schur polynomial s_λ(x₁..x_n) by enumerating semistandard Young tableaux.
inline std::complex<double> schur(const std::vector<int>& rows, const std::vector<std::complex<double>>& x) {
  const int n = static_cast<int>(x.size());
  std::vector<std::pair<int, int>> cells;
  for (int r = 0; r < static_cast<int>(rows.size()); ++r)
    for (int c = 0; c < rows[r]; ++c) cells.emplace_back(r, c);
  std::vector<std::vector<int>> t(rows.size());
  for (std::size_t r = 0; r < rows.size(); ++r) t[r].assign(rows[r], 0);
  std::complex<double> total = 0.0;
  std::function<void(std::size_t, std::complex<double>)> fill = [&](std::size_t idx, std::complex<double> w) {
    if (idx == cells.size()) {
      total += w;
      return;
    }
    const auto [r, c] = cells[idx];
    int lo = 1;
    if (c > 0) lo = std::max(lo, t[r][c - 1]);       // rows weakly increase
    if (r > 0) lo = std::max(lo, t[r - 1][c] + 1);   // columns strictly increase
    for (int v = lo; v <= n; ++v) {
      t[r][c] = v;
      fill(idx + 1, w * x[v - 1]);
    }
  };
  fill(0, 1.0);
  return total;
}

/// dim of the SU(n) irrep with the given rows: Π (n + content)/hook.
inline cpp_int hook_content_dim(const std::vector<int>& rows, int n) {
  cpp_rational acc = 1;
  std::vector<int> cols;
  for (int r = 0; r < static_cast<int>(rows.size()); ++r) {
    for (int c = 0; c < rows[r]; ++c) {
      int below = 0;
      for (int rr = r + 1; rr < static_cast<int>(rows.size()); ++rr)
        if (rows[rr] > c) ++below;
      const int hook = (rows[r] - c - 1) + below + 1;
      acc *= cpp_rational(n + c - r, hook);
    }
  }
  return boost::multiprecision::numerator(acc);
}

/// √(2/(k+2))·sin(π(a+1)(b+1)/(k+2))
inline double su2_s(int a, int b, int k) {
  const double N = k + 2;
  return std::sqrt(2.0 / N) * std::sin(std::numbers::pi * (a + 1) * (b + 1) / N);
}

/// Closed genus-g SU(2) Verlinde number as a long-double sine sum.
inline long double su2_verlinde(int k, int g) {
  const long double N = k + 2;
  long double acc = 0;
  for (int j = 1; j <= k + 1; ++j) {
    const long double s = std::sin(std::numbers::pi_v<long double> * j / N);
    acc += std::pow(N / 2, static_cast<long double>(g - 1)) * std::pow(s, static_cast<long double>(2 - 2 * g));
  }
  return acc;
}

inline cpp_int su2_genus2_dim(int k) {
  const cpp_int N = k + 2;
  return N * (N * N - 1) / 6;
}

/// ∫ f dσ over the unit sphere normalized to mass 1, f(θ, φ); 48-point
/// Gauss–Legendre in θ and the trapezoid rule in φ (exact for trigonometric
/// polynomials of degree < phi_points).
inline std::complex<double> sphere_integral(const std::function<std::complex<double>(double, double)>& f,
                                            int phi_points = 64) {
  auto ring = [&](double theta) {
    std::complex<double> acc = 0.0;
    for (int j = 0; j < phi_points; ++j) acc += f(theta, 2.0 * std::numbers::pi * j / phi_points);
    return acc * std::sin(theta) / static_cast<double>(phi_points);
  };
  using boost::math::quadrature::gauss;
  const double re = gauss<double, 48>::integrate([&](double t) { return ring(t).real(); }, 0.0, std::numbers::pi);
  const double im = gauss<double, 48>::integrate([&](double t) { return ring(t).imag(); }, 0.0, std::numbers::pi);
  return {re / 2.0, im / 2.0};
}

/// ⟨z^i, f·z^j⟩ on degree-k sections by sphere quadrature, z = tan(θ/2)e^{iφ},
/// pointwise weight cos^{2k}(θ/2).
inline std::complex<double> bergman_element(const std::function<double(double, double, double)>& f, int k, int i,
                                            int j) {
  return sphere_integral(
      [&](double theta, double phi) {
        const double r = std::tan(theta / 2.0);
        const double c = std::cos(theta / 2.0);
        const double x1 = std::sin(theta) * std::cos(phi);
        const double x2 = std::sin(theta) * std::sin(phi);
        const double x3 = std::cos(theta);
        return std::polar(std::pow(r, i + j) * std::pow(c, 2 * k), (j - i) * phi) * f(x1, x2, x3);
      },
      std::max(64, 2 * (k + 8)));
}

/// j!(k−j)!/(k+1)! from factorials.
inline cpp_rational bergman_norm(int k, int j) {
  cpp_int a = 1, b = 1, c = 1;
  for (int t = 2; t <= j; ++t) a *= t;
  for (int t = 2; t <= k - j; ++t) b *= t;
  for (int t = 2; t <= k + 1; ++t) c *= t;
  return cpp_rational(a * b, c);
}

}  // namespace oracle
