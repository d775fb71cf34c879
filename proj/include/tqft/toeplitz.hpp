#pragma once

// Berezin–Toeplitz operators on the sphere. Holomorphic sections of the
// degree-k line bundle are polynomials of degree ≤ k in the affine
// coordinate z, with pointwise norm |s|²/(1+|z|²)^k and the unit-mass area
// form dA/(π(1+|z|²)²). Monomials z^j are orthogonal with
//   ‖z^j‖² = j!(k−j)!/(k+1)!.
// Stereographic coordinates: x1 + i·x2 = 2z/(1+|z|²), x3 = (1−|z|²)/(1+|z|²).

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "tqft/error.hpp"
#include "tqft/observable.hpp"
#include "tqft/summation.hpp"

namespace tqft::toeplitz {

struct BergmanBasis {
  int k = 0;
  std::vector<BigRational> norms;  // ‖z^j‖², j = 0..k

  std::size_t dim() const noexcept { return norms.size(); }
};

inline BergmanBasis bergman_basis(int k) {
  if (k < 0) fail(ErrorKind::invalid_input, "degree must be nonnegative");
  BergmanBasis basis{k, {}};
  basis.norms.reserve(static_cast<std::size_t>(k) + 1);
  BigRational norm(1, k + 1);
  for (int j = 0; j <= k; ++j) {
    basis.norms.push_back(norm);
    if (j < k) norm = norm * BigRational(j + 1, k - j);
  }
  return basis;
}

struct ToeplitzMatrix {
  int k = 0;
  Eigen::MatrixXcd entries;  // ⟨ŝ_i, f·ŝ_j⟩ in the orthonormal monomial basis
};

namespace detail {

/// hi!/lo! for hi ≥ lo.
inline BigInt falling(int hi, int lo) {
  BigInt r = 1;
  for (int t = lo + 1; t <= hi; ++t) r *= t;
  return r;
}

inline BigInt binom(int n, int r) { return falling(n, n - r) / falling(r, 0); }

struct GaussianRational {
  BigRational re = 0;
  BigRational im = 0;
};

/// ⟨z^i, f·z^j⟩/‖z^i‖² for every (i, j) in the band |i − j| ≤ deg f, exact.
/// Row-major over j with offset i − j + deg.
inline std::vector<GaussianRational> raw_elements(const Observable& f, int k, int& band) {
  band = f.degree();
  const int width = 2 * band + 1;
  std::vector<GaussianRational> out(static_cast<std::size_t>(k + 1) * width);
  for (const auto& [e, coeff] : f.terms()) {
    const int a = e[0], b = e[1], c = e[2];
    const int deg = a + b + c;
    // x1^a x2^b = (1+u)^{−(a+b)}·(−i)^b·Σ C(a,s)C(b,t)(−1)^{b−t} z^{s+t} z̄^{a+b−s−t}
    std::vector<BigRational> by_p(static_cast<std::size_t>(a + b) + 1, BigRational(0));
    for (int s = 0; s <= a; ++s) {
      for (int t = 0; t <= b; ++t) {
        BigRational w = BigRational(binom(a, s) * binom(b, t));
        if ((b - t) % 2) w = -w;
        by_p[s + t] += w;
      }
    }
    // (−i)^b
    const int quarter = b % 4;
    for (int p = 0; p <= a + b; ++p) {
      if (by_p[p] == 0) continue;
      const int q = a + b - p;
      for (int j = 0; j <= k; ++j) {
        const int i = j + p - q;
        if (i < 0 || i > k) continue;
        // ∫ u^{j+p}(1−u)^c (1+u)^{−(deg+k+2)} du / ‖z^i‖²
        BigRational integral = 0;
        for (int r = 0; r <= c; ++r) {
          const int s = j + p + r;  // power of u
          BigRational term(falling(s, i) * falling(deg + k - s, k - i), falling(deg + k + 1, k + 1));
          term *= BigRational(binom(c, r));
          if (r % 2) term = -term;
          integral += term;
        }
        const BigRational value = coeff * by_p[p] * integral;
        auto& slot = out[static_cast<std::size_t>(j) * width + (i - j + band)];
        switch (quarter) {
          case 0: slot.re += value; break;
          case 1: slot.im -= value; break;
          case 2: slot.re -= value; break;
          default: slot.im += value; break;
        }
      }
    }
  }
  return out;
}

}  // namespace detail

/// Matrix of T_f^(k) = π_k ∘ M_f. Elements are exact rationals times
/// √(‖z^i‖²/‖z^j‖²), rounded to double only at the end.
inline ToeplitzMatrix toeplitz_matrix(const Observable& f, int k) {
  if (k < 1) fail(ErrorKind::invalid_input, "degree k must be at least 1");
  int band = 0;
  const auto raw = detail::raw_elements(f, k, band);
  const auto basis = bergman_basis(k);
  const int width = 2 * band + 1;
  ToeplitzMatrix t{k, Eigen::MatrixXcd::Zero(k + 1, k + 1)};
  for (int j = 0; j <= k; ++j) {
    for (int off = -band; off <= band; ++off) {
      const int i = j + off;
      if (i < 0 || i > k) continue;
      const auto& g = raw[static_cast<std::size_t>(j) * width + (off + band)];
      if (g.re == 0 && g.im == 0) continue;
      const double scale = std::sqrt(static_cast<double>(BigRational(basis.norms[i] / basis.norms[j])));
      t.entries(i, j) = std::complex<double>(static_cast<double>(g.re), static_cast<double>(g.im)) * scale;
    }
  }
  return t;
}

/// Tr T_f^(k), exact.
inline BigRational toeplitz_trace_exact(const Observable& f, int k) {
  int band = 0;
  const auto raw = detail::raw_elements(f, k, band);
  const int width = 2 * band + 1;
  BigRational tr = 0;
  for (int j = 0; j <= k; ++j) tr += raw[static_cast<std::size_t>(j) * width + band].re;
  return tr;
}

inline bool is_hermitian(const Eigen::MatrixXcd& a, double tol = 1e-12) {
  return (a - a.adjoint()).cwiseAbs().maxCoeff() <= tol * std::max(1.0, a.cwiseAbs().maxCoeff());
}

struct NormResult {
  double value = 0.0;
  int iterations = 0;
  bool power_iteration_converged = true;  // false when the SVD fallback was used
};

/// Operator (spectral) norm: symmetric eigensolver for Hermitian input,
/// otherwise power iteration on A†A (tolerance 1e−10, cap 10·dim), with an
/// SVD fallback when the cap is reached.
inline NormResult spectral_norm(const Eigen::MatrixXcd& a) {
  if (a.size() == 0) return {};
  if (is_hermitian(a)) {
    const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(a, Eigen::EigenvaluesOnly);
    return {solver.eigenvalues().cwiseAbs().maxCoeff(), 0, true};
  }
  const Eigen::MatrixXcd gram = a.adjoint() * a;
  const auto dim = gram.rows();
  Eigen::VectorXcd v(dim);
  for (Eigen::Index i = 0; i < dim; ++i) v(i) = 1.0 + 0.1 * std::sin(static_cast<double>(i) + 1.0);
  v.normalize();
  double lambda = 0.0;
  const int cap = 10 * static_cast<int>(dim);
  for (int it = 1; it <= cap; ++it) {
    Eigen::VectorXcd w = gram * v;
    const double next = w.norm();
    if (next == 0.0) return {0.0, it, true};
    v = w / next;
    if (std::abs(next - lambda) <= 1e-10 * next) return {std::sqrt(next), it, true};
    lambda = next;
  }
  const Eigen::JacobiSVD<Eigen::MatrixXcd> svd(a);
  return {svd.singularValues()(0), cap, false};
}

inline double operator_norm(const ToeplitzMatrix& t) { return spectral_norm(t.entries).value; }

/// Tr(A·B†) with compensated summation.
inline std::complex<double> hs_trace(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b) {
  CompensatedComplexSum acc;
  for (Eigen::Index j = 0; j < a.cols(); ++j)
    for (Eigen::Index i = 0; i < a.rows(); ++i) acc.add(a(i, j) * std::conj(b(i, j)));
  return acc.value();
}

// ---------------------------------------------------------------------------
// Convergence checks on the model

/// Passes when k·|err| does not grow along the tail (the last half of the
/// rows stays within twice the median) and the error has not increased.
inline bool one_over_k_behaviour(std::span<const int> ks, std::span<const double> errors) {
  if (ks.empty()) return true;
  std::vector<double> scaled(ks.size());
  for (std::size_t i = 0; i < ks.size(); ++i) scaled[i] = ks[i] * std::abs(errors[i]);
  std::vector<double> sorted = scaled;
  std::sort(sorted.begin(), sorted.end());
  const double median = sorted.size() % 2 ? sorted[sorted.size() / 2]
                                          : 0.5 * (sorted[sorted.size() / 2 - 1] + sorted[sorted.size() / 2]);
  for (std::size_t i = scaled.size() / 2; i < scaled.size(); ++i) {
    if (scaled[i] > 2.0 * median + 1e-12) return false;
  }
  return std::abs(errors.back()) <= std::abs(errors.front()) + 1e-12;
}

struct Bms1Row {
  int k;
  double norm;
  double gap;  // sup|f| − ‖T_f‖
};

struct Bms1Report {
  double sup = 0.0;
  std::vector<Bms1Row> rows;
  bool passed = false;
};

/// ‖T_f^(k)‖ → sup|f|.
inline Bms1Report bms1_check(const Observable& f, std::span<const int> k_list) {
  Bms1Report report;
  report.sup = sup_norm(f);
  bool ok = true;
  for (int k : k_list) {
    const double norm = operator_norm(toeplitz_matrix(f, k));
    report.rows.push_back({k, norm, report.sup - norm});
    if (report.sup - norm < -1e-9) ok = false;
  }
  if (!report.rows.empty() && k_list.back() >= 8 * k_list.front()) {
    const double first = report.rows.front().gap;
    const double last = report.rows.back().gap;
    const bool vanishing = std::abs(first) <= 1e-12 && std::abs(last) <= 1e-12;
    if (!vanishing && !(last < first / 4.0)) ok = false;
  }
  report.passed = ok;
  return report;
}

struct Bms2Row {
  int k;
  double defect;  // ‖T_f T_g − T_{fg}‖
  double scaled;  // k·defect
};

struct Bms2Report {
  std::vector<Bms2Row> rows;
  bool passed = false;
};

/// ‖T_f T_g − T_{fg}‖ = O(1/k): k·defect stays bounded (tail max ≤ 2× median).
inline Bms2Report bms2_check(const Observable& f, const Observable& g, std::span<const int> k_list) {
  Bms2Report report;
  const Observable fg = f * g;
  std::vector<double> scaled;
  for (int k : k_list) {
    const auto tf = toeplitz_matrix(f, k);
    const auto tg = toeplitz_matrix(g, k);
    const auto tfg = toeplitz_matrix(fg, k);
    const Eigen::MatrixXcd defect = tf.entries * tg.entries - tfg.entries;
    const double d = spectral_norm(defect).value;
    report.rows.push_back({k, d, k * d});
    scaled.push_back(k * d);
  }
  std::vector<double> sorted = scaled;
  std::sort(sorted.begin(), sorted.end());
  const double median = sorted.empty() ? 0.0
                        : sorted.size() % 2 ? sorted[sorted.size() / 2]
                                            : 0.5 * (sorted[sorted.size() / 2 - 1] + sorted[sorted.size() / 2]);
  bool ok = true;
  for (std::size_t i = scaled.size() / 2; i < scaled.size(); ++i) {
    if (scaled[i] > 2.0 * median + 1e-12) ok = false;
  }
  report.passed = ok;
  return report;
}

struct TraceRow {
  int k;
  double value;   // k^{-1}·(trace quantity)
  double target;  // exact limit
  double error;
};

struct TraceReport {
  double target = 0.0;
  double constant = 0.0;  // measured C = max k·|error|
  std::vector<TraceRow> rows;
  bool passed = false;
};

namespace detail {
inline void finish(TraceReport& report) {
  std::vector<int> ks;
  std::vector<double> errs;
  for (const auto& r : report.rows) {
    ks.push_back(r.k);
    errs.push_back(r.error);
    report.constant = std::max(report.constant, r.k * std::abs(r.error));
  }
  report.passed = one_over_k_behaviour(ks, errs);
}
}  // namespace detail

/// k^{−1}·Tr T_f^(k) → ∫ f (unit-mass sphere); trace taken exactly.
inline TraceReport bms3_check(const Observable& f, std::span<const int> k_list) {
  TraceReport report;
  const BigRational exact = sphere_average(f);
  report.target = static_cast<double>(exact);
  for (int k : k_list) {
    const BigRational scaled = toeplitz_trace_exact(f, k) / BigRational(k);
    report.rows.push_back({k, static_cast<double>(scaled), report.target, static_cast<double>(BigRational(scaled - exact))});
  }
  detail::finish(report);
  return report;
}

/// k^{−1}·Tr(T_f (T_g)†) → ⟨f,g⟩.
inline TraceReport hs_limit_check(const Observable& f, const Observable& g, std::span<const int> k_list) {
  TraceReport report;
  report.target = static_cast<double>(l2_pairing(f, g));
  for (int k : k_list) {
    const auto tf = toeplitz_matrix(f, k);
    const auto tg = toeplitz_matrix(g, k);
    const double value = hs_trace(tf.entries, tg.entries).real() / k;
    report.rows.push_back({k, value, report.target, value - report.target});
  }
  detail::finish(report);
  return report;
}

}  // namespace tqft::toeplitz
