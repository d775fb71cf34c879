#pragma once

// Large-level behaviour of Hilbert–Smith pairings of curve operators:
// k^{−(g−1)(n²−1)}·⟨Z^(k)(γ₁,λ₁), Z^(k)(γ₂,λ₂)⟩ converges to the L²
// pairing of the holonomy functions on the moduli space. The limit is
// estimated from the sequence itself.

#include <cmath>
#include <complex>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "tqft/curve_ops.hpp"
#include "tqft/error.hpp"
#include "tqft/lie_data.hpp"

namespace tqft {

inline int scaling_exponent(int n, int g) { return (g - 1) * (n * n - 1); }

struct SequencePoint {
  int k = 0;
  std::optional<int> p;  // set for sequences indexed by the skein parameter
  std::complex<double> raw;
  std::complex<double> scaled;
};

struct ScaledSequence {
  int m = 0;             // exponent of the scaling
  std::string scaling;   // human-readable scale factor
  std::vector<SequencePoint> points;
  LabeledMulticurve a;
  LabeledMulticurve b;
};

struct LimitEstimate {
  std::complex<double> value;
  double error_bound = 0.0;
  int order_used = 0;
  bool converged = false;
};

inline constexpr double kDefaultLimitTolerance = 1e-4;

namespace detail {
inline void require_increasing(std::span<const int> values, const char* what) {
  if (values.empty()) fail(ErrorKind::invalid_input, std::string(what) + " list is empty");
  for (std::size_t i = 1; i < values.size(); ++i) {
    if (values[i] <= values[i - 1]) fail(ErrorKind::invalid_input, std::string(what) + " list must be strictly increasing");
  }
}
}  // namespace detail

inline ScaledSequence scaled_hs_sequence(const CutSystem& cut, const LabeledMulticurve& a, const LabeledMulticurve& b,
                                         std::span<const int> k_list, const ComputeOptions& options = {}) {
  require_valid(cut);
  detail::require_increasing(k_list, "k");
  ScaledSequence seq;
  seq.m = scaling_exponent(cut.n, cut.g);
  seq.scaling = "k^-" + std::to_string(seq.m);
  seq.a = a;
  seq.b = b;
  for (int k : k_list) {
    if (k <= 0) fail(ErrorKind::invalid_input, "levels must be positive");
    auto table = std::make_shared<const BlockTable>(block_table(cut, k, options));
    const auto op_a = curve_operator(table, a, options);
    const auto raw = (a == b) ? hs_inner(op_a, op_a) : hs_inner(op_a, curve_operator(table, b, options));
    seq.points.push_back({k, std::nullopt, raw, raw / std::pow(static_cast<double>(k), seq.m)});
  }
  return seq;
}

/// Polynomial extrapolation in h = 1/k to h = 0 through windows of
/// order+1 consecutive points. The estimate from the last window is
/// returned; the error bound is its distance to the previous window's.
inline LimitEstimate richardson_extrapolate(const ScaledSequence& seq, int order,
                                            double tolerance = kDefaultLimitTolerance) {
  if (order < 0) fail(ErrorKind::invalid_input, "order must be nonnegative");
  const auto& pts = seq.points;
  if (pts.size() < static_cast<std::size_t>(order) + 2) {
    fail(ErrorKind::invalid_input, "insufficient points for order " + std::to_string(order) + ": need " +
                                       std::to_string(order + 2) + ", have " + std::to_string(pts.size()));
  }
  for (std::size_t i = 0; i < pts.size(); ++i)
    for (std::size_t j = i + 1; j < pts.size(); ++j)
      if (pts[i].k == pts[j].k) fail(ErrorKind::invalid_input, "k values must be distinct");

  auto neville = [&](std::size_t start) {
    const std::size_t w = static_cast<std::size_t>(order) + 1;
    std::vector<std::complex<double>> p(w);
    std::vector<double> h(w);
    for (std::size_t i = 0; i < w; ++i) {
      p[i] = pts[start + i].scaled;
      h[i] = 1.0 / pts[start + i].k;
    }
    for (std::size_t level = 1; level < w; ++level) {
      for (std::size_t i = 0; i + level < w; ++i) {
        // value at h = 0 of the interpolant through points i..i+level
        p[i] = (h[i + level] * p[i] - h[i] * p[i + 1]) / (h[i + level] - h[i]);
      }
    }
    return p[0];
  };

  const std::size_t last = pts.size() - static_cast<std::size_t>(order) - 1;
  LimitEstimate est;
  est.value = neville(last);
  est.error_bound = std::abs(est.value - neville(last - 1));
  est.order_used = order;
  est.converged = est.error_bound < tolerance;
  return est;
}

/// |a − b| within the combined error bounds.
inline bool limits_agree(const LimitEstimate& a, const LimitEstimate& b) {
  return std::abs(a.value - b.value) <= a.error_bound + b.error_bound;
}

/// SU(2) sequence in the skein normalization: 2^{3g−3} p^{−(3g−3)}·⟨V_p(γ₁),V_p(γ₂)⟩
/// with V_p(γ) identified with Z^(k)(γ) at p = 2k+4 (defining labels only).
inline ScaledSequence mn_scaled_sequence(const CutSystem& cut, const LabeledMulticurve& a, const LabeledMulticurve& b,
                                         std::span<const int> p_list, const ComputeOptions& options = {}) {
  require_valid(cut);
  if (cut.n != 2) fail(ErrorKind::out_of_scope, "the skein-normalized sequence exists only for n = 2");
  detail::require_increasing(p_list, "p");
  const DominantWeight defining = center_label(2);
  for (const auto* mc : {&a, &b}) {
    for (const auto& c : mc->support) {
      const auto it = mc->labels.find(c);
      if (it == mc->labels.end() || it->second != defining) {
        fail(ErrorKind::out_of_scope, "every component must carry the defining representation");
      }
    }
  }
  const int e = 3 * cut.g - 3;
  ScaledSequence seq;
  seq.m = e;
  seq.scaling = "2^" + std::to_string(e) + " p^-" + std::to_string(e);
  seq.a = a;
  seq.b = b;
  for (int p : p_list) {
    if (p % 2 != 0) fail(ErrorKind::out_of_scope, "p must be even (p = 2r), got " + std::to_string(p));
    if (p < 4) fail(ErrorKind::out_of_scope, "p must be at least 4");
    const int k = (p - 4) / 2;
    auto table = std::make_shared<const BlockTable>(block_table(cut, k, options));
    const auto op_a = curve_operator(table, a, options);
    const auto raw = (a == b) ? hs_inner(op_a, op_a) : hs_inner(op_a, curve_operator(table, b, options));
    seq.points.push_back({k, p, raw, raw * std::pow(2.0 / p, e)});
  }
  return seq;
}

struct NormRow {
  int k = 0;
  double norm = 0.0;
  std::int64_t dim = 0;
  double gap = 0.0;  // dim λ − ‖Z^(k)(γ,λ)‖
};

struct NormLimitReport {
  std::vector<NormRow> rows;
  bool gap_nonnegative = true;
  bool gap_nonincreasing = true;
  bool gap_within_bound = true;  // gap < 10·dim λ/k for k ≥ 50
  bool passed() const { return gap_nonnegative && gap_nonincreasing && gap_within_bound; }
};

/// ‖Z^(k)(γ,λ)‖ → sup|h_{γ,λ}| = dim λ for a non-separating curve, d = 0.
inline NormLimitReport norm_limit_check(const CutSystem& cut, const LabeledMulticurve& mc, std::span<const int> k_list,
                                        const ComputeOptions& options = {}) {
  require_valid(cut);
  if (cut.d != 0) fail(ErrorKind::out_of_scope, "norm limit is only asserted for d = 0");
  if (mc.support.size() != 1) fail(ErrorKind::invalid_input, "norm check expects a single curve");
  const std::string& curve = mc.support.front();
  validate_multicurve(cut, mc);
  if (is_separating(cut, curve)) fail(ErrorKind::invalid_input, "norm check expects a non-separating curve");
  detail::require_increasing(k_list, "k");

  const auto dim = weyl_dim(mc.labels.at(curve));
  NormLimitReport report;
  for (int k : k_list) {
    const auto op = curve_operator(cut, mc, k, options);
    const double norm = operator_norm(op);
    report.rows.push_back({k, norm, dim, static_cast<double>(dim) - norm});
  }
  for (std::size_t i = 0; i < report.rows.size(); ++i) {
    const auto& r = report.rows[i];
    if (r.gap < -1e-12) report.gap_nonnegative = false;
    if (i > 0 && r.gap > report.rows[i - 1].gap + 1e-12) report.gap_nonincreasing = false;
    if (r.k >= 50 && !(r.gap < 10.0 * static_cast<double>(dim) / r.k)) report.gap_within_bound = false;
  }
  return report;
}

}  // namespace tqft
