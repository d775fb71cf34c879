#pragma once

// Curve operators of labeled multicurves carried by a fixed cut system.
// In the decomposition along the cut every such operator is diagonal:
// on the block of a labeling μ it acts by Π_i S_{λ_i,μ_i}/S_{0,μ_i}.

#include <algorithm>
#include <complex>
#include <cstdint>
#include <map>
#include <memory>
#include <set>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "tqft/cut_system.hpp"
#include "tqft/error.hpp"
#include "tqft/lie_data.hpp"
#include "tqft/parallel.hpp"
#include "tqft/s_matrix.hpp"
#include "tqft/summation.hpp"
#include "tqft/verlinde.hpp"

namespace tqft {

struct LabeledMulticurve {
  std::vector<std::string> support;
  std::map<std::string, DominantWeight> labels;
  std::map<std::string, Side> orientations;  // missing entries read as '+'

  bool empty() const noexcept { return support.empty(); }

  Side orientation(const std::string& curve) const {
    const auto it = orientations.find(curve);
    return it == orientations.end() ? Side::plus : it->second;
  }

  /// Label as seen by the curve operator: the dual when oriented '−'.
  DominantWeight effective_label(const std::string& curve) const {
    const auto& w = labels.at(curve);
    return orientation(curve) == Side::plus ? w : dual(w);
  }

  bool operator==(const LabeledMulticurve&) const = default;
};

inline void validate_multicurve(const CutSystem& cut, const LabeledMulticurve& mc) {
  std::set<std::string> seen;
  for (const auto& c : mc.support) {
    if (!cut.find_curve(c)) fail(ErrorKind::invalid_input, "multicurve uses curve '" + c + "' not in the cut system");
    if (!seen.insert(c).second) fail(ErrorKind::invalid_input, "curve '" + c + "' repeated in the support");
    const auto it = mc.labels.find(c);
    if (it == mc.labels.end()) fail(ErrorKind::invalid_input, "curve '" + c + "' has no label");
    if (it->second.n() != cut.n) fail(ErrorKind::invalid_input, "label of '" + c + "' has the wrong rank");
  }
}

/// Single curve with one label.
inline LabeledMulticurve single_curve(const std::string& curve, DominantWeight label, Side orientation = Side::plus) {
  LabeledMulticurve mc;
  mc.support = {curve};
  mc.labels.emplace(curve, std::move(label));
  mc.orientations.emplace(curve, orientation);
  return mc;
}

/// Union of two multicurves with disjoint supports.
inline LabeledMulticurve disjoint_union(const LabeledMulticurve& a, const LabeledMulticurve& b) {
  LabeledMulticurve out = a;
  for (const auto& c : b.support) {
    if (std::find(a.support.begin(), a.support.end(), c) != a.support.end()) {
      fail(ErrorKind::invalid_input, "supports are not disjoint (curve '" + c + "')");
    }
    out.support.push_back(c);
    out.labels.insert_or_assign(c, b.labels.at(c));
    out.orientations.insert_or_assign(c, b.orientation(c));
  }
  return out;
}

struct Block {
  std::vector<DominantWeight> labeling;
  std::complex<double> eigenvalue;
  std::int64_t dim = 0;
};

/// Z^(k)(γ,λ) in block form. Zero-dimensional blocks are kept so that
/// all operators on one cut system align index by index.
class DiagonalCurveOperator {
 public:
  DiagonalCurveOperator(std::shared_ptr<const BlockTable> table, std::vector<std::complex<double>> eigenvalues)
      : table_(std::move(table)), eigenvalues_(std::move(eigenvalues)) {}

  int k() const noexcept { return table_->k(); }
  const CutSystem& cut() const noexcept { return table_->cut(); }
  const BlockTable& table() const noexcept { return *table_; }
  std::shared_ptr<const BlockTable> shared_table() const noexcept { return table_; }
  std::size_t block_count() const noexcept { return eigenvalues_.size(); }
  std::complex<double> eigenvalue(std::size_t block) const { return eigenvalues_[block]; }
  std::span<const std::complex<double>> eigenvalues() const noexcept { return eigenvalues_; }
  std::int64_t dim(std::size_t block) const { return table_->dim(block); }
  std::int64_t total_dim() const noexcept { return table_->total_dim(); }

  Block block(std::size_t i) const { return {table_->labeling(i), eigenvalues_[i], table_->dim(i)}; }

 private:
  std::shared_ptr<const BlockTable> table_;
  std::vector<std::complex<double>> eigenvalues_;
};

/// Eigenvalues over an existing block table (shared between operators).
inline DiagonalCurveOperator curve_operator(std::shared_ptr<const BlockTable> table, const LabeledMulticurve& mc,
                                            const ComputeOptions& options = {}) {
  const CutSystem& cut = table->cut();
  const int k = table->k();
  validate_multicurve(cut, mc);
  const auto labels = table->labels();

  // s_ratio tables per supported curve, indexed by the block label of that curve.
  std::vector<std::size_t> curve_of;
  std::vector<std::vector<std::complex<double>>> ratios;
  for (const auto& c : mc.support) {
    const DominantWeight lambda = mc.effective_label(c);
    require_label(lambda, k);
    curve_of.push_back(cut.curve_index(c));
    std::vector<std::complex<double>> r(labels.size());
    parallel_for(labels.size(), options.threads, [&](std::size_t i) { r[i] = s_ratio(lambda, labels[i], k).value; });
    ratios.push_back(std::move(r));
  }

  const std::size_t L = labels.size();
  const std::size_t curves = cut.curves.size();
  std::vector<std::complex<double>> eig(table->size(), {1.0, 0.0});
  if (!ratios.empty()) {
    parallel_for(table->size(), options.threads, [&](std::size_t b) {
      std::vector<std::size_t> idx(curves);
      std::size_t rest = b;
      for (std::size_t c = curves; c-- > 0;) {
        idx[c] = rest % L;
        rest /= L;
      }
      std::complex<double> value(1.0, 0.0);
      for (std::size_t j = 0; j < ratios.size(); ++j) value *= ratios[j][idx[curve_of[j]]];
      eig[b] = value;
    });
  }
  return DiagonalCurveOperator(std::move(table), std::move(eig));
}

inline DiagonalCurveOperator curve_operator(const CutSystem& cut, const LabeledMulticurve& mc, int k,
                                            const ComputeOptions& options = {},
                                            DualConvention convention = DualConvention::minus_side_dual) {
  validate_multicurve(cut, mc);
  auto table = std::make_shared<const BlockTable>(block_table(cut, k, options, convention));
  return curve_operator(std::move(table), mc, options);
}

inline void require_compatible(const DiagonalCurveOperator& a, const DiagonalCurveOperator& b) {
  if (a.shared_table() == b.shared_table()) return;
  if (a.k() != b.k() || !(a.cut() == b.cut()) || a.table().convention() != b.table().convention() ||
      a.block_count() != b.block_count()) {
    fail(ErrorKind::invalid_input, "operators live on different cut systems or levels");
  }
}

/// ⟨A,B⟩ = Tr(A B*) = Σ_μ eig_A(μ)·conj(eig_B(μ))·dim(μ), reduced in a
/// fixed pairwise tree.
inline std::complex<double> hs_inner(const DiagonalCurveOperator& a, const DiagonalCurveOperator& b) {
  require_compatible(a, b);
  std::vector<std::complex<double>> terms(a.block_count());
  for (std::size_t i = 0; i < terms.size(); ++i) {
    terms[i] = a.eigenvalue(i) * std::conj(b.eigenvalue(i)) * static_cast<double>(a.dim(i));
  }
  return pairwise_sum(terms);
}

inline double operator_norm(const DiagonalCurveOperator& a) {
  double best = -1.0;
  for (std::size_t i = 0; i < a.block_count(); ++i) {
    if (a.dim(i) > 0) best = std::max(best, std::abs(a.eigenvalue(i)));
  }
  if (best < 0.0) fail(ErrorKind::degenerate_space, "every block is zero-dimensional");
  return best;
}

inline Eigen::MatrixXcd hs_gram(std::span<const DiagonalCurveOperator> ops) {
  const auto size = static_cast<Eigen::Index>(ops.size());
  Eigen::MatrixXcd gram(size, size);
  for (Eigen::Index i = 0; i < size; ++i)
    for (Eigen::Index j = 0; j < size; ++j) gram(i, j) = hs_inner(ops[i], ops[j]);
  return gram;
}

}  // namespace tqft
