#pragma once

// Dimensions of the spaces attached to (cut) surfaces through Verlinde
// sums Σ_ν S_{0ν}^{2−2g−b} Π_j S_{μ_j ν}.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <map>
#include <mutex>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "tqft/cut_system.hpp"
#include "tqft/error.hpp"
#include "tqft/lie_data.hpp"
#include "tqft/parallel.hpp"
#include "tqft/s_matrix.hpp"
#include "tqft/summation.hpp"

namespace tqft {

struct SurfacePiece {
  int genus = 0;
  std::vector<DominantWeight> boundary_labels;
  std::optional<DominantWeight> marked_label;
};

struct VerlindeValue {
  std::int64_t value = 0;
  std::complex<double> raw;  // the sum before rounding
  double residual = 0.0;     // |raw − value|
};

/// Which side of a cut curve receives the dual of its label.
enum class DualConvention { minus_side_dual, plus_side_dual };

inline constexpr double kIntegralityTolerance = 1e-6;

inline VerlindeValue round_verlinde(std::complex<double> raw) {
  const double rounded = std::round(raw.real());
  VerlindeValue v{static_cast<std::int64_t>(rounded), raw, std::abs(raw - rounded)};
  if (v.residual > kIntegralityTolerance * std::max(1.0, std::abs(raw)) || v.value < 0) {
    fail(ErrorKind::numerical_failure,
         "Verlinde sum " + std::to_string(raw.real()) + (raw.imag() < 0 ? "-" : "+") +
             std::to_string(std::abs(raw.imag())) + "i is not a nonnegative integer");
  }
  return v;
}

/// Shared state for many Verlinde sums at one level: the vacuum row and
/// its powers. Safe to use from several threads.
template <SMatrixSource S>
class VerlindeContext {
 public:
  explicit VerlindeContext(const S& s) : s_(s) {
    const auto row = s_.row(DominantWeight::zero(s_.n()));
    vacuum_.reserve(row.size());
    for (const auto& z : row) {
      if (!(z.real() > 0.0)) fail(ErrorKind::numerical_failure, "vacuum row of S is not positive");
      vacuum_.push_back(z.real());
    }
  }

  const S& s_matrix() const noexcept { return s_; }

  /// Σ_ν S_{0ν}^{2−2g−b} Π_j S_{label_j,ν} with b = labels.size().
  VerlindeValue evaluate(int genus, std::span<const DominantWeight> labels) const {
    if (genus < 0) fail(ErrorKind::invalid_input, "genus must be nonnegative");
    for (const auto& w : labels) {
      if (w.n() != s_.n()) fail(ErrorKind::invalid_input, "label rank does not match S-matrix");
      require_label(w, s_.k());
    }
    // A zero label contributes S_{0ν}, already held as the vacuum row.
    const auto zeros = std::count_if(labels.begin(), labels.end(), [](const auto& w) { return w.is_zero(); });
    const int exponent = 2 - 2 * genus - static_cast<int>(labels.size()) + static_cast<int>(zeros);
    const auto& weights = vacuum_power(exponent);

    // Rows for dual pairs share one computation: S_{λ*,ν} = conj(S_{λ,ν}).
    std::vector<DominantWeight> row_labels;
    std::vector<std::vector<std::complex<double>>> rows;
    std::vector<std::pair<std::size_t, bool>> factors;  // (row, conjugate)
    for (const auto& w : labels) {
      if (w.is_zero()) continue;
      const DominantWeight canon = std::min(w, dual(w));
      auto it = std::find(row_labels.begin(), row_labels.end(), canon);
      std::size_t r = static_cast<std::size_t>(it - row_labels.begin());
      if (it == row_labels.end()) {
        row_labels.push_back(canon);
        rows.push_back(s_.row(canon));
      }
      factors.emplace_back(r, w != canon);
    }

    CompensatedComplexSum acc;
    for (std::size_t nu = 0; nu < vacuum_.size(); ++nu) {
      double re = weights[nu], im = 0.0;
      for (const auto& [r, conjugate] : factors) {
        const auto& z = rows[r][nu];
        const double zi = conjugate ? -z.imag() : z.imag();
        const double t = re * z.real() - im * zi;
        im = re * zi + im * z.real();
        re = t;
      }
      acc.add({re, im});
    }
    return round_verlinde(acc.value());
  }

 private:
  const std::vector<double>& vacuum_power(int exponent) const {
    std::lock_guard lock(mutex_);
    auto it = powers_.find(exponent);
    if (it == powers_.end()) {
      std::vector<double> w(vacuum_.size());
      for (std::size_t i = 0; i < w.size(); ++i) w[i] = std::pow(vacuum_[i], exponent);
      it = powers_.emplace(exponent, std::move(w)).first;
    }
    return it->second;
  }

  const S& s_;
  std::vector<double> vacuum_;
  mutable std::mutex mutex_;
  mutable std::map<int, std::vector<double>> powers_;
};

template <SMatrixSource S>
VerlindeValue verlinde_dim(const SurfacePiece& piece, const S& s) {
  std::vector<DominantWeight> labels = piece.boundary_labels;
  if (piece.marked_label) labels.push_back(*piece.marked_label);
  return VerlindeContext<S>(s).evaluate(piece.genus, labels);
}

/// dim Z^(k)(Σ_g) with the marked point labeled dλ₀.
inline VerlindeValue dim_z_value(int n, int k, int g, int d, const ComputeOptions& options = {}) {
  if (g <= 1) fail(ErrorKind::out_of_scope, "genus must be at least 2");
  if (n < 2) fail(ErrorKind::invalid_input, "n must be at least 2");
  if (d < 0 || d >= n) fail(ErrorKind::invalid_input, "d must satisfy 0 <= d < n");
  if (k < 0) fail(ErrorKind::invalid_input, "level must be nonnegative");
  if (d > k) fail(ErrorKind::invalid_label, "marked label dλ₀ exceeds the level");
  const LazySMatrix s(n, k, options);
  return verlinde_dim(SurfacePiece{g, {}, marked_point_label(n, d)}, s);
}

inline std::int64_t dim_z(int n, int k, int g, int d, const ComputeOptions& options = {}) {
  return dim_z_value(n, k, g, d, options).value;
}

/// Labels seen by one piece of the cut surface under a labeling of the
/// cut curves (one weight per entry of cut.curves).
inline std::vector<DominantWeight> piece_labels(const CutSystem& cut, std::size_t piece,
                                                std::span<const DominantWeight> labeling,
                                                DualConvention convention = DualConvention::minus_side_dual) {
  const Side dual_side = convention == DualConvention::minus_side_dual ? Side::minus : Side::plus;
  std::vector<DominantWeight> out;
  for (const auto& inc : cut.pieces[piece].boundary) {
    const auto& mu = labeling[cut.curve_index(inc.curve)];
    out.push_back(inc.side == dual_side ? dual(mu) : mu);
  }
  if (static_cast<int>(piece) == cut.marked_piece) out.push_back(marked_point_label(cut.n, cut.d));
  return out;
}

/// dim Z^(k)(Σ′, μ): product of the piece dimensions.
template <SMatrixSource S>
std::int64_t block_dim(const CutSystem& cut, std::span<const DominantWeight> labeling, const S& s,
                       DualConvention convention = DualConvention::minus_side_dual) {
  require_valid(cut);
  if (labeling.size() != cut.curves.size()) {
    fail(ErrorKind::invalid_input, "labeling must assign one weight per cut curve");
  }
  if (cut.d > s.k()) fail(ErrorKind::invalid_label, "marked label dλ₀ exceeds the level");
  const VerlindeContext<S> ctx(s);
  std::int64_t dim = 1;
  for (std::size_t p = 0; p < cut.pieces.size(); ++p) {
    dim *= ctx.evaluate(cut.pieces[p].genus, piece_labels(cut, p, labeling, convention)).value;
  }
  return dim;
}

/// Block dimensions for every labeling in Λ_k^{#curves}, in lexicographic
/// order with the first curve most significant.
class BlockTable {
 public:
  BlockTable(CutSystem cut, int k, DualConvention convention, std::vector<DominantWeight> labels,
             std::vector<std::int64_t> dims)
      : cut_(std::move(cut)), k_(k), convention_(convention), labels_(std::move(labels)), dims_(std::move(dims)) {
    for (auto v : dims_) total_ += v;
  }

  const CutSystem& cut() const noexcept { return cut_; }
  int k() const noexcept { return k_; }
  DualConvention convention() const noexcept { return convention_; }
  std::span<const DominantWeight> labels() const noexcept { return labels_; }
  std::size_t size() const noexcept { return dims_.size(); }
  std::int64_t dim(std::size_t block) const { return dims_[block]; }
  std::span<const std::int64_t> dims() const noexcept { return dims_; }
  std::int64_t total_dim() const noexcept { return total_; }

  /// Label index of every curve for a block index.
  std::vector<std::size_t> labeling_indices(std::size_t block) const {
    std::vector<std::size_t> idx(cut_.curves.size());
    for (std::size_t c = idx.size(); c-- > 0;) {
      idx[c] = block % labels_.size();
      block /= labels_.size();
    }
    return idx;
  }

  std::vector<DominantWeight> labeling(std::size_t block) const {
    std::vector<DominantWeight> out;
    for (auto i : labeling_indices(block)) out.push_back(labels_[i]);
    return out;
  }

 private:
  CutSystem cut_;
  int k_;
  DualConvention convention_;
  std::vector<DominantWeight> labels_;
  std::vector<std::int64_t> dims_;
  std::int64_t total_ = 0;
};

namespace detail {
inline std::size_t checked_power(std::size_t base, std::size_t exp, std::size_t cap, const char* what) {
  std::size_t out = 1;
  for (std::size_t i = 0; i < exp; ++i) {
    if (base != 0 && out > cap / base) {
      fail(ErrorKind::resource_limit, std::string(what) + " exceeds the configured block cap " + std::to_string(cap));
    }
    out *= base;
  }
  if (out > cap) {
    fail(ErrorKind::resource_limit, std::string(what) + " exceeds the configured block cap " + std::to_string(cap));
  }
  return out;
}
}  // namespace detail

/// Each piece's dimension depends only on the labels of its own curves, so
/// it is tabulated once per piece and blocks are products of lookups.
inline BlockTable block_table(const CutSystem& cut, int k, const ComputeOptions& options = {},
                              DualConvention convention = DualConvention::minus_side_dual) {
  require_valid(cut);
  if (k < 0) fail(ErrorKind::invalid_input, "level must be nonnegative");
  if (cut.d > k) fail(ErrorKind::invalid_label, "marked label dλ₀ exceeds the level");
  const LazySMatrix s(cut.n, k, options);
  const VerlindeContext<LazySMatrix> ctx(s);
  const auto labels = std::vector<DominantWeight>(s.labels().begin(), s.labels().end());
  const std::size_t L = labels.size();
  const std::size_t curves = cut.curves.size();
  const std::size_t blocks = detail::checked_power(L, curves, options.max_blocks, "|Λ_k|^{#curves}");
  std::vector<std::size_t> dual_index(L);
  for (std::size_t i = 0; i < L; ++i) dual_index[i] = s.index(dual(labels[i]));

  struct PieceTable {
    std::vector<std::size_t> curves;  // distinct curve indices, ascending
    std::vector<std::int64_t> dims;
  };
  std::vector<PieceTable> tables(cut.pieces.size());
  for (std::size_t p = 0; p < cut.pieces.size(); ++p) {
    auto& t = tables[p];
    for (const auto& inc : cut.pieces[p].boundary) t.curves.push_back(cut.curve_index(inc.curve));
    std::sort(t.curves.begin(), t.curves.end());
    t.curves.erase(std::unique(t.curves.begin(), t.curves.end()), t.curves.end());
    const std::size_t entries = detail::checked_power(L, t.curves.size(), options.max_blocks, "piece table");
    t.dims.assign(entries, 0);
    // Dualizing every label conjugates the Verlinde sum, so a labeling and
    // its dual have equal dimension unless a nonzero dλ₀ sits on the piece.
    const bool dual_symmetric = cut.d == 0 || cut.marked_piece != static_cast<int>(p);
    auto dual_entry = [&](std::size_t e) {
      std::size_t out = 0, scale = 1;
      for (std::size_t c = 0; c < t.curves.size(); ++c, e /= L, scale *= L) out += dual_index[e % L] * scale;
      return out;
    };
    parallel_for(entries, options.threads, [&](std::size_t e) {
      if (dual_symmetric && dual_entry(e) < e) return;
      std::vector<DominantWeight> labeling(curves, labels.front());
      std::size_t rest = e;
      for (std::size_t c = t.curves.size(); c-- > 0;) {
        labeling[t.curves[c]] = labels[rest % L];
        rest /= L;
      }
      t.dims[e] = ctx.evaluate(cut.pieces[p].genus, piece_labels(cut, p, labeling, convention)).value;
    });
    if (dual_symmetric) {
      for (std::size_t e = 0; e < entries; ++e) {
        const std::size_t de = dual_entry(e);
        if (de < e) t.dims[e] = t.dims[de];
      }
    }
  }

  std::vector<std::int64_t> dims(blocks, 1);
  parallel_for(blocks, options.threads, [&](std::size_t b) {
    std::vector<std::size_t> idx(curves);
    std::size_t rest = b;
    for (std::size_t c = curves; c-- > 0;) {
      idx[c] = rest % L;
      rest /= L;
    }
    std::int64_t dim = 1;
    for (const auto& t : tables) {
      std::size_t e = 0;
      for (auto c : t.curves) e = e * L + idx[c];
      dim *= t.dims[e];
    }
    dims[b] = dim;
  });
  return BlockTable(cut, k, convention, labels, std::move(dims));
}

struct FactorizationReport {
  std::int64_t block_sum = 0;
  std::int64_t dim_z = 0;
  std::size_t blocks = 0;
};

/// Σ_μ dim Z(Σ′, μ) = dim Z(Σ); throws invariant-violation on mismatch.
inline FactorizationReport factorization_check(const CutSystem& cut, int k, const ComputeOptions& options = {},
                                               DualConvention convention = DualConvention::minus_side_dual) {
  const BlockTable table = block_table(cut, k, options, convention);
  FactorizationReport report{table.total_dim(), 0, table.size()};
  if (cut.g >= 2) {
    report.dim_z = dim_z(cut.n, k, cut.g, cut.d, options);
  } else {
    const LazySMatrix s(cut.n, k, options);
    report.dim_z = verlinde_dim(SurfacePiece{cut.g, {}, marked_point_label(cut.n, cut.d)}, s).value;
  }
  if (report.block_sum != report.dim_z) {
    fail(ErrorKind::invariant_violation, "factorization mismatch: Σ block dims = " +
                                             std::to_string(report.block_sum) + ", dim Z = " +
                                             std::to_string(report.dim_z));
  }
  return report;
}

}  // namespace tqft
