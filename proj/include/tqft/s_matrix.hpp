#pragma once

// Level-k S-matrix of the SU(n) theory and the character form of its
// ratios, S_{λμ}/S_{0μ} = χ_λ(t_μ) with t_μ = exp(−2πi(μ̌+ρ̌)/(k+n)).

#include <algorithm>
#include <array>
#include <complex>
#include <concepts>
#include <cstdint>
#include <numbers>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "tqft/error.hpp"
#include "tqft/lie_data.hpp"
#include "tqft/parallel.hpp"
#include "tqft/summation.hpp"

namespace tqft {

inline void require_label(const DominantWeight& w, int k) {
  if (level(w) > k) {
    fail(ErrorKind::invalid_label,
         "label " + to_string(w) + " has level " + std::to_string(level(w)) + " > k = " + std::to_string(k));
  }
}

/// t_μ in exact form: phase_i = 2π·num_i/(n(k+n)) with
/// num_i = −(n·p_i − Σp), p the partition of μ+ρ.
inline TorusElement torus_element(const DominantWeight& mu, int k) {
  if (k < 0) fail(ErrorKind::invalid_input, "level must be nonnegative");
  require_label(mu, k);
  const int n = mu.n();
  const auto p = partition(plus_rho(mu));
  std::int64_t total = 0;
  for (auto v : p) total += v;
  std::vector<std::int64_t> num(p.size());
  for (std::size_t i = 0; i < p.size(); ++i) num[i] = -(n * p[i] - total);
  return TorusElement::from_rational(std::move(num), static_cast<std::int64_t>(n) * (k + n));
}

struct SRatio {
  std::complex<double> value;
  bool in_label_set = true;  // false when λ itself lies outside Λ_k
};

/// S_{λμ}/S_{0μ} through the character route.
inline SRatio s_ratio(const DominantWeight& lambda, const DominantWeight& mu, int k) {
  detail::require_same_rank(lambda, mu);
  return {character(lambda, torus_element(mu, k)), level(lambda) <= k};
}

/// Kac–Peterson alternating sum
///   S_{ab} = c · Σ_{w∈S_n} sign(w) exp(−2πi (w(a+ρ), b+ρ)/(k+n)),
/// c = i^{n(n−1)/2}/√(n(k+n)^{n−1}), which makes S unitary with S_00 > 0.
/// Exponents are reduced exactly modulo n(k+n) and looked up in a table of
/// roots of unity.
class KacPetersonKernel {
 public:
  /// ε-coordinates of w+ρ, the form consumed by the alternating sum.
  struct Shifted {
    std::array<std::int32_t, 8> coords{};
    std::int32_t total = 0;
  };

  KacPetersonKernel(int n, int k) : n_(n), k_(k), modulus_(static_cast<std::int64_t>(n) * (k + n)) {
    if (n < 2) fail(ErrorKind::invalid_input, "n must be at least 2");
    if (n > 8) fail(ErrorKind::invalid_input, "S-matrices are supported for n <= 8");
    if (k < 0) fail(ErrorKind::invalid_input, "level must be nonnegative");
    perms_ = signed_permutations(n);
    const auto span = static_cast<std::size_t>(k + n);
    for (const auto& p : perms_) {
      for (int i = 0; i < n; ++i) perm_offsets_.push_back(static_cast<std::size_t>(p.image[i]) * span);
      perm_signs_.push_back(p.sign);
    }
    roots_.resize(static_cast<std::size_t>(modulus_));
    for (std::int64_t r = 0; r < modulus_; ++r) {
      // exp(−2πi r/N), argument folded into (−π, π]
      roots_[r] = std::conj(detail::half_turn_root(2 * r, modulus_));
    }
    const double scale = 1.0 / std::sqrt(static_cast<double>(n) *
                                         std::pow(static_cast<double>(k + n), n - 1));
    normalization_ = scale * detail::i_power(n * (n - 1) / 2);
  }

  int n() const noexcept { return n_; }
  int k() const noexcept { return k_; }

  Shifted shift(const DominantWeight& w) const {
    if (w.n() != n_) fail(ErrorKind::invalid_input, "weight rank does not match S-matrix");
    const auto p = partition(plus_rho(w));
    Shifted s;
    for (int i = 0; i < n_; ++i) {
      s.coords[i] = static_cast<std::int32_t>(p[i]);
      s.total += static_cast<std::int32_t>(p[i]);
    }
    return s;
  }

  std::vector<Shifted> shift_all(std::span<const DominantWeight> labels) const {
    std::vector<Shifted> out;
    out.reserve(labels.size());
    for (const auto& w : labels) out.push_back(shift(w));
    return out;
  }

  std::complex<double> entry(const DominantWeight& a, const DominantWeight& b) const {
    return normalization_ * alternating_sum(shift(a), shift(b));
  }

  /// S_{a,ν} for every ν with precomputed shifted coordinates. The roots
  /// exp(−2πi·n·x_j·y/N) for the fixed row are tabulated once, so each entry
  /// is an n×n alternant of table values.
  std::vector<std::complex<double>> row(const DominantWeight& a, std::span<const Shifted> columns) const {
    const Shifted x = shift(a);
    const std::size_t span = static_cast<std::size_t>(k_ + n_);  // coordinates lie in [0, k+n)
    std::vector<std::complex<double>> table(static_cast<std::size_t>(n_) * span);
    for (int j = 0; j < n_; ++j) {
      const std::int64_t step = detail::mod_floor(std::int64_t{n_} * x.coords[j], modulus_);
      std::int64_t r = 0;
      for (std::size_t y = 0; y < span; ++y) {
        table[j * span + y] = roots_[static_cast<std::size_t>(r)];
        r += step;
        if (r >= modulus_) r -= modulus_;
      }
    }
    // exp(2πi·Σx·Σy/N) for every possible Σy ≤ n(k+n)
    std::vector<std::complex<double>> phase(static_cast<std::size_t>(n_) * span + 1);
    {
      const std::int64_t step = detail::mod_floor(-std::int64_t{x.total}, modulus_);
      std::int64_t r = 0;
      for (auto& z : phase) {
        z = normalization_ * roots_[static_cast<std::size_t>(r)];
        r += step;
        if (r >= modulus_) r -= modulus_;
      }
    }
    switch (n_) {
      case 2: return alternants<2>(table, phase, columns);
      case 3: return alternants<3>(table, phase, columns);
      case 4: return alternants<4>(table, phase, columns);
      case 5: return alternants<5>(table, phase, columns);
      case 6: return alternants<6>(table, phase, columns);
      case 7: return alternants<7>(table, phase, columns);
      default: return alternants<8>(table, phase, columns);
    }
  }

 private:
  /// Entries of one row from its root table; N = n fixes the loop shape.
  template <int N>
  std::vector<std::complex<double>> alternants(const std::vector<std::complex<double>>& table,
                                               const std::vector<std::complex<double>>& phase,
                                               std::span<const Shifted> columns) const {
    std::vector<std::complex<double>> out;
    out.reserve(columns.size());
    for (const auto& y : columns) {
      // Every term has modulus 1, so the plain sum is accurate to n!·ε
      // absolutely; compensation cannot improve on the rounded products.
      // Products are spelled out: std::complex multiplication adds
      // NaN/Inf recovery that dominates this loop.
      double acc_re = 0.0, acc_im = 0.0;
      const std::size_t* img = perm_offsets_.data();
      for (std::size_t q = 0; q < perm_signs_.size(); ++q, img += N) {
        const auto& first = table[img[0] + static_cast<std::size_t>(y.coords[0])];
        double re = first.real(), im = first.imag();
        for (int i = 1; i < N; ++i) {
          const auto& z = table[img[i] + static_cast<std::size_t>(y.coords[i])];
          const double t = re * z.real() - im * z.imag();
          im = re * z.imag() + im * z.real();
          re = t;
        }
        if (perm_signs_[q] > 0) {
          acc_re += re;
          acc_im += im;
        } else {
          acc_re -= re;
          acc_im -= im;
        }
      }
      const auto& base = phase[static_cast<std::size_t>(y.total)];
      out.emplace_back(base.real() * acc_re - base.imag() * acc_im, base.real() * acc_im + base.imag() * acc_re);
    }
    return out;
  }

  std::complex<double> alternating_sum(const Shifted& x, const Shifted& y) const {
    // n·(w x, y) = n Σ_i x_{w(i)} y_i − Σx Σy
    std::int64_t prod[8][8];
    const std::int64_t base = detail::mod_floor(-std::int64_t{x.total} * y.total, modulus_);
    for (int i = 0; i < n_; ++i)
      for (int j = 0; j < n_; ++j) prod[i][j] = detail::mod_floor(std::int64_t{n_} * x.coords[i] * y.coords[j], modulus_);
    CompensatedComplexSum acc;
    for (const auto& p : perms_) {
      std::int64_t r = base;
      for (int i = 0; i < n_; ++i) {
        r += prod[p.image[i]][i];
        if (r >= modulus_) r -= modulus_;
      }
      const auto& z = roots_[static_cast<std::size_t>(r)];
      acc.add(p.sign > 0 ? z : -z);
    }
    return acc.value();
  }

  int n_;
  int k_;
  std::int64_t modulus_;
  std::vector<SignedPermutation> perms_;
  std::vector<std::size_t> perm_offsets_;  // w(i)·(k+n), row-major by permutation
  std::vector<int> perm_signs_;
  std::vector<std::complex<double>> roots_;
  std::complex<double> normalization_;
};

/// Row access to S with labels in lexicographic order. Implemented by the
/// dense SMatrix and by LazySMatrix.
template <class S>
concept SMatrixSource = requires(const S& s, const DominantWeight& w) {
  { s.n() } -> std::convertible_to<int>;
  { s.k() } -> std::convertible_to<int>;
  { s.size() } -> std::convertible_to<std::size_t>;
  { s.labels() } -> std::convertible_to<std::span<const DominantWeight>>;
  { s.row(w) } -> std::convertible_to<std::vector<std::complex<double>>>;
};

namespace detail {
inline std::size_t label_index(std::span<const DominantWeight> labels, const DominantWeight& w, int k) {
  const auto it = std::lower_bound(labels.begin(), labels.end(), w);
  if (it == labels.end() || *it != w) {
    fail(ErrorKind::invalid_label, "label " + to_string(w) + " is not in Λ_" + std::to_string(k));
  }
  return static_cast<std::size_t>(it - labels.begin());
}

inline void check_label_cap(int n, int k, std::size_t cap, const char* what) {
  const auto count = label_count(n, k);
  if (count > cap) {
    fail(ErrorKind::resource_limit, std::string(what) + ": |Λ_k| = " + std::to_string(count) +
                                        " exceeds the configured cap " + std::to_string(cap));
  }
}
}  // namespace detail

class SMatrix {
 public:
  SMatrix(int n, int k, std::vector<DominantWeight> labels, Eigen::MatrixXcd entries)
      : n_(n), k_(k), labels_(std::move(labels)), entries_(std::move(entries)) {}

  int n() const noexcept { return n_; }
  int k() const noexcept { return k_; }
  std::size_t size() const noexcept { return labels_.size(); }
  std::span<const DominantWeight> labels() const noexcept { return labels_; }
  const Eigen::MatrixXcd& matrix() const noexcept { return entries_; }

  std::size_t index(const DominantWeight& w) const { return detail::label_index(labels_, w, k_); }

  std::complex<double> operator()(std::size_t i, std::size_t j) const { return entries_(i, j); }

  std::vector<std::complex<double>> row(const DominantWeight& w) const {
    const auto i = index(w);
    std::vector<std::complex<double>> out(size());
    for (std::size_t j = 0; j < size(); ++j) out[j] = entries_(i, j);
    return out;
  }

 private:
  int n_;
  int k_;
  std::vector<DominantWeight> labels_;
  Eigen::MatrixXcd entries_;
};

/// Dense S-matrix. Cost |Λ_k|²·n!.
inline SMatrix s_matrix(int n, int k, const ComputeOptions& options = {}) {
  detail::check_label_cap(n, k, options.max_dense_labels, "dense S-matrix");
  const KacPetersonKernel kernel(n, k);
  auto labels = enumerate_labels(n, k);
  const auto columns = kernel.shift_all(labels);
  const std::size_t size = labels.size();
  Eigen::MatrixXcd entries(size, size);
  parallel_for(size, options.threads, [&](std::size_t i) {
    const auto r = kernel.row(labels[i], columns);
    for (std::size_t j = 0; j < size; ++j) entries(i, j) = r[j];
  });
  return SMatrix(n, k, std::move(labels), std::move(entries));
}

/// S rows computed on demand; memory O(|Λ_k|).
class LazySMatrix {
 public:
  LazySMatrix(int n, int k, const ComputeOptions& options = {}) : kernel_(n, k) {
    detail::check_label_cap(n, k, options.max_labels, "row-wise S-matrix");
    labels_ = enumerate_labels(n, k);
    columns_ = kernel_.shift_all(labels_);
  }

  int n() const noexcept { return kernel_.n(); }
  int k() const noexcept { return kernel_.k(); }
  std::size_t size() const noexcept { return labels_.size(); }
  std::span<const DominantWeight> labels() const noexcept { return labels_; }
  std::size_t index(const DominantWeight& w) const { return detail::label_index(labels_, w, k()); }

  std::vector<std::complex<double>> row(const DominantWeight& w) const {
    require_label(w, k());
    return kernel_.row(w, columns_);
  }

  const KacPetersonKernel& kernel() const noexcept { return kernel_; }

 private:
  KacPetersonKernel kernel_;
  std::vector<DominantWeight> labels_;
  std::vector<KacPetersonKernel::Shifted> columns_;
};

struct SMatrixInvariants {
  double unitarity_error = 0.0;          // max |S S† − I|
  double symmetry_error = 0.0;           // max |S − Sᵀ|
  double charge_conjugation_error = 0.0; // max |S² − C|
  double s00 = 0.0;
  double s00_imag = 0.0;
  double min_vacuum_column = 0.0;        // min_μ Re S_{0μ}
  double vacuum_column_imag = 0.0;       // max_μ |Im S_{0μ}|

  bool passed() const {
    return unitarity_error < 1e-10 && symmetry_error < 1e-10 && charge_conjugation_error < 1e-9 &&
           s00 > 0.0 && std::abs(s00_imag) < 1e-12 && min_vacuum_column > 0.0 &&
           vacuum_column_imag < 1e-12;
  }
};

inline SMatrixInvariants check_invariants(const SMatrix& s) {
  const auto& m = s.matrix();
  const auto size = static_cast<Eigen::Index>(s.size());
  SMatrixInvariants inv;
  const Eigen::MatrixXcd unit = m * m.adjoint() - Eigen::MatrixXcd::Identity(size, size);
  inv.unitarity_error = unit.cwiseAbs().maxCoeff();
  inv.symmetry_error = (m - m.transpose()).cwiseAbs().maxCoeff();
  const Eigen::MatrixXcd square = m * m;
  double cc = 0.0;
  for (Eigen::Index i = 0; i < size; ++i) {
    const auto d = static_cast<Eigen::Index>(s.index(dual(s.labels()[i])));
    for (Eigen::Index j = 0; j < size; ++j) {
      const std::complex<double> expected = (j == d) ? 1.0 : 0.0;
      cc = std::max(cc, std::abs(square(i, j) - expected));
    }
  }
  inv.charge_conjugation_error = cc;
  inv.s00 = m(0, 0).real();
  inv.s00_imag = m(0, 0).imag();
  inv.min_vacuum_column = m(0, 0).real();
  for (Eigen::Index j = 0; j < size; ++j) {
    inv.min_vacuum_column = std::min(inv.min_vacuum_column, m(0, j).real());
    inv.vacuum_column_imag = std::max(inv.vacuum_column_imag, std::abs(m(0, j).imag()));
  }
  return inv;
}

struct RatioConsistency {
  double max_error = 0.0;
  DominantWeight worst_lambda;
  DominantWeight worst_mu;
};

/// max over Λ_k² of |S_{λμ}/S_{0μ} − χ_λ(t_μ)|: the alternating-sum route
/// against the character route.
inline RatioConsistency ratio_consistency_check(const SMatrix& s) {
  RatioConsistency report;
  const auto labels = s.labels();
  report.worst_lambda = labels.front();
  report.worst_mu = labels.front();
  for (std::size_t j = 0; j < s.size(); ++j) {
    const TorusElement t = torus_element(labels[j], s.k());
    const auto vacuum = s(0, j);
    for (std::size_t i = 0; i < s.size(); ++i) {
      const double err = std::abs(s(i, j) / vacuum - character(labels[i], t));
      if (err > report.max_error) {
        report.max_error = err;
        report.worst_lambda = labels[i];
        report.worst_mu = labels[j];
      }
    }
  }
  return report;
}

inline RatioConsistency ratio_consistency_check(int n, int k, const ComputeOptions& options = {}) {
  return ratio_consistency_check(s_matrix(n, k, options));
}

}  // namespace tqft
