#pragma once

// Weights, the normalized Cartan-Killing pairing, Weyl dimensions and
// characters for the Lie algebra of SU(n).
//
// Weights use Dynkin labels (coefficients on the fundamental weights).
// The pairing is the inverse Cartan matrix of A_{n-1}, which is the
// normalization (θ,θ) = 2.

#include <algorithm>
#include <cmath>
#include <complex>
#include <compare>
#include <cstdint>
#include <numbers>
#include <numeric>
#include <span>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>
#include <boost/rational.hpp>

#include "tqft/error.hpp"
#include "tqft/summation.hpp"

namespace tqft {

using Rational = boost::rational<std::int64_t>;

class DominantWeight {
 public:
  DominantWeight() = default;

  explicit DominantWeight(std::vector<int> coords) : coords_(std::move(coords)) {
    if (coords_.empty()) fail(ErrorKind::invalid_input, "a weight of SU(n) needs n-1 >= 1 coordinates");
    for (int c : coords_) {
      if (c < 0) fail(ErrorKind::invalid_input, "dominant weight coordinates must be nonnegative");
    }
  }

  static DominantWeight zero(int n) {
    if (n < 2) fail(ErrorKind::invalid_input, "n must be at least 2");
    return DominantWeight(std::vector<int>(static_cast<std::size_t>(n - 1), 0));
  }

  int n() const noexcept { return static_cast<int>(coords_.size()) + 1; }
  int rank() const noexcept { return static_cast<int>(coords_.size()); }
  std::span<const int> coords() const noexcept { return coords_; }
  int operator[](std::size_t i) const { return coords_[i]; }
  bool is_zero() const noexcept {
    return std::all_of(coords_.begin(), coords_.end(), [](int c) { return c == 0; });
  }

  auto operator<=>(const DominantWeight&) const = default;

 private:
  std::vector<int> coords_;
};

inline std::string to_string(const DominantWeight& w) {
  std::string out = "(";
  for (std::size_t i = 0; i < w.coords().size(); ++i) {
    if (i) out += ',';
    out += std::to_string(w[i]);
  }
  return out + ")";
}

namespace detail {
inline void require_same_rank(const DominantWeight& a, const DominantWeight& b) {
  if (a.n() != b.n()) {
    fail(ErrorKind::invalid_input,
         "rank mismatch: " + to_string(a) + " vs " + to_string(b));
  }
}
}  // namespace detail

/// (ω_i, ω_j) for 1-based fundamental weights of SU(n).
inline Rational fundamental_pairing(int n, int i, int j) {
  return Rational(std::min(i, j)) - Rational(static_cast<std::int64_t>(i) * j, n);
}

inline Rational killing_form(const DominantWeight& a, const DominantWeight& b) {
  detail::require_same_rank(a, b);
  const int n = a.n();
  Rational acc(0);
  for (int i = 1; i < n; ++i) {
    if (a[i - 1] == 0) continue;
    for (int j = 1; j < n; ++j) {
      if (b[j - 1] == 0) continue;
      acc += Rational(a[i - 1]) * Rational(b[j - 1]) * fundamental_pairing(n, i, j);
    }
  }
  return acc;
}

struct RankData {
  int n = 0;
  std::vector<std::vector<Rational>> quadratic_form;
  DominantWeight rho;
  DominantWeight theta;
  /// Simple roots α_i in Dynkin coordinates (rows of the Cartan matrix).
  std::vector<std::vector<int>> simple_roots;
};

inline RankData rank_data(int n) {
  if (n < 2) fail(ErrorKind::invalid_input, "n must be at least 2");
  RankData data;
  data.n = n;
  const int r = n - 1;
  data.quadratic_form.assign(r, std::vector<Rational>(r));
  data.simple_roots.assign(r, std::vector<int>(r, 0));
  for (int i = 0; i < r; ++i) {
    for (int j = 0; j < r; ++j) data.quadratic_form[i][j] = fundamental_pairing(n, i + 1, j + 1);
    data.simple_roots[i][i] = 2;
    if (i > 0) data.simple_roots[i][i - 1] = -1;
    if (i + 1 < r) data.simple_roots[i][i + 1] = -1;
  }
  data.rho = DominantWeight(std::vector<int>(r, 1));
  std::vector<int> theta(r, 0);
  theta.front() += 1;
  theta.back() += 1;
  data.theta = DominantWeight(std::move(theta));
  return data;
}

/// Pairing of two arbitrary (not necessarily dominant) Dynkin vectors.
inline Rational pair_dynkin(int n, std::span<const int> a, std::span<const int> b) {
  Rational acc(0);
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (std::size_t j = 0; j < b.size(); ++j) {
      acc += Rational(a[i]) * Rational(b[j]) *
             fundamental_pairing(n, static_cast<int>(i) + 1, static_cast<int>(j) + 1);
    }
  }
  return acc;
}

/// (λ, θ). All comarks of A_{n-1} are 1, so this is the coordinate sum.
inline int level(const DominantWeight& w) {
  return std::accumulate(w.coords().begin(), w.coords().end(), 0);
}

inline DominantWeight dual(const DominantWeight& w) {
  std::vector<int> c(w.coords().rbegin(), w.coords().rend());
  return DominantWeight(std::move(c));
}

/// ω₁ = (1,0,…,0). The exponential of its coweight generates Z/n.
/// ω_{n-1} = dual(ω₁) is the other valid choice.
inline DominantWeight center_label(int n) {
  if (n < 2) fail(ErrorKind::invalid_input, "n must be at least 2");
  std::vector<int> c(static_cast<std::size_t>(n - 1), 0);
  c[0] = 1;
  return DominantWeight(std::move(c));
}

/// Weight with d in the first coordinate: the marked-point label dλ₀.
inline DominantWeight marked_point_label(int n, int d) {
  std::vector<int> c(static_cast<std::size_t>(n - 1), 0);
  c[0] = d;
  return DominantWeight(std::move(c));
}

/// ε-coordinates (partition form): l_i = Σ_{j≥i} a_j, l_n = 0.
inline std::vector<std::int64_t> partition(const DominantWeight& w) {
  const int n = w.n();
  std::vector<std::int64_t> l(static_cast<std::size_t>(n), 0);
  for (int i = n - 2; i >= 0; --i) l[i] = l[i + 1] + w[i];
  return l;
}

inline DominantWeight plus_rho(const DominantWeight& w) {
  std::vector<int> c(w.coords().begin(), w.coords().end());
  for (int& x : c) ++x;
  return DominantWeight(std::move(c));
}

inline std::uint64_t binomial(std::uint64_t n, std::uint64_t k) {
  if (k > n) return 0;
  k = std::min(k, n - k);
  std::uint64_t r = 1;
  for (std::uint64_t i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

/// |Λ_k| = C(k+n-1, n-1).
inline std::uint64_t label_count(int n, int k) {
  return binomial(static_cast<std::uint64_t>(k + n - 1), static_cast<std::uint64_t>(n - 1));
}

/// Λ_k in lexicographic order of Dynkin labels.
inline std::vector<DominantWeight> enumerate_labels(int n, int k) {
  if (n < 2) fail(ErrorKind::invalid_input, "n must be at least 2");
  if (k < 0) fail(ErrorKind::invalid_input, "level must be nonnegative");
  std::vector<DominantWeight> out;
  out.reserve(label_count(n, k));
  std::vector<int> c(static_cast<std::size_t>(n - 1), 0);
  auto rec = [&](auto&& self, std::size_t pos, int budget) -> void {
    if (pos == c.size()) {
      out.emplace_back(c);
      return;
    }
    for (int v = 0; v <= budget; ++v) {
      c[pos] = v;
      self(self, pos + 1, budget - v);
    }
    c[pos] = 0;
  };
  rec(rec, 0, k);
  return out;
}

/// Weyl dimension Π_{i<j} (l_i − l_j + j − i)/(j − i), exact.
inline std::int64_t weyl_dim(const DominantWeight& w) {
  using boost::multiprecision::cpp_int;
  const auto l = partition(w);
  const int n = w.n();
  cpp_int num = 1;
  cpp_int den = 1;
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      num *= l[i] - l[j] + (j - i);
      den *= (j - i);
    }
  }
  const cpp_int q = num / den;
  if (q > cpp_int(std::numeric_limits<std::int64_t>::max())) {
    fail(ErrorKind::resource_limit, "Weyl dimension of " + to_string(w) + " overflows 64 bits");
  }
  return static_cast<std::int64_t>(q);
}

struct SignedPermutation {
  std::vector<int> image;
  int sign = 1;
};

/// S_n in lexicographic order, each with its parity.
inline std::vector<SignedPermutation> signed_permutations(int n) {
  std::vector<int> p(static_cast<std::size_t>(n));
  std::iota(p.begin(), p.end(), 0);
  std::vector<SignedPermutation> out;
  do {
    int inversions = 0;
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j)
        if (p[i] > p[j]) ++inversions;
    out.push_back({p, inversions % 2 ? -1 : 1});
  } while (std::next_permutation(p.begin(), p.end()));
  return out;
}

/// Diagonal element of SU(n) given by its eigenvalue arguments. Elements
/// built from lattice points also carry the exact form
/// phase_i = 2π·numerator_i/denominator, which lets the character reduce
/// its arguments in integer arithmetic.
class TorusElement {
 public:
  static TorusElement from_phases(std::vector<double> phases) {
    if (phases.size() < 2) fail(ErrorKind::invalid_input, "torus element needs n >= 2 phases");
    double total = 0.0;
    for (double p : phases) total += p;
    const double two_pi = 2.0 * std::numbers::pi;
    const double residue = std::remainder(total, two_pi);
    if (std::abs(residue) > 1e-12) {
      fail(ErrorKind::invalid_input, "torus phases must sum to 0 mod 2π");
    }
    TorusElement t;
    t.phases_ = std::move(phases);
    return t;
  }

  static TorusElement from_rational(std::vector<std::int64_t> numerators, std::int64_t denominator) {
    if (denominator <= 0) fail(ErrorKind::invalid_input, "denominator must be positive");
    std::int64_t total = 0;
    for (auto v : numerators) total += v;
    if (total % denominator != 0) fail(ErrorKind::invalid_input, "torus phases must sum to 0 mod 2π");
    TorusElement t;
    t.phases_.reserve(numerators.size());
    for (auto v : numerators) {
      t.phases_.push_back(2.0 * std::numbers::pi * static_cast<double>(v) / static_cast<double>(denominator));
    }
    t.numerators_ = std::move(numerators);
    t.denominator_ = denominator;
    return t;
  }

  int n() const noexcept { return static_cast<int>(phases_.size()); }
  std::span<const double> phases() const noexcept { return phases_; }
  bool is_exact() const noexcept { return denominator_ > 0; }
  std::span<const std::int64_t> numerators() const noexcept { return numerators_; }
  std::int64_t denominator() const noexcept { return denominator_; }

  bool is_regular() const {
    for (int i = 0; i < n(); ++i) {
      for (int j = i + 1; j < n(); ++j) {
        if (is_exact()) {
          if ((numerators_[i] - numerators_[j]) % denominator_ == 0) return false;
        } else if (std::abs(std::sin(0.5 * (phases_[i] - phases_[j]))) < 1e-14) {
          return false;
        }
      }
    }
    return true;
  }

  /// The complex-conjugate element (all phases negated).
  TorusElement conjugate() const {
    TorusElement t = *this;
    for (auto& p : t.phases_) p = -p;
    for (auto& v : t.numerators_) v = -v;
    return t;
  }

 private:
  std::vector<double> phases_;
  std::vector<std::int64_t> numerators_;
  std::int64_t denominator_ = 0;
};

namespace detail {

inline std::int64_t mod_floor(std::int64_t a, std::int64_t m) {
  const std::int64_t r = a % m;
  return r < 0 ? r + m : r;
}

inline std::complex<double> i_power(int e) {
  switch (((e % 4) + 4) % 4) {
    case 0: return {1.0, 0.0};
    case 1: return {0.0, 1.0};
    case 2: return {-1.0, 0.0};
    default: return {0.0, -1.0};
  }
}

/// exp(iπ·r/m) with r reduced exactly before the trigonometric call.
inline std::complex<double> half_turn_root(std::int64_t r, std::int64_t m) {
  const std::int64_t two_m = 2 * m;
  std::int64_t s = mod_floor(r, two_m);
  if (s > m) s -= two_m;
  const double angle = std::numbers::pi * static_cast<double>(s) / static_cast<double>(m);
  return {std::cos(angle), std::sin(angle)};
}

}  // namespace detail

/// χ_λ(t) as a ratio of alternants. The numerator is an alternating sum
/// over S_n accumulated with compensated summation; the Weyl denominator
/// is evaluated in product form Π_{i<j}(z_i − z_j).
inline std::complex<double> character(const DominantWeight& w, const TorusElement& t) {
  const int n = w.n();
  if (t.n() != n) fail(ErrorKind::invalid_input, "torus element rank does not match weight");
  if (!t.is_regular()) {
    fail(ErrorKind::singular_element, "character evaluated at an irregular torus element");
  }
  if (w.is_zero()) return {1.0, 0.0};

  const auto l = partition(w);
  std::vector<std::int64_t> exponent(static_cast<std::size_t>(n));
  for (int j = 0; j < n; ++j) exponent[j] = l[j] + (n - 1 - j);

  const auto perms = signed_permutations(n);
  CompensatedComplexSum numerator;
  std::complex<double> denominator;

  if (t.is_exact()) {
    const auto num = t.numerators();
    const std::int64_t den = t.denominator();
    for (const auto& p : perms) {
      std::int64_t r = 0;
      for (int j = 0; j < n; ++j) r = detail::mod_floor(r + exponent[j] * num[p.image[j]], den);
      // exp(2πi r/den) = exp(iπ·2r/den)
      numerator.add(static_cast<double>(p.sign) * detail::half_turn_root(2 * r, den));
    }
    double magnitude = 1.0;
    for (int i = 0; i < n; ++i) {
      for (int j = i + 1; j < n; ++j) {
        const std::int64_t diff = num[i] - num[j];
        magnitude *= 2.0 * detail::half_turn_root(diff, den).imag();
      }
    }
    std::int64_t total = 0;
    for (auto v : num) total += v;
    // Π_{i<j} e^{i(φ_i+φ_j)/2} = e^{iπ(n−1)Σnum/den}; Π 2i·sin(·) gives i^{n(n−1)/2}.
    const std::complex<double> phase = detail::half_turn_root((n - 1) * total, den) *
                                       detail::i_power(n * (n - 1) / 2);
    denominator = magnitude * phase;
  } else {
    const auto phi = t.phases();
    for (const auto& p : perms) {
      double angle = 0.0;
      for (int j = 0; j < n; ++j) {
        angle = std::remainder(angle + static_cast<double>(exponent[j]) * phi[p.image[j]],
                               2.0 * std::numbers::pi);
      }
      numerator.add(static_cast<double>(p.sign) * std::polar(1.0, angle));
    }
    double magnitude = 1.0;
    double total = 0.0;
    for (int i = 0; i < n; ++i) {
      total += phi[i];
      for (int j = i + 1; j < n; ++j) magnitude *= 2.0 * std::sin(0.5 * (phi[i] - phi[j]));
    }
    denominator = magnitude * std::polar(1.0, 0.5 * (n - 1) * total) *
                  detail::i_power(n * (n - 1) / 2);
  }
  return numerator.value() / denominator;
}

}  // namespace tqft
