#pragma once

// Real polynomial observables on the unit sphere in the Cartesian
// coordinates x1, x2, x3, with exact rational coefficients.

#include <algorithm>
#include <array>
#include <cctype>
#include <cmath>
#include <map>
#include <numbers>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "tqft/error.hpp"

namespace tqft::toeplitz {

using BigInt = boost::multiprecision::cpp_int;
using BigRational = boost::multiprecision::cpp_rational;
using Exponent = std::array<int, 3>;

class Observable {
 public:
  Observable() = default;

  static Observable constant(const BigRational& c) {
    Observable f;
    if (c != 0) f.terms_[{0, 0, 0}] = c;
    return f;
  }

  /// x1, x2 or x3 (axis = 1, 2, 3).
  static Observable coordinate(int axis) {
    if (axis < 1 || axis > 3) fail(ErrorKind::invalid_input, "coordinate index must be 1, 2 or 3");
    Observable f;
    Exponent e{0, 0, 0};
    e[axis - 1] = 1;
    f.terms_[e] = 1;
    return f;
  }

  static Observable parse(std::string_view text);

  const std::map<Exponent, BigRational>& terms() const noexcept { return terms_; }
  bool is_zero() const noexcept { return terms_.empty(); }

  int degree() const {
    int d = 0;
    for (const auto& [e, c] : terms_) d = std::max(d, e[0] + e[1] + e[2]);
    return d;
  }

  Observable& operator+=(const Observable& o) {
    for (const auto& [e, c] : o.terms_) add_term(e, c);
    return *this;
  }

  Observable& operator*=(const BigRational& s) {
    if (s == 0) {
      terms_.clear();
      return *this;
    }
    for (auto& [e, c] : terms_) c *= s;
    return *this;
  }

  friend Observable operator+(Observable a, const Observable& b) { return a += b; }
  friend Observable operator-(Observable a, Observable b) {
    b *= BigRational(-1);
    return a += b;
  }

  friend Observable operator*(const Observable& a, const Observable& b) {
    Observable out;
    for (const auto& [ea, ca] : a.terms_) {
      for (const auto& [eb, cb] : b.terms_) {
        out.add_term({ea[0] + eb[0], ea[1] + eb[1], ea[2] + eb[2]}, ca * cb);
      }
    }
    return out;
  }

  Observable pow(int exponent) const {
    if (exponent < 0) fail(ErrorKind::invalid_input, "negative powers are not polynomials");
    Observable out = constant(1);
    for (int i = 0; i < exponent; ++i) out = out * *this;
    return out;
  }

  double operator()(double x1, double x2, double x3) const {
    double acc = 0.0;
    for (const auto& [e, c] : terms_) {
      acc += static_cast<double>(c) * std::pow(x1, e[0]) * std::pow(x2, e[1]) * std::pow(x3, e[2]);
    }
    return acc;
  }

  /// Value at spherical angles (polar θ from +x3, azimuth φ).
  double at_angles(double theta, double phi) const {
    return (*this)(std::sin(theta) * std::cos(phi), std::sin(theta) * std::sin(phi), std::cos(theta));
  }

  std::string to_string() const {
    if (terms_.empty()) return "0";
    std::string out;
    for (const auto& [e, c] : terms_) {
      if (!out.empty()) out += " + ";
      out += "(" + c.str() + ")";
      for (int i = 0; i < 3; ++i) {
        if (e[i] == 0) continue;
        out += "*x" + std::to_string(i + 1);
        if (e[i] > 1) out += "^" + std::to_string(e[i]);
      }
    }
    return out;
  }

 private:
  void add_term(const Exponent& e, const BigRational& c) {
    auto& slot = terms_[e];
    slot += c;
    if (slot == 0) terms_.erase(e);
  }

  std::map<Exponent, BigRational> terms_;
};

namespace detail {

// expr   := term (('+'|'-') term)*
// term   := unary (('*'|'/')? unary)*      juxtaposition multiplies
// unary  := ('+'|'-') unary | power
// power  := primary ('^' integer)?
// primary:= number | x1 | x2 | x3 | '(' expr ')'
class ObservableParser {
 public:
  explicit ObservableParser(std::string_view text) : text_(text) {}

  Observable parse() {
    Observable f = expr();
    skip_space();
    if (pos_ != text_.size()) error("unexpected character");
    return f;
  }

 private:
  [[noreturn]] void error(const std::string& what) const {
    fail(ErrorKind::invalid_input, "observable '" + std::string(text_) + "': " + what + " at position " +
                                       std::to_string(pos_));
  }

  void skip_space() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  char peek() {
    skip_space();
    return pos_ < text_.size() ? text_[pos_] : '\0';
  }

  bool starts_primary(char c) const { return std::isdigit(static_cast<unsigned char>(c)) || c == '.' || c == 'x' || c == '('; }

  Observable expr() {
    Observable f = term();
    for (;;) {
      const char c = peek();
      if (c == '+') {
        ++pos_;
        f += term();
      } else if (c == '-') {
        ++pos_;
        f = f - term();
      } else {
        return f;
      }
    }
  }

  Observable term() {
    Observable f = unary();
    for (;;) {
      const char c = peek();
      if (c == '*') {
        ++pos_;
        f = f * unary();
      } else if (c == '/') {
        ++pos_;
        const Observable d = unary();
        if (d.degree() != 0 || d.is_zero()) error("division only by a nonzero constant");
        f *= BigRational(1) / d.terms().begin()->second;
      } else if (starts_primary(c)) {
        f = f * unary();
      } else {
        return f;
      }
    }
  }

  Observable unary() {
    const char c = peek();
    if (c == '-') {
      ++pos_;
      Observable f = unary();
      f *= BigRational(-1);
      return f;
    }
    if (c == '+') {
      ++pos_;
      return unary();
    }
    return power();
  }

  Observable power() {
    Observable base = primary();
    if (peek() == '^') {
      ++pos_;
      skip_space();
      const std::size_t start = pos_;
      while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
      if (start == pos_) error("expected an integer exponent");
      return base.pow(std::stoi(std::string(text_.substr(start, pos_ - start))));
    }
    return base;
  }

  Observable primary() {
    const char c = peek();
    if (c == '(') {
      ++pos_;
      Observable f = expr();
      if (peek() != ')') error("expected ')'");
      ++pos_;
      return f;
    }
    if (c == 'x') {
      ++pos_;
      if (pos_ >= text_.size() || text_[pos_] < '1' || text_[pos_] > '3') error("expected x1, x2 or x3");
      return Observable::coordinate(text_[pos_++] - '0');
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return Observable::constant(number());
    error(c == '\0' ? "unexpected end of input" : "unexpected character");
  }

  BigRational number() {
    BigInt whole = 0;
    BigInt frac_den = 1;
    bool digits = false;
    while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
      whole = whole * 10 + (text_[pos_++] - '0');
      digits = true;
    }
    if (pos_ < text_.size() && text_[pos_] == '.') {
      ++pos_;
      while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
        whole = whole * 10 + (text_[pos_++] - '0');
        frac_den *= 10;
        digits = true;
      }
    }
    if (!digits) error("malformed number");
    return BigRational(whole, frac_den);
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

inline BigInt double_factorial(int n) {
  BigInt r = 1;
  for (int i = n; i > 1; i -= 2) r *= i;
  return r;
}

}  // namespace detail

inline Observable Observable::parse(std::string_view text) { return detail::ObservableParser(text).parse(); }

/// Exact average over the unit sphere (total mass 1):
/// ⟨x1^a x2^b x3^c⟩ = (a−1)!!(b−1)!!(c−1)!!/(a+b+c+1)!! for a, b, c even, else 0.
inline BigRational sphere_average(const Observable& f) {
  BigRational acc = 0;
  for (const auto& [e, c] : f.terms()) {
    if (e[0] % 2 || e[1] % 2 || e[2] % 2) continue;
    acc += c * BigRational(detail::double_factorial(e[0] - 1) * detail::double_factorial(e[1] - 1) *
                               detail::double_factorial(e[2] - 1),
                           detail::double_factorial(e[0] + e[1] + e[2] + 1));
  }
  return acc;
}

/// ⟨f,g⟩ = ∫ f·g over the unit-mass sphere (both real).
inline BigRational l2_pairing(const Observable& f, const Observable& g) { return sphere_average(f * g); }

/// sup over the sphere of |f|: a 1° grid (poles included), then compass
/// search from the best samples.
inline double sup_norm(const Observable& f) {
  if (f.is_zero()) return 0.0;
  constexpr int n_theta = 181;
  constexpr int n_phi = 360;
  const double pi = std::numbers::pi;
  std::vector<std::pair<double, std::pair<double, double>>> samples;
  samples.reserve(static_cast<std::size_t>(n_theta) * n_phi);
  for (int i = 0; i < n_theta; ++i) {
    const double theta = pi * i / (n_theta - 1);
    for (int j = 0; j < n_phi; ++j) {
      const double phi = 2.0 * pi * j / n_phi;
      samples.push_back({std::abs(f.at_angles(theta, phi)), {theta, phi}});
    }
  }
  const std::size_t keep = std::min<std::size_t>(16, samples.size());
  std::partial_sort(samples.begin(), samples.begin() + static_cast<std::ptrdiff_t>(keep), samples.end(),
                    [](const auto& a, const auto& b) { return a.first > b.first; });
  double best = samples.front().first;
  for (std::size_t s = 0; s < keep; ++s) {
    auto [theta, phi] = samples[s].second;
    double value = samples[s].first;
    double step = pi / (n_theta - 1);
    while (step > 1e-12) {
      bool moved = false;
      for (const auto& [dt, dp] : {std::pair{1.0, 0.0}, {-1.0, 0.0}, {0.0, 1.0}, {0.0, -1.0}}) {
        const double t = theta + dt * step;
        const double p = phi + dp * step;
        const double v = std::abs(f.at_angles(t, p));
        if (v > value) {
          value = v;
          theta = t;
          phi = p;
          moved = true;
        }
      }
      if (!moved) step *= 0.5;
    }
    best = std::max(best, value);
  }
  return best;
}

}  // namespace tqft::toeplitz
