#pragma once

// Combinatorial description of a closed surface cut along a system of
// pairwise-disjoint simple closed curves.

#include <algorithm>
#include <cstddef>
#include <map>
#include <numeric>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "tqft/error.hpp"

namespace tqft {

enum class Side { plus, minus };

inline char to_char(Side s) { return s == Side::plus ? '+' : '-'; }

struct Incidence {
  std::string curve;
  Side side = Side::plus;

  bool operator==(const Incidence&) const = default;
};

struct Piece {
  int genus = 0;
  std::vector<Incidence> boundary;

  bool operator==(const Piece&) const = default;
};

struct CutSystem {
  int n = 2;
  int g = 2;
  int d = 0;
  std::vector<std::string> curves;
  std::vector<Piece> pieces;
  int marked_piece = 0;

  bool operator==(const CutSystem&) const = default;

  std::optional<std::size_t> find_curve(const std::string& id) const {
    const auto it = std::find(curves.begin(), curves.end(), id);
    if (it == curves.end()) return std::nullopt;
    return static_cast<std::size_t>(it - curves.begin());
  }

  std::size_t curve_index(const std::string& id) const {
    if (auto i = find_curve(id)) return *i;
    fail(ErrorKind::invalid_input, "unknown curve id '" + id + "'");
  }
};

struct CutDiagnostic {
  std::string rule;
  std::string detail;
};

namespace detail {

/// Union-find connectivity of the piece graph, ignoring `skip_curve`.
inline bool pieces_connected(const CutSystem& cut, const std::string* skip_curve = nullptr) {
  const std::size_t count = cut.pieces.size();
  if (count <= 1) return true;
  std::vector<std::size_t> parent(count);
  std::iota(parent.begin(), parent.end(), std::size_t{0});
  auto find = [&](std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  std::map<std::string, std::size_t> first_piece;
  for (std::size_t p = 0; p < count; ++p) {
    for (const auto& inc : cut.pieces[p].boundary) {
      if (skip_curve && inc.curve == *skip_curve) continue;
      auto [it, inserted] = first_piece.emplace(inc.curve, p);
      if (!inserted) parent[find(p)] = find(it->second);
    }
  }
  const std::size_t root = find(0);
  for (std::size_t p = 1; p < count; ++p)
    if (find(p) != root) return false;
  return true;
}

}  // namespace detail

/// Checks every structural rule and reports the first one violated.
inline std::optional<CutDiagnostic> validate_cut_system(const CutSystem& cut) {
  if (cut.n < 2) return CutDiagnostic{"rank", "n must be at least 2"};
  if (cut.g < 0) return CutDiagnostic{"genus", "surface genus must be nonnegative"};
  if (cut.d < 0 || cut.d >= cut.n) {
    return CutDiagnostic{"marked residue", "d must satisfy 0 <= d < n"};
  }
  if (cut.pieces.empty()) return CutDiagnostic{"pieces", "a cut system needs at least one piece"};

  std::set<std::string> ids;
  for (const auto& c : cut.curves) {
    if (!ids.insert(c).second) return CutDiagnostic{"duplicate curve", "curve '" + c + "' listed twice"};
  }

  std::map<std::string, std::vector<Side>> sides;
  for (std::size_t p = 0; p < cut.pieces.size(); ++p) {
    const auto& piece = cut.pieces[p];
    if (piece.genus < 0) {
      return CutDiagnostic{"piece genus", "piece " + std::to_string(p) + " has negative genus"};
    }
    for (const auto& inc : piece.boundary) {
      if (!ids.count(inc.curve)) {
        return CutDiagnostic{"unknown curve",
                             "piece " + std::to_string(p) + " references undeclared curve '" + inc.curve + "'"};
      }
      sides[inc.curve].push_back(inc.side);
    }
  }

  for (const auto& c : cut.curves) {
    const auto& s = sides[c];
    if (s.size() != 2) {
      return CutDiagnostic{"curve incidence count", "curve '" + c + "' appears " + std::to_string(s.size()) +
                                                        " times; expected 2"};
    }
    if (s[0] == s[1]) {
      return CutDiagnostic{"curve sides", "curve '" + c + "' must appear once on each side"};
    }
  }

  long chi = 0;
  for (const auto& piece : cut.pieces) {
    chi += 2 - 2L * piece.genus - static_cast<long>(piece.boundary.size());
  }
  if (chi != 2 - 2L * cut.g) {
    return CutDiagnostic{"Euler characteristic", "pieces give χ = " + std::to_string(chi) +
                                                     " but the surface has χ = " + std::to_string(2 - 2 * cut.g)};
  }

  if (!detail::pieces_connected(cut)) {
    return CutDiagnostic{"connectivity", "the incidence graph of pieces is disconnected"};
  }

  if (cut.marked_piece < 0 || cut.marked_piece >= static_cast<int>(cut.pieces.size())) {
    return CutDiagnostic{"marked piece", "marked_piece index out of range"};
  }
  return std::nullopt;
}

inline void require_valid(const CutSystem& cut) {
  if (auto diag = validate_cut_system(cut)) {
    fail(ErrorKind::invalid_input, "invalid cut system (" + diag->rule + "): " + diag->detail);
  }
}

/// A curve separates when removing it disconnects the piece graph.
inline bool is_separating(const CutSystem& cut, const std::string& curve) {
  cut.curve_index(curve);
  return !detail::pieces_connected(cut, &curve);
}

/// Closed genus-g surface, nothing cut.
inline CutSystem uncut_surface(int n, int g, int d = 0) {
  return CutSystem{n, g, d, {}, {Piece{g, {}}}, 0};
}

/// One non-separating curve: a genus g−1 piece with two boundary circles.
inline CutSystem nonseparating_cut(int n, int g, int d = 0, const std::string& id = "c1") {
  return CutSystem{n, g, d, {id}, {Piece{g - 1, {{id, Side::plus}, {id, Side::minus}}}}, 0};
}

/// One separating curve splitting genus g into g1 + (g − g1); x on the first piece.
inline CutSystem separating_cut(int n, int g, int g1, int d = 0, const std::string& id = "c1") {
  return CutSystem{n, g, d, {id}, {Piece{g1, {{id, Side::plus}}}, Piece{g - g1, {{id, Side::minus}}}}, 0};
}

}  // namespace tqft
