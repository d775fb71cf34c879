#pragma once

// JSON readers for cut systems and multicurves, range syntax, number
// formatting and atomic file output.

#include <cerrno>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"

#include "tqft/curve_ops.hpp"
#include "tqft/cut_system.hpp"
#include "tqft/error.hpp"
#include "tqft/lie_data.hpp"

namespace tqft::io {

using nlohmann::json;

inline std::string read_text(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorKind::invalid_input, "file not found: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

inline json read_json(const std::string& path) {
  const std::string text = read_text(path);
  try {
    return json::parse(text);
  } catch (const json::exception& e) {
    fail(ErrorKind::invalid_input, path + ": malformed JSON (" + e.what() + ")");
  }
}

namespace detail {

template <class T>
T field(const json& j, const char* key, const std::string& where) {
  if (!j.is_object() || !j.contains(key)) fail(ErrorKind::invalid_input, where + ": missing field '" + key + "'");
  try {
    return j.at(key).get<T>();
  } catch (const json::exception&) {
    fail(ErrorKind::invalid_input, where + ": field '" + key + "' has the wrong type");
  }
}

inline Side parse_side(const json& j, const std::string& where) {
  if (!j.is_string()) fail(ErrorKind::invalid_input, where + ": side must be \"+\" or \"-\"");
  const auto s = j.get<std::string>();
  if (s == "+") return Side::plus;
  if (s == "-") return Side::minus;
  fail(ErrorKind::invalid_input, where + ": side must be \"+\" or \"-\", got \"" + s + "\"");
}

inline DominantWeight parse_weight(const json& j, int n, const std::string& where) {
  if (!j.is_array()) fail(ErrorKind::invalid_input, where + ": weight must be an array of Dynkin labels");
  std::vector<int> coords;
  for (const auto& v : j) {
    if (!v.is_number_integer()) fail(ErrorKind::invalid_input, where + ": Dynkin labels must be integers");
    coords.push_back(v.get<int>());
  }
  if (static_cast<int>(coords.size()) != n - 1) {
    fail(ErrorKind::invalid_input, where + ": expected " + std::to_string(n - 1) + " Dynkin labels");
  }
  try {
    return DominantWeight(std::move(coords));
  } catch (const Error& e) {
    fail(ErrorKind::invalid_input, where + ": " + e.what());
  }
}

}  // namespace detail

/// {"n":2,"g":2,"d":0,"curves":["c1"],
///  "pieces":[{"genus":1,"boundary":[["c1","+"],["c1","-"]]}],"marked_piece":0}
inline CutSystem cut_system_from_json(const json& j) {
  const std::string where = "cut system";
  CutSystem cut;
  cut.n = detail::field<int>(j, "n", where);
  cut.g = detail::field<int>(j, "g", where);
  cut.d = j.contains("d") ? detail::field<int>(j, "d", where) : 0;
  cut.curves = detail::field<std::vector<std::string>>(j, "curves", where);
  cut.marked_piece = j.contains("marked_piece") ? detail::field<int>(j, "marked_piece", where) : 0;
  const json pieces = detail::field<json>(j, "pieces", where);
  if (!pieces.is_array()) fail(ErrorKind::invalid_input, where + ": 'pieces' must be an array");
  for (const auto& pj : pieces) {
    Piece piece;
    piece.genus = detail::field<int>(pj, "genus", where + " piece");
    const json boundary = detail::field<json>(pj, "boundary", where + " piece");
    if (!boundary.is_array()) fail(ErrorKind::invalid_input, where + ": 'boundary' must be an array");
    for (const auto& bj : boundary) {
      if (!bj.is_array() || bj.size() != 2 || !bj[0].is_string()) {
        fail(ErrorKind::invalid_input, where + ": boundary entries look like [\"curve\", \"+\"]");
      }
      piece.boundary.push_back({bj[0].get<std::string>(), detail::parse_side(bj[1], where)});
    }
    cut.pieces.push_back(std::move(piece));
  }
  require_valid(cut);
  return cut;
}

inline json to_json(const CutSystem& cut) {
  json pieces = json::array();
  for (const auto& p : cut.pieces) {
    json boundary = json::array();
    for (const auto& inc : p.boundary) boundary.push_back({inc.curve, std::string(1, to_char(inc.side))});
    pieces.push_back({{"genus", p.genus}, {"boundary", boundary}});
  }
  return {{"n", cut.n},           {"g", cut.g},         {"d", cut.d},
          {"curves", cut.curves}, {"pieces", pieces}, {"marked_piece", cut.marked_piece}};
}

/// {"support":["c1"],"labels":{"c1":[1]},"orientations":{"c1":"+"}}
inline LabeledMulticurve multicurve_from_json(const json& j, const CutSystem& cut) {
  const std::string where = "multicurve";
  LabeledMulticurve mc;
  mc.support = detail::field<std::vector<std::string>>(j, "support", where);
  const json labels = j.contains("labels") ? j.at("labels") : json::object();
  if (!labels.is_object()) fail(ErrorKind::invalid_input, where + ": 'labels' must be an object");
  for (const auto& [curve, w] : labels.items()) {
    mc.labels.emplace(curve, detail::parse_weight(w, cut.n, where + " label of '" + curve + "'"));
  }
  if (j.contains("orientations")) {
    const json& o = j.at("orientations");
    if (!o.is_object()) fail(ErrorKind::invalid_input, where + ": 'orientations' must be an object");
    for (const auto& [curve, s] : o.items()) mc.orientations.emplace(curve, detail::parse_side(s, where));
  }
  validate_multicurve(cut, mc);
  return mc;
}

inline json to_json(const LabeledMulticurve& mc) {
  json labels = json::object();
  json orientations = json::object();
  for (const auto& c : mc.support) {
    labels[c] = mc.labels.at(c).coords();
    orientations[c] = std::string(1, to_char(mc.orientation(c)));
  }
  return {{"support", mc.support}, {"labels", labels}, {"orientations", orientations}};
}

/// "a,b:c,d" → weights (a,b), (c,d). Empty text gives no weights.
inline std::vector<DominantWeight> parse_weight_list(const std::string& text, int n) {
  std::vector<DominantWeight> out;
  if (text.empty()) return out;
  std::stringstream groups(text);
  std::string group;
  while (std::getline(groups, group, ':')) {
    std::vector<int> coords;
    std::stringstream parts(group);
    std::string part;
    while (std::getline(parts, part, ',')) {
      std::size_t used = 0;
      int v = 0;
      try {
        v = std::stoi(part, &used);
      } catch (const std::exception&) {
        used = 0;
      }
      if (used == 0 || used != part.size()) fail(ErrorKind::invalid_input, "bad Dynkin label '" + part + "'");
      coords.push_back(v);
    }
    if (static_cast<int>(coords.size()) != n - 1) {
      fail(ErrorKind::invalid_input, "weight '" + group + "' needs " + std::to_string(n - 1) + " coordinates");
    }
    try {
      out.emplace_back(std::move(coords));
    } catch (const Error& e) {
      fail(ErrorKind::invalid_input, e.what());
    }
  }
  return out;
}

namespace detail {
inline int parse_int(const std::string& s, const std::string& what) {
  std::size_t used = 0;
  long v = 0;
  try {
    v = std::stol(s, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != s.size() || v < std::numeric_limits<int>::min() || v > std::numeric_limits<int>::max()) {
    fail(ErrorKind::invalid_input, "bad integer '" + s + "' in " + what);
  }
  return static_cast<int>(v);
}
}  // namespace detail

/// "start:stop:linear" (step 1), "start:stop:geometric" (doubling),
/// "start:stop" (linear) or a comma list "8,16,32".
inline std::vector<int> parse_range(const std::string& text) {
  std::vector<int> out;
  if (text.find(':') == std::string::npos) {
    std::stringstream parts(text);
    std::string part;
    while (std::getline(parts, part, ',')) out.push_back(detail::parse_int(part, "list '" + text + "'"));
  } else {
    std::vector<std::string> fields;
    std::stringstream parts(text);
    std::string part;
    while (std::getline(parts, part, ':')) fields.push_back(part);
    if (fields.size() < 2 || fields.size() > 3) fail(ErrorKind::invalid_input, "range '" + text + "' is not start:stop:mode");
    const int start = detail::parse_int(fields[0], "range '" + text + "'");
    const int stop = detail::parse_int(fields[1], "range '" + text + "'");
    const std::string mode = fields.size() == 3 ? fields[2] : "linear";
    if (mode == "linear") {
      for (int v = start; v <= stop; ++v) out.push_back(v);
    } else if (mode == "geometric") {
      if (start <= 0) fail(ErrorKind::invalid_input, "geometric ranges must start above 0");
      for (long v = start; v <= stop; v *= 2) out.push_back(static_cast<int>(v));
    } else {
      fail(ErrorKind::invalid_input, "range mode must be linear or geometric, got '" + mode + "'");
    }
  }
  if (out.empty()) fail(ErrorKind::invalid_input, "range '" + text + "' is empty");
  return out;
}

/// Round-trip decimal form of a double.
inline std::string format_double(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

/// Write through a sibling temporary and rename over the target.
inline void write_atomic(const std::string& path, const std::string& content) {
  namespace fs = std::filesystem;
  const fs::path target(path);
  fs::path tmp = target;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) fail(ErrorKind::invalid_input, "cannot write " + tmp.string());
    out << content;
    out.flush();
    if (!out) fail(ErrorKind::invalid_input, "write to " + tmp.string() + " failed");
  }
  std::error_code ec;
  fs::rename(tmp, target, ec);
  if (ec) {
    fs::remove(tmp, ec);
    fail(ErrorKind::invalid_input, "cannot move output into place at " + path);
  }
}

}  // namespace tqft::io
