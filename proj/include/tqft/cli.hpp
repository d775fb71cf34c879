#pragma once

// Command-line front end. `run` parses arguments into a RunConfig and
// dispatches; it never throws and returns the process exit status.

#include <algorithm>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "tqft/asymptotics.hpp"
#include "tqft/curve_ops.hpp"
#include "tqft/io.hpp"
#include "tqft/smatrix_cache.hpp"
#include "tqft/toeplitz.hpp"
#include "tqft/verlinde.hpp"

namespace tqft::cli {

using nlohmann::json;

struct RunConfig {
  std::string command;
  int n = 2;
  int k = 0;
  int genus = 2;
  int d = 0;
  int order = 2;
  double tolerance = kDefaultLimitTolerance;
  std::string k_range;
  std::string p_range;
  std::string system_path;
  std::string a_path;
  std::string b_path;
  std::string labels;
  std::string f = "x3";
  std::optional<std::string> g;
  std::string suite = "bms1,bms2,bms3,hs";
  bool check = false;
  std::string format;  // empty: the command's default
  std::string out_path;
  std::string json_path;
  ComputeOptions options;
};

namespace detail {

inline std::string quoted(const std::string& s) { return "\"" + s + "\""; }

inline std::string num(double x) { return io::format_double(x); }

inline json complex_json(std::complex<double> z) { return {{"re", z.real()}, {"im", z.imag()}}; }

inline json limit_json(const LimitEstimate& e) {
  return {{"re", e.value.real()},     {"im", e.value.imag()},          {"error_bound", e.error_bound},
          {"order", e.order_used},    {"converged", e.converged}};
}

class Emitter {
 public:
  Emitter(const RunConfig& cfg, std::ostream& out) : cfg_(cfg), out_(out) {}

  void primary(const std::string& text) const {
    if (cfg_.out_path.empty()) {
      out_ << text;
    } else {
      io::write_atomic(cfg_.out_path, text);
    }
  }

  /// Table output with its report: CSV plus a trailing "# report:" line, or
  /// one JSON document.
  void table(const std::string& csv, json tabular, const json& report) const {
    if (!cfg_.json_path.empty()) io::write_atomic(cfg_.json_path, report.dump(2) + "\n");
    if (format() == "json") {
      tabular["report"] = report;
      primary(tabular.dump(2) + "\n");
    } else {
      primary(csv + "# report: " + report.dump() + "\n");
    }
  }

  void document(const json& j) const {
    if (!cfg_.json_path.empty()) io::write_atomic(cfg_.json_path, j.dump(2) + "\n");
    primary(j.dump(2) + "\n");
  }

  const std::string& format() const { return cfg_.format; }

 private:
  const RunConfig& cfg_;
  std::ostream& out_;
};

inline void require_format(const RunConfig& cfg, std::initializer_list<const char*> allowed) {
  for (const char* f : allowed)
    if (cfg.format == f) return;
  std::string list;
  for (const char* f : allowed) list += (list.empty() ? "" : ", ") + std::string(f);
  fail(ErrorKind::invalid_input, "command '" + cfg.command + "' supports --format " + list);
}

struct SystemInputs {
  CutSystem cut;
  LabeledMulticurve a;
  LabeledMulticurve b;
};

inline SystemInputs load_system(const RunConfig& cfg, bool need_b) {
  if (cfg.system_path.empty()) fail(ErrorKind::invalid_input, "--system is required");
  if (cfg.a_path.empty()) fail(ErrorKind::invalid_input, "--a is required");
  SystemInputs in;
  in.cut = io::cut_system_from_json(io::read_json(cfg.system_path));
  in.a = io::multicurve_from_json(io::read_json(cfg.a_path), in.cut);
  if (need_b) {
    if (cfg.b_path.empty()) fail(ErrorKind::invalid_input, "--b is required");
    in.b = io::multicurve_from_json(io::read_json(cfg.b_path), in.cut);
  }
  return in;
}

// ---------------------------------------------------------------------------

inline int cmd_labels(const RunConfig& cfg, const Emitter& emit) {
  require_format(cfg, {"csv", "json"});
  if (cfg.n < 2) fail(ErrorKind::invalid_input, "n must be at least 2");
  if (cfg.k < 0) fail(ErrorKind::invalid_input, "k must be nonnegative");
  if (label_count(cfg.n, cfg.k) > cfg.options.max_labels) {
    fail(ErrorKind::resource_limit, "|Λ_k| exceeds --max-labels");
  }
  const auto labels = enumerate_labels(cfg.n, cfg.k);
  std::ostringstream csv;
  csv << "# n=" << cfg.n << " k=" << cfg.k << " count=" << labels.size() << "\n";
  csv << "index,label,level,weyl_dim\n";
  json rows = json::array();
  for (std::size_t i = 0; i < labels.size(); ++i) {
    const auto dim = weyl_dim(labels[i]);
    csv << i << "," << quoted(to_string(labels[i])) << "," << level(labels[i]) << "," << dim << "\n";
    rows.push_back({{"index", i}, {"label", labels[i].coords()}, {"level", level(labels[i])}, {"weyl_dim", dim}});
  }
  if (cfg.format == "json") {
    emit.primary(json{{"n", cfg.n}, {"k", cfg.k}, {"labels", rows}}.dump(2) + "\n");
  } else {
    emit.primary(csv.str());
  }
  return 0;
}

inline int cmd_smatrix(const RunConfig& cfg, const Emitter& emit) {
  require_format(cfg, {"csv", "json"});
  ComputeOptions opts = cfg.options;
  opts.max_dense_labels = std::min(opts.max_dense_labels, opts.max_labels);
  const SMatrix s = cached_s_matrix(cfg.n, cfg.k, opts);
  const auto labels = s.labels();
  std::ostringstream csv;
  csv << "# n=" << cfg.n << " k=" << cfg.k << " size=" << s.size() << "\n";
  csv << "row,col,lambda,mu,re,im\n";
  json entries = json::array();
  for (std::size_t i = 0; i < s.size(); ++i) {
    for (std::size_t j = 0; j < s.size(); ++j) {
      const auto z = s(i, j);
      csv << i << "," << j << "," << quoted(to_string(labels[i])) << "," << quoted(to_string(labels[j])) << ","
          << num(z.real()) << "," << num(z.imag()) << "\n";
      entries.push_back({{"row", i}, {"col", j}, {"re", z.real()}, {"im", z.imag()}});
    }
  }
  json report = {{"n", cfg.n}, {"k", cfg.k}, {"size", s.size()}};
  bool ok = true;
  if (cfg.check) {
    const auto inv = check_invariants(s);
    const auto ratio = ratio_consistency_check(s);
    ok = inv.passed() && ratio.max_error < 1e-9;
    report["unitarity_error"] = inv.unitarity_error;
    report["symmetry_error"] = inv.symmetry_error;
    report["charge_conjugation_error"] = inv.charge_conjugation_error;
    report["s00"] = inv.s00;
    report["min_vacuum_column"] = inv.min_vacuum_column;
    report["ratio_consistency_error"] = ratio.max_error;
    report["passed"] = ok;
  }
  emit.table(csv.str(), json{{"entries", entries}}, report);
  return ok ? 0 : 1;
}

inline int cmd_verlinde(const RunConfig& cfg, const Emitter& emit) {
  require_format(cfg, {"json", "text"});
  if (cfg.genus < 0) fail(ErrorKind::invalid_input, "genus must be nonnegative");
  const auto labels = io::parse_weight_list(cfg.labels, cfg.n);
  for (const auto& w : labels) require_label(w, cfg.k);
  const LazySMatrix s(cfg.n, cfg.k, cfg.options);
  const VerlindeContext<LazySMatrix> ctx(s);
  const auto v = ctx.evaluate(cfg.genus, labels);
  if (cfg.format == "text") {
    emit.primary(std::to_string(v.value) + "\n");
  } else {
    emit.document({{"value", v.value}, {"residual", v.residual}});
  }
  return 0;
}

inline int cmd_dim(const RunConfig& cfg, const Emitter& emit) {
  require_format(cfg, {"text", "json"});
  const auto v = dim_z_value(cfg.n, cfg.k, cfg.genus, cfg.d, cfg.options);
  if (cfg.format == "json") {
    emit.document({{"value", v.value}, {"residual", v.residual}});
  } else {
    emit.primary(std::to_string(v.value) + "\n");
  }
  return 0;
}

inline int cmd_hs(const RunConfig& cfg, const Emitter& emit) {
  require_format(cfg, {"json", "text"});
  const auto in = load_system(cfg, true);
  if (cfg.k < 1) fail(ErrorKind::invalid_input, "--k must be at least 1");
  auto table = std::make_shared<const BlockTable>(block_table(in.cut, cfg.k, cfg.options));
  const auto a = curve_operator(table, in.a, cfg.options);
  const auto b = curve_operator(table, in.b, cfg.options);
  const auto v = hs_inner(a, b);
  if (cfg.format == "text") {
    emit.primary(num(v.real()) + " " + num(v.imag()) + " " + std::to_string(table->total_dim()) + "\n");
  } else {
    emit.document({{"re", v.real()}, {"im", v.imag()}, {"dim", table->total_dim()}});
  }
  return 0;
}

inline std::string sequence_csv(const ScaledSequence& seq, bool with_p) {
  std::ostringstream csv;
  csv << "# m=" << seq.m << " scaling=" << seq.scaling << "\n";
  csv << (with_p ? "p," : "") << "k,raw_re,raw_im,scaled_re,scaled_im\n";
  for (const auto& pt : seq.points) {
    if (with_p) csv << *pt.p << ",";
    csv << pt.k << "," << num(pt.raw.real()) << "," << num(pt.raw.imag()) << "," << num(pt.scaled.real()) << ","
        << num(pt.scaled.imag()) << "\n";
  }
  return csv.str();
}

inline json sequence_json(const ScaledSequence& seq) {
  json pts = json::array();
  for (const auto& pt : seq.points) {
    json row = {{"k", pt.k}, {"raw", complex_json(pt.raw)}, {"scaled", complex_json(pt.scaled)}};
    if (pt.p) row["p"] = *pt.p;
    pts.push_back(row);
  }
  return {{"m", seq.m}, {"scaling", seq.scaling}, {"points", pts}};
}

inline int cmd_limit(const RunConfig& cfg, const Emitter& emit) {
  require_format(cfg, {"csv", "json"});
  if (cfg.k_range.empty()) fail(ErrorKind::invalid_input, "--k range is required");
  const auto ks = io::parse_range(cfg.k_range);
  if (ks.size() < static_cast<std::size_t>(std::max(cfg.order, 0)) + 2) {
    fail(ErrorKind::invalid_input, "insufficient points for order " + std::to_string(cfg.order) + ": need " +
                                       std::to_string(cfg.order + 2) + ", have " + std::to_string(ks.size()));
  }
  const auto in = load_system(cfg, true);
  const auto seq = scaled_hs_sequence(in.cut, in.a, in.b, ks, cfg.options);
  const auto est = richardson_extrapolate(seq, cfg.order, cfg.tolerance);
  emit.table(sequence_csv(seq, false), sequence_json(seq), limit_json(est));
  return 0;
}

inline int cmd_mn_check(const RunConfig& cfg, const Emitter& emit) {
  require_format(cfg, {"csv", "json"});
  if (cfg.p_range.empty()) fail(ErrorKind::invalid_input, "--p range is required");
  const auto ps = io::parse_range(cfg.p_range);
  if (ps.size() < static_cast<std::size_t>(std::max(cfg.order, 0)) + 2) {
    fail(ErrorKind::invalid_input, "insufficient points for order " + std::to_string(cfg.order) + ": need " +
                                       std::to_string(cfg.order + 2) + ", have " + std::to_string(ps.size()));
  }
  const auto in = load_system(cfg, true);
  const auto mn = mn_scaled_sequence(in.cut, in.a, in.b, ps, cfg.options);
  const auto mn_est = richardson_extrapolate(mn, cfg.order, cfg.tolerance);
  json report = {{"mn_limit", limit_json(mn_est)}};
  // The same operators under the k^{−m} scaling, for comparison.
  std::vector<int> ks;
  for (const auto& pt : mn.points)
    if (pt.k > 0) ks.push_back(pt.k);
  if (ks.size() == mn.points.size()) {
    const auto kseq = scaled_hs_sequence(in.cut, in.a, in.b, ks, cfg.options);
    const auto k_est = richardson_extrapolate(kseq, cfg.order, cfg.tolerance);
    const auto last_mn = mn.points.back().scaled;
    const auto last_k = kseq.points.back().scaled;
    report["k_limit"] = limit_json(k_est);
    report["limits_agree"] = limits_agree(mn_est, k_est);
    report["last_relative_difference"] = std::abs(last_mn - last_k) / std::max(std::abs(last_k), 1e-300);
  }
  emit.table(sequence_csv(mn, true), sequence_json(mn), report);
  return 0;
}

inline int cmd_norm_check(const RunConfig& cfg, const Emitter& emit) {
  require_format(cfg, {"csv", "json"});
  if (cfg.k_range.empty()) fail(ErrorKind::invalid_input, "--k range is required");
  const auto ks = io::parse_range(cfg.k_range);
  const auto in = load_system(cfg, false);
  const auto report = norm_limit_check(in.cut, in.a, ks, cfg.options);
  std::ostringstream csv;
  csv << "# m=" << scaling_exponent(in.cut.n, in.cut.g) << "\n";
  csv << "k,norm,dim,gap\n";
  json rows = json::array();
  for (const auto& r : report.rows) {
    csv << r.k << "," << num(r.norm) << "," << r.dim << "," << num(r.gap) << "\n";
    rows.push_back({{"k", r.k}, {"norm", r.norm}, {"dim", r.dim}, {"gap", r.gap}});
  }
  const json summary = {{"gap_nonnegative", report.gap_nonnegative},
                        {"gap_nonincreasing", report.gap_nonincreasing},
                        {"gap_within_bound", report.gap_within_bound},
                        {"passed", report.passed()}};
  emit.table(csv.str(), json{{"rows", rows}}, summary);
  return report.passed() ? 0 : 1;
}

inline int cmd_toeplitz_check(const RunConfig& cfg, const Emitter& emit) {
  require_format(cfg, {"csv", "json"});
  using namespace tqft::toeplitz;
  if (cfg.k_range.empty()) fail(ErrorKind::invalid_input, "--k range is required");
  const auto ks = io::parse_range(cfg.k_range);
  for (int k : ks)
    if (k < 1) fail(ErrorKind::invalid_input, "degrees must be at least 1");
  const Observable f = Observable::parse(cfg.f);
  const Observable g = Observable::parse(cfg.g.value_or(cfg.f));

  std::vector<std::string> suites;
  {
    std::stringstream parts(cfg.suite);
    std::string s;
    while (std::getline(parts, s, ',')) {
      if (s != "bms1" && s != "bms2" && s != "bms3" && s != "hs") {
        fail(ErrorKind::invalid_input, "unknown suite '" + s + "' (expected bms1, bms2, bms3, hs)");
      }
      suites.push_back(s);
    }
    if (suites.empty()) fail(ErrorKind::invalid_input, "--suite is empty");
  }

  std::ostringstream csv;
  csv << "# m=1\n";
  json tables = json::object();
  json report = json::object();
  bool all = true;
  for (const auto& s : suites) {
    json rows = json::array();
    bool passed = false;
    if (s == "bms1") {
      const auto r = bms1_check(f, ks);
      csv << "# suite=bms1 sup=" << num(r.sup) << "\nk,norm,gap\n";
      for (const auto& row : r.rows) {
        csv << row.k << "," << num(row.norm) << "," << num(row.gap) << "\n";
        rows.push_back({{"k", row.k}, {"norm", row.norm}, {"gap", row.gap}});
      }
      passed = r.passed;
      report[s] = {{"sup", r.sup}, {"passed", passed}};
    } else if (s == "bms2") {
      const auto r = bms2_check(f, g, ks);
      csv << "# suite=bms2\nk,defect,scaled_defect\n";
      for (const auto& row : r.rows) {
        csv << row.k << "," << num(row.defect) << "," << num(row.scaled) << "\n";
        rows.push_back({{"k", row.k}, {"defect", row.defect}, {"scaled_defect", row.scaled}});
      }
      passed = r.passed;
      report[s] = {{"passed", passed}};
    } else {
      const auto r = s == "bms3" ? bms3_check(f, ks) : hs_limit_check(f, g, ks);
      csv << "# suite=" << s << " target=" << num(r.target) << "\nk,value,target,error\n";
      for (const auto& row : r.rows) {
        csv << row.k << "," << num(row.value) << "," << num(row.target) << "," << num(row.error) << "\n";
        rows.push_back({{"k", row.k}, {"value", row.value}, {"target", row.target}, {"error", row.error}});
      }
      passed = r.passed;
      report[s] = {{"target", r.target}, {"constant", r.constant}, {"passed", passed}};
    }
    tables[s] = rows;
    all = all && passed;
  }
  report["passed"] = all;
  emit.table(csv.str(), json{{"m", 1}, {"tables", tables}}, report);
  return all ? 0 : 1;
}

}  // namespace detail

inline int dispatch(RunConfig cfg, std::ostream& out) {
  static const std::map<std::string, std::string> default_format = {
      {"labels", "csv"},   {"smatrix", "csv"}, {"verlinde", "json"},   {"dim", "text"},
      {"hs", "json"},      {"limit", "csv"},   {"mn-check", "csv"},    {"norm-check", "csv"},
      {"toeplitz-check", "csv"}};
  const auto it = default_format.find(cfg.command);
  if (it == default_format.end()) fail(ErrorKind::invalid_input, "unknown command '" + cfg.command + "'");
  if (cfg.format.empty()) cfg.format = it->second;
  if (cfg.options.threads == 0) fail(ErrorKind::invalid_input, "--threads must be positive");
  const detail::Emitter emit(cfg, out);
  if (cfg.command == "labels") return detail::cmd_labels(cfg, emit);
  if (cfg.command == "smatrix") return detail::cmd_smatrix(cfg, emit);
  if (cfg.command == "verlinde") return detail::cmd_verlinde(cfg, emit);
  if (cfg.command == "dim") return detail::cmd_dim(cfg, emit);
  if (cfg.command == "hs") return detail::cmd_hs(cfg, emit);
  if (cfg.command == "limit") return detail::cmd_limit(cfg, emit);
  if (cfg.command == "mn-check") return detail::cmd_mn_check(cfg, emit);
  if (cfg.command == "norm-check") return detail::cmd_norm_check(cfg, emit);
  return detail::cmd_toeplitz_check(cfg, emit);
}

inline void report_error(std::ostream& err, ErrorKind kind, const std::string& message) {
  err << json{{"error", to_string(kind)}, {"message", message}, {"exit_code", exit_code(kind)}}.dump() << "\n";
}

/// Parses `args` (without the program name) and runs the command.
inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  RunConfig cfg;
  CLI::App app{"TQFT curve operators, Verlinde dimensions and Toeplitz model checks", "tqft"};
  app.require_subcommand(1);
  std::size_t max_labels = cfg.options.max_labels;
  std::size_t max_blocks = cfg.options.max_blocks;
  unsigned threads = cfg.options.threads;

  auto common = [&](CLI::App* sub, std::initializer_list<const char*> formats) {
    std::vector<std::string> allowed(formats.begin(), formats.end());
    sub->add_option("--format", cfg.format, "output format")->check(CLI::IsMember(allowed));
    sub->add_option("--out", cfg.out_path, "write the primary output to FILE (atomically)");
    sub->add_option("--json", cfg.json_path, "also write the JSON report to FILE");
    sub->add_option("--threads", threads, "worker threads")->check(CLI::PositiveNumber);
    sub->add_option("--max-labels", max_labels, "cap on |Λ_k|")->check(CLI::PositiveNumber);
    sub->add_option("--max-blocks", max_blocks, "cap on the number of labelings")->check(CLI::PositiveNumber);
  };
  auto nk = [&](CLI::App* sub) {
    sub->add_option("--n", cfg.n, "SU(n)")->required()->check(CLI::Range(2, 8));
    sub->add_option("--k", cfg.k, "level")->required()->check(CLI::NonNegativeNumber);
  };
  auto pair_inputs = [&](CLI::App* sub, bool with_b) {
    sub->add_option("--system", cfg.system_path, "cut system JSON")->required();
    sub->add_option("--a", cfg.a_path, "multicurve JSON")->required();
    if (with_b) sub->add_option("--b", cfg.b_path, "multicurve JSON")->required();
  };

  auto* labels = app.add_subcommand("labels", "enumerate Λ_k");
  nk(labels);
  common(labels, {"csv", "json"});

  auto* smatrix = app.add_subcommand("smatrix", "dense S-matrix");
  nk(smatrix);
  smatrix->add_flag("--check", cfg.check, "verify unitarity, symmetry, S² = C and ratio consistency");
  common(smatrix, {"csv", "json"});

  auto* verlinde = app.add_subcommand("verlinde", "Verlinde dimension of a labeled surface");
  nk(verlinde);
  verlinde->add_option("--genus", cfg.genus, "genus")->required();
  verlinde->add_option("--labels", cfg.labels, "boundary weights a,b:c,d,...");
  common(verlinde, {"json", "text"});

  auto* dim = app.add_subcommand("dim", "dimension of Z^(k) of a closed surface with marked point");
  nk(dim);
  dim->add_option("--genus", cfg.genus, "genus")->required();
  dim->add_option("--d", cfg.d, "residue of the marked label");
  common(dim, {"text", "json"});

  auto* hs = app.add_subcommand("hs", "Hilbert–Smith pairing of two curve operators");
  pair_inputs(hs, true);
  hs->add_option("--k", cfg.k, "level")->required();
  common(hs, {"json", "text"});

  auto* limit = app.add_subcommand("limit", "scaled HS sequence and its extrapolated limit");
  pair_inputs(limit, true);
  limit->add_option("--k", cfg.k_range, "levels: start:stop:linear|geometric or a,b,c")->required();
  limit->add_option("--order", cfg.order, "extrapolation order")->check(CLI::NonNegativeNumber);
  limit->add_option("--tolerance", cfg.tolerance, "convergence tolerance");
  common(limit, {"csv", "json"});

  auto* mn = app.add_subcommand("mn-check", "skein-normalized SU(2) sequence");
  pair_inputs(mn, true);
  mn->add_option("--p", cfg.p_range, "even p values: start:stop:linear|geometric or a,b,c")->required();
  mn->add_option("--order", cfg.order, "extrapolation order")->check(CLI::NonNegativeNumber);
  mn->add_option("--tolerance", cfg.tolerance, "convergence tolerance");
  common(mn, {"csv", "json"});

  auto* norm = app.add_subcommand("norm-check", "operator norm against the sup of the holonomy function");
  pair_inputs(norm, false);
  norm->add_option("--k", cfg.k_range, "levels")->required();
  common(norm, {"csv", "json"});

  auto* toep = app.add_subcommand("toeplitz-check", "Berezin–Toeplitz checks on the sphere");
  toep->add_option("--f", cfg.f, "observable, e.g. \"x3^2 - 1/3\"");
  toep->add_option("--g", cfg.g, "second observable (defaults to f)");
  toep->add_option("--k", cfg.k_range, "degrees")->required();
  toep->add_option("--suite", cfg.suite, "comma list of bms1, bms2, bms3, hs");
  common(toep, {"csv", "json"});

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    report_error(err, ErrorKind::invalid_input, e.what());
    return exit_code(ErrorKind::invalid_input);
  }

  cfg.command = app.get_subcommands().front()->get_name();
  cfg.options.threads = threads;
  cfg.options.max_labels = max_labels;
  cfg.options.max_blocks = max_blocks;
  try {
    return dispatch(std::move(cfg), out);
  } catch (const Error& e) {
    report_error(err, e.kind(), e.what());
    return exit_code(e.kind());
  } catch (const std::bad_alloc&) {
    report_error(err, ErrorKind::resource_limit, "out of memory");
    return exit_code(ErrorKind::resource_limit);
  } catch (const std::exception& e) {
    report_error(err, ErrorKind::invalid_input, e.what());
    return exit_code(ErrorKind::invalid_input);
  }
}

}  // namespace tqft::cli
