#ifndef SUITA_CLI_RUN_HPP
#define SUITA_CLI_RUN_HPP

#include "suita/cli/acceptance.hpp"

#include <cstdio>
#include <filesystem>
#include <iostream>

namespace suita::cli {

namespace fs = std::filesystem;

/// %.17g, with nan / inf / -inf spelled out.
inline std::string format_real(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

inline std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char ch : s) {
    if (ch == '"') out += '"';
    out += ch;
  }
  return out + "\"";
}

/// The quantity a record is summarized by in the CSV: the first of a fixed
/// list of names it carries, else its first quantity.
inline const Quantity* headline(const ReportRecord& r) {
  static const char* preferred[] = {"ratio",
                                    "suita_ratio",
                                    "pi_rho_kernel",
                                    "sum_minus_product",
                                    "sum",
                                    "max_abs_r1",
                                    "d2_mass",
                                    "final_gap",
                                    "ratio_at_smallest_a",
                                    "max_abs_laplacian_plus_one",
                                    "kernel_spread",
                                    "two_a_over_b",
                                    "rhs_capacity_sq",
                                    "residual_mass",
                                    "residual",
                                    "green",
                                    "capacity",
                                    "kernel",
                                    "min_relative_deficit_drop",
                                    "failed_checks"};
  for (const char* name : preferred) {
    for (const auto& q : r.quantities) {
      if (q.name == name) return &q;
    }
  }
  return r.quantities.empty() ? nullptr : &r.quantities.front();
}

inline std::string csv_summary(const std::vector<ReportRecord>& records) {
  std::string out = "command,input-id,quantity,value,margin,tol,pass\n";
  for (const auto& r : records) {
    const Quantity* q = headline(r);
    out += csv_field(r.command) + "," + csv_field(r.input_id) + "," + (q ? csv_field(q->name) : "error") + "," +
           format_real(q ? q->value : std::numeric_limits<double>::quiet_NaN()) + "," + format_real(r.margin) + "," +
           format_real(r.tolerance) + "," + (r.pass ? "true" : "false") + "\n";
  }
  return out;
}

inline std::string plot_text(const PlotSeries& p) {
  std::string out = "# " + p.x_label + " " + p.y_label + "\n";
  for (const auto& row : p.rows) out += format_real(row[0]) + " " + format_real(row[1]) + "\n";
  return out;
}

inline void write_file(const fs::path& path, const std::string& content) {
  std::FILE* f = std::fopen(path.string().c_str(), "wb");
  if (!f) throw Error(ErrorKind::Config, "cannot write " + path.string());
  const bool ok = std::fwrite(content.data(), 1, content.size(), f) == content.size();
  if (std::fclose(f) != 0 || !ok) throw Error(ErrorKind::Config, "failed writing " + path.string());
}

inline std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline nlohmann::json to_json(const PlotSeries& p) {
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& r : p.rows) rows.push_back({finite_or_null(r[0]), finite_or_null(r[1])});
  return {{"name", p.name}, {"x", p.x_label}, {"y", p.y_label}, {"rows", rows}};
}

inline nlohmann::json to_json(const CriterionSummary& s) {
  return {{"id", s.id},       {"title", s.title},         {"pass", s.pass},     {"seconds", s.seconds},
          {"budget", s.budget}, {"checks", s.checks}, {"failed", s.failed}};
}

/// Cache entry: everything needed to reproduce the report files.
inline nlohmann::json cache_entry(const std::string& hash, const RunResult& res) {
  nlohmann::json j = {{"hash", hash}, {"records", nlohmann::json::array()}, {"plots", nlohmann::json::array()},
                      {"criteria", nlohmann::json::array()}};
  for (const auto& r : res.records) j["records"].push_back(to_json(r));
  for (const auto& p : res.plots) j["plots"].push_back(to_json(p));
  for (const auto& c : res.criteria) j["criteria"].push_back(to_json(c));
  return j;
}

/// Reads a cache entry back. Any defect throws; pass is recomputed from the
/// stored margin and tolerance rather than trusted.
inline RunResult parse_cache_entry(const nlohmann::json& j, const std::string& hash) {
  if (j.at("hash").get<std::string>() != hash) throw std::runtime_error("hash mismatch");
  RunResult res;
  for (const auto& r : j.at("records")) {
    auto rec = record_from_json(r);
    rec.pass = rec.error.empty() && std::isfinite(rec.margin) && rec.margin >= -rec.tolerance;
    rec.cached = true;
    res.records.push_back(std::move(rec));
  }
  for (const auto& p : j.at("plots")) {
    PlotSeries s{p.at("name"), p.at("x"), p.at("y"), {}};
    for (const auto& row : p.at("rows")) {
      s.rows.push_back({row.at(0).is_null() ? std::nan("") : row.at(0).get<double>(),
                        row.at(1).is_null() ? std::nan("") : row.at(1).get<double>()});
    }
    res.plots.push_back(std::move(s));
  }
  for (const auto& c : j.at("criteria")) {
    res.criteria.push_back({c.at("id"), c.at("title"), c.at("pass"), c.at("seconds"), c.at("budget"), c.at("checks"),
                            c.at("failed")});
  }
  return res;
}

struct RunOutcome {
  RunResult result;
  std::string hash;
  bool cached = false;
  int exit_code = 0;
  double wall_seconds = 0.0;
  std::vector<std::string> warnings;
  fs::path json_path;
  fs::path csv_path;
};

/// Checks that the output directory exists (creating it) and is writable.
inline void prepare_out_dir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir)) throw ConfigError("output directory " + dir.string() + " cannot be created");
  const fs::path probe = dir / ".write-probe";
  std::FILE* f = std::fopen(probe.string().c_str(), "wb");
  if (!f) throw ConfigError("output directory " + dir.string() + " is not writable");
  std::fclose(f);
  fs::remove(probe, ec);
}

inline RunResult compute(const RunConfig& cfg) {
  if (cfg.command == "all") return run_acceptance(cfg.tol);
  return dispatch_module(cfg);
}

/// Runs one configuration and writes <command>.json, <command>.csv and the
/// plot files under the output directory. Throws ConfigError before writing
/// anything when the directory is unusable.
inline RunOutcome execute(const RunConfig& cfg, std::ostream& log = std::cerr) {
  RunOutcome out;
  out.hash = config_hash(cfg);
  const fs::path dir(cfg.out_dir);
  prepare_out_dir(dir);

  const auto start = std::chrono::steady_clock::now();
  const fs::path cache_path = dir / "cache" / (out.hash + ".json");
  if (cfg.cache && fs::exists(cache_path)) {
    try {
      out.result = parse_cache_entry(nlohmann::json::parse(read_file(cache_path)), out.hash);
      out.cached = true;
    } catch (const std::exception& e) {
      out.warnings.push_back("ignored corrupt cache entry " + cache_path.string() + " (" + e.what() + ")");
      log << "warning: " << out.warnings.back() << "\n";
    }
  }
  if (!out.cached) {
    out.result = compute(cfg);
    if (cfg.cache) {
      fs::create_directories(cache_path.parent_path());
      write_file(cache_path, cache_entry(out.hash, out.result).dump(1));
    }
  }
  out.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

  int failed = 0;
  for (const auto& r : out.result.records) failed += r.pass ? 0 : 1;
  out.exit_code = failed == 0 && !out.result.records.empty() ? 0 : 1;

  nlohmann::json report = {{"version", kVersion},
                           {"command", cfg.command},
                           {"config", canonical_config(cfg)},
                           {"config_hash", out.hash},
                           {"cached", out.cached},
                           {"wall_time_seconds", out.wall_seconds},
                           {"warnings", out.warnings},
                           {"summary", {{"checks", out.result.records.size()}, {"failed", failed}}},
                           {"records", nlohmann::json::array()},
                           {"plots", nlohmann::json::array()}};
  for (const auto& r : out.result.records) report["records"].push_back(to_json(r));
  for (const auto& p : out.result.plots) report["plots"].push_back(p.name + ".dat");
  if (!out.result.criteria.empty()) {
    report["criteria"] = nlohmann::json::array();
    for (const auto& c : out.result.criteria) report["criteria"].push_back(to_json(c));
  }

  out.json_path = dir / (cfg.command + ".json");
  out.csv_path = dir / (cfg.command + ".csv");
  write_file(out.json_path, report.dump(2) + "\n");
  write_file(out.csv_path, csv_summary(out.result.records));
  if (!out.result.plots.empty()) {
    fs::create_directories(dir / "plots");
    for (const auto& p : out.result.plots) write_file(dir / "plots" / (p.name + ".dat"), plot_text(p));
  }
  return out;
}

}  // namespace suita::cli

#endif  // SUITA_CLI_RUN_HPP
