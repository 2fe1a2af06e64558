#include "minimax/harness.hpp"

#include <algorithm>
#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

namespace minimax {

namespace {

std::string fmt(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double parse_double(const std::string& s, const std::string& where) {
  try {
    size_t idx = 0;
    const double v = std::stod(s, &idx);
    if (idx != s.size()) throw std::invalid_argument("trailing characters");
    return v;
  } catch (const std::exception&) {
    throw ConfigError(where + ": expected a number, got '" + s + "'");
  }
}

long parse_long(const std::string& s, const std::string& where) {
  try {
    size_t idx = 0;
    const long v = std::stol(s, &idx);
    if (idx != s.size()) throw std::invalid_argument("trailing characters");
    return v;
  } catch (const std::exception&) {
    throw ConfigError(where + ": expected an integer, got '" + s + "'");
  }
}

std::vector<double> parse_numbers(const std::string& s,
                                  const std::string& where) {
  std::istringstream in(s);
  std::vector<double> out;
  std::string tok;
  while (in >> tok) out.push_back(parse_double(tok, where));
  return out;
}

struct RawConfig {
  // section -> key -> (value, line number)
  std::map<std::string, std::map<std::string, std::pair<std::string, int>>>
      kv;
  std::string origin;

  bool has(const std::string& sec, const std::string& key) const {
    const auto s = kv.find(sec);
    return s != kv.end() && s->second.count(key) > 0;
  }
  std::string take(const std::string& sec, const std::string& key,
                   std::vector<std::string>* consumed) {
    consumed->push_back(sec + "." + key);
    return kv.at(sec).at(key).first;
  }
};

}  // namespace

ExperimentConfig parse_config(const std::string& text,
                              const std::string& origin) {
  static const std::vector<std::string> kSections = {"problem", "solver",
                                                     "run"};
  RawConfig raw;
  raw.origin = origin;

  std::istringstream in(text);
  std::string line;
  std::string section;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const std::string at = origin + ":" + std::to_string(lineno);
    if (line.front() == '[') {
      if (line.back() != ']') throw ConfigError(at + ": unterminated section");
      section = trim(line.substr(1, line.size() - 2));
      if (std::find(kSections.begin(), kSections.end(), section) ==
          kSections.end()) {
        throw ConfigError(at + ": unknown section [" + section + "]");
      }
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError(at + ": expected 'key = value'");
    }
    if (section.empty()) {
      throw ConfigError(at + ": key outside of any section");
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty()) throw ConfigError(at + ": empty key");
    if (raw.kv[section].count(key)) {
      throw ConfigError(at + ": duplicate key '" + key + "'");
    }
    raw.kv[section][key] = {value, lineno};
  }

  std::vector<std::string> consumed;
  const auto require = [&](const std::string& sec, const std::string& key) {
    if (!raw.has(sec, key)) {
      throw ConfigError(origin + ": missing required key '" + key + "' in [" +
                        sec + "]");
    }
    return raw.take(sec, key, &consumed);
  };
  const auto optional = [&](const std::string& sec, const std::string& key,
                            const std::string& fallback) {
    if (!raw.has(sec, key)) return fallback;
    return raw.take(sec, key, &consumed);
  };

  ExperimentConfig cfg;

  // [problem]
  const std::string fam = require("problem", "family");
  cfg.d = parse_long(optional("problem", "d", "1"), origin + ": d");
  if (fam == "bilinear") {
    Matrix C = Matrix::Identity(cfg.d, cfg.d);
    if (raw.has("problem", "C")) {
      const auto vals =
          parse_numbers(raw.take("problem", "C", &consumed), origin + ": C");
      if (static_cast<Index>(vals.size()) != cfg.d * cfg.d) {
        throw ConfigError(origin + ": C needs exactly d*d entries");
      }
      for (Index i = 0; i < cfg.d; ++i) {
        for (Index j = 0; j < cfg.d; ++j) {
          C(i, j) = vals[static_cast<size_t>(i * cfg.d + j)];
        }
      }
    }
    cfg.family = BilinearFamily{std::move(C)};
  } else if (fam == "quadratic") {
    cfg.family = QuadraticSaddleFamily{
        parse_double(require("problem", "c"), origin + ": c")};
  } else if (fam == "coupled") {
    cfg.family = CoupledScalarFamily{
        scalar_fn_from_name(require("problem", "base")),
        parse_double(require("problem", "c"), origin + ": c")};
  } else if (fam == "regularized_bilinear") {
    cfg.family = RegularizedBilinearFamily{
        scalar_fn_from_name(require("problem", "f")),
        scalar_fn_from_name(require("problem", "h")),
        parse_double(require("problem", "c"), origin + ": c")};
  } else if (fam == "dirac_gan") {
    cfg.family = DiracGanFamily{
        scalar_fn_from_name(optional("problem", "f", "identity"))};
  } else {
    throw ConfigError(origin + ": unknown family '" + fam + "'");
  }

  // [solver]
  const std::string method = require("solver", "method");
  if (method == "sgda") cfg.solver.method = Method::Sgda;
  else if (method == "hgd") cfg.solver.method = Method::Hgd;
  else if (method == "co") cfg.solver.method = Method::Co;
  else if (method == "shgd") cfg.solver.method = Method::Shgd;
  else if (method == "signed_hgd") cfg.solver.method = Method::SignedHgd;
  else throw ConfigError(origin + ": unknown method '" + method + "'");

  cfg.solver.eta = parse_double(require("solver", "eta"), origin + ": eta");
  if (raw.has("solver", "co_gamma")) {
    cfg.solver.co_gamma = parse_double(raw.take("solver", "co_gamma", &consumed),
                                       origin + ": co_gamma");
  }
  cfg.solver.max_iters = static_cast<int>(parse_long(
      optional("solver", "max_iters", "10000"), origin + ": max_iters"));
  cfg.solver.eps_stop = parse_double(optional("solver", "eps_stop", "1e-6"),
                                     origin + ": eps_stop");
  cfg.solver.seed = static_cast<std::uint64_t>(
      parse_long(optional("solver", "seed", "0"), origin + ": seed"));
  cfg.solver.noise_sigma = parse_double(
      optional("solver", "noise_sigma", "0"), origin + ": noise_sigma");
  const std::string sched = optional("solver", "schedule", "constant");
  if (sched == "constant") {
    cfg.solver.schedule.kind = StepSchedule::Kind::Constant;
  } else if (sched == "decaying") {
    cfg.solver.schedule.kind = StepSchedule::Kind::Decaying;
    cfg.solver.schedule.alpha =
        parse_double(require("solver", "alpha"), origin + ": alpha");
  } else {
    throw ConfigError(origin + ": unknown schedule '" + sched + "'");
  }
  const std::string variant = optional("solver", "variant", "alignment");
  if (variant == "alignment") cfg.solver.sign_rule = SignRule::Alignment;
  else if (variant == "block_eig") cfg.solver.sign_rule = SignRule::BlockEig;
  else throw ConfigError(origin + ": unknown variant '" + variant + "'");

  // [run]
  const auto start =
      parse_numbers(require("run", "start"), origin + ": start");
  if (static_cast<Index>(start.size()) != 2 * cfg.d) {
    throw ConfigError(origin + ": start needs exactly 2d = " +
                      std::to_string(2 * cfg.d) + " numbers");
  }
  Vector sv(2 * cfg.d);
  for (Index i = 0; i < sv.size(); ++i) sv[i] = start[static_cast<size_t>(i)];
  cfg.start = Point::from_stacked(sv);
  cfg.output_path = optional("run", "output", "");
  cfg.label = optional("run", "label", "run");
  if (raw.has("run", "ema_beta")) {
    cfg.ema_beta = parse_double(raw.take("run", "ema_beta", &consumed),
                                origin + ": ema_beta");
    if (!(*cfg.ema_beta > 0 && *cfg.ema_beta < 1)) {
      throw ConfigError(origin + ": ema_beta must lie in (0, 1)");
    }
  }

  // Reject anything the schema did not consume.
  for (const auto& [sec, entries] : raw.kv) {
    for (const auto& [key, value] : entries) {
      const std::string id = sec + "." + key;
      if (std::find(consumed.begin(), consumed.end(), id) == consumed.end()) {
        throw ConfigError(origin + ":" + std::to_string(value.second) +
                          ": unknown key '" + key + "' in [" + sec + "]");
      }
    }
  }

  try {
    cfg.solver.validate();
    cfg.objective();  // validates family parameters and dimension
  } catch (const InputError& e) {
    throw ConfigError(origin + ": " + e.what());
  }
  return cfg;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(path + ": cannot open config file");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str(), path);
}

namespace {

void append_family(std::ostringstream& out, const Family& family, Index d) {
  out << "[problem]\n";
  out << "family = " << family_name(family) << "\n";
  out << "d = " << d << "\n";
  std::visit(
      [&](const auto& fam) {
        using T = std::decay_t<decltype(fam)>;
        if constexpr (std::is_same_v<T, BilinearFamily>) {
          out << "C =";
          for (Index i = 0; i < d; ++i) {
            for (Index j = 0; j < d; ++j) out << " " << fmt(fam.C(i, j));
          }
          out << "\n";
        } else if constexpr (std::is_same_v<T, QuadraticSaddleFamily>) {
          out << "c = " << fmt(fam.c) << "\n";
        } else if constexpr (std::is_same_v<T, CoupledScalarFamily>) {
          out << "base = " << scalar_fn_name(fam.base) << "\n";
          out << "c = " << fmt(fam.c) << "\n";
        } else if constexpr (std::is_same_v<T, RegularizedBilinearFamily>) {
          out << "f = " << scalar_fn_name(fam.f) << "\n";
          out << "h = " << scalar_fn_name(fam.h) << "\n";
          out << "c = " << fmt(fam.c) << "\n";
        } else if constexpr (std::is_same_v<T, DiracGanFamily>) {
          out << "f = " << scalar_fn_name(fam.f) << "\n";
        }
      },
      family);
}

}  // namespace

std::string format_config(const ExperimentConfig& config) {
  std::ostringstream out;
  append_family(out, config.family, config.d);
  out << "\n[solver]\n";
  out << "method = " << method_name(config.solver.method) << "\n";
  out << "eta = " << fmt(config.solver.eta) << "\n";
  if (config.solver.co_gamma) {
    out << "co_gamma = " << fmt(*config.solver.co_gamma) << "\n";
  }
  out << "max_iters = " << config.solver.max_iters << "\n";
  out << "eps_stop = " << fmt(config.solver.eps_stop) << "\n";
  if (config.solver.method == Method::Shgd) {
    out << "seed = " << config.solver.seed << "\n";
    out << "noise_sigma = " << fmt(config.solver.noise_sigma) << "\n";
    if (config.solver.schedule.kind == StepSchedule::Kind::Decaying) {
      out << "schedule = decaying\n";
      out << "alpha = " << fmt(config.solver.schedule.alpha) << "\n";
    } else {
      out << "schedule = constant\n";
    }
  }
  if (config.solver.method == Method::SignedHgd) {
    out << "variant = "
        << (config.solver.sign_rule == SignRule::Alignment ? "alignment"
                                                           : "block_eig")
        << "\n";
  }
  out << "\n[run]\n";
  out << "start =";
  const Vector s = config.start.stacked();
  for (Index i = 0; i < s.size(); ++i) out << " " << fmt(s[i]);
  out << "\n";
  if (!config.output_path.empty()) {
    out << "output = " << config.output_path << "\n";
  }
  out << "label = " << config.label << "\n";
  if (config.ema_beta) out << "ema_beta = " << fmt(*config.ema_beta) << "\n";
  return out.str();
}

std::vector<Vector> track_ema(const Trajectory& traj, double beta) {
  if (!(beta > 0 && beta < 1)) {
    throw InputError("track_ema: beta must lie in (0, 1)");
  }
  std::vector<Vector> out;
  out.reserve(traj.iterates.size());
  for (const Point& p : traj.iterates) {
    if (out.empty()) {
      out.push_back(p.stacked());
    } else {
      out.push_back(beta * out.back() + (1.0 - beta) * p.stacked());
    }
  }
  return out;
}

void write_trajectory_csv(std::ostream& out, const Trajectory& traj,
                          const std::vector<Vector>& ema) {
  if (traj.iterates.empty()) throw InputError("write_trajectory_csv: empty");
  if (!ema.empty() && ema.size() != traj.iterates.size()) {
    throw InputError("write_trajectory_csv: ema length mismatch");
  }
  const Index d = traj.iterates.front().dim();

  out << "iter";
  for (Index i = 0; i < d; ++i) out << ",x1_" << i;
  for (Index i = 0; i < d; ++i) out << ",x2_" << i;
  out << ",g,grad_norm,hamiltonian,step_size";
  if (!ema.empty()) {
    for (Index i = 0; i < d; ++i) out << ",ema_x1_" << i;
    for (Index i = 0; i < d; ++i) out << ",ema_x2_" << i;
  }
  out << "\n";

  for (size_t k = 0; k < traj.iterates.size(); ++k) {
    out << k;
    const Vector z = traj.iterates[k].stacked();
    for (Index i = 0; i < z.size(); ++i) out << "," << fmt(z[i]);
    out << "," << fmt(traj.g[k]) << "," << fmt(traj.grad_norm[k]) << ","
        << fmt(traj.hamiltonian[k]) << "," << fmt(traj.step_size[k]);
    if (!ema.empty()) {
      for (Index i = 0; i < z.size(); ++i) out << "," << fmt(ema[k][i]);
    }
    out << "\n";
  }
}

RunSummary run_experiment(const ExperimentConfig& config) {
  if (config.output_path.empty()) {
    throw InputError("run_experiment: config has no output path");
  }
  const Objective obj = config.objective();
  const Trajectory traj = run(obj, config.solver, config.start);
  std::vector<Vector> ema;
  if (config.ema_beta) ema = track_ema(traj, *config.ema_beta);

  const std::filesystem::path path(config.output_path);
  if (path.has_parent_path()) {
    std::filesystem::create_directories(path.parent_path());
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw std::runtime_error("run_experiment: cannot write " +
                             config.output_path);
  }
  write_trajectory_csv(out, traj, ema);
  out.close();
  if (!out) {
    throw std::runtime_error("run_experiment: write failed for " +
                             config.output_path);
  }

  RunSummary summary;
  summary.terminated_by = traj.terminated_by;
  summary.steps = traj.steps_taken();
  summary.final_grad_norm = traj.grad_norm.back();
  summary.final_point = traj.iterates.back();
  return summary;
}

std::vector<ExperimentConfig> appendix_h_presets() {
  std::vector<ExperimentConfig> cells;
  const Point start(5.0, 5.0);

  for (const ScalarFn base : {ScalarFn::Softplus, ScalarFn::PiecewiseCosine}) {
    const std::string fam_tag =
        base == ScalarFn::Softplus ? "convex" : "nonconvex";
    for (const double c : {3.0, 10.0}) {
      const std::string cell_tag =
          fam_tag + "_c" + std::to_string(static_cast<int>(c));
      const int gd_budget = c == 3.0 ? 300 : 150;
      const int co_budget = c == 3.0 ? 100 : 15;

      const auto make_cell = [&](Method method, double eta,
                                 std::optional<double> gamma, int budget,
                                 const std::string& solver_tag) {
        ExperimentConfig cfg;
        cfg.family = CoupledScalarFamily{base, c};
        cfg.d = 1;
        cfg.solver.method = method;
        cfg.solver.eta = eta;
        cfg.solver.co_gamma = gamma;
        cfg.solver.max_iters = budget;
        cfg.solver.eps_stop = 0.0;  // run the full budget
        cfg.start = start;
        cfg.label = cell_tag + "_" + solver_tag;
        cfg.output_path = cfg.label + ".csv";
        cells.push_back(std::move(cfg));
      };

      make_cell(Method::Sgda, 0.01, std::nullopt, gd_budget, "sgda");
      make_cell(Method::Hgd, 0.01, std::nullopt, gd_budget, "hgd");
      make_cell(Method::Co, 0.1, 0.1, co_budget, "co_g0.1");
      make_cell(Method::Co, 0.01, 1.0, co_budget, "co_g1");
      make_cell(Method::Co, 0.001, 10.0, co_budget, "co_g10");
    }
  }
  return cells;
}

std::vector<std::pair<std::string, RunSummary>> run_benchmark_suite(
    const std::string& outdir) {
  std::filesystem::create_directories(outdir);
  std::vector<std::pair<std::string, RunSummary>> summaries;
  std::ofstream summary(outdir + "/summary.csv", std::ios::binary);
  if (!summary) {
    throw std::runtime_error("run_benchmark_suite: cannot write to " + outdir);
  }
  summary << "label,terminated_by,steps,final_grad_norm\n";
  for (ExperimentConfig cfg : appendix_h_presets()) {
    // The materialized config keeps the portable relative output path; only
    // the run below is redirected into outdir.
    std::ofstream cfg_out(outdir + "/" + cfg.label + ".cfg", std::ios::binary);
    cfg_out << format_config(cfg);
    cfg.output_path = outdir + "/" + cfg.label + ".csv";
    const RunSummary s = run_experiment(cfg);
    summary << cfg.label << "," << termination_name(s.terminated_by) << ","
            << s.steps << "," << fmt(s.final_grad_norm) << "\n";
    summaries.emplace_back(cfg.label, s);
  }
  return summaries;
}

std::vector<SweepRow> sweep_coupling(const ExperimentConfig& base,
                                     const std::vector<double>& c_values,
                                     const std::string& outdir) {
  const auto* coupled = std::get_if<CoupledScalarFamily>(&base.family);
  if (!coupled) {
    throw InputError("sweep_coupling: base problem must be a coupled family");
  }
  if (c_values.empty()) throw InputError("sweep_coupling: empty c list");

  std::filesystem::create_directories(outdir);
  std::vector<std::string> paths;
  std::vector<SweepRow> rows;

  for (const double c : c_values) {
    ExperimentConfig cfg = base;
    cfg.family = CoupledScalarFamily{coupled->base, c};

    const std::string series_path =
        outdir + "/sweep_c" + fmt(c) + ".csv";
    if (std::find(paths.begin(), paths.end(), series_path) != paths.end()) {
      throw InputError("sweep_coupling: duplicate c value " + fmt(c));
    }
    paths.push_back(series_path);

    const Objective obj = cfg.objective();
    const Trajectory traj = run(obj, cfg.solver, cfg.start);

    std::ofstream out(series_path, std::ios::binary);
    if (!out) {
      throw std::runtime_error("sweep_coupling: cannot write " + series_path);
    }
    out << "iter,dist_to_minmax,grad_norm\n";
    for (size_t k = 0; k < traj.iterates.size(); ++k) {
      // (0, 0) is the unique critical point of the coupled families.
      out << k << "," << fmt(traj.iterates[k].stacked().norm()) << ","
          << fmt(traj.grad_norm[k]) << "\n";
    }

    SweepRow row;
    row.c = c;
    row.final_grad_norm = traj.grad_norm.back();
    row.iters_to_tol = -1;
    for (size_t k = 0; k < traj.grad_norm.size(); ++k) {
      if (traj.grad_norm[k] <= cfg.solver.eps_stop) {
        row.iters_to_tol = static_cast<int>(k);
        break;
      }
    }
    rows.push_back(row);
  }

  std::ofstream out(outdir + "/sweep_summary.csv", std::ios::binary);
  out << "c,iters_to_tol,final_grad_norm\n";
  for (const SweepRow& row : rows) {
    out << fmt(row.c) << "," << row.iters_to_tol << ","
        << fmt(row.final_grad_norm) << "\n";
  }
  return rows;
}

const char* method_name(Method method) {
  switch (method) {
    case Method::Sgda: return "sgda";
    case Method::Hgd: return "hgd";
    case Method::Co: return "co";
    case Method::Shgd: return "shgd";
    case Method::SignedHgd: return "signed_hgd";
  }
  return "?";
}

const char* termination_name(Termination t) {
  switch (t) {
    case Termination::Converged: return "converged";
    case Termination::MaxIters: return "max_iters";
    case Termination::Diverged: return "diverged";
  }
  return "?";
}

}  // namespace minimax
