#include "mbrisk_cli/cli.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "mbrisk/ballot.hpp"
#include "mbrisk/error.hpp"
#include "mbrisk/hitting.hpp"
#include "mbrisk/lagrange.hpp"
#include "mbrisk/model_io.hpp"
#include "mbrisk/montecarlo.hpp"
#include "mbrisk/risk_model.hpp"
#include "mbrisk/ruin.hpp"
#include "mbrisk_cli/output.hpp"

namespace mbrisk::cli {
namespace {

using nlohmann::json;

// Doubles in structured output carry the same 12 significant digits as text.
double sig12(double v) { return std::isfinite(v) ? std::stod(num(v)) : v; }

json to_json(const Matrix& m) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(sig12(m(i, j)));
    rows.push_back(std::move(row));
  }
  return rows;
}

struct Common {
  std::string model_path;
  std::string format = "table";
};

Format parse_format(const std::string& f) {
  if (f == "csv") return Format::kCsv;
  if (f == "structured") return Format::kStructured;
  return Format::kTable;
}

void add_common(CLI::App* cmd, Common& c) {
  cmd->add_option("--model", c.model_path, "Model file")->required();
  cmd->add_option("--format", c.format, "Output format")->check(CLI::IsMember({"table", "csv", "structured"}));
}

RiskModel load(const std::string& path) { return RiskModel(load_model(path)); }

void emit(std::ostream& out, Format format, const TableDoc& doc, const json& structured) {
  switch (format) {
    case Format::kTable:
      write_table(out, doc);
      break;
    case Format::kCsv:
      write_csv(out, doc.rows);
      break;
    case Format::kStructured:
      out << structured.dump(2) << '\n';
      break;
  }
}

SimConfig sim_config(std::size_t paths, std::size_t horizon, std::uint64_t seed, long x0) {
  SimConfig cfg;
  cfg.paths = paths;
  cfg.horizon = horizon;
  cfg.seed = seed;
  cfg.x0 = x0;
  cfg.start = StartPolicy::kInitialLaw;
  return cfg;
}

// ---- validate ---------------------------------------------------------------

struct ValidateArgs {
  std::string path;
  bool echo = false;
  std::string format = "table";
};

int cmd_validate(const ValidateArgs& a, std::ostream& out) {
  const ModelSpec spec = load_model(a.path);
  const auto violations = validate(spec);
  if (parse_format(a.format) == Format::kStructured) {
    json doc{{"valid", violations.empty()}, {"violations", json::array()}};
    for (const auto& v : violations) doc["violations"].push_back(v.message);
    if (a.echo && violations.empty()) doc["model"] = json::parse(dump_model(spec));
    out << doc.dump(2) << '\n';
  } else {
    if (violations.empty()) out << "OK\n";
    for (const auto& v : violations) out << "violation: " << v.message << '\n';
    if (a.echo && violations.empty()) out << dump_model(spec) << '\n';
  }
  return violations.empty() ? kExitOk : kExitValidation;
}

// ---- ruin -------------------------------------------------------------------

struct RuinArgs {
  Common common;
  long x = 0;
  std::size_t n = 1;
  std::string method = "seal";
  std::optional<double> v;
  std::size_t paths = 100000;
  std::uint64_t seed = 1;
};

int cmd_ruin(const RuinArgs& a, std::ostream& out) {
  const RiskModel model = load(a.common.model_path);
  const auto method = parse_ruin_method(a.method);
  if (!method) throw ValidationError("unknown method \"" + a.method + "\"");
  if (a.n == 0) throw ValidationError("--n must be >= 1");

  RuinReport report;
  if (*method == RuinMethod::kMonteCarlo) {
    const auto curve = estimate_survival_curve(model, sim_config(a.paths, a.n, a.seed, a.x));
    report.x = a.x;
    report.method = *method;
    for (std::size_t n = 1; n <= a.n; ++n) {
      report.horizons.push_back(n);
      report.survival[n] = curve[n - 1].value;
      report.std_error[n] = curve[n - 1].std_error;
    }
  } else {
    report = ruin_report(model, a.x, a.n, *method);
  }

  TableDoc doc;
  doc.notes.push_back("survival probability P(tau_0^- > n) from x = " + std::to_string(a.x));
  json s{{"x", report.x}, {"method", to_string(report.method)}, {"horizons", report.horizons}};
  json surv = json::object();
  json se = json::object();
  json times = json::object();
  for (std::size_t n : report.horizons) {
    Row r{static_cast<long>(n), static_cast<double>(a.x), to_string(*method), report.survival.at(n), std::nullopt};
    if (auto it = report.std_error.find(n); it != report.std_error.end()) {
      r.stderr_value = it->second;
      se[std::to_string(n)] = sig12(it->second);
    }
    doc.rows.push_back(r);
    surv[std::to_string(n)] = sig12(report.survival.at(n));
  }
  for (const auto& [n, m] : report.ruin_time) {
    doc.matrices.push_back({"P(tau_0^- = " + std::to_string(n) + ", J_" + std::to_string(n) + " | J_0)", m});
    times[std::to_string(n)] = to_json(m);
  }
  s["survival"] = surv;
  if (!se.empty()) s["std_error"] = se;
  if (!times.empty()) s["ruin_time"] = times;
  if (a.v) {
    const Matrix phi = phi_transform(model, *a.v, a.x);
    doc.matrices.push_back({"Phi(" + std::to_string(a.x) + ") at v = " + num(*a.v), phi});
    s["phi"] = {{"v", sig12(*a.v)}, {"matrix", to_json(phi)}};
  }
  emit(out, parse_format(a.common.format), doc, s);
  return kExitOk;
}

// ---- hitting ----------------------------------------------------------------

struct HittingArgs {
  Common common;
  std::size_t level = 1;
  std::size_t n_max = 1;
  std::string method = "dp";
  std::size_t paths = 100000;
  std::uint64_t seed = 1;
};

int cmd_hitting(const HittingArgs& a, std::ostream& out) {
  const RiskModel model = load(a.common.model_path);
  if (a.level == 0) throw ValidationError("--level must be >= 1");
  const RowVector& pi = model.pi().probs;
  TableDoc doc;
  doc.notes.push_back("P_pi(tau_" + std::to_string(a.level) + "^+ = n)");
  json s{{"level", a.level}, {"method", a.method}, {"n", json::array()}};

  auto add = [&](std::size_t n, double value, std::optional<double> se, const Matrix* q) {
    doc.rows.push_back({static_cast<long>(n), static_cast<double>(a.level), a.method, value, se});
    json entry{{"n", n}, {"value", sig12(value)}};
    if (se) entry["stderr"] = sig12(*se);
    if (q) {
      doc.matrices.push_back({"Q(" + std::to_string(n) + ", " + std::to_string(a.level) + ")", *q});
      entry["matrix"] = to_json(*q);
    }
    s["n"].push_back(entry);
  };

  if (a.method == "dp") {
    const HittingTable t = dp_Q(model.spec(), a.n_max, a.level);
    for (std::size_t n = 1; n <= a.n_max; ++n) add(n, (pi * t.at(n)).sum(), std::nullopt, &t.at(n));
  } else if (a.method == "lagrange") {
    for (std::size_t n = 1; n <= a.n_max; ++n) {
      const Matrix q = lagrange_Q(model.spec(), n, a.level);
      add(n, (pi * q).sum(), std::nullopt, &q);
    }
  } else if (a.method == "mc") {
    SimConfig cfg = sim_config(a.paths, a.n_max, a.seed, 0);
    cfg.start = StartPolicy::kStationary;
    const auto est = estimate_hitting(model, cfg, a.level);
    for (std::size_t n = 1; n <= a.n_max; ++n) add(n, est[n].value, est[n].std_error, nullptr);
  } else {
    throw ValidationError("unknown method \"" + a.method + "\"");
  }
  emit(out, parse_format(a.common.format), doc, s);
  return kExitOk;
}

// ---- lundberg ---------------------------------------------------------------

struct LundbergArgs {
  Common common;
  double v = 1.0;
  std::string side = "both";
};

int cmd_lundberg(const LundbergArgs& a, std::ostream& out) {
  const RiskModel model = load(a.common.model_path);
  TableDoc doc;
  json s{{"v", sig12(a.v)}};
  auto add_solution = [&](const LundbergSolution& sol, const char* name, const char* key) {
    doc.matrices.push_back({std::string(name) + "_v", sol.matrix});
    doc.rows.push_back({std::nullopt, a.v, std::string(key) + ":residual", sol.residual, std::nullopt});
    doc.rows.push_back({std::nullopt, a.v, std::string(key) + ":iterations", static_cast<double>(sol.iterations),
                        std::nullopt});
    s[key] = {{"matrix", to_json(sol.matrix)}, {"residual", sig12(sol.residual)}, {"iterations", sol.iterations}};
  };
  if (a.side == "right" || a.side == "both") add_solution(lundberg_G(model.spec(), a.v), "G", "right");
  if (a.side == "left" || a.side == "both") {
    const LundbergSolution r = lundberg_R(model.spec(), a.v);
    add_solution(r, "R", "left");
    const double diff = (r.matrix - r_from_reversal(model.spec(), a.v)).cwiseAbs().maxCoeff();
    doc.rows.push_back({std::nullopt, a.v, "left:reversal_diff", diff, std::nullopt});
    s["left"]["reversal_diff"] = sig12(diff);
  }
  emit(out, parse_format(a.common.format), doc, s);
  return kExitOk;
}

// ---- ballot -----------------------------------------------------------------

struct BallotArgs {
  Common common;
  std::size_t n = 1;
  std::size_t m = 0;
};

int cmd_ballot(const BallotArgs& a, std::ostream& out) {
  const RiskModel model = load(a.common.model_path);
  const double lhs = ballot_conditional(model, a.n, a.m);
  const double closed = ballot_closed_form(a.n, a.m);
  TableDoc doc;
  doc.notes.push_back("P_pi(S_k < k for 0 < k <= n | S_n = m) against 1 - m/n");
  const auto n = static_cast<long>(a.n);
  const auto m = static_cast<double>(a.m);
  doc.rows.push_back({n, m, "dp", lhs, std::nullopt});
  doc.rows.push_back({n, m, "closed_form", closed, std::nullopt});
  doc.rows.push_back({n, m, "difference", lhs - closed, std::nullopt});
  const json s{{"n", a.n}, {"m", a.m}, {"lhs", sig12(lhs)}, {"closed_form", sig12(closed)},
               {"difference", sig12(lhs - closed)}};
  emit(out, parse_format(a.common.format), doc, s);
  return kExitOk;
}

// ---- simulate ---------------------------------------------------------------

struct SimulateArgs {
  Common common;
  std::size_t paths = 100000;
  std::size_t horizon = 1;
  std::uint64_t seed = 1;
  long x = 0;
};

int cmd_simulate(const SimulateArgs& a, std::ostream& out) {
  const RiskModel model = load(a.common.model_path);
  const auto curve = estimate_survival_curve(model, sim_config(a.paths, a.horizon, a.seed, a.x));
  TableDoc doc;
  doc.notes.push_back("Monte Carlo survival from x = " + std::to_string(a.x) + ", " + std::to_string(a.paths) +
                      " paths, seed " + std::to_string(a.seed));
  json s{{"x", a.x}, {"method", "mc"}, {"paths", a.paths}, {"seed", a.seed}, {"horizons", json::array()}};
  json surv = json::object();
  json se = json::object();
  for (std::size_t n = 1; n <= a.horizon; ++n) {
    const Estimate& e = curve[n - 1];
    doc.rows.push_back({static_cast<long>(n), static_cast<double>(a.x), "mc", e.value, e.std_error});
    s["horizons"].push_back(n);
    surv[std::to_string(n)] = sig12(e.value);
    se[std::to_string(n)] = sig12(e.std_error);
  }
  s["survival"] = surv;
  s["std_error"] = se;
  emit(out, parse_format(a.common.format), doc, s);
  return kExitOk;
}

// ---- crosscheck -------------------------------------------------------------

struct CrosscheckArgs {
  Common common;
  std::size_t n_max = 5;
  std::size_t paths = 200000;
  std::uint64_t seed = 20240607;
};

struct Check {
  Check(std::string n, double tol) : name(std::move(n)), tolerance(tol) {}
  std::string name;
  double deviation = 0.0;
  double tolerance = 0.0;
  std::string note;
  bool skipped = false;
  bool ok() const { return skipped || deviation <= tolerance; }
};

double max_abs(const Matrix& m) { return m.cwiseAbs().maxCoeff(); }

std::vector<Check> run_checks(const RiskModel& model, const CrosscheckArgs& a) {
  const ModelSpec& spec = model.spec();
  const std::size_t n_max = a.n_max;
  constexpr double kTol = 1e-9;
  std::vector<Check> checks;
  const bool stationary = spec.stationary_start();

  const LevelTable q = dp_Q_levels(spec, n_max);
  const auto v = model.v_table(n_max + 1);

  {
    Check brute("hitting: dp vs lagrange", kTol);
    Check rev("reversed hitting: dp vs lagrange", kTol);
    try {
      for (std::size_t n = 1; n <= n_max; ++n) {
        const auto lq = lagrange_levels(spec.claims, Acting::kRight, n);
        const auto lv = lagrange_levels(spec.claims, Acting::kLeft, n);
        for (std::size_t k = 1; k <= n; ++k) {
          brute.deviation = std::max(brute.deviation, max_abs(lq[k] - q[n][k]));
          rev.deviation = std::max(rev.deviation, max_abs(lv[k] - (*v)[n][k]));
        }
      }
    } catch (const ComputationError& e) {
      brute.skipped = rev.skipped = true;
      brute.note = rev.note = e.what();
    }
    checks.push_back(brute);
    checks.push_back(rev);
  }

  if (stationary) {
    Check seal("survival: seal vs path dp (x = 0..3)", kTol);
    for (long x = 0; x <= 3; ++x) {
      for (std::size_t n = 1; n <= n_max; ++n) {
        seal.deviation = std::max(seal.deviation,
                                  std::abs(seal_survival(model, x, n, *v) - constrained_survival(model, x, n)));
      }
    }
    checks.push_back(seal);

    Check tak("survival: takacs vs seal (x = 0)", kTol);
    Check dist("survival: ruin-time distribution vs seal (x = 0, 1)", kTol);
    for (long x = 0; x <= 1; ++x) {
      const auto d = ruin_time_dist(model, n_max, x, *v);
      double ruined = 0.0;
      for (std::size_t n = 1; n <= n_max; ++n) {
        ruined += (model.pi().probs * d[n]).sum();
        const double s = seal_survival(model, x, n, *v);
        dist.deviation = std::max(dist.deviation, std::abs(1.0 - ruined - s));
        if (x == 0) tak.deviation = std::max(tak.deviation, std::abs(takacs_survival(model, n) - s));
      }
    }
    checks.push_back(tak);
    checks.push_back(dist);

    Check ident("seal identity residual", kTol);
    for (std::size_t n = 1; n <= n_max; ++n) {
      for (std::size_t m = 1; m <= n; ++m) {
        ident.deviation = std::max(ident.deviation, std::abs(seal_identity_residual(model, n, m, *v)));
      }
    }
    checks.push_back(ident);

    Check ballot("ballot identity", kTol);
    for (std::size_t n = 1; n <= n_max; ++n) {
      for (std::size_t m = 0; m < n; ++m) {
        ballot.deviation =
            std::max(ballot.deviation, std::abs(ballot_conditional(model, n, m) - ballot_closed_form(n, m)));
      }
    }
    checks.push_back(ballot);
  } else {
    Check skipped("stationary-start identities", kTol);
    skipped.note = "model has an explicit initial law";
    skipped.skipped = true;
    checks.push_back(skipped);
  }

  Check lund("lundberg: left solution vs reversal (v = 0.5, 0.9, 1)", 1e-10);
  for (double disc : {0.5, 0.9, 1.0}) {
    lund.deviation = std::max(lund.deviation, max_abs(lundberg_R(spec, disc).matrix - r_from_reversal(spec, disc)));
  }
  checks.push_back(lund);

  if (a.paths > 0) {
    Check mc("monte carlo: survival |z| vs path dp (x = 0..2)", 3.0);
    auto worst_z = [&](std::uint64_t seed) {
      double worst = 0.0;
      for (long x = 0; x <= 2; ++x) {
        const auto curve = estimate_survival_curve(model, sim_config(a.paths, n_max, seed + static_cast<std::uint64_t>(x), x));
        for (std::size_t n = 1; n <= n_max; ++n) {
          const double diff = std::abs(curve[n - 1].value - constrained_survival(model, x, n));
          const double se = curve[n - 1].std_error;
          worst = std::max(worst, se > 0.0 ? diff / se : (diff <= 1e-12 ? 0.0 : INFINITY));
        }
      }
      return worst;
    };
    mc.deviation = worst_z(a.seed);
    if (mc.deviation > mc.tolerance) {
      mc.note = "rerun with second seed after |z| = " + num(mc.deviation);
      mc.deviation = worst_z(a.seed + 7919);
    }
    checks.push_back(mc);
  }
  return checks;
}

int cmd_crosscheck(const CrosscheckArgs& a, std::ostream& out) {
  if (a.n_max == 0) throw ValidationError("--n-max must be >= 1");
  const RiskModel model = load(a.common.model_path);
  const auto checks = run_checks(model, a);
  const bool all_ok = std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.ok(); });
  const Format format = parse_format(a.common.format);
  if (format == Format::kStructured) {
    json doc{{"n_max", a.n_max}, {"ok", all_ok}, {"checks", json::array()}};
    for (const Check& c : checks) {
      json entry{{"name", c.name}, {"deviation", sig12(c.deviation)}, {"tolerance", c.tolerance},
                 {"status", c.skipped ? "skipped" : (c.ok() ? "ok" : "fail")}};
      if (!c.note.empty()) entry["note"] = c.note;
      doc["checks"].push_back(entry);
    }
    out << doc.dump(2) << '\n';
  } else if (format == Format::kCsv) {
    std::vector<Row> rows;
    for (const Check& c : checks) {
      if (!c.skipped) rows.push_back({static_cast<long>(a.n_max), std::nullopt, c.name, c.deviation, std::nullopt});
    }
    write_csv(out, rows);
  } else {
    std::size_t width = 0;
    for (const Check& c : checks) width = std::max(width, c.name.size());
    for (const Check& c : checks) {
      out << c.name << std::string(width - c.name.size() + 2, ' ');
      if (c.skipped) {
        out << "skipped";
      } else {
        out << num(c.deviation) << " (tol " << num(c.tolerance) << ") " << (c.ok() ? "ok" : "FAIL");
      }
      if (!c.note.empty()) out << "  [" << c.note << "]";
      out << '\n';
    }
    out << (all_ok ? "all checks passed" : "some checks failed") << '\n';
  }
  return all_ok ? kExitOk : kExitRuntime;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Finite-time ruin probabilities for Markov-modulated binomial risk models", "mbrisk"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all", "Show help for every subcommand");

  ValidateArgs va;
  auto* validate_cmd = app.add_subcommand("validate", "Check a model file");
  validate_cmd->add_option("model", va.path, "Model file")->required();
  validate_cmd->add_flag("--echo", va.echo, "Print the canonical model document");
  validate_cmd->add_option("--format", va.format)->check(CLI::IsMember({"table", "csv", "structured"}));

  RuinArgs ra;
  auto* ruin_cmd = app.add_subcommand("ruin", "Finite-time survival probabilities");
  add_common(ruin_cmd, ra.common);
  ruin_cmd->add_option("--x", ra.x, "Initial surplus")->check(CLI::NonNegativeNumber);
  ruin_cmd->add_option("--n", ra.n, "Largest horizon")->required();
  ruin_cmd->add_option("--method", ra.method)->check(CLI::IsMember({"takacs", "seal", "distribution", "mc", "dp"}));
  ruin_cmd->add_option("--v", ra.v, "Also print the discounted ruin transform at v");
  ruin_cmd->add_option("--paths", ra.paths);
  ruin_cmd->add_option("--seed", ra.seed);

  HittingArgs ha;
  auto* hitting_cmd = app.add_subcommand("hitting", "Upper first-passage distribution");
  add_common(hitting_cmd, ha.common);
  hitting_cmd->add_option("--level", ha.level)->required();
  hitting_cmd->add_option("--n-max", ha.n_max)->required();
  hitting_cmd->add_option("--method", ha.method)->check(CLI::IsMember({"dp", "lagrange", "mc"}));
  hitting_cmd->add_option("--paths", ha.paths);
  hitting_cmd->add_option("--seed", ha.seed);

  LundbergArgs la;
  auto* lundberg_cmd = app.add_subcommand("lundberg", "Solutions of the matrix Lundberg equations");
  add_common(lundberg_cmd, la.common);
  lundberg_cmd->add_option("--v", la.v)->required();
  lundberg_cmd->add_option("--side", la.side)->check(CLI::IsMember({"right", "left", "both"}));

  BallotArgs ba;
  auto* ballot_cmd = app.add_subcommand("ballot", "Conditional ballot probability");
  ballot_cmd->alias("ballot-check");
  add_common(ballot_cmd, ba.common);
  ballot_cmd->add_option("--n", ba.n)->required();
  ballot_cmd->add_option("--m", ba.m)->required();

  SimulateArgs sa;
  auto* simulate_cmd = app.add_subcommand("simulate", "Monte Carlo survival estimates");
  add_common(simulate_cmd, sa.common);
  simulate_cmd->add_option("--paths", sa.paths)->check(CLI::PositiveNumber);
  simulate_cmd->add_option("--horizon", sa.horizon)->required()->check(CLI::PositiveNumber);
  simulate_cmd->add_option("--seed", sa.seed);
  simulate_cmd->add_option("--x", sa.x)->check(CLI::NonNegativeNumber);

  CrosscheckArgs ca;
  auto* cross_cmd = app.add_subcommand("crosscheck", "Compare every route on one model");
  add_common(cross_cmd, ca.common);
  cross_cmd->add_option("--n-max", ca.n_max);
  cross_cmd->add_option("--paths", ca.paths, "Monte Carlo paths (0 disables)");
  cross_cmd->add_option("--seed", ca.seed);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kExitValidation;
  }

  try {
    if (*validate_cmd) return cmd_validate(va, out);
    if (*ruin_cmd) return cmd_ruin(ra, out);
    if (*hitting_cmd) return cmd_hitting(ha, out);
    if (*lundberg_cmd) return cmd_lundberg(la, out);
    if (*ballot_cmd) return cmd_ballot(ba, out);
    if (*simulate_cmd) return cmd_simulate(sa, out);
    if (*cross_cmd) return cmd_crosscheck(ca, out);
  } catch (const ValidationError& e) {
    err << "error: " << e.what() << '\n';
    return kExitValidation;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitRuntime;
  }
  return kExitRuntime;
}

}  // namespace mbrisk::cli
