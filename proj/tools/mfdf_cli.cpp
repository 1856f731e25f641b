// mfdf: command-line front end for runs, studies and checks.
//
// Exit codes: 0 success, 1 invalid input, 2 runtime failure (blow-up, I/O).

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "mfdf/mfdf.hpp"

using namespace mfdf;

namespace {

void print_row(const std::vector<std::string>& cells) {
  std::string line;
  for (std::size_t i = 0; i < cells.size(); ++i) line += (i ? "," : "") + cells[i];
  std::cout << line << '\n';
}

void summary(const std::string& key, const std::string& value) { std::cout << "# " << key << " = " << value << '\n'; }

std::vector<double> parse_list(const std::string& text, const std::string& what) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    double v = 0.0;
    if (!detail::parse_real(detail::trim(item), v)) throw ConfigError(what + ": bad entry '" + item + "'");
    out.push_back(v);
  }
  return out;
}

std::string snapshot_name(std::int64_t step) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "snapshot_%08lld.fdf", static_cast<long long>(step));
  return buf;
}

int simulate(const std::string& config_path, const std::string& out_dir) {
  const SimConfig cfg = load_config(config_path);
  const auto result = run(cfg);
  const std::filesystem::path dir(out_dir);
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw IoError("cannot create output directory " + out_dir + ": " + ec.message());

  const EquationSpec eq = cfg.equation_spec();
  write_diagnostics(result.records, (dir / "diagnostics.csv").string());
  for (const auto& snap : result.snapshots) write_snapshot(snap, eq, (dir / snapshot_name(snap.step_count)).string());
  write_snapshot(result.final_state, eq, (dir / "final.fdf").string());

  std::cout << format_diagnostics(result.records);
  const auto& a = result.records.front();
  const auto& b = result.records.back();
  const double l2_drift = a.l2 > 0.0 ? std::abs(b.l2 - a.l2) / a.l2 : 0.0;
  summary("l2_drift", format_real(l2_drift));
  summary("steps", std::to_string(result.final_state.step_count));
  return 0;
}

int limit_study_cmd(const std::string& config_path, const std::string& deltas, double s, bool linear_only,
                    unsigned threads) {
  const SimConfig cfg = load_config(config_path);
  const auto r = limit_study(cfg, parse_list(deltas, "deltas"), s, cfg.t_end, {linear_only, threads});
  print_row({"delta", "error"});
  for (std::size_t i = 0; i < r.deltas.size(); ++i) print_row({format_real(r.deltas[i]), format_real(r.errors[i])});
  summary("fitted_rate", r.fitted_rate ? format_real(*r.fitted_rate) : "undefined");
  return 0;
}

int scaling_cmd(const std::string& config_path, double lambda, double s) {
  const auto r = scaling_check(load_config(config_path), lambda, s);
  print_row({"lambda", "discrepancy", "l2_initial", "l2_scaled"});
  print_row({format_real(lambda), format_real(r.discrepancy), format_real(r.l2_initial), format_real(r.l2_scaled)});
  summary("discrepancy", format_real(r.discrepancy));
  return 0;
}

int transform_cmd(const std::string& config_path, std::optional<double> delta, double s) {
  const SimConfig cfg = load_config(config_path);
  const double d = delta.value_or(cfg.delta.value_or(1.0));
  const double disc = transform_check(cfg, d, s);
  print_row({"delta", "discrepancy"});
  print_row({format_real(d), format_real(disc)});
  summary("discrepancy", format_real(disc));
  return 0;
}

int dispersion_cmd(double delta, double xi_min, double xi_max, int samples) {
  const auto reports = verify_dispersion_bounds(delta, xi_min, xi_max, samples);
  print_row({"regime", "quantity", "min_ratio", "max_ratio", "samples"});
  double spread = 0.0;
  for (const auto& r : reports) {
    print_row({std::string(to_string(r.regime)), std::string(to_string(r.quantity)), format_real(r.min_ratio),
               format_real(r.max_ratio), std::to_string(r.sample_count)});
    spread = std::max(spread, r.spread());
  }
  summary("max_spread", format_real(spread));
  return 0;
}

int probe_cmd(const ProbeParams& p) {
  const auto r = illposed_probe(p);
  print_row({"N", "gamma", "s", "t", "hs_value"});
  print_row({format_real(r.carrier), format_real(r.gamma), format_real(r.s), format_real(r.t), format_real(r.hs_value)});
  summary("hs_value", format_real(r.hs_value));
  return 0;
}

int invariants_cmd(const std::string& path, std::optional<std::string> equation, const std::string& sign_name) {
  const Snapshot snap = read_snapshot(path);
  const Field f = snapshot_field(snap);
  const Sign sign = sign_name == "focusing" ? Sign::focusing : Sign::defocusing;
  const std::string eqn = equation.value_or(snap.delta > 0.0 ? "mfdf" : "mbo");
  DispersionKind kind;
  if (eqn == "mfdf") kind = DispersionKind::fdf(snap.delta, 2, sign);
  else if (eqn == "mfdf2") kind = DispersionKind::fdf2(snap.delta, 2, sign);
  else if (eqn == "mbo") kind = DispersionKind::bo(2, sign);
  else if (eqn == "mkdv") kind = DispersionKind::airy(2, sign);
  else throw ConfigError("equation: expected mfdf, mfdf2, mbo or mkdv, got '" + eqn + "'");
  if (kind.has_depth() && !(snap.delta > 0.0)) throw ConfigError("equation: snapshot carries no depth for " + eqn);

  const auto rec = invariants(f, EquationSpec{kind, 1.0}, snap.time);
  std::cout << format_diagnostics(std::span(&rec, 1));
  summary("equation", eqn);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Pseudospectral solver and checks for the modified finite-depth-fluid equation family"};
  app.require_subcommand(1);

  std::string config, out_dir = ".";
  auto* sim = app.add_subcommand("simulate", "Run a configuration; write diagnostics.csv and snapshots");
  sim->add_option("--config", config, "Configuration file")->required();
  sim->add_option("--out", out_dir, "Output directory");

  std::string deltas = "1,2,4,8,16";
  double s = 0.5;
  bool linear_only = false;
  unsigned threads = 1;
  auto* lim = app.add_subcommand("limit-study", "delta -> infinity convergence to the mBO flow");
  lim->add_option("--config", config, "Configuration file (t_end sets T)")->required();
  lim->add_option("--deltas", deltas, "Comma-separated increasing depths");
  lim->add_option("--s", s, "Sobolev order of the error norm");
  lim->add_flag("--linear-only", linear_only, "Disable the nonlinear term");
  lim->add_option("--threads", threads, "Concurrent runs")->check(CLI::PositiveNumber);

  double lambda = 2.0;
  auto* scal = app.add_subcommand("scaling-check", "Compare a run with its rescaled counterpart");
  scal->add_option("--config", config, "Configuration file")->required();
  scal->add_option("--lambda", lambda, "Scale factor");
  scal->add_option("--s", s, "Sobolev order of the discrepancy");

  std::optional<double> tdelta;
  auto* tr = app.add_subcommand("transform-check", "Compare mFDF with mFDF2 under the depth transform");
  tr->add_option("--config", config, "Configuration file")->required();
  tr->add_option("--delta", tdelta, "Depth (default: the config's delta, or 1)");
  tr->add_option("--s", s, "Sobolev order of the discrepancy");

  double ddelta = 1.0, xi_min = 0.0, xi_max = 0.0;
  int samples = 16;
  auto* disp = app.add_subcommand("check-dispersion", "Ratio bounds of omega and its derivatives");
  disp->add_option("--delta", ddelta, "Depth")->required();
  disp->add_option("--ximin", xi_min, "Lower end of the sweep")->required();
  disp->add_option("--ximax", xi_max, "Upper end of the sweep")->required();
  disp->add_option("--samples-per-octave", samples, "Sampling density");

  ProbeParams probe;
  auto* pr = app.add_subcommand("illposed-probe", "H^s norm of the third Picard iterate of phi_N");
  pr->add_option("--N", probe.carrier, "Carrier frequency")->required();
  pr->add_option("--gamma", probe.gamma, "Window width");
  pr->add_option("--s", probe.s, "Sobolev order");
  pr->add_option("--t", probe.t, "Time");
  pr->add_option("--delta", probe.delta, "Depth");
  pr->add_option("--nodes", probe.nodes, "Quadrature nodes per axis");

  std::string snapshot, sign = "defocusing";
  std::optional<std::string> equation;
  auto* inv = app.add_subcommand("invariants", "Conserved quantities of a snapshot file");
  inv->add_option("--snapshot", snapshot, "Snapshot file")->required();
  inv->add_option("--equation", equation, "mfdf, mfdf2, mbo or mkdv (default from the stored delta)");
  inv->add_option("--sign", sign, "defocusing or focusing")->check(CLI::IsMember({"defocusing", "focusing"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (sim->parsed()) return simulate(config, out_dir);
    if (lim->parsed()) return limit_study_cmd(config, deltas, s, linear_only, threads);
    if (scal->parsed()) return scaling_cmd(config, lambda, s);
    if (tr->parsed()) return transform_cmd(config, tdelta, s);
    if (disp->parsed()) return dispersion_cmd(ddelta, xi_min, xi_max, samples);
    if (pr->parsed()) return probe_cmd(probe);
    if (inv->parsed()) return invariants_cmd(snapshot, equation, sign);
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const BlowUpError& e) {
    std::cerr << "blow-up: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 1;
}
