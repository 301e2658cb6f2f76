#include "mtf/cli.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <numeric>

#include "CLI11.hpp"
#include "mtf/parallel.hpp"

namespace mtf {
namespace {

namespace fs = std::filesystem;

double parse_number(const std::string& text, const char* flag) {
  std::size_t used = 0;
  double x = 0.0;
  try {
    x = std::stod(text, &used);
  } catch (const std::exception&) {
    throw ConfigError(std::string(flag) + ": not a number: " + text);
  }
  if (used != text.size()) throw ConfigError(std::string(flag) + ": trailing characters in " + text);
  return x;
}

std::ofstream open_output(const RunConfig& config, const std::string& name) {
  const fs::path dir(config.out);
  std::error_code ec;
  fs::create_directories(dir, ec);
  std::ofstream f(dir / name, std::ios::binary);
  if (!f) throw std::runtime_error("cannot write " + (dir / name).string());
  return f;
}

MtfProblem make_problem(const RunConfig& config, double B) {
  MtfProblem p = MtfProblem::make(config.electrons(), config.Z, B, config.grid_n, config.rmax_ell);
  p.tolerances.scf = config.tol;
  p.tolerances.max_iterations = config.max_iterations;
  p.mixing = config.mix;
  return p;
}

Json point_json(const RunConfig& config, double B) {
  return Json{{"beta", B / std::pow(config.Z, 4.0 / 3.0)}, {"cal_E", cal_E(config.Z, B)},
              {"regime", to_string(classify(config.Z, B))}};
}

int run_solve(const RunConfig& config, std::ostream& log) {
  const double B = config.field();
  const MtfSolution sol = solve(make_problem(config, B));
  Json result = to_json(sol);
  result.update(point_json(config, B));
  auto f = open_output(config, "solve.json");
  write_json(f, config.provenance(), result);
  auto c = open_output(config, "profile.csv");
  write_csv(c, config.provenance(), {"r", "rho", "v_eff"}, profile_rows(sol));
  log << "E = " << format_double(sol.energy_functional) << "  mu = " << format_double(sol.mu)
      << "  N = " << format_double(sol.particle_number) << '\n';
  return 0;
}

int run_current(const RunConfig& config, std::ostream& log) {
  const double B = config.field();
  const MtfSolution sol = solve(make_problem(config, B));
  const TestField field =
      TestField::standard(parse_field_profile(config.field_profile), length_scale_ell(config.Z, B));
  const CurrentReport rep = split_current(sol, field);
  const MonteCarloEstimate mc = d_alpha_monte_carlo(sol.rho, sol.rho, field, config.samples, config.seed);
  Json result;
  result["solution"] = to_json(sol);
  result["solution"].update(point_json(config, B));
  result["current"] = to_json(rep);
  result["relative_residual"] = rep.residual / cal_E(config.Z, B);
  result["j_int_monte_carlo"] = to_json(mc);
  result["j_int_mc_deviation_se"] = mc.standard_error > 0.0 ? (mc.mean - rep.j_int) / mc.standard_error : 0.0;
  auto f = open_output(config, "current.json");
  write_json(f, config.provenance(), result);
  log << "closed form " << format_double(rep.closed_form) << "  residual " << format_double(rep.residual) << '\n';
  return 0;
}

int run_sweep(const RunConfig& config, std::ostream& log) {
  const std::vector<double> fields = config.field_sweep();
  std::vector<std::optional<MtfSolution>> sols(fields.size());
  std::vector<std::string> failures(fields.size());
  parallel_for(fields.size(), [&](std::size_t k) {
    try {
      sols[k] = solve(make_problem(config, fields[k]));
    } catch (const NonConvergence& e) {
      failures[k] = e.what();
    }
  });
  for (std::size_t k = 0; k < fields.size(); ++k) {
    if (!sols[k]) {
      log << "no convergence at B = " << format_double(fields[k]) << ": " << failures[k] << '\n';
      return 1;
    }
  }

  const std::size_t n = fields.size();
  std::vector<double> x(n), y(n);
  for (std::size_t k = 0; k < n; ++k) {
    x[k] = std::log(fields[k]);
    y[k] = std::log(std::abs(sols[k]->energy_functional));
  }
  auto local_slope = [&](std::size_t k) {
    if (n < 2) return 0.0;
    const std::size_t a = k == 0 ? 0 : k - 1;
    const std::size_t b = k + 1 == n ? k : k + 1;
    return (y[b] - y[a]) / (x[b] - x[a]);
  };
  std::vector<std::vector<double>> rows;
  for (std::size_t k = 0; k < n; ++k) {
    const MtfSolution& s = *sols[k];
    const double calE = cal_E(config.Z, fields[k]);
    rows.push_back({fields[k] / std::pow(config.Z, 4.0 / 3.0), fields[k], s.energy_functional, calE,
                    s.energy_functional / calE, local_slope(k), s.mu, s.residual});
  }
  auto c = open_output(config, "sweep.csv");
  write_csv(c, config.provenance(), {"beta", "B", "E", "cal_E", "E_over_cal_E", "slope", "mu", "residual"}, rows);

  double slope = 0.0, intercept = y.empty() ? 0.0 : y[0];
  if (n >= 2) {
    const double mx = std::accumulate(x.begin(), x.end(), 0.0) / static_cast<double>(n);
    const double my = std::accumulate(y.begin(), y.end(), 0.0) / static_cast<double>(n);
    double sxy = 0.0, sxx = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
      sxy += (x[k] - mx) * (y[k] - my);
      sxx += (x[k] - mx) * (x[k] - mx);
    }
    slope = sxy / sxx;
    intercept = my - slope * mx;
  }
  auto f = open_output(config, "sweep.json");
  write_json(f, config.provenance(), Json{{"points", n}, {"slope", slope}, {"intercept", intercept}});
  log << "least-squares slope of log|E| vs log B: " << format_double(slope) << '\n';
  return 0;
}

int run_scales(const RunConfig& config, std::ostream& log) {
  const double B = config.field();
  const EnergySeam seam = energy_seam(config.Z, B);
  const SeamReport lseam = parallel_length_seam(config.Z);
  Json result = point_json(config, B);
  result["scales"] = to_json(length_scales(config.Z, B));
  result["energy_seam"] = Json{{"beta", seam.beta}, {"weak", seam.weak}, {"intermediate", seam.intermediate},
                               {"ratio", seam.ratio}};
  result["parallel_length_seam"] = Json{{"below", lseam.below}, {"above", lseam.above}, {"ratio", lseam.ratio}};
  result["confinement"] = to_json(confinement_errors(config.Z, B, config.delta, config.mu_exponent));
  auto f = open_output(config, "scales.json");
  write_json(f, config.provenance(), result);
  log << "regime " << to_string(classify(config.Z, B)) << "  weak/intermediate seam ratio "
      << format_double(seam.ratio) << '\n';
  return 0;
}

int run_landau(const RunConfig& config, std::ostream& log) {
  const double B = config.field();
  constexpr std::size_t kMaxM = 6;
  const LandauBasis basis(B, kMaxM);
  const PlaneGrid grid = PlaneGrid::for_basis(B, kMaxM, 240);
  const J1Spec spec = J1Spec::random_constrained(B, config.seed);

  Json elements = Json::array();
  double worst = 0.0;
  for (std::size_t m = 0; m <= kMaxM; ++m) {
    for (std::size_t mp = 0; mp <= kMaxM; ++mp) {
      const J1Element e = j1_lll_matrix(basis, grid, spec, m, mp);
      const double rel = std::abs(e.value) / e.scale;
      worst = std::max(worst, rel);
      elements.push_back(Json{{"m", m}, {"m_prime", mp}, {"element", {e.value.real(), e.value.imag()}},
                              {"tolerance", 1e-6 * e.scale}});
    }
  }

  Json cutoff = Json::array();
  for (int ia = 0; ia < 7; ++ia) {
    const double a = std::pow(10.0, -1.5 + 0.25 * ia);
    for (int ig = 0; ig < 7; ++ig) {
      const double ag = std::pow(10.0, -3.0 + 0.5 * ig);
      const CutoffNorm c = cutoff_norm(ag / a, a, 1.0, 2.0);
      cutoff.push_back(Json{{"gamma", ag / a}, {"a", a}, {"norm", c.norm}, {"bound_ratio", c.bound_ratio}});
    }
  }

  Json lt = Json::array();
  for (const double depth : {1.0, 5.0, 25.0}) {
    Json row = to_json(lt_check_1d(Potential1D::square_well(depth, 1.0, 30.0, 6001)));
    row["depth"] = depth;
    lt.push_back(row);
  }

  Json result;
  result["B"] = B;
  result["schur"] = to_json(schur_commutator_constant());
  result["j1_elements"] = elements;
  result["j1_worst_relative"] = worst;
  result["lieb_thirring"] = lt;
  result["cutoff"] = cutoff;
  auto f = open_output(config, "landau.json");
  write_json(f, config.provenance(), result);
  log << "worst |<m|J1|m'>| / (B sup b3) = " << format_double(worst) << '\n';
  return 0;
}

}  // namespace

Command parse_command(const std::string& name) {
  if (name == "solve") return Command::solve;
  if (name == "current") return Command::current;
  if (name == "sweep") return Command::sweep;
  if (name == "scales") return Command::scales;
  if (name == "landau-check") return Command::landau_check;
  throw ConfigError("unknown command: " + name);
}

const char* to_string(Command command) {
  switch (command) {
    case Command::solve: return "solve";
    case Command::current: return "current";
    case Command::sweep: return "sweep";
    case Command::scales: return "scales";
    case Command::landau_check: return "landau-check";
  }
  return "?";
}

bool SweepSpec::looks_like_sweep(const std::string& text) { return text.find(':') != std::string::npos; }

SweepSpec SweepSpec::parse(const std::string& text) {
  const auto c1 = text.find(':');
  const auto c2 = c1 == std::string::npos ? c1 : text.find(':', c1 + 1);
  if (c2 == std::string::npos) throw ConfigError("sweep must look like lo:hi:logN=k, got " + text);
  const std::string tail = text.substr(c2 + 1);
  if (tail.rfind("logN=", 0) != 0) throw ConfigError("sweep must look like lo:hi:logN=k, got " + text);
  SweepSpec s;
  s.lo = parse_number(text.substr(0, c1), "sweep lo");
  s.hi = parse_number(text.substr(c1 + 1, c2 - c1 - 1), "sweep hi");
  const double k = parse_number(tail.substr(5), "sweep logN");
  if (!(s.lo > 0.0) || !(s.hi >= s.lo) || !std::isfinite(s.hi)) throw ConfigError("sweep needs 0 < lo <= hi");
  if (!(k >= 1.0) || k != std::floor(k) || k > 10000.0) throw ConfigError("sweep logN must be a positive integer");
  s.count = static_cast<std::size_t>(k);
  if (s.count == 1 && s.hi != s.lo) throw ConfigError("a one-point sweep needs lo == hi");
  return s;
}

std::vector<double> SweepSpec::values() const {
  std::vector<double> v(count);
  if (count == 1) {
    v[0] = lo;
    return v;
  }
  const double ratio = std::log(hi / lo);
  for (std::size_t k = 0; k < count; ++k)
    v[k] = lo * std::exp(ratio * static_cast<double>(k) / static_cast<double>(count - 1));
  v.front() = lo;
  v.back() = hi;
  return v;
}

double RunConfig::electrons() const {
  if (N) return *N;
  if (lambda) return *lambda * Z;
  return Z;
}

double RunConfig::field() const {
  if (!B.empty()) {
    if (SweepSpec::looks_like_sweep(B)) throw ConfigError("--B sweep only valid for the sweep command");
    return parse_number(B, "--B");
  }
  if (beta.empty()) throw ConfigError("one of --B or --beta is required");
  if (SweepSpec::looks_like_sweep(beta)) throw ConfigError("--beta sweep only valid for the sweep command");
  return parse_number(beta, "--beta") * std::pow(Z, 4.0 / 3.0);
}

std::vector<double> RunConfig::field_sweep() const {
  std::vector<double> v;
  if (!B.empty()) {
    v = SweepSpec::looks_like_sweep(B) ? SweepSpec::parse(B).values() : std::vector<double>{parse_number(B, "--B")};
  } else {
    if (beta.empty()) throw ConfigError("one of --B or --beta is required");
    v = SweepSpec::looks_like_sweep(beta) ? SweepSpec::parse(beta).values()
                                          : std::vector<double>{parse_number(beta, "--beta")};
    for (double& b : v) b *= std::pow(Z, 4.0 / 3.0);
  }
  return v;
}

void RunConfig::validate() const {
  if (!(Z > 0.0) || !std::isfinite(Z)) throw ConfigError("--Z must be positive");
  if (N && lambda) throw ConfigError("give --N or --lambda, not both");
  if (!(electrons() > 0.0) || !std::isfinite(electrons())) throw ConfigError("electron number must be positive");
  if (!B.empty() && !beta.empty()) throw ConfigError("give --B or --beta, not both");
  if (command == Command::sweep) {
    if (!SweepSpec::looks_like_sweep(B) && !SweepSpec::looks_like_sweep(beta))
      throw ConfigError("sweep needs --B or --beta as lo:hi:logN=k");
    for (double b : field_sweep())
      if (!(b > 0.0) || !std::isfinite(b)) throw ConfigError("field must be positive");
  } else {
    const double b = field();
    if (!(b > 0.0) || !std::isfinite(b)) throw ConfigError("field must be positive");
  }
  if (grid_n < RadialGrid::kMinNodes) throw ConfigError("--grid-n must be at least 64");
  if (!(rmax_ell > 1.0)) throw ConfigError("--rmax-ell must exceed 1");
  if (!(tol > 0.0) || !(tol < 1.0)) throw ConfigError("--tol must be in (0, 1)");
  if (!(mix > 0.0) || !(mix <= 1.0)) throw ConfigError("--mix must be in (0, 1]");
  if (max_iterations == 0) throw ConfigError("--max-iter must be positive");
  if (samples == 0) throw ConfigError("--samples must be positive");
  try {
    parse_field_profile(field_profile);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
}

Json RunConfig::provenance() const {
  Json p;
  p["command"] = to_string(command);
  p["version"] = MTF_VERSION;
  p["Z"] = Z;
  p["N"] = electrons();
  if (!B.empty()) p["B"] = B;
  if (!beta.empty()) p["beta"] = beta;
  p["grid_n"] = grid_n;
  p["rmax_ell"] = rmax_ell;
  p["tolerances"] = Json{{"scf", tol}, {"mu", SolverTolerances{}.mu}, {"max_iterations", max_iterations}};
  p["mix"] = mix;
  p["field_profile"] = field_profile;
  p["seed"] = seed;
  p["samples"] = samples;
  if (command == Command::scales) {
    p["delta"] = delta;
    p["mu_exponent"] = mu_exponent;
  }
  return p;
}

std::optional<RunConfig> parse_command_line(int argc, const char* const* argv, std::ostream& out) {
  RunConfig c;
  std::string command;
  double n = 0.0, lambda = 0.0;
  CLI::App app{"Magnetic Thomas-Fermi atoms: solver, currents, scales and lowest-band checks"};
  app.add_option("command", command, "solve | current | sweep | scales | landau-check")->required();
  app.add_option("--Z", c.Z, "nuclear charge");
  auto* n_opt = app.add_option("--N", n, "electron number (default Z)");
  auto* l_opt = app.add_option("--lambda", lambda, "N / Z");
  app.add_option("--B", c.B, "field strength, or lo:hi:logN=k for sweep");
  app.add_option("--beta", c.beta, "B / Z^{4/3}, or lo:hi:logN=k for sweep");
  app.add_option("--grid-n", c.grid_n, "radial nodes");
  app.add_option("--rmax-ell", c.rmax_ell, "outer radius in units of ell");
  app.add_option("--tol", c.tol, "self-consistency tolerance");
  app.add_option("--mix", c.mix, "initial mixing parameter");
  app.add_option("--max-iter", c.max_iterations, "self-consistency iteration cap");
  app.add_option("--field-profile", c.field_profile, "rigid | bump | shell");
  app.add_option("--seed", c.seed, "Monte-Carlo / random-spec seed");
  app.add_option("--samples", c.samples, "Monte-Carlo samples");
  app.add_option("--delta", c.delta, "confinement delta");
  app.add_option("--mu-exp", c.mu_exponent, "confinement exponent");
  app.add_option("--out", c.out, "output directory");
  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return std::nullopt;
  } catch (const CLI::ParseError& e) {
    throw ConfigError(e.what());
  }
  c.command = parse_command(command);
  if (*n_opt) c.N = n;
  if (*l_opt) c.lambda = lambda;
  c.validate();
  return c;
}

int run(const RunConfig& config, std::ostream& log) {
  try {
    config.validate();
    switch (config.command) {
      case Command::solve: return run_solve(config, log);
      case Command::current: return run_current(config, log);
      case Command::sweep: return run_sweep(config, log);
      case Command::scales: return run_scales(config, log);
      case Command::landau_check: return run_landau(config, log);
    }
  } catch (const NonConvergence& e) {
    log << "error: " << e.what() << '\n';
    return 1;
  } catch (const ConfigError& e) {
    log << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::invalid_argument& e) {
    log << "error: " << e.what() << '\n';
    return 2;
  }
  return 2;
}

int main_entry(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  std::optional<RunConfig> config;
  try {
    config = parse_command_line(argc, argv, out);
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  }
  if (!config) return 0;
  try {
    return run(*config, err);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
}

}  // namespace mtf
