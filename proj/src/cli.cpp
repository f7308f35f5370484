#include "mlsurf/cli.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "mlsurf/io.hpp"
#include "mlsurf/report.hpp"

namespace mlsurf::cli {
namespace {

constexpr int kExitOk = 0;
constexpr int kExitFail = 1;
constexpr int kExitUsage = 2;

struct Options {
  std::string family = "spectral";
  double a = 1.0, b = 1.0, q1 = 2.0, gamma_im = 1.0;
  int m = 1, n = 2;
  std::string grid = "64x64";
  double x_min = 0.0, x_max = 2.0 * kPi<double>;
  double y_min = 0.0, y_max = 2.0 * kPi<double>;
  std::string out;
  std::string json_out;
  std::string tol_profile = "strict";
  double h = 1e-4;
  std::string scenario;

  std::string period_matrix;
  std::string z;
  int radius = 0;
  std::string ba_inputs;
  double x = 0.0, y = 0.0;
};

struct UsageError {
  std::vector<std::string> lines;
};

std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string fmt_complex(std::complex<double> z) { return fmt17(z.real()) + " " + fmt17(z.imag()); }

void add_family_flags(CLI::App& cmd, Options& o, bool with_grid) {
  cmd.add_option("--family", o.family, "spectral or cone");
  cmd.add_option("--a", o.a, "branch point of the first component");
  cmd.add_option("--b", o.b, "branch point of the second component");
  cmd.add_option("--q1", o.q1, "first zero of the differential on the second component");
  cmd.add_option("--gamma-im", o.gamma_im, "imaginary part of the divisor point");
  cmd.add_option("--m", o.m, "cone family exponent m");
  cmd.add_option("--n", o.n, "cone family exponent n");
  cmd.add_option("--scenario", o.scenario, "file of key = value lines (a, b, q1, gamma_im)");
  if (with_grid) {
    cmd.add_option("--grid", o.grid, "NXxNY");
    cmd.add_option("--x-min", o.x_min);
    cmd.add_option("--x-max", o.x_max);
    cmd.add_option("--y-min", o.y_min);
    cmd.add_option("--y-max", o.y_max);
    cmd.add_option("--h", o.h, "finite-difference step");
  }
  cmd.add_option("--out", o.out, "output file");
}

// Scenario values fill in every parameter not given explicitly on the command line.
void apply_scenario(const CLI::App& cmd, Options& o, std::vector<std::string>& errors) {
  if (o.scenario.empty()) return;
  std::ifstream in(o.scenario);
  if (!in) {
    errors.push_back("--scenario: cannot open '" + o.scenario + "'");
    return;
  }
  std::map<std::string, double> kv;
  try {
    kv = io::read_scenario(in);
  } catch (const Error& e) {
    errors.push_back(std::string("--scenario: ") + e.what());
    return;
  }
  const std::pair<const char*, double*> keys[] = {{"a", &o.a}, {"b", &o.b}, {"q1", &o.q1}, {"gamma_im", &o.gamma_im}};
  for (const auto& [key, value] : kv) {
    bool known = false;
    for (const auto& [name, slot] : keys) {
      if (key != name) continue;
      known = true;
      const std::string flag = std::string("--") + (key == "gamma_im" ? "gamma-im" : key);
      if (cmd.count(flag) == 0) *slot = value;
    }
    if (!known) errors.push_back("--scenario: unknown key '" + key + "'");
  }
}

void validate_spectral(const Options& o, std::vector<std::string>& errors) {
  if (!std::isfinite(o.a) || !(o.a > 0)) errors.push_back("--a: must be a finite number > 0");
  if (!std::isfinite(o.b) || !(o.b > 0)) errors.push_back("--b: must be a finite number > 0");
  if (!std::isfinite(o.gamma_im) || o.gamma_im == 0.0) errors.push_back("--gamma-im: must be finite and nonzero");
  if (!std::isfinite(o.q1)) {
    errors.push_back("--q1: must be finite");
  } else if (std::isfinite(o.b) && o.b > 0 && !(std::abs(o.q1) > o.b)) {
    errors.push_back("--q1: |q1| must exceed b");
  }
}

report::FamilyParams family_params(const Options& o, std::vector<std::string>& errors) {
  report::FamilyParams p;
  if (o.family == "spectral") {
    p.family = report::Family::Spectral;
    validate_spectral(o, errors);
  } else if (o.family == "cone") {
    p.family = report::Family::Cone;
    if (o.m < 1) errors.push_back("--m: must be a positive integer");
    if (o.n < 1) errors.push_back("--n: must be a positive integer");
  } else {
    errors.push_back("--family: expected 'spectral' or 'cone', got '" + o.family + "'");
  }
  p.a = o.a;
  p.b = o.b;
  p.q1 = o.q1;
  p.gamma_im = o.gamma_im;
  p.m = o.m;
  p.n = o.n;
  return p;
}

report::GridSpec grid_spec(const Options& o, std::vector<std::string>& errors) {
  report::GridSpec g;
  int nx = 0;
  int ny = 0;
  char sep = 0;
  char trailing = 0;
  if (std::sscanf(o.grid.c_str(), "%d%c%d%c", &nx, &sep, &ny, &trailing) != 3 || (sep != 'x' && sep != 'X') ||
      nx < 1 || ny < 1) {
    errors.push_back("--grid: expected NXxNY with positive integers, got '" + o.grid + "'");
  } else {
    g.nx = nx;
    g.ny = ny;
  }
  if (!(o.x_max > o.x_min) || !std::isfinite(o.x_min) || !std::isfinite(o.x_max)) {
    errors.push_back("--x-min/--x-max: need finite x-min < x-max");
  }
  if (!(o.y_max > o.y_min) || !std::isfinite(o.y_min) || !std::isfinite(o.y_max)) {
    errors.push_back("--y-min/--y-max: need finite y-min < y-max");
  }
  g.x_min = o.x_min;
  g.x_max = o.x_max;
  g.y_min = o.y_min;
  g.y_max = o.y_max;
  if (!(o.h > 0) || !std::isfinite(o.h)) errors.push_back("--h: must be a finite number > 0");
  return g;
}

// Writes to `path`, or to `fallback` when path is empty.
template <typename Fn>
void emit(const std::string& path, std::ostream& fallback, const char* flag, Fn&& write) {
  if (path.empty()) {
    write(fallback);
    return;
  }
  std::ofstream f(path);
  if (!f) throw UsageError{{std::string(flag) + ": cannot write '" + path + "'"}};
  write(f);
  f.flush();
  if (!f) throw UsageError{{std::string(flag) + ": write to '" + path + "' failed"}};
}

void throw_if(const std::vector<std::string>& errors) {
  if (!errors.empty()) throw UsageError{errors};
}

int cmd_verify(const CLI::App& cmd, Options& o, std::ostream& out) {
  std::vector<std::string> errors;
  apply_scenario(cmd, o, errors);
  const auto params = family_params(o, errors);
  const auto grid = grid_spec(o, errors);
  report::TolProfile profile = report::TolProfile::Strict;
  if (o.tol_profile == "fd") {
    profile = report::TolProfile::Fd;
  } else if (o.tol_profile != "strict") {
    errors.push_back("--tol-profile: expected 'strict' or 'fd', got '" + o.tol_profile + "'");
  }
  throw_if(errors);

  const auto rep = report::run_verification(params, grid, profile, o.h, report::thread_count_from_env());
  emit(o.out, out, "--out", [&](std::ostream& s) { report::write_text(s, rep); });
  if (!o.json_out.empty()) {
    emit(o.json_out, out, "--json-out", [&](std::ostream& s) { s << report::to_json(rep) << "\n"; });
  }
  return rep.pass() ? kExitOk : kExitFail;
}

int cmd_sample(const CLI::App& cmd, Options& o, std::ostream& out) {
  std::vector<std::string> errors;
  apply_scenario(cmd, o, errors);
  const auto params = family_params(o, errors);
  const auto grid = grid_spec(o, errors);
  throw_if(errors);
  if (params.family == report::Family::Spectral) derive_constants(params.a, params.b, params.q1, params.gamma_im);
  emit(o.out, out, "--out", [&](std::ostream& s) {
    report::write_samples_csv(s, params, grid, o.h, report::thread_count_from_env());
  });
  return kExitOk;
}

int cmd_curve_info(const CLI::App& cmd, Options& o, std::ostream& out) {
  std::vector<std::string> errors;
  apply_scenario(cmd, o, errors);
  validate_spectral(o, errors);
  throw_if(errors);
  const auto curve = derive_constants(o.a, o.b, o.q1, o.gamma_im);
  emit(o.out, out, "--out", [&](std::ostream& s) { report::write_curve_info(s, curve); });
  return kExitOk;
}

VectorXc<double> parse_vector(const std::string& text) {
  std::vector<std::complex<double>> vals;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) vals.push_back(io::parse_complex(item));
  VectorXc<double> v(static_cast<Eigen::Index>(vals.size()));
  for (std::size_t k = 0; k < vals.size(); ++k) v(static_cast<Eigen::Index>(k)) = vals[k];
  return v;
}

int cmd_theta(const CLI::App& cmd, Options& o, std::ostream& out) {
  const bool theta_mode = !o.period_matrix.empty();
  const bool ba_mode = !o.ba_inputs.empty();
  if (theta_mode == ba_mode) throw UsageError{{"theta: give exactly one of --period-matrix or --ba-inputs"}};
  if (cmd.count("--radius") != 0 && o.radius < 1) throw UsageError{{"--radius: must be >= 1"}};

  if (theta_mode) {
    if (o.z.empty()) throw UsageError{{"--z: required with --period-matrix"}};
    std::ifstream in(o.period_matrix);
    if (!in) throw UsageError{{"--period-matrix: cannot open '" + o.period_matrix + "'"}};
    PeriodMatrix<double> period = [&] {
      try {
        return io::read_period_matrix(in);
      } catch (const Error& e) {
        throw UsageError{{std::string("--period-matrix: ") + e.what()}};
      }
    }();
    VectorXc<double> z;
    try {
      z = parse_vector(o.z);
    } catch (const Error& e) {
      throw UsageError{{std::string("--z: ") + e.what()}};
    }
    if (z.size() != period.genus()) throw UsageError{{"--z: needs one entry per genus"}};
    LatticeTruncation trunc = default_truncation(period, z);
    if (o.radius > 0) trunc.radius = o.radius;
    emit(o.out, out, "--out", [&](std::ostream& s) {
      s << "theta = " << fmt_complex(riemann_theta(z, period, trunc)) << "\n";
      s << "radius = " << trunc.radius << "\n";
    });
    return kExitOk;
  }

  std::ifstream in(o.ba_inputs);
  if (!in) throw UsageError{{"--ba-inputs: cannot open '" + o.ba_inputs + "'"}};
  ThetaBAInputs<double> inp = [&] {
    try {
      return io::read_theta_ba_inputs(in);
    } catch (const Error& e) {
      throw UsageError{{std::string("--ba-inputs: ") + e.what()}};
    }
  }();
  const Complex<double> psi = ba_theta_assembly(inp, o.x, o.y);
  emit(o.out, out, "--out", [&](std::ostream& s) { s << "psi = " << fmt_complex(psi) << "\n"; });
  return kExitOk;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Minimal Lagrangian surfaces in CP^2 from spectral data", "mlsurf"};
  app.set_help_flag("--help", "print this help and exit");
  app.require_subcommand(1);
  Options o;

  auto* verify = app.add_subcommand("verify", "run every identity check over a grid");
  add_family_flags(*verify, o, true);
  verify->add_option("--json-out", o.json_out, "machine-readable report");
  verify->add_option("--tol-profile", o.tol_profile, "strict or fd");

  auto* sample = app.add_subcommand("sample", "sample the surface to CSV");
  add_family_flags(*sample, o, true);

  auto* info = app.add_subcommand("curve-info", "print the derived curve constants");
  info->add_option("--a", o.a);
  info->add_option("--b", o.b);
  info->add_option("--q1", o.q1);
  info->add_option("--gamma-im", o.gamma_im);
  info->add_option("--scenario", o.scenario);
  info->add_option("--out", o.out);

  auto* theta = app.add_subcommand("theta", "evaluate the Riemann theta function or a theta-form BA function");
  theta->add_option("--period-matrix", o.period_matrix, "file: genus line, then g rows");
  theta->add_option("--z", o.z, "comma-separated complex entries");
  theta->add_option("--radius", o.radius, "lattice truncation radius");
  theta->add_option("--ba-inputs", o.ba_inputs, "labeled input file");
  theta->add_option("--x", o.x);
  theta->add_option("--y", o.y);
  theta->add_option("--out", o.out);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    err << "mlsurf: " << e.what() << "\n";
    return kExitUsage;
  }

  try {
    if (*verify) return cmd_verify(*verify, o, out);
    if (*sample) return cmd_sample(*sample, o, out);
    if (*info) return cmd_curve_info(*info, o, out);
    return cmd_theta(*theta, o, out);
  } catch (const UsageError& e) {
    for (const auto& line : e.lines) err << "mlsurf: " << line << "\n";
    return kExitUsage;
  } catch (const Error& e) {
    err << "mlsurf: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "mlsurf: internal error: " << e.what() << "\n";
    return kExitUsage;
  }
}

}  // namespace mlsurf::cli
