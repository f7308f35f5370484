#include "mlsurf/report.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <limits>
#include <thread>

#include "json.hpp"

namespace mlsurf::report {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

template <typename Fn>
void parallel_for(std::size_t n, int threads, Fn&& fn) {
  const auto workers = static_cast<std::size_t>(std::clamp<long>(threads, 1, static_cast<long>(std::max<std::size_t>(n, 1))));
  if (workers <= 1) {
    for (std::size_t k = 0; k < n; ++k) fn(k);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (std::size_t t = 0; t < workers; ++t) {
    pool.emplace_back([&] {
      for (std::size_t k = next++; k < n; k = next++) fn(k);
    });
  }
  for (auto& th : pool) th.join();
}

std::string format_number(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

// Everything measured at one grid point. Frame-tier fields stay untouched
// for points inside the degeneracy tube.
struct PointResult {
  double gram_norm = 0, gram_orth = 0;
  double metric = 0, residues = 0, gluing = 0, conjugation = 0, f_imag = 0;
  double G = 0;
  double v_diff = 0;
  bool in_tube = false;

  std::complex<double> e_2ibeta{0, 0};
  double beta_grad = 0;
  double e2ibeta = 0;
  double christoffel_b = 0, christoffel_residual = 0;
  double trace = 0, minimality = 0;
  double frame = 0, frame_entries = 0;
  double curvature = 0;
  bool frame_tier_ok = true;
};

struct Tolerances {
  double gram_norm, gram_orth, metric, residues, angle_const, e2ibeta;
  double christoffel_b, christoffel_residual, trace, minimality;
  double frame, frame_entries, curvature;
};

Tolerances tolerances(TolProfile p) {
  if (p == TolProfile::Strict) {
    return {1e-10, 1e-10, 1e-10, 1e-9, 1e-8, 1e-10, 1e-8, 1e-10, 1e-8, 1e-8, 1e-6, 1e-6, 1e-4};
  }
  return {1e-10, 1e-6, 1e-6, 1e-6, 1e-6, 1e-6, 1e-4, 1e-10, 1e-4, 1e-4, 1e-6, 1e-4, 1e-3};
}

template <typename JetField>
void frame_tier(PointResult& r, const JetField& field, double x, double y, double h, bool curvature_fd,
                const SpectralFamily<double>* spectral) {
  try {
    const SurfaceJet<double> jet = field(x, y);
    const MetricData<double> metric = metric_from_jet(jet);
    const double beta = lagrangian_angle(jet);
    r.e_2ibeta = std::polar(1.0, 2.0 * beta);
    r.e2ibeta = std::abs(r.e_2ibeta + 1.0);
    r.v_diff = std::abs(metric.v1 - metric.v2);

    const ChristoffelData<double> ch = christoffel_solve(jet);
    const JetGradients<double> grads = jet_gradients(jet);
    r.beta_grad = std::max(std::abs(grads.beta_x), std::abs(grads.beta_y));
    r.christoffel_b = christoffel_b_defects(ch, metric).max();
    r.christoffel_residual = ch.residual;
    const auto l1 = lemma1_defects(ch, grads);
    r.trace = std::max(l1[0], l1[1]);
    const auto mn = minimality_defects(ch);
    r.minimality = std::max(mn[0], mn[1]);

    // nested differences: the outer stencil needs a wider step than the jets
    const FrameData<double> fd = frame_and_connection<double>(field, x, y, curvature_fd ? 10.0 * h : h);
    r.frame = frame_defects(fd).max();
    r.frame_entries = connection_entry_defect(fd, metric, grads);

    if (spectral != nullptr) {
      double k = 0;
      if (curvature_fd) {
        k = gauss_curvature_fd(
            [&](double px, double py) {
              return std::pair{spectral->derivative(1, 0, px, py).squaredNorm(),
                               spectral->derivative(0, 1, px, py).squaredNorm()};
            },
            x, y, h);
      } else {
        k = gauss_curvature(metric_jet(*spectral, x, y));
      }
      r.curvature = std::abs(k - 1.0);
    }
  } catch (const Error&) {
    r.frame_tier_ok = false;
  }
}

CheckRecord make_check(std::string name, double value, double tol, std::size_t excluded = 0, std::string note = {}) {
  CheckRecord c{std::move(name), value, tol, false, false, excluded, std::move(note)};
  c.pass = std::isfinite(value) && value < tol;
  return c;
}

CheckRecord make_lower_bound(std::string name, double value, double threshold, std::string note = {}) {
  CheckRecord c{std::move(name), value, threshold, true, false, 0, std::move(note)};
  c.pass = std::isfinite(value) && value > threshold;
  return c;
}

// Max over points of a field, restricted to `use`; non-finite propagates as inf.
template <typename Getter, typename Filter>
double reduce_max(const std::vector<PointResult>& pts, Getter get, Filter use) {
  double m = 0;
  for (const auto& p : pts) {
    if (!use(p)) continue;
    const double v = get(p);
    m = std::isfinite(v) ? std::max(m, v) : kInf;
  }
  return m;
}

void frame_tier_checks(VerificationReport& rep, const std::vector<PointResult>& pts, const Tolerances& tol,
                       bool spectral, bool curvature_fd) {
  std::size_t excluded = 0;
  bool all_ok = true;
  std::optional<std::complex<double>> ref;
  double constancy = 0;
  for (const auto& p : pts) {
    if (p.in_tube) {
      ++excluded;
      continue;
    }
    if (!p.frame_tier_ok) {
      all_ok = false;
      continue;
    }
    if (!ref) ref = p.e_2ibeta;
    constancy = std::max({constancy, std::abs(p.e_2ibeta - *ref), p.beta_grad});
  }
  auto usable = [](const PointResult& p) { return !p.in_tube; };
  auto guarded = [&](auto get) {
    return [get](const PointResult& p) { return p.frame_tier_ok ? get(p) : kInf; };
  };
  const std::string failure_note = all_ok ? "" : "numerical failure at a non-excluded point";

  rep.checks.push_back(make_check("angle.constancy", all_ok ? constancy : kInf, tol.angle_const, excluded,
                                  "max of |e^{2i beta} - e^{2i beta_ref}|, |beta_x|, |beta_y|" + (failure_note.empty() ? "" : "; " + failure_note)));
  if (spectral) {
    rep.checks.push_back(make_check("angle.e2ibeta",
                                    reduce_max(pts, guarded([](const PointResult& p) { return p.e2ibeta; }), usable),
                                    tol.e2ibeta, excluded, "|e^{2 i beta} + 1|"));
  }
  rep.checks.push_back(make_check("christoffel.b",
                                  reduce_max(pts, guarded([](const PointResult& p) { return p.christoffel_b; }), usable),
                                  tol.christoffel_b, excluded, "relative deviation from b11=-E, b12=0, b22=-G"));
  rep.checks.push_back(make_check(
      "christoffel.residual",
      reduce_max(pts, guarded([](const PointResult& p) { return p.christoffel_residual; }), usable),
      tol.christoffel_residual, excluded, "backward error of the three 3x3 solves"));
  rep.checks.push_back(make_check("christoffel.trace",
                                  reduce_max(pts, guarded([](const PointResult& p) { return p.trace; }), usable),
                                  tol.trace, excluded));
  rep.checks.push_back(make_check("christoffel.minimality",
                                  reduce_max(pts, guarded([](const PointResult& p) { return p.minimality; }), usable),
                                  tol.minimality, excluded, "|Im(G1_11 + G2_12)|, |Im(G1_12 + G2_22)|"));
  rep.checks.push_back(make_check("frame.structure",
                                  reduce_max(pts, guarded([](const PointResult& p) { return p.frame; }), usable),
                                  tol.frame, excluded, "unitary, det 1, su(3), zero pattern, f and h real"));
  rep.checks.push_back(make_check("frame.connection_entries",
                                  reduce_max(pts, guarded([](const PointResult& p) { return p.frame_entries; }), usable),
                                  tol.frame_entries, excluded, "A, B entries vs closed forms"));
  if (spectral) {
    rep.checks.push_back(make_check("curvature",
                                    reduce_max(pts, guarded([](const PointResult& p) { return p.curvature; }), usable),
                                    tol.curvature, excluded,
                                    curvature_fd ? "|K - 1|, nested finite differences" : "|K - 1|, analytic metric derivatives"));
  }
}

VerificationReport verify_spectral(const FamilyParams& params, const GridSpec& grid, TolProfile profile, double h,
                                   int threads) {
  const auto curve = derive_constants(params.a, params.b, params.q1, params.gamma_im);
  const SpectralFamily<double> family(curve);
  const ExpSum<double> f2 = ba_f2_field(curve);
  const Tolerances tol = tolerances(profile);
  const bool use_fd = profile == TolProfile::Fd;

  VerificationReport rep;
  rep.params = params;
  rep.grid = grid;
  rep.profile = profile;
  rep.h = h;

  // curve-level checks
  const auto w1 = curve.omega1();
  const auto w2 = curve.omega2();
  rep.checks.push_back(make_check("curve.regularity", regularity_defect(curve), 1e-13, 0, "|Res Omega1 + Res Omega2| at both gluing pairs"));
  const auto e1 = expansion_at_infinity(w1, 2);
  const auto e2 = expansion_at_infinity(w2, 2);
  rep.checks.push_back(make_check("curve.expansion_w2_P1", std::abs(e1[1]) / std::abs(e1[0]), 1e-12, 0, "|w^2 coeff| / |w coeff|"));
  rep.checks.push_back(make_check("curve.expansion_w2_P2", std::abs(e2[1]) / std::abs(e2[0]), 1e-12, 0, "|w^2 coeff| / |w coeff|"));
  rep.checks.push_back(make_lower_bound(
      "curve.residues_positive", *std::min_element(curve.residue_q.begin(), curve.residue_q.end()), 0.0, "min Res_Qi"));

  auto analytic = [&](double x, double y) { return family.jet(x, y); };
  auto numeric = [&](double x, double y) { return fd_jet<double>(family, x, y, h); };

  const std::complex<double> probes2[] = {{curve.q[0], 0}, {0, 0.7}, {0.3, 0.4}};
  std::vector<PointResult> pts(grid.size());
  parallel_for(grid.size(), threads, [&](std::size_t k) {
    const int i = static_cast<int>(k / static_cast<std::size_t>(grid.ny));
    const int j = static_cast<int>(k % static_cast<std::size_t>(grid.ny));
    const double x = grid.x(i);
    const double y = grid.y(j);
    PointResult& r = pts[k];
    const SurfaceJet<double> jet = use_fd ? numeric(x, y) : analytic(x, y);
    const auto g = gram_defects(jet);
    r.gram_norm = g.norm;
    r.gram_orth = g.orthogonality();
    const double f2v = f2(x, y).real();
    r.f_imag = std::abs(f2(x, y).imag());
    const double e_expect = curve.d * curve.d * std::abs(curve.c1_exp);
    const double g_expect = f2v * f2v * std::abs(curve.c2_exp);
    r.G = jet.phi_y.squaredNorm();
    r.metric = std::max(std::abs(jet.phi_x.squaredNorm() - e_expect), std::abs(r.G - g_expect));
    const auto t1 = theorem1_defects(curve, jet);
    r.residues = *std::max_element(t1.begin(), t1.end());
    r.gluing = ba_gluing_defect(curve, x, y);
    double conj = ba_conjugation_defect(curve, x, y, Component::One, std::complex<double>(0.5, -0.2));
    for (const auto& c : probes2) conj = std::max(conj, ba_conjugation_defect(curve, x, y, Component::Two, c));
    r.conjugation = conj;
    r.in_tube = family.degeneracy_distance(x, y) < kDegeneracyTube;
    if (!r.in_tube) {
      if (use_fd) {
        frame_tier(r, numeric, x, y, h, true, &family);
      } else {
        frame_tier(r, analytic, x, y, h, false, &family);
      }
    }
  });

  auto all = [](const PointResult&) { return true; };
  rep.checks.push_back(make_check("gram.norm", reduce_max(pts, [](const PointResult& p) { return p.gram_norm; }, all), tol.gram_norm, 0, "|<phi,phi> - 1|"));
  rep.checks.push_back(make_check("gram.orthogonality", reduce_max(pts, [](const PointResult& p) { return p.gram_orth; }, all), tol.gram_orth, 0,
                                  "|<phi,phi_x>|, |<phi,phi_y>|, |<phi_x,phi_y>|"));
  rep.checks.push_back(make_check("metric.closed_form", reduce_max(pts, [](const PointResult& p) { return p.metric; }, all), tol.metric, 0,
                                  "E = |f1|^2 |c1|, G = |f2|^2 |c2|"));
  rep.checks.push_back(make_check("residue_identities", reduce_max(pts, [](const PointResult& p) { return p.residues; }, all), tol.residues, 0,
                                  "six residue sums"));
  rep.checks.push_back(make_check("ba.gluing", reduce_max(pts, [](const PointResult& p) { return p.gluing; }, all), 1e-12, 0,
                                  "psi1(+-a) = psi2(+-b), relative"));
  rep.checks.push_back(make_check("ba.conjugation", reduce_max(pts, [](const PointResult& p) { return p.conjugation; }, all), 1e-12, 0,
                                  "|psi(tau P) - conj psi(P)|"));
  rep.checks.push_back(make_check("ba.f_real", reduce_max(pts, [](const PointResult& p) { return p.f_imag; }, all), 1e-12, 0, "|Im f2|"));

  std::size_t tube = 0;
  const double g_in_tube = reduce_max(
      pts, [](const PointResult& p) { return p.G; },
      [&](const PointResult& p) {
        if (p.in_tube) ++tube;
        return p.in_tube;
      });
  rep.checks.push_back(make_check("degeneracy.tube", g_in_tube, 1e-3, tube, "max G inside the excluded tube"));

  frame_tier_checks(rep, pts, tol, true, use_fd);
  return rep;
}

VerificationReport verify_cone(const FamilyParams& params, const GridSpec& grid, TolProfile profile, double h,
                               int threads) {
  const ConeFamily<double> family(params.m, params.n);
  const Tolerances tol = tolerances(profile);
  const bool use_fd = profile == TolProfile::Fd;

  VerificationReport rep;
  rep.params = params;
  rep.grid = grid;
  rep.profile = profile;
  rep.h = h;

  auto analytic = [&](double x, double y) { return family.jet(x, y); };
  auto numeric = [&](double x, double y) { return fd_jet<double>(family, x, y, h); };

  std::vector<PointResult> pts(grid.size());
  parallel_for(grid.size(), threads, [&](std::size_t k) {
    const int i = static_cast<int>(k / static_cast<std::size_t>(grid.ny));
    const int j = static_cast<int>(k % static_cast<std::size_t>(grid.ny));
    const double x = grid.x(i);
    const double y = grid.y(j);
    PointResult& r = pts[k];
    const SurfaceJet<double> jet = use_fd ? numeric(x, y) : analytic(x, y);
    const auto g = gram_defects(jet);
    r.gram_norm = g.norm;
    r.gram_orth = g.orthogonality();
    if (use_fd) {
      frame_tier(r, numeric, x, y, h, true, nullptr);
    } else {
      frame_tier(r, analytic, x, y, h, false, nullptr);
    }
  });

  auto all = [](const PointResult&) { return true; };
  rep.checks.push_back(make_check("gram.norm", reduce_max(pts, [](const PointResult& p) { return p.gram_norm; }, all), tol.gram_norm, 0, "|<phi,phi> - 1|"));
  rep.checks.push_back(make_check("gram.orthogonality", reduce_max(pts, [](const PointResult& p) { return p.gram_orth; }, all), tol.gram_orth, 0,
                                  "|<phi,phi_x>|, |<phi,phi_y>|, |<phi_x,phi_y>|"));
  rep.checks.push_back(make_lower_bound("metric.v1_ne_v2",
                                        reduce_max(pts, [](const PointResult& p) { return p.frame_tier_ok ? p.v_diff : 0.0; }, all), 0.1,
                                        "max |v1 - v2|"));
  frame_tier_checks(rep, pts, tol, false, use_fd);
  return rep;
}

}  // namespace

bool VerificationReport::pass() const {
  return std::all_of(checks.begin(), checks.end(), [](const CheckRecord& c) { return c.pass; });
}

const CheckRecord* VerificationReport::find(const std::string& name) const {
  for (const auto& c : checks) {
    if (c.name == name) return &c;
  }
  return nullptr;
}

std::string family_name(Family f) { return f == Family::Spectral ? "spectral" : "cone"; }
std::string profile_name(TolProfile p) { return p == TolProfile::Strict ? "strict" : "fd"; }

int thread_count_from_env() {
  const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
  if (const char* env = std::getenv("MLSURF_THREADS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v > 0) return static_cast<int>(std::min<long>(v, static_cast<long>(hw) * 4));
  }
  return static_cast<int>(hw);
}

VerificationReport run_verification(const FamilyParams& params, const GridSpec& grid, TolProfile profile, double h,
                                    int threads) {
  if (grid.nx < 1 || grid.ny < 1) throw InvalidArgument("grid must have at least one point per axis");
  if (!(h > 0)) throw InvalidArgument("finite-difference step must be > 0");
  return params.family == Family::Spectral ? verify_spectral(params, grid, profile, h, threads)
                                           : verify_cone(params, grid, profile, h, threads);
}

void write_text(std::ostream& out, const VerificationReport& rep) {
  out << "family " << family_name(rep.params.family);
  if (rep.params.family == Family::Spectral) {
    out << "  a=" << rep.params.a << " b=" << rep.params.b << " q1=" << rep.params.q1
        << " gamma_im=" << rep.params.gamma_im;
  } else {
    out << "  m=" << rep.params.m << " n=" << rep.params.n;
  }
  out << "\ngrid " << rep.grid.nx << "x" << rep.grid.ny << " over [" << rep.grid.x_min << ", " << rep.grid.x_max
      << ") x [" << rep.grid.y_min << ", " << rep.grid.y_max << ")  profile " << profile_name(rep.profile)
      << "  h " << rep.h << "\n\n";
  char line[160];
  std::snprintf(line, sizeof line, "%-26s %14s %12s %6s  %s\n", "check", "value", "tolerance", "excl", "result");
  out << line;
  for (const auto& c : rep.checks) {
    std::snprintf(line, sizeof line, "%-26s %14.3e %s%11.1e %6zu  %s", c.name.c_str(), c.value, c.lower_bound ? ">" : "<",
                  c.tolerance, c.excluded, c.pass ? "PASS" : "FAIL");
    out << line;
    if (!c.note.empty()) out << "  (" << c.note << ")";
    out << "\n";
  }
  out << "\noverall: " << (rep.pass() ? "PASS" : "FAIL") << "\n";
}

std::string to_json(const VerificationReport& rep) {
  nlohmann::json j;
  j["family"] = family_name(rep.params.family);
  if (rep.params.family == Family::Spectral) {
    j["parameters"] = {{"a", rep.params.a}, {"b", rep.params.b}, {"q1", rep.params.q1}, {"gamma_im", rep.params.gamma_im}};
  } else {
    j["parameters"] = {{"m", rep.params.m}, {"n", rep.params.n}};
  }
  j["grid"] = {{"nx", rep.grid.nx},
               {"ny", rep.grid.ny},
               {"x_range", {rep.grid.x_min, rep.grid.x_max}},
               {"y_range", {rep.grid.y_min, rep.grid.y_max}}};
  j["tol_profile"] = profile_name(rep.profile);
  j["h"] = rep.h;
  j["degeneracy_tube"] = kDegeneracyTube;
  auto& checks = j["checks"] = nlohmann::json::array();
  for (const auto& c : rep.checks) {
    nlohmann::json cj = {{"name", c.name},
                         {"tolerance", c.tolerance},
                         {"comparison", c.lower_bound ? "greater" : "less"},
                         {"pass", c.pass},
                         {"excluded_points", c.excluded}};
    // JSON has no infinity
    cj["max_defect"] = std::isfinite(c.value) ? nlohmann::json(c.value) : nlohmann::json(nullptr);
    if (!c.note.empty()) cj["note"] = c.note;
    checks.push_back(std::move(cj));
  }
  j["pass"] = rep.pass();
  return j.dump(2);
}

void write_samples_csv(std::ostream& out, const FamilyParams& params, const GridSpec& grid, double h, int threads) {
  if (grid.nx < 1 || grid.ny < 1) throw InvalidArgument("grid must have at least one point per axis");
  std::optional<SpectralFamily<double>> spectral;
  std::optional<ConeFamily<double>> cone;
  if (params.family == Family::Spectral) {
    spectral.emplace(derive_constants(params.a, params.b, params.q1, params.gamma_im));
  } else {
    cone.emplace(params.m, params.n);
  }

  std::vector<std::string> rows(grid.size());
  parallel_for(grid.size(), threads, [&](std::size_t k) {
    const int i = static_cast<int>(k / static_cast<std::size_t>(grid.ny));
    const int j = static_cast<int>(k % static_cast<std::size_t>(grid.ny));
    const double x = grid.x(i);
    const double y = grid.y(j);
    const SurfaceJet<double> jet = spectral ? spectral->jet(x, y) : cone->jet(x, y);
    const double e = jet.phi_x.squaredNorm();
    const double g = jet.phi_y.squaredNorm();

    std::string beta;
    std::string curvature;
    const bool in_tube = spectral && spectral->degeneracy_distance(x, y) < kDegeneracyTube;
    try {
      beta = format_number(lagrangian_angle(jet));
    } catch (const Error&) {
    }
    if (!in_tube) {
      try {
        if (spectral) {
          curvature = format_number(gauss_curvature(metric_jet(*spectral, x, y)));
        } else {
          curvature = format_number(gauss_curvature_fd(
              [&](double px, double py) {
                const auto pj = cone->jet(px, py);
                return std::pair{pj.phi_x.squaredNorm(), pj.phi_y.squaredNorm()};
              },
              x, y, h));
        }
      } catch (const Error&) {
      }
    }

    std::string row = format_number(x) + "," + format_number(y);
    for (int c = 0; c < 3; ++c) row += "," + format_number(jet.phi(c).real()) + "," + format_number(jet.phi(c).imag());
    row += "," + format_number(e) + "," + format_number(g) + "," + beta + "," + curvature;
    rows[k] = std::move(row);
  });

  out << kCsvHeader << "\n";
  for (const auto& r : rows) out << r << "\n";
}

void write_curve_info(std::ostream& out, const ReducibleCurveData<double>& curve) {
  const auto w1 = curve.omega1();
  const auto w2 = curve.omega2();
  const auto e1 = expansion_at_infinity(w1, 2);
  const auto e2 = expansion_at_infinity(w2, 2);
  const double reg_plus = std::abs(residue_simple(w1, std::complex<double>(curve.a)) +
                                   residue_simple(w2, std::complex<double>(curve.b)));
  const double reg_minus = std::abs(residue_simple(w1, std::complex<double>(-curve.a)) +
                                    residue_simple(w2, std::complex<double>(-curve.b)));
  auto kv = [&](const char* key, double v) { out << key << " = " << format_number(v) << "\n"; };
  kv("a", curve.a);
  kv("b", curve.b);
  kv("gamma_im", curve.gamma_im);
  kv("q1", curve.q[0]);
  kv("q2", curve.q[1]);
  kv("q3", curve.q[2]);
  kv("c", curve.c);
  kv("d", curve.d);
  kv("alpha1", curve.alpha[0]);
  kv("alpha2", curve.alpha[1]);
  kv("alpha3", curve.alpha[2]);
  kv("res_q1", curve.residue_q[0]);
  kv("res_q2", curve.residue_q[1]);
  kv("res_q3", curve.residue_q[2]);
  kv("res_r", curve.residue_r);
  kv("c1_exp", curve.c1_exp);
  kv("c2_exp", curve.c2_exp);
  kv("w2_coeff_p1", std::abs(e1[1]));
  kv("w2_coeff_p2", std::abs(e2[1]));
  kv("regularity_defect_plus", reg_plus);
  kv("regularity_defect_minus", reg_minus);
}

}  // namespace mlsurf::report
