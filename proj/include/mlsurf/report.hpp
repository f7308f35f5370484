#pragma once

#include <cstddef>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "mlsurf/diffgeo.hpp"

namespace mlsurf::report {

/// Uniform grid over [x_min, x_max) x [y_min, y_max), endpoints excluded.
struct GridSpec {
  int nx = 64;
  int ny = 64;
  double x_min = 0.0;
  double x_max = 2.0 * kPi<double>;
  double y_min = 0.0;
  double y_max = 2.0 * kPi<double>;

  double x(int i) const { return x_min + (x_max - x_min) * static_cast<double>(i) / nx; }
  double y(int j) const { return y_min + (y_max - y_min) * static_cast<double>(j) / ny; }
  std::size_t size() const { return static_cast<std::size_t>(nx) * static_cast<std::size_t>(ny); }
};

enum class Family { Spectral, Cone };

struct FamilyParams {
  Family family = Family::Spectral;
  double a = 1.0;
  double b = 1.0;
  double q1 = 2.0;
  double gamma_im = 1.0;
  int m = 1;
  int n = 2;
};

/// strict: analytic jets, analytic-tier tolerances. fd: jets by central
/// differences of step h, tolerances at the finite-difference tier.
enum class TolProfile { Strict, Fd };

/// Half-width of the tube around degenerate lines (G = 0) skipped by the
/// frame, angle, Christoffel and curvature checks.
inline constexpr double kDegeneracyTube = 1e-2;

struct CheckRecord {
  std::string name;
  double value = 0.0;       // max defect, or the measured quantity for lower-bound checks
  double tolerance = 0.0;
  bool lower_bound = false; // pass iff value > tolerance instead of value < tolerance
  bool pass = false;
  std::size_t excluded = 0; // grid points skipped under the degeneracy policy
  std::string note;
};

struct VerificationReport {
  FamilyParams params;
  GridSpec grid;
  TolProfile profile = TolProfile::Strict;
  double h = 1e-4;
  std::vector<CheckRecord> checks;

  bool pass() const;
  const CheckRecord* find(const std::string& name) const;
};

std::string family_name(Family f);
std::string profile_name(TolProfile p);

/// Worker count: MLSURF_THREADS if set and positive, else hardware concurrency.
int thread_count_from_env();

/// Runs every identity check for the family over the grid. Throws
/// InvalidArgument for invalid family parameters.
VerificationReport run_verification(const FamilyParams& params, const GridSpec& grid, TolProfile profile, double h,
                                    int threads);

void write_text(std::ostream& out, const VerificationReport& report);
std::string to_json(const VerificationReport& report);

inline constexpr const char* kCsvHeader = "x,y,re_phi1,im_phi1,re_phi2,im_phi2,re_phi3,im_phi3,E,G,beta,K";

/// One CSV row per grid point (x-major); K is blank inside the degeneracy tube.
void write_samples_csv(std::ostream& out, const FamilyParams& params, const GridSpec& grid, double h, int threads);

/// Derived constants of the reducible curve as `key = value` lines.
void write_curve_info(std::ostream& out, const ReducibleCurveData<double>& curve);

}  // namespace mlsurf::report
