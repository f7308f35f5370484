#pragma once

#include <complex>
#include <istream>
#include <map>
#include <string>
#include <string_view>

#include "mlsurf/baker_akhiezer.hpp"

namespace mlsurf::io {

/// Parses `re+imj`, `re-imj`, `re`, `imj` (also `j`/`-j`). Throws InvalidArgument.
std::complex<double> parse_complex(std::string_view text);

/// First non-comment line `g`, then g lines of g complex entries.
PeriodMatrix<double> read_period_matrix(std::istream& in);

/// Labeled lines `<label> <entries...>`: genus, B (g*g row-major), z, U, V,
/// abel_P, abel_r, exp1_P, exp2_P, exp1_r, exp2_r, d. `#` starts a comment.
ThetaBAInputs<double> read_theta_ba_inputs(std::istream& in);

/// Flat `key = value` lines with numeric values; `#` starts a comment.
std::map<std::string, double> read_scenario(std::istream& in);

}  // namespace mlsurf::io
