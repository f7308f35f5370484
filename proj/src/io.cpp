#include "mlsurf/io.hpp"

#include <cctype>
#include <cstdlib>
#include <sstream>
#include <vector>

namespace mlsurf::io {
namespace {

std::string strip_comment(const std::string& line) {
  const auto hash = line.find('#');
  return hash == std::string::npos ? line : line.substr(0, hash);
}

std::string trim(std::string_view s) {
  std::size_t b = 0;
  std::size_t e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return std::string(s.substr(b, e - b));
}

double parse_real(const std::string& token, std::string_view context) {
  if (token.empty()) throw InvalidArgument("empty number in '" + std::string(context) + "'");
  char* end = nullptr;
  const double v = std::strtod(token.c_str(), &end);
  if (end != token.c_str() + token.size()) {
    throw InvalidArgument("malformed number '" + token + "' in '" + std::string(context) + "'");
  }
  return v;
}

std::vector<std::string> tokens(const std::string& line) {
  std::istringstream ss(line);
  std::vector<std::string> out;
  std::string tok;
  while (ss >> tok) out.push_back(tok);
  return out;
}

}  // namespace

std::complex<double> parse_complex(std::string_view text) {
  const std::string s = trim(text);
  if (s.empty()) throw InvalidArgument("empty complex literal");
  if (s.back() != 'j' && s.back() != 'J') return {parse_real(s, s), 0.0};

  const std::string body = s.substr(0, s.size() - 1);
  // split at the last sign that is not the leading sign and not an exponent sign
  std::size_t split = std::string::npos;
  for (std::size_t k = body.size(); k-- > 1;) {
    if ((body[k] == '+' || body[k] == '-') && body[k - 1] != 'e' && body[k - 1] != 'E') {
      split = k;
      break;
    }
  }
  auto imag_of = [&](const std::string& part) {
    if (part.empty() || part == "+") return 1.0;
    if (part == "-") return -1.0;
    return parse_real(part, s);
  };
  if (split == std::string::npos) return {0.0, imag_of(body)};
  return {parse_real(body.substr(0, split), s), imag_of(body.substr(split))};
}

PeriodMatrix<double> read_period_matrix(std::istream& in) {
  std::vector<std::vector<std::string>> rows;
  std::string line;
  while (std::getline(in, line)) {
    auto t = tokens(strip_comment(line));
    if (!t.empty()) rows.push_back(std::move(t));
  }
  if (rows.empty() || rows[0].size() != 1) throw InvalidArgument("period matrix file must start with the genus");
  const double g_real = parse_real(rows[0][0], "genus");
  const int g = static_cast<int>(g_real);
  if (g < 1 || static_cast<double>(g) != g_real) throw InvalidArgument("genus must be a positive integer");
  if (static_cast<int>(rows.size()) != g + 1) throw DimensionMismatch("period matrix file must have g rows after the genus");
  MatrixXc<double> b(g, g);
  for (int i = 0; i < g; ++i) {
    const auto& r = rows[static_cast<std::size_t>(i) + 1];
    if (static_cast<int>(r.size()) != g) throw DimensionMismatch("period matrix row " + std::to_string(i + 1) + " needs g entries");
    for (int j = 0; j < g; ++j) b(i, j) = parse_complex(r[static_cast<std::size_t>(j)]);
  }
  const double asym = (b - b.transpose()).cwiseAbs().maxCoeff();
  if (asym > 1e-12 * (1.0 + b.cwiseAbs().maxCoeff())) throw InvalidArgument("period matrix is not symmetric");
  return PeriodMatrix<double>::fromUpperTriangle(b);
}

ThetaBAInputs<double> read_theta_ba_inputs(std::istream& in) {
  std::map<std::string, std::vector<std::complex<double>>> fields;
  std::string line;
  while (std::getline(in, line)) {
    auto t = tokens(strip_comment(line));
    if (t.empty()) continue;
    const std::string label = t[0];
    if (fields.count(label) != 0) throw InvalidArgument("duplicate label '" + label + "'");
    std::vector<std::complex<double>> values;
    for (std::size_t k = 1; k < t.size(); ++k) values.push_back(parse_complex(t[k]));
    fields[label] = std::move(values);
  }
  auto need = [&](const std::string& label) -> const std::vector<std::complex<double>>& {
    auto it = fields.find(label);
    if (it == fields.end()) throw InvalidArgument("missing label '" + label + "'");
    return it->second;
  };
  auto scalar = [&](const std::string& label) {
    const auto& v = need(label);
    if (v.size() != 1) throw DimensionMismatch("'" + label + "' must hold one value");
    return v[0];
  };

  const std::complex<double> genus = scalar("genus");
  const int g = static_cast<int>(genus.real());
  if (g < 1 || genus.imag() != 0.0 || static_cast<double>(g) != genus.real()) {
    throw InvalidArgument("genus must be a positive integer");
  }
  auto vec = [&](const std::string& label) {
    const auto& v = need(label);
    if (static_cast<int>(v.size()) != g) throw DimensionMismatch("'" + label + "' must hold g entries");
    VectorXc<double> out(g);
    for (int k = 0; k < g; ++k) out(k) = v[static_cast<std::size_t>(k)];
    return out;
  };
  const auto& bvals = need("B");
  if (static_cast<int>(bvals.size()) != g * g) throw DimensionMismatch("'B' must hold g*g entries (row-major)");
  MatrixXc<double> b(g, g);
  for (int i = 0; i < g; ++i) {
    for (int j = 0; j < g; ++j) b(i, j) = bvals[static_cast<std::size_t>(i * g + j)];
  }
  if ((b - b.transpose()).cwiseAbs().maxCoeff() > 1e-12 * (1.0 + b.cwiseAbs().maxCoeff())) {
    throw InvalidArgument("period matrix is not symmetric");
  }
  const std::complex<double> d = scalar("d");
  if (d.imag() != 0.0) throw InvalidArgument("'d' must be real");

  return ThetaBAInputs<double>{PeriodMatrix<double>::fromUpperTriangle(b),
                               vec("z"),
                               vec("U"),
                               vec("V"),
                               vec("abel_P"),
                               vec("abel_r"),
                               scalar("exp1_P"),
                               scalar("exp2_P"),
                               scalar("exp1_r"),
                               scalar("exp2_r"),
                               d.real()};
}

std::map<std::string, double> read_scenario(std::istream& in) {
  std::map<std::string, double> out;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string body = trim(strip_comment(line));
    if (body.empty()) continue;
    const auto eq = body.find('=');
    if (eq == std::string::npos) throw InvalidArgument("scenario line " + std::to_string(lineno) + ": expected key = value");
    const std::string key = trim(std::string_view(body).substr(0, eq));
    const std::string value = trim(std::string_view(body).substr(eq + 1));
    if (key.empty()) throw InvalidArgument("scenario line " + std::to_string(lineno) + ": empty key");
    out[key] = parse_real(value, body);
  }
  return out;
}

}  // namespace mlsurf::io
