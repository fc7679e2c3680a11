#pragma once

#include <cctype>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"
#include "vnlab/hankel.hpp"
#include "vnlab/kernels.hpp"
#include "vnlab/operators.hpp"
#include "vnlab/poly.hpp"

// File formats and CSV helpers. Everything that can fail on malformed input
// throws std::invalid_argument so the CLI can map it to one exit code.

namespace vnlab {

using json = nlohmann::json;

/// %.12g with the C locale: enough digits to recover doubles to ~1e-12
/// relative, short enough to keep tables readable.
inline std::string fmt_g(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return buf;
}

inline std::string csv_join(const std::vector<std::string>& cells) {
  std::string line;
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i) line += ',';
    line += cells[i];
  }
  line += '\n';
  return line;
}

namespace detail {

inline json parse_json(std::istream& in, const char* what) {
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw std::invalid_argument(std::string(what) + ": bad JSON: " + e.what());
  }
}

inline json load_json_file(const std::string& path, const char* what) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument(std::string(what) + ": cannot open " + path);
  return parse_json(in, what);
}

inline int get_int(const json& j, const char* key, const char* what) {
  if (!j.contains(key) || !j[key].is_number_integer())
    throw std::invalid_argument(std::string(what) + ": missing integer '" + key + "'");
  return j[key].get<int>();
}

/// A coefficient entry is either a number (real) or a [re, im] pair.
inline cplx get_cplx(const json& j, const char* what) {
  if (j.is_number()) return cplx(j.get<double>(), 0.0);
  if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number())
    return cplx(j[0].get<double>(), j[1].get<double>());
  throw std::invalid_argument(std::string(what) + ": expected number or [re, im]");
}

}  // namespace detail

// ---------------------------------------------------------------------------
// polynomials

/// One term per line: d exponents then re and im; '#' starts a comment.
/// The variable count is inferred from the first term and enforced after.
inline MultiPoly parse_poly_text(std::istream& in) {
  std::vector<std::vector<double>> rows;
  std::string line;
  while (std::getline(in, line)) {
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::istringstream ls(line);
    std::vector<double> row;
    double v;
    while (ls >> v) row.push_back(v);
    if (!ls.eof()) throw std::invalid_argument("polynomial: non-numeric token in '" + line + "'");
    if (!row.empty()) rows.push_back(std::move(row));
  }
  if (rows.empty()) throw std::invalid_argument("polynomial: no terms found");
  const int d = static_cast<int>(rows.front().size()) - 2;
  if (d < 1) throw std::invalid_argument("polynomial: each line needs d exponents plus re im");
  MultiPoly p(d);
  for (const auto& row : rows) {
    if (static_cast<int>(row.size()) != d + 2)
      throw std::invalid_argument("polynomial: inconsistent column count");
    std::vector<int> e(static_cast<std::size_t>(d));
    for (int i = 0; i < d; ++i) {
      const double x = row[static_cast<std::size_t>(i)];
      e[static_cast<std::size_t>(i)] = static_cast<int>(x);
      if (x != e[static_cast<std::size_t>(i)] || x < 0)
        throw std::invalid_argument("polynomial: exponents must be nonnegative integers");
    }
    p.add_term(MultiIndex(std::move(e)),
               cplx(row[static_cast<std::size_t>(d)], row[static_cast<std::size_t>(d + 1)]));
  }
  return p;
}

inline MultiPoly poly_from_json(const json& j) {
  const int d = detail::get_int(j, "dim", "polynomial");
  if (d < 1) throw std::invalid_argument("polynomial: dim must be >= 1");
  if (!j.contains("terms") || !j["terms"].is_array())
    throw std::invalid_argument("polynomial: missing 'terms' array");
  MultiPoly p(d);
  for (const auto& t : j["terms"]) {
    if (!t.contains("alpha") || !t["alpha"].is_array() ||
        static_cast<int>(t["alpha"].size()) != d)
      throw std::invalid_argument("polynomial: term 'alpha' must list d exponents");
    std::vector<int> e;
    for (const auto& x : t["alpha"]) {
      if (!x.is_number_integer() || x.get<int>() < 0)
        throw std::invalid_argument("polynomial: exponents must be nonnegative integers");
      e.push_back(x.get<int>());
    }
    const double re = t.value("re", 0.0);
    const double im = t.value("im", 0.0);
    p.add_term(MultiIndex(std::move(e)), cplx(re, im));
  }
  return p;
}

/// Sniffs the format: a leading '{' means JSON, anything else the term-per-
/// line text form.
inline MultiPoly read_poly(std::istream& in) {
  int c;
  while ((c = in.peek()) != EOF && std::isspace(c)) in.get();
  if (c == '{') return poly_from_json(detail::parse_json(in, "polynomial"));
  return parse_poly_text(in);
}

inline MultiPoly read_poly_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("polynomial: cannot open " + path);
  return read_poly(in);
}

inline json poly_to_json(const MultiPoly& p) {
  json terms = json::array();
  for (const auto& [a, c] : p.terms()) {
    json t;
    t["alpha"] = a.e;
    t["re"] = c.real();
    t["im"] = c.imag();
    terms.push_back(std::move(t));
  }
  return json{{"dim", p.dim()}, {"terms", std::move(terms)}};
}

// ---------------------------------------------------------------------------
// matrices

inline Mat matrix_from_json(const json& j) {
  const int rows = detail::get_int(j, "rows", "matrix");
  const int cols = detail::get_int(j, "cols", "matrix");
  if (rows < 0 || cols < 0) throw std::invalid_argument("matrix: negative shape");
  auto grid = [&](const char* key, bool required) {
    std::vector<std::vector<double>> g;
    if (!j.contains(key)) {
      if (required) throw std::invalid_argument(std::string("matrix: missing '") + key + "'");
      g.assign(static_cast<std::size_t>(rows),
               std::vector<double>(static_cast<std::size_t>(cols), 0.0));
      return g;
    }
    const json& arr = j[key];
    if (!arr.is_array() || static_cast<int>(arr.size()) != rows)
      throw std::invalid_argument(std::string("matrix: '") + key + "' must have 'rows' rows");
    for (const auto& r : arr) {
      if (!r.is_array() || static_cast<int>(r.size()) != cols)
        throw std::invalid_argument(std::string("matrix: '") + key + "' row length != cols");
      std::vector<double> rv;
      for (const auto& x : r) {
        if (!x.is_number()) throw std::invalid_argument("matrix: non-numeric entry");
        rv.push_back(x.get<double>());
      }
      g.push_back(std::move(rv));
    }
    return g;
  };
  const auto re = grid("re", true);
  const auto im = grid("im", false);
  Mat M(rows, cols);
  for (int i = 0; i < rows; ++i)
    for (int k = 0; k < cols; ++k)
      M(i, k) = cplx(re[static_cast<std::size_t>(i)][static_cast<std::size_t>(k)],
                     im[static_cast<std::size_t>(i)][static_cast<std::size_t>(k)]);
  return M;
}

inline json matrix_to_json(const Mat& M) {
  json re = json::array(), im = json::array();
  for (int i = 0; i < M.rows(); ++i) {
    json rr = json::array(), ri = json::array();
    for (int k = 0; k < M.cols(); ++k) {
      rr.push_back(M(i, k).real());
      ri.push_back(M(i, k).imag());
    }
    re.push_back(std::move(rr));
    im.push_back(std::move(ri));
  }
  return json{{"rows", M.rows()}, {"cols", M.cols()},
              {"re", std::move(re)}, {"im", std::move(im)}};
}

inline Mat read_matrix_file(const std::string& path) {
  return matrix_from_json(detail::load_json_file(path, "matrix"));
}

// ---------------------------------------------------------------------------
// kernels

inline KernelProfile kernel_from_json(const json& j) {
  KernelProfile K;
  K.label = j.value("label", std::string());
  if (!j.contains("coeffs") || !j["coeffs"].is_array())
    throw std::invalid_argument("kernel: missing 'coeffs' array");
  for (const auto& e : j["coeffs"]) {
    if (!e.is_array() || e.size() != 2 || !e[0].is_number_integer() || !e[1].is_number())
      throw std::invalid_argument("kernel: coeffs entries must be [index, value]");
    K.set(e[0].get<int>(), e[1].get<double>());
  }
  return K;
}

inline json kernel_to_json(const KernelProfile& K) {
  json coeffs = json::array();
  for (const auto& [idx, c] : K.coeffs) coeffs.push_back(json::array({idx, c}));
  return json{{"label", K.label}, {"coeffs", std::move(coeffs)}};
}

inline KernelProfile read_kernel_file(const std::string& path) {
  return kernel_from_json(detail::load_json_file(path, "kernel"));
}

// ---------------------------------------------------------------------------
// shift-plus-Hankel tuples

/// {"symbols": [[c, ...], ...], "radii": [...], "trunc": t}; coefficient
/// entries are numbers or [re, im] pairs. Validation happens in foguel_tuple.
inline FoguelTuple foguel_from_json(const json& j) {
  if (!j.contains("symbols") || !j["symbols"].is_array())
    throw std::invalid_argument("foguel: missing 'symbols' array");
  std::vector<std::vector<cplx>> symbols;
  for (const auto& s : j["symbols"]) {
    if (!s.is_array()) throw std::invalid_argument("foguel: each symbol is a coefficient array");
    std::vector<cplx> coeffs;
    for (const auto& c : s) coeffs.push_back(detail::get_cplx(c, "foguel"));
    symbols.push_back(std::move(coeffs));
  }
  if (!j.contains("radii") || !j["radii"].is_array())
    throw std::invalid_argument("foguel: missing 'radii' array");
  std::vector<double> radii;
  for (const auto& r : j["radii"]) {
    if (!r.is_number()) throw std::invalid_argument("foguel: radii must be numbers");
    radii.push_back(r.get<double>());
  }
  const int trunc = detail::get_int(j, "trunc", "foguel");
  return foguel_tuple(symbols, radii, trunc);
}

inline FoguelTuple read_foguel_file(const std::string& path) {
  return foguel_from_json(detail::load_json_file(path, "foguel"));
}

}  // namespace vnlab
