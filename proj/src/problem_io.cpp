#include "mep/problem_io.hpp"

#include <fstream>
#include <sstream>

namespace mep {

using nlohmann::json;

namespace {

const json& field(const json& j, const char* key, const std::string& where) {
  if (!j.is_object()) throw ParseError(where + ": expected an object");
  auto it = j.find(key);
  if (it == j.end())
    throw ParseError((where.empty() ? std::string(key) : where + "." + key) +
                     ": missing field");
  return *it;
}

std::string path_of(const std::string& where, const std::string& key) {
  return where.empty() ? key : where + "." + key;
}

long long get_int(const json& j, const char* key, const std::string& where) {
  const json& v = field(j, key, where);
  if (!v.is_number_integer())
    throw ParseError(path_of(where, key) + ": expected an integer");
  return v.get<long long>();
}

}  // namespace

json matrix_to_json(const ComplexMatrix& m) {
  json data = json::array();
  for (Index i = 0; i < m.rows(); ++i)
    for (Index j = 0; j < m.cols(); ++j)
      data.push_back({m(i, j).real(), m(i, j).imag()});
  return {{"rows", m.rows()}, {"cols", m.cols()}, {"data", data}};
}

ComplexMatrix matrix_from_json(const json& j, const std::string& where) {
  const long long rows = get_int(j, "rows", where);
  const long long cols = get_int(j, "cols", where);
  if (rows < 0 || cols < 0) throw ParseError(where + ": negative dimension");
  const json& data = field(j, "data", where);
  const std::string dpath = path_of(where, "data");
  if (!data.is_array()) throw ParseError(dpath + ": expected an array");
  if (static_cast<long long>(data.size()) != rows * cols) {
    std::ostringstream msg;
    msg << dpath << ": has " << data.size() << " entries, expected " << rows
        << "*" << cols;
    throw ValidationError(msg.str());
  }
  ComplexMatrix m(rows, cols);
  for (long long k = 0; k < rows * cols; ++k) {
    const json& e = data[k];
    const std::string epath = dpath + "[" + std::to_string(k) + "]";
    if (e.is_number()) {
      m(k / cols, k % cols) = cplx(e.get<double>(), 0.0);
      continue;
    }
    if (!e.is_array() || e.size() != 2 || !e[0].is_number() ||
        !e[1].is_number())
      throw ParseError(epath + ": expected [re, im]");
    m(k / cols, k % cols) = cplx(e[0].get<double>(), e[1].get<double>());
  }
  return m;
}

json problem_to_json(const Problem& p) {
  if (const auto* lin = std::get_if<LinearMEP>(&p)) {
    json eqs = json::array();
    for (const auto& eq : lin->equations()) {
      json mats = json::array();
      for (const auto& a : eq.coefficients) mats.push_back(matrix_to_json(a));
      eqs.push_back({{"matrices", mats}});
    }
    return {{"kind", "linear"},
            {"n_params", lin->n_params()},
            {"param_names", lin->param_names()},
            {"equations", eqs}};
  }
  const auto& poly = std::get<PolynomialMEP2>(p);
  json terms = json::array();
  for (const auto& [m, a] : poly.terms())
    terms.push_back({{"p", m.p}, {"q", m.q}, {"matrix", matrix_to_json(a)}});
  return {{"kind", "poly2"},
          {"size", poly.size()},
          {"param_names", {poly.param_names()[0], poly.param_names()[1]}},
          {"airspeed_param", poly.airspeed_param()},
          {"terms", terms}};
}

Problem problem_from_json(const json& j) {
  const json& kind = field(j, "kind", "");
  if (!kind.is_string()) throw ParseError("kind: expected a string");
  const std::string k = kind.get<std::string>();

  std::vector<std::string> names;
  if (auto it = j.find("param_names"); it != j.end()) {
    if (!it->is_array()) throw ParseError("param_names: expected an array");
    for (std::size_t i = 0; i < it->size(); ++i) {
      if (!(*it)[i].is_string())
        throw ParseError("param_names[" + std::to_string(i) +
                         "]: expected a string");
      names.push_back((*it)[i].get<std::string>());
    }
  }

  if (k == "linear") {
    const long long n = get_int(j, "n_params", "");
    if (n < 1) throw ValidationError("n_params: must be at least 1");
    const json& eqs = field(j, "equations", "");
    if (!eqs.is_array()) throw ParseError("equations: expected an array");
    if (static_cast<long long>(eqs.size()) != n)
      throw ValidationError("equations: expected " + std::to_string(n) +
                            " entries, found " + std::to_string(eqs.size()));
    std::vector<LinearEquation> equations;
    for (std::size_t i = 0; i < eqs.size(); ++i) {
      const std::string where = "equations[" + std::to_string(i) + "]";
      const json& mats = field(eqs[i], "matrices", where);
      if (!mats.is_array())
        throw ParseError(where + ".matrices: expected an array");
      LinearEquation eq;
      for (std::size_t m = 0; m < mats.size(); ++m)
        eq.coefficients.push_back(matrix_from_json(
            mats[m], where + ".matrices[" + std::to_string(m) + "]"));
      equations.push_back(std::move(eq));
    }
    return LinearMEP(std::move(equations), std::move(names));
  }

  if (k == "poly2") {
    const long long size = get_int(j, "size", "");
    const json& terms = field(j, "terms", "");
    if (!terms.is_array()) throw ParseError("terms: expected an array");
    std::map<Monomial, ComplexMatrix> map;
    for (std::size_t t = 0; t < terms.size(); ++t) {
      const std::string where = "terms[" + std::to_string(t) + "]";
      Monomial m{static_cast<int>(get_int(terms[t], "p", where)),
                 static_cast<int>(get_int(terms[t], "q", where))};
      ComplexMatrix a =
          matrix_from_json(field(terms[t], "matrix", where), where + ".matrix");
      if (!map.emplace(m, std::move(a)).second)
        throw ValidationError(where + ": duplicate term (" +
                              std::to_string(m.p) + "," + std::to_string(m.q) +
                              ")");
    }
    std::array<std::string, 2> pn{"p1", "p2"};
    if (!names.empty()) {
      if (names.size() != 2)
        throw ValidationError("param_names: poly2 needs exactly two names");
      pn = {names[0], names[1]};
    }
    int airspeed = 0;
    if (j.contains("airspeed_param"))
      airspeed = static_cast<int>(get_int(j, "airspeed_param", ""));
    return PolynomialMEP2(size, std::move(map), pn, airspeed);
  }

  throw ParseError("kind: unknown problem kind '" + k + "'");
}

std::string dump_problem(const Problem& p) {
  return problem_to_json(p).dump(2);
}

Problem parse_problem(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("invalid JSON: ") + e.what());
  }
  return problem_from_json(j);
}

Problem load_problem(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  try {
    return parse_problem(buf.str());
  } catch (const ParseError& e) {
    throw ParseError(path.string() + ": " + e.what());
  } catch (const ValidationError& e) {
    throw ValidationError(path.string() + ": " + e.what());
  }
}

void save_problem(const Problem& p, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw ParseError("cannot write " + path.string());
  out << dump_problem(p) << '\n';
  if (!out) throw ParseError("write failed: " + path.string());
}

}  // namespace mep
