#include "eqnf/problem.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

namespace eqnf {

namespace {

[[noreturn]] void fail(const std::string& where, const std::string& msg) {
  throw Error(ErrorCode::ParseError, where + ": " + msg);
}

const Json& field(const Json& obj, const std::string& key, const std::string& where) {
  if (!obj.is_object() || !obj.contains(key)) fail(where, "missing field '" + key + "'");
  return obj.at(key);
}

double number(const Json& j, const std::string& where) {
  if (!j.is_number()) fail(where, "expected a number");
  return j.get<double>();
}

int integer(const Json& j, const std::string& where, int lo) {
  if (!j.is_number_integer()) fail(where, "expected an integer");
  const long long v = j.get<long long>();
  if (v < lo || v > 1000000) fail(where, "integer out of range");
  return static_cast<int>(v);
}

Vector vector_from(const Json& j, const std::string& where, Eigen::Index size = -1) {
  if (!j.is_array()) fail(where, "expected an array of numbers");
  if (size >= 0 && static_cast<Eigen::Index>(j.size()) != size) {
    fail(where, "expected " + std::to_string(size) + " entries, found " + std::to_string(j.size()));
  }
  Vector v(j.size());
  for (std::size_t i = 0; i < j.size(); ++i) v(i) = number(j[i], where + "[" + std::to_string(i) + "]");
  return v;
}

Matrix matrix_from(const Json& j, const std::string& where, Eigen::Index n) {
  if (!j.is_array() || static_cast<Eigen::Index>(j.size()) != n) fail(where, "expected " + std::to_string(n) + " rows");
  Matrix m(n, n);
  for (Eigen::Index r = 0; r < n; ++r) m.row(r) = vector_from(j[r], where + "[" + std::to_string(r) + "]", n);
  return m;
}

double chop(double v, double cut) { return std::abs(v) <= cut ? 0.0 : v; }

GroupData group_from(const Json& j, int n, const std::string& where) {
  if (j.is_null()) return trivial_group(n);
  const Json& gens = field(j, "generators", where);
  const Json& chars = field(j, "characters", where);
  if (!gens.is_array() || !chars.is_array() || gens.size() != chars.size()) {
    fail(where, "generators and characters must be arrays of equal length");
  }
  std::vector<Matrix> g;
  Character c;
  for (std::size_t i = 0; i < gens.size(); ++i) {
    const std::string w = where + ".generators[" + std::to_string(i) + "]";
    g.push_back(matrix_from(gens[i], w, n));
    c.push_back(number(chars[i], where + ".characters[" + std::to_string(i) + "]"));
  }
  if (g.empty()) return trivial_group(n);
  try {
    return generate_group(g, c, 1000);
  } catch (const Error& e) {
    fail(where, e.what());
  }
}

int line_of(const std::string& text, std::size_t byte) {
  int line = 1;
  for (std::size_t i = 0; i < std::min(byte, text.size()); ++i)
    if (text[i] == '\n') ++line;
  return line;
}

MapFamily family_from(const Json& j, int n, int m, std::vector<Vector>& samples, const std::string& where) {
  if (j.contains("samples")) {
    const Json& arr = j.at("samples");
    if (!arr.is_array() || arr.empty()) fail(where + ".samples", "expected a non-empty array");
    std::vector<Vector> ls;
    std::vector<TruncatedMapd> maps;
    for (std::size_t i = 0; i < arr.size(); ++i) {
      const std::string w = where + ".samples[" + std::to_string(i) + "]";
      ls.push_back(vector_from(field(arr[i], "lambda", w), w + ".lambda", m));
      maps.push_back(map_from_json(arr[i], n, w));
    }
    for (std::size_t i = 1; i < maps.size(); ++i)
      if (maps[i].order() != maps[0].order()) fail(where + ".samples", "all samples need the same order");
    if (samples.empty()) samples = ls;
    return sampled_family(ls, maps);
  }
  if (j.contains("linear")) {
    const Matrix a = matrix_from(j.at("linear"), where + ".linear", n);
    std::vector<TruncatedMapd> df(m, TruncatedMapd(n, 1));
    return polynomial_family(TruncatedMapd::linear(a, 1), df);
  }
  const TruncatedMapd f0 = map_from_json(j, n, where);
  std::vector<TruncatedMapd> df;
  if (j.contains("parameter_terms")) {
    const Json& pt = j.at("parameter_terms");
    if (!pt.is_array() || static_cast<int>(pt.size()) != m) {
      fail(where + ".parameter_terms", "expected one term list per parameter");
    }
    for (std::size_t i = 0; i < pt.size(); ++i) {
      Json wrapped = Json::object();
      wrapped["order"] = f0.order();
      wrapped["terms"] = pt[i];
      df.push_back(map_from_json(wrapped, n, where + ".parameter_terms[" + std::to_string(i) + "]"));
    }
  } else {
    df.assign(m, TruncatedMapd(n, f0.order()));
  }
  return polynomial_family(f0, df);
}

}  // namespace

Json matrix_to_json(const Matrix& m, double cutoff) {
  const double cut = cutoff * std::max(1.0, max_abs(m));
  Json out = Json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    Json row = Json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(chop(m(r, c), cut));
    out.push_back(row);
  }
  return out;
}

Json vector_to_json(const Vector& v, double cutoff) {
  const double cut = cutoff * std::max(1.0, v.size() ? v.cwiseAbs().maxCoeff() : 0.0);
  Json out = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(chop(v(i), cut));
  return out;
}

Json map_to_json(const TruncatedMapd& f, double cutoff) {
  Json out = Json::object();
  out["order"] = f.order();
  Json terms = Json::array();
  const double cut = cutoff * std::max(1.0, max_coeff(f));
  const MonomialSpace& s = f.space();
  for (int i = 0; i < s.size(); ++i) {
    for (int c = 0; c < f.dim(); ++c) {
      const double v = chop(f.coeffs()(c, i), cut);
      if (v == 0.0) continue;
      Json t = Json::object();
      t["component"] = c;
      t["exponent"] = s.exponent(i);
      t["coefficient"] = v;
      terms.push_back(t);
    }
  }
  out["terms"] = terms;
  return out;
}

TruncatedMapd map_from_json(const Json& j, int n, const std::string& where) {
  const int order = integer(field(j, "order", where), where + ".order", 1);
  const Json& terms = field(j, "terms", where);
  if (!terms.is_array()) fail(where + ".terms", "expected an array");
  TruncatedMapd f(n, order);
  for (std::size_t i = 0; i < terms.size(); ++i) {
    const std::string w = where + ".terms[" + std::to_string(i) + "]";
    const int comp = integer(field(terms[i], "component", w), w + ".component", 0);
    if (comp >= n) fail(w + ".component", "component out of range");
    const Json& e = field(terms[i], "exponent", w);
    if (!e.is_array() || static_cast<int>(e.size()) != n) fail(w + ".exponent", "expected " + std::to_string(n) + " entries");
    MultiIndex alpha;
    int deg = 0;
    for (std::size_t k = 0; k < e.size(); ++k) {
      alpha.push_back(integer(e[k], w + ".exponent[" + std::to_string(k) + "]", 0));
      deg += alpha.back();
    }
    if (deg == 0) fail(w + ".exponent", "constant terms are not allowed (the fixed point is the origin)");
    if (deg > order) fail(w + ".exponent", "degree exceeds the declared order");
    f.coeff(comp, alpha) += number(field(terms[i], "coefficient", w), w + ".coefficient");
  }
  return f;
}

std::vector<Vector> parse_lambda_grid(const std::string& spec, int m) {
  std::vector<Vector> out;
  auto num = [&](const std::string& s) {
    std::size_t pos = 0;
    double v = 0.0;
    try {
      v = std::stod(s, &pos);
    } catch (const std::exception&) {
      fail("--lambda-grid", "cannot read number '" + s + "'");
    }
    if (pos != s.size()) fail("--lambda-grid", "cannot read number '" + s + "'");
    return v;
  };
  auto split = [](const std::string& s, char d) {
    std::vector<std::string> parts;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, d)) parts.push_back(item);
    return parts;
  };
  if (spec.find(':') != std::string::npos) {
    const auto p = split(spec, ':');
    if (p.size() != 3 || m != 1) fail("--lambda-grid", "range form lo:hi:count needs a scalar parameter");
    const double lo = num(p[0]), hi = num(p[1]);
    const int count = static_cast<int>(num(p[2]));
    if (count < 1) fail("--lambda-grid", "count must be positive");
    for (int i = 0; i < count; ++i) {
      out.push_back(Vector::Constant(1, count == 1 ? lo : lo + (hi - lo) * i / (count - 1)));
    }
    return out;
  }
  for (const auto& item : split(spec, ';')) {
    const auto comps = split(item, ',');
    if (static_cast<int>(comps.size()) != m) {
      fail("--lambda-grid", "each value needs " + std::to_string(m) + " components");
    }
    Vector v(m);
    for (int i = 0; i < m; ++i) v(i) = num(comps[i]);
    out.push_back(v);
  }
  if (out.empty()) fail("--lambda-grid", "empty grid");
  return out;
}

Problem builtin_problem(const std::string& name) {
  if (name != "paper-example") throw Error(ErrorCode::ParseError, "unknown builtin '" + name + "'");
  Problem p;
  p.name = name;
  p.builtin = name;
  p.n = 2;
  p.m = 1;
  p.family = planar_example_family(6);
  p.samples = {Vector::Zero(1)};
  Matrix r(2, 2);
  r << 0, 1, 1, 0;
  p.group = generate_group({r}, {-1.0});
  p.period = 1;
  p.order = 2;
  p.lambda_grid = p.samples;
  return p;
}

Problem parse_problem(const std::string& text, const std::string& origin) {
  Json j;
  try {
    j = Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw Error(ErrorCode::ParseError,
                origin + ":" + std::to_string(line_of(text, e.byte)) + ": malformed JSON (" + e.what() + ")");
  }
  if (!j.is_object()) fail(origin, "top level must be an object");

  const Json& map = field(j, "map", origin);
  Problem p;
  if (map.is_object() && map.contains("builtin")) {
    if (!map.at("builtin").is_string()) fail(origin + ".map.builtin", "expected a string");
    p = builtin_problem(map.at("builtin").get<std::string>());
    if (map.contains("truncation")) {
      p.family = planar_example_family(integer(map.at("truncation"), origin + ".map.truncation", 1));
    }
  } else {
    p.n = integer(field(j, "dimension", origin), origin + ".dimension", 1);
    p.m = j.contains("parameters") ? integer(j.at("parameters"), origin + ".parameters", 1) : 1;
    p.family = family_from(map, p.n, p.m, p.samples, origin + ".map");
    p.group = group_from(j.contains("group") ? j.at("group") : Json(), p.n, origin + ".group");
  }
  if (j.contains("name")) p.name = j.at("name").is_string() ? j.at("name").get<std::string>() : "";
  if (j.contains("dimension") && integer(j.at("dimension"), origin + ".dimension", 1) != p.n) {
    fail(origin + ".dimension", "does not match the map");
  }
  if (j.contains("sample_lambdas")) {
    p.samples.clear();
    const Json& s = j.at("sample_lambdas");
    if (!s.is_array() || s.empty()) fail(origin + ".sample_lambdas", "expected a non-empty array");
    for (std::size_t i = 0; i < s.size(); ++i)
      p.samples.push_back(vector_from(s[i], origin + ".sample_lambdas[" + std::to_string(i) + "]", p.m));
  }
  if (p.samples.empty()) p.samples = {Vector::Zero(p.m)};
  if (j.contains("period")) p.period = integer(j.at("period"), origin + ".period", 1);
  if (j.contains("order")) p.order = integer(j.at("order"), origin + ".order", 1);
  if (j.contains("form")) {
    const Json& f = j.at("form");
    if (!f.is_string() || (f != "nilpotent" && f != "semisimple")) {
      fail(origin + ".form", "expected \"nilpotent\" or \"semisimple\"");
    }
    p.form = f.get<std::string>();
  }
  if (j.contains("tolerances")) {
    const Json& t = j.at("tolerances");
    const std::string w = origin + ".tolerances";
    if (t.contains("residual")) p.tol.residual = number(t.at("residual"), w + ".residual");
    if (t.contains("normal_form")) p.tol.normal_form = number(t.at("normal_form"), w + ".normal_form");
    if (t.contains("invariant")) p.tol.invariant = number(t.at("invariant"), w + ".invariant");
    if (t.contains("rank")) p.tol.rank = number(t.at("rank"), w + ".rank");
  }
  if (j.contains("search")) {
    const Json& s = j.at("search");
    const std::string w = origin + ".search";
    if (s.contains("radius")) p.radius = number(s.at("radius"), w + ".radius");
    if (s.contains("box")) p.box = number(s.at("box"), w + ".box");
    if (s.contains("grid")) p.grid = integer(s.at("grid"), w + ".grid", 1);
    if (s.contains("lambda_grid")) {
      p.lambda_grid.clear();
      const Json& g = s.at("lambda_grid");
      if (!g.is_array() || g.empty()) fail(w + ".lambda_grid", "expected a non-empty array");
      for (std::size_t i = 0; i < g.size(); ++i)
        p.lambda_grid.push_back(vector_from(g[i], w + ".lambda_grid[" + std::to_string(i) + "]", p.m));
    }
  }
  if (p.lambda_grid.empty()) p.lambda_grid = p.samples;
  try {
    (void)p.a0();
  } catch (const Error& e) {
    fail(origin + ".sample_lambdas", e.what());
  }
  return p;
}

Problem load_problem(const std::string& path) {
  const std::string prefix = "builtin:";
  if (path.rfind(prefix, 0) == 0) return builtin_problem(path.substr(prefix.size()));
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::ParseError, path + ": cannot open file");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_problem(ss.str(), path);
}

}  // namespace eqnf
