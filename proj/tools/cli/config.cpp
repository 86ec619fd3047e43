#include "config.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "effheis/error.hpp"
#include "effheis/fermion.hpp"

namespace effheis::cli {

using nlohmann::json;

namespace {

double number(const json& v, const std::string& where) {
  if (!v.is_number()) throw ConfigError(where + " must be a number");
  const double d = v.get<double>();
  if (!std::isfinite(d)) throw ConfigError(where + " must be finite");
  return d;
}

std::size_t count(const json& v, const std::string& where, std::size_t min) {
  if (!v.is_number_integer() && !v.is_number_unsigned()) throw ConfigError(where + " must be an integer");
  const auto i = v.get<long long>();
  if (i < static_cast<long long>(min)) throw ConfigError(where + " must be >= " + std::to_string(min));
  return static_cast<std::size_t>(i);
}

std::vector<double> numbers(const json& v, const std::string& where) {
  if (!v.is_array() || v.empty()) throw ConfigError(where + " must be a non-empty array of numbers");
  std::vector<double> out;
  for (std::size_t i = 0; i < v.size(); ++i) out.push_back(number(v[i], where + "[" + std::to_string(i) + "]"));
  return out;
}

// {"matrix": ...} or any sum of {"frequencies": [...]} and {"hopping": [...]}
ComplexMatrix fermion_part(const json& spec, std::size_t n, const std::string& where) {
  if (!spec.is_object()) throw ConfigError(where + " must be an object");
  for (auto it = spec.begin(); it != spec.end(); ++it) {
    if (it.key() != "matrix" && it.key() != "frequencies" && it.key() != "hopping") {
      throw ConfigError(where + ": unknown key '" + it.key() + "'");
    }
  }
  if (spec.contains("matrix")) {
    if (spec.size() != 1) throw ConfigError(where + ": 'matrix' cannot be combined with builders");
    return parse_matrix(spec["matrix"], 2 * n, where + ".matrix");
  }
  if (spec.empty()) throw ConfigError(where + " needs 'matrix', 'frequencies' or 'hopping'");
  ComplexMatrix h(2 * n);
  if (spec.contains("frequencies")) {
    const auto w = numbers(spec["frequencies"], where + ".frequencies");
    if (w.size() != n) throw ConfigError(where + ".frequencies needs " + std::to_string(n) + " entries");
    h += diagonal_modes(w).matrix();
  }
  if (spec.contains("hopping")) {
    const json& terms = spec["hopping"];
    if (!terms.is_array()) throw ConfigError(where + ".hopping must be an array");
    for (std::size_t i = 0; i < terms.size(); ++i) {
      const std::string at = where + ".hopping[" + std::to_string(i) + "]";
      const json& term = terms[i];
      if (!term.is_object() || !term.contains("modes") || !term["modes"].is_array() || term["modes"].size() != 2) {
        throw ConfigError(at + " needs {\"modes\": [j, k], \"g\": value}");
      }
      const double g = term.contains("g") ? number(term["g"], at + ".g") : 1.0;
      const std::size_t j = count(term["modes"][0], at + ".modes[0]", 0);
      const std::size_t k = count(term["modes"][1], at + ".modes[1]", 0);
      try {
        h += hopping(n, j, k, g).matrix();
      } catch (const Error& e) {
        throw ConfigError(at + ": " + e.what());
      }
    }
  }
  return h;
}

BosonSpec boson_part(const json& spec) {
  if (!spec.is_object()) throw ConfigError("boson must be an object");
  BosonSpec b;
  if (!spec.contains("H0")) throw ConfigError("boson.H0 is required");
  const json& h0 = spec["H0"];
  if (!h0.is_object()) throw ConfigError("boson.H0 must be an object");
  if (h0.contains("frequencies")) {
    const auto w = numbers(h0["frequencies"], "boson.H0.frequencies");
    b.n = w.size();
    if (spec.contains("n") && count(spec["n"], "boson.n", 1) != b.n) {
      throw ConfigError("boson.n disagrees with boson.H0.frequencies");
    }
    b.h0 = ComplexMatrix(2 * b.n);
    for (std::size_t j = 0; j < b.n; ++j) {
      b.h0(j, b.n + j) = w[j];
      b.h0(b.n + j, j) = w[j];
    }
  } else if (h0.contains("matrix")) {
    if (!spec.contains("n")) throw ConfigError("boson.n is required with a raw boson.H0.matrix");
    b.n = count(spec["n"], "boson.n", 1);
    b.h0 = parse_matrix(h0["matrix"], 2 * b.n, "boson.H0.matrix");
  } else {
    throw ConfigError("boson.H0 needs 'frequencies' or 'matrix'");
  }
  if (spec.contains("X")) b.x = parse_matrix(spec["X"], 2 * b.n, "boson.X");
  if (spec.contains("T")) {
    b.horizons = numbers(spec["T"], "boson.T");
    for (double t : b.horizons)
      if (!(t > 0.0)) throw ConfigError("boson.T entries must be positive");
  }
  return b;
}

}  // namespace

ComplexMatrix parse_matrix(const json& rows, std::size_t dim, const std::string& where) {
  if (!rows.is_array() || rows.size() != dim) {
    throw ConfigError(where + " must be an array of " + std::to_string(dim) + " rows");
  }
  ComplexMatrix m(dim);
  for (std::size_t r = 0; r < dim; ++r) {
    const json& row = rows[r];
    if (!row.is_array() || row.size() != dim) {
      throw ConfigError(where + "[" + std::to_string(r) + "] must hold " + std::to_string(dim) + " entries");
    }
    for (std::size_t c = 0; c < dim; ++c) {
      const json& z = row[c];
      const std::string at = where + "[" + std::to_string(r) + "][" + std::to_string(c) + "]";
      if (!z.is_array() || z.size() != 2) throw ConfigError(at + " must be a [re, im] pair");
      m(r, c) = {number(z[0], at), number(z[1], at)};
    }
  }
  return m;
}

json matrix_to_json(const ComplexMatrix& m) {
  json rows = json::array();
  for (std::size_t r = 0; r < m.dim(); ++r) {
    json row = json::array();
    for (std::size_t c = 0; c < m.dim(); ++c) row.push_back({m(r, c).real(), m(r, c).imag()});
    rows.push_back(std::move(row));
  }
  return rows;
}

std::string fnv1a_hex(const std::string& bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

ModelConfig parse_config(const json& doc) {
  if (!doc.is_object()) throw ConfigError("configuration must be a JSON object");
  static const char* known[] = {"n", "H0", "HI", "lambda", "m", "grid", "tolerances", "seed", "lambdas", "boson"};
  for (auto it = doc.begin(); it != doc.end(); ++it) {
    bool ok = false;
    for (const char* k : known) ok = ok || it.key() == k;
    if (!ok) throw ConfigError("unknown top-level key '" + it.key() + "'");
  }

  ModelConfig cfg;
  const bool has_fermion = doc.contains("n") || doc.contains("H0") || doc.contains("HI");
  if (has_fermion) {
    FermionSpec f;
    if (!doc.contains("n")) throw ConfigError("n is required");
    f.n = count(doc["n"], "n", 1);
    if (!doc.contains("H0")) throw ConfigError("H0 is required");
    f.h0 = fermion_part(doc["H0"], f.n, "H0");
    f.hI = doc.contains("HI") ? fermion_part(doc["HI"], f.n, "HI") : ComplexMatrix(2 * f.n);
    if (doc.contains("lambda")) f.lambda = number(doc["lambda"], "lambda");
    if (doc.contains("m")) f.m = count(doc["m"], "m", 1);
    cfg.fermion = std::move(f);
  }
  if (doc.contains("boson")) cfg.boson = boson_part(doc["boson"]);
  if (!cfg.fermion && !cfg.boson) throw ConfigError("configuration describes neither a fermion nor a boson model");

  if (doc.contains("grid")) {
    const json& g = doc["grid"];
    if (!g.is_object()) throw ConfigError("grid must be an object");
    if (g.contains("t_end")) cfg.grid.t_end = number(g["t_end"], "grid.t_end");
    if (g.contains("steps")) cfg.grid.steps = count(g["steps"], "grid.steps", 1);
    if (!(cfg.grid.t_end > 0.0)) throw ConfigError("grid.t_end must be positive");
  }
  if (doc.contains("tolerances")) {
    const json& t = doc["tolerances"];
    if (!t.is_object()) throw ConfigError("tolerances must be an object");
    if (t.contains("resonance")) cfg.tolerances.resonance = number(t["resonance"], "tolerances.resonance");
    if (t.contains("report")) cfg.tolerances.report = number(t["report"], "tolerances.report");
    if (cfg.tolerances.resonance < 0.0 || (cfg.tolerances.report && !(*cfg.tolerances.report > 0.0))) {
      throw ConfigError("tolerances must be positive");
    }
  }
  if (doc.contains("seed")) cfg.seed = count(doc["seed"], "seed", 0);
  if (doc.contains("lambdas")) cfg.lambdas = numbers(doc["lambdas"], "lambdas");
  cfg.digest = fnv1a_hex(doc.dump());
  return cfg;
}

ModelConfig load_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  json doc;
  try {
    doc = json::parse(buf.str());
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("malformed JSON: ") + e.what());
  }
  return parse_config(doc);
}

}  // namespace effheis::cli
