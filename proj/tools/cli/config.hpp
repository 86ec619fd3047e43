#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "effheis/matrix.hpp"

namespace effheis::cli {

/// Malformed or unusable configuration (exit code 2).
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Tolerances {
  double resonance = 1e-9;
  std::optional<double> report;  ///< caps every verification threshold when set
};

struct GridSpec {
  double t_end = 2.0;
  std::size_t steps = 200;
};

struct FermionSpec {
  std::size_t n = 0;
  ComplexMatrix h0;
  ComplexMatrix hI;
  double lambda = 0.0;
  std::size_t m = 1;
};

struct BosonSpec {
  std::size_t n = 0;
  ComplexMatrix h0;
  std::optional<ComplexMatrix> x;
  std::vector<double> horizons{1.0, 5.0, 10.0, 20.0};
};

struct ModelConfig {
  std::optional<FermionSpec> fermion;
  std::optional<BosonSpec> boson;
  GridSpec grid;
  Tolerances tolerances;
  std::uint64_t seed = 0;
  std::vector<double> lambdas{0.2, 0.1, 0.05};
  std::string digest;  ///< FNV-1a of the canonical JSON dump
};

/// Raw coefficient matrices are not validated here; builders produce valid ones.
ModelConfig parse_config(const nlohmann::json& doc);
ModelConfig load_config(const std::string& path);

ComplexMatrix parse_matrix(const nlohmann::json& rows, std::size_t dim, const std::string& where);
nlohmann::json matrix_to_json(const ComplexMatrix& m);

std::string fnv1a_hex(const std::string& bytes);

}  // namespace effheis::cli
