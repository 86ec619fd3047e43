#include "app.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <locale>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>

#include "checks.hpp"
#include "effheis/boson.hpp"
#include "effheis/dynamics.hpp"
#include "effheis/error.hpp"
#include "effheis/fermion.hpp"
#include "effheis/fock.hpp"
#include "effheis/linalg.hpp"
#include "effheis/perturbation.hpp"
#include "effheis/projector.hpp"

namespace effheis::cli {

using nlohmann::json;

namespace {

constexpr std::size_t kVerifyLawTrials = 20;
constexpr double kSingleParticleThreshold = 1e-10;
constexpr double kLawThreshold = 1e-10;
constexpr double kMomentThreshold = 1e-8;
constexpr double kStationarityThreshold = 1e-10;

int exit_code_for(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::NotHermitian:
    case ErrorKind::NotAntisymmetric:
    case ErrorKind::NotTildeAntisymmetric:
    case ErrorKind::NotSymmetric:
    case ErrorKind::NotTildeSymmetric:
      return kExitValidation;
    case ErrorKind::DimensionOverflow:
    case ErrorKind::DimensionMismatch:
    case ErrorKind::IndexOutOfRange:
    case ErrorKind::UnsupportedOrder:
    case ErrorKind::TooManyModes:
    case ErrorKind::InvalidArgument:
      return kExitConfig;
    default:
      return kExitFailure;
  }
}

std::string label(double v) {
  std::ostringstream os;
  os.imbue(std::locale::classic());
  os << v;
  return os.str();
}

json complex_list(const std::vector<Complex>& zs) {
  json out = json::array();
  for (const auto& z : zs) out.push_back({z.real(), z.imag()});
  return out;
}

const FermionSpec& need_fermion(const ModelConfig& cfg, const std::string& command) {
  if (!cfg.fermion) throw ConfigError(command + " needs a fermionic model (n, H0, HI)");
  return *cfg.fermion;
}

SplitHamiltonian build_split(const FermionSpec& f) {
  return {validate_fermion(f.h0, f.n), validate_fermion(f.hI, f.n), f.lambda};
}

void reject_order(const Options& opts) {
  if (opts.order) throw ConfigError("--order is not used by " + opts.command);
}

double threshold(double fallback, const ModelConfig& cfg) {
  return cfg.tolerances.report ? std::min(fallback, *cfg.tolerances.report) : fallback;
}

void write_csv(const std::string& path, const PropagatorSeries& series) {
  std::ostringstream os;
  os.imbue(std::locale::classic());
  os.precision(17);
  const std::size_t dim = series.values.front().dim();
  os << 't';
  for (std::size_t r = 0; r < dim; ++r)
    for (std::size_t c = 0; c < dim; ++c) os << ",re_" << r << '_' << c << ",im_" << r << '_' << c;
  os << '\n';
  for (std::size_t i = 0; i < series.values.size(); ++i) {
    os << series.grid.at(i);
    const ComplexMatrix& v = series.values[i];
    for (std::size_t r = 0; r < dim; ++r)
      for (std::size_t c = 0; c < dim; ++c) os << ',' << v(r, c).real() << ',' << v(r, c).imag();
    os << '\n';
  }
  std::ofstream file(path, std::ios::binary);
  if (!file) throw ConfigError("cannot write CSV file '" + path + "'");
  file << os.str();
}

CommandResult cmd_validate(const Options& opts, const ModelConfig& cfg, std::size_t dim_cap) {
  reject_order(opts);
  CommandResult result;
  if (cfg.fermion) {
    const FermionSpec& f = *cfg.fermion;
    const SplitHamiltonian split = build_split(f);
    const MomentModel model = make_moment_model(split, f.m, cfg.tolerances.resonance, dim_cap);
    result.payload["fermion"] = {
        {"n", f.n},
        {"m", f.m},
        {"lambda", f.lambda},
        {"moment_dim", model.h0.dim()},
        {"cluster_count", model.free_partition->cluster_count()},
        {"max_cluster_width", model.free_partition->max_cluster_width()},
        {"valid", true},
    };
  }
  if (cfg.boson) {
    const BosonSpec& b = *cfg.boson;
    validate_boson(b.h0, b.n);
    if (b.x && b.x->dim() != 2 * b.n) throw ConfigError("boson.X has the wrong dimension");
    result.payload["boson"] = {{"n", b.n}, {"valid", true}};
  }
  return result;
}

CommandResult cmd_evolve(const Options& opts, const ModelConfig& cfg, std::size_t dim_cap) {
  const FermionSpec& f = need_fermion(cfg, "evolve");
  const std::string order = opts.order.value_or("exact");
  if (order != "exact" && order != "1" && order != "2") throw ConfigError("--order must be exact, 1 or 2 for evolve");
  const MomentModel model = make_moment_model(build_split(f), f.m, cfg.tolerances.resonance, dim_cap);
  const TimeGrid grid(cfg.grid.t_end, cfg.grid.steps);
  const PropagatorSeries exact = exact_series(model, grid, opts.jobs);

  CommandResult result;
  json& p = result.payload;
  p["order"] = order;
  p["m"] = f.m;
  p["lambda"] = f.lambda;
  p["moment_dim"] = model.h0.dim();
  p["grid"] = {{"t_end", grid.t_end()}, {"steps", grid.steps()}};
  p["cluster_count"] = model.free_partition->cluster_count();
  p["max_cluster_width"] = model.free_partition->max_cluster_width();

  const PropagatorSeries* emitted = &exact;
  PropagatorSeries local = exact;
  if (order == "exact") {
    SeriesComparison cmp;
    for (std::size_t i = 0; i < grid.size(); ++i) {
      cmp.errors.push_back(max_abs_diff(exact.values[i], matrix_exponential(grid.at(i) * model.h0)));
      cmp.sup_error = std::max(cmp.sup_error, cmp.errors.back());
    }
    p["free_evolution_sup_error"] = cmp.sup_error;
    p["free_evolution_errors"] = cmp.errors;
  } else {
    local = integrate_time_local(kappa12(model), order == "1" ? 1 : 2, grid);
    const SeriesComparison cmp = compare(exact, local);
    p["sup_error_vs_exact"] = cmp.sup_error;
    p["errors_vs_exact"] = cmp.errors;
    emitted = &local;
  }
  p["series"] = std::string(to_string(emitted->label));
  p["final"] = matrix_to_json(emitted->values.back());

  std::optional<std::string> csv = opts.csv_path;
  if (!csv && opts.out_path) csv = std::filesystem::path(*opts.out_path).replace_extension(".csv").string();
  if (csv) {
    write_csv(*csv, *emitted);
    p["csv"] = std::filesystem::path(*csv).filename().string();
  }
  return result;
}

CommandResult cmd_verify(const Options& opts, const ModelConfig& cfg, std::size_t dim_cap) {
  reject_order(opts);
  const FermionSpec& f = need_fermion(cfg, "verify");
  if (f.n > kMaxSuperoperatorModes) {
    throw Error(ErrorKind::TooManyModes, "verify supports n <= " + std::to_string(kMaxSuperoperatorModes) +
                                             ", got n = " + std::to_string(f.n));
  }
  const SplitHamiltonian split = build_split(f);
  const auto rep = jordan_wigner(f.n);
  const double tol = cfg.tolerances.resonance;
  std::mt19937_64 rng(opts.seed.value_or(cfg.seed));

  CommandResult result;
  json checks = json::array();
  bool all_pass = true;
  auto record = [&](const std::string& name, double residual, double limit) {
    const bool pass = residual < limit;
    all_pass = all_pass && pass;
    checks.push_back({{"name", name}, {"residual", residual}, {"threshold", limit}, {"pass", pass}});
  };

  const FermionHamiltonian total = split.total();
  for (double t : {0.3, 1.0, 2.5}) {
    record("single-particle/t=" + label(t), check_single_particle_evolution(total, *rep, t), threshold(kSingleParticleThreshold, cfg));
  }

  std::vector<std::size_t> orders{1};
  if (f.m != 1) orders.push_back(f.m);
  for (std::size_t m : orders) {
    const MomentModel model = make_moment_model(split, m, tol, dim_cap);
    const std::string tag = "m=" + std::to_string(m);
    const LawResiduals laws = projector_laws(model, rng, kVerifyLawTrials);
    record("projector/idempotency/" + tag, laws.idempotency, threshold(kLawThreshold, cfg));
    record("projector/free-commutation/" + tag, laws.free_commutation, threshold(kLawThreshold, cfg));
    record("projector/pulling/" + tag, laws.pulling, threshold(kLawThreshold, cfg));
    for (double t : {0.5, 1.0, 2.0}) {
      const ComplexMatrix prop = effective_propagator(model, t);
      record("moment-propagator/" + tag + "/t=" + label(t), check_moment_propagator(prop, split, *rep, m, t, tol),
             threshold(kMomentThreshold, cfg));
    }
    for (auto [t1, t2] : {std::pair{0.2, 0.9}, std::pair{1.3, 0.4}}) {
      record("stationarity/" + tag + "/t1=" + label(t1) + ",t2=" + label(t2), stationarity_residual(model, t1, t2),
             threshold(kStationarityThreshold, cfg));
    }
  }

  const ComplexMatrix h0_fock = quadratize(split.base(), *rep);
  const LawResiduals super = superoperator_laws(h0_fock, rng, f.n <= 2 ? kVerifyLawTrials : 2, tol);
  record("superoperator/idempotency", super.idempotency, threshold(kLawThreshold, cfg));
  record("superoperator/free-commutation", super.free_commutation, threshold(kLawThreshold, cfg));
  record("superoperator/pulling", super.pulling, threshold(kLawThreshold, cfg));

  result.payload["n"] = f.n;
  result.payload["checks"] = std::move(checks);
  result.payload["all_pass"] = all_pass;
  if (!all_pass) {
    result.exit_code = kExitVerification;
    result.status = "fail";
  }
  return result;
}

CommandResult cmd_order_study(const Options& opts, const ModelConfig& cfg, std::size_t dim_cap) {
  const FermionSpec& f = need_fermion(cfg, "order-study");
  const std::string order_text = opts.order.value_or("2");
  if (order_text != "1" && order_text != "2") throw ConfigError("--order must be 1 or 2 for order-study");
  const int order = order_text == "1" ? 1 : 2;
  const std::vector<double> lambdas = opts.lambdas.value_or(cfg.lambdas);
  if (lambdas.size() < 3) throw ConfigError("order-study needs at least 3 lambdas");

  const MomentModel model = make_moment_model(build_split(f), f.m, cfg.tolerances.resonance, dim_cap);
  const TimeGrid grid(cfg.grid.t_end, cfg.grid.steps);
  CommandResult result;
  json& p = result.payload;
  p["order"] = order;
  p["m"] = f.m;
  p["lambdas"] = lambdas;
  p["grid"] = {{"t_end", grid.t_end()}, {"steps", grid.steps()}};
  try {
    const OrderStudy study = order_estimate(model, grid, lambdas, order, opts.jobs);
    std::vector<double> ratios;
    for (std::size_t i = 0; i + 1 < study.errors.size(); ++i) ratios.push_back(study.errors[i] / study.errors[i + 1]);
    p["errors"] = study.errors;
    p["ratios"] = ratios;
    p["slope"] = study.slope;
    p["degenerate_fit"] = false;
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::DegenerateFit) throw;
    p["degenerate_fit"] = true;
    p["slope"] = nullptr;
    p["message"] = e.what();
  }
  return result;
}

CommandResult cmd_boson_check(const Options& opts, const ModelConfig& cfg) {
  reject_order(opts);
  if (!cfg.boson) throw ConfigError("boson-check needs a 'boson' section");
  const BosonSpec& b = *cfg.boson;
  const BosonHamiltonian h0 = validate_boson(b.h0, b.n);
  const StabilityReport stability = stability_check(h0);

  ComplexMatrix x(2 * b.n);
  if (b.x) {
    x = *b.x;
  } else {
    x(0, 1) = 1.0;  // needs n >= 1 only: (0,1) lies in the 2n×2n block
  }
  const DivergenceReport demo = divergence_demo(h0, x, b.horizons);

  CommandResult result;
  json& p = result.payload;
  p["n"] = b.n;
  p["stability"] = {{"eigenvalues", complex_list(stability.eigenvalues)},
                    {"max_imag", stability.max_imag},
                    {"stable", stability.stable}};
  p["divergence"] = {{"horizons", demo.horizons}, {"norms", demo.norms},       {"monotone", demo.monotone},
                     {"growth_ratio", demo.growth_ratio}, {"overflowed", demo.overflowed}, {"divergent", demo.divergent}};
  p["expect_stable"] = opts.expect_stable;
  if (opts.expect_stable && !stability.stable) {
    result.exit_code = kExitExpectation;
    result.status = "unexpected-instability";
  }
  return result;
}

void emit(const Options& opts, const json& report, std::ostream& out) {
  const std::string text = report.dump(2) + "\n";
  if (!opts.out_path) {
    out << text;
    return;
  }
  std::ofstream file(*opts.out_path, std::ios::binary);
  if (!file) throw ConfigError("cannot write report '" + *opts.out_path + "'");
  file << text;
}

}  // namespace

std::vector<double> parse_lambda_list(const std::string& text) {
  std::vector<double> out;
  std::size_t start = 0;
  while (start <= text.size()) {
    const std::size_t comma = std::min(text.find(',', start), text.size());
    const std::string item = text.substr(start, comma - start);
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(item.data(), item.data() + item.size(), v);
    if (item.empty() || ec != std::errc() || ptr != item.data() + item.size() || !std::isfinite(v)) {
      throw ConfigError("bad --lambdas entry '" + item + "'");
    }
    out.push_back(v);
    start = comma + 1;
  }
  return out;
}

std::size_t dim_cap_from_env() {
  const char* raw = std::getenv("EFFHEIS_DIM_CAP");
  if (raw == nullptr) return kDefaultDimCap;
  const std::string text(raw);
  unsigned long long v = 0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (text.empty() || ec != std::errc() || ptr != text.data() + text.size() || v == 0) {
    throw ConfigError("EFFHEIS_DIM_CAP must be a positive integer, got '" + text + "'");
  }
  return static_cast<std::size_t>(v);
}

CommandResult run_command(const Options& opts, const ModelConfig& cfg, std::size_t dim_cap) {
  if (opts.jobs == 0) throw ConfigError("--jobs must be >= 1");
  if (opts.lambdas && opts.command != "order-study") throw ConfigError("--lambdas is only used by order-study");
  if (opts.command == "validate") return cmd_validate(opts, cfg, dim_cap);
  if (opts.command == "evolve") return cmd_evolve(opts, cfg, dim_cap);
  if (opts.command == "verify") return cmd_verify(opts, cfg, dim_cap);
  if (opts.command == "order-study") return cmd_order_study(opts, cfg, dim_cap);
  if (opts.command == "boson-check") return cmd_boson_check(opts, cfg);
  throw ConfigError("unknown command '" + opts.command + "'");
}

int execute(const Options& opts, std::ostream& out, std::ostream& err) {
  const auto start = std::chrono::steady_clock::now();
  json report = {{"command", opts.command}, {"config_digest", nullptr}};
  int code = kExitOk;
  auto fail = [&](int exit_code, std::string_view kind, const std::string& message) {
    code = exit_code;
    report["status"] = "error";
    report["error"] = {{"kind", kind}, {"message", message}, {"exit_code", exit_code}};
    err << "effheis " << opts.command << ": " << message << '\n';
  };
  try {
    const std::size_t cap = dim_cap_from_env();
    const ModelConfig cfg = load_config(opts.config_path);
    report["config_digest"] = cfg.digest;
    CommandResult result = run_command(opts, cfg, cap);
    code = result.exit_code;
    report["status"] = result.status;
    report["payload"] = std::move(result.payload);
    if (code != kExitOk) err << "effheis " << opts.command << ": " << result.status << '\n';
  } catch (const ConfigError& e) {
    fail(kExitConfig, "ConfigError", std::string("ConfigError: ") + e.what());
  } catch (const Error& e) {
    fail(exit_code_for(e.kind()), to_string(e.kind()), e.what());
  } catch (const std::exception& e) {
    fail(kExitFailure, "InternalError", std::string("InternalError: ") + e.what());
  }
  report["wall_time_s"] = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  try {
    emit(opts, report, out);
  } catch (const std::exception& e) {
    err << "effheis: " << e.what() << '\n';
    if (code == kExitOk) code = kExitConfig;
  }
  return code;
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Effective Heisenberg dynamics of quasi-free fermions", "effheis"};
  Options opts;
  std::string out_path, csv_path, order, lambdas;
  std::uint64_t seed = 0;
  app.add_option("command", opts.command, "validate | evolve | verify | order-study | boson-check")
      ->required()
      ->check(CLI::IsMember({"validate", "evolve", "verify", "order-study", "boson-check"}));
  app.add_option("--config", opts.config_path, "JSON model configuration")->required();
  auto* out_opt = app.add_option("--out", out_path, "Write the JSON report here instead of stdout");
  auto* csv_opt = app.add_option("--csv", csv_path, "CSV series path for evolve (default: --out with .csv)");
  auto* order_opt = app.add_option("--order", order, "exact | 1 | 2 (evolve), 1 | 2 (order-study)");
  auto* lambdas_opt = app.add_option("--lambdas", lambdas, "Comma-separated couplings for order-study");
  app.add_option("--jobs", opts.jobs, "Worker threads for independent grid points and couplings")
      ->check(CLI::PositiveNumber);
  auto* seed_opt = app.add_option("--seed", seed, "Seed for randomized checks (overrides the config)");
  app.add_flag("--expect-stable", opts.expect_stable, "boson-check: exit 5 if the model is unstable");

  try {
    app.parse(argc, argv);
    if (*out_opt) opts.out_path = out_path;
    if (*csv_opt) opts.csv_path = csv_path;
    if (*order_opt) opts.order = order;
    if (*seed_opt) opts.seed = seed;
    if (*lambdas_opt) opts.lambdas = parse_lambda_list(lambdas);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitConfig;
  } catch (const ConfigError& e) {
    err << "effheis: " << e.what() << '\n';
    return kExitConfig;
  }
  return execute(opts, out, err);
}

}  // namespace effheis::cli
