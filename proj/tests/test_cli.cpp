#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "app.hpp"
#include "config.hpp"

namespace fs = std::filesystem;
using effheis::cli::run;
using nlohmann::json;

namespace {

const std::string kConfigs = EFFHEIS_CONFIG_DIR;

struct Outcome {
  int code;
  std::string out;
  std::string err;
};

Outcome invoke(std::vector<std::string> args) {
  args.insert(args.begin(), "effheis");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::string config(const std::string& name) { return kConfigs + "/" + name; }

class ScratchDir : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("effheis_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string path(const std::string& name) const { return (dir_ / name).string(); }

  std::string write_json(const std::string& name, const json& doc) const {
    std::ofstream(path(name)) << doc.dump();
    return path(name);
  }

  static std::string slurp(const std::string& file) {
    std::ifstream in(file, std::ios::binary);
    std::stringstream buf;
    buf << in.rdbuf();
    return buf.str();
  }

  static json two_mode() { return json::parse(slurp(config("two_mode.json"))); }

  fs::path dir_;
};

class EnvGuard {
 public:
  EnvGuard(const char* name, const char* value) : name_(name) { ::setenv(name, value, 1); }
  ~EnvGuard() { ::unsetenv(name_); }

 private:
  const char* name_;
};

}  // namespace

TEST(CliArgs, UnknownCommandAndMissingConfig) {
  EXPECT_EQ(invoke({"frobnicate", "--config", config("two_mode.json")}).code, 2);
  EXPECT_EQ(invoke({"validate"}).code, 2);
  EXPECT_EQ(invoke({"validate", "--config", config("two_mode.json"), "--jobs", "0"}).code, 2);
}

TEST(CliArgs, LambdaList) {
  EXPECT_EQ(effheis::cli::parse_lambda_list("0.2,0.1,0.05"), (std::vector<double>{0.2, 0.1, 0.05}));
  EXPECT_THROW(effheis::cli::parse_lambda_list("0.2,,0.1"), effheis::cli::ConfigError);
  EXPECT_THROW(effheis::cli::parse_lambda_list("0.2,x"), effheis::cli::ConfigError);
  EXPECT_EQ(invoke({"order-study", "--config", config("two_mode.json"), "--lambdas", "0.2;0.1"}).code, 2);
}

TEST(CliValidate, ShippedConfigsAreValid) {
  for (const char* name : {"two_mode.json", "resonant.json", "harmonic_boson.json", "squeezing_boson.json"}) {
    const Outcome r = invoke({"validate", "--config", config(name)});
    EXPECT_EQ(r.code, 0) << name << ": " << r.err;
    const json report = json::parse(r.out);
    EXPECT_EQ(report["status"], "ok");
    EXPECT_EQ(report["command"], "validate");
    EXPECT_EQ(report["config_digest"].get<std::string>().size(), 16u);
  }
}

TEST(CliValidate, SymmetricFermionIsRejected) {
  const Outcome r = invoke({"validate", "--config", config("symmetric_fermion.json")});
  EXPECT_EQ(r.code, 3);
  EXPECT_NE(r.err.find("NotAntisymmetric"), std::string::npos);
  EXPECT_NE(r.err.find("(0,1)"), std::string::npos);
  const json report = json::parse(r.out);
  EXPECT_EQ(report["status"], "error");
  EXPECT_EQ(report["error"]["kind"], "NotAntisymmetric");
}

TEST_F(ScratchDir, MalformedAndMissingConfigs) {
  std::ofstream(path("bad.json")) << "{\"n\": 2,";
  EXPECT_EQ(invoke({"validate", "--config", path("bad.json")}).code, 2);
  EXPECT_EQ(invoke({"validate", "--config", path("absent.json")}).code, 2);

  json doc = two_mode();
  doc["H0"]["frequencies"] = {1.0};
  EXPECT_EQ(invoke({"validate", "--config", write_json("short.json", doc)}).code, 2);
  doc = two_mode();
  doc["HI"] = {{"hopping", {{{"modes", {2, 1}}, {"g", 1.0}}}}};
  EXPECT_EQ(invoke({"validate", "--config", write_json("order.json", doc)}).code, 2);
  doc = two_mode();
  doc["mystery"] = 1;
  EXPECT_EQ(invoke({"validate", "--config", write_json("key.json", doc)}).code, 2);
  doc = two_mode();
  doc["m"] = 0;
  EXPECT_EQ(invoke({"validate", "--config", write_json("m0.json", doc)}).code, 2);
}

TEST_F(ScratchDir, RawMatrixMatchesBuilder) {
  json doc = two_mode();
  // ω = (1, 2): H = [[0, −Ω], [Ω, 0]]
  json rows = json::array();
  const double h[4][4] = {{0, 0, -1, 0}, {0, 0, 0, -2}, {1, 0, 0, 0}, {0, 2, 0, 0}};
  for (const auto& row : h) {
    json r = json::array();
    for (double v : row) r.push_back({v, 0.0});
    rows.push_back(r);
  }
  doc["H0"] = {{"matrix", rows}};
  const json a = json::parse(invoke({"evolve", "--config", write_json("raw.json", doc)}).out);
  const json b = json::parse(invoke({"evolve", "--config", config("two_mode.json")}).out);
  EXPECT_EQ(a["payload"]["final"], b["payload"]["final"]);
}

TEST(CliDimCap, EnvironmentOverride) {
  {
    EnvGuard cap("EFFHEIS_DIM_CAP", "8");
    const Outcome r = invoke({"validate", "--config", config("two_mode.json")});
    EXPECT_EQ(r.code, 2);
    EXPECT_NE(r.err.find("DimensionOverflow"), std::string::npos);
  }
  {
    EnvGuard cap("EFFHEIS_DIM_CAP", "16");
    EXPECT_EQ(invoke({"validate", "--config", config("two_mode.json")}).code, 0);
  }
  for (const char* bad : {"", "zero", "0", "12x", "-4"}) {
    EnvGuard cap("EFFHEIS_DIM_CAP", bad);
    EXPECT_EQ(invoke({"validate", "--config", config("two_mode.json")}).code, 2) << '"' << bad << '"';
  }
}

TEST_F(ScratchDir, EvolveZeroCouplingIsFreeEvolution) {
  json doc = two_mode();
  doc["lambda"] = 0.0;
  const Outcome r = invoke({"evolve", "--config", write_json("free.json", doc)});
  ASSERT_EQ(r.code, 0) << r.err;
  const json p = json::parse(r.out)["payload"];
  EXPECT_LT(p["free_evolution_sup_error"].get<double>(), 1e-10);
  EXPECT_EQ(p["free_evolution_errors"].size(), 201u);
  EXPECT_EQ(p["series"], "exact");
}

TEST(CliEvolve, TimeLocalOrders) {
  std::vector<double> sups;
  for (const char* order : {"1", "2"}) {
    const Outcome r = invoke({"evolve", "--config", config("two_mode.json"), "--order", order});
    ASSERT_EQ(r.code, 0) << r.err;
    const json p = json::parse(r.out)["payload"];
    sups.push_back(p["sup_error_vs_exact"].get<double>());
    EXPECT_TRUE(std::isfinite(sups.back()));
    EXPECT_EQ(p["final"].size(), 16u);
  }
  // λ = 0.1: order 1 misses the λ² term, order 2 leaves λ⁴ here
  EXPECT_LT(sups[0], 0.1);
  EXPECT_LT(sups[1], 1e-3);
  EXPECT_LT(sups[1], 0.1 * sups[0]);
  EXPECT_EQ(invoke({"evolve", "--config", config("two_mode.json"), "--order", "3"}).code, 2);
}

TEST_F(ScratchDir, EvolveSingleStepIsRejected) {
  json doc = two_mode();
  doc["grid"]["steps"] = 1;
  const Outcome r = invoke({"evolve", "--config", write_json("one.json", doc), "--order", "2"});
  EXPECT_NE(r.code, 0);
  EXPECT_NE(r.err.find("StepTooLarge"), std::string::npos);
}

TEST_F(ScratchDir, EvolveCsvFormat) {
  json doc = two_mode();
  doc["m"] = 1;
  doc["grid"] = {{"t_end", 1.0}, {"steps", 20}};
  const Outcome r = invoke({"evolve", "--config", write_json("c.json", doc), "--out", path("run.json"), "--order", "2"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_TRUE(r.out.empty());
  ASSERT_TRUE(fs::exists(path("run.csv")));
  const std::string csv = slurp(path("run.csv"));
  EXPECT_EQ(csv.find('\r'), std::string::npos);
  EXPECT_EQ(csv.back(), '\n');
  std::istringstream lines(csv);
  std::string line;
  std::size_t rows = 0;
  while (std::getline(lines, line)) {
    const auto cols = 1 + std::count(line.begin(), line.end(), ',');
    EXPECT_EQ(cols, 1 + 2 * 16);
    if (rows == 0) {
      EXPECT_EQ(line.rfind("t,re_0_0,im_0_0,", 0), 0u);
    } else {
      EXPECT_EQ(line.find_first_not_of("0123456789.,-+e"), std::string::npos) << line;
    }
    ++rows;
  }
  EXPECT_EQ(rows, 1u + 21u);
  EXPECT_EQ(json::parse(slurp(path("run.json")))["payload"]["csv"], "run.csv");

  EXPECT_EQ(invoke({"evolve", "--config", path("c.json"), "--csv", path("explicit.csv")}).code, 0);
  EXPECT_TRUE(fs::exists(path("explicit.csv")));
}

TEST(CliVerify, ShippedConfigPasses) {
  const Outcome r = invoke({"verify", "--config", config("two_mode.json")});
  ASSERT_EQ(r.code, 0) << r.err;
  const json p = json::parse(r.out)["payload"];
  EXPECT_TRUE(p["all_pass"].get<bool>());
  std::size_t single = 0, moment = 0, stationarity = 0, super = 0;
  for (const auto& c : p["checks"]) {
    EXPECT_TRUE(c["pass"].get<bool>()) << c.dump();
    const std::string name = c["name"];
    single += name.rfind("single-particle/", 0) == 0;
    moment += name.rfind("moment-propagator/", 0) == 0;
    stationarity += name.rfind("stationarity/", 0) == 0;
    super += name.rfind("superoperator/", 0) == 0;
  }
  EXPECT_EQ(single, 3u);
  EXPECT_EQ(moment, 6u);
  EXPECT_EQ(stationarity, 4u);
  EXPECT_EQ(super, 3u);
}

TEST_F(ScratchDir, VerifyThresholdsAreActive) {
  json doc = two_mode();
  doc["tolerances"]["report"] = 1e-16;
  const Outcome r = invoke({"verify", "--config", write_json("tight.json", doc)});
  EXPECT_EQ(r.code, 4);
  const json report = json::parse(r.out);
  EXPECT_EQ(report["status"], "fail");
  EXPECT_FALSE(report["payload"]["all_pass"].get<bool>());
}

TEST_F(ScratchDir, VerifyRejectsFourModes) {
  json doc = {{"n", 4}, {"H0", {{"frequencies", {1, 2, 3, 4}}}}};
  const Outcome r = invoke({"verify", "--config", write_json("n4.json", doc)});
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("TooManyModes"), std::string::npos);
}

TEST(CliVerify, Deterministic) {
  const json a = json::parse(invoke({"verify", "--config", config("two_mode.json")}).out);
  const json b = json::parse(invoke({"verify", "--config", config("two_mode.json")}).out);
  EXPECT_EQ(a["payload"].dump(), b["payload"].dump());
  EXPECT_EQ(a["config_digest"], b["config_digest"]);
  const json c = json::parse(invoke({"verify", "--config", config("two_mode.json"), "--seed", "99"}).out);
  EXPECT_NE(a["payload"].dump(), c["payload"].dump());
}

TEST(CliJobs, PayloadIndependentOfThreadCount) {
  for (const char* cmd : {"evolve", "order-study"}) {
    const json a = json::parse(invoke({cmd, "--config", config("two_mode.json"), "--jobs", "1"}).out);
    const json b = json::parse(invoke({cmd, "--config", config("two_mode.json"), "--jobs", "4"}).out);
    EXPECT_EQ(a["payload"].dump(), b["payload"].dump()) << cmd;
  }
}

TEST(CliOrderStudy, OffResonantSlopes) {
  const json two = json::parse(invoke({"order-study", "--config", config("two_mode.json")}).out)["payload"];
  EXPECT_FALSE(two["degenerate_fit"].get<bool>());
  EXPECT_EQ(two["errors"].size(), 3u);
  EXPECT_EQ(two["ratios"].size(), 2u);
  // the odd moments vanish for this model, so order 2 converges one order faster than generic
  EXPECT_NEAR(two["slope"].get<double>(), 4.0, 0.3);
  const json one =
      json::parse(invoke({"order-study", "--config", config("two_mode.json"), "--order", "1"}).out)["payload"];
  EXPECT_NEAR(one["slope"].get<double>(), 2.0, 0.3);
  EXPECT_EQ(invoke({"order-study", "--config", config("two_mode.json"), "--lambdas", "0.2,0.1"}).code, 2);
}

TEST(CliOrderStudy, CommutingModelFlagsDegenerateFit) {
  const Outcome r = invoke({"order-study", "--config", config("resonant.json")});
  EXPECT_EQ(r.code, 0);
  const json p = json::parse(r.out)["payload"];
  EXPECT_TRUE(p["degenerate_fit"].get<bool>());
  EXPECT_TRUE(p["slope"].is_null());
}

TEST(CliBoson, HarmonicIsStable) {
  const Outcome r = invoke({"boson-check", "--config", config("harmonic_boson.json"), "--expect-stable"});
  ASSERT_EQ(r.code, 0) << r.err;
  const json p = json::parse(r.out)["payload"];
  EXPECT_TRUE(p["stability"]["stable"].get<bool>());
  EXPECT_EQ(p["stability"]["eigenvalues"].size(), 4u);
  EXPECT_FALSE(p["divergence"]["divergent"].get<bool>());
}

TEST(CliBoson, SqueezingIsUnstable) {
  const Outcome plain = invoke({"boson-check", "--config", config("squeezing_boson.json")});
  EXPECT_EQ(plain.code, 0);
  const json p = json::parse(plain.out)["payload"];
  EXPECT_FALSE(p["stability"]["stable"].get<bool>());
  EXPECT_NEAR(p["stability"]["max_imag"].get<double>(), 1.0, 1e-10);
  EXPECT_TRUE(p["divergence"]["divergent"].get<bool>());
  EXPECT_EQ(invoke({"boson-check", "--config", config("squeezing_boson.json"), "--expect-stable"}).code, 5);
}

TEST_F(ScratchDir, ZeroBosonIsStable) {
  json zero = json::array();
  for (int r = 0; r < 2; ++r) zero.push_back({{0, 0}, {0, 0}});
  const json doc = {{"boson", {{"n", 1}, {"H0", {{"matrix", zero}}}}}};
  const Outcome r = invoke({"boson-check", "--config", write_json("zero.json", doc), "--expect-stable"});
  EXPECT_EQ(r.code, 0) << r.err;
}

TEST_F(ScratchDir, BosonCommandNeedsBosonSection) {
  EXPECT_EQ(invoke({"boson-check", "--config", config("two_mode.json")}).code, 2);
  EXPECT_EQ(invoke({"verify", "--config", config("harmonic_boson.json")}).code, 2);
}

TEST_F(ScratchDir, ErrorReportGoesToOutFile) {
  const Outcome r = invoke({"validate", "--config", config("symmetric_fermion.json"), "--out", path("err.json")});
  EXPECT_EQ(r.code, 3);
  const json report = json::parse(slurp(path("err.json")));
  EXPECT_EQ(report["error"]["exit_code"], 3);
  EXPECT_TRUE(report.contains("wall_time_s"));
}

TEST(CliConfig, DigestIsStableUnderFormatting) {
  const json a = json::parse(R"({"n": 1, "H0": {"frequencies": [1.5]}})");
  const json b = json::parse("{\n  \"H0\" : {\"frequencies\":[1.5]},\"n\":1}");
  EXPECT_EQ(effheis::cli::parse_config(a).digest, effheis::cli::parse_config(b).digest);
  EXPECT_EQ(effheis::cli::fnv1a_hex(""), "cbf29ce484222325");
}
