#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "climact/cli.hpp"
#include "climact/csv.hpp"
#include "climact/dates.hpp"
#include "climact/ingest.hpp"
#include "climact/serialize.hpp"

using namespace climact;
namespace fs = std::filesystem;

namespace {

struct TempDir {
  fs::path path;
  TempDir() {
    static std::mt19937_64 gen(std::random_device{}());
    path = fs::temp_directory_path() /
           ("climact_cli_" + std::to_string(gen()));
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  std::string sub(const std::string& name) const {
    return (path / name).string();
  }
};

void write(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  out << content;
}

const char* kExampleDir = "data/example";

bool example_available() { return fs::exists(kExampleDir); }

std::string example(const std::string& name) {
  return std::string(kExampleDir) + "/" + name;
}

int simulate_small(const TempDir& dir, const std::string& out,
                   const std::string& n_users, const std::string& seed) {
  return run_cli({"simulate", "--params", example("params.json"), "--catalog",
                  example("catalog.csv"), "--n-users", n_users, "--seed", seed,
                  "--out", dir.sub(out)});
}

}  // namespace

TEST_CASE("simulate writes a complete, reproducible dataset") {
  REQUIRE(example_available());
  TempDir dir;
  REQUIRE(simulate_small(dir, "sim", "50", "7") == 0);
  for (const char* name :
       {"users.csv", "catalog.csv", "latents.csv", "params.json",
        "manifest.json"})
    CHECK(fs::exists(dir.sub("sim") + "/" + std::string(name)));

  const std::string first = read_text_file(dir.sub("sim") + "/users.csv");
  REQUIRE(simulate_small(dir, "sim", "50", "7") == 0);
  CHECK(read_text_file(dir.sub("sim") + "/users.csv") == first);

  // a different seed changes the data
  REQUIRE(simulate_small(dir, "sim2", "50", "8") == 0);
  CHECK(read_text_file(dir.sub("sim2") + "/users.csv") != first);

  // the simulated dataset loads cleanly
  const LoadedData loaded = load_dataset(dir.sub("sim") + "/catalog.csv",
                                         dir.sub("sim") + "/users.csv");
  CHECK(loaded.data.users.size() == 50);
}

TEST_CASE("simulate-fit-report pipeline") {
  REQUIRE(example_available());
  TempDir dir;
  REQUIRE(simulate_small(dir, "sim", "150", "21") == 0);

  const int fit_rc = run_cli({"fit", "--data", dir.sub("sim"), "--out",
                              dir.sub("fit"), "--var-s", "0.01,1,100",
                              "--restarts", "2", "--steps", "250", "--seed",
                              "3"});
  REQUIRE(fit_rc == 0);
  for (const char* name :
       {"fit_full_var_s_0.01.json", "fit_full_var_s_1.json",
        "fit_full_var_s_100.json", "manifest.json"})
    CHECK(fs::exists(dir.sub("fit") + "/" + std::string(name)));

  const FitDocument doc = fit_document_from_json(
      read_text_file(dir.sub("fit") + "/fit_full_var_s_1.json"), "doc");
  CHECK(doc.restarts.size() == 2);
  CHECK(doc.parameters.size() == 39);
  CHECK(doc.sympathy.size() == 150);
  for (const ParamSummary& p : doc.parameters) {
    CHECK(p.ci_low <= p.mean);
    CHECK(p.mean <= p.ci_high);
  }

  const int rep_rc =
      run_cli({"report", "--in", dir.sub("fit"), "--out", dir.sub("rep")});
  REQUIRE(rep_rc == 0);
  for (const char* name : {"coefficients.csv", "errorbars.svg",
                           "sympathy_hist.csv", "sympathy_hist.svg",
                           "manifest.json"})
    CHECK(fs::exists(dir.sub("rep") + "/" + std::string(name)));

  // one row per parameter per var_s value
  const CsvTable coeffs = read_csv(dir.sub("rep") + "/coefficients.csv");
  CHECK(coeffs.rows.size() == 3 * 39);
  const int c_mean = coeffs.require_col("mean");
  const int c_lo = coeffs.require_col("ci_low");
  const int c_hi = coeffs.require_col("ci_high");
  for (std::size_t r = 0; r < coeffs.rows.size(); ++r) {
    CHECK(coeffs.number(r, c_lo) <= coeffs.number(r, c_mean));
    CHECK(coeffs.number(r, c_mean) <= coeffs.number(r, c_hi));
  }

  // three series in the error-bar figure
  const std::string svg = read_text_file(dir.sub("rep") + "/errorbars.svg");
  CHECK(svg.find("var_S = 0.01") != std::string::npos);
  CHECK(svg.find("var_S = 1") != std::string::npos);
  CHECK(svg.find("var_S = 100") != std::string::npos);
  CHECK(svg.find("#1f77b4") != std::string::npos);
  CHECK(svg.find("#ff7f0e") != std::string::npos);
  CHECK(svg.find("#2ca02c") != std::string::npos);
}

TEST_CASE("fit reruns are byte-identical") {
  REQUIRE(example_available());
  TempDir dir;
  REQUIRE(simulate_small(dir, "sim", "80", "31") == 0);
  const std::vector<std::string> fit_args = {
      "fit",        "--data", dir.sub("sim"), "--out", dir.sub("fit"),
      "--var-s",    "1",      "--restarts",   "2",     "--steps",
      "150",        "--seed", "11"};
  REQUIRE(run_cli(fit_args) == 0);
  const std::string first =
      read_text_file(dir.sub("fit") + "/fit_full_var_s_1.json");
  const std::string manifest1 =
      read_text_file(dir.sub("fit") + "/manifest.json");
  REQUIRE(run_cli(fit_args) == 0);
  CHECK(read_text_file(dir.sub("fit") + "/fit_full_var_s_1.json") == first);
  CHECK(read_text_file(dir.sub("fit") + "/manifest.json") == manifest1);
}

TEST_CASE("config file supplies defaults and flags win") {
  REQUIRE(example_available());
  TempDir dir;
  REQUIRE(simulate_small(dir, "sim", "60", "41") == 0);
  write(dir.sub("fit.cfg"),
        "[fit]\ndata = \"" + dir.sub("sim") + "\"\n" +
            "out = \"" + dir.sub("fit") + "\"\n" +
            "var-s = \"1\"\nrestarts = 1\nsteps = 120\nseed = 5\n");
  REQUIRE(run_cli({"fit", "--config", dir.sub("fit.cfg"), "--steps", "90"}) ==
          0);
  const std::string manifest = read_text_file(dir.sub("fit") + "/manifest.json");
  CHECK(manifest.find("\"steps\": \"90\"") != std::string::npos);
  CHECK(manifest.find("\"restarts\": \"1\"") != std::string::npos);
}

TEST_CASE("robustness on time-constant media") {
  REQUIRE(example_available());
  TempDir dir;
  REQUIRE(simulate_small(dir, "sim", "120", "51") == 0);

  // Rebuild users.csv without media overrides and with areas assigned
  // round-robin; the example media series is constant in time, so the
  // two window regimes see identical features.
  fs::create_directories(dir.sub("rob_data"));
  fs::copy_file(dir.sub("sim") + "/catalog.csv",
                dir.sub("rob_data") + "/catalog.csv");
  fs::copy_file("data/example/media.csv", dir.sub("rob_data") + "/media.csv");
  {
    const CsvTable users = read_csv(dir.sub("sim") + "/users.csv");
    const char* areas[] = {"CA", "NY", "TX"};
    std::ostringstream out;
    out << "user_id,A,I,E_L,E_S,location,P_L,P_S\n";
    for (std::size_t r = 0; r < users.rows.size(); ++r) {
      out << users.cell(r, users.require_col("user_id")) << ','
          << users.cell(r, users.require_col("A")) << ','
          << users.cell(r, users.require_col("I")) << ','
          << users.cell(r, users.require_col("E_L")) << ','
          << users.cell(r, users.require_col("E_S")) << ','
          << areas[r % 3] << ','
          << users.cell(r, users.require_col("P_L")) << ','
          << users.cell(r, users.require_col("P_S")) << '\n';
    }
    write(dir.sub("rob_data") + "/users.csv", out.str());
  }

  const int rc = run_cli({"robustness", "--data", dir.sub("rob_data"),
                          "--out", dir.sub("rob"), "--t-a", "2019-09-27",
                          "--restarts", "1", "--steps", "150", "--seed",
                          "61"});
  REQUIRE(rc == 0);

  const std::string json = read_text_file(dir.sub("rob") + "/robustness.json");
  const std::size_t pos = json.find("\"correlation\": ");
  REQUIRE(pos != std::string::npos);
  const double corr = std::stod(json.substr(pos + 15));
  CHECK(corr >= 0.999);

  // cross-check against an independent correlation computation
  const CsvTable pairs = read_csv(dir.sub("rob") + "/robustness.csv");
  const int c_on = pairs.require_col("mean_gap_on");
  const int c_off = pairs.require_col("mean_gap_off");
  const std::size_t n = pairs.rows.size();
  double mx = 0.0, my = 0.0;
  for (std::size_t r = 0; r < n; ++r) {
    mx += pairs.number(r, c_on);
    my += pairs.number(r, c_off);
  }
  mx /= static_cast<double>(n);
  my /= static_cast<double>(n);
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t r = 0; r < n; ++r) {
    const double dx = pairs.number(r, c_on) - mx;
    const double dy = pairs.number(r, c_off) - my;
    sxy += dx * dy;
    sxx += dx * dx;
    syy += dy * dy;
  }
  const double expected = sxy / std::sqrt(sxx * syy);
  CHECK(std::abs(corr - expected) < 1e-10);
}

TEST_CASE("ablation command") {
  REQUIRE(example_available());
  TempDir dir;
  REQUIRE(simulate_small(dir, "sim", "100", "71") == 0);

  SUBCASE("unknown group fails with a validation exit code") {
    CHECK(run_cli({"ablate", "--data", dir.sub("sim"), "--out",
                   dir.sub("abl"), "--groups", "E,X", "--var-s", "1",
                   "--restarts", "1", "--steps", "50", "--seed", "1"}) == 1);
  }

  SUBCASE("single-group ablation produces the table and documents") {
    REQUIRE(run_cli({"ablate", "--data", dir.sub("sim"), "--out",
                     dir.sub("abl"), "--groups", "I", "--var-s", "1",
                     "--restarts", "1", "--steps", "120", "--seed", "2"}) ==
            0);
    const CsvTable table = read_csv(dir.sub("abl") + "/ablation.csv");
    REQUIRE(table.rows.size() == 2);  // full + no_I
    CHECK(table.cell(0, table.require_col("variant")) == "full");
    CHECK(table.cell(1, table.require_col("variant")) == "no_I");
    const int c_mean = table.require_col("accuracy_mean");
    for (std::size_t r = 0; r < 2; ++r) {
      CHECK(table.number(r, c_mean) >= 0.0);
      CHECK(table.number(r, c_mean) <= 1.0);
    }
    CHECK(fs::exists(dir.sub("abl") + "/fit_no_I_var_s_1.json"));

    // the reduced model has fewer parameters
    const FitDocument no_i = fit_document_from_json(
        read_text_file(dir.sub("abl") + "/fit_no_I_var_s_1.json"), "no_I");
    CHECK(no_i.parameters.size() == 32);

    // report consumes the ablation table
    REQUIRE(run_cli({"report", "--in", dir.sub("abl"), "--out",
                     dir.sub("rep")}) == 0);
    CHECK(fs::exists(dir.sub("rep") + "/ablation.csv"));
    CHECK(fs::exists(dir.sub("rep") + "/ablation.svg"));
  }
}

TEST_CASE("exit codes") {
  TempDir dir;
  // missing input file -> validation error
  CHECK(run_cli({"simulate", "--params", dir.sub("nope.json"), "--catalog",
                 dir.sub("nope.csv"), "--n-users", "5", "--out",
                 dir.sub("out")}) == 1);
  // bad usage -> parse error mapped to 1
  CHECK(run_cli({"fit"}) == 1);
  CHECK(run_cli({"no-such-command"}) == 1);

  // fit without both outcome classes -> validation error
  REQUIRE(example_available());
  REQUIRE(simulate_small(dir, "sim", "30", "3") == 0);
  {
    CsvTable users = read_csv(dir.sub("sim") + "/users.csv");
    const int c_a = users.require_col("A");
    std::ostringstream out;
    for (std::size_t c = 0; c < users.header.size(); ++c)
      out << (c ? "," : "") << users.header[c];
    out << '\n';
    for (std::size_t r = 0; r < users.rows.size(); ++r) {
      users.rows[r][c_a] = "1";
      for (std::size_t c = 0; c < users.header.size(); ++c)
        out << (c ? "," : "") << users.rows[r][c];
      out << '\n';
    }
    write(dir.sub("sim") + "/users.csv", out.str());
  }
  CHECK(run_cli({"fit", "--data", dir.sub("sim"), "--out", dir.sub("fit"),
                 "--var-s", "1", "--restarts", "1", "--steps", "50",
                 "--seed", "1"}) == 1);
}

TEST_CASE("pipeline recovers a strong interaction effect sign") {
  REQUIRE(example_available());
  TempDir dir;
  int correct = 0;
  const int trials = 3;
  for (int trial = 0; trial < trials; ++trial) {
    const std::string sim = "sim" + std::to_string(trial);
    const std::string fit_dir = "fit" + std::to_string(trial);
    REQUIRE(simulate_small(dir, sim, "400", std::to_string(100 + trial)) == 0);
    REQUIRE(run_cli({"fit", "--data", dir.sub(sim), "--out", dir.sub(fit_dir),
                     "--var-s", "1", "--restarts", "2", "--steps", "400",
                     "--seed", std::to_string(trial)}) == 0);
    const FitDocument doc = fit_document_from_json(
        read_text_file(dir.sub(fit_dir) + "/fit_full_var_s_1.json"), "doc");
    for (const ParamSummary& p : doc.parameters)
      if (p.name == "beta_A2" && p.mean > 0.0) ++correct;
  }
  CHECK(correct == trials);  // true beta_A2 = 1 in the example parameters
}
