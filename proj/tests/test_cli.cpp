#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sys/wait.h>
#include <unistd.h>

#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "gibbsrec/rate.hpp"
#include "gibbsrec/sampling.hpp"
#include "gibbsrec/thermo.hpp"

using namespace gibbsrec;
namespace fs = std::filesystem;

namespace {

// The binary under test is handed in by ctest; running the suite directly
// needs GIBBSREC_CLI in the environment.
std::string cli_binary() {
  const char* p = std::getenv("GIBBSREC_CLI");
  REQUIRE(p != nullptr);
  return p;
}

fs::path fresh_dir(const std::string& label) {
  static int counter = 0;
  fs::path d = fs::temp_directory_path() /
               ("gibbsrec_cli_" + std::to_string(::getpid()) + "_" + label +
                "_" + std::to_string(counter++));
  fs::remove_all(d);
  fs::create_directories(d);
  return d;
}

void write_text(const fs::path& p, const std::string& body) {
  std::ofstream f(p, std::ios::binary);
  REQUIRE(f.good());
  f << body;
}

std::string read_text(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  REQUIRE(f.good());
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

struct CliResult {
  int exit_code = -1;
  std::string err;
};

CliResult run_cli(const std::string& args, const fs::path& dir) {
  const std::string err_file = (dir / "stderr.txt").string();
  const std::string cmd = cli_binary() + " " + args + " >" +
                          (dir / "stdout.txt").string() + " 2>" + err_file;
  const int status = std::system(cmd.c_str());
  CliResult r;
  REQUIRE(WIFEXITED(status));
  r.exit_code = WEXITSTATUS(status);
  r.err = read_text(err_file);
  return r;
}

std::vector<std::vector<std::string>> parse_csv(const std::string& text) {
  std::vector<std::vector<std::string>> rows;
  std::istringstream lines(text);
  std::string line;
  while (std::getline(lines, line)) {
    std::vector<std::string> cells;
    std::istringstream cs(line);
    std::string cell;
    while (std::getline(cs, cell, ',')) cells.push_back(cell);
    rows.push_back(std::move(cells));
  }
  return rows;
}

const char* kBernModel = R"("model": {"bernoulli": {"p": [0.8, 0.2]}})";

}  // namespace

TEST_CASE("recur output is byte-identical across runs and worker counts") {
  const fs::path dir = fresh_dir("det");
  const std::string cfg = std::string("{\"seed\": 977, ") + kBernModel +
                          R"(, "rate": {"kind": "psi_minus", "eps": 0.5},
      "experiment": {"length": 2000, "trials": 8,
                     "windows": [[1, 500], [1, 2000]]}})";
  write_text(dir / "cfg.json", cfg);

  const std::vector<std::string> variants = {"--workers 1", "--workers 1",
                                             "--workers 8", "--workers 3"};
  for (std::size_t i = 0; i < variants.size(); ++i) {
    const fs::path out = dir / ("out" + std::to_string(i));
    auto r = run_cli("recur --config " + (dir / "cfg.json").string() +
                         " --out " + out.string() + " " + variants[i],
                     dir);
    CHECK(r.exit_code == 0);
  }
  const std::vector<std::string> files = {"recur.json", "recur_windows.csv",
                                          "recur_trials.csv",
                                          "recur_histogram.csv"};
  for (const auto& f : files) {
    const std::string base = read_text(dir / "out0" / f);
    for (int i = 1; i < 4; ++i) {
      const bool same = read_text(dir / ("out" + std::to_string(i)) / f) == base;
      CHECK(same);
    }
  }
  // provenance: the report repeats the config and seed, never the workers
  auto j = nlohmann::json::parse(read_text(dir / "out0" / "recur.json"));
  CHECK(j.at("seed").get<std::uint64_t>() == 977);
  CHECK(j.at("config").at("experiment").at("length").get<int>() == 2000);
  CHECK_FALSE(j.contains("workers"));
}

TEST_CASE("tiny recurrence fixture matches a quadratic oracle") {
  const std::int64_t kLen = 64;
  const std::int64_t kTrials = 3;
  const std::uint64_t kSeed = 31337;

  // psi(n) = bit width of n, small enough that most prefixes recur
  std::vector<std::int64_t> table;
  std::string values;
  for (std::int64_t n = 1; n <= kLen; ++n) {
    std::int64_t b = 0;
    for (std::int64_t v = n; v > 0; v >>= 1) ++b;
    table.push_back(b);
    values += (n == 1 ? "" : ", ") + std::to_string(b);
  }

  const fs::path dir = fresh_dir("oracle");
  const std::string cfg = std::string("{\"seed\": 31337, ") + kBernModel +
                          ", \"rate\": {\"kind\": \"table\", \"values\": [" +
                          values + "]}, " +
                          R"("experiment": {"length": 64, "trials": 3,
                              "windows": [[1, 32], [1, 64]]}})";
  write_text(dir / "cfg.json", cfg);
  auto r = run_cli("recur --config " + (dir / "cfg.json").string() + " --out " +
                       (dir / "out").string(),
                   dir);
  REQUIRE(r.exit_code == 0);

  // independent recount: same sampled words, events by direct prefix compare
  GibbsModel m = build_gibbs(BernoulliSpec({0.8, 0.2}));
  std::int64_t max_req = 0;
  for (std::int64_t v : table) max_req = std::max(max_req, v);
  std::vector<std::int64_t> events(kTrials, 0), last(kTrials, 0);
  std::vector<std::vector<std::int64_t>> win_events(
      2, std::vector<std::int64_t>(kTrials, 0));
  for (std::int64_t t = 0; t < kTrials; ++t) {
    const Word w =
        sample_sequence(m, kLen + max_req, derive_trial_seed(kSeed, t));
    for (std::int64_t n = 1; n <= kLen; ++n) {
      const std::int64_t req = table[static_cast<std::size_t>(n - 1)];
      bool sat = true;
      for (std::int64_t k = 1; k <= req; ++k) {
        if (w.at(static_cast<std::size_t>(k)) !=
            w.at(static_cast<std::size_t>(n + k))) {
          sat = false;
          break;
        }
      }
      if (!sat) continue;
      ++events[static_cast<std::size_t>(t)];
      last[static_cast<std::size_t>(t)] = n;
      if (n <= 32) ++win_events[0][static_cast<std::size_t>(t)];
      ++win_events[1][static_cast<std::size_t>(t)];
    }
  }

  auto trials_csv = parse_csv(read_text(dir / "out" / "recur_trials.csv"));
  REQUIRE(trials_csv.size() == 4);  // header + 3 trials
  for (std::int64_t t = 0; t < kTrials; ++t) {
    const auto& row = trials_csv[static_cast<std::size_t>(t + 1)];
    REQUIRE(row.size() == 3);
    CHECK(std::stoll(row[0]) == t);
    CHECK(std::stoll(row[1]) == events[static_cast<std::size_t>(t)]);
    CHECK(std::stoll(row[2]) == last[static_cast<std::size_t>(t)]);
  }

  auto windows_csv = parse_csv(read_text(dir / "out" / "recur_windows.csv"));
  REQUIRE(windows_csv.size() == 3);
  for (std::size_t wi = 0; wi < 2; ++wi) {
    std::int64_t total = 0, hit = 0;
    for (std::int64_t t = 0; t < kTrials; ++t) {
      total += win_events[wi][static_cast<std::size_t>(t)];
      if (win_events[wi][static_cast<std::size_t>(t)] > 0) ++hit;
    }
    const auto& row = windows_csv[wi + 1];
    REQUIRE(row.size() == 6);
    CHECK(std::stoll(row[2]) == total);
    CHECK(std::stoll(row[3]) == hit);
    const double mean = std::stod(row[4]);
    CHECK(mean == doctest::Approx(static_cast<double>(total) / 3.0)
                      .epsilon(1e-12));
  }
}

TEST_CASE("threshold table matches direct evaluation") {
  const fs::path dir = fresh_dir("threshold");
  const std::string cfg = std::string("{\"seed\": 7, ") + kBernModel +
                          R"(, "threshold": {"eps": 0.5, "n_max": 64}})";
  write_text(dir / "cfg.json", cfg);
  auto r = run_cli("threshold --config " + (dir / "cfg.json").string() +
                       " --out " + (dir / "out").string(),
                   dir);
  REQUIRE(r.exit_code == 0);

  GibbsModel m = build_gibbs(BernoulliSpec({0.8, 0.2}));
  auto rows = parse_csv(read_text(dir / "out" / "threshold.csv"));
  REQUIRE(rows.size() == 65);
  REQUIRE(rows[0].size() == 3);
  CHECK(rows[1][0] == "1");
  CHECK(rows[1][1] == "0");
  CHECK(rows[1][2] == "0");
  for (std::size_t i = 1; i < rows.size(); ++i) {
    const std::int64_t n = std::stoll(rows[i][0]);
    const std::int64_t lo = std::stoll(rows[i][1]);
    const std::int64_t hi = std::stoll(rows[i][2]);
    CHECK(lo == psi_minus_value(n, m.h_mu, m.rho_mu, 0.5));
    CHECK(hi == psi_plus_value(n, m.h_mu, m.rho_mu, 0.5));
    CHECK(lo <= hi);
  }
  CHECK(rows[16][1] == "5");
  CHECK(rows[16][2] == "6");
}

TEST_CASE("gibbs reports the closed-form constants") {
  const fs::path dir = fresh_dir("gibbs");
  write_text(dir / "bern.json",
             std::string("{\"seed\": 1, ") + kBernModel + "}");
  auto r = run_cli("gibbs --config " + (dir / "bern.json").string() +
                       " --out " + (dir / "b").string(),
                   dir);
  REQUIRE(r.exit_code == 0);
  auto j = nlohmann::json::parse(read_text(dir / "b" / "gibbs.json"));
  const double p = 0.8, q = 0.2;
  const double h = -(p * std::log(p) + q * std::log(q));
  const double rho = p * q * std::pow(std::log(p) - std::log(q), 2.0);
  CHECK(j.at("model").at("h_mu").get<double>() ==
        doctest::Approx(h).epsilon(1e-9));
  CHECK(j.at("model").at("rho_mu").get<double>() ==
        doctest::Approx(rho).epsilon(1e-9));

  // Maximal entropy makes the cylinder-measure fluctuations a coboundary,
  // so the run flags the degeneracy after writing the report.
  write_text(dir / "golden.json", R"({"seed": 1, "model": {"sft": {
      "adjacency": [[1, 1], [1, 0]],
      "potential": {"depth": 1, "constant": 0.0}}}})");
  r = run_cli("gibbs --config " + (dir / "golden.json").string() + " --out " +
                  (dir / "g").string(),
              dir);
  REQUIRE(r.exit_code == 4);
  auto gj = nlohmann::json::parse(read_text(dir / "g" / "gibbs.json"));
  const double phi = (1.0 + std::sqrt(5.0)) / 2.0;
  CHECK(gj.at("model").at("pressure").get<double>() ==
        doctest::Approx(std::log(phi)).epsilon(1e-12));
  CHECK(gj.at("model").at("cohomologous_to_constant").get<bool>());
}

TEST_CASE("failures map to distinct exit codes with one-line json reasons") {
  const fs::path dir = fresh_dir("errors");

  write_text(dir / "bad.json", "this is not json\n");
  auto r = run_cli("gibbs --config " + (dir / "bad.json").string() + " --out " +
                       (dir / "o1").string(),
                   dir);
  CHECK(r.exit_code == 2);
  auto e = nlohmann::json::parse(r.err);
  CHECK(e.at("error").get<std::string>() == "config");

  write_text(dir / "period2.json", R"({"seed": 1, "model": {"sft": {
      "adjacency": [[0, 1], [1, 0]],
      "potential": {"depth": 1, "constant": 0.0}}}})");
  r = run_cli("gibbs --config " + (dir / "period2.json").string() + " --out " +
                  (dir / "o2").string(),
              dir);
  CHECK(r.exit_code == 3);
  e = nlohmann::json::parse(r.err);
  CHECK(e.at("error").get<std::string>() == "not_mixing");

  write_text(dir / "uniform.json",
             R"({"seed": 1, "model": {"bernoulli": {"p": [0.5, 0.5]}},
                 "rate": {"kind": "table", "values": [1, 1, 1, 1]},
                 "experiment": {"length": 4, "trials": 2}})");
  r = run_cli("recur --config " + (dir / "uniform.json").string() + " --out " +
                  (dir / "o3").string(),
              dir);
  CHECK(r.exit_code == 4);
  e = nlohmann::json::parse(r.err);
  CHECK(e.at("error").get<std::string>() == "degenerate_model");

  // degenerate gibbs still writes its report before failing
  r = run_cli("gibbs --config " + (dir / "uniform.json").string() + " --out " +
                  (dir / "o4").string(),
              dir);
  CHECK(r.exit_code == 4);
  auto dj = nlohmann::json::parse(read_text(dir / "o4" / "gibbs.json"));
  CHECK(dj.at("model").at("cohomologous_to_constant").get<bool>());

  write_text(dir / "touching.json",
             R"({"seed": 1, "rate": {"kind": "table", "values": [1, 1]},
                 "ifs": {"dimension": 1, "r": 0.5,
                         "maps": [{"sign": 1, "t": 0.0}, {"sign": 1, "t": 0.5}],
                         "word": [1, 2]}})");
  r = run_cli("ifs --config " + (dir / "touching.json").string() + " --out " +
                  (dir / "o5").string(),
              dir);
  CHECK(r.exit_code == 5);
  e = nlohmann::json::parse(r.err);
  CHECK(e.at("error").get<std::string>() == "cannot_certify");

  write_text(dir / "badrate.json",
             std::string("{\"seed\": 1, ") + kBernModel +
                 R"(, "rate": {"kind": "mystery"},
                     "experiment": {"length": 4, "trials": 1}})");
  r = run_cli("recur --config " + (dir / "badrate.json").string() + " --out " +
                  (dir / "o6").string(),
              dir);
  CHECK(r.exit_code == 2);
  e = nlohmann::json::parse(r.err);
  CHECK(e.at("error").get<std::string>() == "config");
}

TEST_CASE("ifs command certifies middle thirds and brackets recurrence") {
  const fs::path dir = fresh_dir("ifs");
  write_text(dir / "cfg.json", R"({"seed": 5,
      "rate": {"kind": "table",
               "values": [1, 1, 2, 2, 2, 3, 3, 3, 3, 3, 4, 4]},
      "ifs": {"dimension": 1, "r": 0.3333333333333333,
              "maps": [{"sign": 1, "t": 0.0},
                       {"sign": 1, "t": 0.6666666666666666}],
              "word": [1, 2, 1, 1, 2, 1, 1, 2, 1, 1, 2, 2],
              "range": [1, 12]}})");
  auto r = run_cli("ifs --config " + (dir / "cfg.json").string() + " --out " +
                       (dir / "out").string(),
                   dir);
  REQUIRE(r.exit_code == 0);

  auto j = nlohmann::json::parse(read_text(dir / "out" / "ifs.json"));
  CHECK(j.at("ifs").at("N").get<int>() == 2);
  const double sep = j.at("ifs").at("sep_lower").get<double>();
  CHECK(sep > 1.0 / 3.0 - 1e-9);
  CHECK(sep <= 1.0 / 3.0);
  CHECK(j.at("ifs").at("diam_lower").get<double>() <= 1.0);
  CHECK(j.at("ifs").at("diam_upper").get<double>() >= 1.0);
  CHECK(j.at("containment_violations").get<int>() == 0);

  const std::vector<std::int64_t> table = {1, 1, 2, 2, 2, 3, 3, 3, 3, 3, 4, 4};
  auto rows = parse_csv(read_text(dir / "out" / "ifs_sandwich.csv"));
  REQUIRE(rows.size() == 13);
  for (std::size_t i = 1; i < rows.size(); ++i) {
    REQUIRE(rows[i].size() == 7);
    const int cert = std::stoi(rows[i][2]);
    const int poss = std::stoi(rows[i][4]);
    if (cert == 1) CHECK(poss == 1);
    const std::int64_t rp = std::stoll(rows[i][1]);
    const std::int64_t rm = std::stoll(rows[i][3]);
    CHECK(rp == table[i - 1] + 2);
    CHECK(rm == std::max<std::int64_t>(table[i - 1] - 2, 0));
  }
}

TEST_CASE("scalar reports are deterministic and embed their config") {
  const fs::path dir = fresh_dir("scalar");
  const std::string series_cfg = std::string("{\"seed\": 11, ") + kBernModel +
                                 R"(, "rate": {"kind": "psi_plus", "eps": 0.5},
                                     "series": {"eps": 0.5, "N": 10000}})";
  write_text(dir / "series.json", series_cfg);
  const std::string cx_cfg = std::string("{\"seed\": 11, ") + kBernModel +
                             R"(, "counterexample": {"g": "sqrt_loglog",
                                                     "horizon": 140}})";
  write_text(dir / "cx.json", cx_cfg);

  for (const char* sub : {"series", "counterexample"}) {
    const std::string cfg_file =
        (dir / (std::string(sub) == "series" ? "series.json" : "cx.json"))
            .string();
    auto r1 = run_cli(std::string(sub) + " --config " + cfg_file + " --out " +
                          (dir / (std::string(sub) + "_a")).string(),
                      dir);
    auto r2 = run_cli(std::string(sub) + " --config " + cfg_file + " --out " +
                          (dir / (std::string(sub) + "_b")).string(),
                      dir);
    CHECK(r1.exit_code == 0);
    CHECK(r2.exit_code == 0);
  }
  for (const char* f : {"series.json", "series.csv"}) {
    const bool same = read_text(dir / "series_a" / f) ==
                      read_text(dir / "series_b" / f);
    CHECK(same);
  }
  for (const char* f : {"counterexample.json", "counterexample_counts.csv",
                        "counterexample_trace.csv"}) {
    const bool same = read_text(dir / "counterexample_a" / f) ==
                      read_text(dir / "counterexample_b" / f);
    CHECK(same);
  }

  auto sj = nlohmann::json::parse(read_text(dir / "series_a" / "series.json"));
  CHECK(sj.at("config").at("series").at("N").get<int>() == 10000);

  // exact preimage counts at the small end of the constructed rate
  auto counts =
      parse_csv(read_text(dir / "counterexample_a" / "counterexample_counts.csv"));
  REQUIRE(counts.size() >= 31);
  CHECK(counts[1][3] == "1");   // a_1
  CHECK(counts[2][3] == "0");   // a_2
  CHECK(counts[23][3] == "1");  // a_23
  CHECK(counts[30][3] == "9");  // a_30
}
