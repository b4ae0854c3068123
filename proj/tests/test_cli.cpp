#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "mqdecay/cli.hpp"
#include "mqdecay/fitting.hpp"
#include "mqdecay/io.hpp"
#include "mqdecay/model.hpp"

using namespace mqdecay;

namespace {

struct Outcome {
  int code = 0;
  std::string out;
  std::string err;
};

Outcome invoke(std::vector<std::string> args) {
  args.insert(args.begin(), "mqdecay");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

io::CsvTable table_of(const std::string& text) {
  std::istringstream in(text);
  return io::read_csv(in);
}

std::filesystem::path scratch(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / "mqdecay_cli_test";
  std::filesystem::create_directories(dir);
  return dir / name;
}

void write_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream(path) << text;
}

}  // namespace

TEST_CASE("counts") {
  const Outcome r = invoke({"counts", "--n", "3", "--M", "1"});
  REQUIRE(r.code == cli::kExitOk);
  const auto t = table_of(r.out);
  CHECK(t.header == std::vector<std::string>{"n", "M", "f", "exact", "asymptotic"});
  REQUIRE(t.rows.size() == 2);
  CHECK(t.rows[0][2] == "1");
  CHECK(t.rows[0][3] == "12");
  CHECK(t.rows[1][3] == "3");

  const Outcome zero = invoke({"counts", "--n", "4", "--M", "0", "--f", "0"});
  REQUIRE(zero.code == cli::kExitOk);
  CHECK(table_of(zero.out).rows.at(0)[4] == "nan");

  const Outcome all = invoke({"counts", "--n", "2"});
  CHECK(table_of(all.out).rows.size() == 4);  // (M,f) = (0,0),(0,2),(1,1),(2,2)
}

TEST_CASE("simulate with synthetic couplings and bath") {
  const Outcome two = invoke({"simulate", "--synth", "constant", "--n", "2", "--b", "3",
                              "--M", "2", "--t-max", "5", "--steps", "10"});
  REQUIRE(two.code == cli::kExitOk);
  const auto t = table_of(two.out);
  CHECK(t.header == std::vector<std::string>{"t", "S"});
  CHECK(t.rows.size() == 11);
  for (const auto& row : t.rows) CHECK(std::abs(io::parse_number(row[1]) - 1.0) <= 1e-12);

  const Outcome bath = invoke({"simulate", "--bath", "uncorrelated", "--n", "2",
                               "--gamma-alpha", "1", "--t-max", "1", "--steps", "1"});
  REQUIRE(bath.code == cli::kExitOk);
  const double expected = (4.0 + 2.0 * std::exp(-2.0)) / 6.0;
  CHECK(io::parse_number(table_of(bath.out).rows[1][1]) == doctest::Approx(expected).epsilon(1e-14));
}

TEST_CASE("simulate from files") {
  const auto couplings = scratch("couplings.json");
  write_file(couplings, io::coupling_set_to_json(synth_constant(3, 1.0)));
  const Outcome r = invoke({"simulate", "--couplings", couplings.string(), "--M", "2",
                            "--t-max", "0.7", "--steps", "1"});
  REQUIRE(r.code == cli::kExitOk);
  CHECK(io::parse_number(table_of(r.out).rows[1][1]) ==
        doctest::Approx(0.16996714290024104).epsilon(1e-12));

  const auto geometry = scratch("pair.xyz");
  write_file(geometry, "2\n0 0 0\n0 0 2e-10\n");
  const Outcome g = invoke({"simulate", "--geometry", geometry.string(), "--t-max", "1e-4",
                            "--steps", "4"});
  REQUIRE(g.code == cli::kExitOk);
  for (const auto& row : table_of(g.out).rows) CHECK(std::abs(io::parse_number(row[1]) - 1.0) <= 1e-12);

  const auto broken = scratch("broken.json");
  write_file(broken, "{not json");
  CHECK(invoke({"simulate", "--couplings", broken.string(), "--t-max", "1"}).code == cli::kExitUsage);
}

TEST_CASE("simulate enforces the oracle cap") {
  const Outcome r = invoke({"simulate", "--synth", "constant", "--n", "16", "--b", "1",
                            "--t-max", "1", "--steps", "1"});
  CHECK(r.code == cli::kExitDomain);
  CHECK(r.err.find("error") != std::string::npos);
}

TEST_CASE("model") {
  const Outcome total = invoke({"model", "--n", "116", "--p", "0.33", "--m2", "1.6e9",
                                "--t-max", "2e-5", "--steps", "4"});
  REQUIRE(total.code == cli::kExitOk);
  const auto t = table_of(total.out);
  REQUIRE(t.rows.size() == 5);
  const ModelParams params = ModelParams::from_second_moment(116, 0.33, 1.6e9);
  CHECK(io::parse_number(t.rows[4][1]) == s_total(params, 2e-5));

  const Outcome wide = invoke({"model", "--n", "116", "--p", "0.33", "--m2", "1.6e9",
                               "--M", "0", "4", "--t-max", "2e-5", "--steps", "2"});
  REQUIRE(wide.code == cli::kExitOk);
  CHECK(table_of(wide.out).header == std::vector<std::string>{"t", "S_M0", "S_M4"});

  // --alpha and --m2 are alternatives.
  const Outcome alpha = invoke({"model", "--n", "116", "--p", "0.33", "--alpha",
                                io::format_number(1.6e9 / 9.0), "--t-max", "2e-5", "--steps", "4"});
  CHECK(alpha.out == total.out);
}

TEST_CASE("rates and scaling") {
  const Outcome r = invoke({"rates", "--n", "116", "--p", "1", "--alpha", "4", "--M", "0", "3"});
  REQUIRE(r.code == cli::kExitOk);
  const auto t = table_of(r.out);
  CHECK(t.header == std::vector<std::string>{"M", "rate", "status"});
  CHECK(t.rows[0][2] == "no_crossing");
  CHECK(io::parse_number(t.rows[1][1]) == doctest::Approx(6.0).epsilon(1e-9));
  CHECK(t.rows[1][2] == "ok");

  const Outcome s = invoke({"scaling", "--n", "26", "41", "71", "116", "--p", "0", "--m2", "1.6e9"});
  REQUIRE(s.code == cli::kExitOk);
  const auto st = table_of(s.out);
  CHECK(st.rows.size() == 4);
  CHECK(io::parse_number(st.rows[0][2]) == doctest::Approx(0.5).epsilon(1e-6));
}

TEST_CASE("fit end to end, with pooling and output file") {
  std::vector<RatePoint> points;
  for (auto [n, p, M2] : {std::tuple{26, 0.27, 1.5e9}, std::tuple{41, 0.28, 1.65e9}}) {
    for (int M : {2, 4, 8, 12, 16}) {
      const double rate = model_rate(n, p, M2, M);
      points.push_back({n, M, rate, 0.01 * rate});
    }
  }
  const auto input = scratch("rates.csv");
  {
    std::ofstream out(input);
    io::write_rate_csv(out, points);
  }
  const auto output = scratch("fit.json");
  std::filesystem::remove(output);
  const Outcome r = invoke({"fit", "--input", input.string(), "--pool-m2", "-o", output.string()});
  REQUIRE(r.code == cli::kExitOk);
  CHECK(r.out.empty());
  std::ifstream in(output);
  const std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  const auto fits = io::fit_results_from_json(text);
  REQUIRE(fits.size() == 2);
  CHECK(fits[0].p == doctest::Approx(0.27).epsilon(1e-4));
  CHECK(fits[1].M2 == doctest::Approx(1.65e9).epsilon(1e-4));
  const auto doc = nlohmann::json::parse(text);
  CHECK(doc[0]["M2_pooled"].get<double>() == doctest::Approx(1.575e9).epsilon(1e-4));
  CHECK(doc[1].contains("M2_pooled_sd"));
}

TEST_CASE("config file with flag precedence") {
  const auto config = scratch("model.toml");
  write_file(config, "[model]\nn = 116\np = 0.33\nm2 = 1.6e9\nt-max = 2e-5\nsteps = 4\n");
  const Outcome from_file = invoke({"--config", config.string(), "model"});
  REQUIRE(from_file.code == cli::kExitOk);
  const Outcome flags = invoke({"model", "--n", "116", "--p", "0.33", "--m2", "1.6e9",
                                "--t-max", "2e-5", "--steps", "4"});
  CHECK(from_file.out == flags.out);
  const Outcome override = invoke({"--config", config.string(), "model", "--steps", "2"});
  REQUIRE(override.code == cli::kExitOk);
  CHECK(table_of(override.out).rows.size() == 3);
}

TEST_CASE("usage errors map to exit status 2") {
  CHECK(invoke({}).code == cli::kExitUsage);
  CHECK(invoke({"bogus"}).code == cli::kExitUsage);
  CHECK(invoke({"model", "--n", "10", "--m2", "1e9", "--t-max", "1"}).code == cli::kExitUsage);
  CHECK(invoke({"model", "--n", "10", "--p", "1.5", "--m2", "1e9", "--t-max", "1"}).code ==
        cli::kExitUsage);
  CHECK(invoke({"model", "--n", "10", "--p", "0.5", "--m2", "1e9", "--alpha", "1", "--t-max", "1"})
            .code == cli::kExitUsage);
  CHECK(invoke({"rates", "--n", "10", "--p", "0.5", "--m2", "1e9"}).code == cli::kExitUsage);
  CHECK(invoke({"scaling", "--n", "10", "20", "--p", "0.5", "--m2", "1e9"}).code == cli::kExitUsage);
  CHECK(invoke({"counts", "--n", "3", "--M", "5"}).code == cli::kExitUsage);
  CHECK(invoke({"simulate", "--synth", "constant", "--n", "3", "--t-max", "1"}).code ==
        cli::kExitUsage);
  CHECK(invoke({"simulate", "--synth", "constant", "--bath", "correlated", "--n", "3", "--b", "1",
                "--gamma-alpha", "1", "--t-max", "1"})
            .code == cli::kExitUsage);
  CHECK(invoke({"fit", "--input", "/nonexistent/rates.csv"}).code == cli::kExitUsage);
  const Outcome help = invoke({"--help"});
  CHECK(help.code == cli::kExitOk);
  CHECK(help.out.find("simulate") != std::string::npos);
}

TEST_CASE("worker count from the environment") {
  const auto args = std::vector<std::string>{"simulate", "--synth", "random", "--n", "8",
                                             "--magnitude", "1", "--seed", "3", "--t-max", "2",
                                             "--steps", "5"};
  const Outcome serial = invoke(args);
  REQUIRE(serial.code == cli::kExitOk);
  setenv(cli::kWorkersEnv, "3", 1);
  const Outcome threaded = invoke(args);
  setenv(cli::kWorkersEnv, "lots", 1);
  const Outcome bad = invoke(args);
  unsetenv(cli::kWorkersEnv);
  CHECK(threaded.out == serial.out);
  CHECK(bad.code == cli::kExitUsage);
}
