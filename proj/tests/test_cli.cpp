#include <algorithm>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "json.hpp"
#include "tmx/cli.hpp"
#include "tmx/expansion.hpp"

using namespace tmx;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  const int code = run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

std::vector<nlohmann::json> lines(const std::string& s) {
  std::vector<nlohmann::json> v;
  std::istringstream in(s);
  for (std::string line; std::getline(in, line);) v.push_back(nlohmann::json::parse(line));
  return v;
}

const std::vector<std::string> kCoeff{"coeff",  "--n-left", "1.4142135", "--omega", "1.7320508",
                                      "--kpar", "1.4142135", "--side",   "L",       "--pol",
                                      "TE"};

}  // namespace

TEST_SUITE("cli") {
  TEST_CASE("coeff record") {
    const Run r = run(kCoeff);
    REQUIRE(r.code == 0);
    const auto recs = lines(r.out);
    REQUIRE(recs.size() == 1);
    CHECK(recs[0]["schema"] == 1);
    CHECK(recs[0]["a_r"][0].get<double>() == doctest::Approx(1.0 / 3.0).epsilon(1e-6));
    CHECK(recs[0]["a_t"][0].get<double>() == doctest::Approx(4.0 / 3.0).epsilon(1e-6));
    CHECK(recs[0]["continuity_residual"].get<double>() <= 1e-13);
  }

  TEST_CASE("evanescent coeff has complex K_t and unimodular reflection") {
    const Run r = run({"coeff", "--n-left", "1.4142135623730951", "--omega", "1", "--kpar", "1.224744871391589"});
    REQUIRE(r.code == 0);
    const auto recs = lines(r.out);
    REQUIRE(recs.size() == 2);
    for (const auto& rec : recs) {
      CHECK(rec["evanescent"] == true);
      CHECK(rec["K_t"][1].get<double>() > 0.0);
      CHECK(rec["abs_r"].get<double>() == doctest::Approx(1.0).epsilon(1e-14));
    }
  }

  TEST_CASE("usage errors exit 2") {
    const Run missing = run({"coeff", "--n-left", "1.5", "--omega", "1"});
    CHECK(missing.code == 2);
    CHECK(missing.err.find("--kpar") != std::string::npos);
    CHECK(run({}).code == 2);
    CHECK(run({"frobnicate"}).code == 2);
    CHECK(run({"coeff", "--n-left", "1.5", "--omega", "1", "--kpar", "2"}).code == 2);
    CHECK(run({"verify-identities", "--samples", "0"}).code == 2);
    CHECK(run({"verify-orthogonality", "--classes", "bogus"}).code == 2);
    CHECK(run({"coeff", "--config", "/nonexistent/cfg.json"}).code == 2);
  }

  TEST_CASE("help exits 0") { CHECK(run({"--help"}).code == 0); }

  TEST_CASE("csv sample along an evanescent z line") {
    const Run r = run({"sample", "--n-left", "1.4142135623730951", "--omega", "1", "--kpar", "1.224744871391589",
                       "--z", "0", "4", "9"});
    REQUIRE(r.code == 0);
    std::istringstream in(r.out);
    std::string header;
    std::getline(in, header);
    CHECK(header.rfind("schema,kind,x,y,z,Ex_re", 0) == 0);
    std::vector<std::string> cols;
    std::stringstream hs(header);
    for (std::string c; std::getline(hs, c, ',');) cols.push_back(c);
    const auto abs_col = std::find(cols.begin(), cols.end(), "abs_E") - cols.begin();
    double prev = 1e300;
    int rows = 0;
    for (std::string line; std::getline(in, line); ++rows) {
      std::stringstream ls(line);
      std::string cell;
      for (long i = 0; i <= abs_col; ++i) std::getline(ls, cell, ',');
      const double v = std::stod(cell);
      CHECK(v < prev);
      prev = v;
    }
    CHECK(rows == 9);
  }

  TEST_CASE("identity verification and the literal rule") {
    const Run ok = run({"verify-identities", "--samples", "300"});
    CHECK(ok.code == 0);
    CHECK(lines(ok.out).size() == 8);
    const Run bad = run({"verify-identities", "--samples", "300", "--use-paper-eq2"});
    CHECK(bad.code == 1);
    std::vector<std::string> failed;
    for (const auto& rec : lines(bad.out)) {
      if (rec["verdict"] == "fail") failed.push_back(rec["name"]);
    }
    CHECK(failed == std::vector<std::string>{"te_bracket", "surface_identity"});
  }

  TEST_CASE("orthogonality subset") {
    const Run r = run({"verify-orthogonality", "--classes", "te-counter,cross-magnetic", "--pairs", "2"});
    CHECK(r.code == 0);
    const auto recs = lines(r.out);
    REQUIRE(!recs.empty());
    CHECK(recs.back()["kind"] == "summary");
    CHECK(recs.back()["failed"] == 0);
  }

  TEST_CASE("config file merges under explicit flags") {
    const std::string path = std::string(TMX_TEST_DATA_DIR) + "/cli_config.json";
    std::ofstream(path) << R"({"n-left": 1.4142135623730951, "omega": 5.0, "kpar": [1.4142135623730951], "pol": "TE"})";
    const Run r = run({"coeff", "--config", path, "--omega", "1.7320508075688772"});
    REQUIRE(r.code == 0);
    const auto recs = lines(r.out);
    REQUIRE(recs.size() == 1);
    CHECK(recs[0]["K_i"].get<double>() == doctest::Approx(2.0));
  }

  TEST_CASE("si frequencies") {
    const Run r = run({"coeff", "--n-left", "1.5", "--omega", "299792458", "--kpar", "0.5", "--pol", "TE", "--si"});
    REQUIRE(r.code == 0);
    CHECK(lines(r.out)[0]["omega"].get<double>() == doctest::Approx(1.0));
  }

  TEST_CASE("sweep and csv coefficients") {
    const Run r = run({"sweep", "--n-left", "1.5", "--omega", "1", "--steps", "5", "--pol", "TM", "--format", "csv"});
    REQUIRE(r.code == 0);
    std::istringstream in(r.out);
    int n = 0;
    for (std::string line; std::getline(in, line);) ++n;
    CHECK(n == 6);
  }

  TEST_CASE("energy box too small") {
    const Run r = run({"energy", "--box", "6"});
    CHECK(r.code == 1);
    CHECK(r.out.find("TailTooLarge") != std::string::npos);
  }

  TEST_CASE("energy from a spectrum file and the literal labeling") {
    const std::string path = std::string(TMX_TEST_DATA_DIR) + "/cli_spectrum.json";
    GaussianPacketConfig c;
    c.box_half_extent = 35.0;
    std::ofstream(path) << nlohmann::json(gaussian_packet(c)).dump();
    const Run ok = run({"energy", "--spectrum", path});
    CHECK(ok.code == 0);
    CHECK(lines(ok.out).back()["verdict"] == "pass");
    CHECK(run({"energy", "--spectrum", path, "--labeling", "literal"}).code == 2);
  }

  TEST_CASE("deterministic output") {
    const std::vector<std::string> a{"verify-identities", "--samples", "200", "--seed", "7"};
    CHECK(run(a).out == run(a).out);
    CHECK(run(kCoeff).out == run(kCoeff).out);
  }
}
