#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "cli.hpp"
#include "doctest.h"
#include "dyadcov/csv.hpp"
#include "dyadcov/error.hpp"
#include "json.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct Outcome {
  int code;
  std::string out;
  std::string err;
};

Outcome invoke(std::vector<std::string> args) {
  args.insert(args.begin(), "dyadcov");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = dyadcov::cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

fs::path tmpdir() {
  fs::path dir = DYADCOV_TMPDIR;
  fs::create_directories(dir);
  return dir;
}

// Complete array on n nodes with y = 1 + 2 x + noise_scale * e.
struct Files {
  std::string data;
  std::string order;
};

Files write_dataset(const std::string& stem, int n, double noise_scale, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> z;
  const auto dir = tmpdir();
  Files f{(dir / (stem + "_dyads.csv")).string(), (dir / (stem + "_order.csv")).string()};
  std::ofstream d(f.data), o(f.order);
  d.precision(17);
  d << "node_i,node_j,y,x\n";
  for (int i = 1; i <= n; ++i)
    for (int j = i + 1; j <= n; ++j) {
      const double x = z(rng);
      d << "c" << i << ",c" << j << "," << 1.0 + 2.0 * x + noise_scale * z(rng) << "," << x
        << "\n";
    }
  o << "node,order_value\n";
  // Listed out of order on purpose; the ordering comes from the value.
  for (int i = n; i >= 1; --i) o << "c" << i << "," << i * 0.5 << "\n";
  return f;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("fit on a near-noiseless dataset rejects the zero slope") {
  const auto f = write_dataset("noiseless", 20, 1e-6, 11);
  const std::vector<std::string> base{"fit", "--data", f.data, "--order", f.order,
                                      "--contrast", "x", "--estimators", "all"};
  SUBCASE("with the PSD fix every estimator rejects") {
    auto args = base;
    args.push_back("--psd-fix");
    const auto r = invoke(args);
    REQUIRE(r.code == 0);
    const auto doc = json::parse(r.out);
    CHECK(doc["schema"] == "dyadcov/1");
    CHECK(doc["dataset"]["n"] == 20);
    CHECK(doc["dataset"]["M"] == 190);
    CHECK(doc["dataset"]["complete"] == true);
    REQUIRE(doc["estimators"].size() == 10);
    for (const auto& e : doc["estimators"]) {
      CAPTURE(e["kind"].get<std::string>());
      CHECK(e["beta"][1].get<double>() == doctest::Approx(2.0).epsilon(1e-5));
      REQUIRE(e["tests"][0].contains("p"));
      CHECK(e["tests"][0]["p"].get<double>() < 1e-6);
    }
  }
  SUBCASE("without it an indefinite estimate is reported, not fatal") {
    const auto r = invoke(base);
    REQUIRE(r.code == 0);
    for (const auto& e : json::parse(r.out)["estimators"]) {
      const auto& t = e["tests"][0];
      if (t.contains("p"))
        CHECK(t["p"].get<double>() < 1e-6);
      else
        CHECK(t["error"] == "NonpositiveVariance");
    }
  }
}

TEST_CASE("bandwidth one makes DN agree with Dyadic") {
  const auto f = write_dataset("bw1", 15, 1.0, 12);
  const auto r = invoke({"fit", "--data", f.data, "--order", f.order, "--contrast", "2",
                         "--bandwidth", "1", "--estimators", "Dyadic,DNDyadic"});
  REQUIRE(r.code == 0);
  const auto doc = json::parse(r.out);
  CHECK(doc["bandwidth"]["source"] == "override");
  const double dyadic = doc["estimators"][0]["tests"][0]["se"];
  const double dn = doc["estimators"][1]["tests"][0]["se"];
  CHECK(dn == doctest::Approx(dyadic).epsilon(1e-12));
}

TEST_CASE("all estimators and byte-identical output") {
  const auto f = write_dataset("all", 12, 1.0, 13);
  const std::vector<std::string> args{"fit", "--data", f.data, "--order", f.order,
                                      "--contrast", "x", "--contrast", "(intercept)",
                                      "--estimators", "all"};
  const auto a = invoke(args);
  const auto b = invoke(args);
  REQUIRE(a.code == 0);
  CHECK(a.out == b.out);
  const auto doc = json::parse(a.out);
  REQUIRE(doc["estimators"].size() == 10);
  CHECK(doc["estimators"][0]["tests"].size() == 2);
}

TEST_CASE("fixed effects add node columns") {
  const auto f = write_dataset("fe", 8, 1.0, 14);
  const auto r = invoke({"fit", "--data", f.data, "--order", f.order, "--contrast", "x",
                         "--fixed-effects", "--estimators", "White"});
  REQUIRE(r.code == 0);
  const auto doc = json::parse(r.out);
  CHECK(doc["dataset"]["K"] == 2 + 7);
  CHECK(doc["columns"][2] == "fe:c2");
}

TEST_CASE("clamped bandwidth warns") {
  const auto f = write_dataset("clamp", 6, 1.0, 15);
  const auto r = invoke({"fit", "--data", f.data, "--order", f.order, "--contrast", "x",
                         "--bandwidth", "40", "--estimators", "DNDyadic"});
  REQUIRE(r.code == 0);
  CHECK(r.err.find("clamped") != std::string::npos);
  CHECK(json::parse(r.out)["estimators"][0]["L"] == 5);
}

TEST_CASE("usage errors exit with 2") {
  const auto f = write_dataset("usage", 6, 1.0, 16);
  CHECK(invoke({}).code == 2);
  CHECK(invoke({"fit", "--data", f.data, "--order", f.order}).code == 2);
  CHECK(invoke({"fit", "--data", f.data, "--order", f.order, "--contrast", "nope"}).code == 2);
  CHECK(invoke({"fit", "--data", f.data, "--order", f.order, "--contrast", "x",
                "--estimators", "Bogus"})
            .code == 2);
  CHECK(invoke({"fit", "--data", "/nonexistent.csv", "--order", f.order, "--contrast", "x"})
            .code == 2);
  CHECK(invoke({"simulate", "--reps", "0"}).code == 2);
  CHECK(invoke({"simulate", "--reps", "2", "--sweep", "rho"}).code == 2);
  CHECK(invoke({"simulate", "--reps", "2", "--sweep", "nope", "--values", "1"}).code == 2);
  CHECK(invoke({"--help"}).code == 0);
}

TEST_CASE("malformed dyad rows report the line") {
  const auto dir = tmpdir();
  const auto data = (dir / "bad_dyads.csv").string();
  const auto order = (dir / "bad_order.csv").string();
  {
    std::ofstream d(data), o(order);
    d << "node_i,node_j,y,x\na,b,1,2\na,c,1\n";
    o << "node,order_value\na,1\nb,2\nc,3\n";
  }
  const auto r = invoke({"fit", "--data", data, "--order", order, "--contrast", "x"});
  CHECK(r.code == 2);
  CHECK(r.err.find(":3:") != std::string::npos);
}

TEST_CASE("unknown node in the dyad file") {
  const auto dir = tmpdir();
  const auto data = (dir / "unk_dyads.csv").string();
  const auto order = (dir / "unk_order.csv").string();
  {
    std::ofstream d(data), o(order);
    d << "node_i,node_j,y,x\na,b,1,2\na,z,1,3\nb,a,2,2\n";
    o << "node,order_value\na,1\nb,2\n";
  }
  const auto r = invoke({"fit", "--data", data, "--order", order, "--contrast", "x"});
  CHECK(r.code == 2);
  CHECK(r.err.find("UnknownLabel") != std::string::npos);
}

TEST_CASE("bandwidth command") {
  SUBCASE("n = 50 defaults to h_max = 4") {
    const auto f = write_dataset("bw50", 50, 1.0, 17);
    const auto r = invoke({"bandwidth", "--data", f.data, "--order", f.order});
    REQUIRE(r.code == 0);
    const auto doc = json::parse(r.out);
    CHECK(doc["schema"] == "dyadcov/1");
    CHECK(doc["h_max"] == 4);
    CHECK(doc["L"] == 4);
    CHECK(doc["defaulted"] == true);
  }
  SUBCASE("n = 156 has h_max = 7") {
    const auto f = write_dataset("bw156", 156, 1.0, 18);
    const auto r = invoke({"bandwidth", "--data", f.data, "--order", f.order});
    REQUIRE(r.code == 0);
    const auto doc = json::parse(r.out);
    CHECK(doc["h_max"] == 7);
    CHECK(doc["rho_max"].size() == 7);
  }
}

TEST_CASE("simulate writes deterministic CSV") {
  const std::vector<std::string> args{"simulate", "--n", "10", "--k", "2", "--reps", "20",
                                      "--seed", "5", "--rho", "0.5", "--estimators",
                                      "White,Dyadic,JK"};
  const auto a = invoke(args);
  const auto b = invoke(args);
  REQUIRE(a.code == 0);
  CHECK(a.out == b.out);
  std::istringstream lines(a.out);
  std::string header;
  std::getline(lines, header);
  CHECK(header == "value,estimator,rejection,failures,mean_L");
  int rows = 0;
  for (std::string line; std::getline(lines, line);) ++rows;
  CHECK(rows == 3);

  const auto out = (tmpdir() / "sweep.csv").string();
  const auto s = invoke({"simulate", "--n", "8", "--k", "2", "--reps", "5", "--sweep", "omega",
                         "--values", "0,1", "--estimators", "White", "--out", out});
  REQUIRE(s.code == 0);
  CHECK(s.out.empty());
  const auto text = slurp(out);
  CHECK(text.find("\n0,White,") != std::string::npos);
  CHECK(text.find("\n1,White,") != std::string::npos);
}

TEST_CASE("csv parser") {
  using dyadcov::Error;
  using dyadcov::ErrorCode;
  SUBCASE("quotes, whitespace, CRLF and BOM") {
    std::istringstream in("\xEF\xBB\xBFnode_i,node_j,y,x1\r\n\"a\", b ,1.5,2e-1\r\n\n");
    const auto t = dyadcov::read_dyad_csv(in);
    REQUIRE(t.rows.size() == 1);
    CHECK(t.regressors == std::vector<std::string>{"x1"});
    CHECK(t.rows[0].label_i == "a");
    CHECK(t.rows[0].label_j == "b");
    CHECK(t.rows[0].y == 1.5);
    CHECK(t.rows[0].x[0] == 0.2);
  }
  SUBCASE("bad header") {
    std::istringstream in("i,j,y\n");
    CHECK_THROWS_AS(dyadcov::read_dyad_csv(in), Error);
  }
  SUBCASE("non-numeric value names the line") {
    std::istringstream in("node_i,node_j,y\na,b,1\na,c,oops\n");
    try {
      dyadcov::read_dyad_csv(in, "f.csv");
      FAIL("expected a parse error");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::Parse);
      CHECK(std::string(e.what()).find("f.csv:3:") != std::string::npos);
    }
  }
  SUBCASE("order file") {
    std::istringstream in("node,order_value\nx,2\ny,-1.5\n");
    const auto o = dyadcov::read_order_csv(in);
    REQUIRE(o.size() == 2);
    CHECK(o[1].label == "y");
    CHECK(o[1].value == -1.5);
  }
}
