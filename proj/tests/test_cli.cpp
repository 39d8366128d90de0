#include "doctest.h"

#include <sys/wait.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "jnr/builtin.hpp"
#include "jnr/io.hpp"

using namespace jnr;

namespace {

struct Run {
  int code = -1;
  std::string out;
};

Run run(const std::string& args) {
  const std::string cmd = std::string(JNR_CLI_PATH) + " " + args + " 2>&1";
  Run r;
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  char buf[4096];
  size_t got;
  while ((got = fread(buf, 1, sizeof buf, pipe)) > 0) r.out.append(buf, got);
  const int status = pclose(pipe);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

Json run_json(const std::string& args, int expected_code = 0) {
  const Run r = run(args);
  CHECK(r.code == expected_code);
  return Json::parse(r.out);
}

std::string temp_file(const std::string& name, const std::string& content) {
  const auto path = std::filesystem::temp_directory_path() / ("jnr_test_" + name);
  std::ofstream(path) << content;
  return path.string();
}

std::vector<std::vector<double>> csv_rows(const std::string& text) {
  std::vector<std::vector<double>> rows;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#' || line[0] == 'u') continue;
    std::vector<double> row;
    std::istringstream cells(line);
    std::string cell;
    while (std::getline(cells, cell, ',')) row.push_back(std::stod(cell));
    rows.push_back(row);
  }
  return rows;
}

}  // namespace

TEST_CASE("charpoly of the builtins") {
  const Json cn = run_json("charpoly --builtin chien-nakazato");
  CHECK(cn["pretty"] == "x0^3 + x0^2*x3 - 2*x0*x1^2 - x0*x2^2 - x1^3 - x1^2*x3 + x1*x2^2");
  CHECK(cn["domain"] == "exact");
  CHECK(cn["seed"] == 1);

  const Json drop = run_json("charpoly --builtin drop");
  const PolyInput p = parse_poly_json(drop["polynomial"].dump());
  REQUIRE(p.exact.has_value());
  const ExactPoly plane = poly_from_terms(4, 1, {{{1, 0, 0, 0}, 1}, {{0, 1, 0, 0}, 2}});
  CHECK(*p.exact == plane * lorentz_quadric(4));

  const std::string zero = temp_file("zero.json", R"({"d":2,"n":2,"matrices":[[[0,0],[0,0]],[[0,0],[0,0]]]})");
  CHECK(run_json("charpoly --input " + zero)["pretty"] == "x0^2");
}

TEST_CASE("input errors map to exit codes") {
  const std::string broken = temp_file("broken.json", R"({"d":2,)");
  CHECK(run("charpoly --input " + broken).code == 2);
  CHECK(run("charpoly --no-such-flag").code == 2);

  const std::string nonherm =
      temp_file("nonherm.json", R"({"d":2,"n":2,"matrices":[[[1,2],[3,1]],[[0,0],[0,0]]]})");
  const Run r = run("charpoly --input " + nonherm);
  CHECK(r.code == 3);
  CHECK(r.out.find("entry (0,1)") != std::string::npos);

  const std::string shape = temp_file("shape.json", R"({"d":3,"n":2,"matrices":[[[1,0],[0,1]],[[0,0],[0,0]]]})");
  CHECK(run("trace --input " + shape).code == 4);

  CHECK(run("trace --builtin qubit-disk --trace-grid 7").code == 3);
  CHECK(run("charpoly --builtin nonsense").code == 3);
}

TEST_CASE("trace output") {
  const Run q = run("trace --builtin qubit-disk --trace-grid 360");
  CHECK(q.code == 0);
  CHECK(q.out.find("seed=1") != std::string::npos);
  const auto rows = csv_rows(q.out);
  REQUIRE(rows.size() == 720);
  for (const auto& row : rows) CHECK(std::abs(std::hypot(row[3], row[4]) - 1.0) <= 1e-9);

  const auto drop = csv_rows(run("trace --builtin drop --trace-grid 2000").out);
  CHECK(drop.size() == 6000);
  for (const auto& row : drop) {
    const double r = std::sqrt(row[4] * row[4] + row[5] * row[5] + row[6] * row[6]);
    const double apex = std::sqrt((row[4] - 2) * (row[4] - 2) + row[5] * row[5] + row[6] * row[6]);
    CHECK((std::abs(r - 1.0) <= 1e-9 || apex <= 1e-9));
  }

  const Run small = run("trace --builtin chien-nakazato --trace-grid 8");
  CHECK(small.code == 0);
  CHECK(csv_rows(small.out).size() <= 8 * 3);

  const Run svg = run("trace --builtin qubit-disk --trace-grid 64 --format svg");
  CHECK(svg.code == 0);
  CHECK(svg.out.find("<svg") != std::string::npos);
  CHECK(svg.out.find("seed=1") != std::string::npos);
}

TEST_CASE("verify") {
  const Json drop = run_json("verify --builtin drop");
  CHECK(drop["verdict"] == "pass");
  CHECK(drop["max_gap"].get<double>() <= 2e-3);
  CHECK(drop["state_inclusion"]["violations"] == 0);

  const Json cn = run_json("verify --builtin chien-nakazato");
  CHECK(cn["verdict"] == "pass");

  const Json coarse = run_json("verify --builtin drop --trace-grid 8", 1);
  CHECK(coarse["verdict"] == "fail");
  CHECK(coarse["max_gap"].get<double>() > coarse["tolerances"]["tol"].get<double>());

  const Json disk = run_json("verify --builtin qubit-disk");
  CHECK(disk["verdict"] == "pass");
  CHECK(disk["max_gap"].get<double>() <= 1e-6);
  CHECK(disk["planar_refinement"]["certified_gap_bound"].get<double>() <= 1e-7);
  const Json plain = run_json("verify --builtin qubit-disk --no-refine");
  CHECK_FALSE(plain.contains("planar_refinement"));
}

TEST_CASE("verify refuses four functionals unless advisory") {
  Rng rng(3);
  const std::string path = temp_file("n4.json", pencil_to_json(random_pencil(3, 4, rng)).dump());
  CHECK(run("verify --input " + path + " --trace-grid 200 --test-grid 100").code == 5);
  const Run adv = run("verify --input " + path + " --trace-grid 200 --test-grid 100 --advisory");
  CHECK((adv.code == 0 || adv.code == 1));
  const std::string verdict = Json::parse(adv.out)["verdict"];
  CHECK(verdict.rfind("advisory-", 0) == 0);
}

TEST_CASE("dual-fit") {
  const Json cayley = run_json("dual-fit --builtin cayley");
  CHECK(cayley["degree"] == 4);
  CHECK(cayley.dump().find("y1^2*y2^2") != std::string::npos);

  const std::string lorentz = temp_file("lorentz.json", poly_to_json(lorentz_quadric(3)).dump());
  const Json q = run_json("dual-fit --input " + lorentz);
  CHECK(q["degree"] == 2);

  CHECK(run("dual-fit --builtin cayley --max-degree 3").code == 6);
}

TEST_CASE("central") {
  const Json cn = run_json("central --builtin chien-nakazato --candidates \"-0.5;0;0.9;1.2;-3\"");
  const std::vector<bool> expect{true, true, true, false, false};
  REQUIRE(cn["candidates"].size() == expect.size());
  for (size_t k = 0; k < expect.size(); ++k) {
    CHECK(cn["candidates"][k]["central"] == expect[k]);
    CHECK(cn["candidates"][k]["ellipse_test"] == expect[k]);
  }
  CHECK(cn["ellipse_grid"]["agreement"].get<double>() >= 0.98);

  const Json drop = run_json("central --builtin drop --candidates \"2,0,0\"");
  CHECK(drop["candidates"][0]["central"] == true);

  CHECK(run("central --builtin chien-nakazato --candidates \"1,2\"").code == 4);
}

TEST_CASE("four ellipses") {
  const Json def = run_json("four-ellipses");
  CHECK(def["conics"].size() == 4);
  CHECK(def["redundant"] == Json::array({3}));
  const Run svg = run("four-ellipses --format svg");
  CHECK(svg.code == 0);
  CHECK(svg.out.find("<polygon") != std::string::npos);

  // A circle of radius r dualizes to one of radius 1/r.
  std::string circles = R"({"ellipses":[)";
  for (int r = 1; r <= 4; ++r) {
    const double q = 1.0 / (r * r);
    circles += (r > 1 ? "," : "") + std::string(R"({"center":[0,0],"shape":[[)") + std::to_string(q) + ",0],[0," +
               std::to_string(q) + "]]}";
  }
  circles += "]}";
  const Json c = run_json("four-ellipses --input " + temp_file("circles.json", circles));
  CHECK(c["redundant"] == Json::array({1, 2, 3}));

  const std::string same = temp_file(
      "same.json",
      R"({"ellipses":[{"center":[0.1,0],"shape":[[2,0.5],[0.5,1]]},{"center":[0.1,0],"shape":[[2,0.5],[0.5,1]]},)"
      R"({"center":[0.1,0],"shape":[[2,0.5],[0.5,1]]},{"center":[0.1,0],"shape":[[2,0.5],[0.5,1]]}]})");
  CHECK(run_json("four-ellipses --input " + same)["redundant"].size() == 3);

  const std::string singular =
      temp_file("singular.json", R"({"ellipses":[{"center":[0,0],"shape":[[1,0],[0,0]]}]})");
  CHECK(run("four-ellipses --input " + singular).code == 3);
}

TEST_CASE("outputs are deterministic and carry their seed") {
  const Run a = run("trace --builtin chien-nakazato --trace-grid 500 --seed 9");
  const Run b = run("trace --builtin chien-nakazato --trace-grid 500 --seed 9");
  CHECK(a.out == b.out);
  CHECK(a.out.find("seed=9") != std::string::npos);

  const Run v1 = run("verify --builtin drop --seed 4 --trace-grid 2000 --test-grid 1000");
  const Run v2 = run("verify --builtin drop --seed 4 --trace-grid 2000 --test-grid 1000");
  CHECK(v1.out == v2.out);
  const Json rep = Json::parse(v1.out);
  CHECK(rep["seed"] == 4);
  CHECK(rep["version"] == "1.0.0");
  CHECK(rep["grids"]["trace"] == 2000);
  CHECK(rep.contains("tolerances"));

  const auto path = std::filesystem::temp_directory_path() / "jnr_test_out.json";
  CHECK(run("charpoly --builtin cayley --out " + path.string()).code == 0);
  CHECK(Json::parse(read_file(path.string()))["command"] == "charpoly");
  CHECK(run("--version").out.find("1.0.0") != std::string::npos);
}
