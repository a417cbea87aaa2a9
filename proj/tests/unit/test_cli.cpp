#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "lebnn/cli.hpp"
#include "lebnn/csv.hpp"
#include "lebnn/errors.hpp"
#include "lebnn/space_config.hpp"
#include "lebnn/spaces.hpp"

using namespace lebnn;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "lebnn_test_cli";
  fs::create_directories(dir);
  return dir / name;
}

std::string slurp(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

int cli(std::vector<std::string> args, std::string* err_text = nullptr) {
  args.insert(args.begin(), "lebnn");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream err;
  const int code = run_cli(static_cast<int>(argv.size()), argv.data(), err);
  if (err_text != nullptr) *err_text = err.str();
  return code;
}

}  // namespace

TEST_CASE("m grids") {
  CHECK(parse_m_grid("10") == std::vector<std::uint64_t>{10});
  CHECK(parse_m_grid("100,1,10,10") == std::vector<std::uint64_t>{1, 10, 100});
  CHECK(parse_m_grid("3:6") == std::vector<std::uint64_t>{3, 4, 5, 6});
  CHECK(parse_m_grid("1:1e3:log") == std::vector<std::uint64_t>{1, 3, 10, 30, 100, 300, 1000});
  CHECK(parse_m_grid("5:1e2:log") == std::vector<std::uint64_t>{10, 30, 100});
  CHECK(parse_m_grid("1:100:log:1") == std::vector<std::uint64_t>{1, 10, 100});
  CHECK(parse_m_grid("1e6") == std::vector<std::uint64_t>{1000000});
  CHECK_THROWS_AS(parse_m_grid("0"), ConfigError);
  CHECK_THROWS_AS(parse_m_grid("2.5"), ConfigError);
  CHECK_THROWS_AS(parse_m_grid("5:1"), ConfigError);
  CHECK_THROWS_AS(parse_m_grid("1:10:lin"), ConfigError);
  CHECK_THROWS_AS(parse_m_grid(""), ConfigError);
}

TEST_CASE("radii") {
  const SignedHarmonicSpace h(8);
  const Point x = SignedHarmonicSpace::atom(0);
  const auto table = parse_radii("table", h, x);
  REQUIRE(table.size() == 8);
  CHECK(table.front() == Distance::exact(1));
  CHECK(table.back() == Distance::exact(1, 8));
  CHECK(parse_radii("inv:2:4", h, x) ==
        std::vector<Distance>{Distance::exact(1, 2), Distance::exact(1, 3), Distance::exact(1, 4)});
  CHECK(parse_radii("1/4, 1/2,1/4", h, x) ==
        std::vector<Distance>{Distance::exact(1, 2), Distance::exact(1, 4)});
  CHECK(parse_radii("pow2:1:2", h, x) ==
        std::vector<Distance>{Distance::exact(1, 2), Distance::exact(1, 4)});
  CHECK_THROWS_AS(parse_radii("theta:odd", h, x), ConfigError);
  CHECK_THROWS_AS(parse_radii("-1", h, x), ConfigError);

  const DyadicIntervalSpace d(3);
  const auto odd = parse_radii("theta:odd", d, Point{0, 0.0});
  CHECK(odd == std::vector<Distance>{Distance::real(dyadic_theta(3)), Distance::real(dyadic_theta(5))});
  CHECK(parse_radii("theta:even", d, Point{0, 0.0}).size() == 3);
  CHECK(parse_radii("theta:all", d, Point{0, 0.0}).size() == 6);
  CHECK(parse_radii("0.25", d, Point{0, 0.0}) == std::vector<Distance>{Distance::real(0.25)});
}

TEST_CASE("field and point specs") {
  const auto three = build_space(parse_space_spec("finite_atomic:probs=1/2,1/2,positions=0,1"));
  const auto f = build_field(parse_space_spec("table:values=0.3,0.8"), *three);
  CHECK(f.evaluate(parse_point("1", *three)) == 0.8);
  CHECK_THROWS_AS(parse_point("2", *three), ConfigError);
  CHECK_THROWS_AS(parse_point("a", *three), ConfigError);
  CHECK_THROWS_AS(build_field(parse_space_spec("table:values=0.3"), *three), ConfigError);
  CHECK_THROWS_AS(build_field(parse_space_spec("wobbly"), *three), ConfigError);
  CHECK_THROWS_AS(build_field(parse_space_spec("constant:level=1"), *three), ConfigError);
  CHECK(build_field(parse_space_spec("constant:value=1/4"), *three).evaluate(Point{}) == 0.25);

  const DyadicIntervalSpace d(4);
  const auto dy = build_field(parse_space_spec("dyadic"), d);
  CHECK(dy.name() == ScalarField::dyadic(4).name());
  CHECK(parse_point("1/2", d).coord == 0.5);
  CHECK_THROWS_AS(parse_point("2", d), ConfigError);
}

TEST_CASE("commands render CSV with a config trailer") {
  ExperimentConfig c;
  c.command = "nnconv";
  c.rule = "positive";
  c.m_grid = "10";
  c.mode = "exact";
  const auto r = render_experiment(c);
  CHECK(r.csv.rfind("m,error,stderr,method\n10,0.7102421103717", 0) == 0);
  CHECK(r.csv.find("# command=nnconv\n") != std::string::npos);
  CHECK(r.csv.find("# rule=positive\n") != std::string::npos);
  CHECK(r.csv.find("# seed=42\n") != std::string::npos);
  CHECK(r.csv.find("workers") == std::string::npos);

  c.command = "ratio";
  c.space = "dyadic:D=3";
  c.field = "dyadic";
  c.radii = "theta:odd";
  const auto ratio = render_experiment(c);
  std::istringstream lines(ratio.csv);
  std::string line;
  std::getline(lines, line);
  CHECK(line == "r,ratio_closed,ratio_open");
  int rows = 0;
  while (std::getline(lines, line) && line[0] != '#') {
    const auto first = line.find(',');
    const auto second = line.find(',', first + 1);
    CHECK(std::stod(line.substr(first + 1, second - first - 1)) >= 0.996);
    ++rows;
  }
  CHECK(rows == 2);

  c = ExperimentConfig{};
  c.command = "alphaseq";
  c.m_max = 1000;
  const auto seq = render_experiment(c);
  CHECK(seq.verdict);
  CHECK(seq.csv.rfind("m,m_hi,r_m,M_value,M_open\n2,6,1,", 0) == 0);
  CHECK(seq.csv.find("# checked=999\n") != std::string::npos);

  c = ExperimentConfig{};
  c.command = "classify";
  c.model = "noisy_pair";
  c.m_grid = "64";
  c.mode = "exact";
  const auto cls = render_experiment(c);
  CHECK(cls.verdict);
  CHECK(cls.csv.rfind("m,risk,stderr,surrogate,bayes,prop_inf_bound,method\n64,0.37", 0) == 0);
  CHECK(cls.csv.find("# space=") == std::string::npos);

  c = ExperimentConfig{};
  c.command = "alongseq";
  c.radii = "inv:1:8";
  const auto along = render_experiment(c);
  CHECK(!along.verdict);
  CHECK(along.csv.find("# lebesgue=false\n") != std::string::npos);

  c = ExperimentConfig{};
  c.command = "conditions";
  c.rule = "uniform";
  c.m_grid = "1,10";
  const auto cond = render_experiment(c);
  CHECK(cond.csv.find("# tie_bias_constant=1\n") != std::string::npos);
  CHECK(cond.csv.find("# measure_continuity_constant=inf\n") != std::string::npos);
  CHECK(!cond.verdict);

  c = ExperimentConfig{};
  c.command = "lebvalue";
  c.method = "nn";
  c.override_value = 1.0;
  c.m_grid = "10000";
  const auto value = render_experiment(c);
  CHECK(value.csv.find("# l_hat=0.30144908416") != std::string::npos);
  CHECK(value.csv.find("# override=1\n") != std::string::npos);
}

TEST_CASE("exit codes") {
  const auto out = scratch("ok.csv");
  CHECK(cli({"nnconv", "--rule", "positive", "--m", "10", "--mode", "exact", "--out",
             out.string()}) == 0);
  CHECK(slurp(out).rfind("m,error", 0) == 0);

  std::string err;
  CHECK(cli({"alongseq", "--radii", "inv:1:8", "--out", out.string()}) == 0);
  CHECK(cli({"alongseq", "--radii", "inv:1:8", "--assert", "--out", out.string()}, &err) == 1);
  CHECK(err.find("alongseq") != std::string::npos);
  CHECK(cli({"alongseq", "--radii", "inv:1:8", "--tolerance", "0.5", "--tail", "3", "--assert",
             "--out", out.string()}) == 0);

  CHECK(cli({}, &err) == 2);
  CHECK(cli({"frobnicate"}) == 2);
  CHECK(cli({"nnconv", "--bogus"}) == 2);
  CHECK(cli({"nnconv", "--space", "cube:N=2", "--out", out.string()}, &err) == 2);
  CHECK(err.find("unknown space kind") != std::string::npos);
  CHECK(cli({"nnconv", "--trials", "0", "--out", out.string()}) == 2);
  CHECK(cli({"nnconv", "--mode", "fast", "--out", out.string()}) == 2);
  CHECK(cli({"nnconv", "--space", "unit_interval", "--field", "identity", "--x", "0.5",
             "--mode", "exact", "--out", out.string()}, &err) == 2);
  CHECK(err.find("unsupported") != std::string::npos);
  CHECK(cli({"verify", "--criterion", "A99", "--out", out.string()}) == 2);
  CHECK(cli({"verify", "--criterion", "A4", "--out", out.string()}) == 0);
  CHECK(slurp(out).find("A4,Lebesgue ratio bounds,PASS,") != std::string::npos);
  CHECK(cli({"ratio", "--help"}) == 0);
}

TEST_CASE("config file errors carry the line") {
  const auto path = scratch("space.cfg");
  {
    std::ofstream f(path);
    f << "# two atoms\nkind = finite_atomic\nprobs = 1/2, 1/2\npositions 0, 1\n";
  }
  std::string err;
  CHECK(cli({"ratio", "--space", "@" + path.string()}, &err) == 2);
  CHECK(err.find("line 4") != std::string::npos);
  {
    std::ofstream f(path);
    f << "kind = finite_atomic\nprobs = 1/2, 1/2\npositions = 0, 1\n";
  }
  const auto out = scratch("file.csv");
  CHECK(cli({"ratio", "--space", "@" + path.string(), "--field", "table:values=0,1", "--out",
             out.string()}) == 0);
  CHECK(slurp(out).rfind("r,ratio_closed,ratio_open\n1,0.5,0\n", 0) == 0);
}

TEST_CASE("seed from the environment and reproducibility") {
  const auto a = scratch("a.csv"), b = scratch("b.csv"), c = scratch("c.csv");
  const std::vector<std::string> base = {"nnconv", "--rule", "uniform", "--m-grid", "1,10",
                                         "--mode", "mc", "--trials", "5000"};
  auto with = [&](std::vector<std::string> extra) {
    auto args = base;
    args.insert(args.end(), extra.begin(), extra.end());
    return args;
  };
  ::setenv("LEBNN_SEED", "9", 1);
  CHECK(cli(with({"--workers", "1", "--out", a.string()})) == 0);
  CHECK(cli(with({"--workers", "4", "--out", b.string()})) == 0);
  ::unsetenv("LEBNN_SEED");
  CHECK(cli(with({"--seed", "9", "--out", c.string()})) == 0);
  CHECK(slurp(a) == slurp(b));
  CHECK(slurp(a) == slurp(c));
  CHECK(slurp(a).find("# seed=9\n") != std::string::npos);
  ::setenv("LEBNN_SEED", "nine", 1);
  CHECK(cli(with({"--out", a.string()})) == 2);
  ::unsetenv("LEBNN_SEED");
}
