#include <doctest.h>

#include <random>
#include <sstream>

#include "haffine/cli.hpp"
#include "haffine/io.hpp"
#include "haffine/testgen.hpp"

using namespace haffine;

namespace {

struct CliRun {
  int code;
  std::string out;
  std::string err;
};

CliRun run_cli(std::vector<std::string> args) {
  std::vector<const char*> argv{"haffine"};
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

}  // namespace

TEST_CASE("rational and complex scalar parsing") {
  CHECK(parse_rat("3/4") == make_rat(3, 4));
  CHECK(parse_rat("-12") == Rat(-12));
  CHECK(parse_rat("6/8") == make_rat(3, 4));  // canonicalized
  CHECK_THROWS_WITH_AS(parse_rat("1//2"), doctest::Contains("position"), parse_error);
  CHECK_THROWS_AS(parse_rat("a/2"), parse_error);
  CHECK_THROWS_AS(parse_rat("1/2 junk"), parse_error);

  const CplxQ z = parse_scalar_exact("1/2-3/5 i");
  CHECK(z.re == make_rat(1, 2));
  CHECK(z.im == make_rat(-3, 5));
  CHECK(parse_scalar_exact(scalar_to_string(z)) == z);

  const CD w = parse_scalar_float("0.25-1.5e-3i");
  CHECK(w.real() == doctest::Approx(0.25));
  CHECK(w.imag() == doctest::Approx(-0.0015));
}

TEST_CASE("step JSON round-trips bit-exactly in exact mode") {
  std::mt19937_64 rng(61);
  for (int t = 0; t < 10; ++t) {
    const StepQ x = gen::rand_step(rng, 4, false);
    const StepQ y = parse_step_exact(step_to_json(x));
    CHECK(y.level == x.level);
    CHECK(y.values == x.values);
  }
  CHECK_THROWS_AS(parse_step_exact(json::parse(R"({"level":1,"values":["1"]})")), parse_error);
  CHECK_THROWS_AS(parse_step_exact(json::parse(R"({"level":-1,"values":[]})")), parse_error);

  const StepD xf = parse_step_float(json::parse(R"({"level":1,"values":[0.5,"1/4"]})"));
  CHECK(xf.values[0] == CD{0.5, 0});
  CHECK(xf.values[1] == CD{0.25, 0});
}

TEST_CASE("symbol specs parse and round-trip") {
  const SymbolSpec poly = parse_symbol_spec(json::parse(R"({"kind":"polynomial","coeffs":["1","-1/2"]})"));
  CHECK(poly.kind == SymbolSpec::Kind::polynomial);
  CHECK_FALSE(symbol_is_float_only(poly));
  const SymbolSpec geom = parse_symbol_spec(json::parse(R"({"kind":"geometric","a":"1/3"})"));
  const Chaos1Q g = make_chaos_exact(geom, 4);
  CHECK(g.coeffs[2] == CplxQ(make_rat(1, 9)));
  const SymbolSpec bin = parse_symbol_spec(json::parse(R"({"kind":"binomial","theta":0.25,"p":2.0})"));
  CHECK(symbol_is_float_only(bin));
  CHECK(parse_symbol_spec(symbol_spec_to_json(bin)).theta == 0.25);
  CHECK_THROWS_AS(parse_symbol_spec(json::parse(R"({"kind":"nope"})")), parse_error);
  CHECK_THROWS_AS(parse_symbol_spec(json::parse(R"({"kind":"polynomial","coeffs":["1//2"]})")),
                  parse_error);
}

TEST_CASE("cli expand prints exact coefficient/value table") {
  const CliRun r = run_cli({"expand", "--symbol", R"({"kind":"geometric","a":"1/3"})", "--k", "3"});
  REQUIRE(r.code == 0);
  CHECK(r.out.find("0\t1\t-1") != std::string::npos);
  CHECK(r.out.find("1\t1/3\t2/3") != std::string::npos);  // f(1/2) = -1/3 + 1 = 2/3
  CHECK(r.out.find("2\t1/9") != std::string::npos);
}

TEST_CASE("cli rejects float-only symbols in exact mode") {
  const CliRun r = run_cli({"expand", "--symbol", R"({"kind":"binomial","theta":0.25,"p":2})"});
  CHECK(r.code == 2);
  CHECK(r.err.find("float-only") != std::string::npos);
  const CliRun ok = run_cli({"--mode", "float", "expand", "--symbol",
                             R"({"kind":"binomial","theta":0.25,"p":2})"});
  CHECK(ok.code == 0);
}

TEST_CASE("cli warns about out-of-range binomial exponents but proceeds") {
  const CliRun r = run_cli({"--mode", "float", "expand", "--symbol",
                            R"({"kind":"binomial","theta":0.9,"p":2})", "--k", "2"});
  CHECK(r.code == 0);
  CHECK(r.err.find("warning") != std::string::npos);
  CHECK(r.err.find("theta") != std::string::npos);
}

TEST_CASE("cli surfaces parse errors with positions") {
  const CliRun r = run_cli({"expand", "--symbol", R"({"kind":"polynomial","coeffs":["1//2"]})"});
  CHECK(r.code == 2);
  CHECK(r.err.find("parse error") != std::string::npos);
}

TEST_CASE("cli verify suites pass and are deterministic") {
  const CliRun vr = run_cli({"--seed", "7", "verify", "value-relation"});
  CHECK(vr.code == 0);
  CHECK(json::parse(vr.out)["pass"].get<bool>());

  const CliRun walsh = run_cli({"verify", "walsh", "--max-len", "3"});
  CHECK(walsh.code == 0);

  const CliRun bio = run_cli({"verify", "biorthogonal", "--symbol",
                              R"({"kind":"polynomial","coeffs":["1","-1/3"]})", "--max-len", "3"});
  CHECK(bio.code == 0);
  CHECK(json::parse(bio.out)["pass"].get<bool>());

  const CliRun h1 = run_cli({"verify", "h1-identity", "--symbol",
                             R"({"kind":"polynomial","coeffs":["1","-1/2"]})", "--n", "1", "--cap",
                             "40", "--tol", "1e-6"});
  CHECK(h1.code == 0);
  CHECK(json::parse(h1.out)["pass"].get<bool>());

  const CliRun unknown = run_cli({"verify", "nonsense"});
  CHECK(unknown.code == 2);
}

TEST_CASE("cli norm, classify and spectrum outputs") {
  const CliRun n = run_cli({"--depth", "6", "norm", "--symbol",
                            R"({"kind":"polynomial","coeffs":["1","-1/2"]})", "--norm", "bmo"});
  REQUIRE(n.code == 0);
  const json jn = json::parse(n.out);
  CHECK(jn[0]["mode"] == "exact");

  const CliRun cls = run_cli({"classify", "--symbol", R"({"kind":"polynomial","coeffs":["1","-2"]})"});
  REQUIRE(cls.code == 0);
  CHECK(json::parse(cls.out)["case"] == "a");

  const CliRun sp1 = run_cli({"--mode", "float", "--p", "2", "spectrum", "--symbol",
                              R"({"kind":"polynomial","coeffs":["0","1"]})"});
  REQUIRE(sp1.code == 0);
  CHECK(sp1.out.rfind("re,im,source\n", 0) == 0);
  const CliRun sp2 = run_cli({"--mode", "float", "--p", "2", "spectrum", "--symbol",
                              R"({"kind":"polynomial","coeffs":["0","1"]})"});
  CHECK(sp1.out == sp2.out);  // identical config, identical bytes

  const CliRun exact_p3 = run_cli({"norm", "--symbol", R"({"kind":"polynomial","coeffs":["1"]})",
                                   "--norm", "lp", "--p", "3"});
  CHECK(exact_p3.code == 2);  // non-even p is float-only
}

TEST_CASE("cli selftest and opnorm") {
  CHECK(run_cli({"selftest"}).code == 0);
  const CliRun op = run_cli({"--mode", "float", "--p", "2", "--trunc", "128", "opnorm", "--symbol",
                             R"({"kind":"polynomial","coeffs":["1","-0.9"]})"});
  REQUIRE(op.code == 0);
  const json j = json::parse(op.out);
  const double target = 1 + 0.9 * std::pow(2.0, -0.5);
  CHECK(j[0]["multiplier"]["value"].get<double>() == doctest::Approx(target).epsilon(0.02));
  CHECK(j[0]["hinf"]["value"].get<double>() == doctest::Approx(target).epsilon(0.001));
}
