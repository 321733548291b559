#include <cmath>
#include <doctest.h>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "substatic/config.hpp"
#include "substatic/errors.hpp"
#include "substatic/pipeline.hpp"
#include "substatic/report.hpp"

using namespace substatic;

namespace {

RunConfig parse(const std::string& text) {
  std::istringstream in(text);
  return parse_config(in, "test.cfg");
}

std::string parse_error(const std::string& text) {
  try {
    parse(text);
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::config_parse);
    return e.what();
  }
  FAIL("config accepted");
  return "";
}

std::string config(const std::string& name) { return std::string(CONFIG_DIR) + "/" + name; }

std::string temp_dir(const std::string& name) {
  const auto p = std::filesystem::temp_directory_path() / ("substatic_cli_" + name);
  std::filesystem::remove_all(p);
  return p.string();
}

int run_quiet(Verb v, const std::string& cfg, const CliOptions& o, std::string* err_text = nullptr) {
  std::ostringstream out, err;
  const int rc = run(v, cfg, o, out, err);
  if (err_text) *err_text = err.str();
  return rc;
}

}  // namespace

TEST_CASE("config parsing") {
  const RunConfig c = parse(R"(
# comment
[model]
family = reissner_nordstrom
n = 3
m = 1.5   # trailing comment
q = 0.25

[problem]
kind = radial
inner = horizon
outer = 6
c_inner = 0.5

[run]
resolutions = 65, 129, 257
identities = main_integral_identity, volume_balance
tol = 1e-7
)");
  CHECK(c.problem.model.family == Family::reissner_nordstrom);
  CHECK(c.problem.model.mass == 1.5);
  CHECK(c.problem.model.charge == 0.25);
  CHECK(c.problem.domain.inner == RadialDomain::Inner::horizon);
  CHECK_FALSE(c.problem.auto_c);
  CHECK(c.problem.c_inner == 0.5);
  CHECK(c.resolutions == std::vector<int>{65, 129, 257});
  CHECK(c.identities.size() == 2);
  CHECK(*c.tolerance == 1e-7);

  const RunConfig f = parse("[problem]\nkind = fem\nshape = disk\na = 2\n[run]\nnodes = 16\n");
  CHECK(f.problem.kind == Problem::Kind::fem);
  CHECK(f.problem.shape.b == 2.0);
  CHECK(f.resolutions == std::vector<int>{16});
}

TEST_CASE("config errors carry line numbers") {
  CHECK(parse_error("[model]\nfamily = kerr\n").find("test.cfg:2:") != std::string::npos);
  CHECK(parse_error("[model]\nn = three\n").find(":2:") != std::string::npos);
  CHECK(parse_error("[model]\nn = 3\nn = 4\n").find("duplicate") != std::string::npos);
  CHECK(parse_error("n = 3\n").find(":1:") != std::string::npos);
  CHECK(parse_error("[mdl]\n").find("unknown section") != std::string::npos);
  CHECK(parse_error("[run]\nresolutions = 65, 33\n").find("increasing") != std::string::npos);
  CHECK(parse_error("[run]\nidentities = minkowski\n").find("unknown identity") != std::string::npos);
  CHECK(parse_error("[model]\nn = 3\n").find("resolutions") != std::string::npos);
  CHECK(parse_error("[problem]\ninner = center\nc_inner = 1\n[run]\nnodes = 65\n").find("c_inner") !=
        std::string::npos);
  CHECK(parse_error("[problem]\nkind = fem\n[run]\nnodes = 8\n").find("shape") != std::string::npos);
}

TEST_CASE("report formatting keeps 17 significant digits") {
  CHECK(report::fmt(0.1) == "0.10000000000000001");
  CHECK(report::fmt(1.0 / 3.0) == "0.33333333333333331");
  CHECK(report::fmt(std::nan("")) == "nan");
  const std::string j = report::dump({{"x", 0.1}, {"bad", report::number(INFINITY)}});
  CHECK(j.find("0.10000000000000001") != std::string::npos);
  const auto parsed = nlohmann::json::parse(j);
  CHECK(parsed["x"].get<double>() == 0.1);
  CHECK(parsed["bad"] == "inf");
}

TEST_CASE("identity CSV has a column per term") {
  IdentityReport a, b;
  a.name = "one";
  a.terms = {{"p", 1.0}, {"q", 2.0}};
  b.name = "two";
  b.terms = {{"q", 3.0}, {"r", 4.0}};
  const std::string csv = report::identities_csv({a, b});
  std::istringstream in(csv);
  std::string header, row1, row2;
  std::getline(in, header);
  std::getline(in, row1);
  std::getline(in, row2);
  CHECK(header == "identity,resolution,lhs,rhs,residual_abs,residual_rel,tolerance,passed,p,q,r");
  CHECK(row1.substr(row1.size() - 5) == ",1,2,");
  CHECK(row2.substr(row2.size() - 5) == ",,3,4");
}

TEST_CASE("exit status contract") {
  CliOptions o;
  o.out_dir = temp_dir("ok");
  CHECK(run_quiet(Verb::verify, config("schwarzschild.cfg"), o) == 0);
  CHECK(std::filesystem::exists(*o.out_dir + "/verify.json"));

  std::string err;
  o.out_dir = temp_dir("coarse");
  CHECK(run_quiet(Verb::verify, config("underresolved.cfg"), o, &err) == 2);
  CHECK(err.find("under-resolved") != std::string::npos);

  CHECK(run_quiet(Verb::verify, config("malformed.cfg"), o, &err) == 1);
  CHECK(err.find("malformed.cfg:8:") != std::string::npos);

  CHECK(run_quiet(Verb::sweep, config("single_level.cfg"), o, &err) == 1);
  CHECK(err.find("insufficient") != std::string::npos);

  CHECK(run_quiet(Verb::verify, config("does_not_exist.cfg"), o) == 1);

  // tightening the tolerance below the achieved residual turns a pass into a verdict failure
  o.out_dir = temp_dir("tight");
  o.tolerance = 1e-30;
  CHECK(run_quiet(Verb::verify, config("ellipse_fem.cfg"), o) == 2);
}

TEST_CASE("sweep output is deterministic") {
  CliOptions o;
  o.csv = true;
  o.json = false;
  const RunConfig cfg = load_config(config("ellipse_fem.cfg"));
  const Outcome a = execute(Verb::sweep, cfg, o);
  const Outcome b = execute(Verb::sweep, cfg, o);
  CHECK(a.csv == b.csv);
  CHECK(a.all_passed());
  // one row per (identity, resolution) plus header and extrapolated rows
  const auto rows = std::count(a.csv.begin(), a.csv.end(), '\n');
  CHECK(rows == 1 + 4 * 3 + 3);
}

TEST_CASE("check-model reports the horizon constant") {
  const RunConfig cfg = load_config(config("schwarzschild.cfg"));
  const Outcome o = execute(Verb::check_model, cfg, {});
  CHECK(o.all_passed());
  CHECK(o.report["model"]["c"]["c"].get<double>() == doctest::Approx(8.0 / 3.0));
  CHECK(o.report["model"]["c"]["literal_quotient"].get<double>() == doctest::Approx(4.0));
  CHECK(o.report["model"]["conditions"]["H4"]["ok"].get<bool>());
}

TEST_CASE("verbs") {
  CHECK(verb_from_string("sweep") == Verb::sweep);
  CHECK_THROWS_AS(verb_from_string("plot"), Error);
}
