#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

#include "doctest.h"
#include "test_util.hpp"

#include "cli/cli.hpp"
#include "mlv/poly_json.hpp"

using namespace mlvtest;
namespace fs = std::filesystem;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

cli::EnvLookup env_of(std::map<std::string, std::string> vars) {
  return [vars](const std::string& k) -> std::optional<std::string> {
    auto it = vars.find(k);
    if (it == vars.end()) return std::nullopt;
    return it->second;
  };
}

Run run_mlv(const std::vector<std::string>& args, std::map<std::string, std::string> env = {}) {
  std::ostringstream out, err;
  const int code = cli::run(args, out, err, env_of(std::move(env)));
  return {code, out.str(), err.str()};
}

nlohmann::json parse(const Run& r) { return nlohmann::json::parse(r.out); }

fs::path scratch(const std::string& name) {
  const auto p = fs::temp_directory_path() / ("mlv_cli_test_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

}  // namespace

TEST_CASE("compute examples") {
  auto r = run_mlv({"compute", "gr", "--gen", "matmul:2"});
  CHECK(r.code == 0);
  CHECK(parse(r)["value"] == 3);

  r = run_mlv({"compute", "brk", "--poly", "x1*x2 + x3*x4"});
  CHECK(r.code == 0);
  CHECK(parse(r)["value"] == 4);

  r = run_mlv({"compute", "ar", "--gen", "quaternion:-1,-1"});
  CHECK(r.code == 0);
  CHECK(parse(r)["lo"] == 3);
  CHECK(parse(r)["hi"] == 4);

  r = run_mlv({"compute", "cbrk", "--poly", "x1*x2", "--poly", "x3*x4"});
  CHECK(parse(r)["value"] == 2);
}

TEST_CASE("polynomial input files") {
  const auto dir = scratch("polys");
  const VarBlocks b = VarBlocks::single(4);
  const FieldId QQ = FieldId::rationals();
  const auto p = var(QQ, b, 0) * var(QQ, b, 1) + var(QQ, b, 2) * var(QQ, b, 3);
  std::ofstream(dir / "quartic.json") << poly_to_json(p).dump();
  auto r = run_mlv({"compute", "brk", "--in", (dir / "quartic.json").string()});
  CHECK(r.code == 0);
  CHECK(parse(r)["value"] == 4);
}

TEST_CASE("poly text parser") {
  const FieldId Q = FieldId::rationals();
  const auto p = cli::parse_poly_text("3/2*x1^2*x2 - x3 + 2", Q);
  const VarBlocks b = VarBlocks::single(3);
  CHECK(p == make_scalar(Q, 3, 2) * var(Q, b, 0) * var(Q, b, 0) * var(Q, b, 1) -
                 var(Q, b, 2) + cst(Q, b, 2));
  CHECK(cli::parse_poly_text("x1", Q, 5).nvars() == 5);
  CHECK_THROWS_AS(cli::parse_poly_text("x1 +", Q), Error);
  CHECK_THROWS_AS(cli::parse_poly_text("x0", Q), Error);
  CHECK_THROWS_AS(cli::parse_poly_text("x3", Q, 2), Error);
}

TEST_CASE("generator specs") {
  const FieldId Q = FieldId::rationals();
  CHECK(cli::parse_gen_spec("diag:3,2,4", Q, 1) == gen_diag(Q, 3, 2, 4));
  CHECK(cli::parse_gen_spec("matmul-map:2", Q, 1).m() == 4);
  CHECK(cli::parse_gen_spec("random:2,3:2", Q, 9) == gen_random(Q, VarBlocks({2, 3}), 2, 9));
  CHECK_THROWS_AS(cli::parse_gen_spec("diag:3,2", Q, 1), Error);
  CHECK_THROWS_AS(cli::parse_gen_spec("matmul", Q, 1), Error);
  auto r = run_mlv({"gen", "quaternion:-1,-1"});
  CHECK(r.code == 0);
  CHECK(tensor_from_json(parse(r)) == gen_quaternion(Q, q(-1), q(-1)));
}

TEST_CASE("exit codes") {
  CHECK(run_mlv({"compute", "gr", "--gen", "nope:1"}).code == 3);
  CHECK(run_mlv({"compute", "unknown-op"}).code == 3);
  CHECK(run_mlv({"verify", "no-such-suite"}).code == 3);
  CHECK(run_mlv({}).code == 3);
  CHECK(run_mlv({"compute", "gr", "--gen", "matmul:2", "--step-budget", "3"}).code == 2);
  CHECK(run_mlv({"compute", "ar", "--gen", "diag:3,1,2", "--field", "F:101"}).code == 3);
  CHECK(cli::exit_code_for(ErrorCode::CheckFailed) == 1);
  CHECK(cli::exit_code_for(ErrorCode::ResourceLimit) == 2);
  CHECK(cli::exit_code_for(ErrorCode::MalformedInput) == 3);
  CHECK(run_mlv({"--help"}).code == 0);
}

TEST_CASE("config precedence: flag over env over file") {
  const auto dir = scratch("config");
  const auto cfg = dir / "cfg.json";
  std::ofstream(cfg) << R"({"step_budget": 11, "seed": 5, "cache_dir": "from-file", "field": "F:7"})";

  cli::ConfigOverrides none;
  none.config_path = cfg.string();
  auto c = cli::resolve_config(none, env_of({}));
  CHECK(c.step_budget == 11);
  CHECK(c.seed == 5);
  CHECK(*c.cache_dir == "from-file");
  CHECK(*c.field == "F:7");

  c = cli::resolve_config(none, env_of({{"MLV_STEP_BUDGET", "22"}, {"MLV_CACHE_DIR", "from-env"}}));
  CHECK(c.step_budget == 22);
  CHECK(*c.cache_dir == "from-env");

  cli::ConfigOverrides flags = none;
  flags.step_budget = 33;
  flags.cache_dir = "from-flag";
  c = cli::resolve_config(flags, env_of({{"MLV_STEP_BUDGET", "22"}, {"MLV_CACHE_DIR", "from-env"}}));
  CHECK(c.step_budget == 33);
  CHECK(*c.cache_dir == "from-flag");

  cli::ConfigOverrides via_env;
  c = cli::resolve_config(via_env, env_of({{"MLV_CONFIG", cfg.string()}}));
  CHECK(c.seed == 5);
  CHECK(cli::resolve_config({}, env_of({})).step_budget == cli::RunConfig{}.step_budget);
  CHECK_THROWS_AS(cli::resolve_config({}, env_of({{"MLV_STEP_BUDGET", "lots"}})), Error);

  // The env budget reaches the Groebner kernel.
  CHECK(run_mlv({"compute", "gr", "--gen", "matmul:2"}, {{"MLV_STEP_BUDGET", "3"}}).code == 2);
  CHECK(run_mlv({"compute", "gr", "--gen", "matmul:2", "--step-budget", "2000000"}, {{"MLV_STEP_BUDGET", "3"}}).code == 0);
}

TEST_CASE("cache is transparent and reports are deterministic") {
  const auto dir = scratch("cache");
  const std::map<std::string, std::string> env{{"MLV_CACHE_DIR", (dir / "c").string()}};
  const std::vector<std::vector<std::string>> cmds{
      {"compute", "ar", "--gen", "quaternion:-1,-1"},
      {"compute", "pr", "--gen", "matmul:2"},
      {"compute", "codim", "--gen", "random:2,2,2:2", "--seed", "4"},
      {"compute", "cstr", "--poly", "x1*x2", "--poly", "x3*x4"},
  };
  for (const auto& cmd : cmds) {
    const auto plain = run_mlv(cmd);
    const auto first = run_mlv(cmd, env);
    auto with_out = cmd;
    with_out.insert(with_out.end(), {"-o", (dir / "r.json").string()});
    const auto second = run_mlv(with_out, env);
    CHECK(plain.code == 0);
    CHECK(first.out == plain.out);
    CHECK(slurp(dir / "r.json") == plain.out);
    CHECK(second.code == first.code);
    const auto timings = nlohmann::json::parse(slurp(dir / "r.json.timings.json"));
    CHECK(timings["cache"] == "hit");
    CHECK(plain.out.find("seconds") == std::string::npos);
  }
  CHECK(run_mlv({"compute", "ar", "--gen", "quaternion:-1,-1", "--seed", "3"}).out ==
        run_mlv({"compute", "ar", "--gen", "quaternion:-1,-1", "--seed", "3"}).out);
}

TEST_CASE("verify and check-cert") {
  auto r = run_mlv({"verify", "additivity", "-n", "3", "--seed", "2"});
  CHECK(r.code == 0);
  CHECK(parse(r)["ok"] == true);
  r = run_mlv({"verify", "additivity", "-n", "3", "--seed", "2", "--only-trial", "1"});
  CHECK(parse(r)["trials"].size() == 1);

  const auto dir = scratch("cert");
  const auto cert = (dir / "xy.json").string();
  r = run_mlv({"compute", "family", "--gen", "diag:2,1,1", "--cert-out", cert});
  CHECK(r.code == 0);
  CHECK(run_mlv({"check-cert", cert}).code == 0);

  auto j = nlohmann::json::parse(slurp(cert));
  j["checks"]["vanishing"][0]["point"][0] = "99";
  std::ofstream(dir / "bad.json") << j.dump();
  CHECK(run_mlv({"check-cert", (dir / "bad.json").string()}).code == 1);

  std::ofstream(dir / "junk.json") << "{not json";
  CHECK(run_mlv({"check-cert", (dir / "junk.json").string()}).code == 3);

  r = run_mlv({"compute", "family", "--gen", "quaternion:-1,-1", "--cert-out", (dir / "q.json").string()});
  CHECK(r.code == 0);
  const auto q = run_mlv({"check-cert", (dir / "q.json").string()});
  CHECK(q.code == 0);
  CHECK(parse(q)["jac_rank"] == 4);
}

TEST_CASE("constants command") {
  auto r = run_mlv({"constants", "--d", "3", "--m", "1"});
  CHECK(parse(r)["c_pvsg"] == 54);
  r = run_mlv({"constants"});
  CHECK(parse(r).size() == 15);
}

TEST_CASE("sha256") {
  CHECK(cli::sha256_hex("abc") == "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
  CHECK(cli::sha256_hex("") == "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
}
