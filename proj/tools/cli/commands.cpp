#include <algorithm>
#include <chrono>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "cli.hpp"
#include "mlv/families.hpp"
#include "mlv/groebner.hpp"
#include "mlv/invariants.hpp"
#include "mlv/poly_json.hpp"
#include "mlv/strata.hpp"

namespace mlv::cli {

namespace {

const std::vector<std::string> kTensorOps{"gr", "ar", "pr", "codim", "strata", "family"};
const std::vector<std::string> kPolyOps{"brk", "str", "cbrk", "cstr"};

bool is_poly_op(const std::string& op) { return std::find(kPolyOps.begin(), kPolyOps.end(), op) != kPolyOps.end(); }

nlohmann::json read_json_file(const std::string& path, ErrorCode code) {
  std::ifstream in(path);
  MLV_REQUIRE(in.good(), code, "cannot read " + path);
  try {
    return nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    fail(code, path + ": " + e.what());
  }
}

void write_file(const std::string& path, const std::string& payload) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  MLV_REQUIRE(out.good(), ErrorCode::MalformedInput, "cannot write " + path);
  out << payload;
}

std::string render(const nlohmann::json& j) { return j.dump(2) + "\n"; }

struct Output {
  std::string path;
  std::string timings_path;

  void emit(const std::string& payload, std::ostream& out) const {
    if (path.empty()) out << payload;
    else write_file(path, payload);
  }
  /// Wall-clock data lives beside the report, never inside it.
  void sidecar(const nlohmann::json& timings) const {
    std::string p = timings_path;
    if (p.empty() && !path.empty()) p = path + ".timings.json";
    if (!p.empty()) write_file(p, render(timings));
  }
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

FieldId field_of(const RunConfig& c) { return c.field ? FieldId::parse(*c.field) : FieldId::rationals(); }

struct ComputeArgs {
  std::string op;
  std::string gen;
  std::string in;
  std::vector<std::string> polys;
  std::size_t nvars = 0;
  std::optional<std::size_t> slice;
  bool all_slicings = false;
  std::size_t points = ArOptions{}.point_budget;
  std::size_t trials = 20;
  std::size_t span = StrengthOptions{}.span_samples;
  std::string cert_out;
  bool no_cache = false;
  Output output;
};

std::vector<MultiPoly> load_polys(const ComputeArgs& a, FieldId field) {
  std::vector<MultiPoly> ps;
  if (!a.polys.empty()) {
    std::size_t n = a.nvars;
    if (n == 0)
      for (const auto& text : a.polys) n = std::max(n, parse_poly_text(text, field).nvars());
    for (const auto& text : a.polys) ps.push_back(parse_poly_text(text, field, n));
    return ps;
  }
  MLV_REQUIRE(!a.in.empty(), ErrorCode::MalformedInput, "polynomial operations need --poly or --in");
  const auto j = read_json_file(a.in, ErrorCode::MalformedInput);
  if (j.is_object() && j.contains("polys")) {
    for (const auto& p : j.at("polys")) ps.push_back(poly_from_json(p));
  } else if (j.is_array()) {
    for (const auto& p : j) ps.push_back(poly_from_json(p));
  } else {
    ps.push_back(poly_from_json(j));
  }
  MLV_REQUIRE(!ps.empty(), ErrorCode::MalformedInput, "no polynomials in " + a.in);
  return ps;
}

Tensor load_tensor(const ComputeArgs& a, const RunConfig& c) {
  MLV_REQUIRE(a.gen.empty() != a.in.empty(), ErrorCode::MalformedInput, "give exactly one of --gen and --in");
  if (!a.gen.empty()) return parse_gen_spec(a.gen, field_of(c), c.seed);
  return tensor_from_json(read_json_file(a.in, ErrorCode::MalformedInput));
}

struct Computed {
  nlohmann::json report;
  int exit = Ok;
};

Computed compute_tensor_op(const ComputeArgs& a, const RunConfig& c, const Tensor& t) {
  Computed r;
  if (a.op == "gr") {
    r.report = report_to_json(geometric_rank(t, a.slice, a.all_slicings));
  } else if (a.op == "ar") {
    r.report = report_to_json(analytic_rank_bounds(t, ArOptions{a.points, c.seed, ArOptions{}.cert_trials}));
  } else if (a.op == "pr") {
    r.report = report_to_json(partition_rank_bounds(t));
  } else if (a.op == "codim") {
    const auto rep = verify_codim_formula(t);
    r.report = stratification_to_json(rep);
    if (!rep.agree) r.exit = CheckFailure;
  } else if (a.op == "strata") {
    r.report = stratification_to_json(codim_by_stratification(t));
  } else if (a.op == "family") {
    Rng rng(c.seed);
    const auto v = random_rational_solution(t, rng);
    const auto sys = shifted_system(t, v, std::vector<Scalar>(t.m(), Scalar::zero(t.field())));
    const auto w = build_family(sys, rng);
    const auto cert = certify_family(w, sys, a.trials, rng);
    if (!a.cert_out.empty()) write_file(a.cert_out, render(certificate_to_json(sys, w, cert)));
    r.report = {{"schema", "1"},
                {"kind", "family-summary"},
                {"ambient_dim", cert.ambient_dim},
                {"parameter_dim", cert.parameter_dim},
                {"jac_rank", cert.jac_rank},
                {"codim_bound", cert.codim_bound},
                {"vanishing_trials", cert.vanishing_trials},
                {"base_point_method", cert.base_point_method},
                {"verdict", cert.verdict}};
    if (!cert.verdict) r.exit = CheckFailure;
  }
  return r;
}

Computed compute_poly_op(const ComputeArgs& a, const RunConfig& c, const std::vector<MultiPoly>& ps) {
  Computed r;
  if (a.op == "brk") {
    r.report = report_to_json(birch_rank(ps));
  } else if (a.op == "cbrk") {
    r.report = report_to_json(collective_birch(ps));
  } else if (a.op == "str") {
    MLV_REQUIRE(ps.size() == 1, ErrorCode::MalformedInput, "str takes one polynomial; use cstr for several");
    r.report = report_to_json(strength_bounds(ps[0]));
  } else if (a.op == "cstr") {
    r.report = report_to_json(collective_strength_bounds(ps, StrengthOptions{a.span, c.seed}));
  }
  return r;
}

int cmd_compute(const ComputeArgs& a, const RunConfig& c, std::ostream& out, std::ostream& err) {
  const auto t0 = std::chrono::steady_clock::now();
  nlohmann::json input;
  Tensor t;
  std::vector<MultiPoly> ps;
  if (is_poly_op(a.op)) {
    ps = load_polys(a, field_of(c));
    input["polys"] = nlohmann::json::array();
    for (const auto& p : ps) input["polys"].push_back(poly_to_json(p));
  } else {
    t = load_tensor(a, c);
    input = tensor_to_json(t);
  }
  nlohmann::json knobs{{"step_budget", c.step_budget}};
  if (a.op == "gr") {
    knobs["slice"] = a.slice ? nlohmann::json(*a.slice) : nlohmann::json(nullptr);
    knobs["all"] = a.all_slicings;
  } else if (a.op == "ar") {
    knobs["points"] = a.points;
    knobs["seed"] = c.seed;
  } else if (a.op == "cstr") {
    knobs["span"] = a.span;
    knobs["seed"] = c.seed;
  }

  // Family runs write a side file, so they always recompute.
  const bool use_cache = c.cache_dir && !a.no_cache && a.op != "family";
  std::string status = use_cache ? "miss" : "off";
  std::string payload;
  int code = Ok;
  const std::string key = ResultCache::key(a.op, input, knobs);
  if (use_cache) {
    if (auto hit = ResultCache(*c.cache_dir).load(key)) {
      try {
        const auto entry = nlohmann::json::parse(*hit);
        payload = entry.at("payload").get<std::string>();
        code = entry.at("exit").get<int>();
        status = "hit";
      } catch (const nlohmann::json::exception&) {
        payload.clear();
      }
    }
  }
  if (status != "hit") {
    const auto r = is_poly_op(a.op) ? compute_poly_op(a, c, ps) : compute_tensor_op(a, c, t);
    payload = render(r.report);
    code = r.exit;
    if (use_cache) ResultCache(*c.cache_dir).store(key, nlohmann::json{{"exit", code}, {"payload", payload}}.dump());
  }
  if (c.verbosity > 0) err << "mlv: compute " << a.op << " cache " << status << "\n";
  a.output.emit(payload, out);
  a.output.sidecar({{"op", a.op}, {"cache", status}, {"seconds", seconds_since(t0)}, {"key", key}});
  return code;
}

struct VerifyArgs {
  std::string suite;
  std::size_t trials = 10;
  std::vector<std::size_t> shape;
  std::optional<std::size_t> d, m, only_trial;
  Output output;
};

int cmd_verify(const VerifyArgs& a, const RunConfig& c, std::ostream& out, std::ostream& err) {
  const auto t0 = std::chrono::steady_clock::now();
  SuiteOptions o;
  o.name = a.suite;
  o.trials = a.trials;
  o.seed = c.seed;
  o.shape = a.shape;
  if (c.field) o.field = FieldId::parse(*c.field);
  o.d = a.d;
  o.m = a.m;
  o.only_trial = a.only_trial;
  const auto rep = run_suite(o);
  a.output.emit(render(suite_to_json(rep)), out);
  a.output.sidecar({{"suite", a.suite}, {"seconds", seconds_since(t0)}});
  if (c.verbosity > 0 || !rep.ok()) {
    err << "mlv: " << a.suite << " " << rep.passed() << "/" << rep.trials.size() << " passed, control "
        << (rep.control_rejected ? "rejected" : "NOT rejected") << "\n";
    for (const auto& tr : rep.trials)
      if (!tr.pass) err << "  repro: " << tr.repro << "\n";
  }
  return rep.ok() ? Ok : CheckFailure;
}

int cmd_check_cert(const std::string& path, const Output& output, std::ostream& out, std::ostream& err) {
  const auto rep = check_certificate(read_json_file(path, ErrorCode::MalformedCert));
  output.emit(render({{"schema", "1"},
                      {"kind", "certificate-check"},
                      {"ok", rep.ok},
                      {"jac_rank", rep.jac_rank},
                      {"failures", rep.failures}}),
              out);
  for (const auto& f : rep.failures) err << "mlv: certificate check failed: " << f << "\n";
  return rep.ok ? Ok : CheckFailure;
}

int cmd_constants(std::optional<unsigned> d, std::optional<unsigned> m, const Output& output, std::ostream& out) {
  nlohmann::json j;
  if (d && m) {
    j = constants_to_json(theorem_constants(*d, *m));
  } else {
    j = nlohmann::json::array();
    for (unsigned dd = d.value_or(2); dd <= d.value_or(6); ++dd)
      for (unsigned mm = m.value_or(1); mm <= m.value_or(3); ++mm) j.push_back(constants_to_json(theorem_constants(dd, mm)));
  }
  output.emit(render(j), out);
  return Ok;
}

void add_output(CLI::App* cmd, Output& o) {
  cmd->add_option("-o,--out", o.path, "Write the report here instead of stdout");
  cmd->add_option("--timings", o.timings_path, "Timing sidecar path (default: OUT.timings.json)");
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err, const EnvLookup& env) {
  CLI::App app{"mlv: exact rank invariants of multilinear maps and forms"};
  app.name("mlv");
  app.require_subcommand(1);
  app.fallthrough();

  ConfigOverrides ov;
  app.add_option("--field", ov.field, "Q or F:p");
  app.add_option("--seed", ov.seed, "Master seed");
  app.add_option("--step-budget", ov.step_budget, "Groebner step budget (env MLV_STEP_BUDGET)");
  app.add_option("--cache-dir", ov.cache_dir, "Result cache directory (env MLV_CACHE_DIR)");
  app.add_option("--config", ov.config_path, "JSON config file (env MLV_CONFIG)");
  app.add_flag("-v,--verbose", ov.verbosity, "Progress to stderr");

  ComputeArgs ca;
  auto* compute = app.add_subcommand("compute", "Compute an invariant or a certificate");
  std::vector<std::string> ops = kTensorOps;
  ops.insert(ops.end(), kPolyOps.begin(), kPolyOps.end());
  compute->add_option("op", ca.op, "Operation")->required()->check(CLI::IsMember(ops));
  compute->add_option("--gen", ca.gen, "Generator spec, e.g. matmul:2");
  compute->add_option("--in", ca.in, "Input JSON (tensor, or polynomials for brk/str/cbrk/cstr)");
  compute->add_option("--poly", ca.polys, "Polynomial text such as x1*x2+x3*x4 (repeatable)");
  compute->add_option("--nvars", ca.nvars, "Number of variables for --poly");
  compute->add_option("--slice", ca.slice, "Slice block for gr (0-based)");
  compute->add_flag("--all-slicings", ca.all_slicings, "gr: compute every slicing and require agreement");
  compute->add_option("--points", ca.points, "ar: random base point budget");
  compute->add_option("--trials", ca.trials, "family: vanishing trials in the certificate");
  compute->add_option("--span", ca.span, "cstr: random span combinations");
  compute->add_option("--cert-out", ca.cert_out, "family: write the proof object here");
  compute->add_flag("--no-cache", ca.no_cache, "Bypass the result cache");
  add_output(compute, ca.output);

  std::string gen_spec;
  Output gen_out;
  auto* gen = app.add_subcommand("gen", "Write a generated tensor as JSON");
  gen->add_option("spec", gen_spec, "matmul:R | matmul-map:R | quaternion:A,B | diag:D,R,N | random:SHAPE[:M[:DENSITY]]")
      ->required();
  add_output(gen, gen_out);

  VerifyArgs va;
  auto* verify = app.add_subcommand("verify", "Run a property suite");
  verify->add_option("suite", va.suite, "Suite name")->required();
  verify->add_option("-n,--trials", va.trials, "Number of trials");
  verify->add_option("--shape", va.shape, "Block size bounds, e.g. 3,3,3")->delimiter(',');
  verify->add_option("--d", va.d, "Number of blocks");
  verify->add_option("--m", va.m, "Maximum number of components");
  verify->add_option("--only-trial", va.only_trial, "Run only this trial index");
  add_output(verify, va.output);

  std::string cert_path;
  Output cert_out;
  auto* check = app.add_subcommand("check-cert", "Independently re-check a family certificate");
  check->add_option("path", cert_path, "Certificate JSON")->required();
  add_output(check, cert_out);

  std::optional<unsigned> cd, cm;
  Output const_out;
  auto* constants = app.add_subcommand("constants", "Print the theorem constants");
  constants->add_option("--d", cd, "Degree / number of blocks (default 2..6)");
  constants->add_option("--m", cm, "Number of components (default 1..3)");
  add_output(constants, const_out);

  try {
    std::vector<std::string> rev(args.rbegin(), args.rend());
    app.parse(rev);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e, out, err);
    return rc == 0 ? Ok : ValidationError;
  }

  try {
    const RunConfig cfg = resolve_config(ov, env);
    auto g = default_groebner_options();
    g.step_budget = cfg.step_budget;
    set_default_groebner_options(g);

    if (compute->parsed()) return cmd_compute(ca, cfg, out, err);
    if (gen->parsed()) {
      gen_out.emit(render(tensor_to_json(parse_gen_spec(gen_spec, field_of(cfg), cfg.seed))), out);
      return Ok;
    }
    if (verify->parsed()) return cmd_verify(va, cfg, out, err);
    if (check->parsed()) return cmd_check_cert(cert_path, cert_out, out, err);
    if (constants->parsed()) return cmd_constants(cd, cm, const_out, out);
  } catch (const Error& e) {
    err << "mlv: " << e.what() << "\n";
    return exit_code_for(e.code());
  } catch (const std::exception& e) {
    err << "mlv: " << e.what() << "\n";
    return ValidationError;
  }
  return ValidationError;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  return run(args, out, err, process_env());
}

}  // namespace mlv::cli
