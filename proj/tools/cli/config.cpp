#include <cstdlib>
#include <fstream>

#include "cli.hpp"

namespace mlv::cli {

int exit_code_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::ResourceLimit:
      return ResourceExceeded;
    case ErrorCode::CheckFailed:
    case ErrorCode::DegenerateSampling:
    case ErrorCode::NoRationalPointFound:
      return CheckFailure;
    default:
      return ValidationError;
  }
}

EnvLookup process_env() {
  return [](const std::string& name) -> std::optional<std::string> {
    const char* v = std::getenv(name.c_str());
    if (!v || !*v) return std::nullopt;
    return std::string(v);
  };
}

namespace {

std::uint64_t parse_u64(const std::string& what, const std::string& text) {
  try {
    std::size_t pos = 0;
    const auto v = std::stoull(text, &pos);
    if (pos == text.size()) return v;
  } catch (const std::exception&) {
  }
  fail(ErrorCode::MalformedInput, what + " must be a non-negative integer, got '" + text + "'");
}

nlohmann::json read_config_file(const std::string& path) {
  std::ifstream in(path);
  MLV_REQUIRE(in.good(), ErrorCode::MalformedInput, "cannot read config file " + path);
  try {
    auto j = nlohmann::json::parse(in);
    MLV_REQUIRE(j.is_object(), ErrorCode::MalformedInput, "config file must hold a JSON object");
    return j;
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorCode::MalformedInput, "config file " + path + ": " + e.what());
  }
}

}  // namespace

RunConfig resolve_config(const ConfigOverrides& flags, const EnvLookup& env) {
  RunConfig c;
  auto path = flags.config_path;
  if (!path) path = env("MLV_CONFIG");
  if (path) {
    const auto j = read_config_file(*path);
    try {
      if (j.contains("field")) c.field = j.at("field").get<std::string>();
      if (j.contains("seed")) c.seed = j.at("seed").get<std::uint64_t>();
      if (j.contains("step_budget")) c.step_budget = j.at("step_budget").get<std::uint64_t>();
      if (j.contains("cache_dir")) c.cache_dir = j.at("cache_dir").get<std::string>();
      if (j.contains("verbosity")) c.verbosity = j.at("verbosity").get<int>();
    } catch (const nlohmann::json::exception& e) {
      fail(ErrorCode::MalformedInput, std::string("config file: ") + e.what());
    }
  }

  if (auto v = env("MLV_CACHE_DIR")) c.cache_dir = *v;
  if (auto v = env("MLV_STEP_BUDGET")) c.step_budget = parse_u64("MLV_STEP_BUDGET", *v);

  if (flags.field) c.field = flags.field;
  if (flags.seed) c.seed = *flags.seed;
  if (flags.step_budget) c.step_budget = *flags.step_budget;
  if (flags.cache_dir) c.cache_dir = flags.cache_dir;
  if (flags.verbosity) c.verbosity = flags.verbosity;
  MLV_REQUIRE(c.step_budget > 0, ErrorCode::BadParams, "step budget must be positive");
  return c;
}

}  // namespace mlv::cli
