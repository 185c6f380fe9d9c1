#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "mlv/error.hpp"
#include "mlv/multipoly.hpp"
#include "mlv/tensor.hpp"

namespace mlv::cli {

enum ExitCode : int { Ok = 0, CheckFailure = 1, ResourceExceeded = 2, ValidationError = 3 };

int exit_code_for(ErrorCode code);

struct RunConfig {
  std::optional<std::string> field;
  std::uint64_t seed = 1;
  std::uint64_t step_budget = 2'000'000;
  std::optional<std::string> cache_dir;
  int verbosity = 0;
};

/// Values given explicitly on the command line.
struct ConfigOverrides {
  std::optional<std::string> field;
  std::optional<std::uint64_t> seed;
  std::optional<std::uint64_t> step_budget;
  std::optional<std::string> cache_dir;
  std::optional<std::string> config_path;
  int verbosity = 0;
};

using EnvLookup = std::function<std::optional<std::string>(const std::string&)>;
EnvLookup process_env();

/// flag > MLV_* environment > config file (--config or MLV_CONFIG) > defaults.
RunConfig resolve_config(const ConfigOverrides& flags, const EnvLookup& env);

/// Tensor generator specs: matmul:R, matmul-map:R, quaternion:A,B, diag:D,R,N,
/// random:N1,N2,...[:M[:DENSITY]] (seeded by `seed`).
Tensor parse_gen_spec(const std::string& spec, FieldId field, std::uint64_t seed);

/// Integer-coefficient text such as "x1*x2 + 3/2*x3^2 - x4" over `nvars`
/// variables in one block; nvars = 0 takes the largest index used.
MultiPoly parse_poly_text(const std::string& text, FieldId field, std::size_t nvars = 0);

std::string sha256_hex(const std::string& data);

/// Content-addressed store of report payloads.
class ResultCache {
public:
  explicit ResultCache(std::string dir);
  std::optional<std::string> load(const std::string& key) const;
  void store(const std::string& key, const std::string& payload) const;
  static std::string key(const std::string& op, const nlohmann::json& input, const nlohmann::json& knobs);

private:
  std::string dir_;
};

/// Runs one invocation; args excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err, const EnvLookup& env);
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace mlv::cli
