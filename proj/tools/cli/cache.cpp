#include <filesystem>
#include <fstream>
#include <iomanip>
#include <sstream>

#include <openssl/evp.h>

#include "cli.hpp"

namespace mlv::cli {

std::string sha256_hex(const std::string& data) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  EVP_MD_CTX* ctx = EVP_MD_CTX_new();
  MLV_REQUIRE(ctx != nullptr, ErrorCode::ResourceLimit, "cannot allocate digest context");
  const bool ok = EVP_DigestInit_ex(ctx, EVP_sha256(), nullptr) == 1 &&
                  EVP_DigestUpdate(ctx, data.data(), data.size()) == 1 && EVP_DigestFinal_ex(ctx, digest, &len) == 1;
  EVP_MD_CTX_free(ctx);
  MLV_REQUIRE(ok, ErrorCode::CheckFailed, "SHA-256 computation failed");
  std::ostringstream s;
  for (unsigned int i = 0; i < len; ++i) s << std::hex << std::setw(2) << std::setfill('0') << static_cast<int>(digest[i]);
  return s.str();
}

ResultCache::ResultCache(std::string dir) : dir_(std::move(dir)) {}

std::string ResultCache::key(const std::string& op, const nlohmann::json& input, const nlohmann::json& knobs) {
  return sha256_hex(op + "\n" + input.dump() + "\n" + knobs.dump());
}

std::optional<std::string> ResultCache::load(const std::string& key) const {
  std::ifstream in(std::filesystem::path(dir_) / (key + ".json"), std::ios::binary);
  if (!in) return std::nullopt;
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

void ResultCache::store(const std::string& key, const std::string& payload) const {
  namespace fs = std::filesystem;
  std::error_code ec;
  fs::create_directories(dir_, ec);
  const fs::path final_path = fs::path(dir_) / (key + ".json");
  const fs::path tmp = fs::path(dir_) / (key + ".tmp");
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) return;
    out << payload;
  }
  fs::rename(tmp, final_path, ec);
}

}  // namespace mlv::cli
