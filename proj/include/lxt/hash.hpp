#ifndef LXT_HASH_HPP_
#define LXT_HASH_HPP_

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>

namespace lxt {

/// Lowercase hex SHA-256.
std::string sha256_hex(std::span<const std::uint8_t> bytes);
std::string sha256_hex(std::string_view text);
/// Throws DataError when the file cannot be read.
std::string sha256_file(const std::filesystem::path& path);

/// Incremental SHA-256.
class Sha256 {
 public:
  Sha256();
  ~Sha256();
  Sha256(const Sha256&) = delete;
  Sha256& operator=(const Sha256&) = delete;

  void update(std::span<const std::uint8_t> bytes);
  void update(std::string_view text);
  /// Finishes the digest; the object must not be updated afterwards.
  std::string hex();

 private:
  void* ctx_;
};

}  // namespace lxt

#endif  // LXT_HASH_HPP_
