#pragma once

#include <cstdint>
#include <string>
#include <string_view>

namespace tcr {

/// Returns `bytes` with every invalid UTF-8 sequence replaced by U+FFFD.
std::string sanitize_utf8(std::string_view bytes);

/// 64-bit FNV-1a; used for dataset fingerprints.
class Fnv1a64 {
 public:
  void update(std::string_view bytes);
  void update_u64(std::uint64_t v);
  std::uint64_t digest() const { return state_; }
  std::string hex() const;

 private:
  std::uint64_t state_ = 0xcbf29ce484222325ULL;
};

/// Quotes a CSV field when it contains a separator, quote or newline.
std::string csv_field(std::string_view s);

/// Shortest decimal text that round-trips to the same double.
std::string format_double(double v);

}  // namespace tcr
