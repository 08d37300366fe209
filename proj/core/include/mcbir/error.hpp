#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace mcbir {

enum class Errc {
  // image files
  malformed_header,
  unsupported_maxval,
  truncated_payload,
  unsupported_format,
  image_too_small,
  // jpeg
  unsupported_mode,
  jpeg_decode,
  // pipeline / arguments
  invalid_argument,
  kind_mismatch,
  // index
  dimension_mismatch,
  duplicate_id,
  empty_database,
  bad_magic,
  version_mismatch,
  truncated_file,
  malformed_database,
  // eval
  non_integer_stride,
  empty_relevant_set,
  unknown_class,
  // filesystem
  io,
};

std::string_view to_string(Errc code) noexcept;

/// Every failure surfaced by the library carries one of the codes above so
/// callers (and tests) can tell apart the distinct error paths.
class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& message)
      : std::runtime_error(message), code_(code) {}
  Error(Errc code, const std::string& message, std::size_t byte_offset)
      : std::runtime_error(message + " (at byte offset " +
                           std::to_string(byte_offset) + ")"),
        code_(code),
        offset_(byte_offset) {}

  Errc code() const noexcept { return code_; }
  std::optional<std::size_t> byte_offset() const noexcept { return offset_; }

 private:
  Errc code_;
  std::optional<std::size_t> offset_;
};

}  // namespace mcbir
