#include "mcbir/error.hpp"

namespace mcbir {

std::string_view to_string(Errc code) noexcept {
  switch (code) {
    case Errc::malformed_header: return "malformed header";
    case Errc::unsupported_maxval: return "unsupported maxval";
    case Errc::truncated_payload: return "truncated payload";
    case Errc::unsupported_format: return "unsupported format";
    case Errc::image_too_small: return "image too small";
    case Errc::unsupported_mode: return "unsupported JPEG mode";
    case Errc::jpeg_decode: return "JPEG decode error";
    case Errc::invalid_argument: return "invalid argument";
    case Errc::kind_mismatch: return "feature kind mismatch";
    case Errc::dimension_mismatch: return "dimension mismatch";
    case Errc::duplicate_id: return "duplicate image id";
    case Errc::empty_database: return "empty database";
    case Errc::bad_magic: return "bad magic";
    case Errc::version_mismatch: return "version mismatch";
    case Errc::truncated_file: return "truncated file";
    case Errc::malformed_database: return "malformed database";
    case Errc::non_integer_stride: return "non-integer stride";
    case Errc::empty_relevant_set: return "empty relevant set";
    case Errc::unknown_class: return "unknown class label";
    case Errc::io: return "I/O error";
  }
  return "unknown error";
}

}  // namespace mcbir
