#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace visrec {

enum class Errc {
  file_not_found,
  malformed_header,
  truncated_data,
  unwritable_path,
  invalid_argument,
  out_of_bounds,
  dimension_mismatch,
  non_binary_input,
  empty_input,
  no_object_found,
  model_not_loaded,
  malformed_model,
  invalid_base64,
  malformed_json,
  missing_field,
  connection_failed,
  remote_status,
  bad_response,
};

std::string_view errc_name(Errc code) noexcept;

/// Single exception type for the library; `code()` distinguishes failure kinds.
class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what) : std::runtime_error(what), code_(code) {}

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

}  // namespace visrec
