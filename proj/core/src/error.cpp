#include "visrec/error.hpp"

namespace visrec {

std::string_view errc_name(Errc code) noexcept {
  switch (code) {
    case Errc::file_not_found: return "file_not_found";
    case Errc::malformed_header: return "malformed_header";
    case Errc::truncated_data: return "truncated_data";
    case Errc::unwritable_path: return "unwritable_path";
    case Errc::invalid_argument: return "invalid_argument";
    case Errc::out_of_bounds: return "out_of_bounds";
    case Errc::dimension_mismatch: return "dimension_mismatch";
    case Errc::non_binary_input: return "non_binary_input";
    case Errc::empty_input: return "empty_input";
    case Errc::no_object_found: return "no_object_found";
    case Errc::model_not_loaded: return "model_not_loaded";
    case Errc::malformed_model: return "malformed_model";
    case Errc::invalid_base64: return "invalid_base64";
    case Errc::malformed_json: return "malformed_json";
    case Errc::missing_field: return "missing_field";
    case Errc::connection_failed: return "connection_failed";
    case Errc::remote_status: return "remote_status";
    case Errc::bad_response: return "bad_response";
  }
  return "unknown";
}

}  // namespace visrec
