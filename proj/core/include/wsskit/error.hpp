#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace wsskit {

enum class Errc {
  // usage / configuration
  config,
  bad_argument,
  // mesh_core
  parse,
  topology,
  degenerate_vertex,
  empty_mesh,
  // centerline
  point_outside_lumen,
  no_path_found,
  too_few_points,
  // tangent_fields
  missing_region,
  // wss / series
  asymmetric_tensor,
  kind_mismatch,
  window_out_of_range,
  // convergence
  dimension_mismatch,
  non_positive_input,
  out_of_domain,
  // synthetic_flows
  bad_resolution,
  geometry_mismatch,
  self_intersection,
  // io
  length_mismatch,
  io,
};

std::string_view errc_name(Errc code);

/// Single exception type for the toolkit; `code()` identifies the failure
/// class named in the module contracts.
class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what) : std::runtime_error(what), code_(code) {}

  Errc code() const noexcept { return code_; }

  /// True for failures caused by how the tool was invoked rather than by data.
  bool is_usage_error() const noexcept {
    return code_ == Errc::config || code_ == Errc::bad_argument;
  }

 private:
  Errc code_;
};

[[noreturn]] inline void fail(Errc code, const std::string& what) { throw Error(code, what); }

}  // namespace wsskit
