#include "wsskit/error.hpp"

namespace wsskit {

std::string_view errc_name(Errc code) {
  switch (code) {
    case Errc::config: return "ConfigError";
    case Errc::bad_argument: return "BadArgument";
    case Errc::parse: return "ParseError";
    case Errc::topology: return "TopologyError";
    case Errc::degenerate_vertex: return "DegenerateVertex";
    case Errc::empty_mesh: return "EmptyMesh";
    case Errc::point_outside_lumen: return "PointOutsideLumen";
    case Errc::no_path_found: return "NoPathFound";
    case Errc::too_few_points: return "TooFewPoints";
    case Errc::missing_region: return "MissingRegion";
    case Errc::asymmetric_tensor: return "AsymmetricTensor";
    case Errc::kind_mismatch: return "KindMismatch";
    case Errc::window_out_of_range: return "WindowOutOfRange";
    case Errc::dimension_mismatch: return "DimensionMismatch";
    case Errc::non_positive_input: return "NonPositiveInput";
    case Errc::out_of_domain: return "OutOfDomain";
    case Errc::bad_resolution: return "BadResolution";
    case Errc::geometry_mismatch: return "GeometryMismatch";
    case Errc::self_intersection: return "SelfIntersection";
    case Errc::length_mismatch: return "LengthMismatch";
    case Errc::io: return "IoError";
  }
  return "Unknown";
}

}  // namespace wsskit
