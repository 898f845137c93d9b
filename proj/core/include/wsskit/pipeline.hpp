#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "wsskit/error.hpp"
#include "wsskit/field_series.hpp"
#include "wsskit/indicators.hpp"
#include "wsskit/tangent_fields.hpp"

namespace wsskit {

std::string_view version();

struct PipelineConfig {
  std::filesystem::path mesh;  // empty: taken from the series manifest
  std::filesystem::path series;
  std::filesystem::path centerline;
  std::optional<TimeWindow> window;
  TangentMethod tangents = TangentMethod::projected;
  std::vector<FlowRegion> flow_vectors;  // empty: chords of the centerline sections
  std::vector<IndicatorKind> indicators{IndicatorKind::osi, IndicatorKind::osi_longitudinal, IndicatorKind::tawss,
                                        IndicatorKind::mean_wss_longitudinal};
  std::filesystem::path output = "wsskit_out";
  std::size_t projection_neighbors = 1;
  double projection_tolerance = kProjectionTolerance;
  double flip_tolerance = kFlipSignTolerance;
  double zero_shear = kZeroShear;
};

/// Applies one `key = value` setting. Relative paths resolve against
/// `base`. Throws Errc::config for unknown keys or bad values.
void apply_setting(PipelineConfig& config, std::string_view key, std::string_view value,
                   const std::filesystem::path& base = {});

/// Plain-text config: one `key = value` per line, '#' comments. Keys:
/// mesh, series, centerline, window, tangents (projected|flipped),
/// flow_vector (label:x,y,z, repeatable), indicators, output,
/// projection_neighbors, projection_tolerance, flip_tolerance,
/// zero_shear_tolerance, quadrature (trapezoid).
PipelineConfig read_pipeline_config(std::istream& in, const std::filesystem::path& base = {});
PipelineConfig load_pipeline_config(const std::filesystem::path& path);

/// Canonical `key = value` rendering without the output directory; its
/// FNV-1a hash identifies a run.
std::string canonical_config(const PipelineConfig& config);
std::uint64_t fnv1a(std::string_view bytes);

/// A sub-module failure tagged with the pipeline stage it came from.
class PipelineError : public Error {
 public:
  PipelineError(std::string stage, const Error& cause)
      : Error(cause.code(), "stage '" + stage + "': " + cause.what()), stage_(std::move(stage)) {}
  const std::string& stage() const noexcept { return stage_; }

 private:
  std::string stage_;
};

struct StageFlags {
  std::string stage;
  std::size_t flagged = 0;
};

struct PipelineResult {
  std::vector<std::filesystem::path> files;  // in write order
  std::vector<StageFlags> flags;
};

/// Loads inputs, builds the longitudinal tangent field, computes the
/// configured indicators and writes into `config.output`: tangents.csv,
/// one <indicator>.csv per indicator, wall.vtk and run.log. Outputs depend
/// only on the config and input bytes. Throws PipelineError.
PipelineResult run_pipeline(const PipelineConfig& config);

}  // namespace wsskit
