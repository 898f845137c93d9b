#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string_view>
#include <vector>

#include "wsskit/field_series.hpp"

namespace wsskit {

enum class IndicatorKind { osi, osi_longitudinal, tawss, mean_wss_longitudinal };

/// VTK/CSV field name: OSI, OSI_L, TAWSS, MEAN_WSS_L.
std::string_view indicator_name(IndicatorKind kind);

/// Per-vertex flag codes.
enum IndicatorFlag : std::uint8_t {
  kUnflagged = 0,
  kNoShear = 1,   // integral of |tau| below kZeroShear; value set to 0
  kMasked = 2,    // upstream mask (degenerate tangent); value NaN
};

/// Below this denominator the oscillatory indices are set to 0 and flagged.
inline constexpr double kZeroShear = 1e-14;

struct IndicatorField {
  std::vector<double> values;
  IndicatorKind indicator = IndicatorKind::osi;
  TimeWindow window;
  std::vector<std::uint8_t> flags;

  std::size_t size() const { return values.size(); }
  std::size_t flagged_count() const;
};

/// Window used by the indicators: `window` if given, else the series'
/// stored window, else the full sampled range. Throws
/// Errc::window_out_of_range when it is not covered by the samples or the
/// series has fewer than two samples.
TimeWindow resolve_window(const WallFieldSeries& series, std::optional<TimeWindow> window);

/// All time integrals are trapezoidal over the samples inside the window,
/// with the window ends linearly interpolated, accumulated in ascending time.

/// 0.5 * (1 - |int tau dt| / int |tau| dt), in [0, 0.5]. Vector WSS input.
IndicatorField osi_vector(const WallFieldSeries& wss, std::optional<TimeWindow> window = std::nullopt,
                         double zero_shear = kZeroShear);

/// 0.5 * (1 - int tau_l dt / int |tau_l| dt), in [0, 1]. Scalar input.
IndicatorField osi_longitudinal(const WallFieldSeries& wss_l, std::optional<TimeWindow> window = std::nullopt,
                               double zero_shear = kZeroShear);

/// Time average of |tau| (vector input) or |s| (scalar input).
IndicatorField tawss(const WallFieldSeries& wss, std::optional<TimeWindow> window = std::nullopt,
                    double zero_shear = kZeroShear);

/// Time average of a scalar series.
IndicatorField temporal_mean(const WallFieldSeries& scalar, std::optional<TimeWindow> window = std::nullopt);

/// Accepts the output names and the short CLI forms osi, osil, tawss, meanl.
IndicatorKind parse_indicator_kind(std::string_view text);

/// CSV with header vertex_id,value,flagged.
void write_indicator_csv(std::ostream& out, const IndicatorField& field);
void save_indicator_csv(const std::filesystem::path& path, const IndicatorField& field);

/// Reads the value column of a vertex_id,value[,...] CSV (header optional,
/// ids must run 0..n-1). Throws Errc::parse and Errc::io.
std::vector<double> load_vertex_values(const std::filesystem::path& path);

}  // namespace wsskit
