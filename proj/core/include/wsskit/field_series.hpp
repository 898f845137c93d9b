#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "wsskit/geometry.hpp"

namespace wsskit {

enum class FieldKind { traction_vector, stress_tensor, scalar };

std::string_view field_kind_name(FieldKind kind);
FieldKind parse_field_kind(std::string_view name);
std::size_t component_count(FieldKind kind);

/// Analysis interval [begin, end] in seconds.
struct TimeWindow {
  double begin = 0.0;
  double end = 0.0;
};

/// Parses "a:b" (Errc::bad_argument unless a < b).
TimeWindow parse_window(std::string_view text);

/// Time-stamped per-vertex samples. Components per vertex: 3 for traction
/// and WSS vectors, 9 (row-major) for stress tensors, 1 for scalars.
class WallFieldSeries {
 public:
  WallFieldSeries() = default;

  /// Validates strictly increasing times, per-time sample sizes and the
  /// window (Errc::window_out_of_range when it leaves the sampled range).
  WallFieldSeries(FieldKind kind, std::size_t vertex_count, std::vector<double> times,
                  std::vector<std::vector<double>> samples, std::optional<TimeWindow> window = std::nullopt);

  FieldKind kind() const { return kind_; }
  std::size_t vertex_count() const { return vertex_count_; }
  std::size_t time_count() const { return times_.size(); }
  std::span<const double> times() const { return times_; }

  /// Flat component array of time slice t.
  std::span<const double> slice(std::size_t t) const { return samples_[t]; }

  Vec3 vector(std::size_t t, std::size_t v) const {
    const double* p = samples_[t].data() + 3 * v;
    return {p[0], p[1], p[2]};
  }
  Mat3 tensor(std::size_t t, std::size_t v) const;
  double scalar(std::size_t t, std::size_t v) const { return samples_[t][v]; }

  const std::optional<TimeWindow>& window() const { return window_; }
  void set_window(std::optional<TimeWindow> window);

  /// Stored window, or the full sampled range when none is set.
  TimeWindow effective_window() const;

  /// Per-vertex invalidity flags carried from upstream stages (e.g. a
  /// degenerate tangent). Empty means every vertex is valid.
  std::span<const std::uint8_t> mask() const { return mask_; }
  void set_mask(std::vector<std::uint8_t> mask);
  bool masked(std::size_t v) const { return !mask_.empty() && mask_[v] != 0; }

 private:
  FieldKind kind_ = FieldKind::scalar;
  std::size_t vertex_count_ = 0;
  std::vector<double> times_;
  std::vector<std::vector<double>> samples_;
  std::optional<TimeWindow> window_;
  std::vector<std::uint8_t> mask_;
};

enum class SeriesFormat { csv, binary };

struct SeriesManifest {
  std::filesystem::path mesh;  // as written in the manifest, resolved against its directory
  FieldKind kind = FieldKind::traction_vector;
  std::string units = "N/m^2";
  SeriesFormat format = SeriesFormat::csv;
  std::optional<TimeWindow> window;
  std::vector<double> times;
  std::vector<std::filesystem::path> files;
};

/// Manifest is plain text, one `key = value` per line, '#' comments:
///   mesh = cylinder.off
///   kind = traction_vector | stress_tensor | scalar
///   units = N/m^2
///   format = csv | binary
///   window = 0.9:1.8            (optional)
///   times = 0,0.01,0.02,...
///   file = series_0000.csv      (one line per time, in time order)
/// CSV data files hold `vertex_id,c0,c1,...` rows after a header line;
/// binary files are packed little-endian float64 components in vertex order.
SeriesManifest read_manifest(const std::filesystem::path& path);

struct LoadedSeries {
  WallFieldSeries series;
  std::filesystem::path mesh;
};

/// Reads a manifest and its data files. Errc::config for a missing manifest,
/// Errc::parse for malformed content, Errc::length_mismatch when a data file
/// does not hold vertex_count rows (vertex_count < 0 skips that check and
/// takes the row count of the first file).
LoadedSeries load_series(const std::filesystem::path& manifest, long long vertex_count = -1);

/// Writes `<stem>.manifest` plus one data file per time into `directory`.
/// Returns the manifest path.
std::filesystem::path save_series(const std::filesystem::path& directory, const std::string& stem,
                                  const WallFieldSeries& series, const std::filesystem::path& mesh,
                                  SeriesFormat format = SeriesFormat::csv, const std::string& units = "N/m^2");

}  // namespace wsskit
