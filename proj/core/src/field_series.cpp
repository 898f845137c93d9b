#include "wsskit/field_series.hpp"

#include <bit>
#include <cctype>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>

#include "wsskit/error.hpp"
#include "wsskit/format.hpp"

namespace wsskit {

std::string_view field_kind_name(FieldKind kind) {
  switch (kind) {
    case FieldKind::traction_vector: return "traction_vector";
    case FieldKind::stress_tensor: return "stress_tensor";
    case FieldKind::scalar: return "scalar";
  }
  return "scalar";
}

FieldKind parse_field_kind(std::string_view name) {
  if (name == "traction_vector" || name == "traction" || name == "vector") return FieldKind::traction_vector;
  if (name == "stress_tensor" || name == "stress" || name == "tensor") return FieldKind::stress_tensor;
  if (name == "scalar") return FieldKind::scalar;
  fail(Errc::parse, "unknown field kind '" + std::string(name) + "'");
}

std::size_t component_count(FieldKind kind) {
  switch (kind) {
    case FieldKind::traction_vector: return 3;
    case FieldKind::stress_tensor: return 9;
    case FieldKind::scalar: return 1;
  }
  return 1;
}

TimeWindow parse_window(std::string_view text) {
  const auto parts = split(text, ':');
  if (parts.size() != 2) fail(Errc::bad_argument, "window must be a:b, got '" + std::string(text) + "'");
  TimeWindow w;
  try {
    w = {parse_double(parts[0], "window start"), parse_double(parts[1], "window end")};
  } catch (const Error& e) {
    fail(Errc::bad_argument, e.what());
  }
  if (!(w.begin < w.end)) fail(Errc::bad_argument, "window start must be below window end: '" + std::string(text) + "'");
  return w;
}

WallFieldSeries::WallFieldSeries(FieldKind kind, std::size_t vertex_count, std::vector<double> times,
                                 std::vector<std::vector<double>> samples, std::optional<TimeWindow> window)
    : kind_(kind), vertex_count_(vertex_count), times_(std::move(times)), samples_(std::move(samples)) {
  if (times_.size() != samples_.size())
    fail(Errc::length_mismatch, std::to_string(times_.size()) + " times but " + std::to_string(samples_.size()) +
                                    " sample slices");
  for (std::size_t i = 1; i < times_.size(); ++i)
    if (!(times_[i] > times_[i - 1]))
      fail(Errc::parse, "sample times must be strictly increasing (t[" + std::to_string(i) + "] = " +
                            format_roundtrip(times_[i]) + ")");
  const std::size_t expected = vertex_count_ * component_count(kind_);
  for (std::size_t t = 0; t < samples_.size(); ++t)
    if (samples_[t].size() != expected)
      fail(Errc::length_mismatch, "time slice " + std::to_string(t) + " holds " + std::to_string(samples_[t].size()) +
                                      " values, expected " + std::to_string(expected));
  set_window(window);
}

Mat3 WallFieldSeries::tensor(std::size_t t, std::size_t v) const {
  Mat3 m;
  const double* p = samples_[t].data() + 9 * v;
  for (std::size_t i = 0; i < 9; ++i) m.m[i] = p[i];
  return m;
}

void WallFieldSeries::set_window(std::optional<TimeWindow> window) {
  if (window) {
    if (!(window->begin < window->end)) fail(Errc::window_out_of_range, "empty analysis window");
    if (times_.empty() || window->begin < times_.front() || window->end > times_.back())
      fail(Errc::window_out_of_range,
           "window [" + format_roundtrip(window->begin) + ", " + format_roundtrip(window->end) +
               "] is not covered by the samples" +
               (times_.empty() ? std::string()
                               : " [" + format_roundtrip(times_.front()) + ", " + format_roundtrip(times_.back()) + "]"));
  }
  window_ = window;
}

TimeWindow WallFieldSeries::effective_window() const {
  if (window_) return *window_;
  if (times_.empty()) return {};
  return {times_.front(), times_.back()};
}

void WallFieldSeries::set_mask(std::vector<std::uint8_t> mask) {
  if (!mask.empty() && mask.size() != vertex_count_)
    fail(Errc::length_mismatch, "mask has " + std::to_string(mask.size()) + " entries for " +
                                    std::to_string(vertex_count_) + " vertices");
  mask_ = std::move(mask);
}

// ---------------------------------------------------------------- files

namespace {

std::vector<double> parse_list(std::string_view text, std::string_view what) {
  std::vector<double> out;
  for (const auto& part : split(text, ','))
    if (!trim(part).empty()) out.push_back(parse_double(part, what));
  return out;
}

std::vector<double> read_csv_slice(const std::filesystem::path& path, std::size_t components, long long& rows) {
  std::ifstream in(path);
  if (!in) fail(Errc::io, "cannot open series file " + path.string());
  std::vector<double> values;
  std::string line;
  std::size_t line_no = 0;
  long long count = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto text = trim(line);
    if (text.empty() || text.front() == '#') continue;
    if (count == 0 && std::isalpha(static_cast<unsigned char>(text.front()))) continue;  // header
    const auto fields = split(text, ',');
    if (fields.size() != components + 1)
      fail(Errc::parse, path.string() + ":" + std::to_string(line_no) + ": expected " + std::to_string(components + 1) +
                            " columns, got " + std::to_string(fields.size()));
    const auto id = parse_integer(fields[0], "vertex_id");
    if (id != count)
      fail(Errc::parse, path.string() + ":" + std::to_string(line_no) + ": vertex ids must be 0..n-1 in order");
    for (std::size_t c = 0; c < components; ++c) values.push_back(parse_double(fields[c + 1], "component"));
    ++count;
  }
  rows = count;
  return values;
}

std::vector<double> read_binary_slice(const std::filesystem::path& path, std::size_t components, long long& rows) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(Errc::io, "cannot open series file " + path.string());
  std::vector<char> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  const std::size_t stride = 8 * components;
  if (bytes.size() % stride != 0)
    fail(Errc::parse, path.string() + ": size " + std::to_string(bytes.size()) + " is not a multiple of " +
                          std::to_string(stride) + " bytes");
  std::vector<double> values(bytes.size() / 8);
  for (std::size_t i = 0; i < values.size(); ++i) {
    std::uint64_t bits = 0;
    for (std::size_t b = 0; b < 8; ++b)
      bits |= static_cast<std::uint64_t>(static_cast<unsigned char>(bytes[8 * i + b])) << (8 * b);
    values[i] = std::bit_cast<double>(bits);
  }
  rows = static_cast<long long>(values.size() / components);
  return values;
}

}  // namespace

SeriesManifest read_manifest(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) fail(Errc::config, "cannot open series manifest " + path.string());
  SeriesManifest m;
  bool have_kind = false;
  bool have_times = false;
  std::string line;
  std::size_t line_no = 0;
  const auto base = path.parent_path();
  while (std::getline(in, line)) {
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    const auto text = trim(line);
    if (text.empty()) continue;
    const auto eq = text.find('=');
    if (eq == std::string_view::npos)
      fail(Errc::parse, path.string() + ":" + std::to_string(line_no) + ": expected key = value");
    const std::string key(trim(text.substr(0, eq)));
    const std::string value(trim(text.substr(eq + 1)));
    if (key == "mesh") {
      m.mesh = base / value;
    } else if (key == "kind") {
      m.kind = parse_field_kind(value);
      have_kind = true;
    } else if (key == "units") {
      m.units = value;
    } else if (key == "format") {
      if (value == "csv")
        m.format = SeriesFormat::csv;
      else if (value == "binary")
        m.format = SeriesFormat::binary;
      else
        fail(Errc::parse, path.string() + ": unknown format '" + value + "'");
    } else if (key == "window") {
      try {
        m.window = parse_window(value);
      } catch (const Error& e) {
        fail(Errc::parse, path.string() + ": " + e.what());
      }
    } else if (key == "times") {
      m.times = parse_list(value, "time");
      have_times = true;
    } else if (key == "file") {
      m.files.push_back(base / value);
    } else {
      fail(Errc::parse, path.string() + ":" + std::to_string(line_no) + ": unknown key '" + key + "'");
    }
  }
  if (!have_kind) fail(Errc::parse, path.string() + ": missing 'kind'");
  if (!have_times) fail(Errc::parse, path.string() + ": missing 'times'");
  if (m.files.size() != m.times.size())
    fail(Errc::parse, path.string() + ": " + std::to_string(m.times.size()) + " times but " +
                          std::to_string(m.files.size()) + " data files");
  return m;
}

LoadedSeries load_series(const std::filesystem::path& manifest, long long vertex_count) {
  const auto m = read_manifest(manifest);
  const std::size_t components = component_count(m.kind);
  std::vector<std::vector<double>> samples;
  samples.reserve(m.files.size());
  for (const auto& file : m.files) {
    long long rows = 0;
    samples.push_back(m.format == SeriesFormat::csv ? read_csv_slice(file, components, rows)
                                                    : read_binary_slice(file, components, rows));
    if (vertex_count < 0) vertex_count = rows;
    if (rows != vertex_count)
      fail(Errc::length_mismatch, file.string() + " holds " + std::to_string(rows) + " vertices, expected " +
                                      std::to_string(vertex_count));
  }
  if (vertex_count < 0) vertex_count = 0;
  WallFieldSeries series(m.kind, static_cast<std::size_t>(vertex_count), m.times, std::move(samples));
  series.set_window(m.window);
  return {std::move(series), m.mesh};
}

std::filesystem::path save_series(const std::filesystem::path& directory, const std::string& stem,
                                  const WallFieldSeries& series, const std::filesystem::path& mesh,
                                  SeriesFormat format, const std::string& units) {
  std::filesystem::create_directories(directory);
  const std::size_t components = component_count(series.kind());
  std::ostringstream manifest;
  manifest << "mesh = " << mesh.generic_string() << '\n';
  manifest << "kind = " << field_kind_name(series.kind()) << '\n';
  manifest << "units = " << units << '\n';
  manifest << "format = " << (format == SeriesFormat::csv ? "csv" : "binary") << '\n';
  if (series.window())
    manifest << "window = " << format_roundtrip(series.window()->begin) << ':' << format_roundtrip(series.window()->end)
             << '\n';
  manifest << "times = ";
  for (std::size_t t = 0; t < series.time_count(); ++t)
    manifest << (t ? "," : "") << format_roundtrip(series.times()[t]);
  manifest << '\n';
  for (std::size_t t = 0; t < series.time_count(); ++t) {
    char name[32];
    std::snprintf(name, sizeof(name), "_%04zu.%s", t, format == SeriesFormat::csv ? "csv" : "bin");
    const std::string file = stem + name;
    manifest << "file = " << file << '\n';
    const auto slice = series.slice(t);
    std::ofstream out(directory / file, std::ios::binary);
    if (!out) fail(Errc::io, "cannot write " + (directory / file).string());
    if (format == SeriesFormat::csv) {
      out << "vertex_id";
      for (std::size_t c = 0; c < components; ++c) out << ",c" << c;
      out << '\n';
      for (std::size_t v = 0; v < series.vertex_count(); ++v) {
        out << v;
        for (std::size_t c = 0; c < components; ++c) out << ',' << format_roundtrip(slice[v * components + c]);
        out << '\n';
      }
    } else {
      std::vector<char> bytes(8 * slice.size());
      for (std::size_t i = 0; i < slice.size(); ++i) {
        const auto bits = std::bit_cast<std::uint64_t>(slice[i]);
        for (std::size_t b = 0; b < 8; ++b) bytes[8 * i + b] = static_cast<char>((bits >> (8 * b)) & 0xff);
      }
      out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    }
  }
  const auto path = directory / (stem + ".manifest");
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(Errc::io, "cannot write " + path.string());
  out << manifest.str();
  return path;
}

}  // namespace wsskit
