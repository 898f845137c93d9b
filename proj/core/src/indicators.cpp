#include "wsskit/indicators.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <limits>

#include "wsskit/error.hpp"
#include "wsskit/format.hpp"
#include "wsskit/parallel.hpp"

namespace wsskit {

std::string_view indicator_name(IndicatorKind kind) {
  switch (kind) {
    case IndicatorKind::osi: return "OSI";
    case IndicatorKind::osi_longitudinal: return "OSI_L";
    case IndicatorKind::tawss: return "TAWSS";
    case IndicatorKind::mean_wss_longitudinal: return "MEAN_WSS_L";
  }
  return "OSI";
}

std::size_t IndicatorField::flagged_count() const {
  std::size_t n = 0;
  for (auto f : flags) n += f != kUnflagged;
  return n;
}

TimeWindow resolve_window(const WallFieldSeries& series, std::optional<TimeWindow> window) {
  if (series.time_count() < 2) fail(Errc::window_out_of_range, "temporal indicators need at least 2 samples");
  const TimeWindow w = window ? *window : series.effective_window();
  const auto times = series.times();
  if (!(w.begin < w.end) || w.begin < times.front() || w.end > times.back())
    fail(Errc::window_out_of_range, "window [" + format_roundtrip(w.begin) + ", " + format_roundtrip(w.end) +
                                        "] is not covered by the samples [" + format_roundtrip(times.front()) + ", " +
                                        format_roundtrip(times.back()) + "]");
  return w;
}

namespace {

// Quadrature node: value = (1 - a) * x[i0] + a * x[i1].
struct Node {
  double t;
  std::size_t i0;
  std::size_t i1;
  double a;
};

std::vector<Node> window_nodes(std::span<const double> times, const TimeWindow& w) {
  auto at = [&](double t) {
    const auto it = std::lower_bound(times.begin(), times.end(), t);
    const auto i = static_cast<std::size_t>(it - times.begin());
    if (*it == t) return Node{t, i, i, 0.0};
    return Node{t, i - 1, i, (t - times[i - 1]) / (times[i] - times[i - 1])};
  };
  std::vector<Node> nodes{at(w.begin)};
  for (std::size_t i = 0; i < times.size(); ++i)
    if (times[i] > w.begin && times[i] < w.end) nodes.push_back({times[i], i, i, 0.0});
  nodes.push_back(at(w.end));
  return nodes;
}

template <typename T, typename Get>
T node_value(const Node& n, Get&& get) {
  if (n.a == 0.0) return get(n.i0);
  return (1.0 - n.a) * get(n.i0) + n.a * get(n.i1);
}

struct Prepared {
  TimeWindow window;
  std::vector<Node> nodes;
};

Prepared prepare(const WallFieldSeries& s, std::optional<TimeWindow> window) {
  Prepared p;
  p.window = resolve_window(s, window);
  p.nodes = window_nodes(s.times(), p.window);
  return p;
}

IndicatorField blank(const WallFieldSeries& s, IndicatorKind kind, const TimeWindow& w) {
  IndicatorField f;
  f.indicator = kind;
  f.window = w;
  f.values.assign(s.vertex_count(), 0.0);
  f.flags.assign(s.vertex_count(), kUnflagged);
  return f;
}

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

}  // namespace

IndicatorField osi_vector(const WallFieldSeries& wss, std::optional<TimeWindow> window, double zero_shear) {
  if (wss.kind() != FieldKind::traction_vector) fail(Errc::kind_mismatch, "OSI expects a vector WSS series");
  const auto p = prepare(wss, window);
  auto out = blank(wss, IndicatorKind::osi, p.window);
  parallel_for(wss.vertex_count(), [&](std::size_t v) {
    if (wss.masked(v)) {
      out.values[v] = kNaN;
      out.flags[v] = kMasked;
      return;
    }
    Vec3 integral;
    double magnitude = 0.0;
    Vec3 prev = node_value<Vec3>(p.nodes[0], [&](std::size_t i) { return wss.vector(i, v); });
    for (std::size_t k = 1; k < p.nodes.size(); ++k) {
      const Vec3 cur = node_value<Vec3>(p.nodes[k], [&](std::size_t i) { return wss.vector(i, v); });
      const double dt = p.nodes[k].t - p.nodes[k - 1].t;
      integral += 0.5 * dt * (prev + cur);
      magnitude += 0.5 * dt * (norm(prev) + norm(cur));
      prev = cur;
    }
    if (magnitude < zero_shear) {
      out.flags[v] = kNoShear;
      return;
    }
    out.values[v] = std::clamp(0.5 * (1.0 - norm(integral) / magnitude), 0.0, 0.5);
  });
  return out;
}

IndicatorField osi_longitudinal(const WallFieldSeries& wss_l, std::optional<TimeWindow> window, double zero_shear) {
  if (wss_l.kind() != FieldKind::scalar) fail(Errc::kind_mismatch, "OSI_L expects a scalar longitudinal WSS series");
  const auto p = prepare(wss_l, window);
  auto out = blank(wss_l, IndicatorKind::osi_longitudinal, p.window);
  parallel_for(wss_l.vertex_count(), [&](std::size_t v) {
    if (wss_l.masked(v)) {
      out.values[v] = kNaN;
      out.flags[v] = kMasked;
      return;
    }
    double integral = 0.0;
    double magnitude = 0.0;
    double prev = node_value<double>(p.nodes[0], [&](std::size_t i) { return wss_l.scalar(i, v); });
    for (std::size_t k = 1; k < p.nodes.size(); ++k) {
      const double cur = node_value<double>(p.nodes[k], [&](std::size_t i) { return wss_l.scalar(i, v); });
      const double dt = p.nodes[k].t - p.nodes[k - 1].t;
      integral += 0.5 * dt * (prev + cur);
      magnitude += 0.5 * dt * (std::abs(prev) + std::abs(cur));
      prev = cur;
    }
    if (magnitude < zero_shear) {
      out.flags[v] = kNoShear;
      return;
    }
    out.values[v] = std::clamp(0.5 * (1.0 - integral / magnitude), 0.0, 1.0);
  });
  return out;
}

IndicatorField tawss(const WallFieldSeries& wss, std::optional<TimeWindow> window, double zero_shear) {
  if (wss.kind() == FieldKind::stress_tensor) fail(Errc::kind_mismatch, "TAWSS expects a WSS series");
  const bool vec = wss.kind() == FieldKind::traction_vector;
  const auto p = prepare(wss, window);
  auto out = blank(wss, IndicatorKind::tawss, p.window);
  const double length = p.window.end - p.window.begin;
  parallel_for(wss.vertex_count(), [&](std::size_t v) {
    if (wss.masked(v)) {
      out.values[v] = kNaN;
      out.flags[v] = kMasked;
      return;
    }
    auto mag = [&](const Node& n) {
      return vec ? norm(node_value<Vec3>(n, [&](std::size_t i) { return wss.vector(i, v); }))
                 : std::abs(node_value<double>(n, [&](std::size_t i) { return wss.scalar(i, v); }));
    };
    double integral = 0.0;
    double prev = mag(p.nodes[0]);
    for (std::size_t k = 1; k < p.nodes.size(); ++k) {
      const double cur = mag(p.nodes[k]);
      integral += 0.5 * (p.nodes[k].t - p.nodes[k - 1].t) * (prev + cur);
      prev = cur;
    }
    if (integral < zero_shear) out.flags[v] = kNoShear;
    out.values[v] = integral / length;
  });
  return out;
}

IndicatorField temporal_mean(const WallFieldSeries& scalar, std::optional<TimeWindow> window) {
  if (scalar.kind() != FieldKind::scalar) fail(Errc::kind_mismatch, "temporal_mean expects a scalar series");
  const auto p = prepare(scalar, window);
  auto out = blank(scalar, IndicatorKind::mean_wss_longitudinal, p.window);
  const double length = p.window.end - p.window.begin;
  parallel_for(scalar.vertex_count(), [&](std::size_t v) {
    if (scalar.masked(v)) {
      out.values[v] = kNaN;
      out.flags[v] = kMasked;
      return;
    }
    double integral = 0.0;
    double prev = node_value<double>(p.nodes[0], [&](std::size_t i) { return scalar.scalar(i, v); });
    for (std::size_t k = 1; k < p.nodes.size(); ++k) {
      const double cur = node_value<double>(p.nodes[k], [&](std::size_t i) { return scalar.scalar(i, v); });
      integral += 0.5 * (p.nodes[k].t - p.nodes[k - 1].t) * (prev + cur);
      prev = cur;
    }
    out.values[v] = integral / length;
  });
  return out;
}

IndicatorKind parse_indicator_kind(std::string_view text) {
  if (text == "osi" || text == "OSI") return IndicatorKind::osi;
  if (text == "osil" || text == "OSI_L") return IndicatorKind::osi_longitudinal;
  if (text == "tawss" || text == "TAWSS") return IndicatorKind::tawss;
  if (text == "meanl" || text == "MEAN_WSS_L") return IndicatorKind::mean_wss_longitudinal;
  fail(Errc::bad_argument, "unknown indicator '" + std::string(text) + "' (expected osi, osil, tawss or meanl)");
}

void write_indicator_csv(std::ostream& out, const IndicatorField& field) {
  out << "vertex_id,value,flagged\n";
  for (std::size_t v = 0; v < field.size(); ++v)
    out << v << ',' << format_roundtrip(field.values[v]) << ',' << int(field.flags[v]) << '\n';
}

void save_indicator_csv(const std::filesystem::path& path, const IndicatorField& field) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(Errc::io, "cannot write " + path.string());
  write_indicator_csv(out, field);
}

std::vector<double> load_vertex_values(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) fail(Errc::io, "cannot open " + path.string());
  std::vector<double> values;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto text = trim(line);
    if (text.empty() || text.front() == '#') continue;
    if (values.empty() && std::isalpha(static_cast<unsigned char>(text.front()))) continue;
    const auto f = split(text, ',');
    if (f.size() < 2) fail(Errc::parse, path.string() + ":" + std::to_string(line_no) + ": expected vertex_id,value");
    if (parse_integer(f[0], "vertex id") != static_cast<long long>(values.size()))
      fail(Errc::parse, path.string() + ":" + std::to_string(line_no) + ": vertex ids must be consecutive from 0");
    values.push_back(parse_double(f[1], "value"));
  }
  return values;
}

}  // namespace wsskit
