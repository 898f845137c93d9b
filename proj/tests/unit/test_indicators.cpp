#include <doctest.h>

#include <cmath>
#include <numbers>
#include <sstream>

#include "support.hpp"
#include "wsskit/indicators.hpp"

using namespace wsskit;
using namespace wsskit::test;

namespace {

constexpr double kPi = std::numbers::pi;

double osil_of(const std::vector<double>& t, const std::vector<double>& s) {
  return osi_longitudinal(scalar_series(t, s)).values[0];
}

// Independent oracle: exact integrals of the piecewise-linear interpolant.
std::pair<double, double> linear_integrals(const std::vector<double>& t, const std::vector<double>& s) {
  double signed_int = 0.0, abs_int = 0.0;
  for (std::size_t i = 0; i + 1 < t.size(); ++i) {
    const double h = t[i + 1] - t[i];
    const double a = s[i], b = s[i + 1];
    signed_int += 0.5 * h * (a + b);
    if (a * b >= 0.0) {
      abs_int += 0.5 * h * (std::abs(a) + std::abs(b));
    } else {
      const double r = std::abs(a) / (std::abs(a) + std::abs(b));
      abs_int += 0.5 * h * (r * std::abs(a) + (1.0 - r) * std::abs(b));
    }
  }
  return {signed_int, abs_int};
}

}  // namespace

TEST_SUITE("indicators") {
  TEST_CASE("vector OSI examples") {
    const auto t = uniform_times(0.0, 1.0, 101);
    std::vector<Vec3> constant(t.size(), Vec3{1, 2, 0}), wave, rotating;
    const Vec3 d = normalized({1, 1, 0});
    for (double x : t) {
      wave.push_back(std::sin(2 * kPi * x) * d);
      rotating.push_back({std::cos(2 * kPi * x), std::sin(2 * kPi * x), 0});
    }
    CHECK(std::abs(osi_vector(vector_series(t, constant)).values[0]) < 1e-15);
    CHECK(std::abs(osi_vector(vector_series(t, wave)).values[0] - 0.5) < 1e-6);
    CHECK(std::abs(osi_vector(vector_series(t, rotating)).values[0] - 0.5) < 1e-6);
  }

  TEST_CASE("longitudinal OSI examples") {
    const auto t = uniform_times(0.0, 1.0, 11);
    CHECK(osil_of(t, std::vector<double>(11, 2.5)) == 0.0);
    CHECK(osil_of(t, std::vector<double>(11, -2.5)) == 1.0);
    // +2 on the first half, -1 on the second, switching at a sample instant.
    const std::vector<double> tt{0.0, 0.5, 0.5 + 1e-12, 1.0};
    const double v = osil_of(tt, {2.0, 2.0, -1.0, -1.0});
    const auto [s, a] = linear_integrals(tt, {2.0, 2.0, -1.0, -1.0});
    // The trapezoid rule departs from the exact |s| integral only inside the 1e-12 s crossing segment.
    CHECK(std::abs(v - 0.5 * (1.0 - s / a)) < 1e-12);
    CHECK(std::abs(v - 1.0 / 3.0) < 1e-11);
  }

  TEST_CASE("TAWSS examples") {
    const auto t = uniform_times(0.0, 1.0, 201);
    std::vector<Vec3> constant(t.size(), Vec3{3, 4, 0}), wave, zero(t.size());
    const Vec3 d{0, 0, 2.5};
    for (double x : t) wave.push_back(std::sin(2 * kPi * x) * d);
    CHECK(tawss(vector_series(t, constant)).values[0] == doctest::Approx(5.0).epsilon(1e-15));
    CHECK(std::abs(tawss(vector_series(t, wave)).values[0] - 2.0 / kPi * 2.5) < 1e-3);
    const auto z = tawss(vector_series(t, zero));
    CHECK(z.values[0] == 0.0);
    CHECK(z.flags[0] == kNoShear);
  }

  TEST_CASE("temporal mean examples") {
    const auto t = uniform_times(0.0, 1.0, 64);
    std::vector<double> sine, ramp;
    for (double x : t) {
      sine.push_back(std::sin(2 * kPi * x));
      ramp.push_back(x);
    }
    CHECK(temporal_mean(scalar_series(t, std::vector<double>(64, 3.25))).values[0] == doctest::Approx(3.25));
    CHECK(std::abs(temporal_mean(scalar_series(t, sine)).values[0]) < 1e-9);
    CHECK(temporal_mean(scalar_series(t, ramp)).values[0] == doctest::Approx(0.5).epsilon(1e-15));
  }

  TEST_CASE("zero denominator gives zero and a flag") {
    const auto t = uniform_times(0.0, 1.0, 5);
    const auto f = osi_longitudinal(scalar_series(t, std::vector<double>(5, 0.0)));
    CHECK(f.values[0] == 0.0);
    CHECK(f.flags[0] == kNoShear);
    CHECK(f.flagged_count() == 1);
    const auto g = osi_vector(vector_series(t, std::vector<Vec3>(5)));
    CHECK(g.values[0] == 0.0);
    CHECK(g.flags[0] == kNoShear);
  }

  TEST_CASE("masked vertices propagate") {
    auto s = WallFieldSeries(FieldKind::scalar, 2, {0.0, 1.0}, {{1.0, std::nan("")}, {1.0, std::nan("")}});
    s.set_mask({0, 1});
    const auto f = osi_longitudinal(s);
    CHECK(f.flags[0] == kUnflagged);
    CHECK(f.flags[1] == kMasked);
    CHECK(std::isnan(f.values[1]));
    CHECK(std::isnan(temporal_mean(s).values[1]));
  }

  TEST_CASE("window handling") {
    const auto t = uniform_times(0.0, 1.8, 19);
    std::vector<double> s;
    for (std::size_t i = 0; i < t.size(); ++i) s.push_back(i < 9 ? -1.0 : 1.0);
    auto series = scalar_series(t, s);
    const TimeWindow second{t[9], 1.8};
    CHECK(osi_longitudinal(series, second).values[0] == 0.0);
    CHECK(osi_longitudinal(series, second).window.begin == t[9]);
    series.set_window(second);
    CHECK(osi_longitudinal(series).values[0] == 0.0);
    // Interior window ends are interpolated between samples.
    const auto ramp = scalar_series({0.0, 1.0}, {0.0, 1.0});
    CHECK(temporal_mean(ramp, TimeWindow{0.25, 0.75}).values[0] == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(error_code([&] { osi_longitudinal(scalar_series(t, s), TimeWindow{0.5, 2.0}); }) == Errc::window_out_of_range);
    CHECK(error_code([&] { osi_longitudinal(scalar_series({0.0}, {1.0})); }) == Errc::window_out_of_range);
  }

  TEST_CASE("range, scale and reversal properties on random series") {
    std::mt19937_64 rng(37);
    std::uniform_real_distribution<double> u(-3.0, 3.0);
    for (int trial = 0; trial < 500; ++trial) {
      const std::size_t n = 2 + trial % 30;
      std::vector<double> t(n), s(n);
      double clock = u(rng);
      for (std::size_t i = 0; i < n; ++i) {
        clock += 0.01 + std::abs(u(rng));
        t[i] = clock;
        s[i] = u(rng) + (trial % 3 == 0 ? 2.0 : 0.0);
      }
      std::vector<Vec3> v(n);
      for (auto& x : v) x = random_vec(rng, 2.0);
      const double osil = osil_of(t, s);
      const double osi = osi_vector(vector_series(t, v)).values[0];
      CHECK(osil >= 0.0);
      CHECK(osil <= 1.0);
      CHECK(osi >= 0.0);
      CHECK(osi <= 0.5);

      const double lambda = 0.1 + std::abs(u(rng));
      std::vector<double> s_pos(s), s_neg(s);
      std::vector<Vec3> v_pos(v), v_neg(v);
      for (auto& x : s_pos) x *= lambda;
      for (auto& x : s_neg) x *= -lambda;
      for (auto& x : v_pos) x *= lambda;
      for (auto& x : v_neg) x *= -lambda;
      CHECK(osil_of(t, s_pos) == doctest::Approx(osil).epsilon(1e-12).scale(1.0));
      CHECK(osil_of(t, s_neg) == doctest::Approx(1.0 - osil).epsilon(1e-12).scale(1.0));
      CHECK(osi_vector(vector_series(t, v_pos)).values[0] == doctest::Approx(osi).epsilon(1e-12).scale(1.0));
      CHECK(osi_vector(vector_series(t, v_neg)).values[0] == doctest::Approx(osi).epsilon(1e-12).scale(1.0));

      const double mean = temporal_mean(scalar_series(t, s)).values[0];
      if (std::abs(mean) > 1e-9) CHECK((osil > 0.5) == (mean < 0.0));
    }
  }

  TEST_CASE("trapezoid is exact for piecewise-linear series with sign changes at samples") {
    std::mt19937_64 rng(41);
    std::uniform_real_distribution<double> u(0.1, 2.0);
    for (int trial = 0; trial < 200; ++trial) {
      std::vector<double> t{0.0}, s{0.0};
      for (int k = 0; k < 12; ++k) {
        t.push_back(t.back() + u(rng));
        // Zero crossings only at sample instants: sign alternates with zeros in between.
        s.push_back(k % 2 == 1 ? 0.0 : (k % 4 == 0 ? 1.0 : -1.0) * u(rng));
      }
      const auto [si, ai] = linear_integrals(t, s);
      CHECK(std::abs(osil_of(t, s) - 0.5 * (1.0 - si / ai)) < 1e-12);
    }
  }

  TEST_CASE("indicator names and CSV") {
    CHECK(parse_indicator_kind("osil") == IndicatorKind::osi_longitudinal);
    CHECK(parse_indicator_kind("TAWSS") == IndicatorKind::tawss);
    CHECK(indicator_name(IndicatorKind::mean_wss_longitudinal) == "MEAN_WSS_L");
    CHECK(error_code([] { parse_indicator_kind("rrt"); }) == Errc::bad_argument);
    IndicatorField f;
    f.values = {0.25, 0.0};
    f.flags = {kUnflagged, kNoShear};
    std::stringstream out;
    write_indicator_csv(out, f);
    CHECK(out.str() == "vertex_id,value,flagged\n0,0.25,0\n1,0,1\n");
  }
}
