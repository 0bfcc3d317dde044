#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <cstdio>
#include <random>
#include <unistd.h>
#include <string>

#include "test_helpers.hpp"
#include "wfr/field.hpp"
#include "wfr/field_io.hpp"
#include "wfr/rng.hpp"

using wfr::Axis;
using wfr::Field2D;
using wfr_test::make_field;

TEST_CASE("sample stddev matches hand values") {
  Field2D two;
  two.values.resize(2, 1);
  two.values << 0.0, 2.0;
  CHECK(wfr::sample_stddev(two) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-15));

  Field2D constant = make_field(5, 5, 0.1, 0.1, [](double, double) { return 3.5; });
  CHECK(wfr::sample_stddev(constant) == 0.0);

  Field2D one;
  one.values.resize(1, 1);
  one.values << 1.0;
  CHECK_THROWS_AS(wfr::sample_stddev(one), std::invalid_argument);
}

TEST_CASE("gaussian noise is deterministic, scaled, and unbiased") {
  const Field2D base = make_field(200, 100, 0.1, 0.1, [](double x, double t) {
    return std::sin(x) + 0.5 * std::cos(2.0 * t);
  });
  const double s_u = wfr::sample_stddev(base);
  const double sigma = 0.1;

  const Field2D a = wfr::add_gaussian_noise(base, sigma, 42);
  const Field2D b = wfr::add_gaussian_noise(base, sigma, 42);
  const Field2D c = wfr::add_gaussian_noise(base, sigma, 43);
  CHECK(wfr_test::max_abs_diff(a.values, b.values) == 0.0);
  CHECK(wfr_test::max_abs_diff(a.values, c.values) > 0.0);

  const Eigen::MatrixXd noise = a.values - base.values;
  const double n = static_cast<double>(noise.size());
  const double mean = noise.mean();
  const double sd =
      std::sqrt((noise.array() - mean).square().sum() / (n - 1.0));
  // Standard errors: mean ~ sd/sqrt(n), sd ~ sd/sqrt(2n).
  CHECK(std::abs(mean) < 5.0 * sigma * s_u / std::sqrt(n));
  CHECK(std::abs(sd - sigma * s_u) < 5.0 * sigma * s_u / std::sqrt(2.0 * n));

  const Field2D zero = wfr::add_gaussian_noise(base, 0.0, 7);
  CHECK(wfr_test::max_abs_diff(zero.values, base.values) == 0.0);
  CHECK_THROWS_AS(wfr::add_gaussian_noise(base, -0.1, 7), std::invalid_argument);
}

TEST_CASE("downsampling composes and rescales spacings") {
  const Field2D base = make_field(64, 48, 0.25, 0.5, [](double x, double t) {
    return std::sin(0.3 * x) * std::cos(0.2 * t) + x - t;
  });
  const Field2D d2 = wfr::downsample(base, 2, 2);
  const Field2D d4a = wfr::downsample(d2, 2, 2);
  const Field2D d4b = wfr::downsample(base, 4, 4);
  CHECK(wfr_test::max_abs_diff(d4a.values, d4b.values) == 0.0);
  CHECK(d4a.delta_x == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(d4a.delta_t == doctest::Approx(2.0).epsilon(1e-15));
  CHECK(d4a.nx() == 16);
  CHECK(d4a.nt() == 12);
  CHECK(d2.values(3, 5) == base.values(6, 10));

  CHECK_THROWS_AS(wfr::downsample(base, 0, 1), std::invalid_argument);
  CHECK_THROWS_AS(wfr::downsample(base, 1, 48), std::invalid_argument);
}

TEST_CASE("crop keeps the leading samples spanning the requested extent") {
  const Field2D base =
      make_field(101, 51, 0.1, 0.2, [](double x, double t) { return x + t; });
  const Field2D cropped = wfr::crop_extent(base, 5.0, 4.0);
  CHECK(cropped.nx() == 51);
  CHECK(cropped.nt() == 21);
  CHECK(cropped.values(50, 20) == base.values(50, 20));
  CHECK(cropped.delta_x == base.delta_x);

  const Field2D untouched = wfr::crop_extent(base, 0.0, -1.0);
  CHECK(untouched.nx() == base.nx());
  CHECK(untouched.nt() == base.nt());

  const Field2D huge = wfr::crop_extent(base, 1e9, 1e9);
  CHECK(huge.nx() == base.nx());

  const Field2D tiny = wfr::crop_extent(base, 1e-6, 1e-6);
  CHECK(tiny.nx() == 2);
  CHECK(tiny.nt() == 2);
}

TEST_CASE("power spectrum finds the planted mode and normalizes to 1") {
  const Eigen::Index n = 256;
  Field2D field;
  field.values.resize(n, 8);
  field.delta_x = 1.0;
  field.delta_t = 1.0;
  for (Eigen::Index ix = 0; ix < n; ++ix) {
    for (Eigen::Index it = 0; it < 8; ++it) {
      field.values(ix, it) =
          std::sin(2.0 * wfr_test::kPi * 8.0 * static_cast<double>(ix) /
                   static_cast<double>(n));
    }
  }
  const wfr::SpectrumProfile profile = wfr::power_spectrum(field, Axis::x);
  REQUIRE(profile.frequency.size() == profile.magnitude.size());
  CHECK(profile.frequency[0] == 0.0);
  std::size_t peak = 0;
  for (std::size_t i = 0; i < profile.magnitude.size(); ++i) {
    if (profile.magnitude[i] > profile.magnitude[peak]) peak = i;
  }
  CHECK(peak == 8);
  CHECK(profile.magnitude[peak] == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(profile.frequency[8] ==
        doctest::Approx(2.0 * wfr_test::kPi * 8.0 / field.extent_x()).epsilon(1e-12));

  // Adding a constant only changes the zero-frequency bin: ratios between
  // nonzero bins are unchanged.
  Field2D shifted = field;
  shifted.values.array() += 0.37;
  const wfr::SpectrumProfile profile2 = wfr::power_spectrum(shifted, Axis::x);
  for (std::size_t i = 1; i < profile.magnitude.size(); ++i) {
    const double r1 = profile.magnitude[i] / profile.magnitude[peak];
    const double r2 = profile2.magnitude[i] / profile2.magnitude[peak];
    CHECK(std::abs(r1 - r2) < 1e-10);
  }

  Field2D small;
  small.values.resize(3, 5);
  small.values.setOnes();
  CHECK_THROWS_AS(wfr::power_spectrum(small, Axis::x), std::invalid_argument);
}

TEST_CASE("windowed spectrum with zero envelope over the full grid equals the plain spectrum") {
  std::mt19937_64 engine(99);
  Field2D field;
  field.values.resize(65, 33);
  field.delta_x = 0.2;
  field.delta_t = 0.5;
  for (Eigen::Index ix = 0; ix < field.nx(); ++ix) {
    for (Eigen::Index it = 0; it < field.nt(); ++it) {
      field.values(ix, it) = wfr::uniform_unit(engine) - 0.5;
    }
  }
  wfr::IntegrationDomain whole;
  whole.center_x = 32;
  whole.center_t = 16;
  whole.half_cells_x = 32;
  whole.half_cells_t = 16;
  REQUIRE(whole.fits(field.grid()));

  for (Axis axis : {Axis::x, Axis::t}) {
    const wfr::SpectrumProfile plain = wfr::power_spectrum(field, axis);
    const wfr::SpectrumProfile windowed =
        wfr::windowed_spectrum(field, whole, 0, 0, axis);
    REQUIRE(plain.frequency.size() == windowed.frequency.size());
    for (std::size_t i = 0; i < plain.frequency.size(); ++i) {
      CHECK(plain.frequency[i] ==
            doctest::Approx(windowed.frequency[i]).epsilon(1e-12));
      CHECK(plain.magnitude[i] ==
            doctest::Approx(windowed.magnitude[i]).epsilon(1e-10));
    }
  }
}

TEST_CASE("correlation scales match the analytic 1/e crossing of a cosine") {
  // For u = cos(k0 x) cos(w0 t) the normalized autocorrelation along x is
  // cos(k0 lag), which first reaches 1/e at arccos(1/e)/k0 = 1.19429/k0.
  const double k0 = 1.0;
  const double w0 = 2.0;
  const Field2D field =
      make_field(1601, 1201, 0.05, 0.05, [&](double x, double t) {
        return std::cos(k0 * x) * std::cos(w0 * t);
      });
  const wfr::CorrelationScales scales = wfr::correlation_scales(field);
  const double crossing = std::acos(std::exp(-1.0));
  CHECK(scales.length_x == doctest::Approx(crossing / k0).epsilon(0.02));
  CHECK(scales.length_t == doctest::Approx(crossing / w0).epsilon(0.02));

  // Affine rescalings of the values leave the correlation scales unchanged.
  Field2D affine = field;
  affine.values = 7.0 * affine.values.array() - 3.0;
  const wfr::CorrelationScales scales2 = wfr::correlation_scales(affine);
  CHECK(scales2.length_x == doctest::Approx(scales.length_x).epsilon(1e-12));
  CHECK(scales2.length_t == doctest::Approx(scales.length_t).epsilon(1e-12));
}

TEST_CASE("white noise decorrelates within two grid spacings") {
  wfr::GaussianSampler gauss(1234);
  Field2D field;
  field.values.resize(400, 300);
  field.delta_x = 0.1;
  field.delta_t = 0.2;
  for (Eigen::Index ix = 0; ix < field.nx(); ++ix) {
    for (Eigen::Index it = 0; it < field.nt(); ++it) {
      field.values(ix, it) = gauss.next();
    }
  }
  const wfr::CorrelationScales scales = wfr::correlation_scales(field);
  CHECK(scales.length_x <= 2.0 * field.delta_x);
  CHECK(scales.length_t <= 2.0 * field.delta_t);
}

TEST_CASE("field files round-trip bit for bit and corruption is located") {
  const Field2D base = make_field(17, 9, 0.125, 0.25,
                                  [](double x, double t) { return x * t + 1.0; },
                                  -2.0, 3.0);
  const std::string path = "test_field_roundtrip.field";
  wfr::write_field(base, path);
  const Field2D loaded = wfr::read_field(path);
  CHECK(wfr_test::max_abs_diff(base.values, loaded.values) == 0.0);
  CHECK(loaded.delta_x == base.delta_x);
  CHECK(loaded.delta_t == base.delta_t);
  CHECK(loaded.origin_x == base.origin_x);
  CHECK(loaded.origin_t == base.origin_t);

  // Corrupt the magic: the error must point at byte offset 0.
  {
    std::FILE* f = std::fopen(path.c_str(), "r+b");
    REQUIRE(f != nullptr);
    std::fputc('X', f);
    std::fclose(f);
    try {
      (void)wfr::read_field(path);
      FAIL("expected a read error");
    } catch (const std::runtime_error& e) {
      CHECK(std::string(e.what()).find("offset 0") != std::string::npos);
    }
  }

  // Rewrite, then truncate the payload: the error names an offset past the
  // header.
  wfr::write_field(base, path);
  {
    std::FILE* f = std::fopen(path.c_str(), "r+b");
    REQUIRE(f != nullptr);
    REQUIRE(::ftruncate(::fileno(f), 64) == 0);
    std::fclose(f);
    CHECK_THROWS_AS((void)wfr::read_field(path), std::runtime_error);
  }

  CHECK_THROWS_AS((void)wfr::read_field("does_not_exist.field"),
                  std::runtime_error);
  std::remove(path.c_str());
}
