#include <doctest.h>

#include "ghost/speckle.hpp"
#include "oracles.hpp"

using namespace ghost;

namespace {

constexpr double kLambda = 532e-9;

std::vector<SpeckleRealization> ensemble(const SourceSpec& spec, const Grid& g, std::size_t count,
                                         std::uint64_t seed = 99) {
  std::vector<SpeckleRealization> out;
  out.reserve(count);
  for (std::size_t k = 0; k < count; ++k) out.push_back(generate_realization(spec, g, kLambda, seed, k));
  return out;
}

}  // namespace

TEST_CASE("realizations are reproducible and order independent") {
  const Grid g(128, 5e-6);
  SourceSpec spec;
  const auto a = generate_realization(spec, g, kLambda, 42, 17);
  const auto b = generate_realization(spec, g, kLambda, 42, 17);
  CHECK(a.field.values == b.field.values);
  CHECK(a.realization_index == 17);
  CHECK(a.seed_used == 42);
  // Realization 17 does not depend on realizations generated before it.
  for (std::uint64_t k = 0; k < 5; ++k) generate_realization(spec, g, kLambda, 42, k);
  CHECK(generate_realization(spec, g, kLambda, 42, 17).field.values == a.field.values);
  CHECK(generate_realization(spec, g, kLambda, 42, 18).field.values != a.field.values);
  CHECK(generate_realization(spec, g, kLambda, 43, 17).field.values != a.field.values);
  CHECK(realization_seed(1, 2) != realization_seed(2, 1));
}

TEST_CASE("source specification checks") {
  const Grid g(64, 5e-6);
  SourceSpec spec;
  spec.coherence_length = 2e-6;
  CHECK_THROWS_AS(generate_realization(spec, g, kLambda, 1, 0), DomainError);
  spec.coherence_length.reset();
  spec.mean_intensity = 0.0;
  CHECK_THROWS_AS(spec.validate(g), DomainError);
  spec.mean_intensity = 2.0;
  spec.profile = IntensityProfile::gaussian;
  CHECK_THROWS_AS(spec.validate(g), DomainError);
  spec.gaussian_width = 10e-6;
  CHECK(spec.intensity_at(0.0) == 2.0);
  CHECK(spec.intensity_at(10e-6) == doctest::Approx(2.0 * std::exp(-0.5)));
  spec.extent = 20e-6;
  CHECK(spec.intensity_at(11e-6) == 0.0);
}

TEST_CASE("circular Gaussian field statistics") {
  const Grid g(32, 5e-6);
  SourceSpec spec;
  spec.mean_intensity = 2.0;
  const std::size_t n = 10000;
  const auto rs = ensemble(spec, g, n);

  // Zero mean within a 3 sigma band per component.
  Complex mean{};
  for (const auto& r : rs) mean += r.field.values[16];
  mean /= static_cast<double>(n);
  const double sigma = std::sqrt(spec.mean_intensity / 2.0 / static_cast<double>(n));
  CHECK(std::abs(mean.real()) < 3 * sigma);
  CHECK(std::abs(mean.imag()) < 3 * sigma);

  // Intensity is exponential with mean I0.
  for (const std::size_t i : {3u, 16u, 30u}) {
    std::vector<double> intensity;
    for (const auto& r : rs) intensity.push_back(std::norm(r.field.values[i]));
    const double p = oracle::ks_pvalue(intensity, [&](double v) { return 1.0 - std::exp(-v / spec.mean_intensity); });
    CHECK(p > 0.01);
  }
  // Real and imaginary parts are uncorrelated with equal variance I0/2.
  double rr = 0.0;
  double ii = 0.0;
  double ri = 0.0;
  for (const auto& r : rs) {
    const Complex v = r.field.values[5];
    rr += v.real() * v.real();
    ii += v.imag() * v.imag();
    ri += v.real() * v.imag();
  }
  CHECK(rr / n == doctest::Approx(1.0).epsilon(0.05));
  CHECK(ii / n == doctest::Approx(1.0).epsilon(0.05));
  CHECK(std::abs(ri / n) < 0.05);
}

TEST_CASE("first-order coherence of a delta-correlated source") {
  const Grid g(64, 5e-6);
  SourceSpec spec;
  const auto rs = ensemble(spec, g, 10000, 5);
  CHECK(std::abs(empirical_g1(rs, 0.0, 0.0) - 1.0) < 0.05);
  double worst = 0.0;
  for (std::size_t i = 0; i < g.size(); i += 3) {
    for (std::size_t j = i + 4; j < g.size(); j += 5) {
      worst = std::max(worst, std::abs(empirical_g1(rs, g.coordinate(i), g.coordinate(j))));
    }
  }
  CHECK(worst < 0.05);

  const std::vector<SpeckleRealization> one(rs.begin(), rs.begin() + 1);
  CHECK_THROWS_AS(empirical_g1(one, 0.0, 0.0), DomainError);
  auto mixed = std::vector<SpeckleRealization>(rs.begin(), rs.begin() + 2);
  mixed.push_back(generate_realization(spec, Grid(64, 6e-6), kLambda, 5, 9));
  CHECK_THROWS_AS(empirical_g1(mixed, 0.0, 0.0), DomainError);
}

TEST_CASE("finite coherence length follows the filter autocorrelation") {
  const Grid g(64, 5e-6);
  SourceSpec spec;
  const double lc = 4 * g.dx();
  spec.coherence_length = lc;
  const auto rs = ensemble(spec, g, 10000, 8);

  // Autocorrelation of the Gaussian filter exp(-(k dx)^2 / lc^2) at lag m.
  const int half = static_cast<int>(std::ceil(4.0 * lc / g.dx()));
  std::vector<double> w;
  double norm = 0.0;
  for (int k = -half; k <= half; ++k) {
    const double u = k * g.dx() / lc;
    w.push_back(std::exp(-u * u));
    norm += w.back() * w.back();
  }
  auto autocorr = [&](int m) {
    double s = 0.0;
    for (std::size_t k = 0; k + static_cast<std::size_t>(m) < w.size(); ++k) s += w[k] * w[k + m];
    return s / norm;
  };
  CHECK(autocorr(4) == doctest::Approx(std::exp(-0.5)).epsilon(0.01));

  CHECK(std::abs(empirical_g1(rs, 0.0, 0.0)) == doctest::Approx(1.0).epsilon(0.05));
  CHECK(std::abs(empirical_g1(rs, 0.0, lc)) == doctest::Approx(autocorr(4)).epsilon(0.07));
  CHECK(std::abs(empirical_g1(rs, 0.0, 2 * lc)) == doctest::Approx(autocorr(8)).epsilon(0.5));
  CHECK(std::abs(empirical_g1(rs, -40e-6, -40e-6 + 3.2 * lc)) < 0.05);

  // Taps are unit-energy so the mean intensity stays I0.
  double e = 0.0;
  for (const double t : coherence_filter_taps(lc, g.dx())) e += t * t;
  CHECK(e == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("2-D realizations and extent") {
  const Grid g(32, 5e-6);
  SourceSpec spec;
  spec.extent = 60e-6;
  spec.coherence_length = 10e-6;
  const auto r = generate_realization(spec, g, kLambda, 3, 1, 2);
  CHECK(r.field.values.size() == 32 * 32);
  CHECK(r.field.values[0] == Complex{});
  CHECK(r.field.values[16 * 32 + 16] != Complex{});
}
