#include <doctest.h>

#include <random>

#include "ghost/analysis.hpp"
#include "ghost/correlate.hpp"
#include "oracles.hpp"

using namespace ghost;

namespace {

constexpr double kLambda = 532e-9;
const ArmGeometry kArm(0.8, 0.8, 0.4, 3e-3);

SystemConfig make_system(const Grid& g, std::shared_ptr<const TransmissionFunction> object,
                         const ArmGeometry& ref = kArm, std::size_t frames = 100) {
  return SystemConfig{kLambda, 0.3, kArm, ref, SourceSpec{}, std::move(object), g, 1, frames, 2024,
                      PropagationMethod::automatic};
}

std::shared_ptr<const TransmissionFunction> share(TransmissionFunction t) {
  return std::make_shared<const TransmissionFunction>(std::move(t));
}

GhostImage simulate(const SystemConfig& c, unsigned threads = 1) {
  const GhostSimulator sim(c);
  auto accs = sim.make_accumulators();
  sim.run(0, c.ensemble_size, accs, threads);
  return accs.front().ghost_image();
}

// Object-coordinate profile restricted to |x| <= half_width.
Profile window(const Grid& g, const std::vector<double>& v, double half_width) {
  const Profile p = to_object_coordinates(g, v, 1.0);
  Profile out;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (std::abs(p.x[i]) <= half_width) {
      out.x.push_back(p.x[i]);
      out.values.push_back(p.values[i]);
    }
  }
  return out;
}

}  // namespace

TEST_CASE("exact sums are order independent") {
  std::mt19937_64 rng(1);
  std::lognormal_distribution<double> mag(0.0, 8.0);
  std::vector<double> xs(5000);
  for (auto& x : xs) x = mag(rng) * (rng() % 2 ? 1.0 : -1.0);
  ExactSum forward;
  for (const double x : xs) forward.add(x);
  ExactSum backward;
  for (auto it = xs.rbegin(); it != xs.rend(); ++it) backward.add(*it);
  CHECK(forward == backward);
  std::shuffle(xs.begin(), xs.end(), rng);
  ExactSum a;
  ExactSum b;
  for (std::size_t i = 0; i < xs.size(); ++i) (i % 3 ? a : b).add(xs[i]);
  a += b;
  CHECK(a == forward);

  ExactSum tiny;
  tiny.add(1e20);
  tiny.add(1.0);
  tiny.add(-1e20);
  CHECK(tiny.value() == 1.0);
  ExactSum neg;
  neg.add(-2.5);
  neg.add(0.25);
  CHECK(neg.value() == -2.25);
}

TEST_CASE("accumulator estimator rules") {
  const Grid g(8, 1.0);
  CorrelationAccumulator acc(g, 1, 1.0);
  const std::vector<double> t{1, 2, 3, 4, 5, 6, 7, 8};
  const std::vector<double> r{0.5, 1.5, 2.5, 3.5, 4.5, 5.5, 6.5, 7.5};
  CHECK_THROWS_AS(acc.direct_image(), DomainError);
  acc.accumulate(t, r);
  CHECK(acc.count() == 1);
  CHECK_THROWS_AS(acc.ghost_image(), DomainError);
  CHECK(acc.direct_image() == t);
  acc.accumulate(t, r);
  const auto img = acc.ghost_image();
  for (const double v : img.values) CHECK(v == 0.0);
  CHECK(img.frames_used == 2);
  CHECK_THROWS_AS(acc.accumulate(std::vector<double>(7), r), DomainError);

  CorrelationAccumulator other(Grid(8, 2.0), 1, 1.0);
  CHECK_THROWS_AS(acc.merge(other), DomainError);
  CHECK_THROWS_AS(CorrelationAccumulator(g, 2, 1.0, true), DomainError);
  CHECK_THROWS_AS(CorrelationAccumulator(g, 1, 1.5), DomainError);
}

TEST_CASE("matched diagonal with an integer magnification ratio") {
  const Grid g(9, 1.0);
  CorrelationAccumulator acc(g, 1, 2.0);
  std::vector<double> t(9, 1.0);
  std::vector<double> r(9);
  for (std::size_t i = 0; i < 9; ++i) r[i] = static_cast<double>(i);
  acc.accumulate(t, r);
  std::vector<double> t2(9, 3.0);
  std::vector<double> r2(9);
  for (std::size_t i = 0; i < 9; ++i) r2[i] = 2.0 * static_cast<double>(i);
  acc.accumulate(t2, r2);
  const auto img = acc.ghost_image();
  // Detector sample i pairs with reference sample at 2 x_i: index 4 + 2 (i - 4).
  for (std::size_t i = 0; i < 9; ++i) {
    const bool inside = i >= 2 && i <= 6;
    CHECK(img.valid[i] == (inside ? 1 : 0));
    if (!inside) continue;
    const double j = 4.0 + 2.0 * (static_cast<double>(i) - 4.0);
    // <t r> - <t><r> with t = {1, 3}, r = {j, 2j}
    CHECK(img.values[i] == doctest::Approx((j + 6 * j) / 2 - 2.0 * 1.5 * j));
  }
}

TEST_CASE("merging reproduces sequential accumulation exactly") {
  const Grid g(64, 1.0);
  std::mt19937_64 rng(9);
  std::exponential_distribution<double> e(1.0);
  std::vector<std::pair<std::vector<double>, std::vector<double>>> frames(40);
  for (auto& [t, r] : frames) {
    t.resize(64);
    r.resize(64);
    for (auto& v : t) v = e(rng);
    for (auto& v : r) v = e(rng);
  }
  for (const bool matrix : {false, true}) {
    CorrelationAccumulator all(g, 1, 1.0, matrix);
    CorrelationAccumulator a(g, 1, 1.0, matrix);
    CorrelationAccumulator b(g, 1, 1.0, matrix);
    for (std::size_t k = 0; k < frames.size(); ++k) {
      all.accumulate(frames[k].first, frames[k].second);
      (k % 3 == 1 ? b : a).accumulate(frames[k].first, frames[k].second);
    }
    b.merge(a);
    CHECK(b.count() == all.count());
    CHECK(b.ghost_image().values == all.ghost_image().values);
    CHECK(b.direct_image() == all.direct_image());
    if (matrix) {
      CHECK(b.correlation_matrix() == all.correlation_matrix());
      // The diagonal of the full matrix is the ghost image when M_r = M_t.
      const auto m = all.correlation_matrix();
      const auto gi = all.ghost_image().values;
      for (std::size_t i = 0; i < 64; ++i) CHECK(m[i * 64 + i] == doctest::Approx(gi[i]).epsilon(1e-12));
    }
  }
}

TEST_CASE("frame simulation") {
  const Grid g(512, 10e-6);
  const auto slit = share(double_slit(90e-6, 180e-6, g));
  const auto c = make_system(g, slit);
  const auto f1 = simulate_frame(c, 7);
  const auto f2 = simulate_frame(c, 7);
  CHECK(f1.intensity_test == f2.intensity_test);
  CHECK(f1.intensity_ref == f2.intensity_ref);
  CHECK(f1.realization_index == 7);
  for (const double v : f1.intensity_test) CHECK(v >= 0.0);

  const auto dark = make_system(g, share(uniform_object(g, 0.0)));
  const auto fd = simulate_frame(dark, 7);
  for (const double v : fd.intensity_test) CHECK(v == 0.0);
  CHECK(fd.intensity_ref == f1.intensity_ref);
}

TEST_CASE("results do not depend on the worker count") {
  const Grid g(512, 10e-6);
  auto c = make_system(g, share(double_slit(90e-6, 180e-6, g)));
  c.ensemble_size = 37;
  const auto one = simulate(c, 1);
  const auto three = simulate(c, 3);
  CHECK(one.values == three.values);
  CHECK(one.direct == three.direct);
  CHECK(one.frames_used == 37);

  // Raw estimator values are kept, including small negatives.
  CHECK(*std::min_element(one.values.begin(), one.values.end()) < 0.0);
}

TEST_CASE("mean reference intensity equals the incoherent image of the source") {
  const Grid g(512, 10e-6);
  auto c = make_system(g, share(uniform_object(g, 1.0)));
  c.ensemble_size = 10000;
  const GhostSimulator sim(c);
  auto accs = sim.make_accumulators();
  std::vector<double> mean_ref(g.size(), 0.0);
  for (std::uint64_t k = 0; k < c.ensemble_size; ++k) {
    const auto f = sim.simulate(k);
    for (std::size_t i = 0; i < g.size(); ++i) mean_ref[i] += f.refs[0][i];
  }
  for (auto& v : mean_ref) v /= static_cast<double>(c.ensemble_size);

  // Incoherent sum over source samples of |impulse response|^2 (unit variance each).
  const CompiledPlan plan(reference_arm_plan(c.d_source_to_object, c.reference_arm), g, kLambda, 1);
  std::vector<double> expected(g.size(), 0.0);
  for (std::size_t j = 0; j < g.size(); ++j) {
    ComplexField f(g, kLambda);
    f.values[j] = 1.0;
    plan.apply(f);
    for (std::size_t i = 0; i < g.size(); ++i) expected[i] += std::norm(f.values[i]);
  }
  double worst = 0.0;
  const double peak = *std::max_element(expected.begin(), expected.end());
  for (std::size_t i = 0; i < g.size(); ++i) {
    if (std::abs(g.coordinate(i)) > 1e-3) continue;
    worst = std::max(worst, std::abs(mean_ref[i] - expected[i]) / peak);
  }
  CHECK(worst < 0.04);
}

TEST_CASE("pinhole ghost image is the two-arm kernel squared; direct image is the arm PSF") {
  const Grid g(1024, 5e-6);
  auto c = make_system(g, share(pinhole(0.0, g)));
  c.ensemble_size = 10000;
  const auto img = simulate(c);
  const auto ghost = window(g, img.values, 300e-6);
  const auto direct = window(g, img.direct, 400e-6);
  const auto gn = normalize_profile(ghost.values);
  double worst = 0.0;
  for (std::size_t i = 0; i < gn.size(); ++i) {
    const double h = two_arm_kernel(kArm, kArm, kLambda, ghost.x[i]);
    worst = std::max(worst, std::abs(gn[i] - h * h));
  }
  CHECK(worst < 0.05);

  const double width = fwhm(normalize_profile(direct));
  const double expected = 2.0 * oracle::sinc2_half() * kLambda * kArm.d_image() / kArm.aperture();
  CHECK(expected == doctest::Approx(0.886 * kLambda * 0.8 / 3e-3).epsilon(1e-3));
  CHECK(width == doctest::Approx(expected).epsilon(0.02));
}

TEST_CASE("open and symmetric objects give flat and even ghost images") {
  const Grid g(1024, 5e-6);
  {
    auto c = make_system(g, share(uniform_object(g, 1.0)));
    c.ensemble_size = 4000;
    const auto img = simulate(c);
    const auto p = window(g, img.values, 0.5e-3);
    double mean = 0.0;
    for (const double v : p.values) mean += v;
    mean /= static_cast<double>(p.size());
    double var = 0.0;
    for (const double v : p.values) var += (v - mean) * (v - mean);
    CHECK(std::sqrt(var / static_cast<double>(p.size())) / mean < 0.1);
  }
  {
    auto c = make_system(g, share(double_slit(90e-6, 180e-6, g)));
    c.ensemble_size = 4000;
    const auto img = simulate(c);
    const auto p = window(g, img.values, 300e-6);
    const auto n = normalize_profile(p.values);
    double asym = 0.0;
    // Samples x and -x sit at mirrored positions of the window (x = 0 included).
    for (std::size_t i = 0; i < n.size(); ++i) asym += std::pow(n[i] - n[n.size() - 1 - i], 2);
    CHECK(std::sqrt(asym / static_cast<double>(n.size())) < 0.05);
  }
}

TEST_CASE("coordinate re-parameterization") {
  const Grid g(4, 1.0);  // x = -2, -1, 0, 1
  const std::vector<double> v{10, 11, 12, 13};
  const auto p = to_object_coordinates(g, v, 2.0);
  CHECK(p.x == std::vector<double>{-0.5, 0.0, 0.5, 1.0});
  CHECK(p.values == std::vector<double>{13, 12, 11, 10});
  CHECK_THROWS_AS(to_object_coordinates(g, v, 0.0), DomainError);

  const std::vector<double> img{0, 1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11, 12, 13, 14, 15};
  const auto o = to_object_orientation(4, img);
  // out[r][c] = in[4 - r][4 - c], row/column 0 empty.
  CHECK(o[1 * 4 + 1] == 15);
  CHECK(o[2 * 4 + 3] == img[2 * 4 + 1]);
  CHECK(o[0] == 0);
  CHECK(o[3] == 0);
}

TEST_CASE("analytic ghost image oracle") {
  const Grid g(2048, 5e-6);
  const auto c = make_system(g, nullptr);
  std::vector<double> xs;
  for (int i = -300; i <= 300; ++i) xs.push_back(i * 1e-6);

  // A point object gives |h_g|^2 exactly.
  const auto point = pinhole(30e-6, g);
  const auto pp = analytic_ghost_image(point, c, xs);
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double h = two_arm_kernel(kArm, kArm, kLambda, 30e-6 - xs[i]);
    CHECK(pp.values[i] == doctest::Approx(h * h).epsilon(1e-12));
  }

  // Double slit: peaks at the slit centers.
  const auto slit = double_slit(90e-6, 180e-6, g);
  const auto ds = analytic_ghost_image(slit, c, xs);
  const auto peaks = find_peaks(ds.values);
  REQUIRE(peaks.size() == 2);
  CHECK(std::abs(xs[peaks[0].index] + 90e-6) <= 5e-6);
  CHECK(std::abs(xs[peaks[1].index] - 90e-6) <= 5e-6);

  // Independent quadrature of the same integral.
  auto oracle_value = [&](double x, double lr) {
    auto f = [&](double x0) {
      const double u = x0 - x;
      return oracle::sinc(u * 3e-3 / (kLambda * 0.8)) * oracle::sinc(u * lr / (kLambda * 0.8));
    };
    const double a = oracle::simpson(f, -135e-6, -45e-6, 2000) + oracle::simpson(f, 45e-6, 135e-6, 2000);
    return a * a;
  };
  std::vector<double> ref(xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i) ref[i] = oracle_value(xs[i], 3e-3);
  const auto refn = normalize_profile(ref);
  for (std::size_t i = 0; i < xs.size(); ++i) CHECK(ds.values[i] == doctest::Approx(refn[i]).epsilon(1e-6).scale(1.0));

  // A very wide reference aperture turns the kernel into a delta: the image approaches |t|^2.
  const ArmGeometry huge(0.8, 0.8, 0.4, 100e-3);
  const auto wide = analytic_ghost_image(slit, make_system(g, nullptr, huge), xs);
  // Edge ringing of the narrow kernel stays, so compare away from the edges.
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double a = std::abs(xs[i]);
    if (a < 35e-6 || a > 155e-6) CHECK(wide.values[i] < 0.01);
    if (a > 55e-6 && a < 125e-6) CHECK(wide.values[i] > 0.75);
  }

  // Undersampled non-analytic objects are refused.
  const Grid coarse(256, 40e-6);
  const TransmissionFunction blob(coarse, std::vector<Complex>(256, 1.0));
  CHECK_THROWS_AS(analytic_ghost_image(blob, make_system(coarse, nullptr), xs), DomainError);
}

TEST_CASE("analytic direct image of the double slit") {
  const Grid g(2048, 5e-6);
  const auto c = make_system(g, nullptr);
  std::vector<double> xs;
  for (int i = -300; i <= 300; ++i) xs.push_back(i * 1e-6);
  const auto slit = double_slit(90e-6, 180e-6, g);
  const auto d = analytic_direct_image(slit, c, xs);

  std::vector<double> ref(xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i) {
    auto f = [&](double x0) {
      const double s = oracle::sinc((x0 - xs[i]) * 3e-3 / (kLambda * 0.8));
      return s * s;
    };
    ref[i] = oracle::simpson(f, -135e-6, -45e-6, 2000) + oracle::simpson(f, 45e-6, 135e-6, 2000);
  }
  const auto refn = normalize_profile(ref);
  for (std::size_t i = 0; i < xs.size(); ++i) CHECK(d.values[i] == doctest::Approx(refn[i]).epsilon(1e-6).scale(1.0));

  // Two peaks survive, with a shallow dip: the blurry direct image.
  const double dip = dip_depth(d.values);
  CHECK(dip == doctest::Approx(dip_depth(refn)).epsilon(1e-4));
  CHECK(dip == doctest::Approx(0.4497).epsilon(2e-3));
  CHECK(dip < dip_depth(analytic_ghost_image(slit, c, xs).values));
}

TEST_CASE("simulator rejects invalid systems") {
  const Grid g(512, 10e-6);
  auto c = make_system(g, share(uniform_object(g, 1.0)));
  c.ensemble_size = 0;
  CHECK_THROWS_AS(GhostSimulator{c}, DomainError);
  c = make_system(g, nullptr);
  CHECK_THROWS_AS(GhostSimulator{c}, DomainError);
  c = make_system(g, share(uniform_object(Grid(256, 10e-6), 1.0)));
  CHECK_THROWS_AS(GhostSimulator{c}, DomainError);
  const ArmGeometry too_wide(0.8, 0.8, 0.4, 6e-3);
  c = make_system(g, share(uniform_object(g, 1.0)), too_wide);
  CHECK_THROWS_AS(GhostSimulator{c}, DomainError);
}
