#include "ghost/correlate.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <sstream>
#include <thread>

#include <boost/math/quadrature/gauss_kronrod.hpp>

namespace ghost {

void SystemConfig::validate() const {
  if (!(wavelength > 0.0)) throw DomainError("wavelength must be positive");
  if (!(d_source_to_object > 0.0)) throw DomainError("source-to-object distance must be positive");
  if (ensemble_size < 1) throw DomainError("ensemble_size must be at least 1");
  if (dims != 1 && dims != 2) throw DomainError("dims must be 1 or 2");
  if (!object) throw DomainError("no object transmission function");
  if (!(object->grid() == grid) || object->dims() != dims) {
    throw DomainError("object is not sampled on the simulation grid");
  }
  source.validate(grid);
  for (const auto* arm : {&test_arm, &reference_arm}) {
    if (arm->aperture() > grid.span() * (1.0 + 1e-12)) {
      std::ostringstream msg;
      msg << "aperture " << arm->aperture() << " m exceeds the grid span " << grid.span() << " m";
      throw DomainError(msg.str());
    }
  }
}

CorrelationAccumulator::CorrelationAccumulator(const Grid& detector_grid, int dims, double ratio,
                                               bool with_matrix)
    : grid_(detector_grid), dims_(dims), ratio_(ratio) {
  if (dims != 1 && dims != 2) throw DomainError("CorrelationAccumulator: dims must be 1 or 2");
  if (!(ratio > 0.0)) throw DomainError("CorrelationAccumulator: magnification ratio must be positive");
  if (with_matrix && dims != 1) {
    throw DomainError("CorrelationAccumulator: the full correlation matrix is 1-D only");
  }
  const std::size_t n = grid_.size();
  // Per-axis map from detector sample to matched reference sample.
  std::vector<std::int64_t> axis(n, -1);
  for (std::size_t i = 0; i < n; ++i) {
    const double xr = ratio * grid_.coordinate(i);
    std::size_t j = 0;
    if (!grid_.nearest_index(xr, j)) continue;
    if (std::abs(grid_.coordinate(j) - xr) > 1e-6 * grid_.dx()) {
      std::ostringstream msg;
      msg << "CorrelationAccumulator: x_r = " << ratio << " * x_t does not land on a reference "
          << "sample (choose an integer magnification ratio)";
      throw DomainError(msg.str());
    }
    axis[i] = static_cast<std::int64_t>(j);
  }
  if (dims == 1) {
    matched_ = axis;
  } else {
    matched_.assign(n * n, -1);
    for (std::size_t iy = 0; iy < n; ++iy) {
      for (std::size_t ix = 0; ix < n; ++ix) {
        if (axis[iy] >= 0 && axis[ix] >= 0) {
          matched_[iy * n + ix] = axis[iy] * static_cast<std::int64_t>(n) + axis[ix];
        }
      }
    }
  }
  sum_t_.resize(samples());
  sum_r_.resize(samples());
  sum_cross_.resize(samples());
  if (with_matrix) {
    sum_r_full_.resize(n);
    sum_matrix_.resize(n * n);
  }
}

void CorrelationAccumulator::accumulate(const FramePair& frame) {
  accumulate(frame.intensity_test, frame.intensity_ref);
}

void CorrelationAccumulator::accumulate(std::span<const double> it, std::span<const double> ir) {
  const std::size_t m = samples();
  if (it.size() != m || ir.size() != m) {
    throw DomainError("accumulate: frame does not match the accumulator grid");
  }
  for (std::size_t i = 0; i < m; ++i) {
    sum_t_[i].add(it[i]);
    const auto j = matched_[i];
    if (j < 0) continue;
    const double r = ir[static_cast<std::size_t>(j)];
    sum_r_[i].add(r);
    sum_cross_[i].add(it[i] * r);
  }
  if (has_matrix()) {
    const std::size_t n = grid_.size();
    for (std::size_t j = 0; j < n; ++j) sum_r_full_[j].add(ir[j]);
    for (std::size_t i = 0; i < n; ++i) {
      if (it[i] == 0.0) continue;
      ExactSum* row = sum_matrix_.data() + i * n;
      for (std::size_t j = 0; j < n; ++j) row[j].add(it[i] * ir[j]);
    }
  }
  ++count_;
}

void CorrelationAccumulator::merge(const CorrelationAccumulator& other) {
  if (!(other.grid_ == grid_) || other.dims_ != dims_ || other.ratio_ != ratio_ ||
      other.has_matrix() != has_matrix()) {
    throw DomainError("merge: accumulators have different shapes");
  }
  for (std::size_t i = 0; i < sum_t_.size(); ++i) {
    sum_t_[i] += other.sum_t_[i];
    sum_r_[i] += other.sum_r_[i];
    sum_cross_[i] += other.sum_cross_[i];
  }
  for (std::size_t j = 0; j < sum_r_full_.size(); ++j) sum_r_full_[j] += other.sum_r_full_[j];
  for (std::size_t k = 0; k < sum_matrix_.size(); ++k) sum_matrix_[k] += other.sum_matrix_[k];
  count_ += other.count_;
}

GhostImage CorrelationAccumulator::ghost_image() const {
  if (count_ < 2) throw DomainError("ghost_image: the estimator needs at least 2 frames");
  const double n = static_cast<double>(count_);
  GhostImage img{grid_, dims_, {}, direct_image(), {}, count_};
  img.values.resize(samples());
  img.valid.resize(samples());
  for (std::size_t i = 0; i < samples(); ++i) {
    if (matched_[i] < 0) continue;
    img.valid[i] = 1;
    img.values[i] = sum_cross_[i].value() / n - (sum_t_[i].value() / n) * (sum_r_[i].value() / n);
  }
  return img;
}

std::vector<double> CorrelationAccumulator::direct_image() const {
  if (count_ == 0) throw DomainError("direct_image: no frames accumulated");
  const double n = static_cast<double>(count_);
  std::vector<double> out(samples());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = sum_t_[i].value() / n;
  return out;
}

std::vector<double> CorrelationAccumulator::correlation_matrix() const {
  if (!has_matrix()) throw DomainError("correlation_matrix: accumulator built without matrix");
  if (count_ < 2) throw DomainError("correlation_matrix: the estimator needs at least 2 frames");
  const std::size_t n = grid_.size();
  const double c = static_cast<double>(count_);
  std::vector<double> out(n * n);
  for (std::size_t i = 0; i < n; ++i) {
    const double mt = sum_t_[i].value() / c;
    for (std::size_t j = 0; j < n; ++j) {
      out[i * n + j] = sum_matrix_[i * n + j].value() / c - mt * (sum_r_full_[j].value() / c);
    }
  }
  return out;
}

GhostSimulator::GhostSimulator(const SystemConfig& config)
    : GhostSimulator(config, {config.reference_arm}) {}

GhostSimulator::GhostSimulator(const SystemConfig& config, std::vector<ArmGeometry> reference_arms)
    : config_(config), reference_arms_(std::move(reference_arms)) {
  config_.validate();
  if (reference_arms_.empty()) throw DomainError("GhostSimulator: no reference arm");
  const auto& c = config_;
  PropagationPlan to_object;
  to_object.stages.emplace_back(stage::FreeSpace{c.d_source_to_object});
  to_object_ = std::make_unique<const CompiledPlan>(to_object, c.grid, c.wavelength, c.dims, c.method);
  test_ = std::make_unique<const CompiledPlan>(arm_plan(c.test_arm, c.object), c.grid,
                                               c.wavelength, c.dims, c.method);
  for (const auto& arm : reference_arms_) {
    if (arm.aperture() > c.grid.span() * (1.0 + 1e-12)) {
      throw DomainError("reference aperture exceeds the grid span");
    }
    refs_.push_back(
        std::make_unique<const CompiledPlan>(arm_plan(arm), c.grid, c.wavelength, c.dims, c.method));
  }
}

GhostSimulator::Frame GhostSimulator::simulate(std::uint64_t index) const {
  const auto& c = config_;
  auto realization = generate_realization(c.source, c.grid, c.wavelength, c.seed, index, c.dims);
  ComplexField object_plane = std::move(realization.field);
  to_object_->apply(object_plane);

  Frame frame;
  frame.index = index;
  {
    ComplexField field = object_plane;
    test_->apply(field);
    frame.test = intensity(field);
  }
  frame.refs.reserve(refs_.size());
  for (std::size_t k = 0; k < refs_.size(); ++k) {
    ComplexField field = k + 1 == refs_.size() ? std::move(object_plane) : object_plane;
    refs_[k]->apply(field);
    frame.refs.push_back(intensity(field));
  }
  return frame;
}

std::vector<CorrelationAccumulator> GhostSimulator::make_accumulators(bool with_matrix) const {
  std::vector<CorrelationAccumulator> accs;
  for (const auto& arm : reference_arms_) {
    accs.emplace_back(config_.grid, config_.dims,
                      arm.magnification() / config_.test_arm.magnification(), with_matrix);
  }
  return accs;
}

void GhostSimulator::run(std::uint64_t begin, std::uint64_t end,
                         std::vector<CorrelationAccumulator>& accs, unsigned threads,
                         const Progress& progress) const {
  if (accs.size() != refs_.size()) throw DomainError("run: one accumulator per reference arm");
  if (end <= begin) return;
  const std::uint64_t total = end - begin;
  constexpr std::uint64_t kReportEvery = 256;

  auto consume = [&](std::uint64_t index, std::vector<CorrelationAccumulator>& into) {
    const Frame frame = simulate(index);
    for (std::size_t k = 0; k < into.size(); ++k) into[k].accumulate(frame.test, frame.refs[k]);
  };

  if (threads <= 1 || total == 1) {
    for (std::uint64_t i = begin; i < end; ++i) {
      consume(i, accs);
      if (progress && ((i - begin + 1) % kReportEvery == 0 || i + 1 == end)) progress(i - begin + 1);
    }
    return;
  }

  const unsigned workers = static_cast<unsigned>(std::min<std::uint64_t>(threads, total));
  const bool with_matrix = accs.front().has_matrix();
  std::vector<std::vector<CorrelationAccumulator>> partial;
  for (unsigned w = 0; w < workers; ++w) partial.push_back(make_accumulators(with_matrix));

  std::atomic<std::uint64_t> next{begin};
  std::atomic<std::uint64_t> done{0};
  std::mutex report_mutex;
  std::exception_ptr failure;
  std::mutex failure_mutex;

  auto worker = [&](unsigned w) {
    try {
      for (std::uint64_t i = next++; i < end; i = next++) {
        consume(i, partial[w]);
        const std::uint64_t d = ++done;
        if (progress && (d % kReportEvery == 0 || d == total)) {
          std::lock_guard lock(report_mutex);
          progress(d);
        }
      }
    } catch (...) {
      std::lock_guard lock(failure_mutex);
      if (!failure) failure = std::current_exception();
      next = end;
    }
  };

  std::vector<std::thread> pool;
  for (unsigned w = 0; w < workers; ++w) pool.emplace_back(worker, w);
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);

  for (auto& part : partial) {
    for (std::size_t k = 0; k < accs.size(); ++k) accs[k].merge(part[k]);
  }
}

FramePair simulate_frame(const SystemConfig& config, std::uint64_t index) {
  const GhostSimulator sim(config);
  auto frame = sim.simulate(index);
  return {std::move(frame.test), std::move(frame.refs.front()), index};
}

Profile to_object_coordinates(const Grid& detector_grid, std::span<const double> values,
                              double magnification) {
  if (values.size() != detector_grid.size()) {
    throw DomainError("to_object_coordinates: profile does not match the grid");
  }
  if (!(magnification > 0.0)) throw DomainError("to_object_coordinates: magnification must be positive");
  Profile out;
  const std::size_t n = values.size();
  out.x.resize(n);
  out.values.resize(n);
  for (std::size_t k = 0; k < n; ++k) {
    const std::size_t i = n - 1 - k;
    out.x[k] = -detector_grid.coordinate(i) / magnification;
    out.values[k] = values[i];
  }
  return out;
}

std::vector<double> to_object_orientation(std::size_t n, std::span<const double> values) {
  if (values.size() != n * n) throw DomainError("to_object_orientation: image is not n x n");
  // Object x = -x_t maps detector index i to n - i on each axis; row and
  // column 0 have no detector counterpart and stay 0.
  std::vector<double> out(n * n, 0.0);
  for (std::size_t r = 1; r < n; ++r) {
    for (std::size_t c = 1; c < n; ++c) out[r * n + c] = values[(n - r) * n + (n - c)];
  }
  return out;
}

double two_arm_kernel(const ArmGeometry& test_arm, const ArmGeometry& reference_arm,
                      double wavelength, double u) {
  return sinc(u * test_arm.aperture() / (wavelength * test_arm.d_object())) *
         sinc(u * reference_arm.aperture() / (wavelength * reference_arm.d_object()));
}

namespace {

// Shared quadrature for the coherent (ghost) and incoherent (direct) oracles.
// `kernel` is real; `coherent` selects |int t k|^2 over int |t|^2 k.
template <class Kernel>
Profile quadrature_image(const TransmissionFunction& object, std::span<const double> object_x,
                         double zero_spacing, bool coherent, Kernel kernel) {
  if (object.dims() != 1) throw DomainError("analytic image: 1-D objects only");
  Profile out;
  out.x.assign(object_x.begin(), object_x.end());
  out.values.resize(object_x.size());

  const auto& analytic = object.analytic();
  const bool sampled = !object.has_analytic();
  if (sampled && object.grid().dx() > zero_spacing / 8.0) {
    std::ostringstream msg;
    msg << "analytic image: object sampled at " << object.grid().dx()
        << " m is too coarse for kernel zeros " << zero_spacing
        << " m apart (need dx <= zero spacing / 8)";
    throw DomainError(msg.str());
  }

  using boost::math::quadrature::gauss_kronrod;
  for (std::size_t k = 0; k < object_x.size(); ++k) {
    const double xi = object_x[k];
    Complex amplitude{};
    if (const auto* slits = std::get_if<SlitGeometry>(&analytic)) {
      auto f = [&](double x0) { return kernel(x0 - xi); };
      for (const auto& open : slits->openings) {
        const double width = open.hi - open.lo;
        const auto panels =
            static_cast<std::size_t>(std::max(1.0, std::ceil(4.0 * width / zero_spacing)));
        const double h = width / static_cast<double>(panels);
        for (std::size_t p = 0; p < panels; ++p) {
          const double a = open.lo + static_cast<double>(p) * h;
          double err = 0.0;
          const double v = gauss_kronrod<double, 31>::integrate(f, a, a + h, 8, 1e-12, &err);
          if (err > 1e-6 * h) {
            throw DomainError("analytic image: quadrature did not converge on a slit panel");
          }
          amplitude += v;
        }
      }
    } else if (const auto* point = std::get_if<PointGeometry>(&analytic)) {
      amplitude = kernel(point->position - xi);
    } else {
      const Grid& g = object.grid();
      for (std::size_t i = 0; i < g.size(); ++i) {
        const Complex t = object.values()[i];
        if (t == Complex{}) continue;
        const double w = kernel(g.coordinate(i) - xi) * g.dx();
        amplitude += coherent ? t * w : std::norm(t) * w;
      }
    }
    out.values[k] = coherent ? std::norm(amplitude) : amplitude.real();
  }

  const double peak = out.values.empty()
                          ? 0.0
                          : *std::max_element(out.values.begin(), out.values.end());
  if (!(peak > 0.0)) throw DomainError("analytic image: profile is identically zero");
  for (auto& v : out.values) v /= peak;
  return out;
}

}  // namespace

Profile analytic_ghost_image(const TransmissionFunction& object, const SystemConfig& config,
                             std::span<const double> object_x) {
  const auto& t = config.test_arm;
  const auto& r = config.reference_arm;
  const double lam = config.wavelength;
  const double spacing = std::min(lam * t.d_object() / t.aperture(), lam * r.d_object() / r.aperture());
  return quadrature_image(object, object_x, spacing, true,
                          [&](double u) { return two_arm_kernel(t, r, lam, u); });
}

Profile analytic_direct_image(const TransmissionFunction& object, const SystemConfig& config,
                              std::span<const double> object_x) {
  const auto& t = config.test_arm;
  const double lam = config.wavelength;
  const double scale = t.aperture() / (lam * t.d_object());
  return quadrature_image(object, object_x, 1.0 / scale, false, [&](double u) {
    const double s = sinc(u * scale);
    return s * s;
  });
}

}  // namespace ghost
