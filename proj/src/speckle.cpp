#include "ghost/speckle.hpp"

#include <cmath>
#include <random>
#include <sstream>

namespace ghost {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

// Circular complex Gaussian noise with E|n|^2 = 1.
std::vector<Complex> white_noise(std::mt19937_64& rng, std::size_t count) {
  std::normal_distribution<double> normal(0.0, std::sqrt(0.5));
  std::vector<Complex> out(count);
  for (auto& v : out) {
    const double re = normal(rng);
    const double im = normal(rng);
    v = {re, im};
  }
  return out;
}

// Valid-mode 1-D filtering: out[i] = sum_k taps[k] in[i + k].
void filter_line(const Complex* in, std::size_t in_stride, Complex* out, std::size_t out_stride,
                 std::size_t n, const std::vector<double>& taps) {
  for (std::size_t i = 0; i < n; ++i) {
    Complex acc{};
    for (std::size_t k = 0; k < taps.size(); ++k) acc += taps[k] * in[(i + k) * in_stride];
    out[i * out_stride] = acc;
  }
}

}  // namespace

double SourceSpec::intensity_at(double x, double y) const {
  if (extent && (std::abs(x) > 0.5 * *extent || std::abs(y) > 0.5 * *extent)) return 0.0;
  if (profile == IntensityProfile::gaussian) {
    return mean_intensity * std::exp(-(x * x + y * y) / (2.0 * gaussian_width * gaussian_width));
  }
  return mean_intensity;
}

void SourceSpec::validate(const Grid& grid) const {
  if (!(mean_intensity > 0.0)) throw DomainError("source: mean_intensity must be positive");
  if (extent && !(*extent > 0.0)) throw DomainError("source: extent must be positive");
  if (profile == IntensityProfile::gaussian && !(gaussian_width > 0.0)) {
    throw DomainError("source: gaussian width must be positive");
  }
  const double lc = coherence_length_on(grid);
  if (lc < grid.dx() * (1.0 - 1e-9)) {
    std::ostringstream msg;
    msg << "source: coherence_length " << lc << " m is below the grid spacing " << grid.dx()
        << " m and cannot be resolved";
    throw DomainError(msg.str());
  }
}

std::uint64_t realization_seed(std::uint64_t seed, std::uint64_t index) {
  return splitmix64(seed ^ splitmix64(index));
}

std::vector<double> coherence_filter_taps(double coherence_length, double dx) {
  const auto half = static_cast<std::size_t>(std::ceil(4.0 * coherence_length / dx));
  std::vector<double> taps(2 * half + 1);
  double norm = 0.0;
  for (std::size_t k = 0; k < taps.size(); ++k) {
    const double u = (static_cast<double>(k) - static_cast<double>(half)) * dx / coherence_length;
    taps[k] = std::exp(-u * u);
    norm += taps[k] * taps[k];
  }
  for (auto& t : taps) t /= std::sqrt(norm);
  return taps;
}

SpeckleRealization generate_realization(const SourceSpec& spec, const Grid& grid,
                                        double wavelength, std::uint64_t seed,
                                        std::uint64_t index, int dims) {
  spec.validate(grid);
  const std::uint64_t stream_seed = realization_seed(seed, index);
  std::mt19937_64 rng(stream_seed);
  const std::size_t n = grid.size();
  ComplexField field(grid, wavelength, dims);

  const double lc = spec.coherence_length_on(grid);
  if (lc <= grid.dx() * (1.0 + 1e-9)) {
    field.values = white_noise(rng, field.values.size());
  } else {
    const auto taps = coherence_filter_taps(lc, grid.dx());
    const std::size_t pad = taps.size() - 1;
    const std::size_t m = n + pad;  // noise is drawn on a margin so edges stay stationary
    if (dims == 1) {
      const auto noise = white_noise(rng, m);
      filter_line(noise.data(), 1, field.values.data(), 1, n, taps);
    } else {
      const auto noise = white_noise(rng, m * m);
      // Filter along x for every padded row, then along y.
      std::vector<Complex> rows(m * n);
      for (std::size_t r = 0; r < m; ++r) {
        filter_line(noise.data() + r * m, 1, rows.data() + r * n, 1, n, taps);
      }
      for (std::size_t c = 0; c < n; ++c) {
        filter_line(rows.data() + c, n, field.values.data() + c, n, n, taps);
      }
    }
  }

  if (dims == 1) {
    for (std::size_t i = 0; i < n; ++i) {
      field.values[i] *= std::sqrt(spec.intensity_at(grid.coordinate(i) - grid.x_center()));
    }
  } else {
    for (std::size_t iy = 0; iy < n; ++iy) {
      const double y = grid.coordinate(iy) - grid.x_center();
      for (std::size_t ix = 0; ix < n; ++ix) {
        field.values[iy * n + ix] *=
            std::sqrt(spec.intensity_at(grid.coordinate(ix) - grid.x_center(), y));
      }
    }
  }
  return {std::move(field), index, seed};
}

Complex empirical_g1(std::span<const SpeckleRealization> realizations, double x, double x_prime) {
  if (realizations.size() < 2) throw DomainError("empirical_g1: need at least 2 realizations");
  const Grid& grid = realizations.front().field.grid;
  for (const auto& r : realizations) {
    if (!(r.field.grid == grid) || r.field.dims != 1) {
      throw DomainError("empirical_g1: realizations must share one 1-D grid");
    }
  }
  std::size_t i = 0;
  std::size_t j = 0;
  if (!grid.nearest_index(x, i) || !grid.nearest_index(x_prime, j)) {
    throw DomainError("empirical_g1: point outside the grid");
  }
  Complex sum{};
  for (const auto& r : realizations) sum += r.field.values[i] * std::conj(r.field.values[j]);
  return sum / static_cast<double>(realizations.size());
}

}  // namespace ghost
