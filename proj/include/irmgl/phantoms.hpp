#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "irmgl/grid.hpp"
#include "irmgl/random.hpp"

namespace irmgl {

// Ellipse on the square [-1, 1]^2 (x to the right, y up), rotation in degrees.
struct Ellipse {
  double intensity;
  double semi_x;
  double semi_y;
  double center_x;
  double center_y;
  double angle_deg;
};

// The ten Shepp-Logan ellipses with the original additive intensities.
std::span<const Ellipse> shepp_logan_ellipses();

// Sums the intensities of every ellipse containing each pixel centre, then clamps to [0, 1].
ImageGrid rasterize_ellipses(std::size_t size, std::span<const Ellipse> ellipses);

ImageGrid shepp_logan(std::size_t size);

struct NoiseSpec {
  double delta_rel = 0.0;
  std::uint64_t seed = 0;
};

template <typename Tag>
struct NoisyData {
  Array2D<Tag> data;
  double delta = 0.0;  // ||data - clean||
};

// v + delta_rel ||v|| xi / ||xi|| with xi_k = CounterRng(seed).normal(k). The noise
// direction depends only on the seed and the size, so varying delta_rel rescales a
// fixed perturbation.
template <typename Tag>
NoisyData<Tag> add_noise(const Array2D<Tag>& v, const NoiseSpec& spec) {
  if (!(spec.delta_rel >= 0.0)) throw ConfigError("relative noise level must be >= 0");
  if (spec.delta_rel == 0.0) return {v, 0.0};
  const double vnorm = norm(v);
  if (vnorm == 0.0) throw ConfigError("cannot scale relative noise on zero data");
  const CounterRng rng(spec.seed);
  Array2D<Tag> xi(v.shape());
  for (std::size_t k = 0; k < xi.size(); ++k) xi[k] = rng.normal(k);
  const double delta = spec.delta_rel * vnorm;
  return {axpy(delta / norm(xi), xi, v), delta};
}

}  // namespace irmgl
