#include "irmgl/phantoms.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>

namespace irmgl {

namespace {

constexpr std::array<Ellipse, 10> kSheppLogan{{
    {2.0, 0.69, 0.92, 0.0, 0.0, 0.0},
    {-0.98, 0.6624, 0.8740, 0.0, -0.0184, 0.0},
    {-0.02, 0.1100, 0.3100, 0.22, 0.0, -18.0},
    {-0.02, 0.1600, 0.4100, -0.22, 0.0, 18.0},
    {0.01, 0.2100, 0.2500, 0.0, 0.35, 0.0},
    {0.01, 0.0460, 0.0460, 0.0, 0.1, 0.0},
    {0.01, 0.0460, 0.0460, 0.0, -0.1, 0.0},
    {0.01, 0.0460, 0.0230, -0.08, -0.605, 0.0},
    {0.01, 0.0230, 0.0230, 0.0, -0.606, 0.0},
    {0.01, 0.0230, 0.0460, 0.06, -0.605, 0.0},
}};

}  // namespace

std::span<const Ellipse> shepp_logan_ellipses() { return kSheppLogan; }

ImageGrid rasterize_ellipses(std::size_t size, std::span<const Ellipse> ellipses) {
  ImageGrid out(size, size);
  const double E = static_cast<double>(size);
  for (std::size_t i = 0; i < size; ++i) {
    const double y = 1.0 - (2.0 * static_cast<double>(i) + 1.0) / E;
    for (std::size_t j = 0; j < size; ++j) {
      const double x = (2.0 * static_cast<double>(j) + 1.0) / E - 1.0;
      double v = 0.0;
      for (const auto& e : ellipses) {
        const double phi = e.angle_deg * std::numbers::pi / 180.0;
        const double dx = x - e.center_x;
        const double dy = y - e.center_y;
        const double xr = dx * std::cos(phi) + dy * std::sin(phi);
        const double yr = -dx * std::sin(phi) + dy * std::cos(phi);
        if ((xr * xr) / (e.semi_x * e.semi_x) + (yr * yr) / (e.semi_y * e.semi_y) <= 1.0)
          v += e.intensity;
      }
      out(i, j) = std::clamp(v, 0.0, 1.0);
    }
  }
  return out;
}

ImageGrid shepp_logan(std::size_t size) {
  if (size < 16) throw ConfigError("shepp_logan: size must be at least 16");
  return rasterize_ellipses(size, kSheppLogan);
}

}  // namespace irmgl
