#include "hsr/geometry.hpp"

#include <algorithm>
#include <numbers>

namespace hsr {

double off_boresight_deg(const Position3D& origin, const Position3D& target,
                         const Position3D& other) {
  const double ux = target.x - origin.x, uy = target.y - origin.y, uz = target.z - origin.z;
  const double vx = other.x - origin.x, vy = other.y - origin.y, vz = other.z - origin.z;
  const double nu = std::sqrt(ux * ux + uy * uy + uz * uz);
  const double nv = std::sqrt(vx * vx + vy * vy + vz * vz);
  if (nu == 0.0 || nv == 0.0) {
    return 0.0;
  }
  const double cosine = std::clamp((ux * vx + uy * vy + uz * vz) / (nu * nv), -1.0, 1.0);
  return std::acos(cosine) * 180.0 / std::numbers::pi;
}

}  // namespace hsr
