#pragma once

#include <cmath>

namespace hsr {

struct Position3D {
  double x = 0.0;  // along-track (m)
  double y = 0.0;  // cross-track (m)
  double z = 0.0;  // height (m)
};

inline double distance_m(const Position3D& a, const Position3D& b) {
  const double dx = a.x - b.x;
  const double dy = a.y - b.y;
  const double dz = a.z - b.z;
  return std::sqrt(dx * dx + dy * dy + dz * dz);
}

// Angle at `origin` between the boresight direction (towards `target`) and
// the direction towards `other`, in degrees within [0, 180]. Degenerate
// zero-length directions count as aligned.
double off_boresight_deg(const Position3D& origin, const Position3D& target,
                         const Position3D& other);

}  // namespace hsr
