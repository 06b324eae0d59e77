#pragma once

#include <array>
#include <vector>

#include "ltecir/common.hpp"

namespace ltecir::sim {

using Vec3 = std::array<double, 3>;

inline double dist(const Vec3& a, const Vec3& b) {
  const double dx = a[0] - b[0], dy = a[1] - b[1], dz = a[2] - b[2];
  return std::sqrt(dx * dx + dy * dy + dz * dz);
}

struct Waypoint {
  double t = 0.0;
  Vec3 p{0.0, 0.0, 0.0};
};

// Piecewise-linear path; times must be strictly increasing and the path must
// have nonzero length unless it is a single point (static receiver).
class Trajectory {
 public:
  Trajectory() = default;
  explicit Trajectory(std::vector<Waypoint> wps);

  Vec3 position_at(double t) const;  // clamped to [t0, t_end]
  double start_time() const { return wps_.front().t; }
  double duration() const { return wps_.back().t - wps_.front().t; }
  double path_length() const;
  double max_speed() const;
  const std::vector<Waypoint>& waypoints() const { return wps_; }

 private:
  std::vector<Waypoint> wps_{Waypoint{}};
};

// Rectangle traversed counterclockwise from `origin` at constant speed,
// covering the full perimeter in duration_s.
Trajectory rectangle_trajectory(const Vec3& origin, double width, double height,
                                double duration_s);

}  // namespace ltecir::sim
