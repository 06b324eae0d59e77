#include "ltecir/sim/trajectory.hpp"

#include <algorithm>
#include <stdexcept>

namespace ltecir::sim {

Trajectory::Trajectory(std::vector<Waypoint> wps) : wps_(std::move(wps)) {
  if (wps_.empty()) throw std::invalid_argument("trajectory: no waypoints");
  for (size_t i = 1; i < wps_.size(); ++i)
    if (wps_[i].t <= wps_[i - 1].t)
      throw std::invalid_argument("trajectory: waypoint times must be strictly increasing");
  if (wps_.size() > 1 && path_length() <= 0.0)
    throw std::invalid_argument("trajectory: zero path length");
}

Vec3 Trajectory::position_at(double t) const {
  if (wps_.size() == 1 || t <= wps_.front().t) return wps_.front().p;
  if (t >= wps_.back().t) return wps_.back().p;
  size_t i = 1;
  while (wps_[i].t < t) ++i;
  const auto& a = wps_[i - 1];
  const auto& b = wps_[i];
  const double f = (t - a.t) / (b.t - a.t);
  return {a.p[0] + f * (b.p[0] - a.p[0]), a.p[1] + f * (b.p[1] - a.p[1]),
          a.p[2] + f * (b.p[2] - a.p[2])};
}

double Trajectory::path_length() const {
  double len = 0.0;
  for (size_t i = 1; i < wps_.size(); ++i) len += dist(wps_[i].p, wps_[i - 1].p);
  return len;
}

double Trajectory::max_speed() const {
  double v = 0.0;
  for (size_t i = 1; i < wps_.size(); ++i)
    v = std::max(v, dist(wps_[i].p, wps_[i - 1].p) / (wps_[i].t - wps_[i - 1].t));
  return v;
}

Trajectory rectangle_trajectory(const Vec3& origin, double width, double height,
                                double duration_s) {
  if (width <= 0.0 || height <= 0.0 || duration_s <= 0.0)
    throw std::invalid_argument("rectangle_trajectory: dimensions and duration must be positive");
  const double perim = 2.0 * (width + height);
  const double speed = perim / duration_s;
  const auto [x, y, z] = origin;
  std::vector<Waypoint> wps;
  wps.push_back({0.0, {x, y, z}});
  double t = width / speed;
  wps.push_back({t, {x + width, y, z}});
  t += height / speed;
  wps.push_back({t, {x + width, y + height, z}});
  t += width / speed;
  wps.push_back({t, {x, y + height, z}});
  wps.push_back({duration_s, {x, y, z}});
  return Trajectory(std::move(wps));
}

}  // namespace ltecir::sim
