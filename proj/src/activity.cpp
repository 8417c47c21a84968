#include "qpmap/activity.hpp"

#include <cassert>
#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>

namespace qpmap {

double QpAdaptConfig::scale() const {
  return std::exp2(adaptation_range / 6.0);
}

double block_variance(const Plane& plane, const Rect& rect) {
  if (rect.empty()) throw std::runtime_error("empty block");
  assert(rect.x >= 0 && rect.y >= 0);
  assert(rect.x + rect.w <= plane.width && rect.y + rect.h <= plane.height);

  const double n = static_cast<double>(rect.area());
  std::uint64_t sum = 0;
  for (int y = rect.y; y < rect.y + rect.h; ++y)
    for (int x = rect.x; x < rect.x + rect.w; ++x) sum += plane.at(x, y);
  const double mean = static_cast<double>(sum) / n;

  double acc = 0.0;
  for (int y = rect.y; y < rect.y + rect.h; ++y) {
    for (int x = rect.x; x < rect.x + rect.w; ++x) {
      const double d = static_cast<double>(plane.at(x, y)) - mean;
      acc += d * d;
    }
  }
  return acc / n;
}

namespace {

double min_variance(const Plane& plane, const SubBlockGeom& geom) {
  assert(!geom.rects.empty());
  double best = std::numeric_limits<double>::infinity();
  for (const Rect& r : geom.rects) best = std::min(best, block_variance(plane, r));
  return best;
}

}  // namespace

CuActivity cu_activity(const Frame& frame, const CuNode& cu, std::span<const SubBlockGeom> geoms) {
  (void)cu;
  CuActivity act;
  for (const SubBlockGeom& geom : geoms) {
    const double v = min_variance(frame.plane(geom.channel), geom);
    switch (geom.channel) {
      case Channel::y:
        act.y_min_var = v;
        act.y_act = 1.0 + v;
        break;
      case Channel::cb:
        act.cb_min_var = v;
        act.cb_act = 1.0 + v;
        break;
      case Channel::cr:
        act.cr_min_var = v;
        act.cr_act = 1.0 + v;
        break;
    }
  }
  return act;
}

PictureActivity picture_activity(std::vector<CuActivity> activities, TpRule rule) {
  if (activities.empty()) throw std::runtime_error("no CUs");

  double sum = 0.0;
  for (const CuActivity& a : activities)
    sum += rule == TpRule::luma_only ? a.y_act : a.combined();

  PictureActivity pict;
  pict.t_p = sum / static_cast<double>(activities.size());
  pict.rule = rule;
  pict.per_cu = std::move(activities);
  return pict;
}

namespace {

double normalize(double activity, double t_p, double s) {
  return (s * activity + t_p) / (activity + s * t_p);
}

}  // namespace

double normalized_activity_r(double y_act, double t_p, const QpAdaptConfig& cfg) {
  return normalize(y_act, t_p, cfg.scale());
}

double normalized_activity_x(double y_act, double cb_act, double cr_act, double t_p,
                             const QpAdaptConfig& cfg) {
  return normalize(y_act + cb_act + cr_act, t_p, cfg.scale());
}

}  // namespace qpmap
