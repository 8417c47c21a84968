#pragma once

#include <optional>
#include <span>
#include <vector>

#include "qpmap/cu_grid.hpp"

namespace qpmap {

// QP adaptation range A and its derived scale factor s = 2^(A/6).
struct QpAdaptConfig {
  int adaptation_range = 6;

  double scale() const;
};

// Per-CU activities: 1 + minimum sub-block variance per channel.
struct CuActivity {
  double y_act = 1.0;
  std::optional<double> cb_act;
  std::optional<double> cr_act;
  double y_min_var = 0.0;
  std::optional<double> cb_min_var;
  std::optional<double> cr_min_var;

  bool has_chroma() const { return cb_act.has_value(); }
  double combined() const { return y_act + cb_act.value_or(0.0) + cr_act.value_or(0.0); }
};

// Which per-CU measure the picture average t_p runs over.
enum class TpRule { luma_only, combined };

struct PictureActivity {
  double t_p = 1.0;
  TpRule rule = TpRule::luma_only;
  std::vector<CuActivity> per_cu;
};

// Population variance over the rect, real-valued arithmetic, 1/|rect|
// normalization. Throws "empty block" for an empty rect.
double block_variance(const Plane& plane, const Rect& rect);

CuActivity cu_activity(const Frame& frame, const CuNode& cu, std::span<const SubBlockGeom> geoms);

PictureActivity picture_activity(std::vector<CuActivity> activities, TpRule rule);

// Normalized spatial activity, luma only. Result lies in [1/s, s] and
// equals 1 when y_act == t_p.
double normalized_activity_r(double y_act, double t_p, const QpAdaptConfig& cfg);

// Normalized spatial activity over the combined Y'+Cb'+Cr' measure.
double normalized_activity_x(double y_act, double cb_act, double cr_act, double t_p,
                             const QpAdaptConfig& cfg);

}  // namespace qpmap
