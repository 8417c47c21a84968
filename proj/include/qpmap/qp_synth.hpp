#pragma once

#include <map>
#include <string>
#include <vector>

#include "qpmap/activity.hpp"
#include "qpmap/motion.hpp"
#include "qpmap/rate_model.hpp"

namespace qpmap {

enum class QpRule { adaptive_qp, acuq };

const char* to_string(QpRule rule);
QpRule qp_rule_from_string(const std::string& s);  // "adaptiveqp", "acuq"

struct CuQpRecord {
  int qp = 0;                  // final, clamped to [0, 51]
  double norm_activity = 1.0;  // R or X
  int d = 0;                   // temporal increment, 0 under adaptive_qp
  int base_qp = 0;             // slice QP (adaptive_qp) or refined q (acuq)
  int raw_offset = 0;          // ceil(6 log2 activity) before clamping
};

struct QpMap {
  int frame_index = 0;
  QpRule rule = QpRule::adaptive_qp;
  int depth = 0;
  int grid_w = 0;
  int grid_h = 0;
  int base_qp = 0;  // frame-level value shared by all CU records
  double t_p = 1.0;
  double mvm = 0.0;
  std::vector<CuQpRecord> cus;  // raster order

  int sum_d() const;
  double mean_qp() const;
};

// ceil(6 * log2(v)), snapping values within 1e-9 of an integer first so
// that activity ratios landing exactly on 2^(k/6) do not overshoot.
int qp_offset_from_activity(double norm_activity);

int adaptive_qp_cu(int slice_qp, double r, const QpAdaptConfig& cfg);
int acuq_cu(int d, int q, double norm_activity, const QpAdaptConfig& cfg);

struct AnalysisModes {
  QpAdaptConfig aq{};
  LambdaParams lambda{};
  TpRule tp_rule = TpRule::combined;  // picture average for the combined rule
  int search_range = kDefaultSearchRange;
};

// Full per-frame pipeline: CU grid, activities, picture average, motion
// (acuq inter frames only), lambda-refined q, per-CU QP. prev may be null
// for the first frame; intra-class frames skip motion estimation.
QpMap build_qp_map(const Frame& cur, const Frame* prev, const VideoSpec& spec, int depth,
                   QpRule rule, int base_qp, const GopFrameClass& gop_class,
                   const AnalysisModes& modes);

struct MapComparison {
  std::vector<int> deltas;  // b.qp - a.qp, raster order
  double mean_delta = 0.0;
  int min_delta = 0;
  int max_delta = 0;
  std::map<int, int> histogram;
};

// Throws "incomparable maps" when the grids differ.
MapComparison compare_maps(const QpMap& a, const QpMap& b);

}  // namespace qpmap
