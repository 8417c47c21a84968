#pragma once

#include <span>
#include <vector>

#include "qpmap/cu_grid.hpp"

namespace qpmap {

inline constexpr int kDefaultSearchRange = 16;

// Integer pixel displacement. (dx,dy) means the block content moved by
// (dx,dy) from the reference frame to the current one; the matched
// reference window sits at (x-dx, y-dy), clamped to the frame.
struct MotionVector {
  int x = 0;
  int y = 0;
};

struct MotionField {
  std::vector<MotionVector> vectors;  // per CU, raster order
  std::vector<double> magnitudes;
  double mvm = 0.0;
  int frame_index = 0;
};

// Full search over +/-search_range on luma SAD. Ties broken by smaller
// magnitude, then smaller dy, then smaller dx (signed comparisons).
MotionVector estimate_cu_mv(const Frame& cur, const Frame& ref, const CuNode& cu,
                            int search_range);

double magnitude(MotionVector mv);

// Arithmetic mean magnitude. Throws "no CUs" on an empty field.
double frame_mvm(std::span<const double> magnitudes);

// 1 where the magnitude strictly exceeds the frame mean, else 0.
int temporal_increment(double m, double mvm);

MotionField estimate_motion_field(const Frame& cur, const Frame& ref,
                                  std::span<const CuNode> cus, int search_range);

}  // namespace qpmap
