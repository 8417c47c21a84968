#pragma once

#include <span>
#include <vector>

#include "qpmap/cu_grid.hpp"
#include "qpmap/metrics.hpp"
#include "qpmap/motion.hpp"

// Independent reference implementations used to cross-check the library.
// These deliberately take different computation routes (column-major
// two-pass sums, candidate sorting, numeric integration) so agreement is
// meaningful.
namespace oracle {

// Column-major two-pass population variance in long double.
double variance(const qpmap::Plane& plane, const qpmap::Rect& rect);

// Plain two-pass mean.
double mean(std::span<const double> values);

// Collect every candidate displacement, sort by (sad, |mv|^2, dy, dx),
// return the front.
qpmap::MotionVector full_search(const qpmap::Frame& cur, const qpmap::Frame& ref,
                                const qpmap::CuNode& cu, int search_range);

// Cubic fit via Cramer's rule on the normal equations plus trapezoid
// integration with `samples` panels.
double bd_rate_numeric(const qpmap::RdCurve& anchor, const qpmap::RdCurve& test, int samples);

// Direct formula evaluations.
double normalized_activity(double activity, double t_p, double s);
double brute_mse(const qpmap::Plane& a, const qpmap::Plane& b);

}  // namespace oracle
