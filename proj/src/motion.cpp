#include "qpmap/motion.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <limits>
#include <stdexcept>

namespace qpmap {

namespace {

std::uint64_t sad_upto(const Plane& cur, int cx, int cy, const Plane& ref, int rx, int ry,
                       int w, int h, std::uint64_t cutoff) {
  std::uint64_t sad = 0;
  for (int j = 0; j < h; ++j) {
    for (int i = 0; i < w; ++i) {
      sad += static_cast<std::uint64_t>(
          std::abs(static_cast<int>(cur.at(cx + i, cy + j)) -
                   static_cast<int>(ref.at(rx + i, ry + j))));
    }
    if (sad > cutoff) return sad;  // cannot win or tie anymore
  }
  return sad;
}

struct Candidate {
  std::uint64_t sad = std::numeric_limits<std::uint64_t>::max();
  long long mag2 = 0;
  int dy = 0;
  int dx = 0;

  bool better_than(const Candidate& o) const {
    if (sad != o.sad) return sad < o.sad;
    if (mag2 != o.mag2) return mag2 < o.mag2;
    if (dy != o.dy) return dy < o.dy;
    return dx < o.dx;
  }
};

}  // namespace

MotionVector estimate_cu_mv(const Frame& cur, const Frame& ref, const CuNode& cu,
                            int search_range) {
  if (cur.y.width != ref.y.width || cur.y.height != ref.y.height)
    throw std::runtime_error("spec mismatch: current and reference frame sizes differ");
  if (search_range < 0) throw std::runtime_error("negative search range");

  const int w = cu.clipped_w;
  const int h = cu.clipped_h;
  const int max_x = cur.y.width - w;
  const int max_y = cur.y.height - h;

  Candidate best;
  for (int dy = -search_range; dy <= search_range; ++dy) {
    for (int dx = -search_range; dx <= search_range; ++dx) {
      const int rx = std::clamp(cu.x - dx, 0, max_x);
      const int ry = std::clamp(cu.y - dy, 0, max_y);
      Candidate cand;
      cand.mag2 = static_cast<long long>(dx) * dx + static_cast<long long>(dy) * dy;
      cand.dy = dy;
      cand.dx = dx;
      cand.sad = sad_upto(cur.y, cu.x, cu.y, ref.y, rx, ry, w, h, best.sad);
      if (cand.better_than(best)) best = cand;
    }
  }
  return MotionVector{best.dx, best.dy};
}

double magnitude(MotionVector mv) {
  const long long m2 = static_cast<long long>(mv.x) * mv.x + static_cast<long long>(mv.y) * mv.y;
  return std::sqrt(static_cast<double>(m2));
}

double frame_mvm(std::span<const double> magnitudes) {
  if (magnitudes.empty()) throw std::runtime_error("no CUs");

  // The mean of identical values is that value; short-circuiting keeps the
  // strict M > MVM comparison exact for uniform-motion frames.
  const double first = magnitudes.front();
  bool all_equal = true;
  double sum = 0.0;
  for (double m : magnitudes) {
    all_equal = all_equal && m == first;
    sum += m;
  }
  if (all_equal) return first;
  return sum / static_cast<double>(magnitudes.size());
}

int temporal_increment(double m, double mvm) {
  return m > mvm ? 1 : 0;
}

MotionField estimate_motion_field(const Frame& cur, const Frame& ref,
                                  std::span<const CuNode> cus, int search_range) {
  MotionField field;
  field.frame_index = cur.index;
  field.vectors.reserve(cus.size());
  field.magnitudes.reserve(cus.size());
  for (const CuNode& cu : cus) {
    const MotionVector mv = estimate_cu_mv(cur, ref, cu, search_range);
    field.vectors.push_back(mv);
    field.magnitudes.push_back(magnitude(mv));
  }
  field.mvm = frame_mvm(field.magnitudes);
  return field;
}

}  // namespace qpmap
