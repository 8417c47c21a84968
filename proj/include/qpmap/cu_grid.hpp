#pragma once

#include <vector>

#include "qpmap/video_io.hpp"

namespace qpmap {

inline constexpr int kLcuSize = 64;
inline constexpr int kMaxAnalysisDepth = 2;

struct Rect {
  int x = 0;
  int y = 0;
  int w = 0;
  int h = 0;

  long long area() const { return static_cast<long long>(w) * h; }
  bool empty() const { return w <= 0 || h <= 0; }
};

// One 2Nx2N coding unit on the flat analysis grid. x/y are luma pixel
// coordinates and always multiples of size_2n; clipped_w/h give the extent
// actually covered at frame borders.
struct CuNode {
  int x = 0;
  int y = 0;
  int size_2n = kLcuSize;
  int depth = 0;
  int clipped_w = 0;
  int clipped_h = 0;
};

// The four NxN (per-format) quadrants of a CU in one channel's own plane
// coordinates, row-major order. Quadrants entirely outside the frame are
// dropped, so fewer than four rects can remain near borders.
struct SubBlockGeom {
  Channel channel = Channel::y;
  std::vector<Rect> rects;
};

int cu_cols(const VideoSpec& spec, int depth);
int cu_rows(const VideoSpec& spec, int depth);

// Raster-order grid covering every luma pixel exactly once.
std::vector<CuNode> enumerate_cus(const VideoSpec& spec, int depth);

// Y geometry always; Cb/Cr unless the format is 4:0:0.
std::vector<SubBlockGeom> sub_blocks(const CuNode& cu, const VideoSpec& spec);

}  // namespace qpmap
