#include "qpmap/cu_grid.hpp"

#include <algorithm>
#include <stdexcept>

namespace qpmap {

namespace {

void check_depth(int depth) {
  if (depth < 0 || depth > kMaxAnalysisDepth)
    throw std::runtime_error("analysis depth must be 0, 1 or 2");
}

// Horizontal/vertical luma-to-chroma divisors.
int chroma_div_x(ChromaFormat format) {
  return format == ChromaFormat::yuv444 ? 1 : 2;
}

int chroma_div_y(ChromaFormat format) {
  return format == ChromaFormat::yuv420 ? 2 : 1;
}

Rect clip_rect(Rect r, int plane_w, int plane_h) {
  const int x1 = std::min(r.x + r.w, plane_w);
  const int y1 = std::min(r.y + r.h, plane_h);
  return Rect{r.x, r.y, x1 - r.x, y1 - r.y};
}

SubBlockGeom quadrants(Channel channel, int foot_x, int foot_y, int foot_w, int foot_h,
                       int plane_w, int plane_h) {
  SubBlockGeom geom;
  geom.channel = channel;
  const int qw = foot_w / 2;
  const int qh = foot_h / 2;
  for (int qy = 0; qy < 2; ++qy) {
    for (int qx = 0; qx < 2; ++qx) {
      const Rect r{foot_x + qx * qw, foot_y + qy * qh, qw, qh};
      if (r.x >= plane_w || r.y >= plane_h) continue;  // entirely outside, dropped
      geom.rects.push_back(clip_rect(r, plane_w, plane_h));
    }
  }
  return geom;
}

}  // namespace

int cu_cols(const VideoSpec& spec, int depth) {
  check_depth(depth);
  const int size = kLcuSize >> depth;
  return (spec.width + size - 1) / size;
}

int cu_rows(const VideoSpec& spec, int depth) {
  check_depth(depth);
  const int size = kLcuSize >> depth;
  return (spec.height + size - 1) / size;
}

std::vector<CuNode> enumerate_cus(const VideoSpec& spec, int depth) {
  spec.validate();
  check_depth(depth);
  const int size = kLcuSize >> depth;

  std::vector<CuNode> cus;
  cus.reserve(static_cast<std::size_t>(cu_cols(spec, depth)) * cu_rows(spec, depth));
  for (int y = 0; y < spec.height; y += size) {
    for (int x = 0; x < spec.width; x += size) {
      CuNode cu;
      cu.x = x;
      cu.y = y;
      cu.size_2n = size;
      cu.depth = depth;
      cu.clipped_w = std::min(size, spec.width - x);
      cu.clipped_h = std::min(size, spec.height - y);
      cus.push_back(cu);
    }
  }
  return cus;
}

std::vector<SubBlockGeom> sub_blocks(const CuNode& cu, const VideoSpec& spec) {
  std::vector<SubBlockGeom> geoms;
  geoms.push_back(
      quadrants(Channel::y, cu.x, cu.y, cu.size_2n, cu.size_2n, spec.width, spec.height));
  if (!spec.has_chroma()) return geoms;

  const int dx = chroma_div_x(spec.format);
  const int dy = chroma_div_y(spec.format);
  for (Channel c : {Channel::cb, Channel::cr}) {
    geoms.push_back(quadrants(c, cu.x / dx, cu.y / dy, cu.size_2n / dx, cu.size_2n / dy,
                              spec.chroma_width(), spec.chroma_height()));
  }
  return geoms;
}

}  // namespace qpmap
