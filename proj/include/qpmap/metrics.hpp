#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "qpmap/video_io.hpp"

namespace qpmap {

// 10*log10(MAX^2 / MSE) over one plane, MAX = 2^bit_depth - 1. Identical
// planes give +infinity. Throws "incomparable frames" on a spec mismatch.
double plane_psnr(const Frame& ref, const Frame& dist, Channel channel, const VideoSpec& spec);

struct RdPoint {
  double bitrate = 0.0;  // kbps, > 0
  double psnr = 0.0;     // dB
};

struct RdCurve {
  std::vector<RdPoint> points;
  std::string label;

  // Returns warning strings; "non-monotone curve" when bitrate and PSNR
  // are not strictly monotone in a common direction.
  std::vector<std::string> validate() const;
};

// Bjontegaard delta rate in percent, negative when the test curve is
// cheaper than the anchor. Cubic fit of log10(rate) over PSNR, analytic
// integration of the fitted difference over the common PSNR interval.
double bd_rate(const RdCurve& anchor, const RdCurve& test);

struct RdCsvRow {
  int qp = 0;
  double bitrate_kbps = 0.0;
  std::optional<double> psnr_y;
  std::optional<double> psnr_cb;
  std::optional<double> psnr_cr;
};

// Header must read `qp,bitrate_kbps,psnr_y,psnr_cb,psnr_cr`. Chroma cells
// may be empty or "na" for monochrome content.
std::vector<RdCsvRow> read_rd_csv(std::istream& in);
std::vector<RdCsvRow> load_rd_csv(const std::string& path);

// nullopt when any row lacks the requested component.
std::optional<RdCurve> rd_curve_from_csv(const std::vector<RdCsvRow>& rows, Channel channel,
                                         const std::string& label);

}  // namespace qpmap
