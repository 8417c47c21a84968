#pragma once

#include <iosfwd>
#include <string>

#include "qpmap/metrics.hpp"
#include "qpmap/qp_map_io.hpp"

namespace qpmap::cli {

struct AnalyzeRequest {
  std::string input;
  VideoSpec spec;
  QpRule rule = QpRule::acuq;
  int base_qp = 32;
  std::string gop = "ai";  // "ai", "ra8" or "file:PATH"
  int depth = 0;
  AnalysisModes modes{};
  std::string out;  // map document path
};

struct PsnrRequest {
  std::string ref;
  std::string dist;
  VideoSpec spec;
};

// All commands return a process exit status: 0 on success, 1 on error
// with a one-line diagnostic on es. Data goes to files or os.
int cmd_analyze(const AnalyzeRequest& req, std::ostream& os, std::ostream& es);
int cmd_compare(const std::string& path_a, const std::string& path_b, std::ostream& os,
                std::ostream& es);
// out_pattern: `{}` is replaced by the frame index; a pattern without `{}`
// is only accepted for single-frame documents.
int cmd_heatmap(const std::string& map_path, const std::string& out_pattern, std::ostream& os,
                std::ostream& es);
int cmd_bdrate(const std::string& anchor_csv, const std::string& test_csv, std::ostream& os,
               std::ostream& es);
int cmd_psnr(const PsnrRequest& req, std::ostream& os, std::ostream& es);

}  // namespace qpmap::cli
