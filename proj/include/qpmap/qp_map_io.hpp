#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "qpmap/qp_synth.hpp"

namespace qpmap {

inline constexpr int kQpMapDocVersion = 1;

// Serialized analysis result for one clip under one rule. The text schema
// is line oriented and versioned; see README for the exact layout.
struct QpMapDocument {
  VideoSpec spec;  // frame_count mirrors frames.size()
  QpRule rule = QpRule::adaptive_qp;
  int depth = 0;
  int aq_range = 6;
  std::vector<QpMap> frames;
};

void write_qp_map_document(std::ostream& out, const QpMapDocument& doc);
QpMapDocument read_qp_map_document(std::istream& in);

void save_qp_map_document(const std::string& path, const QpMapDocument& doc);
QpMapDocument load_qp_map_document(const std::string& path);

}  // namespace qpmap
