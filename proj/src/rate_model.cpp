#include "qpmap/rate_model.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace qpmap {

ClampMode clamp_mode_from_string(const std::string& s) {
  if (s == "clamp") return ClampMode::clamp;
  if (s == "literal") return ClampMode::literal;
  throw std::runtime_error("unknown clamp mode '" + s + "' (expected clamp or literal)");
}

double weight_wk(const GopFrameClass& cls, int frame_qp, ClampMode mode) {
  if (cls.slice_type == SliceType::i) return 0.57;
  const double t = (frame_qp - 12) / 6.0;
  if (mode == ClampMode::clamp) return 0.68 * std::clamp(t, 2.0, 4.0);
  return 0.68 * std::min({2.0, 4.0, t});
}

double structure_factor_h(const GopFrameClass& cls, ClampMode mode) {
  if (!cls.referenced) return 1.0;
  const double bf = static_cast<double>(cls.b_frame_count);
  if (mode == ClampMode::clamp) return 1.0 - std::clamp(0.05 * bf, 0.0, 0.5);
  return 1.0 - std::min({0.0, 0.5, 0.005 * bf});
}

double rd_lambda(int frame_qp, const GopFrameClass& cls, const LambdaParams& params) {
  const double h = structure_factor_h(cls, params.clamp_mode);
  const double wk = weight_wk(cls, frame_qp, params.clamp_mode);
  return h * wk * std::exp2((frame_qp - 12) / 3.0);
}

int refined_qp(double lambda_value, const LambdaParams& params) {
  if (!(lambda_value > 0.0)) throw std::runtime_error("invalid lambda: must be positive");
  const double q = params.slope * std::log(lambda_value) + params.intercept;
  return std::clamp(static_cast<int>(std::lround(q)), kMinQp, kMaxQp);
}

namespace {

GopFrameClass intra_class() {
  return GopFrameClass{SliceType::i, 0, 0, true, 0};
}

GopFrameClass b_class(int level, int offset, bool referenced, int bf) {
  return GopFrameClass{SliceType::b, level, offset, referenced, bf};
}

}  // namespace

GopStructure GopStructure::all_intra() {
  GopStructure g;
  g.first_ = intra_class();
  g.cycle_ = {intra_class()};
  return g;
}

GopStructure GopStructure::random_access_8() {
  // Hierarchical-B pyramid over a GOP of 8, listed in display order.
  // Levels 1-3 are referenced with offsets 1..3; the top level keeps
  // offset 3 and is not referenced. BF = GOP size - 1.
  constexpr int kBf = 7;
  GopStructure g;
  g.first_ = intra_class();
  g.cycle_ = {
      b_class(4, 3, false, kBf),  // GOP position 1
      b_class(3, 3, true, kBf),   // 2
      b_class(4, 3, false, kBf),  // 3
      b_class(2, 2, true, kBf),   // 4
      b_class(4, 3, false, kBf),  // 5
      b_class(3, 3, true, kBf),   // 6
      b_class(4, 3, false, kBf),  // 7
      b_class(1, 1, true, kBf),   // 8
  };
  return g;
}

GopStructure GopStructure::from_stream(std::istream& in) {
  std::vector<GopFrameClass> classes;
  int bf_override = -1;

  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto start = line.find_first_not_of(" \t\r");
    if (start == std::string::npos || line[start] == '#') continue;

    std::istringstream ls(line);
    std::string head;
    ls >> head;
    if (head == "bf") {
      if (!(ls >> bf_override) || bf_override < 0)
        throw std::runtime_error("gop config line " + std::to_string(line_no) +
                                 ": bf needs a non-negative count");
      continue;
    }

    GopFrameClass cls;
    if (head == "I" || head == "i")
      cls.slice_type = SliceType::i;
    else if (head == "B" || head == "b")
      cls.slice_type = SliceType::b;
    else
      throw std::runtime_error("gop config line " + std::to_string(line_no) +
                               ": slice type must be I or B, got '" + head + "'");

    int referenced = 0;
    if (!(ls >> cls.hierarchy_level >> cls.qp_offset >> referenced))
      throw std::runtime_error("gop config line " + std::to_string(line_no) +
                               ": expected <slice> <level> <qp_offset> <referenced>");
    if (cls.slice_type == SliceType::i && (cls.hierarchy_level != 0 || cls.qp_offset != 0))
      throw std::runtime_error("gop config line " + std::to_string(line_no) +
                               ": I frames must use level 0 and qp_offset 0");
    cls.referenced = referenced != 0;
    classes.push_back(cls);
  }
  if (classes.empty()) throw std::runtime_error("gop config: no frame classes");

  int bf = bf_override;
  if (bf < 0) {
    bf = static_cast<int>(
        std::count_if(classes.begin(), classes.end(),
                      [](const GopFrameClass& c) { return c.slice_type == SliceType::b; }));
  }
  for (GopFrameClass& c : classes) c.b_frame_count = bf;

  GopStructure g;
  g.first_ = classes.front();
  if (classes.size() > 1)
    g.cycle_.assign(classes.begin() + 1, classes.end());
  else
    g.cycle_ = {classes.front()};
  return g;
}

GopStructure GopStructure::from_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open gop config '" + path + "'");
  return from_stream(in);
}

GopStructure GopStructure::from_name(const std::string& name) {
  if (name == "ai") return all_intra();
  if (name == "ra8") return random_access_8();
  if (name.rfind("file:", 0) == 0) return from_file(name.substr(5));
  throw std::runtime_error("unknown gop preset '" + name + "' (expected ai, ra8 or file:PATH)");
}

GopFrameClass GopStructure::classify(int frame_index) const {
  if (frame_index <= 0) return first_;
  return cycle_[static_cast<std::size_t>(frame_index - 1) % cycle_.size()];
}

}  // namespace qpmap
