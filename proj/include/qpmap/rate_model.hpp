#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace qpmap {

inline constexpr int kMinQp = 0;
inline constexpr int kMaxQp = 51;

enum class SliceType { i, b };

// `clamp` treats the min(lo, hi, x) bounds in the weight and structure
// factors as a clip of x into [lo, hi]; `literal` takes the min of all
// three, which pins the structure factor at 1.0 for referenced pictures.
enum class ClampMode { clamp, literal };

ClampMode clamp_mode_from_string(const std::string& s);  // "clamp", "literal"

struct GopFrameClass {
  SliceType slice_type = SliceType::i;
  int hierarchy_level = 0;  // k
  int qp_offset = 0;        // OA, added to the base QP for this frame
  bool referenced = true;   // RP vs NRP
  int b_frame_count = 0;    // BF, GOP-wide
};

struct LambdaParams {
  double slope = 4.2005;
  double intercept = 13.7122;
  ClampMode clamp_mode = ClampMode::clamp;
};

// Hierarchy weight: 0.57 for I slices, QP-dependent for B slices.
double weight_wk(const GopFrameClass& cls, int frame_qp, ClampMode mode);

// Coding-structure factor from the GOP-wide B-frame count.
double structure_factor_h(const GopFrameClass& cls, ClampMode mode);

// Lagrange multiplier for the frame. frame_qp is the frame-level QP,
// i.e. base QP plus the class qp_offset.
double rd_lambda(int frame_qp, const GopFrameClass& cls, const LambdaParams& params);

// Lambda-refined QP: slope * ln(lambda) + intercept, rounded half away
// from zero, clamped to [0, 51]. Throws "invalid lambda" for lambda <= 0.
int refined_qp(double lambda_value, const LambdaParams& params);

// Frame classification over a cyclic GOP pattern: frame 0 uses the first
// entry, frame n > 0 uses cycle[(n-1) mod cycle_length].
class GopStructure {
 public:
  static GopStructure all_intra();
  static GopStructure random_access_8();
  static GopStructure from_stream(std::istream& in);
  static GopStructure from_file(const std::string& path);
  // "ai", "ra8" or "file:PATH".
  static GopStructure from_name(const std::string& name);

  GopFrameClass classify(int frame_index) const;
  int cycle_length() const { return static_cast<int>(cycle_.size()); }

 private:
  GopFrameClass first_{};
  std::vector<GopFrameClass> cycle_;
};

}  // namespace qpmap
