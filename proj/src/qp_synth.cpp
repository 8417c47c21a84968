#include "qpmap/qp_synth.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <functional>
#include <mutex>
#include <numeric>
#include <stdexcept>
#include <thread>

namespace qpmap {

namespace {

// Static-chunked parallel loop. Each index writes only its own slots, so
// results do not depend on the thread count; the first error wins.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn) {
  std::size_t workers = std::thread::hardware_concurrency();
  workers = std::min<std::size_t>(workers == 0 ? 1 : workers, 8);
  workers = std::min(workers, n);
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }

  std::mutex error_mutex;
  std::exception_ptr first_error;
  const auto worker = [&](std::size_t begin, std::size_t end) {
    try {
      for (std::size_t i = begin; i < end; ++i) fn(i);
    } catch (...) {
      const std::lock_guard<std::mutex> lock(error_mutex);
      if (!first_error) first_error = std::current_exception();
    }
  };

  std::vector<std::thread> threads;
  const std::size_t chunk = (n + workers - 1) / workers;
  for (std::size_t t = 0; t < workers; ++t) {
    const std::size_t begin = t * chunk;
    const std::size_t end = std::min(n, begin + chunk);
    if (begin < end) threads.emplace_back(worker, begin, end);
  }
  for (std::thread& t : threads) t.join();
  if (first_error) std::rethrow_exception(first_error);
}

}  // namespace

const char* to_string(QpRule rule) {
  return rule == QpRule::adaptive_qp ? "adaptiveqp" : "acuq";
}

QpRule qp_rule_from_string(const std::string& s) {
  if (s == "adaptiveqp") return QpRule::adaptive_qp;
  if (s == "acuq") return QpRule::acuq;
  throw std::runtime_error("unknown rule '" + s + "' (expected adaptiveqp or acuq)");
}

int QpMap::sum_d() const {
  int sum = 0;
  for (const CuQpRecord& cu : cus) sum += cu.d;
  return sum;
}

double QpMap::mean_qp() const {
  if (cus.empty()) return 0.0;
  long long sum = 0;
  for (const CuQpRecord& cu : cus) sum += cu.qp;
  return static_cast<double>(sum) / static_cast<double>(cus.size());
}

int qp_offset_from_activity(double norm_activity) {
  const double raw = 6.0 * std::log2(norm_activity);
  const double nearest = std::round(raw);
  if (std::fabs(raw - nearest) < 1e-9) return static_cast<int>(nearest);
  return static_cast<int>(std::ceil(raw));
}

int adaptive_qp_cu(int slice_qp, double r, const QpAdaptConfig& cfg) {
  (void)cfg;
  return std::clamp(slice_qp + qp_offset_from_activity(r), kMinQp, kMaxQp);
}

int acuq_cu(int d, int q, double norm_activity, const QpAdaptConfig& cfg) {
  (void)cfg;
  return std::clamp(d + q + qp_offset_from_activity(norm_activity), kMinQp, kMaxQp);
}

QpMap build_qp_map(const Frame& cur, const Frame* prev, const VideoSpec& spec, int depth,
                   QpRule rule, int base_qp, const GopFrameClass& gop_class,
                   const AnalysisModes& modes) {
  spec.validate();
  if (base_qp < kMinQp || base_qp > kMaxQp)
    throw std::runtime_error("base QP out of range [0, 51]");
  if (prev && (prev->y.width != cur.y.width || prev->y.height != cur.y.height))
    throw std::runtime_error("spec mismatch: previous frame size differs");

  const std::vector<CuNode> cus = enumerate_cus(spec, depth);

  // Phase 1, parallel over CUs: activities plus motion for acuq inter frames.
  const bool inter =
      rule == QpRule::acuq && prev != nullptr && gop_class.slice_type != SliceType::i;
  std::vector<CuActivity> activities(cus.size());
  std::vector<double> magnitudes(inter ? cus.size() : 0);
  parallel_for(cus.size(), [&](std::size_t i) {
    activities[i] = cu_activity(cur, cus[i], sub_blocks(cus[i], spec));
    if (inter)
      magnitudes[i] = magnitude(estimate_cu_mv(cur, *prev, cus[i], modes.search_range));
  });

  // Reduction barrier: picture average and frame-mean magnitude.
  const TpRule tp_rule = rule == QpRule::adaptive_qp ? TpRule::luma_only : modes.tp_rule;
  const PictureActivity pict = picture_activity(std::move(activities), tp_rule);

  QpMap map;
  map.frame_index = cur.index;
  map.rule = rule;
  map.depth = depth;
  map.grid_w = cu_cols(spec, depth);
  map.grid_h = cu_rows(spec, depth);
  map.t_p = pict.t_p;
  map.cus.resize(cus.size());

  std::vector<int> d(cus.size(), 0);
  if (inter) {
    map.mvm = frame_mvm(magnitudes);
    for (std::size_t i = 0; i < cus.size(); ++i)
      d[i] = temporal_increment(magnitudes[i], map.mvm);
  }

  const int frame_qp = std::clamp(base_qp + gop_class.qp_offset, kMinQp, kMaxQp);
  int frame_base = frame_qp;  // slice QP under adaptive_qp
  if (rule == QpRule::acuq)
    frame_base = refined_qp(rd_lambda(frame_qp, gop_class, modes.lambda), modes.lambda);
  map.base_qp = frame_base;

  for (std::size_t i = 0; i < cus.size(); ++i) {
    const CuActivity& act = pict.per_cu[i];
    double norm = 0.0;
    if (rule == QpRule::adaptive_qp || !spec.has_chroma())
      norm = normalized_activity_r(act.y_act, pict.t_p, modes.aq);
    else
      norm = normalized_activity_x(act.y_act, *act.cb_act, *act.cr_act, pict.t_p, modes.aq);

    CuQpRecord& rec = map.cus[i];
    rec.norm_activity = norm;
    rec.d = d[i];
    rec.base_qp = frame_base;
    rec.raw_offset = qp_offset_from_activity(norm);
    rec.qp = rule == QpRule::adaptive_qp ? adaptive_qp_cu(frame_base, norm, modes.aq)
                                         : acuq_cu(d[i], frame_base, norm, modes.aq);
  }
  return map;
}

MapComparison compare_maps(const QpMap& a, const QpMap& b) {
  if (a.grid_w != b.grid_w || a.grid_h != b.grid_h || a.cus.size() != b.cus.size())
    throw std::runtime_error("incomparable maps: CU grids differ");

  MapComparison cmp;
  cmp.deltas.reserve(a.cus.size());
  long long sum = 0;
  for (std::size_t i = 0; i < a.cus.size(); ++i) {
    const int delta = b.cus[i].qp - a.cus[i].qp;
    cmp.deltas.push_back(delta);
    cmp.histogram[delta] += 1;
    sum += delta;
  }
  if (!cmp.deltas.empty()) {
    cmp.mean_delta = static_cast<double>(sum) / static_cast<double>(cmp.deltas.size());
    const auto [lo, hi] = std::minmax_element(cmp.deltas.begin(), cmp.deltas.end());
    cmp.min_delta = *lo;
    cmp.max_delta = *hi;
  }
  return cmp;
}

}  // namespace qpmap
