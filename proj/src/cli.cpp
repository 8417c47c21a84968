#include "qpmap/cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <vector>

namespace qpmap::cli {

namespace {

std::string fixed3(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.3f", v);
  return buf;
}

std::string fixed4(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.4f", v);
  return buf;
}

int run_guarded(std::ostream& es, const char* cmd, const std::function<void()>& body) {
  try {
    body();
    return 0;
  } catch (const std::exception& e) {
    es << cmd << ": error: " << e.what() << '\n';
    return 1;
  }
}

}  // namespace

int cmd_analyze(const AnalyzeRequest& req, std::ostream& os, std::ostream& es) {
  return run_guarded(es, "analyze", [&] {
    if (req.out.empty()) throw std::runtime_error("output path required");
    VideoSpec spec = req.spec;
    spec.validate();
    YuvReader reader(req.input, spec);
    const GopStructure gop = GopStructure::from_name(req.gop);

    QpMapDocument doc;
    doc.spec = reader.spec();
    doc.rule = req.rule;
    doc.depth = req.depth;
    doc.aq_range = req.modes.aq.adaptation_range;

    os << "input " << req.input << " frames " << reader.frame_count() << " rule "
       << to_string(req.rule) << " depth " << req.depth << " base_qp " << req.base_qp << " gop "
       << req.gop << '\n';

    std::optional<Frame> prev;
    for (int n = 0; n < reader.frame_count(); ++n) {
      Frame cur = reader.read(n);
      const GopFrameClass cls = gop.classify(n);
      const QpMap map = build_qp_map(cur, prev ? &*prev : nullptr, reader.spec(), req.depth,
                                     req.rule, req.base_qp, cls, req.modes);
      os << "frame " << n << " mean_qp " << fixed3(map.mean_qp()) << " sum_d " << map.sum_d()
         << " mvm " << fixed3(map.mvm) << " tp " << fixed3(map.t_p) << '\n';
      doc.frames.push_back(map);
      prev = std::move(cur);
    }

    save_qp_map_document(req.out, doc);
    os << "wrote " << req.out << '\n';
  });
}

int cmd_compare(const std::string& path_a, const std::string& path_b, std::ostream& os,
                std::ostream& es) {
  return run_guarded(es, "compare", [&] {
    const QpMapDocument a = load_qp_map_document(path_a);
    const QpMapDocument b = load_qp_map_document(path_b);
    if (a.frames.size() != b.frames.size())
      throw std::runtime_error("incomparable maps: frame counts differ");

    os << "frames " << a.frames.size() << '\n';
    std::map<int, int> histogram;
    long long total = 0, count = 0;
    int min_delta = 0, max_delta = 0;
    bool first = true;
    for (std::size_t i = 0; i < a.frames.size(); ++i) {
      const MapComparison cmp = compare_maps(a.frames[i], b.frames[i]);
      os << "frame " << a.frames[i].frame_index << " mean " << fixed3(cmp.mean_delta) << " min "
         << cmp.min_delta << " max " << cmp.max_delta << '\n';
      for (const auto& [delta, n] : cmp.histogram) {
        histogram[delta] += n;
        total += static_cast<long long>(delta) * n;
        count += n;
      }
      min_delta = first ? cmp.min_delta : std::min(min_delta, cmp.min_delta);
      max_delta = first ? cmp.max_delta : std::max(max_delta, cmp.max_delta);
      first = false;
    }
    os << "total mean " << fixed3(count ? static_cast<double>(total) / count : 0.0) << " min "
       << min_delta << " max " << max_delta << '\n';
    os << "histogram\n";
    for (const auto& [delta, n] : histogram) os << delta << ' ' << n << '\n';
  });
}

namespace {

std::string expand_pattern(const std::string& pattern, int frame_index, std::size_t frames) {
  const std::size_t pos = pattern.find("{}");
  if (pos == std::string::npos) {
    if (frames == 1) return pattern;
    throw std::runtime_error("output pattern needs a {} placeholder for multi-frame documents");
  }
  return pattern.substr(0, pos) + std::to_string(frame_index) + pattern.substr(pos + 2);
}

void write_pgm(const std::string& path, const QpMap& map) {
  int lo = kMaxQp, hi = kMinQp;
  for (const CuQpRecord& cu : map.cus) {
    lo = std::min(lo, cu.qp);
    hi = std::max(hi, cu.qp);
  }

  std::string bytes;
  bytes.reserve(map.cus.size());
  for (const CuQpRecord& cu : map.cus) {
    int gray = 128;  // constant maps render mid-gray
    if (hi > lo) gray = static_cast<int>(std::lround(255.0 * (cu.qp - lo) / (hi - lo)));
    bytes.push_back(static_cast<char>(gray));
  }

  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
  out << "P5\n" << map.grid_w << ' ' << map.grid_h << "\n255\n";
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw std::runtime_error("write to '" + path + "' failed");
}

}  // namespace

int cmd_heatmap(const std::string& map_path, const std::string& out_pattern, std::ostream& os,
                std::ostream& es) {
  return run_guarded(es, "heatmap", [&] {
    const QpMapDocument doc = load_qp_map_document(map_path);
    if (doc.frames.empty()) throw std::runtime_error("map document has no frames");
    for (const QpMap& map : doc.frames) {
      const std::string path = expand_pattern(out_pattern, map.frame_index, doc.frames.size());
      write_pgm(path, map);
      os << "wrote " << path << '\n';
    }
  });
}

int cmd_bdrate(const std::string& anchor_csv, const std::string& test_csv, std::ostream& os,
               std::ostream& es) {
  return run_guarded(es, "bdrate", [&] {
    const std::vector<RdCsvRow> anchor_rows = load_rd_csv(anchor_csv);
    const std::vector<RdCsvRow> test_rows = load_rd_csv(test_csv);

    for (Channel c : {Channel::y, Channel::cb, Channel::cr}) {
      const auto anchor = rd_curve_from_csv(anchor_rows, c, anchor_csv);
      const auto test = rd_curve_from_csv(test_rows, c, test_csv);
      if (!anchor || !test) {
        os << to_string(c) << " na\n";
        continue;
      }
      for (const auto& curve : {*anchor, *test})
        for (const std::string& w : curve.validate()) es << "warning: " << w << '\n';
      char buf[64];
      std::snprintf(buf, sizeof buf, "%.6f", bd_rate(*anchor, *test));
      os << to_string(c) << ' ' << buf << '\n';
    }
  });
}

int cmd_psnr(const PsnrRequest& req, std::ostream& os, std::ostream& es) {
  return run_guarded(es, "psnr", [&] {
    VideoSpec spec = req.spec;
    spec.validate();
    YuvReader ref(req.ref, spec);
    YuvReader dist(req.dist, spec);
    if (ref.frame_count() != dist.frame_count())
      throw std::runtime_error("frame count mismatch: " + std::to_string(ref.frame_count()) +
                               " vs " + std::to_string(dist.frame_count()));

    std::vector<Channel> channels{Channel::y};
    if (spec.has_chroma()) {
      channels.push_back(Channel::cb);
      channels.push_back(Channel::cr);
    }

    os << "frame";
    for (Channel c : channels) os << " psnr_" << (c == Channel::y ? "y" : c == Channel::cb ? "cb" : "cr");
    os << '\n';

    std::vector<double> finite_sum(channels.size(), 0.0);
    std::vector<int> finite_n(channels.size(), 0);
    for (int n = 0; n < ref.frame_count(); ++n) {
      const Frame fr = ref.read(n);
      const Frame fd = dist.read(n);
      os << n;
      for (std::size_t ci = 0; ci < channels.size(); ++ci) {
        const double v = plane_psnr(fr, fd, channels[ci], spec);
        os << ' ' << fixed4(v);
        if (std::isfinite(v)) {
          finite_sum[ci] += v;
          finite_n[ci] += 1;
        }
      }
      os << '\n';
    }
    os << "average";
    for (std::size_t ci = 0; ci < channels.size(); ++ci)
      os << ' ' << (finite_n[ci] ? fixed4(finite_sum[ci] / finite_n[ci]) : "inf");
    os << '\n';
  });
}

}  // namespace qpmap::cli
