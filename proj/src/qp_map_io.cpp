#include "qpmap/qp_map_io.hpp"

#include <fstream>
#include <iomanip>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace qpmap {

namespace {

[[noreturn]] void bad_doc(const std::string& what) {
  throw std::runtime_error("map document: " + what);
}

void write_int_grid(std::ostream& out, const std::vector<CuQpRecord>& cus, int grid_w,
                    int CuQpRecord::* field) {
  for (std::size_t i = 0; i < cus.size(); ++i) {
    out << cus[i].*field;
    out << (((i + 1) % static_cast<std::size_t>(grid_w) == 0) ? '\n' : ' ');
  }
}

void expect(std::istream& in, const std::string& token) {
  std::string got;
  if (!(in >> got) || got != token) bad_doc("expected '" + token + "', got '" + got + "'");
}

template <typename T>
T read_value(std::istream& in, const std::string& key) {
  expect(in, key);
  T v{};
  if (!(in >> v)) bad_doc("unreadable value for '" + key + "'");
  return v;
}

}  // namespace

void write_qp_map_document(std::ostream& out, const QpMapDocument& doc) {
  out << "qpmapdoc " << kQpMapDocVersion << '\n';
  out << "width " << doc.spec.width << '\n';
  out << "height " << doc.spec.height << '\n';
  out << "format " << to_string(doc.spec.format) << '\n';
  out << "bitdepth " << doc.spec.bit_depth << '\n';
  out << "depth " << doc.depth << '\n';
  out << "rule " << to_string(doc.rule) << '\n';
  out << "aq_range " << doc.aq_range << '\n';

  const int grid_w = doc.frames.empty() ? 0 : doc.frames.front().grid_w;
  const int grid_h = doc.frames.empty() ? 0 : doc.frames.front().grid_h;
  out << "grid " << grid_w << ' ' << grid_h << '\n';
  out << "frames " << doc.frames.size() << '\n';

  out << std::setprecision(17);
  for (const QpMap& map : doc.frames) {
    out << "frame " << map.frame_index << '\n';
    out << "base " << map.base_qp << '\n';
    out << "tp " << map.t_p << '\n';
    out << "mvm " << map.mvm << '\n';
    out << "qp\n";
    write_int_grid(out, map.cus, grid_w, &CuQpRecord::qp);
    out << "act\n";
    for (std::size_t i = 0; i < map.cus.size(); ++i) {
      out << map.cus[i].norm_activity;
      out << (((i + 1) % static_cast<std::size_t>(grid_w) == 0) ? '\n' : ' ');
    }
    out << "d\n";
    write_int_grid(out, map.cus, grid_w, &CuQpRecord::d);
    out << "offset\n";
    write_int_grid(out, map.cus, grid_w, &CuQpRecord::raw_offset);
    out << "end\n";
  }
  if (!out) bad_doc("write failed");
}

QpMapDocument read_qp_map_document(std::istream& in) {
  QpMapDocument doc;

  const int version = read_value<int>(in, "qpmapdoc");
  if (version != kQpMapDocVersion)
    bad_doc("unsupported version " + std::to_string(version));

  doc.spec.width = read_value<int>(in, "width");
  doc.spec.height = read_value<int>(in, "height");
  doc.spec.format = chroma_format_from_string(read_value<std::string>(in, "format"));
  doc.spec.bit_depth = read_value<int>(in, "bitdepth");
  doc.depth = read_value<int>(in, "depth");
  doc.rule = qp_rule_from_string(read_value<std::string>(in, "rule"));
  doc.aq_range = read_value<int>(in, "aq_range");

  expect(in, "grid");
  int grid_w = 0, grid_h = 0;
  if (!(in >> grid_w >> grid_h)) bad_doc("unreadable grid");
  const int frame_count = read_value<int>(in, "frames");
  if (frame_count < 0) bad_doc("negative frame count");
  doc.spec.frame_count = frame_count;

  const std::size_t cu_count = static_cast<std::size_t>(grid_w) * static_cast<std::size_t>(grid_h);
  for (int f = 0; f < frame_count; ++f) {
    QpMap map;
    map.rule = doc.rule;
    map.depth = doc.depth;
    map.grid_w = grid_w;
    map.grid_h = grid_h;
    map.frame_index = read_value<int>(in, "frame");
    map.base_qp = read_value<int>(in, "base");
    map.t_p = read_value<double>(in, "tp");
    map.mvm = read_value<double>(in, "mvm");
    map.cus.resize(cu_count);
    for (CuQpRecord& rec : map.cus) rec.base_qp = map.base_qp;

    expect(in, "qp");
    for (CuQpRecord& rec : map.cus)
      if (!(in >> rec.qp)) bad_doc("unreadable qp grid");
    expect(in, "act");
    for (CuQpRecord& rec : map.cus)
      if (!(in >> rec.norm_activity)) bad_doc("unreadable act grid");
    expect(in, "d");
    for (CuQpRecord& rec : map.cus)
      if (!(in >> rec.d)) bad_doc("unreadable d grid");
    expect(in, "offset");
    for (CuQpRecord& rec : map.cus)
      if (!(in >> rec.raw_offset)) bad_doc("unreadable offset grid");
    expect(in, "end");
    doc.frames.push_back(std::move(map));
  }
  return doc;
}

void save_qp_map_document(const std::string& path, const QpMapDocument& doc) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
  write_qp_map_document(out, doc);
  out.flush();
  if (!out) throw std::runtime_error("write to '" + path + "' failed");
}

QpMapDocument load_qp_map_document(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open '" + path + "' for reading");
  return read_qp_map_document(in);
}

}  // namespace qpmap
