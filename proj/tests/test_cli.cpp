#include <doctest.h>

#include <fstream>
#include <sstream>

#include "qpmap/cli.hpp"
#include "support/synthetic.hpp"

using namespace qpmap;
using testsupport::TempDir;

namespace {

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

cli::AnalyzeRequest base_request(const std::string& input, const VideoSpec& spec,
                                 const std::string& out) {
  cli::AnalyzeRequest req;
  req.input = input;
  req.spec = spec;
  req.out = out;
  return req;
}

}  // namespace

TEST_CASE("analyze on a flat clip reproduces the trivial maps") {
  TempDir dir;
  const VideoSpec spec{64, 64, ChromaFormat::yuv420, 8, 0};
  std::vector<Frame> frames;
  for (int i = 0; i < 3; ++i) frames.push_back(testsupport::uniform_frame(spec, 128, 128, i));
  const std::string clip = testsupport::write_clip(dir, "flat.yuv", frames, spec);

  SUBCASE("adaptiveqp: every CU keeps the slice QP") {
    auto req = base_request(clip, spec, dir.path("a.qpmap"));
    req.rule = QpRule::adaptive_qp;
    req.base_qp = 32;
    std::ostringstream os, es;
    REQUIRE(cli::cmd_analyze(req, os, es) == 0);
    const QpMapDocument doc = load_qp_map_document(req.out);
    REQUIRE(doc.frames.size() == 3);
    for (const QpMap& map : doc.frames)
      for (const CuQpRecord& cu : map.cus) CHECK(cu.qp == 32);
  }

  SUBCASE("acuq: equal QPs and zero temporal increments") {
    auto req = base_request(clip, spec, dir.path("b.qpmap"));
    req.rule = QpRule::acuq;
    req.base_qp = 32;
    std::ostringstream os, es;
    REQUIRE(cli::cmd_analyze(req, os, es) == 0);
    const QpMapDocument doc = load_qp_map_document(req.out);
    for (const QpMap& map : doc.frames) {
      CHECK(map.sum_d() == 0);
      for (const CuQpRecord& cu : map.cus) CHECK(cu.qp == map.base_qp);
    }
    CHECK(os.str().find("sum_d 0") != std::string::npos);
  }
}

TEST_CASE("analyze marks moving CUs with D=1 on inter frames") {
  TempDir dir;
  auto clip = testsupport::moving_square_clip(96, 64, 16, 16, 8, 6);
  const std::string path = testsupport::write_clip(dir, "move.yuv", clip.frames, clip.spec);

  auto req = base_request(path, clip.spec, dir.path("move.qpmap"));
  req.rule = QpRule::acuq;
  req.depth = 2;
  req.gop = "ra8";
  req.modes.search_range = 8;
  std::ostringstream os, es;
  REQUIRE(cli::cmd_analyze(req, os, es) == 0);

  const QpMapDocument doc = load_qp_map_document(req.out);
  REQUIRE(doc.frames.size() == 6);
  CHECK(doc.frames[0].sum_d() == 0);
  for (std::size_t n = 1; n < doc.frames.size(); ++n) {
    CHECK(doc.frames[n].sum_d() >= 1);
    // D=1 only where the square is or was.
    const auto cus = enumerate_cus(clip.spec, 2);
    for (std::size_t i = 0; i < cus.size(); ++i) {
      if (doc.frames[n].cus[i].d == 0) continue;
      const Rect& now = clip.positions[n];
      const Rect& before = clip.positions[n - 1];
      const bool hits_now = cus[i].x < now.x + now.w && now.x < cus[i].x + cus[i].clipped_w &&
                            cus[i].y < now.y + now.h && now.y < cus[i].y + cus[i].clipped_h;
      const bool hits_before =
          cus[i].x < before.x + before.w && before.x < cus[i].x + cus[i].clipped_w &&
          cus[i].y < before.y + before.h && before.y < cus[i].y + cus[i].clipped_h;
      CHECK((hits_now || hits_before));
    }
  }
}

TEST_CASE("analyze surfaces I/O errors with a nonzero status") {
  TempDir dir;
  const VideoSpec spec{64, 64, ChromaFormat::yuv420, 8, 0};
  auto req = base_request(dir.path("missing.yuv"), spec, dir.path("x.qpmap"));
  std::ostringstream os, es;
  CHECK(cli::cmd_analyze(req, os, es) == 1);
  CHECK(es.str().find("error") != std::string::npos);
}

TEST_CASE("compare reports the uniform delta between rules") {
  TempDir dir;
  const VideoSpec spec{64, 64, ChromaFormat::yuv400, 8, 0};
  std::mt19937 rng(61);
  const Frame f = testsupport::noise_frame(spec, rng, 0);
  const std::string clip = testsupport::write_clip(dir, "still.yuv", {f, f}, spec);

  auto req_a = base_request(clip, spec, dir.path("a.qpmap"));
  req_a.rule = QpRule::adaptive_qp;
  auto req_b = base_request(clip, spec, dir.path("b.qpmap"));
  req_b.rule = QpRule::acuq;

  std::ostringstream os, es;
  REQUIRE(cli::cmd_analyze(req_a, os, es) == 0);
  REQUIRE(cli::cmd_analyze(req_b, os, es) == 0);

  std::ostringstream cmp_os, cmp_es;
  REQUIRE(cli::cmd_compare(req_a.out, req_b.out, cmp_os, cmp_es) == 0);
  // q(AI, 32) - 32 = -1 for every CU of every frame.
  CHECK(cmp_os.str().find("total mean -1.000 min -1 max -1") != std::string::npos);

  std::ostringstream err_os, err_es;
  CHECK(cli::cmd_compare(req_a.out, dir.path("missing.qpmap"), err_os, err_es) == 1);
}

TEST_CASE("heatmaps scale QPs into gray levels") {
  TempDir dir;

  QpMapDocument doc;
  doc.spec = VideoSpec{128, 64, ChromaFormat::yuv400, 8, 1};
  doc.rule = QpRule::adaptive_qp;
  doc.depth = 0;

  QpMap map;
  map.rule = QpRule::adaptive_qp;
  map.grid_w = 2;
  map.grid_h = 1;
  map.base_qp = 32;

  SUBCASE("constant maps render mid-gray") {
    map.cus = {CuQpRecord{30, 1, 0, 32, 0}, CuQpRecord{30, 1, 0, 32, 0}};
    doc.frames = {map};
    save_qp_map_document(dir.path("c.qpmap"), doc);

    std::ostringstream os, es;
    REQUIRE(cli::cmd_heatmap(dir.path("c.qpmap"), dir.path("c.pgm"), os, es) == 0);
    CHECK(slurp(dir.path("c.pgm")) == std::string("P5\n2 1\n255\n\x80\x80", 13));
  }

  SUBCASE("extremes map to 0 and 255") {
    map.cus = {CuQpRecord{22, 1, 0, 32, 0}, CuQpRecord{37, 1, 0, 32, 0}};
    doc.frames = {map};
    save_qp_map_document(dir.path("e.qpmap"), doc);

    std::ostringstream os, es;
    REQUIRE(cli::cmd_heatmap(dir.path("e.qpmap"), dir.path("e.pgm"), os, es) == 0);
    const std::string pgm = slurp(dir.path("e.pgm"));
    CHECK(pgm == std::string("P5\n2 1\n255\n\x00\xff", 13));
  }

  SUBCASE("multi-frame documents need the {} placeholder") {
    map.cus = {CuQpRecord{22, 1, 0, 32, 0}, CuQpRecord{37, 1, 0, 32, 0}};
    QpMap second = map;
    second.frame_index = 1;
    doc.frames = {map, second};
    doc.spec.frame_count = 2;
    save_qp_map_document(dir.path("m.qpmap"), doc);

    std::ostringstream os, es;
    CHECK(cli::cmd_heatmap(dir.path("m.qpmap"), dir.path("m.pgm"), os, es) == 1);
    CHECK(es.str().find("{}") != std::string::npos);

    std::ostringstream os2, es2;
    REQUIRE(cli::cmd_heatmap(dir.path("m.qpmap"), dir.path("m_{}.pgm"), os2, es2) == 0);
    CHECK(slurp(dir.path("m_0.pgm")) == slurp(dir.path("m_1.pgm")));
  }
}

TEST_CASE("a known 4x4 map renders byte-exact PGM output") {
  TempDir dir;
  // Frozen from the scaling formula; see tests/oracles/derived_values.py.
  const int qps[16] = {22, 24, 26, 28, 30, 31, 32, 33, 34, 35, 36, 37, 25, 29, 23, 27};
  const unsigned char grays[16] = {0,   34,  68,  102, 136, 153, 170, 187,
                                   204, 221, 238, 255, 51,  119, 17,  85};

  QpMapDocument doc;
  doc.spec = VideoSpec{256, 256, ChromaFormat::yuv400, 8, 1};
  doc.rule = QpRule::adaptive_qp;
  QpMap map;
  map.grid_w = 4;
  map.grid_h = 4;
  map.base_qp = 32;
  for (int q : qps) map.cus.push_back(CuQpRecord{q, 1.0, 0, 32, 0});
  doc.frames = {map};
  save_qp_map_document(dir.path("k.qpmap"), doc);

  std::ostringstream os, es;
  REQUIRE(cli::cmd_heatmap(dir.path("k.qpmap"), dir.path("k.pgm"), os, es) == 0);

  std::string expected = "P5\n4 4\n255\n";
  for (unsigned char g : grays) expected.push_back(static_cast<char>(g));
  CHECK(slurp(dir.path("k.pgm")) == expected);
}

TEST_CASE("bdrate command reports per-component deltas") {
  TempDir dir;
  const char* anchor =
      "qp,bitrate_kbps,psnr_y,psnr_cb,psnr_cr\n"
      "22,12000,42.5,44.1,44.3\n"
      "27,6500,40.1,42.0,42.2\n"
      "32,3600,37.4,39.8,40.1\n"
      "37,2000,34.6,37.2,37.5\n";
  {
    std::ofstream a(dir.path("anchor.csv"));
    a << anchor;
    std::ofstream t(dir.path("test.csv"));
    t << "qp,bitrate_kbps,psnr_y,psnr_cb,psnr_cr\n"
         "22,10800,42.5,44.1,44.3\n"
         "27,5850,40.1,42.0,42.2\n"
         "32,3240,37.4,39.8,40.1\n"
         "37,1800,34.6,37.2,37.5\n";
  }

  std::ostringstream os, es;
  REQUIRE(cli::cmd_bdrate(dir.path("anchor.csv"), dir.path("test.csv"), os, es) == 0);
  CHECK(os.str().find("Y -10.000000") != std::string::npos);
  CHECK(os.str().find("Cb -10.000000") != std::string::npos);
  CHECK(os.str().find("Cr -10.000000") != std::string::npos);
}

TEST_CASE("bdrate prints na for absent chroma columns") {
  TempDir dir;
  const char* mono =
      "qp,bitrate_kbps,psnr_y,psnr_cb,psnr_cr\n"
      "22,1200,42.5,na,na\n"
      "27,650,40.1,na,na\n"
      "32,360,37.4,na,na\n"
      "37,200,34.6,na,na\n";
  {
    std::ofstream a(dir.path("a.csv"));
    a << mono;
    std::ofstream b(dir.path("b.csv"));
    b << mono;
  }
  std::ostringstream os, es;
  REQUIRE(cli::cmd_bdrate(dir.path("a.csv"), dir.path("b.csv"), os, es) == 0);
  CHECK(os.str().find("Y 0.000000") != std::string::npos);
  CHECK(os.str().find("Cb na") != std::string::npos);
  CHECK(os.str().find("Cr na") != std::string::npos);
}

TEST_CASE("psnr command tabulates per-frame values") {
  TempDir dir;
  const VideoSpec spec{16, 16, ChromaFormat::yuv420, 8, 0};
  const Frame a0 = testsupport::uniform_frame(spec, 100, 50, 0);
  Frame b0 = a0;
  for (Sample& s : b0.y.samples) s += 1;

  const std::string ref = testsupport::write_clip(dir, "ref.yuv", {a0, a0}, spec);
  const std::string dist = testsupport::write_clip(dir, "dist.yuv", {b0, a0}, spec);

  cli::PsnrRequest req{ref, dist, spec};
  std::ostringstream os, es;
  REQUIRE(cli::cmd_psnr(req, os, es) == 0);
  CHECK(os.str().find("frame psnr_y psnr_cb psnr_cr") != std::string::npos);
  CHECK(os.str().find("0 48.1308 inf inf") != std::string::npos);
  CHECK(os.str().find("1 inf inf inf") != std::string::npos);

  // Mismatched frame counts are an error.
  const std::string longer = testsupport::write_clip(dir, "l.yuv", {a0, a0, a0}, spec);
  std::ostringstream os2, es2;
  CHECK(cli::cmd_psnr(cli::PsnrRequest{ref, longer, spec}, os2, es2) == 1);
  CHECK(es2.str().find("frame count mismatch") != std::string::npos);
}
