#include <iostream>
#include <map>
#include <string>

#include <CLI11.hpp>

#include "qpmap/cli.hpp"

namespace {

void add_spec_flags(CLI::App* cmd, qpmap::VideoSpec* spec, std::string* format) {
  cmd->add_option("--width", spec->width, "luma width in pixels")->required();
  cmd->add_option("--height", spec->height, "luma height in pixels")->required();
  cmd->add_option("--format", *format, "chroma format")
      ->check(CLI::IsMember({"444", "422", "420", "400"}))
      ->default_val("420");
  cmd->add_option("--bitdepth", spec->bit_depth, "bits per sample")
      ->check(CLI::IsMember({8, 10}))
      ->default_val(8);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"CU-level QP map analyzer for raw YCbCr video"};
  app.require_subcommand(1);

  // analyze
  qpmap::cli::AnalyzeRequest areq;
  std::string a_format = "420";
  std::string a_rule = "acuq";
  std::string a_clamp = "clamp";
  std::string a_tp = "combined";
  CLI::App* analyze = app.add_subcommand("analyze", "build per-CU QP maps for a raw clip");
  analyze->add_option("--input", areq.input, "raw planar .yuv file")->required();
  add_spec_flags(analyze, &areq.spec, &a_format);
  analyze->add_option("--qp", areq.base_qp, "base QP")
      ->check(CLI::Range(0, 51))
      ->default_val(32);
  analyze->add_option("--rule", a_rule, "QP rule")
      ->check(CLI::IsMember({"adaptiveqp", "acuq"}))
      ->required();
  analyze->add_option("--gop", areq.gop, "GOP preset: ai, ra8 or file:PATH")->default_val("ai");
  analyze->add_option("--depth", areq.depth, "CU analysis depth")
      ->check(CLI::Range(0, 2))
      ->default_val(0);
  analyze->add_option("--aq-range", areq.modes.aq.adaptation_range, "QP adaptation range A")
      ->check(CLI::Range(0, 24))
      ->default_val(6);
  analyze->add_option("--search-range", areq.modes.search_range, "motion search range in pixels")
      ->check(CLI::Range(0, 64))
      ->default_val(16);
  analyze->add_option("--clamp-mode", a_clamp, "min() reading in the lambda model")
      ->check(CLI::IsMember({"clamp", "literal"}))
      ->default_val("clamp");
  analyze->add_option("--tp-rule", a_tp, "picture-average rule for the combined activity")
      ->check(CLI::IsMember({"luma", "combined"}))
      ->default_val("combined");
  analyze->add_option("--out", areq.out, "map document output path")->required();

  // compare
  std::string cmp_a, cmp_b;
  CLI::App* compare = app.add_subcommand("compare", "diff two map documents");
  compare->add_option("map_a", cmp_a, "first map document")->required();
  compare->add_option("map_b", cmp_b, "second map document")->required();

  // heatmap
  std::string hm_map, hm_out;
  CLI::App* heatmap = app.add_subcommand("heatmap", "render QP maps as PGM images");
  heatmap->add_option("map", hm_map, "map document")->required();
  heatmap->add_option("--out", hm_out, "output pattern, {} = frame index")->required();

  // bdrate
  std::string bd_anchor, bd_test;
  CLI::App* bdrate = app.add_subcommand("bdrate", "BD-Rate between two RD CSV files");
  bdrate->add_option("anchor", bd_anchor, "anchor RD csv")->required();
  bdrate->add_option("test", bd_test, "test RD csv")->required();

  // psnr
  qpmap::cli::PsnrRequest preq;
  std::string p_format = "420";
  CLI::App* psnr = app.add_subcommand("psnr", "per-frame per-plane PSNR of two raw clips");
  psnr->add_option("ref", preq.ref, "reference .yuv")->required();
  psnr->add_option("dist", preq.dist, "distorted .yuv")->required();
  add_spec_flags(psnr, &preq.spec, &p_format);

  CLI11_PARSE(app, argc, argv);

  if (analyze->parsed()) {
    areq.spec.format = qpmap::chroma_format_from_string(a_format);
    areq.rule = qpmap::qp_rule_from_string(a_rule);
    areq.modes.lambda.clamp_mode = qpmap::clamp_mode_from_string(a_clamp);
    areq.modes.tp_rule = a_tp == "luma" ? qpmap::TpRule::luma_only : qpmap::TpRule::combined;
    return qpmap::cli::cmd_analyze(areq, std::cout, std::cerr);
  }
  if (compare->parsed()) return qpmap::cli::cmd_compare(cmp_a, cmp_b, std::cout, std::cerr);
  if (heatmap->parsed()) return qpmap::cli::cmd_heatmap(hm_map, hm_out, std::cout, std::cerr);
  if (bdrate->parsed()) return qpmap::cli::cmd_bdrate(bd_anchor, bd_test, std::cout, std::cerr);
  if (psnr->parsed()) {
    preq.spec.format = qpmap::chroma_format_from_string(p_format);
    return qpmap::cli::cmd_psnr(preq, std::cout, std::cerr);
  }
  return 1;
}
