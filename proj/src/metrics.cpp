#include "qpmap/metrics.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>
#include <stdexcept>

namespace qpmap {

double plane_psnr(const Frame& ref, const Frame& dist, Channel channel, const VideoSpec& spec) {
  const Plane& rp = ref.plane(channel);
  const Plane& dp = dist.plane(channel);
  if (rp.width != dp.width || rp.height != dp.height)
    throw std::runtime_error("incomparable frames: plane dimensions differ");
  const int expect_w = channel == Channel::y ? spec.width : spec.chroma_width();
  const int expect_h = channel == Channel::y ? spec.height : spec.chroma_height();
  if (rp.width != expect_w || rp.height != expect_h)
    throw std::runtime_error("incomparable frames: plane does not match spec");
  if (rp.empty()) throw std::runtime_error("incomparable frames: channel absent");

  std::uint64_t sq = 0;
  for (std::size_t i = 0; i < rp.samples.size(); ++i) {
    const std::int64_t diff =
        static_cast<std::int64_t>(rp.samples[i]) - static_cast<std::int64_t>(dp.samples[i]);
    sq += static_cast<std::uint64_t>(diff * diff);
  }
  if (sq == 0) return std::numeric_limits<double>::infinity();

  const double mse = static_cast<double>(sq) / static_cast<double>(rp.samples.size());
  const double max = static_cast<double>(spec.max_sample());
  return 10.0 * std::log10(max * max / mse);
}

std::vector<std::string> RdCurve::validate() const {
  std::vector<std::string> warnings;
  if (points.size() < 4)
    warnings.push_back("curve '" + label + "' has fewer than 4 points");
  for (const RdPoint& p : points)
    if (!(p.bitrate > 0.0)) {
      warnings.push_back("curve '" + label + "' has a non-positive bitrate");
      break;
    }

  bool rate_up = true, rate_down = true, psnr_up = true, psnr_down = true;
  for (std::size_t i = 1; i < points.size(); ++i) {
    rate_up = rate_up && points[i].bitrate > points[i - 1].bitrate;
    rate_down = rate_down && points[i].bitrate < points[i - 1].bitrate;
    psnr_up = psnr_up && points[i].psnr > points[i - 1].psnr;
    psnr_down = psnr_down && points[i].psnr < points[i - 1].psnr;
  }
  const bool monotone = (rate_up && psnr_up) || (rate_down && psnr_down);
  if (points.size() > 1 && !monotone)
    warnings.push_back("non-monotone curve '" + label + "'");
  return warnings;
}

namespace {

// Least-squares cubic c0 + c1 x + c2 x^2 + c3 x^3 through (x - center,
// log10 bitrate). For exactly four distinct PSNRs this interpolates.
std::array<double, 4> fit_log_rate(const RdCurve& curve, double center) {
  const std::size_t n = curve.points.size();

  std::array<std::array<double, 4>, 4> s{};
  std::array<double, 4> b{};
  for (std::size_t i = 0; i < n; ++i) {
    const double x = curve.points[i].psnr - center;
    if (!(curve.points[i].bitrate > 0.0))
      throw std::runtime_error("degenerate curve: non-positive bitrate in '" + curve.label + "'");
    const double y = std::log10(curve.points[i].bitrate);
    std::array<double, 4> pow_x{1.0, x, x * x, x * x * x};
    for (int r = 0; r < 4; ++r) {
      for (int c = 0; c < 4; ++c) s[r][c] += pow_x[r] * pow_x[c];
      b[r] += pow_x[r] * y;
    }
  }

  // Gaussian elimination with partial pivoting.
  std::array<std::array<double, 5>, 4> m{};
  for (int r = 0; r < 4; ++r) {
    for (int c = 0; c < 4; ++c) m[r][c] = s[r][c];
    m[r][4] = b[r];
  }
  for (int col = 0; col < 4; ++col) {
    int pivot = col;
    for (int r = col + 1; r < 4; ++r)
      if (std::fabs(m[r][col]) > std::fabs(m[pivot][col])) pivot = r;
    if (std::fabs(m[pivot][col]) < 1e-12)
      throw std::runtime_error("degenerate curve: singular fit for '" + curve.label + "'");
    std::swap(m[col], m[pivot]);
    for (int r = col + 1; r < 4; ++r) {
      const double f = m[r][col] / m[col][col];
      for (int c = col; c < 5; ++c) m[r][c] -= f * m[col][c];
    }
  }
  std::array<double, 4> coeffs{};
  for (int r = 3; r >= 0; --r) {
    double v = m[r][4];
    for (int c = r + 1; c < 4; ++c) v -= m[r][c] * coeffs[c];
    coeffs[r] = v / m[r][r];
  }
  return coeffs;
}

void check_distinct_psnrs(const RdCurve& curve) {
  std::set<double> distinct;
  for (const RdPoint& p : curve.points) distinct.insert(p.psnr);
  if (distinct.size() < 4)
    throw std::runtime_error("degenerate curve: '" + curve.label +
                             "' needs 4 distinct PSNR values");
}

double integrate_poly(const std::array<double, 4>& c, double lo, double hi) {
  double acc = 0.0;
  double lo_pow = lo, hi_pow = hi;
  for (int k = 0; k < 4; ++k) {
    acc += c[k] * (hi_pow - lo_pow) / (k + 1);
    lo_pow *= lo;
    hi_pow *= hi;
  }
  return acc;
}

}  // namespace

double bd_rate(const RdCurve& anchor, const RdCurve& test) {
  if (anchor.points.size() < 4 || test.points.size() < 4)
    throw std::runtime_error("degenerate curve: need at least 4 points per curve");
  check_distinct_psnrs(anchor);
  check_distinct_psnrs(test);

  const auto psnr_span = [](const RdCurve& c) {
    double lo = c.points.front().psnr, hi = lo;
    for (const RdPoint& p : c.points) {
      lo = std::min(lo, p.psnr);
      hi = std::max(hi, p.psnr);
    }
    return std::pair{lo, hi};
  };
  const auto [a_lo, a_hi] = psnr_span(anchor);
  const auto [t_lo, t_hi] = psnr_span(test);
  const double lo = std::max(a_lo, t_lo);
  const double hi = std::min(a_hi, t_hi);
  if (!(hi > lo)) throw std::runtime_error("disjoint curves: no PSNR overlap");

  const double center = 0.5 * (lo + hi);
  const std::array<double, 4> ca = fit_log_rate(anchor, center);
  const std::array<double, 4> ct = fit_log_rate(test, center);

  std::array<double, 4> diff{};
  for (int k = 0; k < 4; ++k) diff[k] = ct[k] - ca[k];

  const double avg = integrate_poly(diff, lo - center, hi - center) / (hi - lo);
  return (std::pow(10.0, avg) - 1.0) * 100.0;
}

namespace {

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return "";
  const auto b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  std::istringstream ls(line);
  while (std::getline(ls, field, ',')) fields.push_back(trim(field));
  if (!line.empty() && line.back() == ',') fields.push_back("");
  return fields;
}

std::optional<double> parse_optional_psnr(const std::string& field, int line_no) {
  if (field.empty()) return std::nullopt;
  std::string lower = field;
  std::transform(lower.begin(), lower.end(), lower.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  if (lower == "na" || lower == "n/a" || lower == "-") return std::nullopt;
  try {
    std::size_t pos = 0;
    const double v = std::stod(field, &pos);
    if (pos != field.size()) throw std::invalid_argument(field);
    return v;
  } catch (const std::exception&) {
    throw std::runtime_error("rd csv line " + std::to_string(line_no) + ": bad PSNR value '" +
                             field + "'");
  }
}

}  // namespace

std::vector<RdCsvRow> read_rd_csv(std::istream& in) {
  std::string line;
  int line_no = 0;

  if (!std::getline(in, line)) throw std::runtime_error("rd csv: empty file");
  ++line_no;
  const std::vector<std::string> header = split_csv_line(line);
  const std::vector<std::string> expected{"qp", "bitrate_kbps", "psnr_y", "psnr_cb", "psnr_cr"};
  if (header != expected)
    throw std::runtime_error("rd csv: header must be 'qp,bitrate_kbps,psnr_y,psnr_cb,psnr_cr'");

  std::vector<RdCsvRow> rows;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    const std::vector<std::string> fields = split_csv_line(line);
    if (fields.size() != 5)
      throw std::runtime_error("rd csv line " + std::to_string(line_no) + ": expected 5 fields");
    RdCsvRow row;
    try {
      row.qp = std::stoi(fields[0]);
      row.bitrate_kbps = std::stod(fields[1]);
    } catch (const std::exception&) {
      throw std::runtime_error("rd csv line " + std::to_string(line_no) +
                               ": bad qp or bitrate value");
    }
    if (!(row.bitrate_kbps > 0.0))
      throw std::runtime_error("rd csv line " + std::to_string(line_no) +
                               ": bitrate must be positive");
    row.psnr_y = parse_optional_psnr(fields[2], line_no);
    row.psnr_cb = parse_optional_psnr(fields[3], line_no);
    row.psnr_cr = parse_optional_psnr(fields[4], line_no);
    rows.push_back(row);
  }
  return rows;
}

std::vector<RdCsvRow> load_rd_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open '" + path + "' for reading");
  return read_rd_csv(in);
}

std::optional<RdCurve> rd_curve_from_csv(const std::vector<RdCsvRow>& rows, Channel channel,
                                         const std::string& label) {
  RdCurve curve;
  curve.label = label;
  for (const RdCsvRow& row : rows) {
    const std::optional<double>& p = channel == Channel::y    ? row.psnr_y
                                     : channel == Channel::cb ? row.psnr_cb
                                                              : row.psnr_cr;
    if (!p.has_value()) return std::nullopt;
    curve.points.push_back(RdPoint{row.bitrate_kbps, *p});
  }
  return curve;
}

}  // namespace qpmap
