#pragma once

#include <cstddef>
#include <cstdint>
#include <fstream>
#include <string>
#include <vector>

namespace qpmap {

using Sample = std::uint16_t;

enum class ChromaFormat { yuv444, yuv422, yuv420, yuv400 };
enum class Channel { y, cb, cr };

const char* to_string(ChromaFormat format);
const char* to_string(Channel channel);
ChromaFormat chroma_format_from_string(const std::string& s);  // "444", "422", "420", "400"

// Geometry of one raw planar clip. frame_count stays 0 until a reader
// derives it from the file size.
struct VideoSpec {
  int width = 0;
  int height = 0;
  ChromaFormat format = ChromaFormat::yuv420;
  int bit_depth = 8;
  int frame_count = 0;

  void validate() const;
  bool has_chroma() const { return format != ChromaFormat::yuv400; }
  int chroma_width() const;
  int chroma_height() const;
  int container_bytes() const { return bit_depth > 8 ? 2 : 1; }
  int max_sample() const { return (1 << bit_depth) - 1; }
  std::size_t frame_bytes() const;
};

struct Plane {
  int width = 0;
  int height = 0;
  std::vector<Sample> samples;  // row-major

  Plane() = default;
  Plane(int w, int h) : width(w), height(h), samples(static_cast<std::size_t>(w) * h) {}

  Sample at(int x, int y) const { return samples[static_cast<std::size_t>(y) * width + x]; }
  Sample& at(int x, int y) { return samples[static_cast<std::size_t>(y) * width + x]; }
  bool empty() const { return samples.empty(); }
};

// One decoded picture. Chroma planes are empty for 4:0:0. Frames are plain
// values; once built they are only read, so sharing across threads is safe.
struct Frame {
  Plane y;
  Plane cb;
  Plane cr;
  int index = 0;

  const Plane& plane(Channel c) const;
  Plane& plane(Channel c);
};

// Allocates planes sized for the spec, all samples zero.
Frame make_frame(const VideoSpec& spec, int index = 0);

// Planar layout, Y then Cb then Cr, row-major. 10-bit samples sit in
// little-endian 16-bit containers, LSB-aligned.
Frame read_frame(std::istream& in, const VideoSpec& spec, int index);
std::size_t write_frame(std::ostream& out, const Frame& frame, const VideoSpec& spec);

// File-level reader. The file size must be an exact multiple of the
// per-frame byte size; frame_count is derived from it.
class YuvReader {
 public:
  YuvReader(const std::string& path, const VideoSpec& spec);

  const VideoSpec& spec() const { return spec_; }
  int frame_count() const { return spec_.frame_count; }
  Frame read(int index);

 private:
  VideoSpec spec_;
  std::ifstream file_;
  std::string path_;
};

class YuvWriter {
 public:
  YuvWriter(const std::string& path, const VideoSpec& spec);

  int frames_written() const { return frames_written_; }
  std::size_t write(const Frame& frame);

 private:
  VideoSpec spec_;
  std::ofstream file_;
  int frames_written_ = 0;
};

}  // namespace qpmap
