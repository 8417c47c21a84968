#include "qpmap/video_io.hpp"

#include <filesystem>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace qpmap {

namespace {

[[noreturn]] void fail(const std::string& msg) { throw std::runtime_error(msg); }

}  // namespace

const char* to_string(ChromaFormat format) {
  switch (format) {
    case ChromaFormat::yuv444: return "444";
    case ChromaFormat::yuv422: return "422";
    case ChromaFormat::yuv420: return "420";
    case ChromaFormat::yuv400: return "400";
  }
  return "?";
}

const char* to_string(Channel channel) {
  switch (channel) {
    case Channel::y: return "Y";
    case Channel::cb: return "Cb";
    case Channel::cr: return "Cr";
  }
  return "?";
}

ChromaFormat chroma_format_from_string(const std::string& s) {
  if (s == "444") return ChromaFormat::yuv444;
  if (s == "422") return ChromaFormat::yuv422;
  if (s == "420") return ChromaFormat::yuv420;
  if (s == "400") return ChromaFormat::yuv400;
  fail("unknown chroma format '" + s + "' (expected 444, 422, 420 or 400)");
}

void VideoSpec::validate() const {
  if (width < 8 || height < 8) fail("spec: width and height must be at least 8");
  if ((format == ChromaFormat::yuv422 || format == ChromaFormat::yuv420) && width % 2 != 0)
    fail("spec: width must be even for 4:2:2 and 4:2:0");
  if (format == ChromaFormat::yuv420 && height % 2 != 0)
    fail("spec: height must be even for 4:2:0");
  if (bit_depth != 8 && bit_depth != 10) fail("spec: bit depth must be 8 or 10");
  if (frame_count < 0) fail("spec: negative frame count");
}

int VideoSpec::chroma_width() const {
  switch (format) {
    case ChromaFormat::yuv444: return width;
    case ChromaFormat::yuv422:
    case ChromaFormat::yuv420: return width / 2;
    case ChromaFormat::yuv400: return 0;
  }
  return 0;
}

int VideoSpec::chroma_height() const {
  switch (format) {
    case ChromaFormat::yuv444:
    case ChromaFormat::yuv422: return height;
    case ChromaFormat::yuv420: return height / 2;
    case ChromaFormat::yuv400: return 0;
  }
  return 0;
}

std::size_t VideoSpec::frame_bytes() const {
  const std::size_t luma = static_cast<std::size_t>(width) * height;
  const std::size_t chroma = static_cast<std::size_t>(chroma_width()) * chroma_height();
  return (luma + 2 * chroma) * container_bytes();
}

const Plane& Frame::plane(Channel c) const {
  switch (c) {
    case Channel::y: return y;
    case Channel::cb: return cb;
    case Channel::cr: return cr;
  }
  return y;
}

Plane& Frame::plane(Channel c) {
  switch (c) {
    case Channel::y: return y;
    case Channel::cb: return cb;
    case Channel::cr: return cr;
  }
  return y;
}

Frame make_frame(const VideoSpec& spec, int index) {
  Frame f;
  f.index = index;
  f.y = Plane(spec.width, spec.height);
  if (spec.has_chroma()) {
    f.cb = Plane(spec.chroma_width(), spec.chroma_height());
    f.cr = Plane(spec.chroma_width(), spec.chroma_height());
  }
  return f;
}

namespace {

void decode_plane(const unsigned char* buf, Plane& plane, const VideoSpec& spec,
                  std::size_t plane_byte_offset, std::size_t frame_byte_offset) {
  const std::size_t n = plane.samples.size();
  if (spec.container_bytes() == 1) {
    for (std::size_t i = 0; i < n; ++i) plane.samples[i] = buf[i];
    return;
  }
  const int max = spec.max_sample();
  for (std::size_t i = 0; i < n; ++i) {
    const unsigned lo = buf[2 * i];
    const unsigned hi = buf[2 * i + 1];
    const unsigned v = lo | (hi << 8);
    if (static_cast<int>(v) > max) {
      std::ostringstream msg;
      msg << "sample out of range: value " << v << " exceeds " << spec.bit_depth
          << "-bit maximum " << max << " at byte offset "
          << frame_byte_offset + plane_byte_offset + 2 * i;
      fail(msg.str());
    }
    plane.samples[i] = static_cast<Sample>(v);
  }
}

void encode_plane(const Plane& plane, const VideoSpec& spec, std::string& out) {
  if (spec.container_bytes() == 1) {
    for (Sample s : plane.samples) out.push_back(static_cast<char>(s & 0xff));
    return;
  }
  for (Sample s : plane.samples) {
    out.push_back(static_cast<char>(s & 0xff));
    out.push_back(static_cast<char>((s >> 8) & 0xff));
  }
}

void check_frame_matches_spec(const Frame& frame, const VideoSpec& spec) {
  const auto mismatch = [](const std::string& what) {
    fail("spec mismatch: " + what);
  };
  if (frame.y.width != spec.width || frame.y.height != spec.height)
    mismatch("luma plane dimensions");
  if (spec.has_chroma()) {
    if (frame.cb.width != spec.chroma_width() || frame.cb.height != spec.chroma_height() ||
        frame.cr.width != spec.chroma_width() || frame.cr.height != spec.chroma_height())
      mismatch("chroma plane dimensions");
  } else if (!frame.cb.empty() || !frame.cr.empty()) {
    mismatch("chroma planes present for 4:0:0");
  }
  const int max = spec.max_sample();
  for (Channel c : {Channel::y, Channel::cb, Channel::cr}) {
    for (Sample s : frame.plane(c).samples)
      if (s > max) mismatch("sample exceeds bit depth");
  }
}

}  // namespace

Frame read_frame(std::istream& in, const VideoSpec& spec, int index) {
  spec.validate();
  if (index < 0) fail("read_frame: negative frame index");

  const std::size_t frame_size = spec.frame_bytes();
  const std::size_t offset = frame_size * static_cast<std::size_t>(index);
  in.clear();
  in.seekg(static_cast<std::streamoff>(offset));

  std::vector<unsigned char> buf(frame_size);
  in.read(reinterpret_cast<char*>(buf.data()), static_cast<std::streamsize>(frame_size));
  const std::size_t got = static_cast<std::size_t>(in.gcount());
  if (got != frame_size) {
    std::ostringstream msg;
    msg << "short read at byte offset " << offset + got << ": wanted " << frame_size
        << " bytes for frame " << index << ", got " << got;
    fail(msg.str());
  }

  Frame frame = make_frame(spec, index);
  const std::size_t luma_bytes = frame.y.samples.size() * spec.container_bytes();
  const std::size_t chroma_bytes = frame.cb.samples.size() * spec.container_bytes();
  decode_plane(buf.data(), frame.y, spec, 0, offset);
  if (spec.has_chroma()) {
    decode_plane(buf.data() + luma_bytes, frame.cb, spec, luma_bytes, offset);
    decode_plane(buf.data() + luma_bytes + chroma_bytes, frame.cr, spec,
                 luma_bytes + chroma_bytes, offset);
  }
  return frame;
}

std::size_t write_frame(std::ostream& out, const Frame& frame, const VideoSpec& spec) {
  spec.validate();
  check_frame_matches_spec(frame, spec);

  std::string buf;
  buf.reserve(spec.frame_bytes());
  encode_plane(frame.y, spec, buf);
  if (spec.has_chroma()) {
    encode_plane(frame.cb, spec, buf);
    encode_plane(frame.cr, spec, buf);
  }
  out.write(buf.data(), static_cast<std::streamsize>(buf.size()));
  if (!out) fail("write failed");
  return buf.size();
}

YuvReader::YuvReader(const std::string& path, const VideoSpec& spec)
    : spec_(spec), path_(path) {
  spec_.validate();
  file_.open(path, std::ios::binary);
  if (!file_) fail("cannot open '" + path + "' for reading");

  const std::uintmax_t size = std::filesystem::file_size(path);
  const std::size_t frame_size = spec_.frame_bytes();
  if (size % frame_size != 0) {
    std::ostringstream msg;
    msg << "'" << path << "': file size " << size << " is not a multiple of the frame size "
        << frame_size;
    fail(msg.str());
  }
  spec_.frame_count = static_cast<int>(size / frame_size);
}

Frame YuvReader::read(int index) {
  if (index < 0 || index >= spec_.frame_count) {
    std::ostringstream msg;
    msg << "'" << path_ << "': frame " << index << " out of range (have "
        << spec_.frame_count << ")";
    fail(msg.str());
  }
  return read_frame(file_, spec_, index);
}

YuvWriter::YuvWriter(const std::string& path, const VideoSpec& spec) : spec_(spec) {
  spec_.validate();
  file_.open(path, std::ios::binary | std::ios::trunc);
  if (!file_) fail("cannot open '" + path + "' for writing");
}

std::size_t YuvWriter::write(const Frame& frame) {
  const std::size_t n = write_frame(file_, frame, spec_);
  ++frames_written_;
  return n;
}

}  // namespace qpmap
