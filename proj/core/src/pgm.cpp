#include "haarboost/pgm.hpp"

#include <cctype>
#include <fstream>
#include <iterator>
#include <string>

#include "haarboost/error.hpp"

namespace haarboost {

namespace {

class HeaderReader {
 public:
  HeaderReader(std::string_view bytes, std::string_view name) : bytes_(bytes), name_(name) {}

  void skip_space_and_comments() {
    while (pos_ < bytes_.size()) {
      const char c = bytes_[pos_];
      if (c == '#') {
        while (pos_ < bytes_.size() && bytes_[pos_] != '\n') ++pos_;
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        ++pos_;
      } else {
        break;
      }
    }
  }

  long number(const char* what) {
    skip_space_and_comments();
    long v = 0;
    std::size_t digits = 0;
    while (pos_ < bytes_.size() && std::isdigit(static_cast<unsigned char>(bytes_[pos_]))) {
      v = v * 10 + (bytes_[pos_] - '0');
      if (v > 1'000'000) fail(std::string(what) + " out of range");
      ++pos_;
      ++digits;
    }
    if (digits == 0) fail(std::string("missing ") + what);
    return v;
  }

  [[noreturn]] void fail(const std::string& why) const {
    throw LoadError(std::string(name_) + ": not a valid P5 PGM (" + why + ")");
  }

  std::size_t pos_ = 0;
  std::string_view bytes_;
  std::string_view name_;
};

}  // namespace

Image parse_pgm(std::string_view bytes, std::string_view name) {
  HeaderReader r(bytes, name);
  if (bytes.size() < 2 || bytes[0] != 'P' || bytes[1] != '5') r.fail("bad magic");
  r.pos_ = 2;
  const long width = r.number("width");
  const long height = r.number("height");
  const long maxval = r.number("maxval");
  if (width < 1 || height < 1) r.fail("zero dimension");
  if (maxval < 1 || maxval > 255) r.fail("maxval must be in 1..255");
  if (r.pos_ >= bytes.size() || !std::isspace(static_cast<unsigned char>(bytes[r.pos_]))) {
    r.fail("missing separator before raster");
  }
  ++r.pos_;
  const std::size_t n = static_cast<std::size_t>(width) * static_cast<std::size_t>(height);
  if (bytes.size() - r.pos_ < n) r.fail("truncated raster");
  std::vector<std::uint8_t> px(n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto v = static_cast<std::uint8_t>(bytes[r.pos_ + i]);
    if (v > maxval) r.fail("pixel exceeds maxval");
    px[i] = v;
  }
  return Image(static_cast<int>(width), static_cast<int>(height), std::move(px));
}

Image read_pgm(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw LoadError(path.string() + ": cannot open");
  std::string bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return parse_pgm(bytes, path.string());
}

void write_pgm(const std::filesystem::path& path, const Image& image) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(path.string() + ": cannot write");
  out << "P5\n" << image.width() << ' ' << image.height() << "\n255\n";
  auto px = image.pixels();
  out.write(reinterpret_cast<const char*>(px.data()), static_cast<std::streamsize>(px.size()));
  if (!out) throw Error(path.string() + ": write failed");
}

}  // namespace haarboost
