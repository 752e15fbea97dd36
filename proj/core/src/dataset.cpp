#include "haarboost/dataset.hpp"

#include <algorithm>
#include <cstdio>
#include <random>
#include <sstream>

#include "haarboost/error.hpp"
#include "haarboost/features.hpp"
#include "haarboost/pgm.hpp"

namespace haarboost {

namespace {

class Fnv1a {
 public:
  void byte(std::uint8_t b) {
    h_ ^= b;
    h_ *= 0x100000001b3ull;
  }
  void u32(std::uint32_t v) {
    for (int i = 0; i < 4; ++i) byte(static_cast<std::uint8_t>(v >> (8 * i)));
  }
  std::uint64_t value() const { return h_; }

 private:
  std::uint64_t h_ = 0xcbf29ce484222325ull;
};

std::vector<std::filesystem::path> sorted_files(const std::filesystem::path& dir) {
  std::error_code ec;
  if (!std::filesystem::is_directory(dir, ec)) throw LoadError(dir.string() + ": not a directory");
  std::vector<std::filesystem::path> files;
  for (const auto& entry : std::filesystem::directory_iterator(dir)) {
    if (entry.is_regular_file()) files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end(),
            [](const auto& a, const auto& b) { return a.filename().string() < b.filename().string(); });
  return files;
}

void load_class(const std::filesystem::path& dir, std::uint8_t label, std::vector<TrainingExample>& out) {
  const auto files = sorted_files(dir);
  if (files.empty()) {
    throw LoadError(dir.string() + ": class has zero examples");
  }
  for (const auto& file : files) {
    Image img = read_pgm(file);
    if (img.width() != kWindow || img.height() != kWindow) {
      std::ostringstream os;
      os << file.string() << ": expected " << kWindow << "x" << kWindow << ", got " << img.width() << "x"
         << img.height();
      throw LoadError(os.str());
    }
    out.push_back({integral_of(img), label});
  }
}

}  // namespace

Dataset::Dataset(std::vector<TrainingExample> examples, std::string source)
    : examples_(std::move(examples)), source_(std::move(source)) {
  Fnv1a h;
  for (const auto& e : examples_) {
    if (e.x.width() != kWindow || e.x.height() != kWindow) throw LoadError("dataset example is not 24x24");
    if (e.y > 1) throw LoadError("dataset label must be 0 or 1");
    (e.y == 1 ? stats_.positives : stats_.negatives)++;
    h.byte(e.y);
    for (std::uint32_t s : e.x.sums()) h.u32(s);
  }
  if (stats_.positives == 0 || stats_.negatives == 0) {
    throw LoadError("dataset class has zero examples (need at least one positive and one negative)");
  }
  if (!std::is_partitioned(examples_.begin(), examples_.end(), [](const auto& e) { return e.y == 1; })) {
    throw LoadError("dataset must list positives before negatives");
  }
  hash_ = h.value();
}

std::string Dataset::manifest() const {
  std::ostringstream os;
  os << "source: " << source_ << '\n'
     << "examples: " << size() << '\n'
     << "positives: " << stats_.positives << '\n'
     << "negatives: " << stats_.negatives << '\n'
     << "window: " << kWindow << "x" << kWindow << '\n'
     << "content_hash: " << hash_hex(hash_) << '\n';
  return os.str();
}

Dataset load_dir(const std::filesystem::path& positives_dir, const std::filesystem::path& negatives_dir) {
  std::vector<TrainingExample> examples;
  load_class(positives_dir, 1, examples);
  load_class(negatives_dir, 0, examples);
  return Dataset(std::move(examples), "dirs:" + positives_dir.string() + "," + negatives_dir.string());
}

std::vector<LabeledImage> synth_images(std::uint64_t seed, std::size_t positives, std::size_t negatives,
                                       SynthOptions options) {
  if (positives == 0 || negatives == 0) throw LoadError("synth: class has zero examples");
  if (options.min_contrast < 0 || options.max_contrast <= options.min_contrast || options.max_contrast > 255) {
    throw std::invalid_argument("synth: contrast range must satisfy 0 <= min < max <= 255");
  }
  // Only raw engine output is used: std distributions are implementation-defined.
  std::mt19937_64 rng(seed);
  auto below = [&rng](std::uint64_t bound) { return static_cast<int>(rng() % bound); };

  // Both classes share the background so the block contrast is the only signal.
  constexpr int kBackground = 160;
  constexpr int kBlockLo = kWindow / 4;
  constexpr int kBlockHi = kWindow - kWindow / 4;
  std::vector<LabeledImage> out;
  out.reserve(positives + negatives);
  for (std::size_t i = 0; i < positives; ++i) {
    Image img(kWindow, kWindow);
    const int contrast =
        options.min_contrast + below(static_cast<std::uint64_t>(options.max_contrast - options.min_contrast));
    for (int y = 0; y < kWindow; ++y) {
      for (int x = 0; x < kWindow; ++x) {
        int v = below(kBackground);
        if (x >= kBlockLo && x < kBlockHi && y >= kBlockLo && y < kBlockHi) v += contrast;
        img.set(x, y, static_cast<std::uint8_t>(std::min(v, 255)));
      }
    }
    out.push_back({std::move(img), 1});
  }
  for (std::size_t i = 0; i < negatives; ++i) {
    Image img(kWindow, kWindow);
    for (int y = 0; y < kWindow; ++y) {
      for (int x = 0; x < kWindow; ++x) img.set(x, y, static_cast<std::uint8_t>(below(kBackground)));
    }
    out.push_back({std::move(img), 0});
  }
  return out;
}

Dataset from_images(const std::vector<LabeledImage>& images, std::string source) {
  std::vector<TrainingExample> examples;
  examples.reserve(images.size());
  for (const auto& li : images) {
    if (li.image.width() != kWindow || li.image.height() != kWindow) {
      throw LoadError(source + ": expected 24x24 images");
    }
    examples.push_back({integral_of(li.image), li.label});
  }
  return Dataset(std::move(examples), std::move(source));
}

Dataset synth(std::uint64_t seed, std::size_t positives, std::size_t negatives, SynthOptions options) {
  std::ostringstream src;
  src << "synth:" << seed << "," << positives << "," << negatives;
  if (options.min_contrast != SynthOptions{}.min_contrast || options.max_contrast != SynthOptions{}.max_contrast) {
    src << ",contrast=" << options.min_contrast << ".." << options.max_contrast;
  }
  return from_images(synth_images(seed, positives, negatives, options), src.str());
}

void write_dataset_dirs(const std::vector<LabeledImage>& images, const std::filesystem::path& dir) {
  const auto pos = dir / "pos";
  const auto neg = dir / "neg";
  std::filesystem::create_directories(pos);
  std::filesystem::create_directories(neg);
  std::size_t np = 0;
  std::size_t nn = 0;
  for (const auto& li : images) {
    char name[32];
    std::snprintf(name, sizeof name, "%06zu.pgm", li.label ? np++ : nn++);
    write_pgm((li.label ? pos : neg) / name, li.image);
  }
}

std::string hash_hex(std::uint64_t h) {
  static constexpr char kDigits[] = "0123456789abcdef";
  std::string s(16, '0');
  for (int i = 15; i >= 0; --i, h >>= 4) s[static_cast<std::size_t>(i)] = kDigits[h & 0xf];
  return s;
}

}  // namespace haarboost
