#include <array>
#include <cstdio>

#include "common.hpp"
#include "haarboost/features.hpp"

namespace haarboost::cli {

void register_features(CLI::App& app, Action& action) {
  struct Options {
    int window = kWindow;
    bool counts = false;
  };
  auto o = std::make_shared<Options>();
  auto* sub = app.add_subcommand("features", "Enumerate the Haar features of a square window");
  sub->add_option("--window", o->window, "Window side in pixels")->check(CLI::Range(3, 64))->capture_default_str();
  sub->add_flag("--counts", o->counts, "Print per-type and total counts instead of the features");
  sub->callback([&action, o] {
    action = [o] {
      const auto all = enumerate(o->window);
      if (!o->counts) {
        std::printf("index,ftype,x,y,w,h\n");
        for (const auto& f : all) {
          std::printf("%u,%s,%d,%d,%d,%d\n", f.global_index, std::string(to_string(f.type)).c_str(), f.bounds.x,
                      f.bounds.y, f.bounds.w, f.bounds.h);
        }
        return 0;
      }
      std::array<std::size_t, kFeatureTypes.size()> per_type{};
      for (const auto& f : all) ++per_type[static_cast<std::size_t>(f.type)];
      for (const FeatureType t : kFeatureTypes) {
        std::printf("%s %zu\n", std::string(to_string(t)).c_str(), per_type[static_cast<std::size_t>(t)]);
      }
      std::printf("total %zu\n", all.size());
      return 0;
    };
  });
}

}  // namespace haarboost::cli
