#include <cstdio>

#include "common.hpp"

namespace haarboost::cli {

void register_synth(CLI::App& app, Action& action) {
  struct Options {
    DataFlags data;
    std::string out;
  };
  auto o = std::make_shared<Options>();
  auto* sub = app.add_subcommand("synth", "Write a synthetic dataset as OUT/pos and OUT/neg PGM directories");
  o->data.add_to(*sub);
  sub->add_option("--out", o->out, "Output directory")->required();
  sub->callback([&action, o] {
    action = [o] {
      if (o->data.synth.empty()) throw UsageError("synth requires --synth SEED,L,M");
      const auto images = o->data.synth_images();
      write_dataset_dirs(images, o->out);
      std::fprintf(stderr, "wrote %zu images to %s\n", images.size(), o->out.c_str());
      return 0;
    };
  });
}

}  // namespace haarboost::cli
