#include <cstdio>

#include "common.hpp"
#include "haarboost/model_io.hpp"
#include "haarboost/pgm.hpp"

namespace haarboost::cli {

void register_classify(CLI::App& app, Action& action) {
  struct Options {
    std::string model;
    std::string image;
  };
  auto o = std::make_shared<Options>();
  auto* sub = app.add_subcommand("classify", "Print 1 (face) or 0 for a 24x24 PGM image");
  sub->add_option("--model", o->model, "Model file")->required();
  sub->add_option("--image", o->image, "24x24 binary PGM")->required();
  sub->callback([&action, o] {
    action = [o] {
      const StrongClassifier sc = load_model(o->model);
      const Image img = read_pgm(o->image);
      if (img.width() != kWindow || img.height() != kWindow) {
        throw std::invalid_argument(o->image + ": expected 24x24, got " + std::to_string(img.width()) + "x" +
                                    std::to_string(img.height()));
      }
      std::printf("%d\n", classify(sc, integral_of(img)));
      return 0;
    };
  });
}

}  // namespace haarboost::cli
