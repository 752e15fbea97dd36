#include <cstdio>
#include <exception>

#include "common.hpp"

int main(int argc, char** argv) {
  using namespace haarboost::cli;
  CLI::App app{"Haar-feature AdaBoost training: sequential, multi-threaded and distributed"};
  app.require_subcommand(1);
  Action action;
  register_train(app, action);
  register_role(app, action);
  register_classify(app, action);
  register_features(app, action);
  register_bench(app, action);
  register_synth(app, action);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 2;
  }

  try {
    return action();
  } catch (const UsageError& e) {
    std::fprintf(stderr, "usage error: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
}
