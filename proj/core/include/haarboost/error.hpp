#pragma once

#include <stdexcept>
#include <string>

namespace haarboost {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Dataset or image file could not be loaded.
class LoadError : public Error {
 public:
  using Error::Error;
};

/// A boosting round could not be completed (weight collapse, weak learner at chance).
class TrainingError : public Error {
 public:
  using Error::Error;
};

/// Malformed, unexpected or out-of-order wire message.
class ProtocolError : public Error {
 public:
  using Error::Error;
};

/// Distributed job failure. The message is prefixed with the reporting role.
class ClusterError : public Error {
 public:
  using Error::Error;
};

}  // namespace haarboost
