#pragma once

#include <stdexcept>

namespace csfg {

/// A searched-for feature (e.g. a scan peak) does not exist.
class NotFoundError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A request exceeds a configured resource cap.
class ResourceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace csfg
