#pragma once

#include <stdexcept>

namespace mzd {

/// A likelihood or knowledge evaluation saw no signal at all.
class NoCountsError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// The analyzer blocks all light, so a conditional visibility is undefined
/// (as opposed to zero).
class UndefinedVisibilityError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

}  // namespace mzd
