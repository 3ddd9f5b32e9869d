#pragma once

#include <stdexcept>
#include <string>

namespace nnapprox {

// Violated input contract (bad dimension, out-of-range parameter, budget too
// small). The CLI maps this family to exit code 2.
struct precondition_error : std::invalid_argument {
  explicit precondition_error(const std::string& what) : std::invalid_argument(what) {}
};

// An oracle or sampled function produced a non-finite value.
struct evaluation_error : std::runtime_error {
  explicit evaluation_error(const std::string& what) : std::runtime_error(what) {}
};

// A search failed to bracket its target (e.g. no finite scale normalises a
// profile below 1).
struct divergence_error : std::runtime_error {
  explicit divergence_error(const std::string& what) : std::runtime_error(what) {}
};

// A verdict was requested closer to the critical band than the estimate
// quality supports; the caller must tighten the estimate, not trust a guess.
struct indeterminate_error : std::runtime_error {
  explicit indeterminate_error(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace nnapprox
