#pragma once

#include <stdexcept>
#include <string>

namespace rig {

// Bad input: malformed config, out-of-range parameters, violated preconditions.
// The CLI maps this to exit code 1.
struct validation_error : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Failure discovered while running (the CLI maps these to exit code 2).
struct runtime_abort : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A branching-process sample grew past the configured node cap.
struct cap_exceeded : runtime_abort {
  using runtime_abort::runtime_abort;
};

// A moment (or pmf) needed by a closed form is infinite or has no closed form.
struct moment_unavailable : validation_error {
  using validation_error::validation_error;
};

// A limit quantity is undefined for the given laws (e.g. Var(d*) = 0).
struct degenerate_limit : validation_error {
  using validation_error::validation_error;
};

inline void require(bool cond, const std::string& msg) {
  if (!cond) throw validation_error(msg);
}

}  // namespace rig
