#pragma once

#include <stdexcept>
#include <string>

namespace grosswald {

// Base class for all toolkit-specific failures. Domain violations on
// ordinary arguments use std::invalid_argument directly.
class error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

// ankeny_bound evaluated below the theorem hypothesis p >= 10^9.
class out_of_theorem_range : public error {
  public:
    using error::error;
};

// No finite threshold exists below the internal search cap, or every
// admissible sieve choice was skipped.
class unbounded_case : public error {
  public:
    using error::error;
};

// Factoring effort cap exceeded; partial factorizations are never returned.
class incomplete_factorization : public error {
  public:
    using error::error;
};

// shrink_fixpoint start bound fails its tail-domination entry check.
class invalid_start : public error {
  public:
    using error::error;
};

// Candidate interval larger than the enumeration cap; caller must recurse.
class must_split : public error {
  public:
    using error::error;
};

// Hard internal limit reached (e.g. case recursion exhausted its prime budget).
class cap_exceeded : public error {
  public:
    using error::error;
};

} // namespace grosswald
