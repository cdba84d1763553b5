#pragma once

#include <stdexcept>
#include <string>

namespace progmerge {

// A program violates a structural invariant (unknown abstraction, arity
// mismatch, free variable, malformed form).
class ProgramError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Runtime failure while evaluating a program.
class EvalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Evaluation exceeded its node, step or depth bound.
class NonTerminationError : public EvalError {
 public:
  using EvalError::EvalError;
};

// An enumeration or search bound was hit; the caller may raise the limits.
class ResourceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace progmerge
