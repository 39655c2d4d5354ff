// Copyright 2026 msboost authors
// SPDX-License-Identifier: Apache-2.0

#ifndef MSBOOST_ERRORS_HPP
#define MSBOOST_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace msboost {

// Base class for all errors raised by the library.
class Error : public std::runtime_error {
public:
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// A caller-supplied value violates a precondition (response outside the
// family support, probability outside (0,1), malformed input file, ...).
class InvalidInputError : public Error {
public:
  explicit InvalidInputError(const std::string& msg) : Error(msg) {}
};

// Estimation broke down: a state lost all posterior mass, a transition
// matrix row has no mass, the stationary system is singular.
class DegeneracyError : public Error {
public:
  explicit DegeneracyError(const std::string& msg) : Error(msg) {}
};

// A base-learner cannot be fitted on the given covariate (constant column,
// too few distinct values for the requested degrees of freedom).
class DegenerateLearnerError : public Error {
public:
  explicit DegenerateLearnerError(const std::string& msg) : Error(msg) {}
};

// Every candidate base-learner of a predictor is degenerate.
class NoCandidateError : public Error {
public:
  explicit NoCandidateError(const std::string& msg) : Error(msg) {}
};

}  // namespace msboost

#endif  // MSBOOST_ERRORS_HPP
