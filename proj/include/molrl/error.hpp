//
// molrl - Copyright 2026 The molrl Authors.
// SPDX-License-Identifier: Apache-2.0
//

#ifndef MOLRL_ERROR_HPP_
#define MOLRL_ERROR_HPP_

#include <cstddef>
#include <stdexcept>
#include <string>

namespace molrl {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Input data could not be used (bad SMILES, malformed files, ...).
class DataError : public Error {
 public:
  using Error::Error;
};

/// Numerical failure during training (non-finite loss or gradient).
class TrainingError : public Error {
 public:
  using Error::Error;
};

class NonFiniteGradient : public TrainingError {
 public:
  using TrainingError::TrainingError;
};

class DivergenceDetected : public TrainingError {
 public:
  using TrainingError::TrainingError;
};

enum class SmilesErrorKind {
  kSyntax,
  kValence,
  kUnclosedRing,
  kUnbalancedBranch,
  kAromaticity,
};

class SmilesError : public DataError {
 public:
  SmilesError(SmilesErrorKind kind, std::size_t position, std::string reason)
      : DataError(reason), kind_(kind), position_(position) {}

  SmilesErrorKind kind() const { return kind_; }
  // Character offset for syntax errors, atom index for valence errors and
  // the ring number for unclosed rings.
  std::size_t position() const { return position_; }

 private:
  SmilesErrorKind kind_;
  std::size_t position_;
};

enum class TokenErrorKind { kUnknownToken, kTooLong, kMalformedSequence };

class TokenError : public DataError {
 public:
  TokenError(TokenErrorKind kind, std::size_t position, std::string reason)
      : DataError(reason), kind_(kind), position_(position) {}

  TokenErrorKind kind() const { return kind_; }
  std::size_t position() const { return position_; }

 private:
  TokenErrorKind kind_;
  std::size_t position_;
};

}  // namespace molrl

#endif  // MOLRL_ERROR_HPP_
