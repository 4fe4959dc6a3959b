#pragma once

#include <stdexcept>
#include <string>

namespace pufent {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A challenge has exactly zero dot product with the weights; the PUF
/// response is undefined and the caller must resample.
class ZeroDotProduct : public Error {
 public:
  ZeroDotProduct() : Error("zero dot product between challenge and weights") {}
};

class IncompatibleMaps : public Error {
 public:
  using Error::Error;
};

class EmptyMap : public Error {
 public:
  EmptyMap() : Error("class map holds no samples") {}
};

class NonPoissonizedInput : public Error {
 public:
  using Error::Error;
};

/// An estimator precondition that depends on the data (too few batches,
/// non-positive power-sum mean) was not met.
class UndefinedEstimate : public Error {
 public:
  using Error::Error;
};

class UnsupportedN : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

class FormatError : public Error {
 public:
  using Error::Error;
};

class IntegrityError : public Error {
 public:
  using Error::Error;
};

class VersionError : public Error {
 public:
  using Error::Error;
};

}  // namespace pufent
