#pragma once

#include <stdexcept>
#include <string>

namespace lpt {

/// An operation's precondition does not hold for the given inputs.
class PreconditionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A frequency support reaches the grid's Nyquist frequency pi/dx.
class NyquistError : public PreconditionError {
 public:
  using PreconditionError::PreconditionError;
};

/// A frequency is below what the window length 2 pi/(L dx) can resolve.
class ResolutionError : public PreconditionError {
 public:
  using PreconditionError::PreconditionError;
};

/// Two grid signals live on incompatible grids.
class GridMismatchError : public PreconditionError {
 public:
  using PreconditionError::PreconditionError;
};

/// A convolution result would not fit the computational window.
class WindowOverflowError : public PreconditionError {
 public:
  using PreconditionError::PreconditionError;
};

}  // namespace lpt
