#pragma once

#include <stdexcept>

namespace chanent {

// Base class for all library failures.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Linear algebra preconditions.
class NotHermitian : public Error { public: using Error::Error; };
class NotPsd : public Error { public: using Error::Error; };
class ConvergenceFailure : public Error { public: using Error::Error; };
class DimensionMismatch : public Error { public: using Error::Error; };
class SingularState : public Error { public: using Error::Error; };

// State and channel preconditions.
class NotUnitary : public Error { public: using Error::Error; };
class NotCptp : public Error { public: using Error::Error; };
class NotTracePreserving : public Error { public: using Error::Error; };
class NotUnital : public Error { public: using Error::Error; };
class NotQubit : public Error { public: using Error::Error; };
class POutOfRange : public Error { public: using Error::Error; };
class InvalidParameter : public Error { public: using Error::Error; };
class SingularMarginal : public Error { public: using Error::Error; };

// Experiments and serialization.
class InsufficientTrials : public Error { public: using Error::Error; };
class ParseError : public Error { public: using Error::Error; };

}  // namespace chanent
