#pragma once

#include <stdexcept>
#include <string>

namespace expfunc {

/// Real number extended by +inf and -inf.
///
/// A divergent Laplace exponent (E e^{-aX_t} = inf) is MinusInfinity; an
/// infinite moment is PlusInfinity. Never stored as a floating-point inf.
class Extended {
 public:
  enum class Kind { Finite, PlusInfinity, MinusInfinity };

  static Extended finite(double v) { return Extended(Kind::Finite, v); }
  static Extended plus_infinity() { return Extended(Kind::PlusInfinity, 0.0); }
  static Extended minus_infinity() { return Extended(Kind::MinusInfinity, 0.0); }
  /// Laplace exponent whose exponential moment does not exist.
  static Extended divergent() { return minus_infinity(); }

  Kind kind() const { return kind_; }
  bool is_finite() const { return kind_ == Kind::Finite; }
  bool is_divergent() const { return kind_ == Kind::MinusInfinity; }
  bool is_plus_infinity() const { return kind_ == Kind::PlusInfinity; }

  double value() const {
    if (kind_ != Kind::Finite) throw std::logic_error("Extended::value() on a non-finite value");
    return value_;
  }

  bool greater_than(double x) const {
    return kind_ == Kind::PlusInfinity || (kind_ == Kind::Finite && value_ > x);
  }
  bool less_than(double x) const {
    return kind_ == Kind::MinusInfinity || (kind_ == Kind::Finite && value_ < x);
  }

  std::string to_string() const;

  friend bool operator==(const Extended& a, const Extended& b) {
    return a.kind_ == b.kind_ && (a.kind_ != Kind::Finite || a.value_ == b.value_);
  }

 private:
  Extended(Kind k, double v) : kind_(k), value_(v) {}
  Kind kind_;
  double value_;
};

enum class Verdict { Satisfied, Violated, Unknown };

/// Kernel selection for the data-parallel loops. Serial is the reference
/// implementation; Parallel (OpenMP) must produce bit-identical results.
enum class Execution { Serial, Parallel };

const char* to_string(Verdict v);

/// Malformed process description or out-of-domain parameters.
class SpecError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A mathematical precondition of an operation does not hold. `code` is a
/// stable machine-readable tag (e.g. "COND_RT1_VIOLATED").
class PreconditionError : public std::runtime_error {
 public:
  PreconditionError(std::string code, const std::string& what)
      : std::runtime_error(code + ": " + what), code_(std::move(code)) {}
  const std::string& code() const { return code_; }

 private:
  std::string code_;
};

/// Closed-form divided differences are too close to a confluent point.
class NearConfluentError : public PreconditionError {
 public:
  explicit NearConfluentError(const std::string& what) : PreconditionError("NEAR_CONFLUENT", what) {}
};

/// Adaptive quadrature failed to reach tolerance or hit a non-finite value.
class IntegrationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace expfunc
