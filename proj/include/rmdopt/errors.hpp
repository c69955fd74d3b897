#pragma once

#include <stdexcept>
#include <string>

namespace rmdopt {

// Base class for all library errors. Context (e.g. the iteration at which a
// step failed) can be prepended without losing the dynamic type.
class Error : public std::exception {
 public:
  explicit Error(std::string msg) : msg_(std::move(msg)) {}
  const char* what() const noexcept override { return msg_.c_str(); }
  void prepend_context(const std::string& ctx) { msg_ = ctx + ": " + msg_; }

 private:
  std::string msg_;
};

struct DimensionMismatch : Error {
  using Error::Error;
};
struct SingularMatrix : Error {
  using Error::Error;
};
struct RankDeficient : Error {
  using Error::Error;
};
struct DomainViolation : Error {
  using Error::Error;
};
struct InfeasiblePoint : Error {
  using Error::Error;
};
struct BaseMismatch : Error {
  using Error::Error;
};
struct TangentMismatch : Error {
  using Error::Error;
};
struct DegenerateInput : Error {
  using Error::Error;
};
struct OutOfChart : Error {
  using Error::Error;
};
struct InvalidK : Error {
  using Error::Error;
};
struct DegenerateScale : Error {
  using Error::Error;
};
struct NonpositiveMetric : Error {
  using Error::Error;
};
struct ConfigError : Error {
  using Error::Error;
};

}  // namespace rmdopt
