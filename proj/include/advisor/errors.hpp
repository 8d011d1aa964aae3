#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace advisor {

// Base class for all advisor errors. what() always starts with the error
// kind, e.g. "UnknownAttribute: product.Category".
class Error : public std::runtime_error {
 public:
  Error(const std::string& kind, const std::string& message)
      : std::runtime_error(kind + ": " + message),
        kind_(kind),
        message_(message) {}

  const std::string& kind() const noexcept { return kind_; }
  const std::string& message() const noexcept { return message_; }

  // Same kind, message prefixed with context (e.g. a statement ordinal).
  Error with_context(const std::string& context) const {
    return Error(kind_, context + ": " + message_);
  }

 private:
  std::string kind_;
  std::string message_;
};

#define ADVISOR_DEFINE_ERROR(NAME, KIND)                       \
  class NAME : public Error {                                  \
   public:                                                     \
    explicit NAME(const std::string& message)                  \
        : Error(KIND, message) {}                              \
  }

ADVISOR_DEFINE_ERROR(ParseError, "ParseError");
ADVISOR_DEFINE_ERROR(ValidationError, "ValidationError");
ADVISOR_DEFINE_ERROR(UnknownTableError, "UnknownTable");
ADVISOR_DEFINE_ERROR(UnknownAttributeError, "UnknownAttribute");
ADVISOR_DEFINE_ERROR(UnsupportedFeatureError, "UnsupportedFeature");
ADVISOR_DEFINE_ERROR(EmptyWorkloadError, "EmptyWorkload");
ADVISOR_DEFINE_ERROR(EmptyClusterError, "EmptyCluster");
ADVISOR_DEFINE_ERROR(InvalidMinsupError, "InvalidMinsup");
ADVISOR_DEFINE_ERROR(InvalidThresholdError, "InvalidThreshold");
ADVISOR_DEFINE_ERROR(LengthMismatchError, "LengthMismatch");
ADVISOR_DEFINE_ERROR(InvalidBudgetError, "InvalidBudget");
ADVISOR_DEFINE_ERROR(InvalidAlphaError, "InvalidAlpha");
ADVISOR_DEFINE_ERROR(UnsizedStructureError, "UnsizedStructure");
ADVISOR_DEFINE_ERROR(UnknownStructureIdError, "UnknownStructureId");

#undef ADVISOR_DEFINE_ERROR

// Syntax errors carry the byte offset of the offending token.
class SyntaxError : public Error {
 public:
  SyntaxError(const std::string& message, std::size_t byte_offset)
      : Error("SyntaxError",
              message + " (at byte " + std::to_string(byte_offset) + ")"),
        byte_offset_(byte_offset) {}

  std::size_t byte_offset() const noexcept { return byte_offset_; }

 private:
  std::size_t byte_offset_;
};

// Rethrows `e` with a context prefix, preserving its kind in the message.
[[noreturn]] inline void rethrow_with_context(const Error& e,
                                              const std::string& context) {
  throw e.with_context(context);
}

}  // namespace advisor
