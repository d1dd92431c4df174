#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace kanlift {

enum class ErrorKind {
  TagMismatch,
  CarrierMismatch,
  AmbientMismatch,
  EmptyList,
  UnsupportedTag,
  NotClosed,
  NotMeasurable,
  SpaceMismatch,
  ActionMismatch,
  NotReflexive,
  CarrierTooLarge,
  TooManyBlocks,
  InvalidStructure,
  InvalidRational,
  Schema,
};

constexpr std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::TagMismatch: return "TagMismatch";
    case ErrorKind::CarrierMismatch: return "CarrierMismatch";
    case ErrorKind::AmbientMismatch: return "AmbientMismatch";
    case ErrorKind::EmptyList: return "EmptyList";
    case ErrorKind::UnsupportedTag: return "UnsupportedTag";
    case ErrorKind::NotClosed: return "NotClosed";
    case ErrorKind::NotMeasurable: return "NotMeasurable";
    case ErrorKind::SpaceMismatch: return "SpaceMismatch";
    case ErrorKind::ActionMismatch: return "ActionMismatch";
    case ErrorKind::NotReflexive: return "NotReflexive";
    case ErrorKind::CarrierTooLarge: return "CarrierTooLarge";
    case ErrorKind::TooManyBlocks: return "TooManyBlocks";
    case ErrorKind::InvalidStructure: return "InvalidStructure";
    case ErrorKind::InvalidRational: return "InvalidRational";
    case ErrorKind::Schema: return "Schema";
  }
  return "Unknown";
}

/// Every precondition violation in the library is reported through this type.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

inline void require(bool condition, ErrorKind kind, const std::string& what) {
  if (!condition) throw Error(kind, what);
}

}  // namespace kanlift
