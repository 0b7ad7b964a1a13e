#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace toposfactor {

enum class ErrorCode {
  // fincat
  MissingComposite,
  NonAssociative,
  BrokenIdentity,
  IllTypedComposite,
  UnmappedMorphism,
  BrokenComposition,
  UnknownName,
  DuplicateName,
  NotNatural,
  // constructions
  NoFiller,
  // presheaf
  NotFunctorial,
  // factorization
  NotTerminallyConnected,
  PreconditionViolated,
  // sites
  NotASieve,
  NotATopology,
  NoTerminalObject,
  NotLocalSite,
  NotComorphism,
  // proetale
  NotCofiltered,
  MissingPullback,
  OreFailed,
  MissingProduct,
  // cli
  SyntaxError,
  UnresolvedName,
  UnknownCommand,
};

std::string_view to_string(ErrorCode code);

// Raised for violated preconditions and invalid input data. The message names
// the concrete objects or morphisms witnessing the failure.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(to_string(code)) + ": " + message),
        code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

// Raised when a result that is guaranteed by a theorem fails to hold; this
// always indicates a bug in this library, never bad input.
class InvariantViolation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

// Verdict of a decision procedure. A failing check carries a human-readable
// certificate naming the witnesses.
struct Check {
  bool holds = true;
  std::string certificate;

  static Check ok() { return {}; }
  static Check fail(std::string why) { return {false, std::move(why)}; }

  explicit operator bool() const noexcept { return holds; }
};

}  // namespace toposfactor
