#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace groundfsa {

/// Base class of every error raised by the toolkit.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
  /// Name of the error class, for diagnostics.
  virtual const char* kind() const noexcept { return "Error"; }
};

/// A structurally invalid controller, model or document.
class InvalidDocument : public Error {
 public:
  const char* kind() const noexcept override { return "InvalidDocument"; }
  using Error::Error;
};

class UnboundAtom : public Error {
 public:
  const char* kind() const noexcept override { return "UnboundAtom"; }
  explicit UnboundAtom(std::string atom)
      : Error("unbound atom '" + atom + "'"), atom_(std::move(atom)) {}
  const std::string& atom() const noexcept { return atom_; }

 private:
  std::string atom_;
};

class SyntaxError : public Error {
 public:
  const char* kind() const noexcept override { return "SyntaxError"; }
  SyntaxError(const std::string& message, std::size_t position)
      : Error(message + " at position " + std::to_string(position)),
        position_(position) {}
  std::size_t position() const noexcept { return position_; }

 private:
  std::size_t position_;
};

class AlreadyHardened : public Error {
 public:
  const char* kind() const noexcept override { return "AlreadyHardened"; }
  AlreadyHardened() : Error("controller already contains UNC atoms") {}
};

class AlphabetMismatch : public Error {
 public:
  const char* kind() const noexcept override { return "AlphabetMismatch"; }
  explicit AlphabetMismatch(std::vector<std::string> offending)
      : Error(describe(offending)), offending_(std::move(offending)) {}
  const std::vector<std::string>& offending() const noexcept { return offending_; }

 private:
  static std::string describe(const std::vector<std::string>& atoms) {
    std::string msg = "alphabet mismatch:";
    for (const auto& a : atoms) msg += " " + a;
    return msg;
  }
  std::vector<std::string> offending_;
};

// text-compiler errors

class MalformedNumbering : public Error {
 public:
  const char* kind() const noexcept override { return "MalformedNumbering"; }
  using Error::Error;
};

class UnparsableStep : public Error {
 public:
  const char* kind() const noexcept override { return "UnparsableStep"; }
  explicit UnparsableStep(std::string raw)
      : Error("cannot parse step: " + raw), raw_(std::move(raw)) {}
  const std::string& raw() const noexcept { return raw_; }

 private:
  std::string raw_;
};

class UnsupportedConstruct : public Error {
 public:
  const char* kind() const noexcept override { return "UnsupportedConstruct"; }
  using Error::Error;
};

class MissingField : public Error {
 public:
  const char* kind() const noexcept override { return "MissingField"; }
  explicit MissingField(const std::string& field)
      : Error("missing field '" + field + "'") {}
};

class DanglingGoto : public Error {
 public:
  const char* kind() const noexcept override { return "DanglingGoto"; }
  DanglingGoto(int step, int target)
      : Error("step " + std::to_string(step) + " jumps to missing step " +
              std::to_string(target)) {}
};

class UnboundPlaceholder : public Error {
 public:
  const char* kind() const noexcept override { return "UnboundPlaceholder"; }
  explicit UnboundPlaceholder(const std::string& name)
      : Error("unbound placeholder {" + name + "}") {}
};

// grounding-runtime errors

class BackendFailure : public Error {
 public:
  const char* kind() const noexcept override { return "BackendFailure"; }
  BackendFailure(std::string frame_id, const std::string& message)
      : Error("perception backend failed on frame '" + frame_id + "': " + message),
        frame_id_(std::move(frame_id)) {}
  const std::string& frame_id() const noexcept { return frame_id_; }

 private:
  std::string frame_id_;
};

class Stuck : public Error {
 public:
  const char* kind() const noexcept override { return "Stuck"; }
  Stuck(std::string state, std::string frame_id)
      : Error("no enabled transition in state '" + state + "' on frame '" + frame_id + "'"),
        state_(std::move(state)),
        frame_id_(std::move(frame_id)) {}
  const std::string& state() const noexcept { return state_; }
  const std::string& frame_id() const noexcept { return frame_id_; }

 private:
  std::string state_;
  std::string frame_id_;
};

// calibration errors

class Infeasible : public Error {
 public:
  const char* kind() const noexcept override { return "Infeasible"; }
  using Error::Error;
};

}  // namespace groundfsa
