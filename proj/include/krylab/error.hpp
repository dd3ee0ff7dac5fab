#pragma once

#include <stdexcept>
#include <string>

namespace krylab {

// Error categories map onto the CLI exit codes: config -> 3,
// non_convergence -> 4, everything else surfaces as a check failure (2).
enum class ErrKind {
    invalid_argument,
    admissibility,
    geometry,
    config,
    non_convergence,
    io,
};

class Error : public std::runtime_error {
  public:
    Error(ErrKind kind, const std::string& msg) : std::runtime_error(msg), kind_(kind) {}
    ErrKind kind() const { return kind_; }

  private:
    ErrKind kind_;
};

[[noreturn]] inline void fail(ErrKind k, const std::string& msg) { throw Error(k, msg); }

} // namespace krylab
