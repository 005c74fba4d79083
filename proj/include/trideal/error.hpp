#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace trideal {

/// Base class for all engine errors.  `code()` is a stable machine-readable
/// tag; `what()` carries the human-readable detail.
class Error : public std::runtime_error {
public:
    Error(std::string code, const std::string& what)
        : std::runtime_error(what), code_(std::move(code)) {}
    const std::string& code() const { return code_; }

private:
    std::string code_;
};

/// Malformed input: parse failures, dimension mismatches, ring mismatches.
struct InputError : Error {
    explicit InputError(const std::string& what) : Error("input", what) {}
};

/// A ring table failed exhaustive axiom verification.
struct AxiomViolation : Error {
    explicit AxiomViolation(const std::string& what) : Error("axiom", what) {}
};

/// A requested object exceeds a configured size cap.
struct CapError : Error {
    explicit CapError(const std::string& what) : Error("cap", what) {}
};

/// An operation's documented precondition does not hold.
struct PreconditionError : Error {
    explicit PreconditionError(const std::string& what) : Error("precondition", what) {}
};

/// An exact solve or decomposition failed (certificate construction,
/// coefficient decomposition, chain data inconsistencies).
struct SolveError : Error {
    explicit SolveError(const std::string& what) : Error("solve", what) {}
};

/// A complete search was cut off by the configured search cap; the result is
/// undetermined rather than a definite yes/no.
struct SearchCapError : Error {
    explicit SearchCapError(const std::string& what) : Error("search-cap", what) {}
};

/// A decision procedure ran out of materialized depth without periodic
/// structure to promote the window observation to an exact statement.
struct UndeterminedError : Error {
    explicit UndeterminedError(const std::string& what) : Error("undetermined", what) {}
};

}  // namespace trideal
