#pragma once

#include <stdexcept>
#include <string>

namespace mvtgg {

// Base class for everything this library throws on purpose.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Malformed input: unreadable files, schema violations, ill-typed graphs,
// rules that break the grammar restrictions, bad CLI parameters. The CLI
// maps this to exit code 2.
class InputError : public Error {
public:
    using Error::Error;
};

// A rewrite step could not be performed at the requested match: the match is
// not a valid monomorphism, the dangling condition fails, the mark
// constraints are not met, or the applicability version set is empty.
class ApplicationError : public Error {
public:
    using Error::Error;
};

// The engine's dynamic determinism guard found two simultaneously enabled
// applications whose bookkeeping clear sets overlap, i.e. the rule set is
// not deterministic on this input.
class DeterminismError : public Error {
public:
    using Error::Error;
};

// The engine exceeded its application bound without reaching a fixpoint,
// which a terminating rule set can never do.
class TerminationError : public Error {
public:
    using Error::Error;
};

// The consolidated and version-by-version transformations disagreed where
// they must not. The benchmark refuses to time such runs; the CLI maps this
// to exit code 1.
class VerificationError : public Error {
public:
    using Error::Error;
};

} // namespace mvtgg
