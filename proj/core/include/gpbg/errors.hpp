#pragma once

#include <stdexcept>
#include <string>

namespace gpbg {

// Guard and precondition failures carry distinct types so that callers
// (CLI, tests) can map them to exit codes without string matching.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Enumeration or partition would exceed the explicit-list guard.
struct SizeGuardExceeded final : Error {
    using Error::Error;
};

// The adjacent-exchange precondition does not hold at the requested column.
struct MoveNotApplicable final : Error {
    using Error::Error;
};

// A density tensor would exceed the entry-count guard.
struct MemoryGuardExceeded final : Error {
    using Error::Error;
};

// A kernel expansion would exceed the term cap.
struct TermCapExceeded final : Error {
    using Error::Error;
};

// The bound scheduler found a function it has no rule for; indicates a
// malformed kernel and must never fire on kernels built by this library.
struct SchedulerStuck final : Error {
    using Error::Error;
};

// Factor bounds passed to combine_factors are mutually inconsistent.
struct InconsistentForest final : Error {
    using Error::Error;
};

// A dispersive/trilinear check would be contaminated by torus wraparound.
struct WraparoundRisk final : Error {
    using Error::Error;
};

}  // namespace gpbg
