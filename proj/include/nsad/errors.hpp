#pragma once

#include <stdexcept>
#include <string>

namespace nsad {

// Validation failures while building a program.
struct CycleError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct ArityError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct EmptyPredecessorError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Numerical domain violation during evaluation; carries the 1-based node index.
struct DomainError : std::runtime_error {
    int node;
    DomainError(int node_, const std::string& what_)
        : std::runtime_error(what_), node(node_) {}
};

// Op has no selection derivative registered.
struct NoSelectionError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Differentiation entry points require a single output.
struct MultiOutputError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Op missing from the active cost scheme.
struct UnpricedOpError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Exact-rational evaluation hit an op with no exact closed form (exp, log, elu).
struct ExactModeError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Network shape violations.
struct DimensionError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct ChoiceOutOfRange : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct IndexMismatch : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct UnsupportedOpError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct NonTernaryWeightError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Brute-force enumeration over 2^n exceeds the configured budget.
struct BudgetExceeded : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// CNF clause is not width 3.
struct WidthError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct SingularityError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct ConstraintViolated : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// File / wire format problems.
struct ParseError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

} // namespace nsad
