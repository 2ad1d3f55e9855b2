#pragma once

#include <stdexcept>
#include <string>

namespace chartlint {

// Document parsing
struct MalformedDocument : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct UnsupportedFeature : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct SchemaViolation : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Tabular data
struct RaggedRows : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct DuplicateColumn : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct EmptyTable : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct UnknownColumn : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct NotContinuousByDiscrete : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Rules
struct UnknownRule : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Dataset generation
struct EmptyHistogram : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct BudgetExhausted : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Evaluation
struct MissingPlaceholder : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct MissingGroundTruth : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace chartlint
