#pragma once

#include <stdexcept>
#include <string>

namespace dioph {

// Error taxonomy shared by the library and the CLI. Exit codes used by the
// command line tool are attached here so they stay in one place.
struct error : std::runtime_error {
    explicit error(const std::string& msg) : std::runtime_error(msg) {}
    virtual int exit_code() const { return 1; }
};

// Bad user input: parse failures, dimension mismatches, invalid ranges.
struct input_error : error {
    explicit input_error(const std::string& msg) : error(msg) {}
    int exit_code() const override { return 2; }
};

// A mathematical precondition does not hold (hypothesis of a lemma fails,
// sequence trivially singular where a live one is required, ...).
struct precondition_error : error {
    explicit precondition_error(const std::string& msg) : error(msg) {}
    int exit_code() const override { return 3; }
};

// Enumeration would exceed the configured point budget.
struct budget_error : error {
    explicit budget_error(const std::string& msg) : error(msg) {}
    int exit_code() const override { return 4; }
};

// A guarded comparison could not be certified at the working precision.
// Raising the precision is the only sound fix; we never guess a branch.
struct precision_error : error {
    explicit precision_error(const std::string& msg)
        : error(msg + " (raise the working precision and retry)") {}
    int exit_code() const override { return 5; }
};

// A guaranteed statement failed to verify. Always a bug, never a math outcome.
struct internal_contradiction : error {
    explicit internal_contradiction(const std::string& msg) : error(msg) {}
    int exit_code() const override { return 6; }
};

} // namespace dioph
