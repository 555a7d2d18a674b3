#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace loci {

/// A simulated or observed sample. All built-in models encode their data as a
/// flat vector of reals (counts are stored as exact small integers in double).
using Dataset = std::vector<double>;

/// Thrown when inputs fail validation (bad sizes, out-of-range arguments,
/// unparsable files). Maps to CLI exit code 2.
class InputError : public std::runtime_error {
public:
    explicit InputError(const std::string& msg) : std::runtime_error(msg) {}
};

/// Thrown when a requested construction has no feasible point (e.g. a try
/// design over an empty intersection). Maps to CLI exit code 3.
class InfeasibleError : public std::runtime_error {
public:
    explicit InfeasibleError(const std::string& msg) : std::runtime_error(msg) {}
};

/// Thrown on numeric failure (non-finite objective at a required point,
/// degenerate weights, ...). Maps to CLI exit code 4.
class NumericError : public std::runtime_error {
public:
    explicit NumericError(const std::string& msg) : std::runtime_error(msg) {}
};

/// Thrown when a design request exceeds the configured size cap.
class SizeLimitError : public InputError {
public:
    explicit SizeLimitError(const std::string& msg) : InputError(msg) {}
};

/// Lightweight diagnostic sink threaded through estimators and inference
/// operations so simulation reports can account for optimizer flags and
/// weight degeneracy without global state.
struct Diag {
    int optimizer_nonconverged = 0;
    int ess_warnings = 0;
    int fallbacks = 0;
    std::vector<std::string> notes;

    void note(const std::string& msg) { notes.push_back(msg); }
    void merge(const Diag& other) {
        optimizer_nonconverged += other.optimizer_nonconverged;
        ess_warnings += other.ess_warnings;
        fallbacks += other.fallbacks;
        notes.insert(notes.end(), other.notes.begin(), other.notes.end());
    }
    bool empty() const {
        return optimizer_nonconverged == 0 && ess_warnings == 0 && fallbacks == 0 &&
               notes.empty();
    }
};

}  // namespace loci
