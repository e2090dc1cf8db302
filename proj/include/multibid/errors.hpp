#pragma once

#include <stdexcept>
#include <string>

namespace multibid {

/// Mismatched dimensions or broken data invariants in caller-supplied inputs.
struct ContractViolation : std::invalid_argument {
    explicit ContractViolation(const std::string &what) : std::invalid_argument(what) {}
};

struct NotAStaircase : std::runtime_error {
    explicit NotAStaircase(const std::string &what) : std::runtime_error(what) {}
};

struct SynthesisFailed : std::runtime_error {
    explicit SynthesisFailed(const std::string &what) : std::runtime_error(what) {}
};

struct MissingFactorization : std::runtime_error {
    explicit MissingFactorization(const std::string &what) : std::runtime_error(what) {}
};

struct InstanceTooLarge : std::runtime_error {
    explicit InstanceTooLarge(const std::string &what) : std::runtime_error(what) {}
};

struct EmptyProfile : std::runtime_error {
    explicit EmptyProfile(const std::string &what) : std::runtime_error(what) {}
};

struct DegenerateFit : std::runtime_error {
    explicit DegenerateFit(const std::string &what) : std::runtime_error(what) {}
};

} // namespace multibid
