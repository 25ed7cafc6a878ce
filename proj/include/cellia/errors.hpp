#pragma once

#include <stdexcept>
#include <string>

namespace cellia {

/// Base class for all library errors.
struct Error : std::runtime_error {
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

struct NullspaceEmpty : Error {
    explicit NullspaceEmpty(const std::string& what) : Error(what) {}
};

struct RankDeficientInput : Error {
    explicit RankDeficientInput(const std::string& what) : Error(what) {}
};

struct InsufficientOverlap : Error {
    explicit InsufficientOverlap(const std::string& what) : Error(what) {}
};

struct InsufficientNullspace : Error {
    explicit InsufficientNullspace(const std::string& what) : Error(what) {}
};

struct AlignmentViolated : Error {
    explicit AlignmentViolated(const std::string& what) : Error(what) {}
};

struct SignalCollapse : Error {
    explicit SignalCollapse(const std::string& what) : Error(what) {}
};

struct UnsupportedConfig : Error {
    explicit UnsupportedConfig(const std::string& what) : Error(what) {}
};

struct UnsupportedK : Error {
    explicit UnsupportedK(const std::string& what) : Error(what) {}
};

struct NotSingleAntenna : Error {
    explicit NotSingleAntenna(const std::string& what) : Error(what) {}
};

struct GMustExceedOne : Error {
    explicit GMustExceedOne(const std::string& what) : Error(what) {}
};

struct NoRealRoots : Error {
    explicit NoRealRoots(const std::string& what) : Error(what) {}
};

}  // namespace cellia
