#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace dacq {

struct Error : std::runtime_error {
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// Bad call-site input: unknown attribute, invalid fraction, empty set, ...
struct ArgumentError : Error {
    using Error::Error;
};

// CSV content that cannot be ingested (mixed arity, unreadable file).
struct IngestionError : Error {
    using Error::Error;
};

// Header-level problems: duplicate attribute names and the like.
struct SchemaError : Error {
    using Error::Error;
};

// Quality is undefined on an empty relation or an empty join.
struct UndefinedQualityError : Error {
    using Error::Error;
};

// A joint distribution with zero entropy; the JI ratio has no value.
struct DegenerateDistributionError : Error {
    using Error::Error;
};

// A sampling-based estimate could not be produced. Carries the seed so the
// caller can retry with a fresh one instead of silently reporting zero.
struct EstimationError : Error {
    EstimationError(const std::string& what, std::uint64_t seed)
        : Error(what), seed(seed) {}
    std::uint64_t seed;
};

// A requested attribute is not present anywhere in the catalog.
struct CoverageError : Error {
    CoverageError(const std::string& what, std::string attribute)
        : Error(what), attribute(std::move(attribute)) {}
    std::string attribute;
};

// An exhaustive oracle or lattice materialization was asked to exceed its
// size guard.
struct CapacityError : Error {
    using Error::Error;
};

// No affordable / constraint-satisfying solution exists.
struct InfeasibleError : Error {
    using Error::Error;
};

}  // namespace dacq
