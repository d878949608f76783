#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace kge {

using EntityId = std::uint32_t;
using RelationId = std::uint32_t;

struct Triple {
    EntityId s;
    RelationId p;
    EntityId o;

    bool operator==(const Triple&) const = default;
};

struct TripleHash {
    std::size_t operator()(const Triple& t) const {
        std::uint64_t h = 1469598103934665603ull;
        for (std::uint64_t v : {std::uint64_t(t.s), std::uint64_t(t.p), std::uint64_t(t.o)}) {
            h ^= v;
            h *= 1099511628211ull;
        }
        return static_cast<std::size_t>(h);
    }
};

// Base for all engine failures.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// Malformed input data (bad triple line, bad rules file, ...).
class ParseError : public Error {
public:
    using Error::Error;
};

// Invalid configuration value or combination.
class ConfigError : public Error {
public:
    using Error::Error;
};

// Corrupt or incompatible binary artifact (checkpoint, manifest).
class FormatError : public Error {
public:
    using Error::Error;
};

// Non-finite values where finite ones are required (divergence, bad scores).
class NumericError : public Error {
public:
    using Error::Error;
};

// Requested metric is undefined for the given data (e.g. single-class labels).
class MetricError : public Error {
public:
    using Error::Error;
};

}  // namespace kge
