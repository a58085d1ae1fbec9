#pragma once

#include <stdexcept>
#include <string>

namespace latcount {

/// Broad failure classes. The CLI maps these to exit codes.
enum class ErrorKind {
    input,         // malformed text, dimension mismatch, bad arguments
    unbounded,     // polytope has no finite bounding box
    infeasible,    // no real (or no lattice) point
    degenerate,    // body has empty interior
    resource_cap,  // an iteration / attempt / round cap was exceeded
    numerical,     // solver lost precision
};

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what)
        : std::runtime_error(what), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

const char* to_string(ErrorKind kind) noexcept;

}  // namespace latcount
