#pragma once

#include <stdexcept>
#include <string>

namespace hrgraph {

/// Base of every error thrown by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A precondition on the input was violated (malformed file, invalid graph, ...).
class InputError : public Error {
public:
    using Error::Error;
};

/// A configured size or enumeration bound was exceeded.
class ResourceError : public Error {
public:
    using Error::Error;
};

/// Tunable bounds. Defaults follow the documented limits of each operation.
struct Limits {
    int max_iso_vertices = 64;
    int max_exact_vertices = 10;
    int max_so_domain = 16;
    int max_param_universe = 12;
    int max_param_bits = 24;
    int stage_cap = 10000;
};

}  // namespace hrgraph
