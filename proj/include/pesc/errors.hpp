#pragma once

#include <stdexcept>
#include <string>

namespace pesc {

/// Invalid argument or violated type invariant (bad shape, even kernel size, ...).
class ArgumentError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Pixel or tap index outside its grid.
class IndexError : public std::out_of_range {
public:
    using std::out_of_range::out_of_range;
};

/// Missing or inconsistent configuration (e.g. slab projection without a slab width).
class ConfigError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Input for which the requested quantity is undefined (constant image for BSNR calibration).
class DegenerateInputError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// NaN/Inf produced during iteration.
class NumericError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed file contents.
class FormatError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace pesc
