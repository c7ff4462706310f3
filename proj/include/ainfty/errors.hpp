#pragma once

#include <stdexcept>
#include <string>

namespace ainfty {

/// Base class for all library errors.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// A set refers to an atom id that does not exist in the instance.
struct InvalidSet : Error {
    using Error::Error;
};

/// An atom belongs to no basis element.
struct UncoveredAtom : Error {
    using Error::Error;
};

/// A basis element has w(B) = 0 but the requested condition divides by w(B).
struct ZeroWeightBase : Error {
    ZeroWeightBase(const std::string& base_name, std::size_t base_index)
        : Error("basis element '" + base_name + "' (index " + std::to_string(base_index) +
                ") has zero weight"),
          base(base_index) {}
    std::size_t base;
};

/// The requested subset-search strategy exceeds its configured bound.
struct StrategyInfeasible : Error {
    using Error::Error;
};

/// Instance data violates a structural invariant.
struct ValidationError : Error {
    using Error::Error;
};

/// A document could not be parsed; `position` is a byte offset when known.
struct ParseError : Error {
    explicit ParseError(const std::string& what, std::size_t position = 0)
        : Error(what), position(position) {}
    std::size_t position;
};

} // namespace ainfty
