#pragma once

#include <stdexcept>
#include <string>

namespace hermconv {

/// Input data violates a precondition (non-finite sample, negative dilation, ...).
class invalid_input : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// A numerical configuration cannot produce a trustworthy result
/// (undersized quadrature, half-line tail without transform, bad config file).
class config_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

namespace detail {

inline void require(bool ok, const std::string& what) {
    if (!ok) throw invalid_input(what);
}

inline void require_config(bool ok, const std::string& what) {
    if (!ok) throw config_error(what);
}

} // namespace detail
} // namespace hermconv
