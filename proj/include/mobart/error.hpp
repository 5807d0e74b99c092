#ifndef MOBART_ERROR_HPP
#define MOBART_ERROR_HPP

#include <stdexcept>
#include <string>

namespace mobart {

// Raised when a training column cannot be rescaled (constant or non-finite).
class DegenerateDataError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Raised when a cross-reference (cell index, draw index) does not resolve.
class IntegrityError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

namespace detail {
    inline void require(bool condition, const std::string& message)
    {
        if (!condition) {
            throw std::invalid_argument(message);
        }
    }
} // namespace detail

} // namespace mobart

#endif
