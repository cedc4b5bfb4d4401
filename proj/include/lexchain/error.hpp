#ifndef LEXCHAIN_ERROR_HPP
#define LEXCHAIN_ERROR_HPP

#include <stdexcept>
#include <string>

namespace lexchain {

// Every recoverable failure in the library surfaces as this exception,
// carrying a message that names the offending file, line, or id.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& message) : std::runtime_error(message) {}
};

}  // namespace lexchain

#endif
