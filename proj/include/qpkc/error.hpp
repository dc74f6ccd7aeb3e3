#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace qpkc {

// An internal consistency check failed. Callers must abort the run; the CLI
// maps this to exit status 2.
class InvariantError : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

// Malformed key, ciphertext, share or message document.
class ParseError : public std::runtime_error {
public:
    ParseError(const std::string& what, std::string position)
        : std::runtime_error(what + " (at " + position + ")"), position_(std::move(position)) {}

    const std::string& position() const { return position_; }

private:
    std::string position_;
};

}  // namespace qpkc
