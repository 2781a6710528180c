#pragma once

#include <stdexcept>
#include <string>

namespace subsumm {

// All module errors carry a stable machine-parsable code plus a human detail
// string; the CLI prints "error: <code>: <detail>" and exits nonzero.
class Error : public std::runtime_error {
public:
    Error(std::string code, const std::string& detail)
        : std::runtime_error(code + ": " + detail), code_(std::move(code)) {}

    const std::string& code() const { return code_; }

private:
    std::string code_;
};

}  // namespace subsumm
