#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace sbrp {

// Library failures carry a stable machine-readable code next to the human
// message; the CLI forwards the code in its JSON diagnostics.
class Error : public std::runtime_error {
public:
    Error(std::string code, const std::string& what)
        : std::runtime_error(what), code_(std::move(code)) {}

    const std::string& code() const noexcept { return code_; }

private:
    std::string code_;
};

[[noreturn]] inline void fail(const std::string& code, const std::string& msg) {
    throw Error(code, msg);
}

}  // namespace sbrp
