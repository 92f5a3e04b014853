#pragma once

#include <stdexcept>
#include <string>

namespace robopinion {

// Error categories map 1:1 onto CLI exit codes.
enum class ErrorKind : int {
    validation = 1,
    runtime = 2,
    io = 3,
};

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& message)
        : std::runtime_error(message), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }
    int exit_code() const noexcept { return static_cast<int>(kind_); }

private:
    ErrorKind kind_;
};

[[noreturn]] inline void fail_validation(const std::string& message) {
    throw Error(ErrorKind::validation, message);
}

[[noreturn]] inline void fail_runtime(const std::string& message) {
    throw Error(ErrorKind::runtime, message);
}

[[noreturn]] inline void fail_io(const std::string& message) {
    throw Error(ErrorKind::io, message);
}

}  // namespace robopinion
