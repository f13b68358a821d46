#pragma once

#include <stdexcept>
#include <string>

namespace landau {

enum class ErrorKind {
    InvalidGroup,
    InvalidElement,
    InvalidSpectrum,
    InvalidWindow,
    InvalidSet,
    Budget,
    Separation,
    ScheduleExhausted,
    NotSupported,
    Numerical,
    Schema,
};

const char* to_string(ErrorKind kind);

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what)
        : std::runtime_error(what), kind_(kind) {}
    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& what) {
    throw Error(kind, what);
}

}  // namespace landau
