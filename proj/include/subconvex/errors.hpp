#pragma once

#include <stdexcept>
#include <string>

namespace subconvex {

// Base for all computation errors. `name()` is the stable identifier printed
// by the CLI (exit code 1); `what()` carries free-form detail.
class Error : public std::runtime_error {
public:
    Error(std::string name, const std::string& msg)
        : std::runtime_error(msg), name_(std::move(name)) {}
    const std::string& name() const noexcept { return name_; }

private:
    std::string name_;
};

#define SUBCONVEX_DEFINE_ERROR(Name)                                       \
    class Name : public Error {                                            \
    public:                                                                \
        explicit Name(const std::string& msg) : Error(#Name, msg) {}       \
    }

SUBCONVEX_DEFINE_ERROR(InvalidParam);
SUBCONVEX_DEFINE_ERROR(DomainError);
SUBCONVEX_DEFINE_ERROR(UncertifiableReal);
SUBCONVEX_DEFINE_ERROR(GridTooCoarse);
SUBCONVEX_DEFINE_ERROR(ScaleTooLarge);
SUBCONVEX_DEFINE_ERROR(PrecisionLoss);
SUBCONVEX_DEFINE_ERROR(SetTooSparse);
SUBCONVEX_DEFINE_ERROR(NotPrime);
SUBCONVEX_DEFINE_ERROR(PrincipalChar);
SUBCONVEX_DEFINE_ERROR(LengthMismatch);
SUBCONVEX_DEFINE_ERROR(ResourceLimit);

#undef SUBCONVEX_DEFINE_ERROR

} // namespace subconvex
