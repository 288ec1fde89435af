// error.hpp
//
// Licensed under the Apache License, Version 2.0 (see LICENSE file)

#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace wft {

enum class ErrorKind {
    NonIntegrableDifference,
    DimensionMismatch,
    InvalidFunction,
    RangeNotOnGrid,
    ValueOffGrid,
    FrontCountExplosion,
    OutOfSpan,
    NoAdmissibleSamples,
    InadmissibleState,
    CurveRadiusExceeded,
    NewtonDivergence,
    OutsideSmallAmplitude,
    XiOutsideFan,
    TVBlowup,
    InitialTVTooLarge,
    InteractionWithinH,
    SupportsNotSeparated,
    KindMismatch,
    SpanExceeded,
    NoSeparation,
    NotCompactSupport,
    MultipleJumpsInWindow,
    NonPositiveValue,
    SweepBudgetExceeded,
    UnknownSubcommand,
    ConfigValidation,
};

std::string_view error_name(ErrorKind kind);

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what)
        : std::runtime_error(std::string(error_name(kind)) + ": " + what), m_kind(kind) {}

    ErrorKind kind() const noexcept { return m_kind; }

    // validation errors map to CLI exit code 1, everything else to 2
    bool is_validation() const noexcept
    {
        return m_kind == ErrorKind::ConfigValidation || m_kind == ErrorKind::UnknownSubcommand;
    }

private:
    ErrorKind m_kind;
};

}  // namespace wft
