// error.cpp
//
// Licensed under the Apache License, Version 2.0 (see LICENSE file)

#include <wft/error.hpp>

namespace wft {

std::string_view error_name(ErrorKind kind)
{
    switch (kind) {
        case ErrorKind::NonIntegrableDifference: return "NonIntegrableDifference";
        case ErrorKind::DimensionMismatch: return "DimensionMismatch";
        case ErrorKind::InvalidFunction: return "InvalidFunction";
        case ErrorKind::RangeNotOnGrid: return "RangeNotOnGrid";
        case ErrorKind::ValueOffGrid: return "ValueOffGrid";
        case ErrorKind::FrontCountExplosion: return "FrontCountExplosion";
        case ErrorKind::OutOfSpan: return "OutOfSpan";
        case ErrorKind::NoAdmissibleSamples: return "NoAdmissibleSamples";
        case ErrorKind::InadmissibleState: return "InadmissibleState";
        case ErrorKind::CurveRadiusExceeded: return "CurveRadiusExceeded";
        case ErrorKind::NewtonDivergence: return "NewtonDivergence";
        case ErrorKind::OutsideSmallAmplitude: return "OutsideSmallAmplitude";
        case ErrorKind::XiOutsideFan: return "XiOutsideFan";
        case ErrorKind::TVBlowup: return "TVBlowup";
        case ErrorKind::InitialTVTooLarge: return "InitialTVTooLarge";
        case ErrorKind::InteractionWithinH: return "InteractionWithinH";
        case ErrorKind::SupportsNotSeparated: return "SupportsNotSeparated";
        case ErrorKind::KindMismatch: return "KindMismatch";
        case ErrorKind::SpanExceeded: return "SpanExceeded";
        case ErrorKind::NoSeparation: return "NoSeparation";
        case ErrorKind::NotCompactSupport: return "NotCompactSupport";
        case ErrorKind::MultipleJumpsInWindow: return "MultipleJumpsInWindow";
        case ErrorKind::NonPositiveValue: return "NonPositiveValue";
        case ErrorKind::SweepBudgetExceeded: return "SweepBudgetExceeded";
        case ErrorKind::UnknownSubcommand: return "UnknownSubcommand";
        case ErrorKind::ConfigValidation: return "ConfigValidation";
    }
    return "Error";
}

}  // namespace wft
