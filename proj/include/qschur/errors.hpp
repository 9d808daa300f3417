#pragma once

#include <stdexcept>
#include <string>

namespace qschur {

enum class Errc {
    DivisionByZero,
    Singular,
    NotHermitian,
    OddComplexRank,
    NonUnit,
    SpectrumHit,
    DivergenceRegion,
    ShapeMismatch,
    NonInvertibleD,
    RankDeficientData,
    NotOuterConnected,
    ShiftWithoutZero,
    PointOutsideBall,
    UnimodularStop,
    NotInBall,
    NotCoisometric,
    SpherePole,
    DegreeExhausted,
    ParseError,
};

inline const char* errc_name(Errc c) {
    switch (c) {
        case Errc::DivisionByZero:    return "DivisionByZero";
        case Errc::Singular:          return "Singular";
        case Errc::NotHermitian:      return "NotHermitian";
        case Errc::OddComplexRank:    return "OddComplexRank";
        case Errc::NonUnit:           return "NonUnit";
        case Errc::SpectrumHit:       return "SpectrumHit";
        case Errc::DivergenceRegion:  return "DivergenceRegion";
        case Errc::ShapeMismatch:     return "ShapeMismatch";
        case Errc::NonInvertibleD:    return "NonInvertibleD";
        case Errc::RankDeficientData: return "RankDeficientData";
        case Errc::NotOuterConnected: return "NotOuterConnected";
        case Errc::ShiftWithoutZero:  return "ShiftWithoutZero";
        case Errc::PointOutsideBall:  return "PointOutsideBall";
        case Errc::UnimodularStop:    return "UnimodularStop";
        case Errc::NotInBall:         return "NotInBall";
        case Errc::NotCoisometric:    return "NotCoisometric";
        case Errc::SpherePole:        return "SpherePole";
        case Errc::DegreeExhausted:   return "DegreeExhausted";
        case Errc::ParseError:        return "ParseError";
    }
    return "Unknown";
}

/// Library error carrying a machine-checkable code alongside the message.
class Error : public std::runtime_error {
public:
    Error(Errc code, const std::string& what)
        : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code) {}

    Errc code() const noexcept { return code_; }

private:
    Errc code_;
};

[[noreturn]] inline void raise(Errc code, const std::string& what) {
    throw Error(code, what);
}

} // namespace qschur
