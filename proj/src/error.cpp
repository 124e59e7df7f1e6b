#include "cmm/error.hpp"

namespace cmm {

const char* errc_name(Errc c) {
    switch (c) {
        case Errc::ZeroFirstMoment: return "ZeroFirstMoment";
        case Errc::AtomMissing: return "AtomMissing";
        case Errc::NegativeDegree: return "NegativeDegree";
        case Errc::SupportExceeded: return "SupportExceeded";
        case Errc::InvalidModel: return "InvalidModel";
        case Errc::NoPositiveMass: return "NoPositiveMass";
        case Errc::TailTooHeavy: return "TailTooHeavy";
        case Errc::EmptyChoiceSet: return "EmptyChoiceSet";
        case Errc::ZeroMass: return "ZeroMass";
        case Errc::UnsupportedKernel: return "UnsupportedKernel";
        case Errc::InvalidGraph: return "InvalidGraph";
        case Errc::TooLarge: return "TooLarge";
        case Errc::OddSum: return "OddSum";
        case Errc::MeshInvalid: return "MeshInvalid";
        case Errc::InvalidArgument: return "InvalidArgument";
        case Errc::Io: return "Io";
    }
    return "Unknown";
}

}  // namespace cmm
