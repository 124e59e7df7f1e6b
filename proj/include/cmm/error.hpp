#pragma once

#include <stdexcept>
#include <string>

namespace cmm {

enum class Errc {
    ZeroFirstMoment,
    AtomMissing,
    NegativeDegree,
    SupportExceeded,
    InvalidModel,
    NoPositiveMass,
    TailTooHeavy,
    EmptyChoiceSet,
    ZeroMass,
    UnsupportedKernel,
    InvalidGraph,
    TooLarge,
    OddSum,
    MeshInvalid,
    InvalidArgument,
    Io,
};

const char* errc_name(Errc c);

class Error : public std::runtime_error {
public:
    Error(Errc code, const std::string& what)
        : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code) {}

    Errc code() const noexcept { return code_; }

private:
    Errc code_;
};

}  // namespace cmm
