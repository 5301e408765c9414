#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace latreg {

// Analysis failure with a stable machine-readable code. The CLI forwards the
// code verbatim in its error JSON, so codes are part of the public surface:
//   SingularGenerator, BallTooLarge, AliasingRisk, IndexOutOfRange, EmptyTail,
//   BadExponents, HypothesisFails, UnsupportedFamily, BandExceeded,
//   NoDecaySignal, RankDeficientFit, SymbolUndefined, NoClosedForm,
//   InvalidArgument, ParseError
class Error : public std::runtime_error {
public:
    Error(std::string code, const std::string& message)
        : std::runtime_error(message), code_(std::move(code)) {}

    const std::string& code() const noexcept { return code_; }

private:
    std::string code_;
};

[[noreturn]] inline void fail(const std::string& code, const std::string& message) {
    throw Error(code, message);
}

inline void require(bool ok, const std::string& code, const std::string& message) {
    if (!ok) fail(code, message);
}

} // namespace latreg
