#pragma once

#include <stdexcept>
#include <string>

namespace nfat {

// Domain error codes. The CLI maps any of these to exit status 1; usage
// problems never reach this layer.
enum class Errc {
    MalformedLine,
    FieldOutOfRange,
    UnknownProtocol,
    BadTimestamp,
    DuplicateEventId,
    FileNotFound,
    CaseNotFound,
    DimensionMismatch,
    TooFewPoints,
    InvalidConfig,
    WrongClusterCount,
    LengthMismatch,
    BadRuleFile,
    DuplicateCase,
    InvalidIdentifier,
    InvalidRange,
    DuplicateAnalysis,
    AnalysisNotFound,
    StoreLocked,
    StoreCorrupt,
    IoError,
};

const char* errc_name(Errc code);

class Error : public std::runtime_error {
public:
    Error(Errc code, const std::string& message)
        : std::runtime_error(message), code_(code) {}

    Errc code() const noexcept { return code_; }

private:
    Errc code_;
};

[[noreturn]] inline void raise(Errc code, const std::string& message) {
    throw Error(code, message);
}

} // namespace nfat
