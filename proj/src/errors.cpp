#include "nfat/errors.hpp"

namespace nfat {

const char* errc_name(Errc code) {
    switch (code) {
    case Errc::MalformedLine: return "MalformedLine";
    case Errc::FieldOutOfRange: return "FieldOutOfRange";
    case Errc::UnknownProtocol: return "UnknownProtocol";
    case Errc::BadTimestamp: return "BadTimestamp";
    case Errc::DuplicateEventId: return "DuplicateEventId";
    case Errc::FileNotFound: return "FileNotFound";
    case Errc::CaseNotFound: return "CaseNotFound";
    case Errc::DimensionMismatch: return "DimensionMismatch";
    case Errc::TooFewPoints: return "TooFewPoints";
    case Errc::InvalidConfig: return "InvalidConfig";
    case Errc::WrongClusterCount: return "WrongClusterCount";
    case Errc::LengthMismatch: return "LengthMismatch";
    case Errc::BadRuleFile: return "BadRuleFile";
    case Errc::DuplicateCase: return "DuplicateCase";
    case Errc::InvalidIdentifier: return "InvalidIdentifier";
    case Errc::InvalidRange: return "InvalidRange";
    case Errc::DuplicateAnalysis: return "DuplicateAnalysis";
    case Errc::AnalysisNotFound: return "AnalysisNotFound";
    case Errc::StoreLocked: return "StoreLocked";
    case Errc::StoreCorrupt: return "StoreCorrupt";
    case Errc::IoError: return "IoError";
    }
    return "UnknownError";
}

} // namespace nfat
