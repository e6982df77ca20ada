#include "laissez/error.hpp"

namespace laissez {

std::string_view to_string(Errc code) {
    switch (code) {
        case Errc::EmptyLaunchTable: return "EmptyLaunchTable";
        case Errc::UnknownHardware: return "UnknownHardware";
        case Errc::IncompatibleHardware: return "IncompatibleHardware";
        case Errc::DuplicateEntry: return "DuplicateEntry";
        case Errc::CompletedWorkload: return "CompletedWorkload";
        case Errc::BidBelowBase: return "BidBelowBase";
        case Errc::DuplicateBid: return "DuplicateBid";
        case Errc::UnknownType: return "UnknownType";
        case Errc::NoSuchBid: return "NoSuchBid";
        case Errc::DuplicateRequestId: return "DuplicateRequestId";
        case Errc::InstanceNotFree: return "InstanceNotFree";
        case Errc::IncompatibleDestination: return "IncompatibleDestination";
        case Errc::TimeTravel: return "TimeTravel";
        case Errc::OverlapViolation: return "OverlapViolation";
        case Errc::NegativeInterval: return "NegativeInterval";
        case Errc::InvalidValue: return "InvalidValue";
    }
    return "Unknown";
}

namespace {
std::string compose(Errc code, const std::string& subject, const std::string& detail) {
    std::string msg{to_string(code)};
    if (!subject.empty()) msg += "(" + subject + ")";
    if (!detail.empty()) msg += ": " + detail;
    return msg;
}
}  // namespace

Error::Error(Errc code, std::string subject, const std::string& detail)
    : std::runtime_error(compose(code, subject, detail)), code_(code), subject_(std::move(subject)) {}

}  // namespace laissez
