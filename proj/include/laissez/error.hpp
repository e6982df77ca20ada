#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace laissez {

enum class Errc {
    EmptyLaunchTable,
    UnknownHardware,
    IncompatibleHardware,
    DuplicateEntry,
    CompletedWorkload,
    BidBelowBase,
    DuplicateBid,
    UnknownType,
    NoSuchBid,
    DuplicateRequestId,
    InstanceNotFree,
    IncompatibleDestination,
    TimeTravel,
    OverlapViolation,
    NegativeInterval,
    InvalidValue,
};

std::string_view to_string(Errc code);

/// Domain error carrying a machine-checkable code and the offending id.
class Error : public std::runtime_error {
public:
    Error(Errc code, std::string subject, const std::string& detail = {});

    [[nodiscard]] Errc code() const noexcept { return code_; }
    [[nodiscard]] const std::string& subject() const noexcept { return subject_; }

private:
    Errc code_;
    std::string subject_;
};

}  // namespace laissez
