#pragma once

#include "laissez/model.hpp"
#include "laissez/tenant.hpp"

#include <map>
#include <vector>

namespace laissez {

struct LedgerEntry {
    TenantId tenant;
    InstanceRef instance;
    Rate rate;
    SimTime start;
    SimTime end;
    BillKind kind = BillKind::compute;
    Money cost;

    bool operator==(const LedgerEntry&) const = default;
};

/// Append-only record of rated holding intervals.
class BillingLedger {
public:
    /// Throws NegativeInterval, or OverlapViolation when another tenant holds
    /// an intersecting interval on the same instance.
    const LedgerEntry& accrue(const TenantId& tenant, const InstanceRef& instance, Rate rate, SimTime start,
                              SimTime end, BillKind kind);

    [[nodiscard]] const std::vector<LedgerEntry>& entries() const { return entries_; }
    [[nodiscard]] Money total(const TenantId& tenant) const;
    [[nodiscard]] const std::map<TenantId, Money>& totals() const { return totals_; }
    [[nodiscard]] Money revenue() const;

private:
    std::vector<LedgerEntry> entries_;
    std::map<InstanceRef, std::vector<std::size_t>> by_instance_;
    std::map<TenantId, Money> totals_;
};

}  // namespace laissez
