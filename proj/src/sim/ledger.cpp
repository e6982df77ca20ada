#include "laissez/ledger.hpp"

#include "laissez/error.hpp"

namespace laissez {

const LedgerEntry& BillingLedger::accrue(const TenantId& tenant, const InstanceRef& instance, Rate rate,
                                         SimTime start, SimTime end, BillKind kind) {
    if (end < start) throw Error(Errc::NegativeInterval, tenant + "@" + to_string(instance));
    auto& indices = by_instance_[instance];
    for (auto i : indices) {
        const auto& other = entries_[i];
        if (other.tenant != tenant && start < other.end && other.start < end) {
            throw Error(Errc::OverlapViolation, to_string(instance), tenant + " vs " + other.tenant);
        }
    }
    indices.push_back(entries_.size());
    entries_.push_back(LedgerEntry{tenant, instance, rate, start, end, kind, rate * (end - start)});
    totals_[tenant] += entries_.back().cost;
    return entries_.back();
}

Money BillingLedger::total(const TenantId& tenant) const {
    auto it = totals_.find(tenant);
    return it == totals_.end() ? Money{} : it->second;
}

Money BillingLedger::revenue() const {
    Money sum;
    for (const auto& [tenant, m] : totals_) sum += m;
    return sum;
}

}  // namespace laissez
