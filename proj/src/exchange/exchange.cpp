#include "laissez/exchange.hpp"

#include "laissez/error.hpp"

#include <algorithm>

namespace laissez {

std::string_view to_string(PriceCause cause) {
    switch (cause) {
        case PriceCause::bid_posted: return "bid-posted";
        case PriceCause::bid_withdrawn: return "bid-withdrawn";
        case PriceCause::bid_expired: return "bid-expired";
        case PriceCause::periodic: return "periodic";
    }
    return "unknown";
}

std::optional<TenantId> PriceEvent::winner() const {
    if (new_entitled.empty()) return std::nullopt;
    return new_entitled.front();
}

ExchangeEntry::ExchangeEntry(TypeId type, Rate base_rate, int capacity)
    : type_(std::move(type)), base_rate_(base_rate), capacity_(capacity), clearing_(base_rate) {}

std::optional<TenantId> ExchangeEntry::winner() const {
    if (entitled_.empty()) return std::nullopt;
    return entitled_.front();
}

bool ExchangeEntry::is_entitled(const TenantId& tenant) const {
    return std::find(entitled_.begin(), entitled_.end(), tenant) != entitled_.end();
}

const Bid* ExchangeEntry::find_bid(const TenantId& tenant) const {
    auto it = std::find_if(bids_.begin(), bids_.end(), [&](const Bid& b) { return b.tenant == tenant; });
    return it == bids_.end() ? nullptr : &*it;
}

Bid* ExchangeEntry::find_mutable(const TenantId& tenant) {
    return const_cast<Bid*>(std::as_const(*this).find_bid(tenant));
}

namespace {

bool same_members(const std::vector<TenantId>& a, const std::vector<TenantId>& b) {
    return a.size() == b.size() && std::is_permutation(a.begin(), a.end(), b.begin());
}

}  // namespace

std::optional<PriceEvent> recompute_entitlement(ExchangeEntry& entry, SimTime now, PriceCause cause) {
    const auto& incumbents = entry.entitled_;
    auto is_incumbent = [&](const TenantId& t) {
        return std::find(incumbents.begin(), incumbents.end(), t) != incumbents.end();
    };
    // Tenant ids are unique per entry, so this is a strict total order.
    std::sort(entry.bids_.begin(), entry.bids_.end(), [&](const Bid& a, const Bid& b) {
        if (a.rate != b.rate) return a.rate > b.rate;
        const bool ia = is_incumbent(a.tenant);
        const bool ib = is_incumbent(b.tenant);
        if (ia != ib) return ia;
        if (a.submitted != b.submitted) return a.submitted < b.submitted;
        return a.tenant < b.tenant;
    });

    const auto k = static_cast<std::size_t>(entry.capacity_);
    std::vector<TenantId> entitled;
    entitled.reserve(std::min(k, entry.bids_.size()));
    for (std::size_t i = 0; i < entry.bids_.size(); ++i) {
        entry.bids_[i].status = i < k ? BidStatus::entitled : BidStatus::open;
        if (i < k) entitled.push_back(entry.bids_[i].tenant);
    }
    const Rate clearing = entry.bids_.size() > k ? std::max(entry.base_rate_, entry.bids_[k].rate)
                                                 : entry.base_rate_;

    std::optional<PriceEvent> event;
    if (clearing != entry.clearing_ || !same_members(entitled, entry.entitled_)) {
        event = PriceEvent{now, entry.type_, entry.clearing_, clearing, entry.entitled_, entitled, cause};
    }
    entry.entitled_ = std::move(entitled);
    entry.clearing_ = clearing;
    return event;
}

Rate price_quote(const ExchangeEntry& entry, Rate tick) { return price_quote(entry, TenantId{}, tick); }

Rate price_quote(const ExchangeEntry& entry, const TenantId& tenant, Rate tick) {
    // A newcomer must beat the k-th highest competing bid.
    const auto k = static_cast<std::size_t>(entry.capacity());
    std::vector<Rate> rates;
    for (const auto& bid : entry.bids()) {
        if (tenant.empty() || bid.tenant != tenant) rates.push_back(bid.rate);
    }
    if (rates.size() < k) return entry.base_rate();
    std::nth_element(rates.begin(), rates.begin() + static_cast<std::ptrdiff_t>(k - 1), rates.end(),
                     std::greater<>{});
    return std::max(entry.base_rate(), rates[k - 1] + tick);
}

ExchangeEntry make_entry_for_testing(TypeId type, Rate base, int capacity, std::vector<Bid> bids,
                                     std::vector<TenantId> entitled) {
    ExchangeEntry e(std::move(type), base, capacity);
    e.bids_ = std::move(bids);
    e.entitled_ = std::move(entitled);
    return e;
}

ExchangeTable::ExchangeTable(const FunctionalCluster& cluster, Rate tick) : tick_(tick) {
    if (tick <= Rate{}) throw Error(Errc::InvalidValue, "rate_tick", "must be positive");
    for (const auto& t : cluster.types()) {
        entries_.emplace(t.id, ExchangeEntry(t.id, t.base_rate, t.instance_count));
    }
}

const ExchangeEntry& ExchangeTable::entry(const TypeId& type) const {
    auto it = entries_.find(type);
    if (it == entries_.end()) throw Error(Errc::UnknownType, type);
    return it->second;
}

ExchangeEntry& ExchangeTable::entry_mut(const TypeId& type) {
    auto it = entries_.find(type);
    if (it == entries_.end()) throw Error(Errc::UnknownType, type);
    return it->second;
}

std::vector<PriceEvent> ExchangeTable::post_bid(Bid bid) {
    auto& e = entry_mut(bid.type);
    if (bid.rate < e.base_rate()) throw Error(Errc::BidBelowBase, bid.tenant + "@" + bid.type);
    if (e.find_bid(bid.tenant) != nullptr) throw Error(Errc::DuplicateBid, bid.tenant + "@" + bid.type);
    const auto now = bid.submitted;
    bid.status = BidStatus::open;
    e.bids_.push_back(std::move(bid));
    std::vector<PriceEvent> out;
    if (auto ev = recompute_entitlement(e, now, PriceCause::bid_posted)) out.push_back(std::move(*ev));
    return out;
}

std::vector<PriceEvent> ExchangeTable::update_bid(const TenantId& tenant, const TypeId& type, Rate rate,
                                                  SimTime now) {
    auto& e = entry_mut(type);
    Bid* bid = e.find_mutable(tenant);
    if (bid == nullptr) throw Error(Errc::NoSuchBid, tenant + "@" + type);
    if (rate < e.base_rate()) throw Error(Errc::BidBelowBase, tenant + "@" + type);
    if (bid->rate == rate) return {};
    bid->rate = rate;
    bid->submitted = now;
    std::vector<PriceEvent> out;
    if (auto ev = recompute_entitlement(e, now, PriceCause::bid_posted)) out.push_back(std::move(*ev));
    return out;
}

std::vector<PriceEvent> ExchangeTable::withdraw_bid(const TenantId& tenant, const TypeId& type, SimTime now) {
    auto& e = entry_mut(type);
    auto it = std::find_if(e.bids_.begin(), e.bids_.end(), [&](const Bid& b) { return b.tenant == tenant; });
    if (it == e.bids_.end()) throw Error(Errc::NoSuchBid, tenant + "@" + type);
    e.bids_.erase(it);
    std::vector<PriceEvent> out;
    if (auto ev = recompute_entitlement(e, now, PriceCause::bid_withdrawn)) out.push_back(std::move(*ev));
    return out;
}

std::vector<PriceEvent> ExchangeTable::expire_tenant_bids(const TenantId& tenant, SimTime now, PriceCause cause) {
    std::vector<PriceEvent> out;
    for (auto& [type, e] : entries_) {
        auto removed = std::erase_if(e.bids_, [&](const Bid& b) { return b.tenant == tenant; });
        if (removed == 0) continue;
        if (auto ev = recompute_entitlement(e, now, cause)) out.push_back(std::move(*ev));
    }
    return out;
}

std::vector<PriceEvent> ExchangeTable::sweep(SimTime now) {
    std::vector<PriceEvent> out;
    for (auto& [type, e] : entries_) {
        if (auto ev = recompute_entitlement(e, now, PriceCause::periodic)) out.push_back(std::move(*ev));
    }
    return out;
}

std::optional<Rate> ExchangeTable::standing_bid(const TenantId& tenant, const TypeId& type) const {
    auto it = entries_.find(type);
    if (it == entries_.end()) return std::nullopt;
    if (const auto* b = it->second.find_bid(tenant)) return b->rate;
    return std::nullopt;
}

bool ExchangeTable::is_entitled(const TenantId& tenant, const TypeId& type) const {
    auto it = entries_.find(type);
    return it != entries_.end() && it->second.is_entitled(tenant);
}

Rate ExchangeTable::effective_rate(const TenantId& tenant, const TypeId& type) const {
    const auto& e = entry(type);
    if (e.is_entitled(tenant)) return e.clearing_rate();
    return price_quote(e, tenant, tick_);
}

}  // namespace laissez
