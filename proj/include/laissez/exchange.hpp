#pragma once

#include "laissez/cost_model.hpp"
#include "laissez/model.hpp"

#include <map>
#include <optional>
#include <string_view>
#include <vector>

namespace laissez {

enum class BidStatus { open, entitled, withdrawn, expired };

struct Bid {
    TenantId tenant;
    TypeId type;
    Rate rate;
    SimTime submitted;
    BidStatus status = BidStatus::open;

    bool operator==(const Bid&) const = default;
};

enum class PriceCause { bid_posted, bid_withdrawn, bid_expired, periodic };

std::string_view to_string(PriceCause cause);

/// Emitted whenever an entry's clearing rate or entitled set changes.
struct PriceEvent {
    SimTime time;
    TypeId type;
    Rate old_rate;
    Rate new_rate;
    std::vector<TenantId> old_entitled;
    std::vector<TenantId> new_entitled;
    PriceCause cause = PriceCause::bid_posted;

    [[nodiscard]] std::optional<TenantId> winner() const;
};

/// Market state for one accelerator type.
///
/// With capacity k (the type's instance count) the k highest bids are
/// entitled and all pay max(base, (k+1)-th highest bid). For k = 1 this is
/// the plain second-price rule. Ranking: rate desc, then incumbents, then
/// earlier submission, then tenant id.
class ExchangeEntry {
public:
    ExchangeEntry(TypeId type, Rate base_rate, int capacity = 1);

    [[nodiscard]] const TypeId& type() const { return type_; }
    [[nodiscard]] Rate base_rate() const { return base_rate_; }
    [[nodiscard]] int capacity() const { return capacity_; }
    [[nodiscard]] Rate clearing_rate() const { return clearing_; }

    /// Open bids in rank order as of the last recompute.
    [[nodiscard]] const std::vector<Bid>& bids() const { return bids_; }
    [[nodiscard]] const std::vector<TenantId>& entitled() const { return entitled_; }
    [[nodiscard]] std::optional<TenantId> winner() const;
    [[nodiscard]] bool is_entitled(const TenantId& tenant) const;
    [[nodiscard]] const Bid* find_bid(const TenantId& tenant) const;

private:
    friend class ExchangeTable;
    friend std::optional<PriceEvent> recompute_entitlement(ExchangeEntry&, SimTime, PriceCause);
    friend ExchangeEntry make_entry_for_testing(TypeId, Rate, int, std::vector<Bid>, std::vector<TenantId>);

    Bid* find_mutable(const TenantId& tenant);

    TypeId type_;
    Rate base_rate_;
    int capacity_ = 1;
    std::vector<Bid> bids_;
    std::vector<TenantId> entitled_;
    Rate clearing_;
};

/// Re-ranks the entry's bids. Returns the event describing the change, if any.
std::optional<PriceEvent> recompute_entitlement(ExchangeEntry& entry, SimTime now, PriceCause cause);

/// Minimum rate a newcomer must bid to become entitled.
Rate price_quote(const ExchangeEntry& entry, Rate tick = kDefaultRateTick);
/// Same, ignoring `tenant`'s own bid.
Rate price_quote(const ExchangeEntry& entry, const TenantId& tenant, Rate tick = kDefaultRateTick);

/// Builds an entry with arbitrary bids and incumbents, without recomputing.
ExchangeEntry make_entry_for_testing(TypeId type, Rate base, int capacity, std::vector<Bid> bids,
                                     std::vector<TenantId> entitled = {});

/// Cluster-local exchange table. Single writer: the simulation loop.
class ExchangeTable {
public:
    explicit ExchangeTable(const FunctionalCluster& cluster, Rate tick = kDefaultRateTick);

    /// Throws UnknownType, BidBelowBase or DuplicateBid.
    std::vector<PriceEvent> post_bid(Bid bid);
    /// Throws NoSuchBid or BidBelowBase. An unchanged rate is a no-op.
    std::vector<PriceEvent> update_bid(const TenantId& tenant, const TypeId& type, Rate rate, SimTime now);
    std::vector<PriceEvent> withdraw_bid(const TenantId& tenant, const TypeId& type, SimTime now);
    std::vector<PriceEvent> expire_tenant_bids(const TenantId& tenant, SimTime now,
                                               PriceCause cause = PriceCause::bid_expired);
    /// Periodic price-setter pass over every entry.
    std::vector<PriceEvent> sweep(SimTime now);

    /// Throws UnknownType.
    [[nodiscard]] const ExchangeEntry& entry(const TypeId& type) const;
    [[nodiscard]] const std::map<TypeId, ExchangeEntry>& entries() const { return entries_; }
    [[nodiscard]] Rate tick() const { return tick_; }

    [[nodiscard]] std::optional<Rate> standing_bid(const TenantId& tenant, const TypeId& type) const;
    [[nodiscard]] bool is_entitled(const TenantId& tenant, const TypeId& type) const;

    /// Rate `tenant` would pay on `type`: the clearing rate if entitled, else the quote.
    [[nodiscard]] Rate effective_rate(const TenantId& tenant, const TypeId& type) const;

private:
    ExchangeEntry& entry_mut(const TypeId& type);

    std::map<TypeId, ExchangeEntry> entries_;
    Rate tick_;
};

}  // namespace laissez
