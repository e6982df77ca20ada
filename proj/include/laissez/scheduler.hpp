#pragma once

#include "laissez/exchange.hpp"
#include "laissez/model.hpp"

#include <deque>
#include <map>
#include <optional>
#include <set>
#include <vector>

namespace laissez {

struct QueuedRequest {
    UserRequest request;
    SimTime enqueued;
    // Re-queued by a running tenant to move elsewhere.
    bool migration = false;
};

/// Pending requests, FIFO by enqueue time with ties broken by request id.
class RequestQueue {
public:
    /// Throws DuplicateRequestId if the id was ever queued before.
    void push(QueuedRequest item);

    [[nodiscard]] const QueuedRequest* head() const { return items_.empty() ? nullptr : &items_.front(); }
    [[nodiscard]] const std::deque<QueuedRequest>& items() const { return items_; }
    [[nodiscard]] bool empty() const { return items_.empty(); }
    [[nodiscard]] std::size_t size() const { return items_.size(); }
    [[nodiscard]] const QueuedRequest* find(const RequestId& id) const;
    [[nodiscard]] const QueuedRequest* find_tenant(const TenantId& tenant) const;

    std::optional<QueuedRequest> remove(const RequestId& id);

private:
    std::deque<QueuedRequest> items_;
    std::set<RequestId> ever_seen_;
};

/// Free/allocated state of every instance, refreshed on each bind and release.
class AvailabilityCache {
public:
    explicit AvailabilityCache(const FunctionalCluster& cluster);

    [[nodiscard]] int free_count(const TypeId& type) const;
    [[nodiscard]] std::optional<InstanceRef> first_free(const TypeId& type) const;
    [[nodiscard]] const Instance& instance(const InstanceRef& ref) const;
    [[nodiscard]] const std::map<TypeId, std::vector<Instance>>& instances() const { return instances_; }
    [[nodiscard]] std::vector<InstanceRef> held_by(const TenantId& tenant) const;

    /// Throws InstanceNotFree.
    void allocate(const InstanceRef& ref, const TenantId& tenant, Rate rate, SimTime now);
    void set_rate(const InstanceRef& ref, Rate rate);
    void set_draining(const InstanceRef& ref);
    void release(const InstanceRef& ref, const TenantId& tenant);

private:
    Instance& mut(const InstanceRef& ref);

    std::map<TypeId, std::vector<Instance>> instances_;
    std::map<TypeId, int> free_;
};

struct Assignment {
    RequestId request;
    TenantId tenant;
    InstanceRef instance;
    Rate rate;
    SimTime decided_at;

    bool operator==(const Assignment&) const = default;
};

/// Validates and queues a request, posting bids for its non-inert entries
/// that the tenant does not already hold.
std::vector<PriceEvent> enqueue(RequestQueue& queue, ExchangeTable& exchange, const FunctionalCluster& cluster,
                                const WorkloadProfile& profile, UserRequest request, SimTime now,
                                bool migration = false);

/// First launch-table type, in priority order, where the head tenant is
/// entitled and an instance is free. Nothing when no type qualifies.
std::optional<Assignment> match_head(const RequestQueue& queue, const AvailabilityCache& cache,
                                     const ExchangeTable& exchange, SimTime now);

/// Same rule, applied to the first queued request that can match at all.
std::optional<Assignment> match_any(const RequestQueue& queue, const AvailabilityCache& cache,
                                    const ExchangeTable& exchange, SimTime now);

struct DispatchPlan {
    Assignment assignment;
    QueuedRequest request;
    SimTime ready_at;
    Progress resume_from;
};

/// Binds an assignment to its instance and removes the request from the queue.
/// Throws InstanceNotFree if the instance is held.
DispatchPlan dispatch(RequestQueue& queue, AvailabilityCache& cache, const Assignment& assignment,
                      const WorkloadProfile& profile);

struct CancelResult {
    std::vector<QueuedRequest> cancelled;
    std::vector<PriceEvent> price_events;
};

/// Drops requests whose enqueue time + timeout < now. Bids of fresh
/// requests are expired; a migration request leaves the running tenant's bids alone.
CancelResult sweep_timeouts(RequestQueue& queue, ExchangeTable& exchange, SimTime now);

/// Tenant-initiated cancellation; same cleanup as a timeout.
CancelResult cancel_request(RequestQueue& queue, ExchangeTable& exchange, const RequestId& id, SimTime now);

}  // namespace laissez
