#include "laissez/scheduler.hpp"

#include "laissez/cost_model.hpp"
#include "laissez/error.hpp"

#include <algorithm>

namespace laissez {

void RequestQueue::push(QueuedRequest item) {
    if (!ever_seen_.insert(item.request.id).second) throw Error(Errc::DuplicateRequestId, item.request.id);
    auto pos = std::upper_bound(items_.begin(), items_.end(), item, [](const auto& a, const auto& b) {
        if (a.enqueued != b.enqueued) return a.enqueued < b.enqueued;
        return a.request.id < b.request.id;
    });
    items_.insert(pos, std::move(item));
}

const QueuedRequest* RequestQueue::find(const RequestId& id) const {
    auto it = std::find_if(items_.begin(), items_.end(), [&](const auto& q) { return q.request.id == id; });
    return it == items_.end() ? nullptr : &*it;
}

const QueuedRequest* RequestQueue::find_tenant(const TenantId& tenant) const {
    auto it = std::find_if(items_.begin(), items_.end(), [&](const auto& q) { return q.request.tenant == tenant; });
    return it == items_.end() ? nullptr : &*it;
}

std::optional<QueuedRequest> RequestQueue::remove(const RequestId& id) {
    auto it = std::find_if(items_.begin(), items_.end(), [&](const auto& q) { return q.request.id == id; });
    if (it == items_.end()) return std::nullopt;
    QueuedRequest out = std::move(*it);
    items_.erase(it);
    return out;
}

AvailabilityCache::AvailabilityCache(const FunctionalCluster& cluster) {
    for (const auto& inst : cluster.instances()) {
        instances_[inst.ref.type].push_back(inst);
        ++free_[inst.ref.type];
    }
}

int AvailabilityCache::free_count(const TypeId& type) const {
    auto it = free_.find(type);
    return it == free_.end() ? 0 : it->second;
}

std::optional<InstanceRef> AvailabilityCache::first_free(const TypeId& type) const {
    auto it = instances_.find(type);
    if (it == instances_.end()) return std::nullopt;
    for (const auto& inst : it->second) {
        if (inst.is_free()) return inst.ref;
    }
    return std::nullopt;
}

const Instance& AvailabilityCache::instance(const InstanceRef& ref) const {
    auto it = instances_.find(ref.type);
    if (it == instances_.end() || ref.index < 0 || ref.index >= static_cast<int>(it->second.size())) {
        throw Error(Errc::UnknownHardware, to_string(ref));
    }
    return it->second[static_cast<std::size_t>(ref.index)];
}

Instance& AvailabilityCache::mut(const InstanceRef& ref) { return const_cast<Instance&>(instance(ref)); }

std::vector<InstanceRef> AvailabilityCache::held_by(const TenantId& tenant) const {
    std::vector<InstanceRef> out;
    for (const auto& [type, list] : instances_) {
        for (const auto& inst : list) {
            if (!inst.is_free() && inst.tenant == tenant) out.push_back(inst.ref);
        }
    }
    return out;
}

void AvailabilityCache::allocate(const InstanceRef& ref, const TenantId& tenant, Rate rate, SimTime now) {
    auto& inst = mut(ref);
    if (!inst.is_free()) throw Error(Errc::InstanceNotFree, to_string(ref), "held by " + inst.tenant);
    inst.state = Instance::State::allocated;
    inst.tenant = tenant;
    inst.rate = rate;
    inst.since = now;
    --free_[ref.type];
}

void AvailabilityCache::set_rate(const InstanceRef& ref, Rate rate) { mut(ref).rate = rate; }

void AvailabilityCache::set_draining(const InstanceRef& ref) {
    auto& inst = mut(ref);
    if (inst.is_free()) throw Error(Errc::InvalidValue, to_string(ref), "cannot drain a free instance");
    inst.state = Instance::State::draining;
}

void AvailabilityCache::release(const InstanceRef& ref, const TenantId& tenant) {
    auto& inst = mut(ref);
    if (inst.is_free() || inst.tenant != tenant) {
        throw Error(Errc::InvalidValue, to_string(ref), "release by non-holder " + tenant);
    }
    inst = Instance{ref, Instance::State::free, {}, {}, {}};
    ++free_[ref.type];
}

std::vector<PriceEvent> enqueue(RequestQueue& queue, ExchangeTable& exchange, const FunctionalCluster& cluster,
                                const WorkloadProfile& profile, UserRequest request, SimTime now, bool migration) {
    validate_launch_table(request.launch_table, cluster, profile);
    if (queue.find(request.id) != nullptr) throw Error(Errc::DuplicateRequestId, request.id);
    std::vector<PriceEvent> events;
    const auto tenant = request.tenant;
    const auto entries = request.launch_table.entries;
    queue.push(QueuedRequest{std::move(request), now, migration});
    for (const auto& entry : entries) {
        if (is_inert(entry, cluster) || exchange.standing_bid(tenant, entry.type)) continue;
        auto evs = exchange.post_bid(Bid{tenant, entry.type, entry.max_bid, now});
        events.insert(events.end(), evs.begin(), evs.end());
    }
    return events;
}

namespace {

std::optional<Assignment> try_match(const QueuedRequest& q, const AvailabilityCache& cache,
                                    const ExchangeTable& exchange, SimTime now) {
    for (const auto& entry : q.request.launch_table.entries) {
        if (!exchange.is_entitled(q.request.tenant, entry.type)) continue;
        auto free = cache.first_free(entry.type);
        if (!free) continue;
        return Assignment{q.request.id, q.request.tenant, *free, exchange.entry(entry.type).clearing_rate(), now};
    }
    return std::nullopt;
}

}  // namespace

std::optional<Assignment> match_head(const RequestQueue& queue, const AvailabilityCache& cache,
                                     const ExchangeTable& exchange, SimTime now) {
    const auto* head = queue.head();
    if (head == nullptr) return std::nullopt;
    return try_match(*head, cache, exchange, now);
}

std::optional<Assignment> match_any(const RequestQueue& queue, const AvailabilityCache& cache,
                                    const ExchangeTable& exchange, SimTime now) {
    for (const auto& q : queue.items()) {
        if (auto a = try_match(q, cache, exchange, now)) return a;
    }
    return std::nullopt;
}

DispatchPlan dispatch(RequestQueue& queue, AvailabilityCache& cache, const Assignment& assignment,
                      const WorkloadProfile& profile) {
    const auto* pending = queue.find(assignment.request);
    if (pending == nullptr) throw Error(Errc::InvalidValue, assignment.request, "request is not queued");
    cache.allocate(assignment.instance, assignment.tenant, assignment.rate, assignment.decided_at);
    auto request = *queue.remove(assignment.request);
    const auto resume = request.request.resume_from;
    return DispatchPlan{assignment, std::move(request), assignment.decided_at + profile.load_delay, resume};
}

namespace {

void drop(RequestQueue& queue, ExchangeTable& exchange, const RequestId& id, SimTime now, CancelResult& out) {
    auto removed = queue.remove(id);
    if (!removed) return;
    if (!removed->migration) {
        auto evs = exchange.expire_tenant_bids(removed->request.tenant, now, PriceCause::bid_expired);
        out.price_events.insert(out.price_events.end(), evs.begin(), evs.end());
    }
    out.cancelled.push_back(std::move(*removed));
}

}  // namespace

CancelResult sweep_timeouts(RequestQueue& queue, ExchangeTable& exchange, SimTime now) {
    std::vector<RequestId> expired;
    for (const auto& q : queue.items()) {
        if (q.enqueued + q.request.timeout < now) expired.push_back(q.request.id);
    }
    CancelResult out;
    for (const auto& id : expired) drop(queue, exchange, id, now, out);
    return out;
}

CancelResult cancel_request(RequestQueue& queue, ExchangeTable& exchange, const RequestId& id, SimTime now) {
    CancelResult out;
    drop(queue, exchange, id, now, out);
    return out;
}

}  // namespace laissez
