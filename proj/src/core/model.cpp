#include "laissez/model.hpp"

#include "laissez/error.hpp"

#include <algorithm>
#include <set>

namespace laissez {

std::string to_string(const InstanceRef& ref) { return ref.type + "#" + std::to_string(ref.index); }

FunctionalCluster::FunctionalCluster(std::string id, std::string function, std::vector<AcceleratorType> types)
    : id_(std::move(id)), function_(std::move(function)), types_(std::move(types)) {
    std::set<TypeId> seen;
    for (const auto& t : types_) {
        if (!seen.insert(t.id).second) throw Error(Errc::DuplicateEntry, t.id, "accelerator type declared twice");
        if (t.base_rate <= Rate{}) throw Error(Errc::InvalidValue, t.id, "base rate must be positive");
        if (t.instance_count < 1) throw Error(Errc::InvalidValue, t.id, "instance count must be at least 1");
        for (int i = 0; i < t.instance_count; ++i) {
            instances_.push_back(Instance{InstanceRef{t.id, i}, Instance::State::free, {}, {}, {}});
        }
    }
}

const AcceleratorType* FunctionalCluster::find_type(const TypeId& id) const {
    auto it = std::find_if(types_.begin(), types_.end(), [&](const auto& t) { return t.id == id; });
    return it == types_.end() ? nullptr : &*it;
}

const AcceleratorType& FunctionalCluster::type(const TypeId& id) const {
    if (const auto* t = find_type(id)) return *t;
    throw Error(Errc::UnknownHardware, id);
}

Duration WorkloadProfile::total_time(const TypeId& type) const {
    auto it = exec_time.find(type);
    if (it == exec_time.end()) throw Error(Errc::IncompatibleHardware, type);
    return it->second;
}

void WorkloadProfile::validate() const {
    if (exec_time.empty()) throw Error(Errc::InvalidValue, "exec_time", "no compatible accelerator");
    for (const auto& [type, t] : exec_time) {
        if (t <= Duration{}) throw Error(Errc::InvalidValue, type, "execution time must be positive");
    }
    const auto step = checkpoint_interval.count();
    if (step <= 0 || step > Progress::kOne) {
        throw Error(Errc::InvalidValue, "checkpoint_interval", "must lie in (0, 1]");
    }
    // Divides 1.0 within 1e-9, i.e. one progress unit.
    const auto rem = Progress::kOne % step;
    if (rem > 1 && step - rem > 1) {
        throw Error(Errc::InvalidValue, "checkpoint_interval", "must divide 1.0");
    }
    if (restart_surcharge < Money{}) throw Error(Errc::InvalidValue, "restart_surcharge", "negative");
    if (load_delay < Duration{}) throw Error(Errc::InvalidValue, "load_delay", "negative");
}

const LaunchEntry* LaunchTable::find(const TypeId& type) const {
    auto it = std::find_if(entries.begin(), entries.end(), [&](const auto& e) { return e.type == type; });
    return it == entries.end() ? nullptr : &*it;
}

std::size_t LaunchTable::priority(const TypeId& type) const {
    for (std::size_t i = 0; i < entries.size(); ++i) {
        if (entries[i].type == type) return i;
    }
    return static_cast<std::size_t>(-1);
}

bool is_inert(const LaunchEntry& entry, const FunctionalCluster& cluster) {
    const auto* t = cluster.find_type(entry.type);
    return t == nullptr || entry.max_bid < t->base_rate;
}

}  // namespace laissez
