#include "eqih/session.hpp"

namespace eqih {

Session::Session(Model m) : model_(std::make_shared<const Model>(std::move(m))) {}

template <typename Key, typename T, typename Build>
std::shared_ptr<const T> Session::memo(std::map<Key, std::shared_ptr<const T>>& cache, const Key& key, Build build) const {
    {
        std::lock_guard lock(mutex_);
        auto it = cache.find(key);
        if (it != cache.end()) return it->second;
    }
    auto fresh = std::make_shared<const T>(build());
    std::lock_guard lock(mutex_);
    return cache.emplace(key, std::move(fresh)).first->second;
}

std::shared_ptr<const PerverseData> Session::perverse(const Perversity& p) const {
    return memo(perverse_, p, [&] { return perverse_data(*model_, p); });
}

std::shared_ptr<const Eq1Data> Session::eq1(const Perversity& p) const {
    return memo(eq1_, p, [&] { return eq1_data(*model_, *perverse(p)); });
}

std::shared_ptr<const EquivariantData> Session::equivariant(const Perversity& p, int N) const {
    if (N < 0) N = default_truncation(*model_);
    return memo(equivariant_, std::make_pair(p, N),
                [&] { return build_equivariant(*model_, *perverse(p), *eq1(p), N); });
}

}  // namespace eqih
