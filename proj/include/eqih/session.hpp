#pragma once

// Per-model memo of everything derived from a perversity. Entries are built
// outside the lock and published once; concurrent callers may race to build
// the same entry, in which case the first published copy wins.

#include "eqih/equivariant.hpp"

#include <map>
#include <mutex>

namespace eqih {

class Session {
public:
    explicit Session(Model m);

    const Model& model() const { return *model_; }

    std::shared_ptr<const PerverseData> perverse(const Perversity& p) const;
    std::shared_ptr<const Eq1Data> eq1(const Perversity& p) const;
    /// N < 0 selects default_truncation().
    std::shared_ptr<const EquivariantData> equivariant(const Perversity& p, int N = -1) const;

private:
    template <typename Key, typename T, typename Build>
    std::shared_ptr<const T> memo(std::map<Key, std::shared_ptr<const T>>& cache, const Key& key, Build build) const;

    std::shared_ptr<const Model> model_;
    mutable std::mutex mutex_;
    mutable std::map<Perversity, std::shared_ptr<const PerverseData>> perverse_;
    mutable std::map<Perversity, std::shared_ptr<const Eq1Data>> eq1_;
    mutable std::map<std::pair<Perversity, int>, std::shared_ptr<const EquivariantData>> equivariant_;
};

}  // namespace eqih
