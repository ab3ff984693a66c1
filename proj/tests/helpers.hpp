#pragma once

#include "eqih/ratla.hpp"

#include <initializer_list>
#include <random>

namespace eqih::test {

inline MatQ mat(Index rows, Index cols, std::initializer_list<int> entries) {
    MatQ m(rows, cols);
    auto it = entries.begin();
    for (Index i = 0; i < rows; ++i)
        for (Index j = 0; j < cols; ++j) m(i, j) = Rational(*it++);
    return m;
}

inline MatQ random_mat(std::mt19937_64& rng, Index rows, Index cols, int lo = -2, int hi = 2) {
    std::uniform_int_distribution<int> dist(lo, hi);
    MatQ m(rows, cols);
    for (Index i = 0; i < rows; ++i)
        for (Index j = 0; j < cols; ++j) m(i, j) = Rational(dist(rng));
    return m;
}

}  // namespace eqih::test
