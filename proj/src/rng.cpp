#include "ensred/rng.hpp"

#include <numeric>
#include <stdexcept>

namespace ensred {

std::vector<int> sample_without_replacement(int n, int k, SplitMix64& rng) {
    if (k < 0 || k > n)
        throw std::invalid_argument("sample_without_replacement: k outside [0, n]");
    std::vector<int> pool(n);
    std::iota(pool.begin(), pool.end(), 0);
    for (int i = 0; i < k; ++i) {
        const int j = i + static_cast<int>(rng.below(static_cast<std::uint64_t>(n - i)));
        std::swap(pool[i], pool[j]);
    }
    pool.resize(k);
    return pool;
}

}  // namespace ensred
