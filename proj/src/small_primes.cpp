#include "primepat/small_primes.hpp"

namespace primepat {

std::vector<std::uint64_t> primes_up_to(std::uint64_t limit) {
    std::vector<std::uint64_t> primes;
    if (limit < 2) return primes;
    primes.push_back(2);
    // composite[i] describes the odd number 2i+1.
    const std::uint64_t half = (limit - 1) / 2 + 1;
    std::vector<bool> composite(half, false);
    for (std::uint64_t i = 1; i < half; ++i) {
        if (composite[i]) continue;
        const std::uint64_t p = 2 * i + 1;
        primes.push_back(p);
        for (std::uint64_t j = (p * p) / 2; j < half; j += p) composite[j] = true;
    }
    return primes;
}

}  // namespace primepat
