#pragma once

#include <cstdint>
#include <vector>

namespace primepat {

/// All primes <= limit, by a plain odd-only sieve of Eratosthenes.
std::vector<std::uint64_t> primes_up_to(std::uint64_t limit);

}  // namespace primepat
