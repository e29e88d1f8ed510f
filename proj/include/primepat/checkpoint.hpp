#pragma once

// Resumable search state.
//
// File layout (text, one record per line, all numbers decimal):
//
//   PRIMEPAT-CHECKPOINT v1
//   digest <config digest>
//   pattern <canonical pattern>
//   n <bound>
//   workers <nu>
//   residues <wheel residue count>
//   stripe: <idx> position <p> done <0|1> residues_done <r> found <f> cursor <d0> <d1> ...
//   sum <idx> <bucket> <sum mantissa> <sum exponent> <comp mantissa> <comp exponent>
//   hits <idx> <x> <x> ...
//   end <fnv-1a 64 of all preceding bytes>
//
// Long doubles are stored exactly as mantissa * 2^exponent.  Only
// nonzero buckets are written.

#include <cstdint>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

#include "primepat/arith.hpp"
#include "primepat/kahan.hpp"

namespace primepat {

class CheckpointError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct StripeState {
    std::uint64_t index = 0;
    WideInt position = 0;             // wheel enumeration index of the next residue
    bool done = false;
    std::vector<std::uint64_t> cursor;
    std::uint64_t residues_done = 0;  // residues completed by this stripe
    std::uint64_t found = 0;
    KahanBuckets sums;
    std::vector<WideInt> hits;

    friend bool operator==(const StripeState&, const StripeState&) = default;
};

struct Checkpoint {
    std::uint64_t digest = 0;
    std::string pattern;
    WideInt n = 0;
    std::uint64_t workers = 1;
    WideInt residues = 0;
    std::vector<StripeState> stripes;

    friend bool operator==(const Checkpoint&, const Checkpoint&) = default;
};

std::string serialize_checkpoint(const Checkpoint& cp);
Checkpoint parse_checkpoint(const std::string& text);

/// Writes through a temporary file and renames it into place.
void save_checkpoint(const Checkpoint& cp, const std::filesystem::path& path);
Checkpoint load_checkpoint(const std::filesystem::path& path);

std::uint64_t fnv1a64(std::string_view bytes, std::uint64_t seed = 0xcbf29ce484222325ULL);

}  // namespace primepat
