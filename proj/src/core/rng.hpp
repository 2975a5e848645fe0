#pragma once

#include <cstdint>

#include "common.hpp"

namespace susphom {

// Counter-based generator: every draw is a stateless mix of
// (master seed, stream purpose, stream index, counter), so per-point and
// per-sample draws do not depend on evaluation order or thread schedule.

enum class StreamPurpose : std::uint64_t {
    kProposalCount = 0x9e3779b97f4a7c15ull,
    kProposalPoint = 0xbf58476d1ce4e5b9ull,
    kProposalMark = 0x94d049bb133111ebull,
    kSatelliteDir = 0x2545f4914f6cdd1dull,
    kSatelliteFlag = 0xd6e8feb86659fd93ull,
    kDeletion = 0xa0761d6478bd642full,
    kSampleDerive = 0xe7037ed1a0b428dbull,
    kGeneric = 0x8ebc6af09c88c6e3ull,
};

std::uint64_t mix64(std::uint64_t v);

class RngStream {
  public:
    RngStream(std::uint64_t master_seed, StreamPurpose purpose, std::uint64_t index);

    std::uint64_t next_u64();
    // uniform in [0,1)
    double next_double();
    // uniform in [a,b)
    double uniform(double a, double b);
    // exact Poisson draw (Knuth product for small mean, PTRS rejection above)
    std::uint64_t poisson(double mean);
    // uniform on the unit sphere (d=3)
    Vec3 unit_vector3();

  private:
    std::uint64_t key_;
    std::uint64_t ctr_ = 0;
};

// Seed for one Monte Carlo sample derived from the master seed.
std::uint64_t derive_sample_seed(std::uint64_t master_seed, std::uint64_t sample_index);

}  // namespace susphom
