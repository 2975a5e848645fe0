#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "dipole_solver.hpp"

namespace susphom {

// One periodic dipole solve per particle subset. Subsets are bitmasks over
// the configuration's particle indices; the sweep either covers all 2^N
// subsets (N <= 16) or every subset up to a size cap.
struct SubsetEntry {
    bool present = false;
    double reading = 1.0;            // E : B_L E for the subset
    std::vector<Mat3> stresslets;    // indexed by particle, only members set
};

struct SubsetReadings {
    PeriodicConfiguration config;
    Mat3 E;
    int n = 0;
    bool all_subsets = false;
    int max_size = 0;
    std::vector<SubsetEntry> entries;  // indexed by mask

    const SubsetEntry& at(std::uint32_t mask) const;
};

inline constexpr int kAllSubsetsCap = 16;

struct SweepFamily {
    bool all = true;
    int up_to_size = 0;  // used when all == false
};

SubsetReadings subset_sweep(const PeriodicConfiguration& config, const Mat3& E,
                            const StrainKernelEvaluator& kernel, const SweepFamily& family,
                            const SolveOptions& opts = {});

// Inclusion-exclusion combination over subsets of F:
//   delta^F X^H = sum_{G subset F} (-1)^{|F \ G|} X^{G union H}
enum class SubsetQuantity { kReading, kExcess };
double delta_F(const SubsetReadings& readings, std::uint32_t F, std::uint32_t H,
               SubsetQuantity what);
// same combination applied to E : S_n of the subsets (n joined to every term)
double delta_F_stresslet(const SubsetReadings& readings, std::uint32_t F, std::uint32_t H,
                         int particle);

struct ClusterCoefficients {
    std::vector<double> energy_route;    // index j-1, j = 1..k
    std::vector<double> boundary_route;
    double max_route_discrepancy = 0;    // relative
};

enum class CoefficientRoute { kEnergy, kBoundary, kBoth };

// Coefficients through order k for the fixed driving direction; the energy
// route combines subset readings, the boundary route combines per-particle
// stresslet contractions. The two are combinatorially identical here and
// their agreement is a cross-check of the bookkeeping.
ClusterCoefficients cluster_coefficients(const SubsetReadings& readings, int k,
                                         CoefficientRoute route = CoefficientRoute::kBoth);

// Exact deletion average over all subsets:
//   sum_S p^{|S|} (1-p)^{N-|S|} reading(S), compensated summation.
double bernoulli_average_bruteforce(const SubsetReadings& readings, double p);

// Remainder of the order-k expansion at deletion parameter p, computed from
// the exact algebraic rearrangement
//   [bruteforce average - 1 - sum_{j<=k} p^j/j! coeff_j] / p^{k+1}.
// p = 0 with k < N has no finite rearranged value; the limit coefficient
// coeff_{k+1}/(k+1)! is returned through `limit` instead.
double remainder_value(const SubsetReadings& readings, double p, int k,
                       std::optional<double>* limit = nullptr);

std::string cluster_report_json(const SubsetReadings& readings,
                                const ClusterCoefficients& coeffs,
                                const std::vector<std::pair<double, double>>& remainders,
                                std::uint64_t config_digest);
std::string cluster_report_csv(const ClusterCoefficients& coeffs);

}  // namespace susphom
