#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "samplers.hpp"

namespace susphom {

// Monte Carlo estimate of the order-j point intensity: the supremum over
// offset tuples is approximated by a maximum over a recorded finite grid.
// Estimator: by stationarity, for offsets (w_2..w_j) the cell mass
//   (1/L^d) E[# distinct tuples with x_{n_i} - x_{n_1} in Q(w_i)]
// integrates the j-point density over the unit-cell product.
struct IntensityEstimate {
    int j = 1;
    double value = 0;       // max over the grid
    double stderr_ = 0;     // standard error of the maximizing cell
    std::uint64_t n_samples = 0;
    std::string grid_note;  // recorded grid / aggregation so the sup is auditable
    std::vector<double> cell_values;
    std::vector<double> cell_stderr;
};

// One grid entry: offsets of points 2..j relative to point 1.
struct OffsetTuple {
    std::vector<Vec3> offsets;  // size j-1
};

// Default grid per the module contract: axis-aligned offset tuples with
// pairwise separations drawn from {0, 2 r_hc, 3, 4, 8}.
std::vector<OffsetTuple> default_offset_grid(int j, double r_hc);

IntensityEstimate estimate_intensity_j(const SamplerSpec& sampler, int j,
                                       const std::vector<OffsetTuple>& grid,
                                       std::uint64_t n_samples, std::uint64_t seed,
                                       double max_rel_stderr = 0.5);

// Isotropic variant: unit-cube cells replaced by spherical annuli at the same
// separations (volume-normalized), valid for statistically isotropic
// processes; reduces variance by the annulus/cube volume ratio.
// `annuli` holds (r_lo, r_hi) pairs; for j=3 all annulus pairs are scanned.
IntensityEstimate estimate_intensity_isotropic(const SamplerSpec& sampler, int j,
                                               const std::vector<std::pair<double, double>>& annuli,
                                               std::uint64_t n_samples, std::uint64_t seed);

struct PairCorrelationTable {
    std::vector<double> bin_edges;
    std::vector<double> f2;        // pair density estimate per bin
    std::vector<double> f2_stderr;
    std::vector<double> h2;        // f2 - lambda^2, same run's lambda
    std::vector<double> h2_stderr;
    double lambda = 0;
    double lambda_stderr = 0;
    std::uint64_t n_samples = 0;
};

PairCorrelationTable estimate_pair_correlation(const SamplerSpec& sampler,
                                               const std::vector<double>& bin_edges,
                                               std::uint64_t n_samples, std::uint64_t seed);

// CSV with columns (quantity, j_or_bin, estimate, stderr, n_samples, seed).
std::string estimates_csv(const std::vector<IntensityEstimate>& intensities,
                          const PairCorrelationTable* pair_table, std::uint64_t seed);

}  // namespace susphom
