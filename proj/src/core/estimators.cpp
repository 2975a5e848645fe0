#include "estimators.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "rng.hpp"

namespace susphom {

namespace {

double shell_volume(double lo, double hi, int d) {
    return d == 3 ? (4.0 / 3.0) * kPi * (hi * hi * hi - lo * lo * lo)
                  : kPi * (hi * hi - lo * lo);
}

bool in_unit_cube(const Vec3& diff, const Vec3& center, int d) {
    for (int k = 0; k < d; ++k)
        if (std::abs(diff[k] - center[k]) >= 0.5) return false;
    return true;
}

struct MeanVar {
    double mean = 0, m2 = 0;
    std::uint64_t n = 0;
    void add(double v) {
        ++n;
        double delta = v - mean;
        mean += delta / static_cast<double>(n);
        m2 += delta * (v - mean);
    }
    double stderr_() const {
        if (n < 2) return 0;
        return std::sqrt(m2 / (static_cast<double>(n) * static_cast<double>(n - 1)));
    }
};

}  // namespace

std::vector<OffsetTuple> default_offset_grid(int j, double r_hc) {
    std::vector<double> seps = {3.0, 4.0, 8.0};
    if (r_hc > 0) seps.insert(seps.begin(), 2 * r_hc);
    seps.insert(seps.begin(), 0.0);
    std::sort(seps.begin(), seps.end());
    seps.erase(std::unique(seps.begin(), seps.end()), seps.end());

    std::vector<OffsetTuple> grid;
    if (j <= 1) return grid;
    if (j == 2) {
        for (double s : seps) grid.push_back({{Vec3{s, 0, 0}}});
        return grid;
    }
    // j >= 3: pairs of axis-aligned offsets along distinct axes
    for (double s1 : seps)
        for (double s2 : seps) grid.push_back({{Vec3{s1, 0, 0}, Vec3{0, s2, 0}}});
    return grid;
}

IntensityEstimate estimate_intensity_j(const SamplerSpec& sampler, int j,
                                       const std::vector<OffsetTuple>& grid,
                                       std::uint64_t n_samples, std::uint64_t seed,
                                       double max_rel_stderr) {
    if (j < 1) throw ConfigError("estimate_intensity_j: j must be >= 1");
    if (j > 1 && grid.empty()) throw ConfigError("estimate_intensity_j: empty offset grid");
    if (n_samples < 2) throw ConfigError("estimate_intensity_j: need >= 2 samples");

    const int d = sampler.d;
    const double vol = std::pow(sampler.L, d);

    IntensityEstimate est;
    est.j = j;
    est.n_samples = n_samples;

    if (j == 1) {
        MeanVar mv;
        for (std::uint64_t s = 0; s < n_samples; ++s) {
            auto cfg = sampler.sample(derive_sample_seed(seed, s));
            mv.add(static_cast<double>(cfg.points.size()) / vol);
        }
        est.value = mv.mean;
        est.stderr_ = mv.stderr_();
        est.grid_note = "j=1 (grid ignored)";
        est.cell_values = {est.value};
        est.cell_stderr = {est.stderr_};
        if (est.value > 0 && est.stderr_ / est.value > max_rel_stderr)
            throw NumericError("insufficient samples for intensity estimate");
        return est;
    }

    std::vector<MeanVar> cells(grid.size());
    double reach = 0;
    for (const auto& tup : grid)
        for (const auto& w : tup.offsets) reach = std::max(reach, w.norm());
    reach += 0.5 * std::sqrt(3.0) + 1e-9;

    for (std::uint64_t s = 0; s < n_samples; ++s) {
        auto cfg = sampler.sample(derive_sample_seed(seed, s));
        const auto& pts = cfg.points;
        std::vector<double> counts(grid.size(), 0.0);
        for (std::size_t n1 = 0; n1 < pts.size(); ++n1) {
            // candidate partners within reach (brute scan; boxes here are modest)
            for (std::size_t g = 0; g < grid.size(); ++g) {
                const auto& offs = grid[g].offsets;
                if (offs.size() == 1) {
                    for (std::size_t n2 = 0; n2 < pts.size(); ++n2) {
                        if (n2 == n1) continue;
                        Vec3 diff = torus_diff(pts[n2], pts[n1], cfg.L, d);
                        if (in_unit_cube(diff, offs[0], d)) counts[g] += 1.0;
                    }
                } else {
                    double c2 = 0, c3 = 0, c23 = 0;
                    for (std::size_t n2 = 0; n2 < pts.size(); ++n2) {
                        if (n2 == n1) continue;
                        Vec3 diff = torus_diff(pts[n2], pts[n1], cfg.L, d);
                        bool a = in_unit_cube(diff, offs[0], d);
                        bool b = in_unit_cube(diff, offs[1], d);
                        if (a) c2 += 1;
                        if (b) c3 += 1;
                        if (a && b) c23 += 1;
                    }
                    counts[g] += c2 * c3 - c23;  // ordered distinct (n2, n3)
                }
            }
        }
        for (std::size_t g = 0; g < grid.size(); ++g) cells[g].add(counts[g] / vol);
    }
    (void)reach;

    std::size_t best = 0;
    for (std::size_t g = 0; g < grid.size(); ++g) {
        est.cell_values.push_back(cells[g].mean);
        est.cell_stderr.push_back(cells[g].stderr_());
        if (cells[g].mean > cells[best].mean) best = g;
    }
    est.value = cells[best].mean;
    est.stderr_ = cells[best].stderr_();
    std::ostringstream note;
    note << "unit-cube cells, " << grid.size() << " offset tuples, max at tuple " << best;
    est.grid_note = note.str();
    if (est.value > 0 && est.stderr_ / est.value > max_rel_stderr)
        throw NumericError("insufficient samples for intensity estimate");
    return est;
}

IntensityEstimate estimate_intensity_isotropic(
    const SamplerSpec& sampler, int j, const std::vector<std::pair<double, double>>& annuli,
    std::uint64_t n_samples, std::uint64_t seed) {
    if (j < 2 || j > 3) throw ConfigError("isotropic intensity estimator supports j in {2,3}");
    if (annuli.empty()) throw ConfigError("estimate_intensity_isotropic: no annuli");
    const int d = sampler.d;
    const double vol = std::pow(sampler.L, d);

    // cells: annulus (j=2) or ordered annulus pair (j=3)
    std::vector<std::pair<int, int>> cells_def;
    if (j == 2) {
        for (std::size_t a = 0; a < annuli.size(); ++a) cells_def.push_back({static_cast<int>(a), -1});
    } else {
        for (std::size_t a = 0; a < annuli.size(); ++a)
            for (std::size_t b = 0; b < annuli.size(); ++b)
                cells_def.push_back({static_cast<int>(a), static_cast<int>(b)});
    }
    std::vector<MeanVar> cells(cells_def.size());

    for (std::uint64_t s = 0; s < n_samples; ++s) {
        auto cfg = sampler.sample(derive_sample_seed(seed, s));
        const auto& pts = cfg.points;
        std::vector<double> counts(cells_def.size(), 0.0);
        std::vector<double> per_ann(annuli.size());
        for (std::size_t n1 = 0; n1 < pts.size(); ++n1) {
            std::fill(per_ann.begin(), per_ann.end(), 0.0);
            std::vector<double> overlap(j == 3 ? annuli.size() * annuli.size() : 0, 0.0);
            for (std::size_t n2 = 0; n2 < pts.size(); ++n2) {
                if (n2 == n1) continue;
                double r = torus_distance(pts[n2], pts[n1], cfg.L, d);
                for (std::size_t a = 0; a < annuli.size(); ++a) {
                    bool ina = (r >= annuli[a].first && r < annuli[a].second);
                    if (!ina) continue;
                    per_ann[a] += 1;
                    if (j == 3)
                        for (std::size_t b = 0; b < annuli.size(); ++b)
                            if (r >= annuli[b].first && r < annuli[b].second)
                                overlap[a * annuli.size() + b] += 1;
                }
            }
            for (std::size_t c = 0; c < cells_def.size(); ++c) {
                int a = cells_def[c].first, b = cells_def[c].second;
                if (j == 2)
                    counts[c] += per_ann[a];
                else
                    counts[c] += per_ann[a] * per_ann[b] - overlap[a * annuli.size() + b];
            }
        }
        for (std::size_t c = 0; c < cells_def.size(); ++c) {
            int a = cells_def[c].first, b = cells_def[c].second;
            double norm = vol * shell_volume(annuli[a].first, annuli[a].second, d);
            if (j == 3) norm *= shell_volume(annuli[b].first, annuli[b].second, d);
            cells[c].add(counts[c] / norm);
        }
    }

    IntensityEstimate est;
    est.j = j;
    est.n_samples = n_samples;
    std::size_t best = 0;
    for (std::size_t c = 0; c < cells.size(); ++c) {
        est.cell_values.push_back(cells[c].mean);
        est.cell_stderr.push_back(cells[c].stderr_());
        if (cells[c].mean > cells[best].mean) best = c;
    }
    est.value = cells[best].mean;
    est.stderr_ = cells[best].stderr_();
    std::ostringstream note;
    note << "isotropic annulus aggregation, " << cells.size() << " cells, max at cell " << best;
    est.grid_note = note.str();
    return est;
}

PairCorrelationTable estimate_pair_correlation(const SamplerSpec& sampler,
                                               const std::vector<double>& bin_edges,
                                               std::uint64_t n_samples, std::uint64_t seed) {
    if (bin_edges.size() < 2) throw ConfigError("pair correlation: need >= 2 bin edges");
    for (std::size_t i = 1; i < bin_edges.size(); ++i)
        if (bin_edges[i] <= bin_edges[i - 1])
            throw ConfigError("pair correlation: bin edges must be strictly increasing");
    if (bin_edges.back() >= sampler.L / 2)
        throw ConfigError("pair correlation: max bin must be < L/2");
    if (n_samples < 2) throw ConfigError("pair correlation: need >= 2 samples");

    const int d = sampler.d;
    const double vol = std::pow(sampler.L, d);
    const std::size_t nbins = bin_edges.size() - 1;

    std::vector<MeanVar> f2(nbins), h2(nbins);
    MeanVar lam;
    for (std::uint64_t s = 0; s < n_samples; ++s) {
        auto cfg = sampler.sample(derive_sample_seed(seed, s));
        const auto& pts = cfg.points;
        const double n = static_cast<double>(pts.size());
        lam.add(n / vol);
        // unbiased per-sample lambda^2 from distinct ordered pairs
        const double lam2_s = n * (n - 1) / (vol * vol);
        std::vector<double> counts(nbins, 0.0);
        for (std::size_t i = 0; i < pts.size(); ++i)
            for (std::size_t k = i + 1; k < pts.size(); ++k) {
                double r = torus_distance(pts[i], pts[k], cfg.L, d);
                auto it = std::upper_bound(bin_edges.begin(), bin_edges.end(), r);
                if (it == bin_edges.begin() || it == bin_edges.end()) continue;
                counts[static_cast<std::size_t>(it - bin_edges.begin()) - 1] += 1.0;
            }
        for (std::size_t b = 0; b < nbins; ++b) {
            // ordered-pair density: unordered count x2 / (L^d shell volume)
            double f2_s = 2.0 * counts[b] /
                          (vol * shell_volume(bin_edges[b], bin_edges[b + 1], d));
            f2[b].add(f2_s);
            h2[b].add(f2_s - lam2_s);
        }
    }

    PairCorrelationTable tab;
    tab.bin_edges = bin_edges;
    tab.lambda = lam.mean;
    tab.lambda_stderr = lam.stderr_();
    tab.n_samples = n_samples;
    for (std::size_t b = 0; b < nbins; ++b) {
        tab.f2.push_back(f2[b].mean);
        tab.f2_stderr.push_back(f2[b].stderr_());
        tab.h2.push_back(h2[b].mean);
        tab.h2_stderr.push_back(h2[b].stderr_());
    }
    return tab;
}

std::string estimates_csv(const std::vector<IntensityEstimate>& intensities,
                          const PairCorrelationTable* pair_table, std::uint64_t seed) {
    std::ostringstream os;
    os << "quantity,j_or_bin,estimate,stderr,n_samples,seed\n";
    os.precision(12);
    for (const auto& e : intensities)
        os << "lambda_j," << e.j << "," << e.value << "," << e.stderr_ << "," << e.n_samples
           << "," << seed << "\n";
    if (pair_table) {
        for (std::size_t b = 0; b + 1 < pair_table->bin_edges.size(); ++b) {
            double mid = 0.5 * (pair_table->bin_edges[b] + pair_table->bin_edges[b + 1]);
            os << "f2," << mid << "," << pair_table->f2[b] << "," << pair_table->f2_stderr[b]
               << "," << pair_table->n_samples << "," << seed << "\n";
            os << "h2," << mid << "," << pair_table->h2[b] << "," << pair_table->h2_stderr[b]
               << "," << pair_table->n_samples << "," << seed << "\n";
        }
        os << "lambda,1," << pair_table->lambda << "," << pair_table->lambda_stderr << ","
           << pair_table->n_samples << "," << seed << "\n";
    }
    return os.str();
}

}  // namespace susphom
