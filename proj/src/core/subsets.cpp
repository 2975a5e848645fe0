#include "subsets.hpp"

#include <bit>
#include <cmath>
#include <sstream>

#include <json.hpp>

namespace susphom {

const SubsetEntry& SubsetReadings::at(std::uint32_t mask) const {
    if (mask >= entries.size() || !entries[mask].present)
        throw ConfigError("missing subset in sweep");
    return entries[mask];
}

SubsetReadings subset_sweep(const PeriodicConfiguration& config, const Mat3& E,
                            const StrainKernelEvaluator& kernel, const SweepFamily& family,
                            const SolveOptions& opts) {
    const int n = static_cast<int>(config.inclusions.size());
    if (family.all && n > kAllSubsetsCap) throw ConfigError("subset budget exceeded (2^N guard)");
    SubsetReadings out;
    out.config = config;
    out.E = E;
    out.n = n;
    out.all_subsets = family.all;
    out.max_size = family.all ? n : family.up_to_size;
    out.entries.resize(std::size_t{1} << n);

    // Gray-code order keeps successive solves one particle apart; results are
    // independent of the order.
    const std::uint32_t total = 1u << n;
    for (std::uint32_t i = 0; i < total; ++i) {
        const std::uint32_t mask = i ^ (i >> 1);
        const int size = std::popcount(mask);
        if (!family.all && size > family.up_to_size) continue;
        SubsetEntry entry;
        entry.present = true;
        entry.stresslets.assign(n, Mat3{});
        if (mask == 0) {
            entry.reading = 1.0;
            out.entries[mask] = std::move(entry);
            continue;
        }
        PeriodicConfiguration sub;
        sub.d = config.d;
        sub.L = config.L;
        sub.delta = config.delta;
        std::vector<int> members;
        for (int b = 0; b < n; ++b)
            if (mask & (1u << b)) {
                sub.inclusions.push_back(config.inclusions[b]);
                members.push_back(b);
            }
        DipoleSolution sol;
        try {
            sol = solve_periodic_dipole(sub, E, kernel, opts);
        } catch (const NumericError& e) {
            std::ostringstream os;
            os << e.what() << " (subset mask 0x" << std::hex << mask << ")";
            throw NumericError(os.str());
        }
        entry.reading = effective_viscosity_reading(sol).value;
        for (std::size_t k = 0; k < members.size(); ++k)
            entry.stresslets[members[k]] = sol.stresslets[k];
        out.entries[mask] = std::move(entry);
    }
    return out;
}

namespace {

template <typename F>
double delta_combination(std::uint32_t Fmask, std::uint32_t Hmask, F&& value) {
    if (Fmask & Hmask) throw ConfigError("delta_F: F and H must be disjoint");
    const int fsize = std::popcount(Fmask);
    // iterate G over submasks of F
    double acc = 0;
    std::uint32_t g = Fmask;
    while (true) {
        const int sign_pow = fsize - std::popcount(g);
        const double sign = (sign_pow % 2 == 0) ? 1.0 : -1.0;
        acc += sign * value(g | Hmask);
        if (g == 0) break;
        g = (g - 1) & Fmask;
    }
    return acc;
}

}  // namespace

double delta_F(const SubsetReadings& readings, std::uint32_t F, std::uint32_t H,
               SubsetQuantity what) {
    return delta_combination(F, H, [&](std::uint32_t mask) {
        double v = readings.at(mask).reading;
        return what == SubsetQuantity::kExcess ? v - 1.0 : v;
    });
}

double delta_F_stresslet(const SubsetReadings& readings, std::uint32_t F, std::uint32_t H,
                         int particle) {
    return delta_combination(F, H, [&](std::uint32_t mask) {
        return readings.at(mask).stresslets[particle].ddot(readings.E);
    });
}

namespace {

double factorial(int j) {
    double f = 1;
    for (int i = 2; i <= j; ++i) f *= i;
    return f;
}

// enumerate masks of given popcount (Gosper's hack)
template <typename F>
void for_each_mask_of_size(int n, int j, F&& fn) {
    if (j == 0) {
        fn(0u);
        return;
    }
    if (j > n) return;
    std::uint32_t mask = (1u << j) - 1;
    const std::uint32_t limit = 1u << n;
    while (mask < limit) {
        fn(mask);
        std::uint32_t c = mask & -mask;
        std::uint32_t r = mask + c;
        mask = (((r ^ mask) >> 2) / c) | r;
    }
}

}  // namespace

ClusterCoefficients cluster_coefficients(const SubsetReadings& readings, int k,
                                         CoefficientRoute route) {
    if (k < 1 || k > readings.n) throw ConfigError("cluster_coefficients: need 1 <= k <= N");
    if (!readings.all_subsets && readings.max_size < k)
        throw ConfigError("cluster_coefficients: sweep does not cover size-k subsets");
    ClusterCoefficients out;
    const double vol = std::pow(readings.config.L, 3);
    for (int j = 1; j <= k; ++j) {
        const double jfact = factorial(j);
        if (route != CoefficientRoute::kBoundary) {
            KahanSum acc;
            for_each_mask_of_size(readings.n, j, [&](std::uint32_t F) {
                acc.add(delta_F(readings, F, 0, SubsetQuantity::kExcess));
            });
            out.energy_route.push_back(jfact * acc.value());
        }
        if (route != CoefficientRoute::kEnergy) {
            KahanSum acc;
            for_each_mask_of_size(readings.n, j, [&](std::uint32_t F) {
                for (int p = 0; p < readings.n; ++p) {
                    if (!(F & (1u << p))) continue;
                    // difference over F \ {p}, every term joined with {p}
                    acc.add(delta_F_stresslet(readings, F & ~(1u << p), 1u << p, p));
                }
            });
            out.boundary_route.push_back(0.5 * jfact * acc.value() / vol);
        }
    }
    if (route == CoefficientRoute::kBoth) {
        for (std::size_t j = 0; j < out.energy_route.size(); ++j) {
            double a = out.energy_route[j], b = out.boundary_route[j];
            double rel = std::abs(a - b) / std::max({std::abs(a), std::abs(b), 1e-300});
            out.max_route_discrepancy = std::max(out.max_route_discrepancy, rel);
        }
    }
    return out;
}

double bernoulli_average_bruteforce(const SubsetReadings& readings, double p) {
    if (!readings.all_subsets) throw ConfigError("incomplete sweep: all subsets required");
    if (p < 0 || p > 1) throw ConfigError("bernoulli_average_bruteforce: p outside [0,1]");
    const int n = readings.n;
    KahanSum acc;
    for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
        const int size = std::popcount(mask);
        const double weight = std::pow(p, size) * std::pow(1 - p, n - size);
        acc.add(weight * readings.at(mask).reading);
    }
    return acc.value();
}

double remainder_value(const SubsetReadings& readings, double p, int k,
                       std::optional<double>* limit) {
    if (!readings.all_subsets) throw ConfigError("incomplete sweep: all subsets required");
    if (k < 0) throw ConfigError("remainder_value: k must be >= 0");
    const int n = readings.n;
    if (k >= n) return 0.0;
    auto coeffs = cluster_coefficients(readings, std::min(k + 1, n), CoefficientRoute::kEnergy);
    if (p == 0.0) {
        if (limit) *limit = coeffs.energy_route[k] / factorial(k + 1);
        throw ConfigError("indeterminate at p=0: use the limit coefficient B^{k+1}/(k+1)!");
    }
    double avg = bernoulli_average_bruteforce(readings, p);
    KahanSum partial;
    partial.add(1.0);
    for (int j = 1; j <= k; ++j)
        partial.add(std::pow(p, j) / factorial(j) * coeffs.energy_route[j - 1]);
    return (avg - partial.value()) / std::pow(p, k + 1);
}

std::string cluster_report_json(const SubsetReadings& readings,
                                const ClusterCoefficients& coeffs,
                                const std::vector<std::pair<double, double>>& remainders,
                                std::uint64_t config_digest) {
    nlohmann::json j;
    j["config_digest"] = config_digest;
    j["n_particles"] = readings.n;
    j["coefficients"]["energy_route"] = coeffs.energy_route;
    j["coefficients"]["boundary_route"] = coeffs.boundary_route;
    j["coefficients"]["max_route_discrepancy"] = coeffs.max_route_discrepancy;
    auto& rem = j["remainders"] = nlohmann::json::array();
    for (auto [p, v] : remainders) rem.push_back({{"p", p}, {"value", v}});
    auto& subs = j["subsets"] = nlohmann::json::array();
    for (std::uint32_t mask = 0; mask < readings.entries.size(); ++mask)
        if (readings.entries[mask].present)
            subs.push_back({{"mask", mask}, {"reading", readings.entries[mask].reading}});
    return j.dump(2);
}

std::string cluster_report_csv(const ClusterCoefficients& coeffs) {
    std::ostringstream os;
    os << "j,route,value\n";
    os.precision(15);
    for (std::size_t j = 0; j < coeffs.energy_route.size(); ++j)
        os << (j + 1) << ",energy," << coeffs.energy_route[j] << "\n";
    for (std::size_t j = 0; j < coeffs.boundary_route.size(); ++j)
        os << (j + 1) << ",boundary," << coeffs.boundary_route[j] << "\n";
    return os.str();
}

}  // namespace susphom
