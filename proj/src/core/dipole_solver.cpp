#include "dipole_solver.hpp"

#include <cmath>
#include <sstream>

#include <Eigen/Dense>
#include <json.hpp>

#include "single_sphere.hpp"
#include "stokeslet.hpp"

namespace susphom {

namespace {

// Pairwise interaction blocks in strain-basis coordinates; symmetric in the
// pair (the kernel is even), so one block per unordered pair.
struct PairBlocks {
    int n = 0;
    std::vector<std::array<double, 25>> blocks;  // indexed by pair_index(n,m), n<m
    std::array<double, 25> self{};

    static std::size_t pair_index(int i, int j, int n) {
        // i < j
        return static_cast<std::size_t>(i) * n - static_cast<std::size_t>(i) * (i + 1) / 2 +
               (j - i - 1);
    }
};

PairBlocks build_blocks(const PeriodicConfiguration& cfg, const StrainKernelEvaluator& kernel) {
    PairBlocks pb;
    const int n = static_cast<int>(cfg.inclusions.size());
    pb.n = n;
    pb.blocks.resize(static_cast<std::size_t>(n) * (n - 1) / 2);
    const auto& basis = strain_basis();
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
            Vec3 z = torus_diff(cfg.inclusions[i].center, cfg.inclusions[j].center, cfg.L, 3);
            auto& blk = pb.blocks[PairBlocks::pair_index(i, j, n)];
            for (int b = 0; b < 5; ++b) {
                Mat3 img = kernel.apply(z, basis[b]);
                for (int a = 0; a < 5; ++a) blk[5 * a + b] = basis[a].ddot(img);
            }
        }
    for (int b = 0; b < 5; ++b) {
        Mat3 img = kernel.self_apply(basis[b]);
        for (int a = 0; a < 5; ++a) pb.self[5 * a + b] = basis[a].ddot(img);
    }
    return pb;
}

using Coef = std::array<double, 5>;

void block_mul_add(const std::array<double, 25>& blk, const Coef& x, Coef& y) {
    for (int a = 0; a < 5; ++a) {
        double s = 0;
        for (int b = 0; b < 5; ++b) s += blk[5 * a + b] * x[b];
        y[a] += s;
    }
}

}  // namespace

DipoleSolution solve_periodic_dipole(const PeriodicConfiguration& config, const Mat3& E,
                                     const StrainKernelEvaluator& kernel,
                                     const SolveOptions& opts) {
    require_strain(E, "solve_periodic_dipole");
    if (std::abs(kernel.L() - config.L) > 1e-12 * std::max(1.0, config.L))
        throw ConfigError("kernel mismatch: kernel.L differs from config.L");
    if (!(opts.tol > 1e-14 && opts.tol < 1e-4))
        throw ConfigError("solve_periodic_dipole: tol must lie in (1e-14, 1e-4)");
    if (opts.enforce_envelope && config.volume_fraction() > opts.max_volume_fraction)
        throw ConfigError("configuration outside the declared validity envelope");

    DipoleSolution sol;
    sol.spheres = config.inclusions;
    sol.L = config.L;
    sol.E = E;
    sol.kernel_metadata = kernel.metadata_json();
    const int n = static_cast<int>(config.inclusions.size());
    sol.stresslets.assign(n, Mat3{});
    sol.ambient.assign(n, E);
    if (n == 0) return sol;

    const PairBlocks pb = build_blocks(config, kernel);
    std::vector<double> alpha(n);
    for (int i = 0; i < n; ++i) alpha[i] = stresslet_coefficient(config.inclusions[i].radius);

    const Coef e_coef = strain_coeffs(E);
    const double escale = E.norm();
    double alpha_max = 0;
    for (double a : alpha) alpha_max = std::max(alpha_max, a);
    const double scale = std::max(alpha_max * escale, 1e-300);

    const int unknowns = 5 * n;
    const bool want_direct =
        opts.method == SolveMethod::kDirect ||
        (opts.method == SolveMethod::kAuto && unknowns <= 0);  // auto prefers fixed point

    auto run_fixed_point = [&](std::vector<Coef>& s, int& iters, double& res) -> bool {
        double omega = opts.relaxation;
        std::vector<Coef> next(n);
        res = std::numeric_limits<double>::infinity();
        double best = res;
        int stall = 0;
        for (iters = 0; iters < opts.max_iter; ++iters) {
            for (int i = 0; i < n; ++i) {
                Coef a{};
                for (int j = 0; j < n; ++j) {
                    if (j == i) continue;
                    const auto& blk =
                        pb.blocks[PairBlocks::pair_index(std::min(i, j), std::max(i, j), n)];
                    block_mul_add(blk, s[j], a);
                }
                block_mul_add(pb.self, s[i], a);
                for (int c = 0; c < 5; ++c)
                    next[i][c] = (1 - omega) * s[i][c] + omega * alpha[i] * (e_coef[c] + a[c]);
            }
            res = 0;
            for (int i = 0; i < n; ++i) {
                double d2 = 0;
                for (int c = 0; c < 5; ++c) {
                    double d = next[i][c] - s[i][c];
                    d2 += d * d;
                }
                res = std::max(res, std::sqrt(d2));
            }
            res /= scale;
            s = next;
            if (res <= opts.tol) return true;
            if (res < best * (1 - 1e-12)) {
                best = res;
                stall = 0;
            } else if (++stall >= 25) {
                if (omega > 0.26) {
                    omega *= 0.5;
                    stall = 0;
                    best = std::numeric_limits<double>::infinity();
                } else {
                    return false;
                }
            }
        }
        return res <= opts.tol;
    };

    auto run_direct = [&](std::vector<Coef>& s) {
        Eigen::MatrixXd M = Eigen::MatrixXd::Identity(unknowns, unknowns);
        Eigen::VectorXd rhs(unknowns);
        for (int i = 0; i < n; ++i) {
            for (int a = 0; a < 5; ++a) rhs[5 * i + a] = alpha[i] * e_coef[a];
            for (int j = 0; j < n; ++j) {
                const std::array<double, 25>& blk =
                    (j == i) ? pb.self
                             : pb.blocks[PairBlocks::pair_index(std::min(i, j), std::max(i, j), n)];
                for (int a = 0; a < 5; ++a)
                    for (int b = 0; b < 5; ++b) M(5 * i + a, 5 * j + b) -= alpha[i] * blk[5 * a + b];
            }
        }
        Eigen::VectorXd x = M.partialPivLu().solve(rhs);
        for (int i = 0; i < n; ++i)
            for (int a = 0; a < 5; ++a) s[i][a] = x[5 * i + a];
    };

    std::vector<Coef> s(n);
    for (int i = 0; i < n; ++i)
        for (int c = 0; c < 5; ++c) s[i][c] = alpha[i] * e_coef[c];

    bool solved = false;
    if (!want_direct) {
        solved = run_fixed_point(s, sol.iterations, sol.residual);
        if (!solved && unknowns <= kDirectSolveUnknownCap && opts.method == SolveMethod::kAuto) {
            run_direct(s);
            solved = true;
            sol.residual = 0;
        }
    } else {
        if (unknowns > kDirectSolveUnknownCap)
            throw ConfigError("direct solve requested beyond the unknown cap");
        run_direct(s);
        solved = true;
        sol.iterations = 1;
        sol.residual = 0;
    }
    if (!solved)
        throw NumericError(
            "non-convergent: residual failed to contract (configuration likely outside the "
            "validity envelope)");

    for (int i = 0; i < n; ++i) {
        sol.stresslets[i] = strain_from_coeffs(s[i]);
        Coef a{};
        for (int j = 0; j < n; ++j) {
            if (j == i) continue;
            block_mul_add(pb.blocks[PairBlocks::pair_index(std::min(i, j), std::max(i, j), n)],
                          s[j], a);
        }
        block_mul_add(pb.self, s[i], a);
        Coef amb = strain_coeffs(E);
        for (int c = 0; c < 5; ++c) amb[c] += a[c];
        sol.ambient[i] = strain_from_coeffs(amb);
    }
    return sol;
}

ViscosityReading effective_viscosity_reading(const DipoleSolution& solution) {
    ViscosityReading r;
    r.iterations = solution.iterations;
    r.residual = solution.residual;
    if (solution.L <= 0) throw ConfigError("effective_viscosity_reading: periodic solution required");
    KahanSum acc;
    for (const auto& s : solution.stresslets) acc.add(s.ddot(solution.E));
    const double vol = solution.L * solution.L * solution.L;
    r.excess = acc.value() / (2.0 * vol);
    r.value = 1.0 + r.excess;
    if (!std::isfinite(r.value)) throw NumericError("viscosity reading not finite");
    return r;
}

std::array<std::array<double, 5>, 5> assemble_viscosity_tensor(
    const PeriodicConfiguration& config, const StrainKernelEvaluator& kernel,
    const SolveOptions& opts) {
    std::array<std::array<double, 5>, 5> out{};
    const auto& basis = strain_basis();
    const double vol = config.L * config.L * config.L;
    for (int b = 0; b < 5; ++b) {
        DipoleSolution sol = solve_periodic_dipole(config, basis[b], kernel, opts);
        for (int a = 0; a < 5; ++a) {
            KahanSum acc;
            for (const auto& s : sol.stresslets) acc.add(s.ddot(basis[a]));
            out[a][b] = (a == b ? 1.0 : 0.0) + acc.value() / (2.0 * vol);
        }
    }
    return out;
}

Mat3 disturbance_strain(const DipoleSolution& solution, const StrainKernelEvaluator* kernel,
                        const Vec3& at) {
    const bool periodic = solution.L > 0;
    if (periodic && kernel == nullptr)
        throw ConfigError("disturbance_strain: periodic solution needs its kernel");
    Mat3 acc;
    for (std::size_t i = 0; i < solution.spheres.size(); ++i) {
        const auto& sp = solution.spheres[i];
        Vec3 z = periodic ? torus_diff(at, sp.center, solution.L, 3) : (at - sp.center);
        if (z.norm() < sp.radius * (1 - 1e-12)) throw ConfigError("inside inclusion");
        if (periodic)
            acc += kernel->apply(z, solution.stresslets[i]);
        else
            acc += sphere_strain(at, sp.center, sp.radius, solution.ambient[i]);
    }
    return acc;
}

std::string to_json(const DipoleSolution& solution, std::uint64_t config_digest) {
    nlohmann::json j;
    j["config_digest"] = config_digest;
    j["L"] = solution.L;
    j["E"] = std::vector<double>(solution.E.a.begin(), solution.E.a.end());
    auto& st = j["stresslets"] = nlohmann::json::array();
    for (const auto& s : solution.stresslets)
        st.push_back(std::vector<double>(s.a.begin(), s.a.end()));
    j["iterations"] = solution.iterations;
    j["residual"] = solution.residual;
    if (!solution.kernel_metadata.empty())
        j["kernel"] = nlohmann::json::parse(solution.kernel_metadata);
    return j.dump(2);
}

}  // namespace susphom
