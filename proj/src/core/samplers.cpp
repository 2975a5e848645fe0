#include "samplers.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <vector>

#include "rng.hpp"

namespace susphom {

namespace {

struct Proposal {
    Vec3 pos;
    double mark;
    std::uint64_t id;
};

std::vector<Proposal> propose_poisson(double lambda, double L, int d, std::uint64_t seed,
                                      bool with_marks) {
    RngStream count_stream(seed, StreamPurpose::kProposalCount, 0);
    const double mean = lambda * std::pow(L, d);
    const std::uint64_t n = count_stream.poisson(mean);
    std::vector<Proposal> props;
    props.reserve(n);
    for (std::uint64_t i = 0; i < n; ++i) {
        RngStream ps(seed, StreamPurpose::kProposalPoint, i);
        Vec3 p{ps.uniform(-L / 2, L / 2), ps.uniform(-L / 2, L / 2),
               d == 3 ? ps.uniform(-L / 2, L / 2) : 0.0};
        double mark = 0;
        if (with_marks) {
            RngStream ms(seed, StreamPurpose::kProposalMark, i);
            mark = ms.next_double();
        }
        props.push_back({p, mark, i});
    }
    return props;
}

}  // namespace

PointConfiguration sample_poisson(double lambda, double L, int d, std::uint64_t seed) {
    if (lambda < 0) throw ConfigError("sample_poisson: lambda must be >= 0");
    if (L <= 0) throw ConfigError("sample_poisson: L must be positive");
    PointConfiguration cfg;
    cfg.d = d;
    cfg.L = L;
    cfg.r_hc = 0;
    cfg.seed = {seed, 0};
    for (const auto& pr : propose_poisson(lambda, L, d, seed, false)) cfg.points.push_back(pr.pos);
    return cfg;
}

PointConfiguration sample_hardcore_poisson(double lambda, double r_hc, double L, int d,
                                           std::uint64_t seed) {
    if (lambda < 0) throw ConfigError("sample_hardcore_poisson: lambda must be >= 0");
    if (r_hc < 0) throw ConfigError("sample_hardcore_poisson: r_hc must be >= 0");
    if (L <= 4 * r_hc) throw ConfigError("sample_hardcore_poisson: need L > 4 r_hc");
    if (r_hc > 0 && lambda * std::pow(2 * r_hc, d) > kHardcoreSaturation) {
        std::ostringstream os;
        os << "over-dense request: lambda*(2 r_hc)^d = " << lambda * std::pow(2 * r_hc, d)
           << " exceeds saturation bound " << kHardcoreSaturation;
        throw ConfigError(os.str());
    }

    PointConfiguration cfg;
    cfg.d = d;
    cfg.L = L;
    cfg.r_hc = r_hc;
    cfg.seed = {seed, 0};

    auto props = propose_poisson(lambda, L, d, seed, r_hc > 0);
    if (r_hc == 0) {
        for (const auto& pr : props) cfg.points.push_back(pr.pos);
        return cfg;
    }

    // mark order with deterministic tie-break on proposal id
    std::sort(props.begin(), props.end(), [](const Proposal& a, const Proposal& b) {
        return a.mark < b.mark || (a.mark == b.mark && a.id < b.id);
    });

    const double dmin = 2 * r_hc;
    const double dmin2 = dmin * dmin;
    // survivor cell grid
    const double cell = std::min(dmin, L / 4);
    const int n = std::max(1, static_cast<int>(std::floor(L / cell)));
    const int nz = (d == 2) ? 1 : n;
    std::vector<std::vector<int>> cells(static_cast<std::size_t>(n) * n * nz);
    std::vector<Vec3> kept;
    auto coord = [&](double v) {
        return std::clamp(static_cast<int>(std::floor((v / L + 0.5) * n)), 0, n - 1);
    };
    auto cell_of = [&](const Vec3& p) {
        return (static_cast<std::size_t>(coord(p.x)) * n + coord(p.y)) * nz +
               (d == 2 ? 0 : coord(p.z));
    };
    const int reach = std::min(static_cast<int>(std::ceil(dmin * n / L)), n / 2 + 1);

    for (const auto& pr : props) {
        bool blocked = false;
        const int ix = coord(pr.pos.x), iy = coord(pr.pos.y), iz = d == 2 ? 0 : coord(pr.pos.z);
        const int zreach = (d == 2) ? 0 : reach;
        for (int dx = -reach; dx <= reach && !blocked; ++dx)
            for (int dy = -reach; dy <= reach && !blocked; ++dy)
                for (int dz = -zreach; dz <= zreach && !blocked; ++dz) {
                    std::size_t c =
                        (static_cast<std::size_t>((ix + dx + n) % n) * n + (iy + dy + n) % n) * nz +
                        (d == 2 ? 0 : (iz + dz + nz) % nz);
                    for (int id : cells[c]) {
                        if (torus_diff(pr.pos, kept[id], L, d).norm2() < dmin2) {
                            blocked = true;
                            break;
                        }
                    }
                }
        if (!blocked) {
            kept.push_back(pr.pos);
            cells[cell_of(pr.pos)].push_back(static_cast<int>(kept.size()) - 1);
        }
    }
    cfg.points = std::move(kept);
    return cfg;
}

PointConfiguration sample_example26(double lambda, double beta, double L, int d,
                                    std::uint64_t seed) {
    if (beta < 0 || beta > 1) throw ConfigError("sample_example26: beta outside [0,1]");
    if (lambda <= 0 || lambda * std::pow(6.0, d) > kExample26Bound)
        throw ConfigError("sample_example26: lambda out of the dilute range");
    const double parent_rhc = 6.0;
    PointConfiguration parents = sample_hardcore_poisson(lambda, parent_rhc, L, d, seed);

    PointConfiguration cfg = parents;
    const double p_sat = std::pow(lambda, beta);
    for (std::size_t i = 0; i < parents.points.size(); ++i) {
        RngStream flag(seed, StreamPurpose::kSatelliteFlag, i);
        if (flag.next_double() >= p_sat) continue;
        RngStream dir(seed, StreamPurpose::kSatelliteDir, i);
        Vec3 y;
        if (d == 3) {
            // uniform in the annulus B_4 \ B_3: direction x radius with r^2 density
            Vec3 u = dir.unit_vector3();
            double t = dir.next_double();
            double r = std::cbrt(27.0 + t * (64.0 - 27.0));
            y = u * r;
        } else {
            double ang = dir.uniform(0, 2 * kPi);
            double t = dir.next_double();
            double r = std::sqrt(9.0 + t * (16.0 - 9.0));
            y = Vec3{std::cos(ang), std::sin(ang), 0} * r;
        }
        cfg.points.push_back(torus_wrap(parents.points[i] + y, L, d));
    }
    cfg.r_hc = 0;  // satellites break the parent hardcore guarantee
    return cfg;
}

PointConfiguration SamplerSpec::sample(std::uint64_t seed) const {
    switch (kind) {
        case Kind::kPoisson:
            return sample_poisson(lambda, L, d, seed);
        case Kind::kHardcorePoisson:
            return sample_hardcore_poisson(lambda, r_hc, L, d, seed);
        case Kind::kExample26:
            return sample_example26(lambda, beta, L, d, seed);
    }
    throw ConfigError("unknown sampler kind");
}

std::string SamplerSpec::describe() const {
    std::ostringstream os;
    switch (kind) {
        case Kind::kPoisson:
            os << "poisson(lambda=" << lambda;
            break;
        case Kind::kHardcorePoisson:
            os << "hardcore_poisson(lambda=" << lambda << ",r_hc=" << r_hc;
            break;
        case Kind::kExample26:
            os << "example26(lambda=" << lambda << ",beta=" << beta;
            break;
    }
    os << ",L=" << L << ",d=" << d << ")";
    return os.str();
}

}  // namespace susphom
