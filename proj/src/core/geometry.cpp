#include "geometry.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <json.hpp>

#include "rng.hpp"

namespace susphom {

double PointConfiguration::volume() const { return std::pow(L, d); }

double PeriodicConfiguration::volume_fraction() const {
    double v = 0;
    for (const auto& inc : inclusions) {
        v += (d == 3) ? (4.0 / 3.0) * kPi * std::pow(inc.radius, 3)
                      : kPi * inc.radius * inc.radius;
    }
    return v / std::pow(L, d);
}

Vec3 torus_wrap(Vec3 v, double L, int d) {
    for (int i = 0; i < d; ++i) {
        double c = v[i] - L * std::floor(v[i] / L + 0.5);
        if (c >= L / 2) c -= L;  // floor rounding edge
        v[i] = c;
    }
    if (d == 2) v.z = 0;
    return v;
}

Vec3 torus_diff(const Vec3& a, const Vec3& b, double L, int d) {
    return torus_wrap(a - b, L, d);
}

double torus_distance(const Vec3& a, const Vec3& b, double L, int d) {
    return torus_diff(a, b, L, d).norm();
}

namespace {

// Uniform cell grid for neighbor queries on the torus.
class CellGrid {
  public:
    CellGrid(double L, int d, double cell_min) : L_(L), d_(d) {
        n_ = std::max(1, static_cast<int>(std::floor(L / cell_min)));
        if (d_ == 2) nz_ = 1; else nz_ = n_;
        cells_.resize(static_cast<std::size_t>(n_) * n_ * nz_);
    }
    int cell_index(const Vec3& p) const {
        int ix = coord(p.x), iy = coord(p.y), iz = (d_ == 2) ? 0 : coord(p.z);
        return (ix * n_ + iy) * nz_ + iz;
    }
    void insert(const Vec3& p, int id) { cells_[cell_index(p)].push_back(id); }

    template <typename F>
    void for_neighbors(const Vec3& p, double radius, F&& fn) const {
        int reach = static_cast<int>(std::ceil(radius * n_ / L_));
        reach = std::min(reach, n_ / 2 + 1);
        int ix = coord(p.x), iy = coord(p.y), iz = (d_ == 2) ? 0 : coord(p.z);
        int zreach = (d_ == 2) ? 0 : reach;
        for (int dx = -reach; dx <= reach; ++dx)
            for (int dy = -reach; dy <= reach; ++dy)
                for (int dz = -zreach; dz <= zreach; ++dz) {
                    int jx = (ix + dx % n_ + n_) % n_;
                    int jy = (iy + dy % n_ + n_) % n_;
                    int jz = (d_ == 2) ? 0 : (iz + dz % nz_ + nz_) % nz_;
                    for (int id : cells_[(static_cast<std::size_t>(jx) * n_ + jy) * nz_ + jz])
                        fn(id);
                }
    }

  private:
    int coord(double v) const {
        int c = static_cast<int>(std::floor((v / L_ + 0.5) * n_));
        return std::clamp(c, 0, n_ - 1);
    }
    double L_;
    int d_;
    int n_;
    int nz_;
    std::vector<std::vector<int>> cells_;
};

}  // namespace

void validate_hardcore(const PointConfiguration& cfg) {
    if (cfg.r_hc <= 0 || cfg.points.size() < 2) return;
    const double dmin = 2.0 * cfg.r_hc;
    CellGrid grid(cfg.L, cfg.d, std::min(dmin, cfg.L / 2));
    for (std::size_t i = 0; i < cfg.points.size(); ++i)
        grid.insert(cfg.points[i], static_cast<int>(i));
    for (std::size_t i = 0; i < cfg.points.size(); ++i) {
        bool bad = false;
        grid.for_neighbors(cfg.points[i], dmin, [&](int j) {
            if (static_cast<std::size_t>(j) <= i) return;
            if (torus_distance(cfg.points[i], cfg.points[j], cfg.L, cfg.d) < dmin * (1 - 1e-12))
                bad = true;
        });
        if (bad) throw CheckError("hardcore invariant violated");
    }
}

void validate_periodic(const PeriodicConfiguration& cfg) {
    const double window = cfg.L - 2.0 * (1.0 + cfg.delta);
    if (window <= 0) throw ConfigError("periodize: box too small for retention window");
    for (const auto& inc : cfg.inclusions) {
        if (inc.radius <= 0) throw ConfigError("inclusion radius must be positive");
        if (inc.radius > 1.0 + 1e-12) throw ConfigError("radius exceeds unit ball");
        for (int i = 0; i < cfg.d; ++i)
            if (std::abs(inc.center[i]) > window / 2 + 1e-12)
                throw CheckError("inclusion center outside retention window");
    }
    double cap = kCapacityConstant * std::pow(cfg.L / cfg.delta, cfg.d);
    if (static_cast<double>(cfg.inclusions.size()) > cap)
        throw CheckError("capacity guard exceeded");
    for (std::size_t i = 0; i < cfg.inclusions.size(); ++i)
        for (std::size_t j = i + 1; j < cfg.inclusions.size(); ++j) {
            const auto& a = cfg.inclusions[i];
            const auto& b = cfg.inclusions[j];
            double gap = torus_distance(a.center, b.center, cfg.L, cfg.d) - a.radius - b.radius;
            if (gap <= 2.0 * cfg.delta) {
                std::ostringstream os;
                os << "separation violation: inclusions " << i << " and " << j
                   << " have surface gap " << gap << " <= 2*delta = " << 2.0 * cfg.delta;
                throw CheckError(os.str());
            }
        }
}

PointConfiguration dilate(const PointConfiguration& cfg, double ell) {
    if (ell < 1.0) throw ConfigError("dilate: factor must be >= 1");
    if (cfg.L * ell > 1e12) throw NumericError("dilate: box size overflow guard");
    PointConfiguration out = cfg;
    out.L = cfg.L * ell;
    out.r_hc = cfg.r_hc * ell;
    for (auto& p : out.points) p = torus_wrap(p * ell, out.L, out.d);
    return out;
}

PointConfiguration bernoulli_delete(const PointConfiguration& cfg, double p,
                                    std::uint64_t seed) {
    if (p < 0.0 || p > 1.0) throw ConfigError("bernoulli_delete: p outside [0,1]");
    PointConfiguration out = cfg;
    out.points.clear();
    out.seed.master = seed;
    for (std::size_t i = 0; i < cfg.points.size(); ++i) {
        RngStream s(seed, StreamPurpose::kDeletion, i);
        if (s.next_double() < p) out.points.push_back(cfg.points[i]);
    }
    return out;
}

PeriodicConfiguration periodize(const PointConfiguration& cfg,
                                const std::vector<double>& radii, double L, double delta) {
    if (delta <= 0) throw ConfigError("periodize: delta must be positive");
    if (radii.empty()) throw ConfigError("periodize: need at least one radius");
    if (radii.size() != 1 && radii.size() != cfg.points.size())
        throw ConfigError("periodize: radii list must be shared or per-point");
    for (double r : radii) {
        if (r <= 0) throw ConfigError("periodize: radius must be positive");
        if (r > 1.0 + 1e-12) throw ConfigError("radius exceeds unit ball");
    }

    PeriodicConfiguration out;
    out.d = cfg.d;
    out.L = L;
    out.delta = delta;
    const double window = L - 2.0 * (1.0 + delta);
    if (window <= 0) throw ConfigError("periodize: box too small for retention window");
    for (std::size_t i = 0; i < cfg.points.size(); ++i) {
        Vec3 p = torus_wrap(cfg.points[i], L, cfg.d);
        bool inside = true;
        for (int k = 0; k < cfg.d; ++k)
            if (std::abs(p[k]) > window / 2) inside = false;
        if (!inside) continue;
        double r = (radii.size() == 1) ? radii[0] : radii[i];
        out.inclusions.push_back({p, r});
    }
    validate_periodic(out);
    return out;
}

// --- JSON ---------------------------------------------------------------

namespace {
constexpr int kConfigVersion = 1;
}

std::string to_json(const PointConfiguration& cfg) {
    nlohmann::json j;
    j["version"] = kConfigVersion;
    j["d"] = cfg.d;
    j["L"] = cfg.L;
    j["r_hc"] = cfg.r_hc;
    j["seed"] = {{"master", cfg.seed.master}, {"stream", cfg.seed.stream}};
    auto& pts = j["points"] = nlohmann::json::array();
    for (const auto& p : cfg.points) {
        if (cfg.d == 2)
            pts.push_back({p.x, p.y});
        else
            pts.push_back({p.x, p.y, p.z});
    }
    return j.dump(2);
}

PointConfiguration point_configuration_from_json(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const std::exception& e) {
        throw ConfigError(std::string("configuration JSON parse failure: ") + e.what());
    }
    if (!j.contains("version") || j["version"].get<int>() != kConfigVersion)
        throw ConfigError("configuration JSON: unsupported version");
    PointConfiguration cfg;
    cfg.d = j.at("d").get<int>();
    if (cfg.d != 2 && cfg.d != 3) throw ConfigError("configuration JSON: d must be 2 or 3");
    cfg.L = j.at("L").get<double>();
    cfg.r_hc = j.at("r_hc").get<double>();
    cfg.seed.master = j.at("seed").at("master").get<std::uint64_t>();
    cfg.seed.stream = j.at("seed").value("stream", 0ull);
    for (const auto& p : j.at("points")) {
        Vec3 v{p.at(0).get<double>(), p.at(1).get<double>(),
               cfg.d == 3 ? p.at(2).get<double>() : 0.0};
        cfg.points.push_back(v);
    }
    return cfg;
}

std::string to_json(const PeriodicConfiguration& cfg) {
    nlohmann::json j;
    j["version"] = kConfigVersion;
    j["d"] = cfg.d;
    j["L"] = cfg.L;
    j["delta"] = cfg.delta;
    auto& inc = j["inclusions"] = nlohmann::json::array();
    for (const auto& s : cfg.inclusions)
        inc.push_back({{"center", {s.center.x, s.center.y, s.center.z}}, {"radius", s.radius}});
    return j.dump(2);
}

PeriodicConfiguration periodic_configuration_from_json(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const std::exception& e) {
        throw ConfigError(std::string("configuration JSON parse failure: ") + e.what());
    }
    PeriodicConfiguration cfg;
    cfg.d = j.at("d").get<int>();
    cfg.L = j.at("L").get<double>();
    cfg.delta = j.at("delta").get<double>();
    for (const auto& s : j.at("inclusions")) {
        const auto& c = s.at("center");
        cfg.inclusions.push_back(
            {{c.at(0).get<double>(), c.at(1).get<double>(), c.at(2).get<double>()},
             s.at("radius").get<double>()});
    }
    validate_periodic(cfg);
    return cfg;
}

}  // namespace susphom
