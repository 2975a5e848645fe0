#include "reflections.hpp"

#include <cmath>
#include <sstream>

#include "single_sphere.hpp"

namespace susphom {

DipoleSolution solve_freespace_reflections(const std::vector<SphereInclusion>& spheres,
                                           const Mat3& E, int order) {
    require_strain(E, "solve_freespace_reflections");
    if (order < 1) throw ConfigError("solve_freespace_reflections: order must be >= 1");
    const int n = static_cast<int>(spheres.size());
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
            double gap = (spheres[i].center - spheres[j].center).norm() - spheres[i].radius -
                         spheres[j].radius;
            if (gap <= 0) {
                std::ostringstream os;
                os << "overlap: spheres " << i << " and " << j;
                throw ConfigError(os.str());
            }
        }

    DipoleSolution sol;
    sol.spheres = spheres;
    sol.L = 0;
    sol.E = E;
    sol.ambient.assign(n, E);
    sol.stresslets.assign(n, Mat3{});

    std::vector<double> alpha(n);
    for (int i = 0; i < n; ++i) alpha[i] = stresslet_coefficient(spheres[i].radius);
    const double scale = std::max(E.norm(), 1e-300);

    std::vector<Mat3> next(n);
    double prev_res = std::numeric_limits<double>::infinity();
    int grow = 0;
    for (int it = 0; it < order; ++it) {
        for (int i = 0; i < n; ++i) {
            Mat3 a = E;
            for (int j = 0; j < n; ++j) {
                if (j == i) continue;
                a += sphere_strain(spheres[i].center, spheres[j].center, spheres[j].radius,
                                   sol.ambient[j]);
            }
            next[i] = a;
        }
        double res = 0;
        for (int i = 0; i < n; ++i) res = std::max(res, (next[i] - sol.ambient[i]).norm());
        res /= scale;
        sol.ambient = next;
        sol.iterations = it + 1;
        sol.residual = res;
        if (res < 1e-12) break;
        if (res > prev_res * (1 + 1e-12)) {
            if (++grow >= 5) throw NumericError("non-convergent: reflection iteration grows");
        } else {
            grow = 0;
        }
        prev_res = res;
    }
    for (int i = 0; i < n; ++i) sol.stresslets[i] = sol.ambient[i] * alpha[i];
    return sol;
}

double two_sphere_cluster_term(const Vec3& z, const Mat3& E, int order) {
    std::vector<SphereInclusion> pair = {{Vec3{}, 1.0}, {z, 1.0}};
    DipoleSolution both = solve_freespace_reflections(pair, E, order);
    const double alpha = stresslet_coefficient(1.0);
    // isolated sphere: S = alpha E after one reflection, exactly
    double single = alpha * E.ddot(E);
    return both.stresslets[0].ddot(E) + both.stresslets[1].ddot(E) - 2.0 * single;
}

}  // namespace susphom
