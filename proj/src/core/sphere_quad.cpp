#include "sphere_quad.hpp"

#include <cmath>

namespace susphom {

void gauss_legendre(int n, std::vector<double>& nodes, std::vector<double>& weights) {
    nodes.assign(n, 0.0);
    weights.assign(n, 0.0);
    for (int i = 0; i < (n + 1) / 2; ++i) {
        // Chebyshev initial guess
        double x = std::cos(kPi * (i + 0.75) / (n + 0.5));
        double pp = 0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = x;
            for (int k = 2; k <= n; ++k) {
                double p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            pp = n * (x * p1 - p0) / (x * x - 1.0);
            double dx = p1 / pp;
            x -= dx;
            if (std::abs(dx) < 1e-15) break;
        }
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        double w = 2.0 / ((1.0 - x * x) * pp * pp);
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
}

SphereQuadrature SphereQuadrature::build(int order) {
    // exactness: polar 2*ntheta-1 >= order, azimuthal nphi-1 >= order
    const int ntheta = (order + 2) / 2;
    const int nphi = order + 1 + (order % 2 == 0 ? 1 : 0);
    std::vector<double> ct, wt;
    gauss_legendre(ntheta, ct, wt);
    SphereQuadrature q;
    q.nodes.reserve(static_cast<std::size_t>(ntheta) * nphi);
    q.weights.reserve(q.nodes.capacity());
    const double wphi = 2.0 * kPi / nphi;
    for (int i = 0; i < ntheta; ++i) {
        const double c = ct[i];
        const double s = std::sqrt(std::max(0.0, 1.0 - c * c));
        for (int j = 0; j < nphi; ++j) {
            const double phi = wphi * (j + 0.5);
            q.nodes.push_back({s * std::cos(phi), s * std::sin(phi), c});
            q.weights.push_back(wt[i] * wphi);
        }
    }
    return q;
}

const SphereQuadrature& SphereQuadrature::order17() {
    static const SphereQuadrature q = build(17);
    return q;
}

const SphereQuadrature& SphereQuadrature::order29() {
    static const SphereQuadrature q = build(29);
    return q;
}

}  // namespace susphom
