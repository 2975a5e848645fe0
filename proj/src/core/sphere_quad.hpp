#pragma once

#include <vector>

#include "common.hpp"

namespace susphom {

// Quadrature on the unit sphere, exact for spherical harmonics up to the
// requested degree. Built as a product of Gauss-Legendre in cos(theta) and an
// equiangular rule in phi; node sets for orders 17 and 29 are the embedded
// pair used for convergence checks.
struct SphereQuadrature {
    std::vector<Vec3> nodes;
    std::vector<double> weights;  // sum to 4*pi

    static const SphereQuadrature& order17();
    static const SphereQuadrature& order29();
    static SphereQuadrature build(int order);

    template <typename F>
    double integrate(F&& f) const {
        KahanSum s;
        for (std::size_t i = 0; i < nodes.size(); ++i) s.add(weights[i] * f(nodes[i]));
        return s.value();
    }
};

// Gauss-Legendre nodes/weights on [-1,1], Newton iteration on Legendre P_n.
void gauss_legendre(int n, std::vector<double>& nodes, std::vector<double>& weights);

}  // namespace susphom
