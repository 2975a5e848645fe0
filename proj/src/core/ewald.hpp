#pragma once

#include <array>
#include <string>
#include <vector>

#include "strain.hpp"

namespace susphom {

// Periodic strain propagator on the torus of side L, assembled by Ewald
// splitting of the Fourier representation |k|^{-2}(Id - khat khat) over
// k in (2 pi / L) Z^3 \ {0}; the excluded k = 0 mode makes every evaluation
// zero-mean over the cell. Real-space part is the screened biharmonic
//   g(r) = r erfc(xi r)/(8 pi) - exp(-xi^2 r^2)/(8 pi^{3/2} xi),
// Fourier weights carry the factor (1 + k^2/(4 xi^2)) e^{-k^2/(4 xi^2)}.
struct EwaldParams {
    double L = 0;
    double accuracy = 1e-8;
    double xi = 0;
    double r_cut = 0;
    double k_cut = 0;
    bool tabulated = false;
    int table_n = 0;
};

class StrainKernelEvaluator {
  public:
    // accuracy in (1e-14, 1e-4); tabulated mode builds an interpolation table
    // of the smooth periodic correction for fast pairwise evaluation.
    StrainKernelEvaluator(double L, double accuracy, bool tabulated = false, int table_n = 40);

    double L() const { return p_.L; }
    const EwaldParams& params() const { return p_; }

    // strain induced at separation z by a unit stresslet S (nearest-image reduced)
    Mat3 apply(const Vec3& z, const Mat3& S) const;
    Mat3 apply_exact(const Vec3& z, const Mat3& S) const;

    // E : G_L(z) : Ep
    double contract(const Vec3& z, const Mat3& E, const Mat3& Ep) const;

    // regularized self term lim_{z->0} (G_L - G)(z) as an operator action
    Mat3 self_apply(const Mat3& S) const;

    // accuracy of the internal cross-check (splitting-parameter independence
    // at the built-in test offsets)
    double measured_accuracy() const { return measured_accuracy_; }

    std::string metadata_json() const;

  private:
    Mat3 real_space_sum(const Vec3& z, const Mat3& S, double xi, double r_cut) const;
    Mat3 fourier_sum(const Vec3& z, const Mat3& S,
                     const std::vector<struct EwaldMode>& modes) const;
    Mat3 correction_exact(const Vec3& z, const Mat3& S) const;
    Mat3 interpolate_correction(const Vec3& z, const Mat3& S) const;
    void build_table();
    void self_check();

    EwaldParams p_;
    std::vector<struct EwaldMode> modes_;      // half lattice, cos symmetry
    std::array<std::array<double, 5>, 5> self_{};
    std::vector<double> table_;                // 15 sym components per node
    int tn_ = 0;
    double measured_accuracy_ = 0;
};

struct EwaldMode {
    Vec3 k;
    double w;
};

}  // namespace susphom
