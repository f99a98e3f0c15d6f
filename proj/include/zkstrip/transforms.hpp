#ifndef ZKSTRIP_TRANSFORMS_HPP
#define ZKSTRIP_TRANSFORMS_HPP

#include <memory>

#include "zkstrip/eigenbasis.hpp"
#include "zkstrip/field.hpp"

namespace zk {

// Forward/inverse transforms between nodal fields and (xi_j, l) coefficients,
// plus spectral differentiation. One instance per (grid, case); owns FFTW plans.
//
// Conventions:
//   u(x,y) = sum_j sum_l coef(j,l) e^{i xi_j x} psi_l(y),  xi_j = pi j / X,
// with coefficients of real fields conjugate-symmetric in j. The synthesis /
// analysis pair is exactly inverse on the grid.
class StripTransform {
  public:
    StripTransform(const Grid& grid, BoundaryCase bc);
    ~StripTransform();

    StripTransform(const StripTransform&) = delete;
    StripTransform& operator=(const StripTransform&) = delete;

    const Grid& grid() const { return grid_; }
    BoundaryCase bc() const { return bc_; }
    const EigenBasis& basis() const { return *basis_; }

    SpectralField to_spectral(const Field& f) const;

    // Throws Errc::non_real_synthesis if the imaginary residue exceeds rel_tol.
    // The measured relative residue is written to *imag_residual when provided.
    Field from_spectral(const SpectralField& sf, double* imag_residual = nullptr,
                        double rel_tol = 1e-9) const;

    // coef *= (i xi_j)^order_x, and *= (-lambda_l) if apply_yy.
    // The x-Nyquist mode is zeroed whenever order_x >= 1.
    SpectralField derivative(const SpectralField& sf, int order_x, bool apply_yy) const;

    // First y-derivative, synthesized pointwise from psi_l' (exact, leaves the basis).
    Field deriv_y(const SpectralField& sf) const;
    Field deriv_y(const Field& f) const;
    Field deriv_x(const Field& f) const;

    // Exact x-translation u(x) -> u(x - s) on the periodic window.
    SpectralField shift_x(const SpectralField& sf, double s) const;

    // Dealiasing support: synthesis on a 3/2-padded x grid and the matching
    // truncating analysis. Padded fields use a grid with nx = padded_nx().
    int padded_nx() const { return mx_; }
    Field to_physical_padded(const SpectralField& sf) const;
    SpectralField from_physical_padded(const Field& padded) const;

    // y-analysis / synthesis only (nodal values <-> per-x mode coefficients).
    void y_analyze(const double* values, double* modes, int rows) const;
    void y_synthesize(const double* modes, double* values, int rows) const;

    double y_quad_weight() const { return basis_->quad_weight(); }

  private:
    Grid grid_;
    BoundaryCase bc_;
    std::unique_ptr<EigenBasis> basis_;
    int mx_; // padded x size

    struct Plans;
    std::unique_ptr<Plans> plans_;
};

} // namespace zk

#endif
