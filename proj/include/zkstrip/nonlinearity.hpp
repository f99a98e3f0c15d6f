#ifndef ZKSTRIP_NONLINEARITY_HPP
#define ZKSTRIP_NONLINEARITY_HPP

#include <memory>
#include <optional>
#include <string>

#include "zkstrip/transforms.hpp"
#include "zkstrip/weights.hpp"

namespace zk {

// Scalar flux g with derivative(s), growth-condition metadata, and primitive g*.
// Built-in fluxes: zero, linear (c u), zk (u^2/2), zk_shift (u + u^2/2), sine (sin u).
class Flux {
  public:
    Flux() = default;
    static Flux make(const std::string& name, double param = 1.0);

    double g(double u) const;
    double gp(double u) const;
    bool has_gpp() const { return has_gpp_; }
    double gpp(double u) const;

    // primitive int_0^u g; closed form for the polynomial/sine built-ins,
    // adaptive quadrature (rel tol 1e-12) otherwise
    double g_star(double u) const;

    double growth_b() const { return b_; }
    double growth_c() const { return c_; }
    const std::string& name() const { return name_; }
    double gp0() const { return gp(0.0); }

    // g1(u) = g(u) - g'(0) u (the Galilean-reduced flux of the dependence theorems)
    Flux galilean_reduced() const;

    // sampled growth checks: max over [-U,U] of |g'|/(1+|u|^b) and |g''|/(1+|u|^{b-1})
    double measure_growth_d1(double U, int samples) const;
    double measure_growth_d2(double U, int samples) const;

  private:
    std::string name_ = "zero";
    int kind_ = 0; // 0 zero, 1 linear, 2 zk, 3 zk_shift, 4 sine, 5 custom
    double param_ = 1.0;
    double b_ = 1.0, c_ = 1.0;
    bool has_gpp_ = true;
};

// g_h of the truncated problem: identical to g on |u| <= 1/h, derivative frozen at
// g'(2 sgn(u)/h) beyond |u| >= 2/h, blended through the eta cutoff in between.
class TruncatedFlux {
  public:
    TruncatedFlux(const Flux& base, double h);

    double g(double u) const;
    double gp(double u) const;
    double h() const { return h_; }
    const Flux& base() const { return base_; }

  private:
    static constexpr int kPanels = 128;
    Flux base_;
    double h_ = 1.0;
    double gh_hi_ = 0.0, gh_lo_ = 0.0;           // g_h at +-2/h
    double gp_hi_ = 0.0, gp_lo_ = 0.0;           // g'( +-2/h )
    std::vector<double> cum_pos_, cum_neg_;      // memoized bridge panels
    double bridge(double from, double to, int sign) const;
};

// Spectral x-derivative of the pointwise flux image, 3/2-dealiased in x.
// alias_tail is the relative coefficient mass beyond 2/3 of the kept band,
// a cheap monitor for y/aliasing stress; warning set above `alias_threshold`.
struct FluxDivergence {
    Field field;
    double alias_tail = 0.0;
    bool alias_warning = false;
};
FluxDivergence flux_x(const StripTransform& tr, const Field& u, const Flux& flux,
                      std::optional<double> trunc_h, double alias_threshold = 1e-8);

// Same, but starting and ending in coefficient space (solver path).
SpectralField flux_x_spectral(const StripTransform& tr, const SpectralField& sf, const Flux& flux,
                              std::optional<double> trunc_h, double* alias_tail = nullptr);

} // namespace zk

#endif
