#ifndef ZKSTRIP_WEIGHTS_HPP
#define ZKSTRIP_WEIGHTS_HPP

#include <functional>
#include <string>

namespace zk {

// Smooth step: eta = 0 on x<=0, 1 on x>=1, eta(x) + eta(1-x) = 1 by construction.
// Built from the bump sigma(x) = exp(-1/x); derivatives up to third order are closed form.
class Cutoff {
  public:
    double eta(double x) const;
    double d1(double x) const;
    double d2(double x) const;
    double d3(double x) const;
};

// Weight functions for the weighted norms: exponential tail e^{beta x} for x <= -1,
// polynomial growth (1+x)^alpha (or 2-(1+x)^{-1/2} when alpha = 0) for x >= 0,
// and a smooth increasing blend on (-1, 0). Arbitrary smooth positive weights
// (constants, shifts, sums used by the energy estimates) fit the same interface.
class Weight {
  public:
    Weight() = default;

    // rho_{alpha,beta}; rejects parameter pairs whose bridge is not strictly increasing.
    static Weight rho(double alpha, double beta);
    static Weight one();
    static Weight one_plus_rho01(double x0); // 1 + rho_{0,1}(x - x0)
    Weight shifted(double x0) const;         // w(x - x0)

    double operator()(double x) const { return f0_(x); }
    double d1(double x) const { return f1_(x); }
    double d2(double x) const { return f2_(x); }
    double d3(double x) const { return f3_(x); }

    double alpha() const { return alpha_; }
    double beta() const { return beta_; }
    const std::string& name() const { return name_; }

    struct Admissibility {
        double c1, c2, c3; // sup |rho^{(j)}| / rho
        double c_d1;       // sup rho' / rho
    };
    Admissibility measure(double x_lo, double x_hi, int samples) const;

    // Quadrature hints: where the weight varies fast (the blend interval) and
    // the scale of its sharpest feature. No bridge: has_bridge() is false.
    bool has_bridge() const { return has_bridge_; }
    double bridge_lo() const { return bridge_lo_; }
    double bridge_hi() const { return bridge_hi_; }
    double feature_scale() const { return feature_; }

  private:
    std::function<double(double)> f0_, f1_, f2_, f3_;
    double alpha_ = 0.0, beta_ = 0.0;
    std::string name_;
    bool has_bridge_ = false;
    double bridge_lo_ = 0.0, bridge_hi_ = 0.0, feature_ = 1.0;
};

} // namespace zk

#endif
