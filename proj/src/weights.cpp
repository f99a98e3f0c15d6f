#include "zkstrip/weights.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <memory>
#include <vector>

#include "zkstrip/error.hpp"

namespace zk {

namespace {

// sigma(x) = exp(-1/x) for x > 0, else 0, with derivatives.
struct Bump {
    double v, d1, d2, d3;
};

Bump bump(double x) {
    if (x <= 0.0) return {0.0, 0.0, 0.0, 0.0};
    double s = std::exp(-1.0 / x);
    if (s == 0.0) return {0.0, 0.0, 0.0, 0.0};
    double x2 = x * x, x3 = x2 * x, x4 = x2 * x2, x5 = x4 * x, x6 = x3 * x3;
    return {s, s / x2, s * (1.0 / x4 - 2.0 / x3), s * (1.0 / x6 - 6.0 / x5 + 6.0 / x4)};
}

} // namespace

double Cutoff::eta(double x) const {
    if (x <= 0.0) return 0.0;
    if (x >= 1.0) return 1.0;
    Bump a = bump(x), b = bump(1.0 - x);
    return a.v / (a.v + b.v);
}

double Cutoff::d1(double x) const {
    if (x <= 0.0 || x >= 1.0) return 0.0;
    Bump a = bump(x), b0 = bump(1.0 - x);
    double b = b0.v, bp = -b0.d1;
    double D = a.v + b;
    return (a.d1 * b - a.v * bp) / (D * D);
}

double Cutoff::d2(double x) const {
    if (x <= 0.0 || x >= 1.0) return 0.0;
    Bump A = bump(x), B = bump(1.0 - x);
    double b = B.v, bp = -B.d1, bpp = B.d2;
    double D = A.v + b, Dp = A.d1 + bp;
    double N1 = A.d1 * b - A.v * bp;
    double N1p = A.d2 * b - A.v * bpp;
    return (N1p * D - 2.0 * N1 * Dp) / (D * D * D);
}

double Cutoff::d3(double x) const {
    if (x <= 0.0 || x >= 1.0) return 0.0;
    Bump A = bump(x), B = bump(1.0 - x);
    double b = B.v, bp = -B.d1, bpp = B.d2, bppp = -B.d3;
    double D = A.v + b, Dp = A.d1 + bp, Dpp = A.d2 + bpp;
    double N1 = A.d1 * b - A.v * bp;
    double N1p = A.d2 * b - A.v * bpp;
    double N1pp = A.d3 * b + A.d2 * bp - A.d1 * bpp - A.v * bppp;
    double P = N1p * D - 2.0 * N1 * Dp;
    double Pp = N1pp * D - N1p * Dp - 2.0 * N1 * Dpp;
    return (Pp * D - 3.0 * P * Dp) / (D * D * D * D);
}

namespace {

// Right tail R(x): (1+x)^alpha for alpha > 0, else 2 - (1+x)^{-1/2}. Valid for x > -1.
struct Tail {
    double v, d1, d2, d3;
};

Tail right_tail(double alpha, double x) {
    double b = 1.0 + x;
    if (alpha > 0.0) {
        double p = std::pow(b, alpha);
        return {p, alpha * p / b, alpha * (alpha - 1.0) * p / (b * b),
                alpha * (alpha - 1.0) * (alpha - 2.0) * p / (b * b * b)};
    }
    double q = std::pow(b, -0.5);
    return {2.0 - q, 0.5 * q / b, -0.75 * q / (b * b), 1.875 * q / (b * b * b)};
}

// d2/d1 and d(d2/d1)/dx of the right tail (finite for x > -1).
void tail_log_ratios(double alpha, double x, double& r21, double& r21p) {
    double b = 1.0 + x;
    if (alpha > 0.0) {
        r21 = (alpha - 1.0) / b;
        r21p = -(alpha - 1.0) / (b * b);
    } else {
        r21 = -1.5 / b;
        r21p = 1.5 / (b * b);
    }
}

constexpr std::array<double, 4> gl4_nodes = {0.069431844202973712, 0.33000947820757187,
                                             0.66999052179242813, 0.93056815579702629};
constexpr std::array<double, 4> gl4_weights = {0.1739274225687269, 0.3260725774312731,
                                               0.3260725774312731, 0.1739274225687269};

// The bridge on (-1,0): rho' = q(x) e^{s w(x)} with
//   q = geometric blend of the tail derivatives (always positive),
//   w = flat-ended positive bump, s solved so the integral matches rho(0)-rho(-1).
// This keeps rho strictly increasing and C-infinity across both seams.
struct RhoBridge {
    double alpha, beta, s;
    double kappa = 4.0; // steepness of the correction window; raised until solvable
    int panels = 512;
    std::vector<double> cum; // cumulative integral of rho' over [-1, x_k]

    double log_q(double x) const {
        Cutoff eta;
        double th = eta.eta(x + 1.0);
        double lE = std::log(beta) + beta * x;
        if (th == 0.0) return lE;
        Tail R = right_tail(alpha, x);
        double lR = std::log(R.d1);
        return (1.0 - th) * lE + th * lR;
    }

    // Flat-ended window eta(kappa(x+1)) eta(-kappa x); 1 over most of the bridge.
    double wfun(double x) const {
        Cutoff eta;
        return eta.eta(kappa * (x + 1.0)) * eta.eta(-kappa * x);
    }

    double deriv(double x) const { return std::exp(log_q(x) + s * wfun(x)); }

    // A = rho''/rho' and its derivative.
    void log_derivs(double x, double& A, double& Ap) const {
        Cutoff eta;
        double th = eta.eta(x + 1.0), thp = eta.d1(x + 1.0), thpp = eta.d2(x + 1.0);
        double lE = std::log(beta) + beta * x;
        double r21 = 0.0, r21p = 0.0, lR = 0.0;
        if (th > 0.0) {
            Tail R = right_tail(alpha, x);
            lR = std::log(R.d1);
            tail_log_ratios(alpha, x, r21, r21p);
        }
        double qlq = thp * (lR - lE) + (1.0 - th) * beta + th * r21;
        double qlqp = thpp * (lR - lE) + thp * (r21 - beta) - thp * beta + thp * r21 + th * r21p;
        double a = kappa * (x + 1.0), b = -kappa * x;
        double wp = kappa * (eta.d1(a) * eta.eta(b) - eta.eta(a) * eta.d1(b));
        double wpp = kappa * kappa *
                     (eta.d2(a) * eta.eta(b) - 2.0 * eta.d1(a) * eta.d1(b) + eta.eta(a) * eta.d2(b));
        A = qlq + s * wp;
        Ap = qlqp + s * wpp;
    }

    double integral(double a, double b) const {
        double acc = 0.0;
        for (size_t i = 0; i < gl4_nodes.size(); ++i)
            acc += gl4_weights[i] * deriv(a + (b - a) * gl4_nodes[i]);
        return acc * (b - a);
    }

    double total(double sv) {
        s = sv;
        double acc = 0.0;
        for (int k = 0; k < panels; ++k)
            acc += integral(-1.0 + k / double(panels), -1.0 + (k + 1) / double(panels));
        return acc;
    }

    void solve(double target) {
        // F(s) = int rho' - target is increasing in s; widen kappa until bracketed, bisect.
        const double lo0 = -200.0, hi0 = 200.0;
        bool bracketed = false;
        for (double k : {4.0, 8.0, 16.0, 32.0, 64.0, 128.0, 256.0, 512.0, 1024.0}) {
            kappa = k;
            if (total(lo0) <= target && total(hi0) >= target) {
                bracketed = true;
                break;
            }
        }
        if (!bracketed) fail(Errc::internal, "weight bridge: correction out of range");
        double lo = lo0, hi = hi0;
        for (int it = 0; it < 120; ++it) {
            double mid = 0.5 * (lo + hi);
            (total(mid) <= target ? lo : hi) = mid;
        }
        s = 0.5 * (lo + hi);
        cum.assign(panels + 1, 0.0);
        for (int k = 0; k < panels; ++k)
            cum[k + 1] = cum[k] + integral(-1.0 + k / double(panels), -1.0 + (k + 1) / double(panels));
    }

    double value(double x) const {
        double left = std::exp(-beta);
        double t = (x + 1.0) * panels;
        int k = std::min(panels - 1, std::max(0, int(t)));
        double x_k = -1.0 + k / double(panels);
        return left + cum[k] + integral(x_k, x);
    }
};

} // namespace

Weight Weight::rho(double alpha, double beta) {
    if (alpha < 0.0 || alpha > 4.0) fail(Errc::invalid_argument, "weight: alpha must lie in [0,4]");
    if (!(beta > 0.0)) fail(Errc::invalid_argument, "weight: beta must be > 0");

    auto bridge = std::make_shared<RhoBridge>();
    bridge->alpha = alpha;
    bridge->beta = beta;
    bridge->solve(1.0 - std::exp(-beta)); // rho(0) - rho(-1)

    auto piece = [alpha, beta, bridge](double x, int order) -> double {
        if (x <= -1.0) {
            double e = std::exp(beta * x);
            double f = 1.0;
            for (int i = 0; i < order; ++i) f *= beta;
            return f * e;
        }
        if (x >= 0.0) {
            Tail t = right_tail(alpha, x);
            switch (order) {
                case 0: return t.v;
                case 1: return t.d1;
                case 2: return t.d2;
                default: return t.d3;
            }
        }
        switch (order) {
            case 0: return bridge->value(x);
            case 1: return bridge->deriv(x);
            default: {
                double A, Ap;
                bridge->log_derivs(x, A, Ap);
                double d1 = bridge->deriv(x);
                if (order == 2) return d1 * A;
                return d1 * (A * A + Ap);
            }
        }
    };

    Weight w;
    w.alpha_ = alpha;
    w.beta_ = beta;
    w.has_bridge_ = true;
    w.bridge_lo_ = -1.0;
    w.bridge_hi_ = 0.0;
    w.feature_ = 1.0 / bridge->kappa;
    w.name_ = "rho(" + std::to_string(alpha) + "," + std::to_string(beta) + ")";
    w.f0_ = [piece](double x) { return piece(x, 0); };
    w.f1_ = [piece](double x) { return piece(x, 1); };
    w.f2_ = [piece](double x) { return piece(x, 2); };
    w.f3_ = [piece](double x) { return piece(x, 3); };

    for (int i = 1; i < 2000; ++i) {
        double x = -1.0 + i / 2000.0;
        if (w.f1_(x) <= 0.0)
            fail(Errc::invalid_argument,
                 "weight: non-monotone bridge for alpha=" + std::to_string(alpha) +
                     " beta=" + std::to_string(beta));
    }
    return w;
}

Weight Weight::one() {
    Weight w;
    w.name_ = "one";
    w.f0_ = [](double) { return 1.0; };
    w.f1_ = [](double) { return 0.0; };
    w.f2_ = [](double) { return 0.0; };
    w.f3_ = [](double) { return 0.0; };
    return w;
}

Weight Weight::one_plus_rho01(double x0) {
    Weight base = rho(0.0, 1.0);
    Weight w;
    w.has_bridge_ = true;
    w.bridge_lo_ = x0 - 1.0;
    w.bridge_hi_ = x0;
    w.feature_ = base.feature_;
    w.name_ = "1+rho(0,1)(x-" + std::to_string(x0) + ")";
    w.f0_ = [base, x0](double x) { return 1.0 + base(x - x0); };
    w.f1_ = [base, x0](double x) { return base.d1(x - x0); };
    w.f2_ = [base, x0](double x) { return base.d2(x - x0); };
    w.f3_ = [base, x0](double x) { return base.d3(x - x0); };
    return w;
}

Weight Weight::shifted(double x0) const {
    Weight w = *this;
    w.bridge_lo_ += x0;
    w.bridge_hi_ += x0;
    w.name_ = name_ + " shifted " + std::to_string(x0);
    auto f0 = f0_, f1 = f1_, f2 = f2_, f3 = f3_;
    w.f0_ = [f0, x0](double x) { return f0(x - x0); };
    w.f1_ = [f1, x0](double x) { return f1(x - x0); };
    w.f2_ = [f2, x0](double x) { return f2(x - x0); };
    w.f3_ = [f3, x0](double x) { return f3(x - x0); };
    return w;
}

Weight::Admissibility Weight::measure(double x_lo, double x_hi, int samples) const {
    Admissibility a{0.0, 0.0, 0.0, 0.0};
    for (int i = 0; i <= samples; ++i) {
        double x = x_lo + (x_hi - x_lo) * i / samples;
        double r = f0_(x);
        if (r <= 0.0) continue;
        a.c1 = std::max(a.c1, std::abs(f1_(x)) / r);
        a.c2 = std::max(a.c2, std::abs(f2_(x)) / r);
        a.c3 = std::max(a.c3, std::abs(f3_(x)) / r);
        a.c_d1 = std::max(a.c_d1, f1_(x) / r);
    }
    return a;
}

} // namespace zk
