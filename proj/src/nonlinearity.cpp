#include "zkstrip/nonlinearity.hpp"

#include <cmath>
#include <functional>

#include "zkstrip/error.hpp"

namespace zk {

Flux Flux::make(const std::string& name, double param) {
    Flux f;
    f.name_ = name;
    f.param_ = param;
    if (name == "zero") {
        f.kind_ = 0;
        f.b_ = 1.0;
        f.c_ = 0.0;
    } else if (name == "linear") {
        f.kind_ = 1;
        f.b_ = 1.0;
        f.c_ = std::abs(param);
    } else if (name == "zk") {
        f.kind_ = 2;
        f.b_ = 1.0;
        f.c_ = 1.0;
    } else if (name == "zk_shift") {
        f.kind_ = 3;
        f.b_ = 1.0;
        f.c_ = 2.0;
    } else if (name == "sine") {
        f.kind_ = 4;
        f.b_ = 1.0;
        f.c_ = 1.0;
    } else {
        fail(Errc::config, "unknown flux '" + name + "'");
    }
    return f;
}

double Flux::g(double u) const {
    switch (kind_) {
        case 0: return 0.0;
        case 1: return param_ * u;
        case 2: return 0.5 * u * u;
        case 3: return u + 0.5 * u * u;
        case 4: return std::sin(u);
    }
    return 0.0;
}

double Flux::gp(double u) const {
    switch (kind_) {
        case 0: return 0.0;
        case 1: return param_;
        case 2: return u;
        case 3: return 1.0 + u;
        case 4: return std::cos(u);
    }
    return 0.0;
}

double Flux::gpp(double u) const {
    switch (kind_) {
        case 0: return 0.0;
        case 1: return 0.0;
        case 2: return 1.0;
        case 3: return 1.0;
        case 4: return -std::sin(u);
    }
    return 0.0;
}

namespace {

// adaptive Simpson with absolute/relative tolerance
double adaptive_simpson(const std::function<double(double)>& f, double a, double b, double fa,
                        double fm, double fb, double whole, double tol, int depth) {
    double m = 0.5 * (a + b);
    double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    double flm = f(lm), frm = f(rm);
    double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    double delta = left + right - whole;
    if (depth <= 0 || std::abs(delta) <= 15.0 * tol) return left + right + delta / 15.0;
    return adaptive_simpson(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
           adaptive_simpson(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

double integrate_adaptive(const std::function<double(double)>& f, double a, double b, double tol) {
    if (a == b) return 0.0;
    double fa = f(a), fb = f(b), fm = f(0.5 * (a + b));
    double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    return adaptive_simpson(f, a, b, fa, fm, fb, whole, tol, 48);
}

} // namespace

double Flux::g_star(double u) const {
    switch (kind_) {
        case 0: return 0.0;
        case 1: return 0.5 * param_ * u * u;
        case 2: return u * u * u / 6.0;
        case 3: return 0.5 * u * u + u * u * u / 6.0;
        case 4: return 1.0 - std::cos(u);
    }
    double scale = std::max(1.0, std::abs(g(u)) * std::abs(u));
    return integrate_adaptive([this](double t) { return g(t); }, 0.0, u, 1e-12 * scale);
}

Flux Flux::galilean_reduced() const {
    switch (kind_) {
        case 0: return make("zero");
        case 1: return make("zero");
        case 2: return *this;       // g'(0) = 0 already
        case 3: return make("zk");  // (u + u^2/2) - u
        default:
            fail(Errc::invalid_argument,
                 "galilean_reduced: no closed form for flux '" + name_ + "'");
    }
}

double Flux::measure_growth_d1(double U, int samples) const {
    double worst = 0.0;
    for (int i = 0; i <= samples; ++i) {
        double u = -U + 2.0 * U * i / samples;
        worst = std::max(worst, std::abs(gp(u)) / (1.0 + std::pow(std::abs(u), b_)));
    }
    return worst;
}

double Flux::measure_growth_d2(double U, int samples) const {
    double worst = 0.0;
    for (int i = 0; i <= samples; ++i) {
        double u = -U + 2.0 * U * i / samples;
        worst = std::max(worst, std::abs(gpp(u)) / (1.0 + std::pow(std::abs(u), b_ - 1.0)));
    }
    return worst;
}

TruncatedFlux::TruncatedFlux(const Flux& base, double h) : base_(base), h_(h) {
    if (!(h > 0.0) || h > 1.0) fail(Errc::invalid_argument, "g_h: h must lie in (0,1]");
    gp_hi_ = base_.gp(2.0 / h);
    gp_lo_ = base_.gp(-2.0 / h);
    // memoized cumulative panels of g_h' across the bridge [1/h, 2/h], both branches
    cum_pos_.assign(kPanels + 1, 0.0);
    cum_neg_.assign(kPanels + 1, 0.0);
    double a = 1.0 / h, width = (2.0 / h - 1.0 / h) / kPanels;
    for (int k = 0; k < kPanels; ++k) {
        cum_pos_[k + 1] = cum_pos_[k] + bridge(a + k * width, a + (k + 1) * width, +1);
        cum_neg_[k + 1] = cum_neg_[k] + bridge(a + k * width, a + (k + 1) * width, -1);
    }
    gh_hi_ = base_.g(1.0 / h) + cum_pos_[kPanels];
    gh_lo_ = base_.g(-1.0 / h) + cum_neg_[kPanels];
}

// integral of g_h' over [from,to] in |theta|; `sign` picks the branch of theta.
double TruncatedFlux::bridge(double from, double to, int sign) const {
    Cutoff eta;
    double h = h_;
    const Flux& base = base_;
    double gp_top = sign > 0 ? gp_hi_ : gp_lo_;
    auto integrand = [&base, &eta, h, gp_top, sign](double t) {
        double gpv = sign > 0 ? base.gp(t) : base.gp(-t);
        return gpv * eta.eta(2.0 - h * t) + gp_top * eta.eta(h * t - 1.0);
    };
    double val = integrate_adaptive(integrand, from, to, 1e-13 * std::max(1.0, std::abs(gp_top)));
    return sign > 0 ? val : -val;
}

double TruncatedFlux::g(double u) const {
    double a = std::abs(u);
    if (a <= 1.0 / h_) return base_.g(u);
    if (a >= 2.0 / h_) {
        if (u > 0.0) return gh_hi_ + gp_hi_ * (u - 2.0 / h_);
        return gh_lo_ + gp_lo_ * (u + 2.0 / h_);
    }
    int sign = u > 0.0 ? 1 : -1;
    double lo = 1.0 / h_, width = (1.0 / h_) / kPanels;
    int k = std::min(kPanels - 1, int((a - lo) / width));
    const std::vector<double>& cum = sign > 0 ? cum_pos_ : cum_neg_;
    double base_val = u > 0.0 ? base_.g(1.0 / h_) : base_.g(-1.0 / h_);
    return base_val + cum[k] + bridge(lo + k * width, a, sign);
}

double TruncatedFlux::gp(double u) const {
    double a = std::abs(u);
    if (a <= 1.0 / h_) return base_.gp(u);
    Cutoff eta;
    double top = u > 0.0 ? gp_hi_ : gp_lo_;
    return base_.gp(u) * eta.eta(2.0 - h_ * a) + top * eta.eta(h_ * a - 1.0);
}

namespace {

double apply_pointwise_flux(const StripTransform& tr, const Field& u_pad,
                            const Flux& flux, const std::optional<double>& trunc_h,
                            Field& image) {
    image = Field(u_pad.grid);
    if (trunc_h) {
        TruncatedFlux gh(flux, *trunc_h);
        for (size_t i = 0; i < u_pad.values.size(); ++i) image.values[i] = gh.g(u_pad.values[i]);
    } else {
        for (size_t i = 0; i < u_pad.values.size(); ++i) image.values[i] = flux.g(u_pad.values[i]);
    }
    (void)tr;
    return 0.0;
}

// relative coefficient mass in the outer third of the kept band (x and y)
double tail_fraction(const StripTransform& tr, const SpectralField& sf) {
    const Grid& g = tr.grid();
    double total = 0.0, tail = 0.0;
    for (int jw = 0; jw < g.nx; ++jw) {
        int j = g.freq_of_index(jw);
        for (int m = 0; m < g.ny; ++m) {
            double a = std::norm(sf.at_wrapped(jw, m));
            total += a;
            if (std::abs(j) > g.nx / 3 || m > (2 * g.ny) / 3) tail += a;
        }
    }
    return total > 0.0 ? std::sqrt(tail / total) : 0.0;
}

} // namespace

SpectralField flux_x_spectral(const StripTransform& tr, const SpectralField& sf, const Flux& flux,
                              std::optional<double> trunc_h, double* alias_tail) {
    Field u_pad = tr.to_physical_padded(sf);
    if (!u_pad.finite()) fail(Errc::solver, "flux: non-finite field values");
    Field image;
    apply_pointwise_flux(tr, u_pad, flux, trunc_h, image);
    if (!image.finite()) fail(Errc::solver, "flux: non-finite g_h image");
    SpectralField gh_hat = tr.from_physical_padded(image);
    if (alias_tail) *alias_tail = tail_fraction(tr, gh_hat);
    return tr.derivative(gh_hat, 1, false);
}

FluxDivergence flux_x(const StripTransform& tr, const Field& u, const Flux& flux,
                      std::optional<double> trunc_h, double alias_threshold) {
    FluxDivergence out;
    double tail = 0.0;
    SpectralField d = flux_x_spectral(tr, tr.to_spectral(u), flux, trunc_h, &tail);
    out.field = tr.from_spectral(d);
    out.alias_tail = tail;
    out.alias_warning = tail > alias_threshold;
    return out;
}

} // namespace zk
