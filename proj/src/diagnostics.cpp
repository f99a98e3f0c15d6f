#include "zkstrip/diagnostics.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "zkstrip/error.hpp"
#include "zkstrip/propagator.hpp"

namespace zk {

uint64_t fnv1a(const std::string& s) {
    uint64_t h = 1469598103934665603ull;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

std::string digest_hex(const std::string& s) {
    std::ostringstream os;
    os << std::hex << fnv1a(s);
    return os.str();
}

double mass(const StripTransform& tr, const Field& u) {
    double acc = 0.0;
    for (double v : u.values) acc += v * v;
    return acc * u.grid.dx() * tr.y_quad_weight();
}

double energy(const StripTransform& tr, const Field& u, const Flux& flux) {
    double grad = grad_energy_spectral(tr, tr.to_spectral(u));
    double gstar = 0.0;
    for (double v : u.values) gstar += flux.g_star(v);
    gstar *= u.grid.dx() * tr.y_quad_weight();
    return grad - 2.0 * gstar;
}

double energy_single_gstar(const StripTransform& tr, const Field& u, const Flux& flux) {
    double grad = grad_energy_spectral(tr, tr.to_spectral(u));
    double gstar = 0.0;
    for (double v : u.values) gstar += flux.g_star(v);
    gstar *= u.grid.dx() * tr.y_quad_weight();
    return grad - gstar;
}

uint64_t SplitMix::next() {
    state_ += 0x9e3779b97f4a7c15ull;
    uint64_t z = state_;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

double SplitMix::uniform() { return (next() >> 11) * 0x1.0p-53; }

double SplitMix::uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

Field random_bump(const StripTransform& tr, SplitMix& rng, double amp_lo, double amp_hi) {
    const Grid& g = tr.grid();
    double amp = rng.uniform(amp_lo, amp_hi);
    double x0 = rng.uniform(-0.4 * g.half_width, 0.4 * g.half_width);
    double sx = rng.uniform(1.0, std::max(1.5, 0.15 * g.half_width));
    int nmodes = std::min(3, g.ny);
    std::vector<double> cy(nmodes);
    for (int l = 0; l < nmodes; ++l) cy[l] = rng.uniform(-1.0, 1.0);

    Field f(g);
    for (int i = 0; i < g.nx; ++i) {
        double gx = amp * std::exp(-std::pow((g.x(i) - x0) / sx, 2));
        for (int q = 0; q < g.ny; ++q) {
            double y = 0.0;
            for (int l = 0; l < nmodes; ++l) y += cy[l] * tr.basis().psi(l, tr.basis().node(q));
            f.at(i, q) = gx * y;
        }
    }
    return f;
}

// ---- two-weight interpolation inequality --------------------------------------

double interpolation_s(int k, int m, double q) {
    double invkq = std::isinf(q) ? 0.0 : 1.0 / (k * q);
    return (m + 1.0) / (2.0 * k) - invkq;
}

namespace {

void validate_interpolation_params(const StripTransform& tr, const InterpolationParams& p) {
    if (p.k != 1 && p.k != 2) fail(Errc::invalid_argument, "interpolation: k must be 1 or 2");
    if (p.m < 0 || p.m >= p.k) fail(Errc::invalid_argument, "interpolation: need 0 <= m < k");
    bool q_inf_ok = (p.k == 2 && p.m == 0);
    if (std::isinf(p.q)) {
        if (!q_inf_ok) fail(Errc::invalid_argument, "interpolation: q = infinity needs k=2, m=0");
    } else if (p.q < 2.0) {
        fail(Errc::invalid_argument, "interpolation: q >= 2 required");
    }
    const Grid& g = tr.grid();
    double c0 = 0.0;
    for (int i = 0; i < g.nx; ++i) {
        double r1 = p.rho1(g.x(i)), r2 = p.rho2(g.x(i));
        if (r2 <= 0.0) fail(Errc::invalid_argument, "interpolation: rho2 must be positive");
        c0 = std::max(c0, r1 / r2);
    }
    if (!std::isfinite(c0)) fail(Errc::invalid_argument, "interpolation: rho1/rho2 unbounded");
    if (std::isinf(p.q)) {
        double worst = 0.0;
        for (int i = 0; i < g.nx; ++i) {
            double x = g.x(i);
            if (x + 1.0 > g.half_width) continue;
            double a = p.rho2(x) / p.rho1(x);
            double b = p.rho2(x + 1.0) / p.rho1(x + 1.0);
            worst = std::max(worst, a / b);
        }
        if (!std::isfinite(worst))
            fail(Errc::invalid_argument, "interpolation: q=inf ratio condition violated");
    }
}

double interpolation_ratio_impl(const StripTransform& tr, const Field& psi, int k, int m, double q,
                                const Weight& rho1, const Weight& rho2, double s) {
    const Grid& g = tr.grid();
    Field dm(g);
    if (m == 0) {
        dm = psi;
    } else {
        Field gs = grad_sq(tr, psi);
        for (size_t i = 0; i < dm.values.size(); ++i) dm.values[i] = std::sqrt(gs.values[i]);
    }
    Field lhs_field(g);
    for (int i = 0; i < g.nx; ++i) {
        double w = std::pow(rho1(g.x(i)), s) * std::pow(rho2(g.x(i)), 0.5 - s);
        for (int iq = 0; iq < g.ny; ++iq) lhs_field.at(i, iq) = dm.at(i, iq) * w;
    }
    double lhs = lq_norm(tr, lhs_field, q);

    Field dk(g);
    {
        Field gs = (k == 1) ? grad_sq(tr, psi) : grad2_sq(tr, psi);
        for (size_t i = 0; i < dk.values.size(); ++i) dk.values[i] = std::sqrt(gs.values[i]);
    }
    auto weighted_norm = [&](const Field& f, const Weight& w) {
        double acc = 0.0;
        for (int i = 0; i < g.nx; ++i) {
            double wi = w(g.x(i));
            for (int iq = 0; iq < g.ny; ++iq) acc += wi * f.at(i, iq) * f.at(i, iq);
        }
        return std::sqrt(acc * g.dx() * tr.y_quad_weight());
    };
    double a = weighted_norm(dk, rho1);  // || |D^k psi| rho1^{1/2} ||_2
    double b = weighted_norm(psi, rho2); // || psi rho2^{1/2} ||_2
    double rhs = std::pow(a, 2.0 * s) * std::pow(b, 1.0 - 2.0 * s) + b;
    if (rhs == 0.0) return 0.0;
    return lhs / rhs;
}

} // namespace

double interpolation_ratio(const StripTransform& tr, const Field& psi,
                           const InterpolationParams& p) {
    validate_interpolation_params(tr, p);
    double s = interpolation_s(p.k, p.m, p.q);
    return interpolation_ratio_impl(tr, psi, p.k, p.m, p.q, p.rho1, p.rho2, s);
}

CheckReport interpolation_check(const StripTransform& tr, const InterpolationParams& p) {
    validate_interpolation_params(tr, p);
    double s = interpolation_s(p.k, p.m, p.q);

    CheckReport rep;
    std::ostringstream id;
    id << "interpolation k=" << p.k << " m=" << p.m << " q=" << p.q << " seed=" << p.seed
       << " n=" << p.family_size << " rho1=" << p.rho1.name() << " rho2=" << p.rho2.name();
    rep.name = "interpolation";
    rep.inputs_digest = digest_hex(id.str());
    rep.measured["s"] = s;

    auto batch_max = [&](const StripTransform& trx, uint64_t seed) {
        SplitMix rng(seed);
        double worst = 0.0;
        for (int i = 0; i < p.family_size; ++i) {
            Field psi = random_bump(trx, rng);
            worst = std::max(worst,
                             interpolation_ratio_impl(trx, psi, p.k, p.m, p.q, p.rho1, p.rho2, s));
        }
        return worst;
    };

    double c_fit = batch_max(tr, p.seed);
    double c_valid = batch_max(tr, p.seed + 1000);
    rep.fitted["c"] = c_fit;
    rep.measured["validation_max"] = c_valid;

    Grid g = tr.grid();
    Grid fine(g.half_width, 2 * g.nx, g.strip_width, g.ny);
    StripTransform trf(fine, tr.bc());
    double c_fine = batch_max(trf, p.seed);
    rep.refinement = {c_fit, c_fine};
    rep.measured["refined_c"] = c_fine;

    rep.tolerance = p.slack;
    bool covered = c_valid <= c_fit * (1.0 + p.slack);
    bool stable = std::abs(c_fine - c_fit) <= 0.10 * c_fit;
    rep.passed = covered && stable && std::isfinite(c_fit);
    std::ostringstream d;
    d << "c=" << c_fit << " validation=" << c_valid << " refined=" << c_fine << " s=" << s;
    rep.detail = d.str();
    return rep;
}

// ---- weak formulation -----------------------------------------------------------

TestFunction make_test_function(const StripTransform& tr, double center, double r, double shoulder,
                                int ymode, int theta_kind, double T) {
    const Grid& g = tr.grid();
    TestFunction phi;
    phi.ymode = ymode;
    phi.support_r = r;
    Cutoff eta;

    // sample B on a 4x fine grid, differentiate spectrally there, restrict to nodes
    int fine = 4 * g.nx;
    Grid gf(g.half_width, fine, g.strip_width, 4);
    StripTransform tf(gf, BoundaryCase::NeumannNeumann);
    Field fb(gf);
    for (int i = 0; i < fine; ++i) {
        double x = gf.x(i);
        double b = eta.eta((x - (center - r)) / shoulder) * eta.eta(((center + r) - x) / shoulder);
        for (int q = 0; q < 4; ++q) fb.at(i, q) = b;
    }
    SpectralField cb = tf.to_spectral(fb);
    auto restrict_to_nodes = [&](const Field& ff, std::vector<double>& out) {
        out.resize(g.nx);
        for (int i = 0; i < g.nx; ++i) out[i] = ff.at(4 * i, 0);
    };
    restrict_to_nodes(fb, phi.B_true);
    // project onto the coarse grid's resolved band: the quadrature of u against
    // these tables is then exact, with no aliasing of the bump's spectral tail
    SpectralField cb_lp = cb;
    for (int jw = 0; jw < fine; ++jw) {
        int j = gf.freq_of_index(jw);
        if (std::abs(j) >= g.nx / 2)
            for (int m = 0; m < 4; ++m) cb_lp.at_wrapped(jw, m) = 0.0;
    }
    restrict_to_nodes(tf.from_spectral(cb_lp), phi.B);
    restrict_to_nodes(tf.from_spectral(tf.derivative(cb_lp, 1, false)), phi.B1);
    restrict_to_nodes(tf.from_spectral(tf.derivative(cb_lp, 2, false)), phi.B2);
    restrict_to_nodes(tf.from_spectral(tf.derivative(cb_lp, 3, false)), phi.B3);

    constexpr double pi = std::numbers::pi;
    switch (theta_kind) {
        case 0:
            phi.theta = [T](double t) { return std::cos(0.5 * pi * t / T); };
            phi.theta_d = [T](double t) { return -0.5 * pi / T * std::sin(0.5 * pi * t / T); };
            break;
        case 1:
            phi.theta = [T](double t) { return std::pow(1.0 - t / T, 2); };
            phi.theta_d = [T](double t) { return -2.0 * (1.0 - t / T) / T; };
            break;
        default:
            phi.theta = [T](double t) { return (1.0 - t / T) * std::cos(0.5 * pi * t / T); };
            phi.theta_d = [T](double t) {
                return -std::cos(0.5 * pi * t / T) / T -
                       (1.0 - t / T) * 0.5 * pi / T * std::sin(0.5 * pi * t / T);
            };
            break;
    }
    std::ostringstream nm;
    nm << "phi(center=" << center << ",r=" << r << ",l=" << ymode << ",theta=" << theta_kind << ")";
    phi.name = nm.str();
    return phi;
}

void validate_test_function(const StripTransform& tr, const TestFunction& phi, double T) {
    const Grid& g = tr.grid();
    if (std::abs(phi.theta(T)) > 1e-10)
        fail(Errc::invalid_argument, "test function: theta(T) must vanish");
    const std::vector<double>& bval = phi.B_true.empty() ? phi.B : phi.B_true;
    double bmax = 0.0, outside = 0.0;
    for (int i = 0; i < g.nx; ++i) {
        bmax = std::max(bmax, std::abs(bval[i]));
        if (std::abs(g.x(i)) >= 0.95 * g.half_width)
            outside = std::max(outside, std::abs(bval[i]));
    }
    if (bmax == 0.0 || outside > 1e-10 * bmax)
        fail(Errc::invalid_argument, "test function: x-support reaches the window edge");
    const EigenBasis& b = tr.basis();
    double L = b.strip_width();
    double scale = 1.0 + std::sqrt(b.lambda(phi.ymode));
    double viol = 0.0;
    switch (tr.bc()) {
        case BoundaryCase::DirichletDirichlet:
            viol = std::max(std::abs(b.psi(phi.ymode, 0.0)), std::abs(b.psi(phi.ymode, L)));
            break;
        case BoundaryCase::NeumannNeumann:
            viol = std::max(std::abs(b.psi_d1(phi.ymode, 0.0)), std::abs(b.psi_d1(phi.ymode, L)));
            break;
        case BoundaryCase::DirichletNeumann:
            viol = std::max(std::abs(b.psi(phi.ymode, 0.0)), std::abs(b.psi_d1(phi.ymode, L)));
            break;
        case BoundaryCase::Periodic:
            viol = std::max(std::abs(b.psi(phi.ymode, 0.0) - b.psi(phi.ymode, L)),
                            std::abs(b.psi_d1(phi.ymode, 0.0) - b.psi_d1(phi.ymode, L)));
            break;
    }
    if (viol > 1e-10 * scale)
        fail(Errc::invalid_argument, "test function: y boundary conditions violated");
}

double weak_residual(const StripTransform& tr, const Trajectory& traj, const Forcing& forcing,
                     const TestFunction& phi) {
    const Grid& g = tr.grid();
    double T = traj.times.back();
    validate_test_function(tr, phi, T);

    const RunConfig& cfg = traj.config;
    double lam = tr.basis().lambda(phi.ymode);
    double wy = tr.y_quad_weight();
    double dx = g.dx();

    std::vector<double> psi_l(g.ny);
    for (int q = 0; q < g.ny; ++q) psi_l[q] = tr.basis().psi(phi.ymode, tr.basis().node(q));

    std::optional<TruncatedFlux> gh;
    if (cfg.trunc_h) gh.emplace(cfg.flux, *cfg.trunc_h);
    auto gval = [&](double u) { return gh ? gh->g(u) : cfg.flux.g(u); };

    std::vector<double> tw = simpson_weights(std::span<const double>(traj.times));
    double acc = 0.0;
    for (size_t sidx = 0; sidx < traj.snapshots.size(); ++sidx) {
        double t = traj.times[sidx];
        const Field& u = traj.snapshots[sidx];
        double th = phi.theta(t), thd = phi.theta_d(t);
        Field f = forcing.is_zero() ? Field(g) : forcing.eval(t, tr);

        double term = 0.0;
        for (int i = 0; i < g.nx; ++i) {
            double uy = 0.0, gy = 0.0, fy = 0.0;
            for (int q = 0; q < g.ny; ++q) {
                double pv = psi_l[q];
                uy += u.at(i, q) * pv;
                gy += gval(u.at(i, q)) * pv;
                fy += f.at(i, q) * pv;
            }
            double phi_t = thd * phi.B[i];
            double phi_xxx = th * phi.B3[i];
            double phi_xyy = -lam * th * phi.B1[i];
            double phi_xx = th * phi.B2[i];
            double phi_yy = -lam * th * phi.B[i];
            double phi_x = th * phi.B1[i];
            term += uy * (phi_t + phi_xxx + phi_xyy + cfg.delta * (phi_xx + phi_yy)) +
                    gy * phi_x + fy * (th * phi.B[i]);
        }
        acc += tw[sidx] * term * dx * wy;
    }

    double init = 0.0;
    const Field& u0 = traj.snapshots.front();
    double th0 = phi.theta(0.0);
    for (int i = 0; i < g.nx; ++i) {
        double uy = 0.0;
        for (int q = 0; q < g.ny; ++q) uy += u0.at(i, q) * psi_l[q];
        init += uy * th0 * phi.B[i];
    }
    acc += init * dx * wy;
    return std::abs(acc);
}

// ---- weighted energy identity ----------------------------------------------------

namespace {

struct IdentityTerms {
    double u2rho = 0.0, u2rho_ppp = 0.0, u2rho_pp = 0.0;
    double grad_rho = 0.0;     // |Du|^2 rho
    double grad_rho_p = 0.0;   // |Du|^2 rho'
    double grad3_rho_p = 0.0;  // (3 ux^2 + uy^2) rho'
    double f0_u_rho = 0.0;
    double f1_term = 0.0;      // f1 (u rho)_x
};

// Gauss panels over the window, refined inside the weight's blend interval so
// the quadrature resolves the weight's sharpest feature.
std::vector<std::pair<double, double>> weight_panels(const Grid& g, const Weight& rho) {
    std::vector<std::pair<double, double>> panels;
    auto split = [&panels](double a, double b, int n) {
        for (int i = 0; i < n; ++i)
            panels.emplace_back(a + (b - a) * i / n, a + (b - a) * (i + 1) / n);
    };
    double X = g.half_width;
    double lo = rho.has_bridge() ? std::max(-X, rho.bridge_lo()) : X;
    double hi = rho.has_bridge() ? std::min(X, rho.bridge_hi()) : X;
    if (!rho.has_bridge() || hi <= lo) {
        split(-X, X, std::max(8, int(std::ceil(2.0 * X))));
        return panels;
    }
    if (lo > -X) split(-X, lo, std::max(1, int(std::ceil(lo + X))));
    int nb = std::clamp(int(std::ceil((hi - lo) / rho.feature_scale())) * 2, 16, 512);
    split(lo, hi, nb);
    if (hi < X) split(hi, X, std::max(1, int(std::ceil(X - hi))));
    return panels;
}

// Evaluates the real y-mode coefficient columns of spectral fields at an
// arbitrary x via trigonometric interpolation (fields are band-limited).
struct ColumnEval {
    const Grid* g;
    std::vector<const SpectralField*> fields;
    mutable std::vector<std::complex<double>> phase;

    void at(double x, std::vector<std::vector<double>>& a) const {
        int nx = g->nx, ny = g->ny;
        phase.resize(nx);
        for (int jw = 0; jw < nx; ++jw) {
            int j = g->freq_of_index(jw);
            phase[jw] = std::exp(std::complex<double>{0.0, g->xi(j) * x});
        }
        a.assign(fields.size(), std::vector<double>(ny, 0.0));
        for (size_t f = 0; f < fields.size(); ++f) {
            if (!fields[f]) continue;
            const auto& coef = fields[f]->coef;
            for (int m = 0; m < ny; ++m) {
                std::complex<double> acc{0.0, 0.0};
                for (int jw = 0; jw < nx; ++jw) acc += coef[size_t(jw) * ny + m] * phase[jw];
                a[f][m] = acc.real();
            }
        }
    }
};

IdentityTerms identity_terms(const StripTransform& tr, const SpectralField& uhat,
                             const Weight& rho, const Forcing* f0, const Forcing* f1, double t) {
    const Grid& g = tr.grid();
    SpectralField uxhat = tr.derivative(uhat, 1, false);
    bool need_f0 = f0 && !f0->is_zero();
    bool need_f1 = f1 && !f1->is_zero();
    SpectralField f0hat = need_f0 ? tr.to_spectral(f0->eval(t, tr)) : SpectralField();
    SpectralField f1hat = need_f1 ? tr.to_spectral(f1->eval(t, tr)) : SpectralField();

    ColumnEval ev;
    ev.g = &g;
    ev.fields = {&uhat, &uxhat, need_f0 ? &f0hat : nullptr, need_f1 ? &f1hat : nullptr};

    std::vector<double> gn, gw;
    gauss_legendre(10, gn, gw);

    IdentityTerms out;
    std::vector<std::vector<double>> a;
    for (auto [pa, pb] : weight_panels(g, rho)) {
        double w_panel = pb - pa;
        for (size_t iq = 0; iq < gn.size(); ++iq) {
            double x = pa + w_panel * gn[iq];
            double wq = w_panel * gw[iq];
            double r = rho(x), rp = rho.d1(x), rpp = rho.d2(x), rppp = rho.d3(x);
            ev.at(x, a);
            double u2 = 0.0, ux2 = 0.0, uy2 = 0.0, f0u = 0.0, f1u = 0.0, f1ux = 0.0;
            for (int m = 0; m < g.ny; ++m) {
                double um = a[0][m], uxm = a[1][m];
                u2 += um * um;
                ux2 += uxm * uxm;
                uy2 += tr.basis().lambda(m) * um * um;
                if (need_f0) f0u += a[2][m] * um;
                if (need_f1) {
                    f1u += a[3][m] * um;
                    f1ux += a[3][m] * uxm;
                }
            }
            out.u2rho += wq * u2 * r;
            out.u2rho_ppp += wq * u2 * rppp;
            out.u2rho_pp += wq * u2 * rpp;
            out.grad_rho += wq * (ux2 + uy2) * r;
            out.grad_rho_p += wq * (ux2 + uy2) * rp;
            out.grad3_rho_p += wq * (3.0 * ux2 + uy2) * rp;
            out.f0_u_rho += wq * f0u * r;
            out.f1_term += wq * (f1ux * r + f1u * rp);
        }
    }
    return out;
}

} // namespace

CheckReport energy_identity_check(const StripTransform& tr, const SpectralField& u0,
                                  const Forcing* f0, const Forcing* f1,
                                  const EnergyIdentityParams& p) {
    const Grid& g = tr.grid();
    double sqd = std::sqrt(p.delta);

    auto forcing_hat = [&](double t) {
        SpectralField fh(g, tr.bc());
        if (f0 && !f0->is_zero()) fh = tr.to_spectral(f0->eval(t, tr));
        if (f1 && !f1->is_zero() && sqd > 0.0) {
            SpectralField f1h = tr.derivative(tr.to_spectral(f1->eval(t, tr)), 1, false);
            for (size_t i = 0; i < fh.coef.size(); ++i) fh.coef[i] += sqd * f1h.coef[i];
        }
        return fh;
    };
    bool has_forcing = (f0 && !f0->is_zero()) || (f1 && !f1->is_zero() && sqd > 0.0);

    auto state_at = [&](double t) {
        if (!has_forcing || t == 0.0) return propagate(tr, u0, {p.delta, t});
        return duhamel(tr, u0, forcing_hat, {p.delta, t}, 10, std::max(1, int(t / 0.125) + 1));
    };

    auto residual_with_panels = [&](int panels) {
        std::vector<double> gn, gw;
        gauss_legendre(p.gl_nodes, gn, gw);
        double time_integral = 0.0;
        double hpan = p.T / panels;
        for (int pan = 0; pan < panels; ++pan) {
            for (int iq = 0; iq < p.gl_nodes; ++iq) {
                double t = pan * hpan + hpan * gn[iq];
                IdentityTerms w = identity_terms(tr, state_at(t), p.rho, f0, f1, t);
                double integrand = w.grad3_rho_p + 2.0 * p.delta * w.grad_rho - w.u2rho_ppp -
                                   p.delta * w.u2rho_pp - 2.0 * w.f0_u_rho + 2.0 * sqd * w.f1_term;
                time_integral += hpan * gw[iq] * integrand;
            }
        }
        IdentityTerms w0 = identity_terms(tr, u0, p.rho, f0, f1, 0.0);
        IdentityTerms wT = identity_terms(tr, state_at(p.T), p.rho, f0, f1, p.T);
        return wT.u2rho - w0.u2rho + time_integral;
    };

    IdentityTerms w0 = identity_terms(tr, u0, p.rho, f0, f1, 0.0);
    double scale = std::max(w0.u2rho, 1e-30);

    CheckReport rep;
    rep.name = "energy-identity";
    std::ostringstream id;
    id << "energy-identity delta=" << p.delta << " T=" << p.T << " rho=" << p.rho.name();
    rep.inputs_digest = digest_hex(id.str());
    double r1 = std::abs(residual_with_panels(p.time_panels)) / scale;
    double r2 = std::abs(residual_with_panels(2 * p.time_panels)) / scale;
    double r4 = std::abs(residual_with_panels(4 * p.time_panels)) / scale;
    rep.measured["residual"] = r1;
    rep.refinement = {r1, r2, r4};
    rep.tolerance = p.pass_tol;
    bool decreasing = (r2 <= r1 * 1.05 + 1e-14) && (r4 <= r2 * 1.05 + 1e-14);
    rep.passed = r1 <= p.pass_tol && decreasing;
    std::ostringstream d;
    d << "residual=" << r1 << " refined=" << r2 << "," << r4;
    rep.detail = d.str();
    return rep;
}

// ---- local smoothing ----------------------------------------------------------

double local_smoothing(const StripTransform& tr, const Trajectory& traj, double r) {
    const Grid& g = tr.grid();
    if (!(r > 0.0) || r >= g.half_width)
        fail(Errc::invalid_argument, "local_smoothing: need 0 < r < X");
    std::vector<double> tw = simpson_weights(std::span<const double>(traj.times));
    double dx = g.dx();
    double acc = 0.0;
    for (size_t s = 0; s < traj.snapshots.size(); ++s) {
        ColumnEnergies ce = column_energies(tr, tr.to_spectral(traj.snapshots[s]));
        double space = 0.0;
        for (int i = 0; i < g.nx; ++i) {
            double lo = g.x(i) - 0.5 * dx, hi = g.x(i) + 0.5 * dx;
            double ov = std::max(0.0, std::min(hi, r) - std::max(lo, -r)) / dx;
            if (ov == 0.0) continue;
            space += ov * (ce.ux2[i] + ce.uy2[i]);
        }
        acc += tw[s] * space * dx;
    }
    return acc;
}

// ---- weighted energy inequality fit ----------------------------------------------

CheckReport energy_inequality_check(const StripTransform& tr, const EnergyInequalityParams& p) {
    // randomized linear runs with f = 0: fit c in
    //   u2rho(t) + int |Du|^2 (rho' + delta rho) <= u2rho(0) + c int u2rho
    auto run_ratio = [&](uint64_t seed) {
        SplitMix rng(seed);
        SpectralField u0 = tr.to_spectral(random_bump(tr, rng));

        std::vector<double> gn, gw;
        gauss_legendre(6, gn, gw);
        double lhs_int = 0.0, u2_int = 0.0;
        double hpan = p.T / p.time_panels;
        for (int pan = 0; pan < p.time_panels; ++pan)
            for (int iq = 0; iq < 6; ++iq) {
                double t = pan * hpan + hpan * gn[iq];
                SpectralField uh = propagate(tr, u0, {p.delta, t});
                IdentityTerms w = identity_terms(tr, uh, p.rho, nullptr, nullptr, t);
                lhs_int += hpan * gw[iq] * (w.grad_rho_p + p.delta * w.grad_rho);
                u2_int += hpan * gw[iq] * w.u2rho;
            }

        auto u2rho_of = [&](const SpectralField& uh) {
            return identity_terms(tr, uh, p.rho, nullptr, nullptr, 0.0).u2rho;
        };
        double excess = u2rho_of(propagate(tr, u0, {p.delta, p.T})) + lhs_int - u2rho_of(u0);
        return excess / std::max(u2_int, 1e-30);
    };

    double c_fit = 0.0;
    for (int i = 0; i < p.calib_runs; ++i) c_fit = std::max(c_fit, run_ratio(p.seed + i));
    double c_valid = 0.0;
    for (int i = 0; i < p.valid_runs; ++i)
        c_valid = std::max(c_valid, run_ratio(p.seed + 5000 + i));

    CheckReport rep;
    rep.name = "energy-inequality";
    std::ostringstream id;
    id << "energy-inequality delta=" << p.delta << " rho=" << p.rho.name() << " seed=" << p.seed;
    rep.inputs_digest = digest_hex(id.str());
    rep.fitted["c"] = c_fit;
    rep.measured["validation_max"] = c_valid;
    rep.tolerance = p.slack;
    rep.passed = std::isfinite(c_fit) && c_valid <= std::max(c_fit, 0.0) * (1.0 + p.slack) + 1e-12;
    std::ostringstream d;
    d << "c=" << c_fit << " validation=" << c_valid;
    rep.detail = d.str();
    return rep;
}

// ---- continuous dependence --------------------------------------------------------

CheckReport continuous_dependence(const StripTransform& tr, const Trajectory& u_traj,
                                  const Trajectory& ut_traj, const Forcing& f, const Forcing& ft,
                                  const DependenceParams& p) {
    const Grid& g = tr.grid();
    if (u_traj.snapshots.front().grid != ut_traj.snapshots.front().grid ||
        u_traj.config.bc != ut_traj.config.bc)
        fail(Errc::invalid_argument, "dependence: trajectories must share grid and case");
    if (p.alpha < 0.5) fail(Errc::invalid_argument, "dependence: alpha >= 1/2 required");
    size_t n = std::min(u_traj.snapshots.size(), ut_traj.snapshots.size());
    if (n < 2) fail(Errc::invalid_argument, "dependence: need at least two snapshots");

    Weight rho_ab = Weight::rho(p.alpha, p.beta);
    Weight rho_half = Weight::rho(p.alpha - 0.5 > 0.0 ? p.alpha - 0.5 : 0.0, p.beta);

    double gp0 = u_traj.config.flux.gp0();

    auto weighted_sq = [&](const Field& v, const Weight& w) {
        double acc = 0.0;
        for (int i = 0; i < g.nx; ++i) {
            double wi = w(g.x(i));
            double wi2 = wi * wi;
            for (int q = 0; q < g.ny; ++q) acc += wi2 * v.at(i, q) * v.at(i, q);
        }
        return acc * g.dx() * tr.y_quad_weight();
    };

    std::vector<double> times(u_traj.times.begin(), u_traj.times.begin() + n);
    std::vector<double> tw = simpson_weights(std::span<const double>(times));

    double sup_term = 0.0, spacetime = 0.0, max_diff = 0.0;
    for (size_t s = 0; s < n; ++s) {
        Field diff = u_traj.snapshots[s] - ut_traj.snapshots[s];
        max_diff = std::max(max_diff, diff.max_abs());
        SpectralField dh = tr.to_spectral(diff);
        if (p.apply_shift && gp0 != 0.0) {
            dh = tr.shift_x(dh, -gp0 * times[s]);
            diff = tr.from_spectral(dh);
        }
        if (!p.h1_level) {
            sup_term = std::max(sup_term, std::sqrt(weighted_sq(diff, rho_ab)));
            ColumnEnergies ce = column_energies(tr, dh);
            double sp = 0.0;
            for (int i = 0; i < g.nx; ++i) {
                double wi = rho_half(g.x(i));
                sp += wi * wi * (ce.ux2[i] + ce.uy2[i]);
            }
            spacetime += tw[s] * sp * g.dx();
        } else {
            ColumnEnergies ce = column_energies(tr, dh);
            double sp = 0.0;
            for (int i = 0; i < g.nx; ++i) {
                double wi = rho_ab(g.x(i));
                sp += wi * wi * (ce.ux2[i] + ce.uy2[i]);
            }
            sup_term = std::max(sup_term, std::sqrt(sp * g.dx()));
            ColumnEnergies2 ce2 = column_energies2(tr, dh);
            double sp2 = 0.0;
            for (int i = 0; i < g.nx; ++i) {
                double wi = rho_half(g.x(i));
                sp2 += wi * wi * (ce2.uxx2[i] + ce2.uxy2[i] + ce2.uyy2[i]);
            }
            spacetime += tw[s] * sp2 * g.dx();
        }
    }
    double lhs = sup_term + std::sqrt(std::max(spacetime, 0.0));

    Field du0 = u_traj.snapshots.front() - ut_traj.snapshots.front();
    double fterm = 0.0;
    for (size_t s = 0; s < n; ++s) {
        Field fd = (f.is_zero() && ft.is_zero()) ? Field(g)
                                                 : f.eval(times[s], tr) - ft.eval(times[s], tr);
        if (!p.h1_level)
            fterm += tw[s] * std::sqrt(weighted_sq(fd, rho_ab));
        else
            fterm += tw[s] * hk_alpha_norm(tr, fd, 1, p.alpha);
    }
    double rhs = p.h1_level ? hk_alpha_norm(tr, du0, 1, p.alpha) + fterm
                            : std::sqrt(weighted_sq(du0, rho_ab)) + fterm;

    CheckReport rep;
    rep.name = p.h1_level ? "dependence-h1" : "dependence-l2";
    std::ostringstream id;
    id << rep.name << " alpha=" << p.alpha << " beta=" << p.beta << " shift=" << p.apply_shift;
    rep.inputs_digest = digest_hex(id.str());
    rep.measured["lhs"] = lhs;
    rep.measured["rhs_data"] = rhs;
    // the bounding constant depends on these solution norms; report them
    double nu = 0.0, nut = 0.0;
    for (size_t s = 0; s < n; ++s) {
        nu = std::max(nu, hk_alpha_norm(tr, u_traj.snapshots[s], 1, 0.5));
        nut = std::max(nut, hk_alpha_norm(tr, ut_traj.snapshots[s], 1, 0.5));
    }
    rep.measured["sup_h1half_u"] = nu;
    rep.measured["sup_h1half_ut"] = nut;

    if (max_diff == 0.0) {
        rep.measured["exact_match"] = 1.0;
        rep.measured["ratio"] = 0.0;
        rep.passed = true;
        rep.detail = "trajectories identical (exact-match sentinel)";
        return rep;
    }
    double ratio = rhs > 0.0 ? lhs / rhs : std::numeric_limits<double>::infinity();
    rep.measured["ratio"] = ratio;
    rep.passed = std::isfinite(ratio);
    std::ostringstream d;
    d << "lhs=" << lhs << " rhs=" << rhs << " ratio=" << ratio;
    rep.detail = d.str();
    return rep;
}

} // namespace zk
