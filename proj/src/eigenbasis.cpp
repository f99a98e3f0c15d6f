#include "zkstrip/eigenbasis.hpp"

#include <cmath>
#include <numbers>

#include "zkstrip/error.hpp"

namespace zk {

namespace {
constexpr double pi = std::numbers::pi;
}

EigenBasis::EigenBasis(BoundaryCase bc, double L, int n) : bc_(bc), L_(L), n_(n) {
    if (!(L > 0.0)) fail(Errc::config, "eigenbasis: L must be positive");
    if (n < 1) fail(Errc::config, "eigenbasis: need at least one mode");

    lambda_.resize(n);
    nodes_.resize(n);

    switch (bc) {
        case BoundaryCase::DirichletDirichlet: {
            weight_ = L / (n + 1);
            for (int m = 0; m < n; ++m) {
                double k = (m + 1) * pi / L;
                lambda_[m] = k * k;
                nodes_[m] = (m + 1) * L / (n + 1);
            }
            break;
        }
        case BoundaryCase::NeumannNeumann: {
            weight_ = L / n;
            for (int m = 0; m < n; ++m) {
                double k = m * pi / L;
                lambda_[m] = k * k;
                nodes_[m] = (m + 0.5) * L / n;
            }
            break;
        }
        case BoundaryCase::DirichletNeumann: {
            weight_ = L / n;
            for (int m = 0; m < n; ++m) {
                double k = (m + 0.5) * pi / L;
                lambda_[m] = k * k;
                nodes_[m] = (m + 0.5) * L / n;
            }
            break;
        }
        case BoundaryCase::Periodic: {
            weight_ = L / n;
            dkind_.resize(n);
            dfreq_.resize(n);
            for (int q = 0; q < n; ++q) nodes_[q] = q * L / n;
            dkind_[0] = DKind::Constant;
            dfreq_[0] = 0;
            lambda_[0] = 0.0;
            int pairs = (n - 1) / 2;
            for (int k = 1; k <= pairs; ++k) {
                double freq = 2.0 * pi * k / L;
                dkind_[2 * k - 1] = DKind::Cos;
                dfreq_[2 * k - 1] = k;
                lambda_[2 * k - 1] = freq * freq;
                dkind_[2 * k] = DKind::Sin;
                dfreq_[2 * k] = k;
                lambda_[2 * k] = freq * freq;
            }
            if (n % 2 == 0) {
                // Nyquist cosine; normalized to the discrete inner product.
                int k = n / 2;
                double freq = 2.0 * pi * k / L;
                dkind_[n - 1] = DKind::NyquistCos;
                dfreq_[n - 1] = k;
                lambda_[n - 1] = freq * freq;
            }
            break;
        }
    }
}

double EigenBasis::psi(int m, double y) const {
    switch (bc_) {
        case BoundaryCase::DirichletDirichlet:
            return std::sqrt(2.0 / L_) * std::sin((m + 1) * pi * y / L_);
        case BoundaryCase::NeumannNeumann:
            if (m == 0) return 1.0 / std::sqrt(L_);
            return std::sqrt(2.0 / L_) * std::cos(m * pi * y / L_);
        case BoundaryCase::DirichletNeumann:
            return std::sqrt(2.0 / L_) * std::sin((m + 0.5) * pi * y / L_);
        case BoundaryCase::Periodic: {
            double w = 2.0 * pi * dfreq_[m] / L_;
            switch (dkind_[m]) {
                case DKind::Constant: return 1.0 / std::sqrt(L_);
                case DKind::Cos: return std::sqrt(2.0 / L_) * std::cos(w * y);
                case DKind::Sin: return std::sqrt(2.0 / L_) * std::sin(w * y);
                case DKind::NyquistCos: return std::cos(w * y) / std::sqrt(L_);
            }
        }
    }
    return 0.0;
}

double EigenBasis::psi_d1(int m, double y) const {
    switch (bc_) {
        case BoundaryCase::DirichletDirichlet: {
            double k = (m + 1) * pi / L_;
            return std::sqrt(2.0 / L_) * k * std::cos(k * y);
        }
        case BoundaryCase::NeumannNeumann: {
            if (m == 0) return 0.0;
            double k = m * pi / L_;
            return -std::sqrt(2.0 / L_) * k * std::sin(k * y);
        }
        case BoundaryCase::DirichletNeumann: {
            double k = (m + 0.5) * pi / L_;
            return std::sqrt(2.0 / L_) * k * std::cos(k * y);
        }
        case BoundaryCase::Periodic: {
            double w = 2.0 * pi * dfreq_[m] / L_;
            switch (dkind_[m]) {
                case DKind::Constant: return 0.0;
                case DKind::Cos: return -std::sqrt(2.0 / L_) * w * std::sin(w * y);
                case DKind::Sin: return std::sqrt(2.0 / L_) * w * std::cos(w * y);
                case DKind::NyquistCos: return -w * std::sin(w * y) / std::sqrt(L_);
            }
        }
    }
    return 0.0;
}

double EigenBasis::psi_d2(int m, double y) const { return -lambda_[m] * psi(m, y); }

} // namespace zk
