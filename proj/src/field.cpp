#include "zkstrip/field.hpp"

#include <cmath>

#include "zkstrip/error.hpp"

namespace zk {

bool Field::finite() const {
    for (double v : values)
        if (!std::isfinite(v)) return false;
    return true;
}

double Field::max_abs() const {
    double m = 0.0;
    for (double v : values) m = std::max(m, std::abs(v));
    return m;
}

double SpectralField::l2_coef_norm() const {
    double s = 0.0;
    for (const auto& c : coef) s += std::norm(c);
    return std::sqrt(s);
}

Field operator-(const Field& a, const Field& b) {
    if (a.grid != b.grid) fail(Errc::invalid_argument, "field difference: grid mismatch");
    Field r(a.grid);
    for (size_t i = 0; i < r.values.size(); ++i) r.values[i] = a.values[i] - b.values[i];
    return r;
}

Field operator+(const Field& a, const Field& b) {
    if (a.grid != b.grid) fail(Errc::invalid_argument, "field sum: grid mismatch");
    Field r(a.grid);
    for (size_t i = 0; i < r.values.size(); ++i) r.values[i] = a.values[i] + b.values[i];
    return r;
}

Field& axpy(Field& y, double a, const Field& x) {
    if (y.grid != x.grid) fail(Errc::invalid_argument, "axpy: grid mismatch");
    for (size_t i = 0; i < y.values.size(); ++i) y.values[i] += a * x.values[i];
    return y;
}

} // namespace zk
