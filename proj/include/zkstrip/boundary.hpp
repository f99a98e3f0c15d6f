#ifndef ZKSTRIP_BOUNDARY_HPP
#define ZKSTRIP_BOUNDARY_HPP

#include <string>

#include "zkstrip/error.hpp"

namespace zk {

// The four y-boundary families on the strip (0,L).
enum class BoundaryCase {
    DirichletDirichlet, // a: u(x,0) = u(x,L) = 0
    NeumannNeumann,     // b: u_y(x,0) = u_y(x,L) = 0
    DirichletNeumann,   // c: u(x,0) = u_y(x,L) = 0
    Periodic            // d: u L-periodic in y
};

inline char boundary_tag(BoundaryCase bc) {
    switch (bc) {
        case BoundaryCase::DirichletDirichlet: return 'a';
        case BoundaryCase::NeumannNeumann: return 'b';
        case BoundaryCase::DirichletNeumann: return 'c';
        case BoundaryCase::Periodic: return 'd';
    }
    return '?';
}

inline BoundaryCase boundary_from_tag(const std::string& s) {
    if (s == "a" || s == "dirichlet") return BoundaryCase::DirichletDirichlet;
    if (s == "b" || s == "neumann") return BoundaryCase::NeumannNeumann;
    if (s == "c" || s == "mixed") return BoundaryCase::DirichletNeumann;
    if (s == "d" || s == "periodic") return BoundaryCase::Periodic;
    fail(Errc::config, "unknown boundary case '" + s + "' (expected a|b|c|d)");
}

} // namespace zk

#endif
