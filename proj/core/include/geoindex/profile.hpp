#pragma once

#include <functional>
#include <utility>

#include "geoindex/sym.hpp"

namespace geoindex {

// Curvature data of a geodesic reduced to the interval: x in [0, 1] maps to
// the symmetric matrix S(x) acting on the normal space, expressed in a
// parallel orthonormal frame.  This is the single object the Jacobi and
// index machinery consume; they never look at the manifold again.
struct CurvatureProfile {
    int n_normal = 0;
    std::function<SymMatrix(double)> eval;

    static CurvatureProfile constant(SymMatrix s) {
        const int n = s.dim();
        return CurvatureProfile{n, [s = std::move(s)](double) { return s; }};
    }
};

}  // namespace geoindex
