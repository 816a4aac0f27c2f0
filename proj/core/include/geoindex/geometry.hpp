#pragma once

#include <Eigen/Core>
#include <functional>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "geoindex/errors.hpp"
#include "geoindex/profile.hpp"

namespace geoindex::geom {

struct Defaults {
    static constexpr int steps = 2000;
    static constexpr double fd_step = 1e-5;
};

// Space form of dimension dim >= 2 with constant sectional curvature kappa.
// Geodesics need no coordinates: the curvature profile is closed-form.
struct ConstantCurvature {
    int dim = 2;
    double kappa = 0.0;
};

// Riemannian metric on a coordinate patch of a surface, given by the three
// component functions of [[g11, g12], [g12, g22]] in coordinates (x, y).
// First partial derivatives may be supplied in closed form; otherwise they
// are taken by central differences with step fd_step.  The second partials
// entering the curvature are always finite differences: of the closed-form
// first partials with step fd_step when available, of the components
// themselves with step max(fd_step, 2.5e-4) when not (the wider step keeps
// the roundoff of a second difference, ~eps/h^2, below the truncation term).
struct Metric2D {
    using Component = std::function<double(double, double)>;

    Component g11, g12, g22;

    struct Partials {
        Component g11_x, g11_y;
        Component g12_x, g12_y;
        Component g22_x, g22_y;
    };
    std::optional<Partials> partials;
    double fd_step = Defaults::fd_step;
};

// A curvature profile handed over verbatim, bypassing any geometry.
struct DirectProfile {
    CurvatureProfile profile;
};

using ManifoldSpec = std::variant<ConstantCurvature, Metric2D, DirectProfile>;

// A unit-interval parameterized geodesic.  speed is the constant metric norm
// of the velocity, i.e. the total length of the geodesic.  position/velocity
// are filled by shoot_geodesic (Metric2D sources only); frame is attached by
// parallel_frame and holds one metric-unit normal per node.
struct GeodesicRecord {
    int dim = 2;
    double speed = 0.0;
    std::vector<double> grid;
    std::vector<Eigen::Vector2d> position;
    std::vector<Eigen::Vector2d> velocity;
    std::vector<Eigen::Vector2d> frame;
};

// Metric matrix at a point.  Throws MetricDegenerateError unless the result
// is finite and positive definite.
Eigen::Matrix2d metric_at(const Metric2D& m, const Eigen::Vector2d& p);

// Gauss curvature by the Brioschi formula.
double gaussian_curvature(const Metric2D& m, const Eigen::Vector2d& p);

// Integrate the geodesic equation with classical RK4 from p(0) = start,
// p'(0) = direction over t in [0, 1] on a uniform grid of `steps` cells.
// The metric length of the geodesic equals the metric norm of direction.
GeodesicRecord shoot_geodesic(const Metric2D& m, const Eigen::Vector2d& start,
                              const Eigen::Vector2d& direction, int steps = Defaults::steps);

// Parallel-transport a unit normal along the recorded geodesic and attach it.
// The seed is the first coordinate axis that stays admissible after
// projecting out the tangent; transport drift is corrected by
// re-orthonormalizing against the tangent every 32 steps.
void parallel_frame(const Metric2D& m, GeodesicRecord& record);

// Reduce a manifold description plus geodesic to the curvature profile S(x)
// in the parallel frame.  For ConstantCurvature the result is
// speed^2 * kappa * Id; for Metric2D the single normal direction contributes
// speed^2 * K(gamma(x)) with positions interpolated cubically between nodes;
// DirectProfile passes through.
CurvatureProfile curvature_profile(const ManifoldSpec& spec, const GeodesicRecord& record);

// Profile of the sub-geodesic [0, lambda] stretched back over the unit
// interval: x -> lambda^2 S(lambda x).  Requires 0 <= lambda <= 1.
CurvatureProfile rescale_profile(const CurvatureProfile& s, double lambda);

// Record for sources that never produce coordinates (constant curvature and
// direct profiles): grid, dimension and speed only.
GeodesicRecord synthetic_record(int dim, double speed, int steps = Defaults::steps);

struct CatalogEntry {
    std::string name;
    std::string summary;
    ManifoldSpec spec;
    Eigen::Vector2d start = Eigen::Vector2d::Zero();      // Metric2D entries only
    Eigen::Vector2d direction = Eigen::Vector2d::Zero();  // metric-unit speed
};

// The built-in worked examples reachable from the CLI by name.
const std::vector<CatalogEntry>& builtin_catalog();

// Lookup by name; throws ConfigError listing the valid names.
const CatalogEntry& catalog_entry(const std::string& name);

}  // namespace geoindex::geom
