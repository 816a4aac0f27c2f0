#include "geoindex/geometry.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <array>
#include <cmath>
#include <memory>
#include <sstream>

namespace geoindex::geom {

namespace {

constexpr double kSecondDiffStep = 2.5e-4;
constexpr int kRenormalizeEvery = 32;
constexpr double kFrameTol = 1e-12;

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};

Eigen::Matrix2d components_raw(const Metric2D& m, double x, double y) {
    Eigen::Matrix2d g;
    const double e = m.g11(x, y);
    const double f = m.g12(x, y);
    const double gg = m.g22(x, y);
    g << e, f, f, gg;
    return g;
}

[[noreturn]] void throw_degenerate(const char* what, const Eigen::Vector2d& p) {
    std::ostringstream msg;
    msg << what << " at (" << p.x() << ", " << p.y() << ")";
    throw MetricDegenerateError(msg.str());
}

// d[0] = d/dx of the component matrix, d[1] = d/dy.
std::array<Eigen::Matrix2d, 2> metric_partials(const Metric2D& m, double x, double y) {
    std::array<Eigen::Matrix2d, 2> d;
    if (m.partials) {
        const Metric2D::Partials& p = *m.partials;
        d[0] << p.g11_x(x, y), p.g12_x(x, y), p.g12_x(x, y), p.g22_x(x, y);
        d[1] << p.g11_y(x, y), p.g12_y(x, y), p.g12_y(x, y), p.g22_y(x, y);
    } else {
        const double h = m.fd_step;
        d[0] = (components_raw(m, x + h, y) - components_raw(m, x - h, y)) / (2.0 * h);
        d[1] = (components_raw(m, x, y + h) - components_raw(m, x, y - h)) / (2.0 * h);
    }
    if (!d[0].allFinite() || !d[1].allFinite())
        throw_degenerate("metric derivatives are not finite", {x, y});
    return d;
}

struct Christoffels {
    std::array<Eigen::Matrix2d, 2> gamma;  // gamma[k](i, j)
};

Christoffels christoffels_at(const Metric2D& m, const Eigen::Vector2d& p) {
    const Eigen::Matrix2d g = metric_at(m, p);
    const auto dg = metric_partials(m, p.x(), p.y());
    const Eigen::Matrix2d ginv = g.inverse();
    Christoffels ch;
    for (int k = 0; k < 2; ++k) {
        for (int i = 0; i < 2; ++i) {
            for (int j = 0; j < 2; ++j) {
                double sum = 0.0;
                for (int l = 0; l < 2; ++l)
                    sum += ginv(k, l) * (dg[i](j, l) + dg[j](i, l) - dg[l](i, j));
                ch.gamma[k](i, j) = 0.5 * sum;
            }
        }
    }
    return ch;
}

Eigen::Vector2d geodesic_accel(const Christoffels& ch, const Eigen::Vector2d& v) {
    return {-v.dot(ch.gamma[0] * v), -v.dot(ch.gamma[1] * v)};
}

double metric_norm(const Eigen::Matrix2d& g, const Eigen::Vector2d& v) {
    return std::sqrt(v.dot(g * v));
}

}  // namespace

Eigen::Matrix2d metric_at(const Metric2D& m, const Eigen::Vector2d& p) {
    if (!m.g11 || !m.g12 || !m.g22)
        throw std::invalid_argument("Metric2D: all three components must be set");
    const Eigen::Matrix2d g = components_raw(m, p.x(), p.y());
    if (!g.allFinite()) throw_degenerate("metric is not finite", p);
    const double det = g(0, 0) * g(1, 1) - g(0, 1) * g(0, 1);
    if (!(g(0, 0) > 0.0) || !(det > 0.0))
        throw_degenerate("metric is not positive definite", p);
    return g;
}

double gaussian_curvature(const Metric2D& m, const Eigen::Vector2d& p) {
    const double x = p.x(), y = p.y();
    const Eigen::Matrix2d g = metric_at(m, p);
    const double E = g(0, 0), F = g(0, 1), G = g(1, 1);
    const auto dg = metric_partials(m, x, y);
    const double E_x = dg[0](0, 0), E_y = dg[1](0, 0);
    const double F_x = dg[0](0, 1), F_y = dg[1](0, 1);
    const double G_x = dg[0](1, 1), G_y = dg[1](1, 1);

    double E_yy, G_xx, F_xy;
    if (m.partials) {
        const Metric2D::Partials& pr = *m.partials;
        const double h = m.fd_step;
        E_yy = (pr.g11_y(x, y + h) - pr.g11_y(x, y - h)) / (2.0 * h);
        G_xx = (pr.g22_x(x + h, y) - pr.g22_x(x - h, y)) / (2.0 * h);
        F_xy = (pr.g12_x(x, y + h) - pr.g12_x(x, y - h)) / (2.0 * h);
    } else {
        const double h = std::max(m.fd_step, kSecondDiffStep);
        E_yy = (m.g11(x, y + h) - 2.0 * E + m.g11(x, y - h)) / (h * h);
        G_xx = (m.g22(x + h, y) - 2.0 * G + m.g22(x - h, y)) / (h * h);
        F_xy = (m.g12(x + h, y + h) - m.g12(x + h, y - h) - m.g12(x - h, y + h) +
                m.g12(x - h, y - h)) /
               (4.0 * h * h);
    }
    if (!std::isfinite(E_yy) || !std::isfinite(G_xx) || !std::isfinite(F_xy))
        throw_degenerate("metric second derivatives are not finite", p);

    // Brioschi formula
    Eigen::Matrix3d m1, m2;
    m1 << -0.5 * E_yy + F_xy - 0.5 * G_xx, 0.5 * E_x, F_x - 0.5 * E_y,
          F_y - 0.5 * G_x,                 E,         F,
          0.5 * G_y,                       F,         G;
    m2 << 0.0,       0.5 * E_y, 0.5 * G_x,
          0.5 * E_y, E,         F,
          0.5 * G_x, F,         G;
    const double det_g = E * G - F * F;
    return (m1.determinant() - m2.determinant()) / (det_g * det_g);
}

GeodesicRecord shoot_geodesic(const Metric2D& m, const Eigen::Vector2d& start,
                              const Eigen::Vector2d& direction, int steps) {
    if (steps < 2) throw std::invalid_argument("shoot_geodesic: steps must be >= 2");
    if (direction.norm() == 0.0)
        throw std::invalid_argument("shoot_geodesic: direction must be nonzero");

    GeodesicRecord rec;
    rec.dim = 2;
    rec.speed = metric_norm(metric_at(m, start), direction);
    rec.grid.resize(steps + 1);
    rec.position.resize(steps + 1);
    rec.velocity.resize(steps + 1);

    const double h = 1.0 / steps;
    Eigen::Vector2d p = start, v = direction;
    rec.grid[0] = 0.0;
    rec.position[0] = p;
    rec.velocity[0] = v;

    const auto accel = [&m](const Eigen::Vector2d& pos, const Eigen::Vector2d& vel) {
        return geodesic_accel(christoffels_at(m, pos), vel);
    };
    for (int i = 0; i < steps; ++i) {
        const Eigen::Vector2d k1p = v, k1v = accel(p, v);
        const Eigen::Vector2d k2p = v + 0.5 * h * k1v, k2v = accel(p + 0.5 * h * k1p, k2p);
        const Eigen::Vector2d k3p = v + 0.5 * h * k2v, k3v = accel(p + 0.5 * h * k2p, k3p);
        const Eigen::Vector2d k4p = v + h * k3v, k4v = accel(p + h * k3p, k4p);
        p += (h / 6.0) * (k1p + 2.0 * k2p + 2.0 * k3p + k4p);
        v += (h / 6.0) * (k1v + 2.0 * k2v + 2.0 * k3v + k4v);
        rec.grid[i + 1] = static_cast<double>(i + 1) / steps;
        rec.position[i + 1] = p;
        rec.velocity[i + 1] = v;
    }
    return rec;
}

void parallel_frame(const Metric2D& m, GeodesicRecord& rec) {
    if (rec.position.size() != rec.grid.size() || rec.grid.size() < 2)
        throw std::invalid_argument("parallel_frame: record has no integrated trajectory");
    const int steps = static_cast<int>(rec.grid.size()) - 1;
    const double h = 1.0 / steps;

    Eigen::Vector2d p = rec.position[0], v = rec.velocity[0];
    const Eigen::Matrix2d g0 = metric_at(m, p);
    const Eigen::Vector2d t0 = v / metric_norm(g0, v);

    Eigen::Vector2d e = Eigen::Vector2d::Zero();
    bool seeded = false;
    for (int axis = 0; axis < 2 && !seeded; ++axis) {
        Eigen::Vector2d cand = Eigen::Vector2d::Unit(axis);
        cand -= cand.dot(g0 * t0) * t0;
        const double norm = metric_norm(g0, cand);
        if (norm >= kFrameTol) {
            e = cand / norm;
            seeded = true;
        }
    }
    if (!seeded)
        throw FrameDegenerateError("no coordinate axis is admissible at the start point");

    rec.frame.assign(rec.grid.size(), Eigen::Vector2d::Zero());
    rec.frame[0] = e;

    const auto accel = [&m](const Eigen::Vector2d& pos, const Eigen::Vector2d& vel) {
        return geodesic_accel(christoffels_at(m, pos), vel);
    };
    const auto transport = [&m](const Eigen::Vector2d& pos, const Eigen::Vector2d& vel,
                                const Eigen::Vector2d& fr) {
        const Christoffels ch = christoffels_at(m, pos);
        return Eigen::Vector2d{-vel.dot(ch.gamma[0] * fr), -vel.dot(ch.gamma[1] * fr)};
    };
    for (int i = 0; i < steps; ++i) {
        const Eigen::Vector2d k1p = v, k1v = accel(p, v), k1e = transport(p, v, e);
        const Eigen::Vector2d p2 = p + 0.5 * h * k1p, v2 = v + 0.5 * h * k1v,
                              e2 = e + 0.5 * h * k1e;
        const Eigen::Vector2d k2p = v2, k2v = accel(p2, v2), k2e = transport(p2, v2, e2);
        const Eigen::Vector2d p3 = p + 0.5 * h * k2p, v3 = v + 0.5 * h * k2v,
                              e3 = e + 0.5 * h * k2e;
        const Eigen::Vector2d k3p = v3, k3v = accel(p3, v3), k3e = transport(p3, v3, e3);
        const Eigen::Vector2d p4 = p + h * k3p, v4 = v + h * k3v, e4 = e + h * k3e;
        const Eigen::Vector2d k4p = v4, k4v = accel(p4, v4), k4e = transport(p4, v4, e4);
        p += (h / 6.0) * (k1p + 2.0 * k2p + 2.0 * k3p + k4p);
        v += (h / 6.0) * (k1v + 2.0 * k2v + 2.0 * k3v + k4v);
        e += (h / 6.0) * (k1e + 2.0 * k2e + 2.0 * k3e + k4e);

        if ((i + 1) % kRenormalizeEvery == 0 || i + 1 == steps) {
            const Eigen::Matrix2d g = metric_at(m, p);
            const Eigen::Vector2d t = v / metric_norm(g, v);
            e -= e.dot(g * t) * t;
            const double norm = metric_norm(g, e);
            if (norm < kFrameTol)
                throw FrameDegenerateError("transported frame collapsed onto the tangent");
            e /= norm;
        }
        rec.frame[i + 1] = e;
    }
}

CurvatureProfile curvature_profile(const ManifoldSpec& spec, const GeodesicRecord& record) {
    return std::visit(
        overloaded{
            [&](const ConstantCurvature& cc) -> CurvatureProfile {
                if (cc.dim < 2) throw ConfigError("constant-curvature dim must be >= 2");
                if (!(record.speed > 0.0))
                    throw std::invalid_argument("curvature_profile: record carries no speed");
                const double c2k = record.speed * record.speed * cc.kappa;
                return CurvatureProfile::constant(
                    SymMatrix(c2k * Eigen::MatrixXd::Identity(cc.dim - 1, cc.dim - 1)));
            },
            [&](const DirectProfile& dp) -> CurvatureProfile {
                if (dp.profile.n_normal < 1 || !dp.profile.eval)
                    throw ConfigError("direct profile is empty");
                return dp.profile;
            },
            [&](const Metric2D& m) -> CurvatureProfile {
                if (record.position.size() != record.grid.size() || record.grid.size() < 2)
                    throw std::invalid_argument(
                        "curvature_profile: record has no integrated trajectory");
                if (record.frame.size() != record.grid.size())
                    throw std::invalid_argument(
                        "curvature_profile: attach a parallel frame first");
                const auto rec = std::make_shared<const GeodesicRecord>(record);
                const double c2 = record.speed * record.speed;
                CurvatureProfile out;
                out.n_normal = 1;
                out.eval = [rec, m, c2](double xin) {
                    const double x = std::clamp(xin, 0.0, 1.0);
                    const int steps = static_cast<int>(rec->grid.size()) - 1;
                    const int cell = std::min(static_cast<int>(x * steps), steps - 1);
                    const double h = 1.0 / steps;
                    const double s = x * steps - cell;
                    const double s2 = s * s, s3 = s2 * s;
                    // cubic Hermite through the two nodes of the cell
                    const Eigen::Vector2d pos =
                        (2.0 * s3 - 3.0 * s2 + 1.0) * rec->position[cell] +
                        (s3 - 2.0 * s2 + s) * (h * rec->velocity[cell]) +
                        (-2.0 * s3 + 3.0 * s2) * rec->position[cell + 1] +
                        (s3 - s2) * (h * rec->velocity[cell + 1]);
                    const double k = gaussian_curvature(m, pos);
                    return SymMatrix(Eigen::MatrixXd::Constant(1, 1, c2 * k));
                };
                return out;
            }},
        spec);
}

CurvatureProfile rescale_profile(const CurvatureProfile& s, double lambda) {
    if (!s.eval) throw std::invalid_argument("rescale_profile: empty profile");
    if (!(lambda >= 0.0 && lambda <= 1.0))
        throw std::invalid_argument("rescale_profile: lambda must lie in [0, 1]");
    CurvatureProfile out;
    out.n_normal = s.n_normal;
    out.eval = [inner = s.eval, lambda](double x) {
        return SymMatrix(lambda * lambda * inner(lambda * x).mat());
    };
    return out;
}

GeodesicRecord synthetic_record(int dim, double speed, int steps) {
    if (dim < 2) throw std::invalid_argument("synthetic_record: dim must be >= 2");
    if (!(speed > 0.0)) throw std::invalid_argument("synthetic_record: speed must be positive");
    if (steps < 2) throw std::invalid_argument("synthetic_record: steps must be >= 2");
    GeodesicRecord rec;
    rec.dim = dim;
    rec.speed = speed;
    rec.grid.resize(steps + 1);
    for (int i = 0; i <= steps; ++i) rec.grid[i] = static_cast<double>(i) / steps;
    return rec;
}

const std::vector<CatalogEntry>& builtin_catalog() {
    static const std::vector<CatalogEntry> entries = [] {
        const auto zero = [](double, double) { return 0.0; };
        std::vector<CatalogEntry> v;

        v.push_back({"flat", "Euclidean plane (kappa = 0)", ConstantCurvature{2, 0.0}});
        v.push_back({"sphere-constcurv", "unit sphere as a space form (kappa = +1)",
                     ConstantCurvature{2, 1.0}});
        v.push_back({"hyperbolic-constcurv", "hyperbolic plane as a space form (kappa = -1)",
                     ConstantCurvature{2, -1.0}});

        Metric2D halfplane;
        halfplane.g11 = [](double, double y) { return 1.0 / (y * y); };
        halfplane.g12 = zero;
        halfplane.g22 = [](double, double y) { return 1.0 / (y * y); };
        Metric2D::Partials hp;
        hp.g11_x = zero;
        hp.g11_y = [](double, double y) { return -2.0 / (y * y * y); };
        hp.g12_x = zero;
        hp.g12_y = zero;
        hp.g22_x = zero;
        hp.g22_y = [](double, double y) { return -2.0 / (y * y * y); };
        halfplane.partials = hp;
        v.push_back({"halfplane-metric2d",
                     "Poincare upper half-plane (coordinates x, y > 0), vertical ray",
                     halfplane,
                     {0.0, 1.0},
                     {0.0, 1.0}});

        Metric2D sphere;
        sphere.g11 = [](double, double) { return 1.0; };
        sphere.g12 = zero;
        sphere.g22 = [](double x, double) { return std::sin(x) * std::sin(x); };
        Metric2D::Partials sp;
        sp.g11_x = zero;
        sp.g11_y = zero;
        sp.g12_x = zero;
        sp.g12_y = zero;
        sp.g22_x = [](double x, double) { return std::sin(2.0 * x); };
        sp.g22_y = zero;
        sphere.partials = sp;
        v.push_back({"sphere-metric2d",
                     "round sphere in polar coordinates (x = colatitude), equator start",
                     sphere,
                     {M_PI / 2.0, 0.0},
                     {0.0, 1.0}});
        return v;
    }();
    return entries;
}

const CatalogEntry& catalog_entry(const std::string& name) {
    for (const CatalogEntry& e : builtin_catalog())
        if (e.name == name) return e;
    std::ostringstream msg;
    msg << "unknown builtin '" << name << "'; available:";
    for (const CatalogEntry& e : builtin_catalog()) msg << " " << e.name;
    throw ConfigError(msg.str());
}

}  // namespace geoindex::geom
