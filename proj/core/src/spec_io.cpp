#include "geoindex/spec_io.hpp"

#include <cmath>
#include <fstream>
#include <sstream>
#include <vector>

#include <json.hpp>

#include "geoindex/errors.hpp"
#include "geoindex/expression.hpp"

namespace geoindex::spec_io {

namespace {

using nlohmann::json;

void check_keys(const json& j, const char* where, std::initializer_list<const char*> allowed) {
    for (const auto& item : j.items()) {
        bool known = false;
        for (const char* key : allowed)
            if (item.key() == key) known = true;
        if (!known)
            throw ConfigError("unknown key '" + item.key() + "' in " + where);
    }
}

const json& require(const json& j, const char* key, const char* where) {
    const auto it = j.find(key);
    if (it == j.end())
        throw ConfigError(std::string("missing key '") + key + "' in " + where);
    return *it;
}

double number_at(const json& j, const char* key, const char* where) {
    const json& v = require(j, key, where);
    if (!v.is_number())
        throw ConfigError(std::string("'") + key + "' in " + where + " must be a number");
    return v.get<double>();
}

int int_at(const json& j, const char* key, const char* where) {
    const json& v = require(j, key, where);
    if (!v.is_number_integer())
        throw ConfigError(std::string("'") + key + "' in " + where + " must be an integer");
    return v.get<int>();
}

std::string string_at(const json& j, const char* key, const char* where) {
    const json& v = require(j, key, where);
    if (!v.is_string())
        throw ConfigError(std::string("'") + key + "' in " + where +
                          " must be an expression string");
    return v.get<std::string>();
}

Eigen::Vector2d point_at(const json& j, const char* key, const char* where) {
    const json& v = require(j, key, where);
    if (!v.is_array() || v.size() != 2 || !v[0].is_number() || !v[1].is_number())
        throw ConfigError(std::string("'") + key + "' in " + where +
                          " must be an array of two numbers");
    return {v[0].get<double>(), v[1].get<double>()};
}

ManifoldFile parse_constant_curvature(const json& j) {
    check_keys(j, "a constant-curvature spec", {"kind", "dim", "kappa"});
    geom::ConstantCurvature cc;
    cc.dim = int_at(j, "dim", "a constant-curvature spec");
    cc.kappa = number_at(j, "kappa", "a constant-curvature spec");
    if (cc.dim < 2) throw ConfigError("'dim' must be at least 2");
    if (!std::isfinite(cc.kappa)) throw ConfigError("'kappa' must be finite");
    ManifoldFile file;
    file.spec = cc;
    return file;
}

ManifoldFile parse_metric2d(const json& j) {
    const char* where = "a metric2d spec";
    check_keys(j, where,
               {"kind", "g11", "g12", "g22", "partials", "fd_step", "start", "direction",
                "steps"});
    geom::Metric2D m;
    m.g11 = expr::compile(string_at(j, "g11", where));
    m.g12 = expr::compile(string_at(j, "g12", where));
    m.g22 = expr::compile(string_at(j, "g22", where));
    if (j.contains("partials")) {
        const json& p = j["partials"];
        if (!p.is_object()) throw ConfigError("'partials' must be an object");
        const char* pwhere = "'partials'";
        check_keys(p, pwhere, {"g11_x", "g11_y", "g12_x", "g12_y", "g22_x", "g22_y"});
        geom::Metric2D::Partials partials;
        partials.g11_x = expr::compile(string_at(p, "g11_x", pwhere));
        partials.g11_y = expr::compile(string_at(p, "g11_y", pwhere));
        partials.g12_x = expr::compile(string_at(p, "g12_x", pwhere));
        partials.g12_y = expr::compile(string_at(p, "g12_y", pwhere));
        partials.g22_x = expr::compile(string_at(p, "g22_x", pwhere));
        partials.g22_y = expr::compile(string_at(p, "g22_y", pwhere));
        m.partials = std::move(partials);
    }
    if (j.contains("fd_step")) {
        m.fd_step = number_at(j, "fd_step", where);
        if (!(m.fd_step > 0.0)) throw ConfigError("'fd_step' must be positive");
    }
    ManifoldFile file;
    file.start = point_at(j, "start", where);
    file.direction = point_at(j, "direction", where);
    if (file.direction.norm() == 0.0) throw ConfigError("'direction' must be nonzero");
    if (j.contains("steps")) {
        const int steps = int_at(j, "steps", where);
        if (steps < 100) throw ConfigError("'steps' must be at least 100");
        file.steps = steps;
    }
    file.spec = std::move(m);
    return file;
}

ManifoldFile parse_direct(const json& j) {
    const char* where = "a direct spec";
    check_keys(j, where, {"kind", "entries"});
    const json& rows = require(j, "entries", where);
    if (!rows.is_array() || rows.empty())
        throw ConfigError("'entries' must be a non-empty square array of expression strings");
    const int n = static_cast<int>(rows.size());
    std::vector<std::vector<expr::Expression>> entries;
    for (const json& row : rows) {
        if (!row.is_array() || static_cast<int>(row.size()) != n)
            throw ConfigError("'entries' must be a non-empty square array of expression strings");
        auto& out = entries.emplace_back();
        for (const json& cell : row) {
            if (!cell.is_string())
                throw ConfigError("'entries' must contain expression strings");
            out.push_back(expr::compile(cell.get<std::string>()));
            if (out.back().uses_y())
                throw ConfigError("direct profile entries are functions of x only");
        }
    }

    // unsymmetric entries are a spec mistake, not something to average away
    for (double x : {0.0, 0.37, 1.0}) {
        for (int i = 0; i < n; ++i)
            for (int k = i + 1; k < n; ++k) {
                const double a = entries[i][k](x), b = entries[k][i](x);
                if (std::abs(a - b) > 1e-12 * std::max({1.0, std::abs(a), std::abs(b)})) {
                    std::ostringstream msg;
                    msg << "'entries' is not symmetric: [" << i << "][" << k << "] and ["
                        << k << "][" << i << "] differ at x = " << x;
                    throw ConfigError(msg.str());
                }
            }
    }

    CurvatureProfile profile;
    profile.n_normal = n;
    profile.eval = [entries, n](double x) {
        Eigen::MatrixXd s(n, n);
        for (int i = 0; i < n; ++i)
            for (int k = 0; k < n; ++k) s(i, k) = entries[i][k](x);
        return SymMatrix(s);
    };
    ManifoldFile file;
    file.spec = geom::DirectProfile{std::move(profile)};
    return file;
}

}  // namespace

ManifoldFile parse_manifold(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("manifold spec is not valid JSON: ") + e.what());
    }
    if (!j.is_object()) throw ConfigError("manifold spec must be a JSON object");
    const std::string kind = string_at(j, "kind", "a manifold spec");
    if (kind == "constant-curvature") return parse_constant_curvature(j);
    if (kind == "metric2d") return parse_metric2d(j);
    if (kind == "direct") return parse_direct(j);
    throw ConfigError("unknown manifold kind '" + kind +
                      "' (expected constant-curvature, metric2d or direct)");
}

ManifoldFile load_manifold(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot read manifold spec file '" + path + "'");
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse_manifold(buffer.str());
}

}  // namespace geoindex::spec_io
