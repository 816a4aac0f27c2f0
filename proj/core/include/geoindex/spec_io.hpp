#pragma once

#include <Eigen/Core>
#include <optional>
#include <string>

#include "geoindex/geometry.hpp"

namespace geoindex::spec_io {

// A manifold specification loaded from a JSON file.  start/direction are
// meaningful for metric2d only; steps is the optional trajectory resolution
// carried by the file (command-line knobs take precedence).
struct ManifoldFile {
    geom::ManifoldSpec spec;
    Eigen::Vector2d start = Eigen::Vector2d::Zero();
    Eigen::Vector2d direction = Eigen::Vector2d::Zero();
    std::optional<int> steps;
};

// Parse the declarative manifold format.  Three kinds are accepted:
//
//   {"kind": "constant-curvature", "dim": 2, "kappa": 1.0}
//
//   {"kind": "metric2d",
//    "g11": "1/y^2", "g12": "0", "g22": "1/y^2",     expressions over x, y
//    "start": [0, 1], "direction": [0, 1],
//    "partials": {"g11_x": "0", ..., "g22_y": "..."},  optional, all six
//    "fd_step": 1e-5, "steps": 2000}                   optional
//
//   {"kind": "direct", "entries": [["(2.5*pi)^2"]]}    n x n, expressions
//                                                      over x only
//
// Parsing is strict: unknown keys, missing keys, wrong types, malformed
// expressions, non-symmetric direct entries and a zero direction are all
// ConfigError.
ManifoldFile parse_manifold(const std::string& text);

// Read the file and parse it; unreadable files are ConfigError.
ManifoldFile load_manifold(const std::string& path);

}  // namespace geoindex::spec_io
