#pragma once

// JSON model files.
//
//   {
//     "tolerance": 1e-7,                      (optional)
//     "entities": [
//       {"id": "F1", "kind": "plane", "position": [0,0,0], "normal": [0,0,1]},
//       {"id": "A", "kind": "cylinder", "position": [..], "direction": [..], "radius": 5}
//     ],
//     "constraints": [
//       {"id": "C1", "kind": "plane_plane_distance", "entities": ["F1","F2"], "value": 10}
//     ]
//   }
//
// Planes carry "normal"; lines, cylinders, cones and tori carry "direction".
// Cones take "half_angle" (radians), tori "radius" and "minor_radius".
// Angle values are in radians.

#include "gcsa/model.hpp"

#include <filesystem>
#include <optional>
#include <string>

namespace gcsa {

/// Malformed file: bad JSON syntax (with line/column) or a missing or
/// ill-typed field (with its path, e.g. entities[2].normal).
class ParseError : public ModelError {
 public:
  using ModelError::ModelError;
};

/// Parses a model document. `fallback_tolerance` applies when the document
/// has no "tolerance" key. `source` prefixes error messages.
VariationalModel parse_model(const std::string& text, const std::string& source = "<input>",
                             std::optional<double> fallback_tolerance = std::nullopt);

/// Reads and parses a file; unreadable paths raise ModelError.
VariationalModel load_model(const std::filesystem::path& path,
                            std::optional<double> fallback_tolerance = std::nullopt);

/// Pretty-printed JSON that parse_model reads back field for field.
std::string serialize_model(const VariationalModel& model);

}  // namespace gcsa
