#include "gcsa/model_io.hpp"

#include "json.hpp"

#include <fstream>
#include <sstream>
#include <utility>

namespace gcsa {

namespace {

using nlohmann::json;

struct Reader {
  std::string source;

  [[noreturn]] void fail(const std::string& path, const std::string& what) const {
    throw ParseError(source + ": " + path + " " + what);
  }

  const json& field(const json& obj, const std::string& path, const char* key) const {
    auto it = obj.find(key);
    if (it == obj.end()) fail(path + "." + key, "missing");
    return *it;
  }

  double number(const json& v, const std::string& path) const {
    if (!v.is_number()) fail(path, "must be a number");
    return v.get<double>();
  }

  std::string string(const json& v, const std::string& path) const {
    if (!v.is_string()) fail(path, "must be a string");
    return v.get<std::string>();
  }

  Vec3 vec3(const json& v, const std::string& path) const {
    if (!v.is_array() || v.size() != 3) fail(path, "must be an array of 3 numbers");
    Vec3 out;
    for (int i = 0; i < 3; ++i) out[i] = number(v[static_cast<std::size_t>(i)], path + "[" + std::to_string(i) + "]");
    return out;
  }
};

const char* orientation_key(EntityKind kind) { return kind == EntityKind::Plane ? "normal" : "direction"; }

// Line and column (1-based) of a byte offset.
std::pair<std::size_t, std::size_t> locate(const std::string& text, std::size_t offset) {
  std::size_t line = 1, col = 1;
  for (std::size_t i = 0; i < offset && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return {line, col};
}

}  // namespace

VariationalModel parse_model(const std::string& text, const std::string& source,
                             std::optional<double> fallback_tolerance) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& err) {
    const auto [line, col] = locate(text, err.byte == 0 ? 0 : err.byte - 1);
    std::ostringstream msg;
    msg << source << ":" << line << ":" << col << ": JSON syntax error";
    throw ParseError(msg.str());
  }

  const Reader r{source};
  if (!doc.is_object()) r.fail("document", "must be an object");

  double tolerance = fallback_tolerance.value_or(kDefaultTolerance);
  if (auto it = doc.find("tolerance"); it != doc.end()) tolerance = r.number(*it, "tolerance");

  const json& ents = r.field(doc, "document", "entities");
  if (!ents.is_array()) r.fail("entities", "must be an array");
  std::vector<GeometricEntity> entities;
  for (std::size_t i = 0; i < ents.size(); ++i) {
    const std::string path = "entities[" + std::to_string(i) + "]";
    const json& e = ents[i];
    if (!e.is_object()) r.fail(path, "must be an object");
    GeometricEntity out;
    out.id = r.string(r.field(e, path, "id"), path + ".id");
    const std::string kind = r.string(r.field(e, path, "kind"), path + ".kind");
    auto k = entity_kind_from_string(kind);
    if (!k) r.fail(path + ".kind", "unknown kind '" + kind + "'");
    out.kind = *k;
    out.position = r.vec3(r.field(e, path, "position"), path + ".position");
    if (has_orientation(out.kind)) {
      const char* key = orientation_key(out.kind);
      out.orientation = r.vec3(r.field(e, path, key), path + "." + key);
    }
    switch (out.kind) {
      case EntityKind::Cylinder:
      case EntityKind::Sphere:
        out.size_params = {r.number(r.field(e, path, "radius"), path + ".radius")};
        break;
      case EntityKind::Cone:
        out.size_params = {r.number(r.field(e, path, "half_angle"), path + ".half_angle")};
        break;
      case EntityKind::Torus:
        out.size_params = {r.number(r.field(e, path, "radius"), path + ".radius"),
                           r.number(r.field(e, path, "minor_radius"), path + ".minor_radius")};
        break;
      default:
        break;
    }
    entities.push_back(std::move(out));
  }

  std::vector<Constraint> constraints;
  if (auto it = doc.find("constraints"); it != doc.end()) {
    if (!it->is_array()) r.fail("constraints", "must be an array");
    for (std::size_t i = 0; i < it->size(); ++i) {
      const std::string path = "constraints[" + std::to_string(i) + "]";
      const json& c = (*it)[i];
      if (!c.is_object()) r.fail(path, "must be an object");
      Constraint out;
      out.id = r.string(r.field(c, path, "id"), path + ".id");
      const std::string kind = r.string(r.field(c, path, "kind"), path + ".kind");
      auto k = constraint_kind_from_string(kind);
      if (!k) r.fail(path + ".kind", "unknown kind '" + kind + "'");
      out.kind = *k;
      const json& refs = r.field(c, path, "entities");
      if (!refs.is_array()) r.fail(path + ".entities", "must be an array");
      for (std::size_t j = 0; j < refs.size(); ++j) {
        out.entity_refs.push_back(r.string(refs[j], path + ".entities[" + std::to_string(j) + "]"));
      }
      if (auto v = c.find("value"); v != c.end()) out.value = r.number(*v, path + ".value");
      constraints.push_back(std::move(out));
    }
  }

  return build_model(std::move(entities), std::move(constraints), tolerance);
}

VariationalModel load_model(const std::filesystem::path& path, std::optional<double> fallback_tolerance) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ModelError("cannot read '" + path.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_model(buf.str(), path.string(), fallback_tolerance);
}

std::string serialize_model(const VariationalModel& model) {
  using nlohmann::ordered_json;
  auto vec = [](const Vec3& v) { return ordered_json::array({v.x(), v.y(), v.z()}); };

  ordered_json doc;
  doc["tolerance"] = model.tolerance();
  doc["entities"] = ordered_json::array();
  for (const auto& e : model.entities()) {
    ordered_json j;
    j["id"] = e.id;
    j["kind"] = to_string(e.kind);
    j["position"] = vec(e.position);
    if (has_orientation(e.kind)) j[orientation_key(e.kind)] = vec(e.orientation);
    switch (e.kind) {
      case EntityKind::Cylinder:
      case EntityKind::Sphere:
        j["radius"] = e.size_params[0];
        break;
      case EntityKind::Cone:
        j["half_angle"] = e.size_params[0];
        break;
      case EntityKind::Torus:
        j["radius"] = e.size_params[0];
        j["minor_radius"] = e.size_params[1];
        break;
      default:
        break;
    }
    doc["entities"].push_back(std::move(j));
  }
  doc["constraints"] = ordered_json::array();
  for (const auto& c : model.constraints()) {
    ordered_json j;
    j["id"] = c.id;
    j["kind"] = to_string(c.kind);
    j["entities"] = c.entity_refs;
    if (c.value) j["value"] = *c.value;
    doc["constraints"].push_back(std::move(j));
  }
  return doc.dump(2) + "\n";
}

}  // namespace gcsa
