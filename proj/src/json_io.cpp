#include "galgeo/json_io.hpp"

namespace galgeo {

std::string method_name(MooreMethod m) {
  switch (m) {
    case MooreMethod::det_oracle:
      return "det-oracle";
    case MooreMethod::mrd_criterion:
      return "mrd-criterion";
    case MooreMethod::both:
      return "both";
  }
  return "unknown";
}

ojson to_json(const ProgressionInfo& p) {
  ojson j;
  j["is_progression"] = p.is_progression;
  j["d"] = p.d;
  j["shift"] = p.shift;
  return j;
}

ojson to_json(const MooreVerdict& v) {
  ojson j;
  j["exps"] = v.I.exps;
  j["n"] = v.I.n;
  j["q"] = v.q;
  j["is_moore"] = v.is_moore;
  j["method"] = method_name(v.method);
  j["complement_fastpath"] = v.complement_fastpath;
  if (v.witness)
    j["witness"] = *v.witness;
  else
    j["witness"] = nullptr;
  j["progression"] = to_json(v.progression);
  return j;
}

ojson to_json(const MrdReport& rep) {
  ojson j;
  j["is_mrd"] = rep.is_mrd;
  j["min_distance"] = rep.min_distance;
  j["kernel_spectrum"] = rep.kernel_spectrum;
  if (rep.witness)
    j["witness"] = to_text(*rep.witness);
  else
    j["witness"] = nullptr;
  j["via_complement"] = rep.via_complement;
  return j;
}

ojson to_json(const IdealiserReport& rep) {
  ojson j;
  j["dim"] = rep.dim;
  ojson basis = ojson::array();
  for (const auto& f : rep.basis) basis.push_back(to_text(f));
  j["basis"] = basis;
  j["is_scalar_field"] = rep.is_scalar_field;
  return j;
}

LinearSetSpec spec_from_json(const FieldTower& tw, const ojson& doc) {
  auto require_u32 = [&](const char* key) -> uint32_t {
    if (!doc.contains(key) || !doc[key].is_number_unsigned())
      fail(Errc::bad_input, std::string("spec file: missing or invalid '") + key + "'");
    return doc[key].get<uint32_t>();
  };
  uint32_t q = require_u32("q"), n = require_u32("n"), t = require_u32("t");
  uint64_t qval = 1;
  for (uint32_t i = 0; i < tw.params().e; ++i) qval *= tw.params().p;
  if (q != qval || n != tw.params().n || t != tw.params().t)
    fail(Errc::tower_mismatch, "spec file parameters do not match the tower");

  LinearSetSpec spec;
  spec.tower = &tw;
  if (doc.contains("exponents")) {
    std::vector<uint32_t> exps = doc["exponents"].get<std::vector<uint32_t>>();
    spec = spec_from_exponents(tw, exps);
    if (doc.contains("h") && doc["h"].get<uint32_t>() != spec.h)
      fail(Errc::bad_input, "spec file: h does not match the exponent list");
    return spec;
  }
  spec.h = require_u32("h");
  if (!doc.contains("maps") || !doc["maps"].is_array())
    fail(Errc::bad_input, "spec file: 'maps' array required (or 'exponents' shorthand)");
  for (const auto& m : doc["maps"]) {
    SemilinearMap f;
    f.exponent = m.at("exponent").get<uint32_t>();
    auto rows = m.at("matrix").get<std::vector<std::vector<uint32_t>>>();
    if (rows.size() != t) fail(Errc::dimension_mismatch, "spec file: matrix must be t x t");
    f.matrix = Mat(LayerId::fqn, t, t);
    for (uint32_t i = 0; i < t; ++i) {
      if (rows[i].size() != t) fail(Errc::dimension_mismatch, "spec file: matrix must be t x t");
      for (uint32_t j = 0; j < t; ++j) {
        if (rows[i][j] >= tw.size(LayerId::fqn)) fail(Errc::bad_input, "spec file: entry out of range");
        f.matrix.at(i, j) = rows[i][j];
      }
    }
    spec.maps.push_back(std::move(f));
  }
  validate_spec(spec);
  return spec;
}

ojson spec_to_json(const LinearSetSpec& spec) {
  const FieldTower& tw = *spec.tower;
  ojson j;
  uint64_t qval = 1;
  for (uint32_t i = 0; i < tw.params().e; ++i) qval *= tw.params().p;
  j["q"] = qval;
  j["n"] = tw.params().n;
  j["t"] = tw.params().t;
  j["h"] = spec.h;
  ojson maps = ojson::array();
  for (const auto& f : spec.maps) {
    ojson m;
    ojson rows = ojson::array();
    for (uint32_t i = 0; i < f.matrix.rows; ++i) {
      ojson row = ojson::array();
      for (uint32_t jx = 0; jx < f.matrix.cols; ++jx) row.push_back(f.matrix.at(i, jx));
      rows.push_back(row);
    }
    m["matrix"] = rows;
    m["exponent"] = f.exponent;
    maps.push_back(m);
  }
  j["maps"] = maps;
  return j;
}

namespace {

bool type_matches(const ojson& value, const std::string& type) {
  if (type == "object") return value.is_object();
  if (type == "array") return value.is_array();
  if (type == "string") return value.is_string();
  if (type == "integer") return value.is_number_integer() || value.is_number_unsigned();
  if (type == "number") return value.is_number();
  if (type == "boolean") return value.is_boolean();
  if (type == "null") return value.is_null();
  return false;
}

}  // namespace

std::string validate_against_schema(const ojson& value, const ojson& schema) {
  if (schema.contains("type")) {
    const auto& t = schema["type"];
    bool ok = false;
    if (t.is_string())
      ok = type_matches(value, t.get<std::string>());
    else if (t.is_array())
      for (const auto& alt : t)
        if (type_matches(value, alt.get<std::string>())) ok = true;
    if (!ok) return "type mismatch: got " + std::string(value.type_name());
  }
  if (schema.contains("enum")) {
    bool ok = false;
    for (const auto& alt : schema["enum"])
      if (value == alt) ok = true;
    if (!ok) return "value not in enum";
  }
  if (value.is_object()) {
    if (schema.contains("required"))
      for (const auto& key : schema["required"])
        if (!value.contains(key.get<std::string>()))
          return "missing required key '" + key.get<std::string>() + "'";
    const ojson* props = schema.contains("properties") ? &schema["properties"] : nullptr;
    bool allow_extra = true;
    if (schema.contains("additionalProperties") && schema["additionalProperties"].is_boolean())
      allow_extra = schema["additionalProperties"].get<bool>();
    for (auto it = value.begin(); it != value.end(); ++it) {
      if (props && props->contains(it.key())) {
        std::string err = validate_against_schema(it.value(), (*props)[it.key()]);
        if (!err.empty()) return "at '" + it.key() + "': " + err;
      } else if (!allow_extra) {
        return "unexpected key '" + it.key() + "'";
      }
    }
  }
  if (value.is_array() && schema.contains("items")) {
    for (size_t i = 0; i < value.size(); ++i) {
      std::string err = validate_against_schema(value[i], schema["items"]);
      if (!err.empty()) return "at index " + std::to_string(i) + ": " + err;
    }
  }
  return {};
}

}  // namespace galgeo
