#pragma once

#include <string>

#include "json.hpp"

#include "galgeo/moore.hpp"
#include "galgeo/projection.hpp"

namespace galgeo {

// Reports use ordered JSON so identical inputs serialize byte-identically.
using ojson = nlohmann::ordered_json;

std::string method_name(MooreMethod m);

ojson to_json(const ProgressionInfo& p);
ojson to_json(const MooreVerdict& v);
ojson to_json(const MrdReport& rep);
ojson to_json(const IdealiserReport& rep);

// LinearSetSpec from its JSON document:
//   {"q":..,"n":..,"t":..,"h":..,"maps":[{"matrix":[[enc,..],..],"exponent":i},..]}
// or the identity-matrix shorthand {"q","n","t","exponents":[0,i2,...]}.
// The tower must match the document's q, n, t.
LinearSetSpec spec_from_json(const FieldTower& tw, const ojson& doc);
ojson spec_to_json(const LinearSetSpec& spec);

// Minimal JSON-schema checker covering the subset used by the shipped
// schemas: type (string or array), properties, required, items, enum,
// additionalProperties (bool). Returns an empty string on success, else a
// description of the first violation.
std::string validate_against_schema(const ojson& value, const ojson& schema);

}  // namespace galgeo
