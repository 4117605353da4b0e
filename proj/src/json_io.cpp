#include "qdlab/json_io.hpp"

namespace qdlab {

using nlohmann::json;

namespace {

[[noreturn]] void bad(const std::string& what) { throw Error(ErrorCode::kParseError, what); }

const json& field(const json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) bad(std::string("missing field '") + key + "'");
  return j.at(key);
}

double number(const json& j, const char* key) {
  const json& v = field(j, key);
  if (!v.is_number()) bad(std::string("field '") + key + "' must be a number");
  return v.get<double>();
}

std::vector<DivisorPoint> divisor_from_json(const json& j, const char* key) {
  std::vector<DivisorPoint> out;
  if (!j.contains(key)) return out;
  const json& arr = j.at(key);
  if (!arr.is_array()) bad(std::string("field '") + key + "' must be an array");
  for (const json& e : arr) {
    DivisorPoint p;
    if (e.is_object()) {
      p.z = complex_from_json(field(e, "z"));
      if (e.contains("mult")) {
        if (!e.at("mult").is_number_integer()) bad("multiplicity must be an integer");
        p.mult = e.at("mult").get<int>();
      }
    } else {
      p.z = complex_from_json(e);
    }
    out.push_back(p);
  }
  return out;
}

json divisor_to_json(std::span<const DivisorPoint> pts) {
  json arr = json::array();
  for (const auto& p : pts) arr.push_back({{"z", complex_to_json(p.z)}, {"mult", p.mult}});
  return arr;
}

}  // namespace

cplx complex_from_json(const json& j) {
  if (j.is_number()) return {j.get<double>(), 0.0};
  if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number()) {
    return {j[0].get<double>(), j[1].get<double>()};
  }
  bad("complex numbers are written [re, im] or as a real number");
}

json complex_to_json(cplx z) { return json::array({z.real(), z.imag()}); }

RationalQD qd_from_json(const json& j) {
  if (!j.is_object()) bad("differential must be a JSON object");
  const cplx leading = j.contains("leading") ? complex_from_json(j.at("leading")) : cplx(1.0);
  return RationalQD(leading, divisor_from_json(j, "zeros"), divisor_from_json(j, "poles"));
}

json qd_to_json(const RationalQD& q) {
  return {{"leading", complex_to_json(q.leading())},
          {"zeros", divisor_to_json(q.zeros())},
          {"poles", divisor_to_json(q.poles())}};
}

Region region_from_json(const json& j) {
  const json& t = field(j, "type");
  if (!t.is_string()) bad("region type must be a string");
  const std::string type = t.get<std::string>();
  if (type == "plane") return Region::plane();
  if (type == "disk") {
    const double r = j.contains("radius") ? number(j, "radius") : number(j, "R");
    return Region::disk(complex_from_json(field(j, "center")), r);
  }
  if (type == "annulus") return Region::annulus(complex_from_json(field(j, "center")), number(j, "r"), number(j, "R"));
  if (type == "halfstrip") return Region::halfstrip(number(j, "Y"));
  if (type == "polygon") {
    std::vector<cplx> v;
    const json& arr = field(j, "vertices");
    if (!arr.is_array()) bad("polygon vertices must be an array");
    for (const json& e : arr) v.push_back(complex_from_json(e));
    return Region::polygon(std::move(v));
  }
  if (type == "complement") return Region::complement(region_from_json(field(j, "of")));
  if (type == "intersection" || type == "union") {
    const json& arr = field(j, "regions");
    if (!arr.is_array() || arr.empty()) bad("'regions' must be a nonempty array");
    Region acc = region_from_json(arr[0]);
    for (std::size_t i = 1; i < arr.size(); ++i) {
      const Region next = region_from_json(arr[i]);
      acc = type == "union" ? Region::unite(acc, next) : Region::intersection(acc, next);
    }
    return acc;
  }
  bad("unknown region type '" + type + "'");
}

json parse_json(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::kParseError, e.what());
  }
}

}  // namespace qdlab
