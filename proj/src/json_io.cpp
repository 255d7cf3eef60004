#include "pslab/json_io.hpp"

namespace pslab {

namespace {

Json poly_to_json(const Poly& p) {
  Json out = Json::array();
  for (const Cx& c : p) out.push_back(cx_to_json(c));
  return out;
}

Poly poly_from_json(const Json& j) {
  if (!j.is_array()) throw BadInput("polynomial must be a coefficient array");
  Poly p;
  for (const auto& c : j) p.push_back(cx_from_json(c));
  return p;
}

const char* kind_name(FormalKind k) {
  switch (k) {
    case FormalKind::RegularDiagonal: return "regular-diagonal";
    case FormalKind::RegularResonant: return "regular-resonant";
    case FormalKind::IrregularUnramified: return "irregular-unramified";
    case FormalKind::IrregularRamified: return "irregular-ramified";
  }
  return "?";
}

Json principal_part_to_json(const LaurentSeries& s) {
  Json out = Json::array();
  for (int k = s.min_order; k <= -1; ++k)
    out.push_back(Json::array({k, cx_to_json(s.coeff(k))}));
  return out;
}

}  // namespace

Json cx_to_json(const Cx& z) { return Json::array({z.real(), z.imag()}); }

Cx cx_from_json(const Json& j) {
  if (j.is_number()) return Cx(j.get<double>(), 0);
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number())
    throw BadInput("complex number must be [re, im]");
  return Cx(j[0].get<double>(), j[1].get<double>());
}

Json point_to_json(const P1Point& p) {
  if (p.infinite) return Json("inf");
  return cx_to_json(p.value);
}

P1Point point_from_json(const Json& j) {
  if (j.is_string()) {
    if (j.get<std::string>() == "inf") return P1Point::inf();
    throw BadInput("point must be [re, im] or \"inf\"");
  }
  return P1Point::at(cx_from_json(j));
}

Json rf_to_json(const RationalFunction& f) {
  return Json{{"num", poly_to_json(f.num())}, {"den", poly_to_json(f.den())}};
}

RationalFunction rf_from_json(const Json& j) {
  if (!j.is_object()) throw BadInput("rational function must be {num, den}");
  return RationalFunction(poly_from_json(json_field(j, "num")),
                          poly_from_json(json_field(j, "den")));
}

Json matrix_to_json(const Eigen::Matrix2cd& m) {
  Json out = Json::array();
  for (int i = 0; i < 2; ++i)
    out.push_back(Json::array({cx_to_json(m(i, 0)), cx_to_json(m(i, 1))}));
  return out;
}

Json divisor_to_json(const Divisor& d) {
  Json out = Json::array();
  for (const auto& e : d.entries)
    out.push_back(Json{{"point", point_to_json(e.point)}, {"mult", e.mult}});
  return out;
}

Divisor divisor_from_json(const Json& j) {
  if (!j.is_array()) throw BadInput("divisor must be an array");
  Divisor d;
  for (const auto& e : j)
    d.entries.push_back({point_from_json(json_field(e, "point")),
                         json_field(e, "mult").get<int>()});
  return d;
}

Json riccati_to_json(const RiccatiEq& r) {
  return Json{{"alpha", rf_to_json(r.alpha)},
              {"beta", rf_to_json(r.beta)},
              {"gamma", rf_to_json(r.gamma)},
              {"chart", r.infinity_chart ? "inf" : "finite"}};
}

RiccatiEq riccati_from_json(const Json& j) {
  RiccatiEq r;
  r.alpha = rf_from_json(json_field(j, "alpha"));
  r.beta = rf_from_json(json_field(j, "beta"));
  r.gamma = rf_from_json(json_field(j, "gamma"));
  const std::string chart = json_field(j, "chart").get<std::string>();
  if (chart != "finite" && chart != "inf") throw BadInput("chart must be finite|inf");
  r.infinity_chart = chart == "inf";
  return r;
}

Json linsys_to_json(const LinearSystem& s) {
  Json rows = Json::array();
  for (int i = 0; i < 2; ++i)
    rows.push_back(
        Json::array({rf_to_json(s.omega.e[i][0]), rf_to_json(s.omega.e[i][1])}));
  return Json{{"omega", rows}};
}

LinearSystem linsys_from_json(const Json& j) {
  const Json& rows = json_field(j, "omega");
  if (!rows.is_array() || rows.size() != 2 || rows[0].size() != 2 ||
      rows[1].size() != 2)
    throw BadInput("omega must be a 2x2 matrix of rational functions");
  LinearSystem s;
  for (int i = 0; i < 2; ++i)
    for (int k = 0; k < 2; ++k) s.omega.e[i][k] = rf_from_json(rows[i][k]);
  return s;
}

Json formal_data_to_json(const FormalData& f) {
  const int nu2 = f.nu_times_2;
  const std::string nu = nu2 % 2 == 0 ? std::to_string(nu2 / 2) + "/1"
                                      : std::to_string(nu2) + "/2";
  return Json{{"class", kind_name(f.cls.kind)},
              {"m", f.cls.m},
              {"lambda_plus", principal_part_to_json(f.lambda_plus)},
              {"lambda_minus", principal_part_to_json(f.lambda_minus)},
              {"nu", nu}};
}

Json family_config_to_json(const FamilyConfig& cfg) {
  Json poles = Json::array();
  for (const auto& p : cfg.poles)
    poles.push_back(Json{{"point", point_to_json(p.position)},
                         {"order", p.order},
                         {"residue", cx_to_json(p.residue)}});
  Json out{{"poles", poles}};
  if (!cfg.pinned_q.is_zero()) out["pinned_q"] = rf_to_json(cfg.pinned_q);
  return out;
}

FamilyConfig family_config_from_json(const Json& j) {
  FamilyConfig cfg;
  const Json& poles = json_field(j, "poles");
  if (!poles.is_array()) throw BadInput("poles must be an array");
  for (const auto& p : poles) {
    FamilyConfig::Pole P;
    P.position = point_from_json(json_field(p, "point"));
    P.order = json_field(p, "order").get<int>();
    if (p.contains("residue")) P.residue = cx_from_json(p["residue"]);
    cfg.poles.push_back(P);
  }
  if (j.contains("pinned_q")) cfg.pinned_q = rf_from_json(j["pinned_q"]);
  return cfg;
}

const Json& json_field(const Json& j, const char* key) {
  if (!j.is_object() || !j.contains(key))
    throw BadInput(std::string("missing field \"") + key + "\"");
  return j.at(key);
}

Json parse_json_text(const std::string& text) {
  Json j = Json::parse(text, nullptr, false);
  if (j.is_discarded()) throw BadInput("malformed JSON");
  return j;
}

}  // namespace pslab
