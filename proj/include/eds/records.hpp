// Copyright (c) 2026 the edsearch authors
// SPDX-License-Identifier: Apache-2.0
//
// Flat output records for candidates and deduplicated hits, with JSON and
// CSV renderings carrying identical fields.

#ifndef EDS_RECORDS_HPP
#define EDS_RECORDS_HPP

#include <json.hpp>

#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "eds/errors.hpp"

namespace eds {

struct HitRecord {
  std::string kind = "candidate";  // "candidate" or "hit"
  long long d = 0;
  std::string u2, u3, u4;
  long n_primary = 0;
  double h_primary = 0.0;
  double log10_En_primary = 0.0;
  long n_refined = 0;
  std::optional<double> h_refined;
  std::optional<double> log10_En_refined;
  std::optional<double> h_full;
  std::string route;
  std::string a1, a2, a3, a4, a6;
  std::string g2, g3;
  std::string px, py;
  std::string j, delta;
  bool v_nonsingular = false;
  bool v_on_curve = false;
  bool v_tuple_match = false;
  bool v_torsion_screen = false;
  std::string error;
  double ms = 0.0;
  std::vector<std::string> class_members;  // tuples merged into this hit

  bool verified_all() const {
    return error.empty() && v_nonsingular && v_on_curve && v_tuple_match && v_torsion_screen;
  }
};

inline nlohmann::json record_to_json(const HitRecord& r) {
  nlohmann::json j;
  j["kind"] = r.kind;
  j["d"] = r.d;
  j["u2"] = r.u2;
  j["u3"] = r.u3;
  j["u4"] = r.u4;
  j["n_primary"] = r.n_primary;
  j["h_primary"] = r.h_primary;
  j["log10_En_primary"] = r.log10_En_primary;
  j["n_refined"] = r.n_refined;
  j["h_refined"] = r.h_refined ? nlohmann::json(*r.h_refined) : nlohmann::json();
  j["log10_En_refined"] =
      r.log10_En_refined ? nlohmann::json(*r.log10_En_refined) : nlohmann::json();
  j["h_full"] = r.h_full ? nlohmann::json(*r.h_full) : nlohmann::json();
  j["route"] = r.route;
  j["a1"] = r.a1;
  j["a2"] = r.a2;
  j["a3"] = r.a3;
  j["a4"] = r.a4;
  j["a6"] = r.a6;
  j["g2"] = r.g2;
  j["g3"] = r.g3;
  j["px"] = r.px;
  j["py"] = r.py;
  j["j"] = r.j;
  j["delta"] = r.delta;
  j["v_nonsingular"] = r.v_nonsingular;
  j["v_on_curve"] = r.v_on_curve;
  j["v_tuple_match"] = r.v_tuple_match;
  j["v_torsion_screen"] = r.v_torsion_screen;
  j["error"] = r.error;
  j["ms"] = r.ms;
  j["class_members"] = r.class_members;
  return j;
}

inline HitRecord record_from_json(const nlohmann::json& j) {
  HitRecord r;
  r.kind = j.at("kind").get<std::string>();
  r.d = j.at("d").get<long long>();
  r.u2 = j.at("u2").get<std::string>();
  r.u3 = j.at("u3").get<std::string>();
  r.u4 = j.at("u4").get<std::string>();
  r.n_primary = j.at("n_primary").get<long>();
  r.h_primary = j.at("h_primary").get<double>();
  r.log10_En_primary = j.at("log10_En_primary").get<double>();
  r.n_refined = j.at("n_refined").get<long>();
  if (!j.at("h_refined").is_null()) r.h_refined = j.at("h_refined").get<double>();
  if (!j.at("log10_En_refined").is_null())
    r.log10_En_refined = j.at("log10_En_refined").get<double>();
  if (!j.at("h_full").is_null()) r.h_full = j.at("h_full").get<double>();
  r.route = j.at("route").get<std::string>();
  r.a1 = j.at("a1").get<std::string>();
  r.a2 = j.at("a2").get<std::string>();
  r.a3 = j.at("a3").get<std::string>();
  r.a4 = j.at("a4").get<std::string>();
  r.a6 = j.at("a6").get<std::string>();
  r.g2 = j.at("g2").get<std::string>();
  r.g3 = j.at("g3").get<std::string>();
  r.px = j.at("px").get<std::string>();
  r.py = j.at("py").get<std::string>();
  r.j = j.at("j").get<std::string>();
  r.delta = j.at("delta").get<std::string>();
  r.v_nonsingular = j.at("v_nonsingular").get<bool>();
  r.v_on_curve = j.at("v_on_curve").get<bool>();
  r.v_tuple_match = j.at("v_tuple_match").get<bool>();
  r.v_torsion_screen = j.at("v_torsion_screen").get<bool>();
  r.error = j.at("error").get<std::string>();
  r.ms = j.at("ms").get<double>();
  r.class_members = j.at("class_members").get<std::vector<std::string>>();
  return r;
}

namespace detail {

inline std::string csv_quote(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += "\"\"";
    else out += c;
  }
  out += '"';
  return out;
}

inline std::string fmt_double(double v) {
  char buf[40];
  snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

inline std::string fmt_opt(const std::optional<double>& v) {
  return v ? fmt_double(*v) : std::string();
}

inline std::string join_members(const std::vector<std::string>& ms) {
  std::string out;
  for (size_t i = 0; i < ms.size(); ++i) {
    if (i) out += '|';
    out += ms[i];
  }
  return out;
}

}  // namespace detail

inline std::string record_csv_header() {
  return "kind,d,u2,u3,u4,n_primary,h_primary,log10_En_primary,n_refined,h_refined,"
         "log10_En_refined,h_full,route,a1,a2,a3,a4,a6,g2,g3,px,py,j,delta,"
         "v_nonsingular,v_on_curve,v_tuple_match,v_torsion_screen,error,ms,class_members";
}

inline std::string record_to_csv(const HitRecord& r) {
  using detail::csv_quote;
  using detail::fmt_double;
  using detail::fmt_opt;
  std::ostringstream o;
  o << csv_quote(r.kind) << ',' << r.d << ',' << csv_quote(r.u2) << ',' << csv_quote(r.u3)
    << ',' << csv_quote(r.u4) << ',' << r.n_primary << ',' << fmt_double(r.h_primary) << ','
    << fmt_double(r.log10_En_primary) << ',' << r.n_refined << ',' << fmt_opt(r.h_refined)
    << ',' << fmt_opt(r.log10_En_refined) << ',' << fmt_opt(r.h_full) << ','
    << csv_quote(r.route) << ',' << csv_quote(r.a1) << ',' << csv_quote(r.a2) << ','
    << csv_quote(r.a3) << ',' << csv_quote(r.a4) << ',' << csv_quote(r.a6) << ','
    << csv_quote(r.g2) << ',' << csv_quote(r.g3) << ',' << csv_quote(r.px) << ','
    << csv_quote(r.py) << ',' << csv_quote(r.j) << ',' << csv_quote(r.delta) << ','
    << (r.v_nonsingular ? "true" : "false") << ',' << (r.v_on_curve ? "true" : "false") << ','
    << (r.v_tuple_match ? "true" : "false") << ',' << (r.v_torsion_screen ? "true" : "false")
    << ',' << csv_quote(r.error) << ',' << fmt_double(r.ms) << ','
    << csv_quote(detail::join_members(r.class_members));
  return o.str();
}

}  // namespace eds

#endif  // EDS_RECORDS_HPP
