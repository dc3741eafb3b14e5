#include "bumpforge/io_json.hpp"

#include <limits>

#include "bumpforge/errors.hpp"
#include "bumpforge/parse.hpp"

namespace bumpforge {

using nlohmann::json;

namespace {

json mpz_to_json(const mpz_class& z) {
  if (z.fits_slong_p()) return static_cast<std::int64_t>(z.get_si());
  return z.get_str();
}

mpz_class mpz_from_json(const json& j) {
  if (j.is_string()) return mpz_class(j.get<std::string>());
  return mpz_class(static_cast<long>(j.get<std::int64_t>()));
}

json rat_to_json_pair(const Rat& q, json& num, json& den) {
  num = mpz_to_json(q.get_num());
  den = mpz_to_json(q.get_den());
  return num;
}

Rat rat_from_json_pair(const json& num, const json& den) {
  Rat q{mpz_from_json(num), mpz_from_json(den)};
  q.canonicalize();
  return q;
}

json radial_to_json(const RadialBump& b) {
  return json{{"degree2m", b.degree2m},
              {"sigma", b.sigma},
              {"sector_centers", b.sector_centers},
              {"rot", b.rot},
              {"constant_profile", b.constant_profile},
              {"c0", b.c0},
              {"amp", b.amp},
              {"width", b.width},
              {"grid", b.grid},
              {"C1", b.C1},
              {"C2", b.C2},
              {"floor", b.floor}};
}

RadialBump radial_from_json(const json& j) {
  RadialBump b;
  b.degree2m = j.at("degree2m").get<int>();
  b.sigma = j.at("sigma").get<double>();
  b.sector_centers = j.at("sector_centers").get<std::vector<double>>();
  b.rot = j.at("rot").get<double>();
  b.constant_profile = j.at("constant_profile").get<bool>();
  b.c0 = j.at("c0").get<double>();
  b.amp = j.at("amp").get<double>();
  b.width = j.at("width").get<double>();
  b.grid = j.at("grid").get<std::vector<double>>();
  b.C1 = j.at("C1").get<double>();
  b.C2 = j.at("C2").get<double>();
  b.floor = j.at("floor").get<double>();
  return b;
}

json cone_to_json(const ConeBump& c) {
  json j{{"mode", c.mode == ConeBump::Mode::HGOOD ? "HGOOD" : "HBAD"},
         {"a", c.fac.a},
         {"b", c.fac.b},
         {"two_m", c.fac.two_m},
         {"U", poly_to_json(c.fac.U)},
         {"mu", c.mu},
         {"two_k", c.two_k},
         {"gamma", c.gamma},
         {"gamma_is_exact", c.gamma_is_exact},
         {"sigma", c.sigma},
         {"c", c.c},
         {"shell_B", c.shell_B}};
  if (c.gamma_is_exact) {
    j["gamma_num"] = mpz_to_json(c.gamma_rat.get_num());
    j["gamma_den"] = mpz_to_json(c.gamma_rat.get_den());
  }
  if (c.mode == ConeBump::Mode::HBAD) j["radial"] = radial_to_json(c.radial);
  return j;
}

ConeBump cone_from_json(const json& j) {
  ConeBump c;
  c.mode = j.at("mode").get<std::string>() == "HGOOD" ? ConeBump::Mode::HGOOD
                                                      : ConeBump::Mode::HBAD;
  c.fac.a = j.at("a").get<int>();
  c.fac.b = j.at("b").get<int>();
  c.fac.two_m = j.at("two_m").get<int>();
  c.fac.U = poly_from_json(j.at("U"));
  c.mu = j.at("mu").get<int>();
  c.two_k = j.at("two_k").get<int>();
  c.gamma = j.at("gamma").get<double>();
  c.gamma_is_exact = j.at("gamma_is_exact").get<bool>();
  if (c.gamma_is_exact) c.gamma_rat = rat_from_json_pair(j.at("gamma_num"), j.at("gamma_den"));
  c.sigma = j.at("sigma").get<double>();
  c.c = j.at("c").get<double>();
  c.shell_B = j.at("shell_B").get<std::vector<std::pair<double, double>>>();
  if (j.contains("radial")) c.radial = radial_from_json(j.at("radial"));
  return c;
}

json frame_to_json(const LineFrame& f) {
  return json{{"axis2", f.axis2}, {"re", f.omega.real()}, {"im", f.omega.imag()}};
}

LineFrame frame_from_json(const json& j) {
  LineFrame f;
  f.axis2 = j.at("axis2").get<bool>();
  f.omega = {j.at("re").get<double>(), j.at("im").get<double>()};
  return f;
}

json ambient_to_json(const AmbientBump& a) {
  json lines = json::array(), clusters = json::array();
  for (const auto& f : a.exc_lines) lines.push_back(frame_to_json(f));
  for (const auto& c : a.clusters)
    clusters.push_back(json{{"frame", frame_to_json(c.frame)},
                            {"aperture", c.aperture},
                            {"s_quad", c.s_quad}});
  return json{{"two_k", a.two_k},
              {"c0", a.c0},
              {"line_clear", a.line_clear},
              {"exc_lines", lines},
              {"p_exp", a.p_exp},
              {"clusters", clusters},
              {"eps_E", a.eps_E},
              {"delta_max", a.delta_max},
              {"fitted_B3", a.fitted_B3}};
}

AmbientBump ambient_from_json(const json& j) {
  AmbientBump a;
  a.two_k = j.at("two_k").get<int>();
  a.c0 = j.at("c0").get<double>();
  a.line_clear = j.at("line_clear").get<double>();
  for (const auto& f : j.at("exc_lines")) a.exc_lines.push_back(frame_from_json(f));
  a.p_exp = j.at("p_exp").get<std::vector<int>>();
  for (const auto& c : j.at("clusters")) {
    ClusterLine cl;
    cl.frame = frame_from_json(c.at("frame"));
    cl.aperture = c.at("aperture").get<double>();
    cl.s_quad = c.at("s_quad").get<double>();
    a.clusters.push_back(cl);
  }
  a.eps_E = j.at("eps_E").get<double>();
  a.delta_max = j.at("delta_max").get<double>();
  a.fitted_B3 = j.at("fitted_B3").get<double>();
  return a;
}

json exact_to_json(const ExactComplex& c) {
  return json{mpz_to_json(c.re.get_num()), mpz_to_json(c.re.get_den()),
              mpz_to_json(c.im.get_num()), mpz_to_json(c.im.get_den())};
}

ExactComplex exact_from_json(const json& j) {
  return ExactComplex{rat_from_json_pair(j.at(0), j.at(1)), rat_from_json_pair(j.at(2), j.at(3))};
}

}  // namespace

json poly_to_json(const MixedPolynomial& p) {
  json out = json::array();
  for (const auto& [e, c] : p.terms()) {
    json term = json::array();
    term.push_back(e.a1);
    term.push_back(e.b1);
    term.push_back(e.a2);
    term.push_back(e.b2);
    term.push_back(mpz_to_json(c.re.get_num()));
    term.push_back(mpz_to_json(c.re.get_den()));
    term.push_back(mpz_to_json(c.im.get_num()));
    term.push_back(mpz_to_json(c.im.get_den()));
    out.push_back(std::move(term));
  }
  return out;
}

MixedPolynomial poly_from_json(const json& j) {
  if (!j.is_array()) fail(errc::schema_error, "polynomial payload must be an array");
  MixedPolynomial p;
  for (const auto& t : j) {
    if (!t.is_array() || t.size() != 8)
      fail(errc::schema_error, "term must be [a1,b1,a2,b2,reNum,reDen,imNum,imDen]");
    const Expo e{t.at(0).get<int>(), t.at(1).get<int>(), t.at(2).get<int>(), t.at(3).get<int>()};
    p.add_term(e, ExactComplex{rat_from_json_pair(t.at(4), t.at(5)),
                               rat_from_json_pair(t.at(6), t.at(7))});
  }
  return p;
}

json cert_to_json(const BumpCertificate& cert) {
  json j;
  j["schema"] = cert.schema;
  j["name"] = cert.name;
  j["domain"] = json{{"text", cert.domain_text},
                     {"weights", json::array({cert.w.m1, cert.w.m2})},
                     {"P", poly_to_json(cert.P)},
                     {"Q", poly_to_json(cert.Q)}};
  j["classification"] = cert.classification;
  j["alpha1"] = cert.alpha1;
  j["alpha2"] = cert.alpha2;
  json curves = json::array();
  for (const auto& c : cert.curves) {
    json cj{{"xi_infinite", c.xi_infinite},
            {"mu", c.mu},
            {"twoM", c.twoM},
            {"star_ok", c.star_ok},
            {"alpha", c.alpha},
            {"urot", c.urot},
            {"hshift", c.hshift},
            {"cone", cone_to_json(c.cone)},
            {"hline", radial_to_json(c.hline)},
            {"r_delta", c.r_delta},
            {"C", c.C}};
    if (!c.xi_infinite) {
      cj["xi"] = exact_to_json(c.xi);
      cj["omega0"] = exact_to_json(c.omega0);
    }
    curves.push_back(std::move(cj));
  }
  j["curves"] = std::move(curves);
  j["ambient"] = ambient_to_json(cert.ambient);
  j["delta0"] = cert.delta0;
  j["r0"] = cert.r0;
  j["global_r"] = cert.global_r;
  j["global_C"] = cert.global_C;
  j["f"] = poly_to_json(cert.f);
  j["K"] = cert.K;
  j["R"] = cert.R;
  j["margin"] = cert.margin;
  j["Delta"] = cert.Delta;
  j["seed"] = cert.seed;
  json summary = json::array();
  for (const auto& [name, margin] : cert.summary)
    summary.push_back(json{{"check", name}, {"margin", margin}});
  j["summary"] = std::move(summary);
  j["summary_pass"] = cert.summary_pass;
  return j;
}

BumpCertificate cert_from_json(const json& j) {
  BumpCertificate cert;
  try {
    cert.schema = j.at("schema").get<std::string>();
    if (cert.schema != "bumpforge-cert/1")
      fail(errc::schema_error, "unsupported schema '" + cert.schema + "'");
    cert.name = j.value("name", std::string{});
    const json& dom = j.at("domain");
    cert.domain_text = dom.at("text").get<std::string>();
    cert.w = WeightSignature::make(dom.at("weights").at(0).get<int>(),
                                   dom.at("weights").at(1).get<int>());
    cert.P = poly_from_json(dom.at("P"));
    cert.Q = poly_from_json(dom.at("Q"));
    cert.classification = j.at("classification").get<std::string>();
    cert.alpha1 = j.at("alpha1").get<double>();
    cert.alpha2 = j.at("alpha2").get<double>();
    for (const auto& cj : j.at("curves")) {
      CurvePayload c;
      c.xi_infinite = cj.at("xi_infinite").get<bool>();
      if (!c.xi_infinite) {
        c.xi = exact_from_json(cj.at("xi"));
        c.omega0 = exact_from_json(cj.at("omega0"));
      }
      c.mu = cj.at("mu").get<int>();
      c.twoM = cj.at("twoM").get<int>();
      c.star_ok = cj.at("star_ok").get<bool>();
      c.alpha = cj.at("alpha").get<double>();
      c.urot = cj.at("urot").get<std::vector<double>>();
      c.hshift = cj.at("hshift").get<std::vector<double>>();
      c.cone = cone_from_json(cj.at("cone"));
      c.hline = radial_from_json(cj.at("hline"));
      c.r_delta = cj.at("r_delta").get<double>();
      c.C = cj.at("C").get<double>();
      cert.curves.push_back(std::move(c));
    }
    cert.ambient = ambient_from_json(j.at("ambient"));
    cert.delta0 = j.at("delta0").get<double>();
    cert.r0 = j.at("r0").get<double>();
    cert.global_r = j.at("global_r").get<double>();
    cert.global_C = j.at("global_C").get<double>();
    cert.f = poly_from_json(j.at("f"));
    cert.K = j.at("K").get<double>();
    cert.R = j.at("R").get<double>();
    cert.margin = j.at("margin").get<double>();
    cert.Delta = j.at("Delta").get<int>();
    cert.seed = j.at("seed").get<std::uint64_t>();
    if (j.contains("summary"))
      for (const auto& s : j.at("summary"))
        cert.summary.emplace_back(s.at("check").get<std::string>(), s.at("margin").get<double>());
    cert.summary_pass = j.value("summary_pass", false);
  } catch (const json::exception& e) {
    fail(errc::schema_error, std::string("malformed certificate: ") + e.what());
  }
  return cert;
}

std::string classification_name(Classification::V v) {
  switch (v) {
    case Classification::V::H_EXTENDIBLE: return "H_EXTENDIBLE";
    case Classification::V::ALMOST_H_EXTENDIBLE: return "ALMOST_H_EXTENDIBLE";
    case Classification::V::NOT_APPLICABLE: return "NOT_APPLICABLE";
  }
  return "UNKNOWN";
}

json analysis_to_json(const AnalyzeResult& res) {
  json j;
  j["weights"] = json::array({res.domain.w.m1, res.domain.w.m2});
  j["nu"] = res.domain.w.nu;
  j["sigma"] = json::array({res.domain.w.sigma1, res.domain.w.sigma2});
  j["P"] = poly_to_json(res.domain.P);
  j["Q"] = poly_to_json(res.domain.Q);
  j["P_text"] = print_polynomial(res.domain.P);
  j["Q_text"] = res.domain.Q.is_zero() ? "0" : print_polynomial(res.domain.Q);
  json curves = json::array();
  for (const auto& c : res.curves) {
    json cj;
    cj["xi"] = c.xi_infinite ? json("inf") : json(exact_to_json(c.xi));
    cj["mu"] = c.mu;
    cj["twoM"] = c.twoM;
    cj["order_condition"] = c.star_ok;
    if (!c.xi_infinite) {
      json lines = json::array();
      for (const auto& l : c.pullback_lines)
        lines.push_back(json::array({l.real(), l.imag()}));
      cj["pullback_lines"] = std::move(lines);
    }
    curves.push_back(std::move(cj));
  }
  j["curves"] = std::move(curves);
  j["classification"] = classification_name(res.classification.verdict);
  j["wedge"] = json{{"alpha1", res.classification.alpha1},
                    {"alpha2", res.classification.alpha2}};
  j["samples"] = res.classification.samples;
  j["degenerate_samples"] = res.classification.degenerate_samples;
  j["off_curve_degenerate"] = res.classification.off_curve_degenerate;
  return j;
}

}  // namespace bumpforge
