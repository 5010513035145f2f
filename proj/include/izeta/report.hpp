#pragma once
// JSON views of the library's result types.  All objects use sorted keys
// (nlohmann's default object ordering), exact values are rendered as
// fraction strings, and timing never enters any payload, so reports are
// byte-for-byte reproducible.

#include <complex>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "izeta/arith.hpp"
#include "izeta/common.hpp"
#include "izeta/expsum.hpp"
#include "izeta/geom.hpp"
#include "izeta/padic.hpp"
#include "izeta/poly.hpp"
#include "izeta/version.hpp"
#include "izeta/zeta.hpp"

namespace izeta {

using Json = nlohmann::json;

inline Json json_of(const Rat& r) { return rat_string(r); }

inline Json json_of(const RootOfUnitySum& s) {
  const std::vector<Rat> canon = s.canonical();
  Json terms = Json::array();
  for (std::size_t e = 0; e < canon.size(); ++e) {
    if (canon[e] != 0) terms.push_back(Json::array({e, rat_string(canon[e])}));
  }
  const std::complex<double> z = s.to_complex();
  return Json{{"order", s.order()},
              {"terms", terms},
              {"approx", Json::array({z.real(), z.imag()})}};
}

inline Json json_of(const Face& face) {
  Json pts = Json::array();
  for (const auto& m : face.points) {
    pts.push_back(Json::array({m.first, m.second}));
  }
  return Json{{"dim", face.dim}, {"points", pts}, {"label", face.label()}};
}

inline Json json_of(const GeomNewtonPolygon& poly) {
  Json verts = Json::array();
  for (const auto& v : poly.vertices) {
    verts.push_back(Json::array({v.first, v.second}));
  }
  Json edges = Json::array();
  for (const PolygonEdge& e : poly.edges) {
    edges.push_back(Json{
        {"from", Json::array({e.from.first, e.from.second})},
        {"to", Json::array({e.to.first, e.to.second})},
        {"normal", Json::array({e.normal.first, e.normal.second})},
        {"weighted_degree", e.d}});
  }
  Json supp = Json::array();
  for (const auto& m : poly.support) {
    supp.push_back(Json::array({m.first, m.second}));
  }
  return Json{{"vertices", verts},
              {"edges", edges},
              {"support", supp},
              {"constant_term_warning", poly.constant_term_warning}};
}

inline Json json_of(const Cone& cone) {
  Json gens = Json::array();
  for (const auto& g : cone.generators) {
    gens.push_back(Json::array({g.first, g.second}));
  }
  return Json{{"dim", cone.dim},
              {"generators", gens},
              {"simple", cone.simple},
              {"face", json_of(cone.face)}};
}

inline Json json_of(const std::vector<Cone>& fan) {
  Json arr = Json::array();
  for (const Cone& c : fan) arr.push_back(json_of(c));
  return arr;
}

inline Json json_of(const NondegeneracyReport& rep) {
  Json items = Json::array();
  for (const FaceVerdict& v : rep.items) {
    Json item{{"face", json_of(v.face)}, {"degenerate", v.degenerate}};
    if (v.degenerate) {
      item["witness"] = Json::array({v.witness.first, v.witness.second});
    }
    items.push_back(item);
  }
  return Json{{"p", rep.p},
              {"items", items},
              {"all_nondegenerate", rep.all_nondegenerate},
              {"origin_singular", rep.origin_singular},
              {"notes", rep.notes}};
}

inline Json json_of(const ArithNewtonPolygon& anp) {
  Json lines = Json::array();
  for (const auto& ln : anp.lines) {
    lines.push_back(Json{{"intercept", ln.intercept}, {"slope", ln.slope}});
  }
  Json segs = Json::array();
  for (const auto& sg : anp.segments) {
    segs.push_back(Json{{"weighted_degree", sg.D}, {"slope", sg.eps}});
  }
  Json taus = Json::array();
  for (const Rat& t : anp.taus) taus.push_back(rat_string(t));
  return Json{{"weight", Json::array({anp.weight.first, anp.weight.second})},
              {"d0", anp.d0},
              {"theta", anp.theta},
              {"lines", lines},
              {"segments", segs},
              {"taus", taus}};
}

inline Json json_of(const CandidatePole& cp) {
  Json origins = Json::array();
  for (const CandidatePole::Origin& o : cp.origins) {
    Json oj{{"formula", o.formula}, {"A", o.A}, {"B", o.B}};
    if (o.formula == "edge") {
      oj["edge_normal"] =
          Json::array({o.edge_normal.first, o.edge_normal.second});
    }
    if (o.formula == "vertex" || o.formula == "slope" ||
        o.formula == "terminal") {
      oj["theta"] = o.theta;
      oj["vertex_index"] = o.vertex_index;
    }
    origins.push_back(oj);
  }
  return Json{{"value", rat_string(cp.value)}, {"origins", origins}};
}

inline Json json_of(const GlobalPoleData& g) {
  Json poles = Json::array();
  for (const CandidatePole& cp : g.poles) poles.push_back(json_of(cp));
  Json out{{"poles", poles},
           {"weight_divisible_warning", g.weight_divisible_warning}};
  if (g.beta) out["beta"] = rat_string(*g.beta);
  Json edges = Json::array();
  for (const EdgeArithmeticData& e : g.arithmetic) {
    Json polys = Json::array();
    for (const ArithNewtonPolygon& anp : e.polygons) {
      polys.push_back(json_of(anp));
    }
    edges.push_back(Json{
        {"normal", Json::array({e.edge.normal.first, e.edge.normal.second})},
        {"weighted_degree", e.edge.d},
        {"polygons", polys}});
  }
  out["edges"] = edges;
  return out;
}

inline Json json_of(const LevelSetTable& t) {
  Json mu = Json::array();
  for (const auto& row : t.mu) {
    Json r = Json::array();
    for (const Rat& x : row) r.push_back(rat_string(x));
    mu.push_back(r);
  }
  Json unres = Json::array();
  for (const auto& n : t.unresolved_per_depth) unres.push_back(n);
  return Json{{"p", t.p},
              {"c", t.c},
              {"K", t.K},
              {"mu", mu},
              {"tail_measure", rat_string(t.tail_measure)},
              {"visited", t.visited},
              {"unresolved_per_depth", unres},
              {"reduction_vanishes_warning", t.reduction_vanishes_warning},
              {"used_bigint", t.used_bigint}};
}

inline Json json_of(const ZetaSeries& z) {
  Json coeffs = Json::array();
  for (const RootOfUnitySum& a : z.coeffs) coeffs.push_back(json_of(a));
  return Json{{"p", z.p},
              {"table_c", z.table_c},
              {"chi_index", z.chi_index},
              {"chi_level", z.chi_level},
              {"root_order", z.root_order},
              {"coeffs", coeffs},
              {"tail_bound", rat_string(z.tail_bound)}};
}

inline Json json_of(const RationalFunctionT& rf) {
  Json num = Json::array();
  for (const Rat& x : rf.numerator) num.push_back(rat_string(x));
  Json den = Json::array();
  for (const DenFactor& f : rf.denominator) {
    den.push_back(Json{{"A", f.A}, {"B", f.B}, {"mult", f.mult}});
  }
  return Json{{"q", rf.q}, {"numerator", num}, {"denominator", den}};
}

inline Json json_of(const FitOutcome& fo) {
  Json num = Json::array();
  for (const Rat& x : fo.numerator) num.push_back(rat_string(x));
  Json den = Json::array();
  for (const DenFactor& f : fo.denominator) {
    den.push_back(Json{{"A", f.A}, {"B", f.B}, {"mult", f.mult}});
  }
  return Json{{"consistent", fo.consistent},
              {"first_violation", fo.first_violation},
              {"numerator", num},
              {"denominator", den},
              {"numerator_degree_bound", fo.numerator_degree_bound},
              {"notes", fo.notes}};
}

inline Json json_of(const DenefResult& d) {
  return Json{{"value", Json::array({d.value.real(), d.value.imag()})},
              {"error_bound", d.error_bound},
              {"assumes_vanishing", d.assumes_vanishing},
              {"notes", d.notes}};
}

inline Json json_of(const DecayReport& d) {
  return Json{{"beta", rat_string(d.beta)},
              {"beta_from_poles", d.beta_from_poles},
              {"ratios", d.ratios},
              {"rho", d.rho},
              {"notes", d.notes}};
}

// Full geometric + arithmetic analysis of f at p.
inline Json analysis_report(const BivariatePolynomial& f, long long p) {
  const GeomNewtonPolygon poly = newton_polygon(f);
  const std::vector<Cone> base = conical_subdivision(poly);
  const std::vector<Cone> refined = refine_to_simple(poly, base);
  Json out;
  out["version"] = IZETA_VERSION;
  out["polynomial"] = f.to_string();
  out["p"] = p;
  out["newton_polygon"] = json_of(poly);
  out["fan"] = json_of(base);
  out["refined_fan"] = json_of(refined);
  out["nondegeneracy"] = json_of(kouchnirenko_check(f, p));
  out["arithmetic_nondegeneracy"] = json_of(arithmetic_nondegeneracy_check(f, p));
  out["pole_data"] = json_of(candidate_poles_global(f, p));
  Json basis = Json::array();
  for (const auto& ab : fit_basis(f, p)) {
    basis.push_back(Json::array({ab.first, ab.second}));
  }
  out["fit_basis"] = basis;
  Json ext = Json::array();
  for (const auto& ab : fit_basis_extended(f, p)) {
    ext.push_back(Json::array({ab.first, ab.second}));
  }
  out["fit_basis_extended"] = ext;
  return out;
}

}  // namespace izeta
