#include <algorithm>
#include <set>
#include <vector>

#include <catch2/catch_amalgamated.hpp>

#include "izeta/geom.hpp"
#include "izeta/poly.hpp"

using izeta::Cone;
using izeta::parse_poly;

namespace {

// Canonical form of a fan for set comparison: each cone as its sorted
// generator list.
std::set<std::vector<std::pair<int, int>>> cone_set(
    const std::vector<Cone>& fan) {
  std::set<std::vector<std::pair<int, int>>> out;
  for (const Cone& c : fan) {
    std::vector<std::pair<int, int>> g = c.generators;
    std::sort(g.begin(), g.end());
    out.insert(g);
  }
  return out;
}

}  // namespace

TEST_CASE("polygon of the worked example", "[geom]") {
  const auto f = parse_poly("(y^3-x^2)^2+x^4*y^4");
  const auto poly = izeta::newton_polygon(f);
  REQUIRE(poly.edges.size() == 1);  // (0,6)-(2,3)-(4,0) is one segment
  CHECK(poly.edges[0].normal == std::pair<int, int>(3, 2));
  CHECK(poly.edges[0].d == 12);
  CHECK(poly.edges[0].from == izeta::Monomial(0, 6));
  CHECK(poly.edges[0].to == izeta::Monomial(4, 0));
  CHECK_FALSE(poly.constant_term_warning);
  CHECK(poly.has_compact_edges());
}

TEST_CASE("minimal weighted degree", "[geom]") {
  const auto f = parse_poly("(y^3-x^2)^2+x^4*y^4");
  const auto poly = izeta::newton_polygon(f);
  CHECK(izeta::m_value(poly, 3, 2) == 12);
  CHECK(izeta::m_value(poly, 1, 1) == 4);
  CHECK(izeta::m_value(poly, 2, 1) == 6);
  CHECK(izeta::m_value(poly, 1, 0) == 0);
  CHECK(izeta::m_value(poly, 0, 1) == 0);
}

TEST_CASE("first-meet faces", "[geom]") {
  const auto f = parse_poly("(y^3-x^2)^2+x^4*y^4");
  const auto poly = izeta::newton_polygon(f);
  // The edge normal meets the whole lower edge.
  const auto fe = izeta::first_meet_locus(poly, 3, 2);
  CHECK(fe.dim == 1);
  CHECK(fe.points ==
        std::vector<izeta::Monomial>{{0, 6}, {2, 3}, {4, 0}});
  // A generic interior ray meets a single vertex.
  const auto fv = izeta::first_meet_locus(poly, 1, 1);
  CHECK(fv.dim == 0);
  CHECK(fv.points == std::vector<izeta::Monomial>{{4, 0}});
  // The zero ray meets the full support.
  const auto fz = izeta::first_meet_locus(poly, 0, 0);
  CHECK(fz.dim == 2);
}

TEST_CASE("fan refinement of the worked example", "[geom]") {
  const auto f = parse_poly("(y^3-x^2)^2+x^4*y^4");
  const auto poly = izeta::newton_polygon(f);
  const auto base = izeta::conical_subdivision(poly);
  CHECK(base.size() == 5);  // three rays, two 2-dimensional cones
  const auto refined = izeta::refine_to_simple(poly, base);
  REQUIRE(refined.size() == 9);
  for (const Cone& c : refined) CHECK(c.simple);

  const std::set<std::vector<std::pair<int, int>>> expect = {
      {{1, 0}},
      {{0, 1}},
      {{3, 2}},
      {{1, 1}},
      {{2, 1}},
      {{1, 0}, {2, 1}},
      {{2, 1}, {3, 2}},
      {{1, 1}, {3, 2}},
      {{0, 1}, {1, 1}},
  };
  CHECK(cone_set(refined) == expect);
}

TEST_CASE("refinement of the cusp fan", "[geom]") {
  const auto f = parse_poly("y^2-x^3");
  const auto poly = izeta::newton_polygon(f);
  const auto refined =
      izeta::refine_to_simple(poly, izeta::conical_subdivision(poly));
  const std::set<std::vector<std::pair<int, int>>> expect = {
      {{1, 0}},      {{0, 1}},      {{2, 3}},      {{1, 1}},
      {{1, 2}},      {{1, 0}, {1, 1}}, {{1, 1}, {2, 3}},
      {{1, 2}, {2, 3}}, {{0, 1}, {1, 2}},
  };
  CHECK(cone_set(refined) == expect);
  // Every ray of the refined fan, in first-appearance order.
  const auto rays = izeta::fan_rays(refined);
  CHECK(rays.size() == 5);
}

TEST_CASE("face functions", "[geom]") {
  const auto f = parse_poly("(y^3-x^2)^2+x^4*y^4");
  const auto poly = izeta::newton_polygon(f);
  const auto face = izeta::first_meet_locus(poly, 3, 2);
  CHECK(izeta::face_function(f, face) == parse_poly("(y^3-x^2)^2"));
  const auto vert = izeta::first_meet_locus(poly, 1, 1);
  CHECK(izeta::face_function(f, vert) == parse_poly("x^4"));
}

TEST_CASE("residue-field degeneracy of the worked example", "[geom]") {
  const auto f = parse_poly("(y^3-x^2)^2+x^4*y^4");
  const auto rep = izeta::kouchnirenko_check(f, 5);
  CHECK_FALSE(rep.all_nondegenerate);  // the squared edge part is degenerate
  bool edge_degenerate = false;
  for (const auto& item : rep.items) {
    if (item.face.dim == 1 && item.degenerate) edge_degenerate = true;
  }
  CHECK(edge_degenerate);
}

TEST_CASE("residue-field nondegeneracy of the cusp", "[geom]") {
  const auto f = parse_poly("y^2-x^3");
  CHECK(izeta::kouchnirenko_check(f, 3).all_nondegenerate);
  CHECK(izeta::kouchnirenko_check(f, 5).all_nondegenerate);
  CHECK(izeta::kouchnirenko_check(f, 2).all_nondegenerate);
}

TEST_CASE("inserted rays carry their own faces", "[geom]") {
  const auto f = parse_poly("(y^3-x^2)^2+x^4*y^4");
  const auto poly = izeta::newton_polygon(f);
  const auto refined =
      izeta::refine_to_simple(poly, izeta::conical_subdivision(poly));
  for (const Cone& c : refined) {
    if (c.dim == 1) {
      const auto expect =
          izeta::first_meet_locus(poly, c.generators[0].first,
                                  c.generators[0].second);
      CHECK(c.face == expect);
    }
  }
}

TEST_CASE("degeneracy check rejects huge primes", "[geom]") {
  const auto f = parse_poly("y^2-x^3");
  CHECK_THROWS_AS(izeta::kouchnirenko_check(f, 101), izeta::DomainError);
}
