#pragma once
// Geometric boundary structure of a polynomial's support: the lower-left
// convex hull, its faces and primitive normals, the conical subdivision of
// the positive quadrant it induces, refinement of that fan into simple
// (determinant +-1) cones, face functions, and the torus non-degeneracy
// certificate over a prime residue field.

#include <algorithm>
#include <cstdlib>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "izeta/common.hpp"
#include "izeta/poly.hpp"

namespace izeta {

// A face of the polygon described by the support points of f lying on it.
// dim 0: vertex; dim 1: edge (compact or axis-parallel at the boundary);
// dim 2: the whole polygon (minimizing vector (0,0)).
struct Face {
  int dim = 0;
  std::vector<Monomial> points;  // sorted ascending

  bool operator==(const Face& o) const { return points == o.points; }
  bool operator<(const Face& o) const { return points < o.points; }

  std::string label() const {
    std::string s = "{";
    for (std::size_t i = 0; i < points.size(); ++i) {
      if (i) s += ",";
      s += "(" + std::to_string(points[i].first) + "," +
           std::to_string(points[i].second) + ")";
    }
    return s + "}";
  }
};

struct PolygonEdge {
  Monomial from;                 // endpoint with smaller i
  Monomial to;                   // endpoint with larger i
  std::pair<int, int> normal;    // primitive inward normal, both entries > 0
  long long d = 0;               // supporting value min <normal, support>
};

// Lower-left convex hull of supp(f) + R_{>=0}^2.
struct GeomNewtonPolygon {
  std::vector<Monomial> vertices;       // sorted by increasing i
  std::vector<PolygonEdge> edges;       // compact edges, left to right
  std::vector<Monomial> support;        // all support points of f
  bool constant_term_warning = false;   // set when f(0,0) != 0

  bool has_compact_edges() const { return !edges.empty(); }
};

namespace detail {

inline long long cross(const Monomial& o, const Monomial& a,
                       const Monomial& b) {
  return static_cast<long long>(a.first - o.first) * (b.second - o.second) -
         static_cast<long long>(a.second - o.second) * (b.first - o.first);
}

}  // namespace detail

// Builds the lower-left hull of the support.  Every support point lies on or
// above each edge's supporting line <normal, .> = d.
inline GeomNewtonPolygon newton_polygon(const BivariatePolynomial& f) {
  if (f.is_zero()) throw DomainError("newton_polygon: zero polynomial");
  GeomNewtonPolygon poly;
  poly.support = f.support();
  poly.constant_term_warning = (f.coefficient(0, 0) != 0);

  // Pareto-minimal points: keep (i, j) unless some other support point is
  // <= componentwise.  Dominated points cannot be hull vertices.
  std::vector<Monomial> pareto;
  for (const Monomial& p : poly.support) {
    bool dominated = false;
    for (const Monomial& q : poly.support) {
      if (q != p && q.first <= p.first && q.second <= p.second) {
        dominated = true;
        break;
      }
    }
    if (!dominated) pareto.push_back(p);
  }
  std::sort(pareto.begin(), pareto.end());

  // Monotone chain: walking by increasing i, keep only strict left turns so
  // the region above the chain is convex.
  std::vector<Monomial> chain;
  for (const Monomial& p : pareto) {
    while (chain.size() >= 2 &&
           detail::cross(chain[chain.size() - 2], chain.back(), p) <= 0) {
      chain.pop_back();
    }
    chain.push_back(p);
  }
  poly.vertices = chain;

  for (std::size_t i = 0; i + 1 < chain.size(); ++i) {
    const Monomial a = chain[i];
    const Monomial b = chain[i + 1];
    const long long di = b.first - a.first;   // > 0
    const long long dj = a.second - b.second; // > 0
    const long long g = gcd_ll(di, dj);
    PolygonEdge e;
    e.from = a;
    e.to = b;
    e.normal = {static_cast<int>(dj / g), static_cast<int>(di / g)};
    e.d = static_cast<long long>(e.normal.first) * a.first +
          static_cast<long long>(e.normal.second) * a.second;
    poly.edges.push_back(e);
  }
  return poly;
}

// m(a) = min over supp(f) of <a, .>.
inline long long m_value(const GeomNewtonPolygon& poly, int a1, int a2) {
  if (a1 < 0 || a2 < 0 || (a1 == 0 && a2 == 0)) {
    throw DomainError("m_value: vector must be a nonzero nonnegative pair");
  }
  bool first = true;
  long long best = 0;
  for (const Monomial& p : poly.support) {
    const long long v = static_cast<long long>(a1) * p.first +
                        static_cast<long long>(a2) * p.second;
    if (first || v < best) {
      best = v;
      first = false;
    }
  }
  return best;
}

// First meet locus F(a): the face on which <a, .> attains its minimum.
// F((0,0)) is the whole polygon.
inline Face first_meet_locus(const GeomNewtonPolygon& poly, int a1, int a2) {
  Face face;
  if (a1 == 0 && a2 == 0) {
    face.dim = 2;
    face.points = poly.support;
    std::sort(face.points.begin(), face.points.end());
    return face;
  }
  const long long m = m_value(poly, a1, a2);
  for (const Monomial& p : poly.support) {
    if (static_cast<long long>(a1) * p.first +
            static_cast<long long>(a2) * p.second ==
        m) {
      face.points.push_back(p);
    }
  }
  std::sort(face.points.begin(), face.points.end());
  face.dim = face.points.size() > 1 ? 1 : 0;
  return face;
}

struct Cone {
  int dim = 1;
  std::vector<std::pair<int, int>> generators;  // 1 or 2 primitive vectors
  bool simple = true;  // 2D: |det| == 1; 1D: always
  Face face;           // first meet locus of interior vectors

  long long det() const {
    if (dim != 2) return 0;
    return static_cast<long long>(generators[0].first) * generators[1].second -
           static_cast<long long>(generators[0].second) * generators[1].first;
  }

  bool operator==(const Cone& o) const {
    return dim == o.dim && generators == o.generators;
  }
};

// Partition of the positive quadrant minus the origin subordinated to the
// polygon: one ray per compact-edge normal plus the two boundary rays (0,1)
// and (1,0), and one 2D cone per consecutive ray pair (equivalently, per
// boundary vertex).  Cone interiors are disjoint and the closures cover the
// quadrant.
inline std::vector<Cone> conical_subdivision(const GeomNewtonPolygon& poly) {
  std::vector<std::pair<int, int>> rays;
  rays.push_back({0, 1});
  for (const PolygonEdge& e : poly.edges) rays.push_back(e.normal);
  rays.push_back({1, 0});

  std::vector<Cone> cones;
  for (std::size_t i = 0; i < rays.size(); ++i) {
    Cone c;
    c.dim = 1;
    c.generators = {rays[i]};
    c.simple = true;
    c.face = first_meet_locus(poly, rays[i].first, rays[i].second);
    cones.push_back(c);
    if (i + 1 < rays.size()) {
      Cone c2;
      c2.dim = 2;
      c2.generators = {rays[i], rays[i + 1]};
      const int ix = rays[i].first + rays[i + 1].first;
      const int iy = rays[i].second + rays[i + 1].second;
      c2.face = first_meet_locus(poly, ix, iy);
      c2.simple = std::abs(c2.det()) == 1;
      cones.push_back(c2);
    }
  }
  return cones;
}

namespace detail {

// Splits the cone spanned by primitive u, v (det(u, v) = D > 1) at the
// unique primitive w with det(u, w) = 1 lying on the boundary of the convex
// hull of the nonzero lattice points of the cone, then recurses on (w, v).
// Returns the full ray chain from u to v inclusive.  Every consecutive pair
// in the chain has determinant exactly 1, which is the minimal refinement.
inline void simple_chain(std::pair<int, int> u, std::pair<int, int> v,
                         std::vector<std::pair<int, int>>& out) {
  const long long D = static_cast<long long>(u.first) * v.second -
                      static_cast<long long>(u.second) * v.first;
  if (D <= 0) throw DomainError("simple_chain: expects det(u, v) > 0");
  if (D == 1) {
    out.push_back(v);
    return;
  }
  long long k = -1;
  for (long long t = 0; t < D; ++t) {
    if ((v.first + t * u.first) % D == 0 &&
        (v.second + t * u.second) % D == 0) {
      k = t;
      break;
    }
  }
  if (k <= 0) throw DomainError("simple_chain: no admissible splitting ray");
  const std::pair<int, int> w = {
      static_cast<int>((v.first + k * u.first) / D),
      static_cast<int>((v.second + k * u.second) / D)};
  out.push_back(w);
  simple_chain(w, v, out);
}

}  // namespace detail

// Refines every non-simple 2D cone by inserting the primitive rays on the
// compact hull boundary of its lattice points (the minimal refinement into
// determinant-one cones).  Inserted rays join the fan as new 1D cones; every
// original ray is preserved.
inline std::vector<Cone> refine_to_simple(const GeomNewtonPolygon& poly,
                                          const std::vector<Cone>& cones) {
  std::vector<Cone> out;
  for (const Cone& c : cones) {
    if (c.dim == 1 || c.simple) {
      out.push_back(c);
      continue;
    }
    std::pair<int, int> u = c.generators[0];
    std::pair<int, int> v = c.generators[1];
    const bool swapped = c.det() < 0;
    if (swapped) std::swap(u, v);
    std::vector<std::pair<int, int>> chain = {u};
    detail::simple_chain(u, v, chain);
    if (swapped) std::reverse(chain.begin(), chain.end());
    for (std::size_t i = 0; i + 1 < chain.size(); ++i) {
      if (i > 0) {
        Cone ray;
        ray.dim = 1;
        ray.generators = {chain[i]};
        ray.simple = true;
        ray.face =
            first_meet_locus(poly, chain[i].first, chain[i].second);
        out.push_back(ray);
      }
      Cone piece;
      piece.dim = 2;
      piece.generators = {chain[i], chain[i + 1]};
      piece.simple = true;
      piece.face = c.face;
      out.push_back(piece);
    }
  }
  return out;
}

// Rays present in a fan, deduplicated, in first-appearance order.
inline std::vector<std::pair<int, int>> fan_rays(
    const std::vector<Cone>& cones) {
  std::vector<std::pair<int, int>> rays;
  for (const Cone& c : cones) {
    for (const auto& g : c.generators) {
      if (std::find(rays.begin(), rays.end(), g) == rays.end()) {
        rays.push_back(g);
      }
    }
  }
  return rays;
}

// Sum of the terms of f lying on the face.
inline BivariatePolynomial face_function(const BivariatePolynomial& f,
                                         const Face& face) {
  BivariatePolynomial::TermMap m;
  for (const Monomial& p : face.points) {
    const Int c = f.coefficient(p.first, p.second);
    if (c != 0) m[p] = c;
  }
  return BivariatePolynomial(std::move(m));
}

struct FaceVerdict {
  Face face;
  bool degenerate = false;
  std::pair<long long, long long> witness = {0, 0};  // valid when degenerate
};

struct NondegeneracyReport {
  long long p = 0;
  std::vector<FaceVerdict> items;
  bool all_nondegenerate = true;
  bool origin_singular = false;  // f-bar(0,0) = 0 and grad f-bar(0,0) = 0
  std::vector<std::string> notes;
};

namespace detail {

// First torus point (x, y) in (F_p^x)^2, scanned x-major, that solves
// g = dg/dx = dg/dy = 0 over F_p; nullopt when the system has no solution.
inline std::optional<std::pair<long long, long long>> torus_singular_point(
    const BivariatePolynomial& g, long long p) {
  const BivariatePolynomial gb = reduce_mod_p(g, p);
  if (gb.is_zero()) {
    // The zero polynomial is singular everywhere on the torus.
    return std::make_pair<long long, long long>(1, 1);
  }
  const auto [gx, gy] = gb.grad();
  for (long long x = 1; x < p; ++x) {
    for (long long y = 1; y < p; ++y) {
      if (gb.eval_mod(x, y, p) == 0 && gx.eval_mod(x, y, p) == 0 &&
          gy.eval_mod(x, y, p) == 0) {
        return std::make_pair(x, y);
      }
    }
  }
  return std::nullopt;
}

}  // namespace detail

// Exhaustive torus non-degeneracy certificate mod p.  For every face of the
// polygon (vertices, compact edges, the two axis-direction faces, and the
// full polygon, deduplicated by support set) the singular system of the face
// function is scanned over (F_p^x)^2; the first witness per degenerate face
// is reported.  Also reports whether the origin is a singular point of the
// reduction of f.
inline NondegeneracyReport kouchnirenko_check(const BivariatePolynomial& f,
                                              long long p) {
  require_prime(p, "kouchnirenko_check");
  if (p > 97) {
    throw DomainError(
        "kouchnirenko_check: p exceeds the exhaustive-scan cap (97)");
  }
  const GeomNewtonPolygon poly = newton_polygon(f);

  std::vector<Face> faces;
  std::set<std::vector<Monomial>> seen;
  auto add_face = [&](Face face) {
    if (face.points.empty()) return;
    if (seen.insert(face.points).second) faces.push_back(std::move(face));
  };
  for (const Monomial& v : poly.vertices) {
    Face fv;
    fv.dim = 0;
    fv.points = {v};
    add_face(fv);
  }
  for (const PolygonEdge& e : poly.edges) {
    add_face(first_meet_locus(poly, e.normal.first, e.normal.second));
  }
  add_face(first_meet_locus(poly, 1, 0));
  add_face(first_meet_locus(poly, 0, 1));
  add_face(first_meet_locus(poly, 0, 0));

  NondegeneracyReport report;
  report.p = p;
  for (const Face& face : faces) {
    FaceVerdict item;
    item.face = face;
    const BivariatePolynomial ft = face_function(f, face);
    if (auto w = detail::torus_singular_point(ft, p)) {
      item.degenerate = true;
      item.witness = *w;
      report.all_nondegenerate = false;
    }
    report.items.push_back(std::move(item));
  }

  const BivariatePolynomial fb = reduce_mod_p(f, p);
  const auto [fx, fy] = fb.grad();
  report.origin_singular = fb.eval_mod(0, 0, p) == 0 &&
                           fx.eval_mod(0, 0, p) == 0 &&
                           fy.eval_mod(0, 0, p) == 0;
  return report;
}

}  // namespace izeta
