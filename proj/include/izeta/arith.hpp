#pragma once
// Arithmetic boundary data attached to residue-field roots of an edge's
// initial part: per-root multiplicity lines, their exact lower envelope
// (segments, slopes, vertex abscissas), torus non-degeneracy of the vertex
// face functions, and the candidate pole sets derived from the envelope and
// from the polygon's edges.

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "izeta/common.hpp"
#include "izeta/geom.hpp"
#include "izeta/poly.hpp"

namespace izeta {

// Multiplicity data of one residue root theta of the initial part restricted
// to one variable: for each weighted part j, the multiplicity of theta as a
// root of part_j(1, y^a) mod p.  Parts whose reduction mod p vanishes
// identically carry no line; they are flagged instead.
struct ThetaData {
  long long theta = 0;               // element of F_p^x
  std::vector<int> multiplicity;     // e_j per part; -1 when part vanishes
  std::vector<bool> part_vanishes;   // true when part_j = 0 mod p
};

struct TangentConeRoots {
  std::vector<ThetaData> roots;
  bool weight_divisible_warning = false;  // p divides the weight component a
};

namespace detail {

// Dense univariate coefficients mod p, index = exponent.
inline std::vector<long long> dense_mod_p(const UnivariatePolynomial& g,
                                          long long p) {
  int deg = -1;
  for (const auto& [e, c] : g) {
    (void)c;
    deg = std::max(deg, e);
  }
  std::vector<long long> coeffs(static_cast<std::size_t>(deg + 1), 0);
  for (const auto& [e, c] : g) {
    Int r = c % p;
    if (r < 0) r += p;
    coeffs[static_cast<std::size_t>(e)] = static_cast<long long>(r);
  }
  while (!coeffs.empty() && coeffs.back() == 0) coeffs.pop_back();
  return coeffs;
}

inline long long eval_dense_mod_p(const std::vector<long long>& coeffs,
                                  long long x, long long p) {
  long long acc = 0;
  for (std::size_t i = coeffs.size(); i-- > 0;) {
    acc = (acc * x + coeffs[i]) % p;
  }
  return acc;
}

// Multiplicity of root theta via repeated synthetic division by (y - theta).
inline int root_multiplicity_mod_p(std::vector<long long> coeffs,
                                   long long theta, long long p) {
  int mult = 0;
  while (!coeffs.empty() && eval_dense_mod_p(coeffs, theta, p) == 0) {
    // Synthetic division: coeffs <- coeffs / (y - theta).
    std::vector<long long> quotient(coeffs.size() - 1, 0);
    long long carry = 0;
    for (std::size_t i = coeffs.size(); i-- > 1;) {
      carry = (coeffs[i] + carry) % p;
      quotient[i - 1] = carry;
      carry = (carry * theta) % p;
    }
    coeffs = std::move(quotient);
    ++mult;
  }
  return mult;
}

}  // namespace detail

// Roots theta in F_p^x of part_0(1, y^a) mod p, with the multiplicity of
// theta in every part's restriction.  Rejects weights whose initial part
// vanishes identically mod p.
inline TangentConeRoots tangent_cone_roots(const SqhDecomposition& sqh,
                                           long long p) {
  require_prime(p, "tangent_cone_roots");
  const int a = sqh.weight.first;
  TangentConeRoots out;
  out.weight_divisible_warning = (a % p == 0);

  std::vector<std::vector<long long>> dense;
  dense.reserve(sqh.parts.size());
  for (const auto& [d, part] : sqh.parts) {
    (void)d;
    dense.push_back(detail::dense_mod_p(univariate_restriction(part, a), p));
  }
  if (dense.front().empty()) {
    throw DomainError("tangent_cone_roots: prime divides tangent cone");
  }
  for (long long theta = 1; theta < p; ++theta) {
    if (detail::eval_dense_mod_p(dense.front(), theta, p) != 0) continue;
    ThetaData td;
    td.theta = theta;
    for (const auto& coeffs : dense) {
      if (coeffs.empty()) {
        td.multiplicity.push_back(-1);
        td.part_vanishes.push_back(true);
      } else {
        td.multiplicity.push_back(
            detail::root_multiplicity_mod_p(coeffs, theta, p));
        td.part_vanishes.push_back(false);
      }
    }
    out.roots.push_back(std::move(td));
  }
  return out;
}

// Lower-envelope data of the lines (intercept_j) + (slope_j) * z over z >= 0.
struct ArithNewtonPolygon {
  std::pair<int, int> weight = {1, 1};
  long long d0 = 0;    // base weighted degree
  long long theta = 0; // residue root the polygon is attached to

  struct Line {
    long long intercept = 0;  // d_j - d_0
    long long slope = 0;      // multiplicity e_j
  };
  std::vector<Line> lines;  // one per non-vanishing part

  struct Segment {
    long long D = 0;    // weighted degree of the part providing the segment
    long long eps = 0;  // slope
  };
  std::vector<Segment> segments;  // slopes strictly decreasing
  std::vector<Rat> taus;          // vertex abscissas, strictly increasing

  std::size_t vertex_count() const { return taus.size(); }

  // Envelope value w(z) = min over lines at abscissa z (exact).
  Rat envelope_at(const Rat& z) const {
    Rat best;
    bool first = true;
    for (const Line& l : lines) {
      const Rat v = Rat(l.intercept) + Rat(l.slope) * z;
      if (first || v < best) {
        best = v;
        first = false;
      }
    }
    return best;
  }
};

// Exact lower envelope of a family of lines with nonnegative integer slopes
// and intercepts, where exactly one line has intercept 0.  Runs a
// breakpoint sweep in rational arithmetic.
inline ArithNewtonPolygon envelope_of_lines(
    const std::vector<ArithNewtonPolygon::Line>& lines, long long d0,
    std::pair<int, int> weight, long long theta) {
  if (lines.empty()) {
    throw DomainError("envelope_of_lines: at least one line required");
  }
  ArithNewtonPolygon poly;
  poly.weight = weight;
  poly.d0 = d0;
  poly.theta = theta;
  poly.lines = lines;

  // Keep, per slope, the minimal intercept.
  std::map<long long, long long> best_intercept;  // slope -> intercept
  for (const auto& l : lines) {
    if (l.intercept < 0 || l.slope < 0) {
      throw DomainError("envelope_of_lines: negative line data");
    }
    auto it = best_intercept.find(l.slope);
    if (it == best_intercept.end() || l.intercept < it->second) {
      best_intercept[l.slope] = l.intercept;
    }
  }

  // The line with intercept 0 wins at z = 0 (all other intercepts > 0).
  long long cur_slope = -1, cur_intercept = -1;
  for (const auto& [s, c] : best_intercept) {
    if (c == 0 && (cur_slope < 0 || s > cur_slope)) {
      cur_slope = s;
      cur_intercept = 0;
    }
  }
  if (cur_slope < 0) {
    throw DomainError("envelope_of_lines: no line with intercept 0");
  }

  Rat z = 0;
  while (true) {
    poly.segments.push_back({cur_intercept + d0, cur_slope});
    // Next breakpoint: earliest intersection with a strictly smaller slope;
    // ties resolved toward the smallest slope (lines tangent at the vertex
    // do not create segments).
    std::optional<Rat> best_z;
    long long next_slope = 0, next_intercept = 0;
    for (const auto& [s, c] : best_intercept) {
      if (s >= cur_slope) continue;
      const Rat hit = Rat(c - cur_intercept) / Rat(cur_slope - s);
      if (hit <= z) continue;  // already dominated at the current abscissa
      if (!best_z || hit < *best_z ||
          (hit == *best_z && s < next_slope)) {
        best_z = hit;
        next_slope = s;
        next_intercept = c;
      }
    }
    if (!best_z) break;
    poly.taus.push_back(*best_z);
    z = *best_z;
    cur_slope = next_slope;
    cur_intercept = next_intercept;
  }
  return poly;
}

// Arithmetic polygon of one root: envelope of the lines
// (d_j - d_0) + e_j * z taken over the parts that survive mod p.
inline ArithNewtonPolygon arithmetic_newton_polygon(
    const SqhDecomposition& sqh, const ThetaData& theta) {
  std::vector<ArithNewtonPolygon::Line> lines;
  const long long d0 = sqh.base_degree();
  for (std::size_t j = 0; j < sqh.parts.size(); ++j) {
    if (theta.part_vanishes[j]) continue;
    lines.push_back({sqh.parts[j].first - d0, theta.multiplicity[j]});
  }
  return envelope_of_lines(lines, d0, sqh.weight, theta.theta);
}

// Sum of the parts whose line passes through envelope vertex k (1-indexed):
// all parts j with (d_j - d_0) + e_j * tau_k equal to the envelope value,
// including lines merely tangent at the vertex.
inline BivariatePolynomial face_function_at_vertex(
    const SqhDecomposition& sqh, const ThetaData& theta,
    const ArithNewtonPolygon& poly, std::size_t k) {
  if (k < 1 || k > poly.taus.size()) {
    throw DomainError("face_function_at_vertex: vertex index out of range");
  }
  const Rat tau = poly.taus[k - 1];
  const Rat value = poly.envelope_at(tau);
  BivariatePolynomial sum;
  for (std::size_t j = 0; j < sqh.parts.size(); ++j) {
    if (theta.part_vanishes[j]) continue;
    const Rat line_value = Rat(sqh.parts[j].first - poly.d0) +
                           Rat(theta.multiplicity[j]) * tau;
    if (line_value == value) sum = sum + sqh.parts[j].second;
  }
  return sum;
}

// One candidate real part -A/B together with every construction that
// produced it.  The raw (A, B) pairs are retained unreduced because factor
// bases downstream need the original integer exponents.
struct CandidatePole {
  Rat value;  // reduced, negative

  struct Origin {
    enum class Kind { kConstant, kGeometric, kArithmetic };
    Kind kind = Kind::kConstant;
    long long A = 1;
    long long B = 1;
    // Geometric origins: the edge normal.  Arithmetic origins: the root and
    // vertex data.
    std::pair<int, int> edge_normal = {0, 0};
    long long theta = 0;
    int vertex_index = 0;  // 1-based; 0 for the terminal half-line rule
    std::string formula;   // "slope", "vertex", "terminal", "edge", "constant"
  };
  std::vector<Origin> origins;
};

using CandidatePoleSet = std::vector<CandidatePole>;  // sorted by value desc

namespace detail {

inline void add_pole(CandidatePoleSet& set, const Rat& value,
                     CandidatePole::Origin origin) {
  for (CandidatePole& p : set) {
    if (p.value == value) {
      p.origins.push_back(std::move(origin));
      return;
    }
  }
  CandidatePole p;
  p.value = value;
  p.origins.push_back(std::move(origin));
  set.push_back(std::move(p));
  std::sort(set.begin(), set.end(),
            [](const CandidatePole& a, const CandidatePole& b) {
              return a.value > b.value;
            });
}

}  // namespace detail

// Candidate poles contributed by one arithmetic polygon: for each vertex i,
// -1/eps_i and the vertex ratio -((a+b)+tau_i)/(D_i + eps_i tau_i) (clearing
// the denominator of tau_i to obtain an integer (A, B) pair), plus
// -1/eps_{r+1} for the terminal half-line when its slope is nonzero.
inline CandidatePoleSet candidate_poles_theta(const ArithNewtonPolygon& poly) {
  CandidatePoleSet out;
  const long long ab = poly.weight.first + poly.weight.second;
  const std::size_t r = poly.vertex_count();
  for (std::size_t i = 1; i <= r; ++i) {
    const auto& seg = poly.segments[i - 1];
    {
      CandidatePole::Origin o;
      o.kind = CandidatePole::Origin::Kind::kArithmetic;
      o.theta = poly.theta;
      o.vertex_index = static_cast<int>(i);
      o.formula = "slope";
      o.A = 1;
      o.B = seg.eps;
      detail::add_pole(out, Rat(-1) / Rat(seg.eps), o);
    }
    {
      // tau_i = P/Q reduced; A = (a+b)Q + P, B = D_i Q + eps_i P.  The same
      // value results from the following segment's data because both lines
      // meet at the vertex.
      const Rat tau = poly.taus[i - 1];
      const Int P = boost::multiprecision::numerator(tau);
      const Int Q = boost::multiprecision::denominator(tau);
      const Int A = ab * Q + P;
      const Int B = seg.D * Q + seg.eps * P;
      CandidatePole::Origin o;
      o.kind = CandidatePole::Origin::Kind::kArithmetic;
      o.theta = poly.theta;
      o.vertex_index = static_cast<int>(i);
      o.formula = "vertex";
      o.A = static_cast<long long>(A);
      o.B = static_cast<long long>(B);
      detail::add_pole(out, -Rat(A) / Rat(B), o);
    }
  }
  const auto& last = poly.segments.back();
  if (last.eps != 0) {
    CandidatePole::Origin o;
    o.kind = CandidatePole::Origin::Kind::kArithmetic;
    o.theta = poly.theta;
    o.vertex_index = 0;
    o.formula = "terminal";
    o.A = 1;
    o.B = last.eps;
    detail::add_pole(out, Rat(-1) / Rat(last.eps), o);
  }
  return out;
}

// Arithmetic polygons of every (edge, theta) pair.  Edges whose face
// function is a monomial are skipped (no torus roots).
struct EdgeArithmeticData {
  PolygonEdge edge;
  SqhDecomposition sqh;
  TangentConeRoots roots;
  std::vector<ArithNewtonPolygon> polygons;  // parallel to roots.roots
};

inline std::vector<EdgeArithmeticData> edge_arithmetic_data(
    const BivariatePolynomial& f, long long p) {
  const GeomNewtonPolygon poly = newton_polygon(f);
  std::vector<EdgeArithmeticData> out;
  for (const PolygonEdge& e : poly.edges) {
    const Face face = first_meet_locus(poly, e.normal.first, e.normal.second);
    if (face_function(f, face).is_monomial()) continue;
    EdgeArithmeticData data{
        e, sqh_decompose(f, e.normal.first, e.normal.second),
        TangentConeRoots{}, {}};
    data.roots = tangent_cone_roots(data.sqh, p);
    for (const ThetaData& td : data.roots.roots) {
      data.polygons.push_back(arithmetic_newton_polygon(data.sqh, td));
    }
    out.push_back(std::move(data));
  }
  return out;
}

// Global candidate pole data: the constant -1, the geometric ratios of the
// compact edges, and the arithmetic sets of every (edge, theta) polygon,
// plus the decay exponent beta = max of the geometric and arithmetic pole
// values (absent when neither family contributes).
struct GlobalPoleData {
  CandidatePoleSet poles;
  std::optional<Rat> beta;
  std::vector<EdgeArithmeticData> arithmetic;  // per-edge detail
  bool weight_divisible_warning = false;
};

inline GlobalPoleData candidate_poles_global(const BivariatePolynomial& f,
                                             long long p) {
  require_prime(p, "candidate_poles_global");
  if (f.is_zero() || reduce_mod_p(f, p).is_zero()) {
    throw DomainError("candidate_poles_global: f vanishes mod p");
  }
  GlobalPoleData out;
  {
    CandidatePole::Origin o;
    o.kind = CandidatePole::Origin::Kind::kConstant;
    o.formula = "constant";
    o.A = 1;
    o.B = 1;
    detail::add_pole(out.poles, Rat(-1), o);
  }
  const GeomNewtonPolygon poly = newton_polygon(f);
  std::optional<Rat> beta_geom, beta_arith;
  for (const PolygonEdge& e : poly.edges) {
    if (e.d == 0) continue;
    const Rat value =
        -Rat(e.normal.first + e.normal.second) / Rat(e.d);
    CandidatePole::Origin o;
    o.kind = CandidatePole::Origin::Kind::kGeometric;
    o.edge_normal = e.normal;
    o.formula = "edge";
    o.A = e.normal.first + e.normal.second;
    o.B = e.d;
    detail::add_pole(out.poles, value, o);
    if (!beta_geom || value > *beta_geom) beta_geom = value;
  }
  out.arithmetic = edge_arithmetic_data(f, p);
  for (const EdgeArithmeticData& data : out.arithmetic) {
    out.weight_divisible_warning |= data.roots.weight_divisible_warning;
    for (const ArithNewtonPolygon& ap : data.polygons) {
      for (const CandidatePole& cp : candidate_poles_theta(ap)) {
        for (const CandidatePole::Origin& o : cp.origins) {
          detail::add_pole(out.poles, cp.value, o);
        }
        if (!beta_arith || cp.value > *beta_arith) beta_arith = cp.value;
      }
    }
  }
  if (beta_geom && beta_arith) {
    out.beta = std::max(*beta_geom, *beta_arith);
  } else if (beta_geom) {
    out.beta = beta_geom;
  } else {
    out.beta = beta_arith;
  }
  return out;
}

// Arithmetic non-degeneracy certificate mod p: (a) the origin is a singular
// point of the reduction, (b) the reduction has no singular torus points,
// (c) no vertex face function of any (edge, theta) polygon has a singular
// torus zero.  The verdict is the conjunction; witnesses are reported per
// failed item.
inline NondegeneracyReport arithmetic_nondegeneracy_check(
    const BivariatePolynomial& f, long long p) {
  require_prime(p, "arithmetic_nondegeneracy_check");
  if (p > 97) {
    throw DomainError(
        "arithmetic_nondegeneracy_check: p exceeds the exhaustive-scan cap");
  }
  NondegeneracyReport report;
  report.p = p;

  const BivariatePolynomial fb = reduce_mod_p(f, p);
  const auto [fx, fy] = fb.grad();
  report.origin_singular = fb.eval_mod(0, 0, p) == 0 &&
                           fx.eval_mod(0, 0, p) == 0 &&
                           fy.eval_mod(0, 0, p) == 0;
  if (!report.origin_singular) {
    report.all_nondegenerate = false;
    report.notes.push_back("origin is not a singular point of the reduction");
  }

  // (b) the full reduction, reported as the polygon-level item.
  {
    FaceVerdict item;
    item.face = first_meet_locus(newton_polygon(f), 0, 0);
    if (auto w = detail::torus_singular_point(f, p)) {
      item.degenerate = true;
      item.witness = *w;
      report.all_nondegenerate = false;
    }
    report.items.push_back(std::move(item));
  }

  // (c) vertex face functions.
  for (const EdgeArithmeticData& data : edge_arithmetic_data(f, p)) {
    for (std::size_t t = 0; t < data.roots.roots.size(); ++t) {
      const ThetaData& td = data.roots.roots[t];
      const ArithNewtonPolygon& ap = data.polygons[t];
      for (std::size_t k = 1; k <= ap.vertex_count(); ++k) {
        const BivariatePolynomial fq =
            face_function_at_vertex(data.sqh, td, ap, k);
        FaceVerdict item;
        item.face.dim = 1;
        item.face.points = fq.support();
        if (auto w = detail::torus_singular_point(fq, p)) {
          item.degenerate = true;
          item.witness = *w;
          report.all_nondegenerate = false;
        }
        report.items.push_back(std::move(item));
      }
    }
  }
  report.notes.push_back(
      "residue roots are pairwise distinct by construction; root depth "
      "offset is fixed at 0");
  return report;
}

}  // namespace izeta
