// Walk through the static analysis of one polynomial: Newton polygon,
// simple-cone refinement, non-degeneracy, and candidate poles.
//
// Build via the `demos` target; run with no arguments or pass a polynomial
// and a prime:  demo_analyze "(y^3-x^2)^2+x^4*y^4" 5

#include <iostream>
#include <string>

#include "izeta/arith.hpp"
#include "izeta/geom.hpp"
#include "izeta/poly.hpp"

int main(int argc, char** argv) {
  const std::string text = argc > 1 ? argv[1] : "(y^3-x^2)^2+x^4*y^4";
  const long long p = argc > 2 ? std::stoll(argv[2]) : 5;

  const auto f = izeta::parse_poly(text);
  std::cout << "f = " << f.to_string() << ", p = " << p << "\n\n";

  const auto poly = izeta::newton_polygon(f);
  std::cout << "Newton polygon: " << poly.edges.size()
            << " compact edge(s)\n";
  for (const auto& e : poly.edges) {
    std::cout << "  edge (" << e.from.first << "," << e.from.second
              << ") -> (" << e.to.first << "," << e.to.second
              << "), inner normal (" << e.normal.first << ","
              << e.normal.second << "), weighted degree " << e.d << "\n";
  }

  const auto fan = izeta::refine_to_simple(poly,
                                           izeta::conical_subdivision(poly));
  std::cout << "\nRefined fan: " << fan.size() << " simple cones\n";
  for (const auto& cone : fan) {
    std::cout << "  dim " << cone.dim << ":";
    for (const auto& g : cone.generators) {
      std::cout << " (" << g.first << "," << g.second << ")";
    }
    std::cout << "\n";
  }

  const auto nd = izeta::kouchnirenko_check(f, p);
  std::cout << "\nNon-degenerate over F_" << p << ": "
            << (nd.all_nondegenerate ? "yes" : "no") << "\n";

  const auto g = izeta::candidate_poles_global(f, p);
  std::cout << "\nCandidate real parts of poles:\n";
  for (const auto& cp : g.poles) {
    std::cout << "  " << cp.value << "  [";
    for (std::size_t i = 0; i < cp.origins.size(); ++i) {
      std::cout << (i ? ", " : "") << cp.origins[i].formula;
    }
    std::cout << "]\n";
  }
  if (g.beta) {
    std::cout << "leading candidate (expected decay exponent): " << *g.beta
              << "\n";
  }
  return 0;
}
