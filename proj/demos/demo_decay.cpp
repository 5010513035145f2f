// Compare exponential sums E(u p^{-m}) of the worked example against the
// decay rate p^{beta m} predicted by the leading candidate pole.

#include <iostream>

#include "izeta/expsum.hpp"
#include "izeta/poly.hpp"

int main() {
  const auto f = izeta::parse_poly("(y^3-x^2)^2+x^4*y^4");
  const long long p = 5;

  const auto rep = izeta::decay_report(f, p, 5);
  std::cout << "f = (y^3-x^2)^2 + x^4 y^4, p = " << p << "\n";
  std::cout << "decay exponent beta = " << rep.beta
            << (rep.beta_from_poles ? " (from the candidate poles)"
                                    : " (fallback)")
            << "\n\n";
  std::cout << "normalized ratios r_m = max_u |E(u p^-m)| / (m p^{beta m}):"
            << "\n";
  for (std::size_t i = 0; i < rep.ratios.size(); ++i) {
    std::cout << "  m = " << (i + 1) << ": " << rep.ratios[i] << "\n";
  }
  std::cout << "\nrho = r_max / r_1 = " << rep.rho << "\n";
  for (const auto& n : rep.notes) std::cout << "note: " << n << "\n";
  return rep.rho <= 2.0 ? 0 : 1;
}
