// Measure the level sets of the cusp y^2 - x^3 at p = 3, print the series
// coefficients A_k, and fit the generating function as a rational function
// of t with denominator factors predicted by the pole analysis.

#include <iostream>

#include "izeta/padic.hpp"
#include "izeta/poly.hpp"
#include "izeta/zeta.hpp"

int main() {
  const auto f = izeta::parse_poly("y^2-x^3");
  const long long p = 3;
  // The fit needs K >= deg(numerator) + deg(denominator) + 3 = 15 to have
  // verification equations left over; 16 gives one extra check.
  const int K = 16;

  izeta::WalkOptions opt;
  opt.budget = 20'000'000'000ULL;
  const auto table = izeta::measure_level_sets(f, p, K, 1, opt);
  std::cout << "f = y^2 - x^3, p = " << p << ", visited "
            << table.visited << " cells\n\n";

  const auto z = izeta::zeta_series(table, izeta::Character(p, 1, 0));
  std::vector<izeta::Rat> series;
  for (int k = 0; k <= K; ++k) {
    const auto r = z.coeffs[static_cast<std::size_t>(k)].as_rational();
    series.push_back(r ? *r : izeta::Rat(0));
    std::cout << "  A_" << k << " = " << series.back() << "\n";
  }
  std::cout << "  tail <= " << z.tail_bound << "\n\n";

  const auto basis = izeta::fit_basis(f, p);
  std::cout << "denominator factors predicted by the pole analysis:";
  for (const auto& [A, B] : basis) {
    std::cout << " (1 - q^-" << A << " t^" << B << ")";
  }
  std::cout << "\n";

  const auto fit = izeta::fit_rational(series, p, basis, 1);
  if (!fit.consistent) {
    std::cout << "fit INCONSISTENT, first violation at t^"
              << fit.first_violation << "\n";
    return 1;
  }
  std::cout << "fit consistent; numerator coefficients:";
  for (const auto& c : fit.numerator) std::cout << " " << c;
  std::cout << "\ndenominator:";
  for (const auto& d : fit.denominator) {
    std::cout << " (1 - q^-" << d.A << " t^" << d.B << ")^" << d.mult;
  }
  std::cout << "\n";
  return 0;
}
