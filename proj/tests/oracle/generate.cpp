// Prints the reference values frozen into the unit and acceptance tests.
#include <cstdio>

#include "oracle.hpp"

using namespace oracle;

int main() {
  const Radial hom{13, 2, 0, 1};
  for (ld r : {0.5L, 1.0L, 2.0L, 5.0L, 10.0L, 16.0L})
    std::printf("u(%Lg; N=13,p=2,zeta=1) = %.18Lg\n", r, integrate_to(hom, r).u);
  const auto sig = crossings(hom, 18, 2, 900);
  for (std::size_t i = 0; i < sig.size(); ++i) std::printf("sigma_%zu = %.18Lg\n", i + 1, sig[i]);
  const Radial kelvin{13, 2, 7, 1};
  const ld rt = first_zero(kelvin, 10, 1e-4L);
  std::printf("kelvin zero = %.18Lg  r_bar = %.18Lg\n", rt, 1 / rt);
  for (int N : {11, 13}) std::printf("p_JL(%d,0) = %.21Lg\n", N, p_JL(N, 0));
}
