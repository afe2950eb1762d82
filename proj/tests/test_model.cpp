#include <gtest/gtest.h>

#include "mbhf/mb_model.hpp"

using namespace mbhf;

TEST(LogGamma, MatchesLgammaOnRealAxis) {
  for (double x : {0.1, 0.5, 1.0, 2.5, 7.3, 30.0, 171.5})
    EXPECT_NEAR(log_gamma(cplx(x)).real(), std::lgamma(x), 1e-12 * std::max(1.0, std::abs(std::lgamma(x))));
  // Gamma(-0.5) = -2 sqrt(pi): principal log has imaginary part pi
  cplx v = log_gamma(cplx(-0.5, 0.0));
  EXPECT_NEAR(v.real(), std::log(2 * std::sqrt(M_PI)), 1e-13);
  EXPECT_THROW(log_gamma(cplx(-2.0)), Error);
}

TEST(Model, CanonicalOrderExample) {
  auto g = parse_gamma_list(
      "G(z2-z3)G(a+a1+z3)G(z2+2*z3)G(c+z3)G(z2)G(-z2)G(z1+z3)G(b+z1)G(-z2+z3)G(a+z3)G(-z1)");
  MBIntegral m;
  m.nvars = 3;
  m.kernels = {parse_expr("x"), parse_expr("y"), parse_expr("z")};
  m.gammas = g;
  EXPECT_EQ(gamma_string(canonicalize(m).gammas),
            "Γ(−z1)Γ(−z2)Γ(b+z1)Γ(z2)Γ(a+z3)Γ(a+a1+z3)Γ(c+z3)Γ(z1+z3)Γ(−z2+z3)Γ(z2−z3)Γ(z2+2z3)");
}
