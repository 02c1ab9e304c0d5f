#include <gtest/gtest.h>

#include "optwist/convolution.hpp"
#include "instances.hpp"
#include "oracles.hpp"

using namespace optwist;
using instances::gauge_module;
using instances::random_convolution_element;

namespace {

const std::vector<CooperadVariant> kVariants = {
    CooperadVariant::uas_dual, CooperadVariant::endc_shifted, CooperadVariant::ucom_dual};

}  // namespace

TEST(Star, LeftUnit) {
  oracles::Rng rng(1);
  auto mod = gauge_module();
  for (auto v : kVariants) {
    auto one = convolution_unit(mod, v);
    auto g = random_convolution_element(rng, mod, v, -1, 3);
    auto r = star(one, g, 4);
    EXPECT_TRUE(r.equals_up_to(g, 4));
  }
}

TEST(Star, ArityOneIsComposition) {
  auto mod = gauge_module();
  const auto& m = *mod;
  ConvolutionElement f(mod, CooperadVariant::uas_dual, -1, 1);
  ConvolutionElement g(mod, CooperadVariant::uas_dual, -1, 1);
  f.comp_mut(1).add_entry({m.basis.index("b1")}, Element::basis_vector(m.basis.index("b2")), m);
  g.comp_mut(1).add_entry({m.basis.index("a1")}, Element::basis_vector(m.basis.index("b1")), m);
  auto r = star(f, g, 2);
  // f o g : a1 -> b2
  Element out = r.comp(1).evaluate({m.basis.index("a1")}, m);
  EXPECT_EQ(out, Element::basis_vector(m.basis.index("b2")));
}

TEST(Star, PrintedSignVectorEndc) {
  // f, g supported in arity 2, |g| = -1: the (p,q,r) = (1,2,0) term carries
  // (-1)^{p(q+1)+|g|(p+r)} = +1 and (0,2,1) carries -1.
  oracles::Rng rng(2);
  auto mod = gauge_module();
  for (int trial = 0; trial < 5; ++trial) {
    ConvolutionElement f(mod, CooperadVariant::endc_shifted, 0, 2);
    ConvolutionElement g(mod, CooperadVariant::endc_shifted, -1, 2);
    f.components[2] = random_convolution_element(rng, mod, CooperadVariant::endc_shifted, 0, 2)
                          .components[2];
    g.components[2] = random_convolution_element(rng, mod, CooperadVariant::endc_shifted, -1, 2)
                          .components[2];
    auto r = star(f, g, 3);
    MultilinearMap expect = compose_at(f.comp(2), 2, g.comp(2), *mod);
    expect += compose_at(f.comp(2), 1, g.comp(2), *mod) * Rational(-1);
    EXPECT_EQ(r.comp(3), expect);
  }
}

TEST(Star, PreLieRightSymmetry) {
  oracles::Rng rng(3);
  auto mod = gauge_module();
  for (auto v : kVariants) {
    for (int trial = 0; trial < 6; ++trial) {
      int da = rng.range(-1, 1), db = rng.range(-1, 1), dc = rng.range(-1, 1);
      auto a = random_convolution_element(rng, mod, v, da, 3);
      auto b = random_convolution_element(rng, mod, v, db, 3);
      auto c = random_convolution_element(rng, mod, v, dc, 3);
      const int cap = 3, work = 5;
      auto assoc = [&](const ConvolutionElement& x, const ConvolutionElement& y,
                       const ConvolutionElement& z) {
        return star(star(x, y, work), z, cap) - star(x, star(y, z, work), cap);
      };
      auto lhs = assoc(a, b, c);
      auto rhs = assoc(a, c, b);
      int s = (db & 1) && (dc & 1) ? -1 : 1;
      EXPECT_TRUE(lhs.equals_up_to(rhs * Rational(s), cap))
          << "variant " << static_cast<int>(v) << " degrees " << da << db << dc;
    }
  }
}

TEST(Braces, BaseCasesAndSymmetry) {
  oracles::Rng rng(4);
  auto mod = gauge_module();
  for (auto v : kVariants) {
    auto a = random_convolution_element(rng, mod, v, -1, 3);
    auto b = random_convolution_element(rng, mod, v, 1, 3);
    auto c = random_convolution_element(rng, mod, v, -1, 3);
    EXPECT_TRUE(brace(a, {}, 3).equals_up_to(a, 3));
    EXPECT_TRUE(brace(a, {b}, 3).equals_up_to(star(a, b, 3), 3));
    // {a;b,c} = (-1)^{|b||c|} {a;c,b}
    auto lhs = brace(a, {b, c}, 3);
    auto rhs = brace(a, {c, b}, 3);
    int s = (b.degree & 1) && (c.degree & 1) ? -1 : 1;
    EXPECT_TRUE(lhs.equals_up_to(rhs * Rational(s), 3));
  }
}

TEST(Circle, UnitLaws) {
  oracles::Rng rng(5);
  auto mod = gauge_module();
  for (auto v : kVariants) {
    auto a = random_convolution_element(rng, mod, v, -1, 3);
    auto one = convolution_unit(mod, v);
    EXPECT_TRUE(circle(a, one, 3).equals_up_to(a, 3));
    auto b = random_convolution_element(rng, mod, v, 0, 3);
    auto g = one + b;
    EXPECT_TRUE(circle(one, g, 4).equals_up_to(g, 4));
  }
}

TEST(Exp, TruncatingSeries) {
  auto mod = gauge_module();
  const auto& m = *mod;
  // lambda supported in arity 0 only: e^lambda = 1 + lambda
  ConvolutionElement lam(mod, CooperadVariant::uas_dual, 0, 0);
  lam.set_constant_term(Element::basis_vector(m.basis.index("a1")));
  auto e = prelie_exp(lam, 3);
  auto expect = convolution_unit(mod, CooperadVariant::uas_dual) + lam;
  EXPECT_TRUE(e.equals_up_to(expect, 3));
}

TEST(ExpLog, MutuallyInverse) {
  oracles::Rng rng(6);
  auto mod = gauge_module();
  for (auto v : kVariants) {
    for (int trial = 0; trial < 17; ++trial) {
      auto lam = random_convolution_element(rng, mod, v, 0, 4);
      auto g = prelie_exp(lam, 4);
      auto back = prelie_log(g, 4);
      EXPECT_TRUE(back.equals_up_to(lam, 4));
      auto fwd = prelie_exp(prelie_log(g, 4 + mod->nilpotency), 4);
      EXPECT_TRUE(fwd.equals_up_to(g, 4));
    }
  }
  // log(1) = 0
  auto one = convolution_unit(mod, CooperadVariant::uas_dual);
  EXPECT_TRUE(prelie_log(one, 4).is_zero());
}

TEST(Log, MagnusCoefficients) {
  // log(1+x) = x - 1/2 x*x + 1/4 x*(x*x) + 1/12 (x*x)*x on N=4 instances,
  // where the two order-three brackets differ.
  oracles::Rng rng(7);
  auto mod = gauge_module();
  bool separated = false;
  for (int trial = 0; trial < 40; ++trial) {
    auto x = random_convolution_element(rng, mod, CooperadVariant::uas_dual, 0, 4, 3,
                                        /*raise_all=*/true);
    const int cap = 4, work = 8;
    auto xx = star(x, x, work);
    auto xxx_r = star(x, xx, cap);
    auto xxx_l = star(xx, x, cap);
    auto expect = x.truncated(cap) + xx.truncated(cap) * Rational(-1, 2) +
                  xxx_r * Rational(1, 4) + xxx_l * Rational(1, 12);
    auto one = convolution_unit(mod, CooperadVariant::uas_dual);
    auto got = prelie_log(one + x, cap);
    EXPECT_TRUE(got.equals_up_to(expect, cap));
    if (!xxx_r.equals_up_to(xxx_l, cap)) separated = true;
  }
  // the instance family genuinely separates the two order-3 terms
  EXPECT_TRUE(separated);
}

TEST(Bch, Basics) {
  oracles::Rng rng(8);
  auto mod = gauge_module();
  auto x = random_convolution_element(rng, mod, CooperadVariant::uas_dual, 0, 3);
  ConvolutionElement zero(mod, CooperadVariant::uas_dual, 0, 3);
  EXPECT_TRUE(bch(x, zero, 3).equals_up_to(x, 3));

  // arity-0 supported elements: BCH(a,b) = a+b
  const auto& m = *mod;
  ConvolutionElement a(mod, CooperadVariant::uas_dual, 0, 0);
  a.set_constant_term(Element::basis_vector(m.basis.index("a1")));
  ConvolutionElement b(mod, CooperadVariant::uas_dual, 0, 0);
  b.set_constant_term(Element::basis_vector(m.basis.index("b1")) * Rational(3));
  EXPECT_TRUE(bch(a, b, 3).equals_up_to(a + b, 3));
}

TEST(Bch, LeadingTermsMatchPrintedSeries) {
  oracles::Rng rng(9);
  auto mod = gauge_module();  // nilpotency 4: the printed series is exact
  for (auto v : kVariants) {
    for (int trial = 0; trial < 6; ++trial) {
      auto x = random_convolution_element(rng, mod, v, 0, 3, 3, /*raise_all=*/true);
      auto y = random_convolution_element(rng, mod, v, 0, 3, 3, /*raise_all=*/true);
      auto got = bch(x, y, 3);
      auto expect = oracles::bch_series_order3(x, y, 3);
      EXPECT_TRUE(got.equals_up_to(expect, 3));
    }
  }
}

TEST(Bch, ExpIsHomomorphism) {
  // exp(BCH_literal(x,y)) = exp(x) (x) exp(y), with the independent literal
  // series on the left (exact at nilpotency 4).
  oracles::Rng rng(10);
  auto mod = gauge_module();
  for (int trial = 0; trial < 8; ++trial) {
    auto x = random_convolution_element(rng, mod, CooperadVariant::uas_dual, 0, 3, 3,
                                        /*raise_all=*/true);
    auto y = random_convolution_element(rng, mod, CooperadVariant::uas_dual, 0, 3, 3,
                                        /*raise_all=*/true);
    const int cap = 3, work = 8;
    auto lhs = prelie_exp(oracles::bch_series_order3(x, y, work), cap);
    auto rhs = circle(prelie_exp(x, work), prelie_exp(y, work), cap);
    EXPECT_TRUE(lhs.equals_up_to(rhs, cap));
  }
}

TEST(Circle, AssociativeOnGroupLikes) {
  oracles::Rng rng(11);
  auto mod = gauge_module();
  for (auto v : kVariants) {
    for (int trial = 0; trial < 4; ++trial) {
      auto one = convolution_unit(mod, v);
      auto f = one + random_convolution_element(rng, mod, v, 0, 3);
      auto g = one + random_convolution_element(rng, mod, v, 0, 3);
      auto h = one + random_convolution_element(rng, mod, v, 0, 3);
      const int cap = 3, work = 8;
      auto lhs = circle(circle(f, g, work), h, cap);
      auto rhs = circle(f, circle(g, h, work), cap);
      EXPECT_TRUE(lhs.equals_up_to(rhs, cap));
    }
  }
}

TEST(GaugeAction, TrivialDirection) {
  oracles::Rng rng(12);
  auto mod = gauge_module();
  auto alpha = instances::base_mc(mod, CooperadVariant::uas_dual);
  ConvolutionElement zero(mod, CooperadVariant::uas_dual, 0, 2);
  auto r = gauge_action(zero, alpha, 3);
  EXPECT_TRUE(r.equals_up_to(alpha, 3));
}

TEST(GaugeAction, PreservesMaurerCartan) {
  oracles::Rng rng(13);
  auto mod = gauge_module();
  for (auto v : kVariants) {
    for (int trial = 0; trial < 5; ++trial) {
      auto alpha = instances::random_mc(rng, mod, v, 4);
      ASSERT_TRUE(is_maurer_cartan(alpha, 3));
      auto lam = random_convolution_element(rng, mod, v, 0, 3);
      auto moved = gauge_action(lam, alpha, 4);
      EXPECT_TRUE(is_maurer_cartan(moved, 3));
    }
  }
}

TEST(GaugeAction, GroupActionViaBch) {
  oracles::Rng rng(14);
  auto mod = gauge_module();
  for (int trial = 0; trial < 5; ++trial) {
    auto alpha = instances::random_mc(rng, mod, CooperadVariant::uas_dual, 6);
    auto l1 = random_convolution_element(rng, mod, CooperadVariant::uas_dual, 0, 3);
    auto l2 = random_convolution_element(rng, mod, CooperadVariant::uas_dual, 0, 3);
    const int cap = 3, work = 8;
    auto lhs = gauge_action(l1, gauge_action(l2, alpha, work), cap);
    auto rhs = gauge_action(bch(l1, l2, work), alpha, cap);
    EXPECT_TRUE(lhs.equals_up_to(rhs, cap));
  }
}

TEST(GaugeAction, RejectsNonMaurerCartan) {
  oracles::Rng rng(15);
  auto mod = gauge_module();
  const auto& m = *mod;
  ConvolutionElement alpha(mod, CooperadVariant::uas_dual, -1, 1);
  // d with d^2 != 0: a1 -> b1? wrong degree; use a3 -> a1 -> b2 chain
  alpha.comp_mut(1).add_entry({m.basis.index("a3")}, Element::basis_vector(m.basis.index("a1")),
                              m);
  alpha.comp_mut(1).add_entry({m.basis.index("a1")}, Element::basis_vector(m.basis.index("b2")),
                              m);
  ConvolutionElement zero(mod, CooperadVariant::uas_dual, 0, 1);
  EXPECT_THROW(gauge_action(zero, alpha, 3), NotMaurerCartan);
}

TEST(Isotopy, InvertBasics) {
  oracles::Rng rng(16);
  auto mod = gauge_module();
  auto one = convolution_unit(mod, CooperadVariant::uas_dual);
  EXPECT_TRUE(isotopy_invert(one, 3).equals_up_to(one, 3));

  auto lam = random_convolution_element(rng, mod, CooperadVariant::uas_dual, 0, 3);
  const int cap = 3, work = 8;
  auto f = prelie_exp(lam, work);
  auto finv = isotopy_invert(f, work);
  EXPECT_TRUE(finv.equals_up_to(prelie_exp(lam * Rational(-1), work), cap));
  EXPECT_TRUE(circle(f, finv, cap).equals_up_to(one, cap));
  EXPECT_TRUE(circle(finv, f, cap).equals_up_to(one, cap));
}

TEST(Gauge, FiltrationGuards) {
  auto mod = gauge_module();
  const auto& m = *mod;
  // arity-1 part that is not filtration-raising cannot be a gauge direction
  ConvolutionElement bad(mod, CooperadVariant::uas_dual, 0, 1);
  bad.comp_mut(1).add_entry({m.basis.index("a1")}, Element::basis_vector(m.basis.index("a1")),
                            m);
  EXPECT_THROW(prelie_exp(bad, 3), FiltrationViolation);
  EXPECT_THROW(validate_gauge_direction(bad), FiltrationViolation);
}

TEST(Star, VariantMismatchRejected) {
  oracles::Rng rng(17);
  auto mod = gauge_module();
  auto f = random_convolution_element(rng, mod, CooperadVariant::uas_dual, 0, 2);
  auto g = random_convolution_element(rng, mod, CooperadVariant::ucom_dual, 0, 2);
  EXPECT_THROW(star(f, g, 2), VariantMismatch);
}
