#include "antiplane/laws.hpp"
#include "doctest.h"

using namespace antiplane;

TEST_CASE("friction bound evaluation") {
  CHECK(eval_g({1, 0, 0}, 3.0, 0.4) == 1.0);
  CHECK(eval_g({1, 0.5, 0.1}, 2.0, 1.0) == doctest::Approx(1.7));
  CHECK(eval_g({0, 0, 1}, 0.0, 0.0) == 0.0);
  CHECK(eval_g({-1, 0, 0.1}, 2.0, 0.0) == 0.0);  // clamp keeps the bound nonnegative
  CHECK_THROWS_AS(eval_g({1, 0, 0}, -0.1, 0.0), LawError);
}

TEST_CASE("evolution law right-hand sides") {
  AdhesionSpec e1{AdhesionLaw::E1, {1.0}, {0.2}};
  CHECK(eval_H(e1, 0, 0.5, 0.0) == doctest::Approx(0.2));
  AdhesionSpec e2{AdhesionLaw::E2, {1.0}, {0.5}};
  CHECK(eval_H(e2, 0, 0.3, 1.0) == 0.0);  // positive-part clamp
  CHECK(eval_H(e2, 0, 0.9, 1.0) == doctest::Approx(-0.4));
  AdhesionSpec e3{AdhesionLaw::E3, {0.5}, {}};
  CHECK(eval_H(e3, 0, 1.0, 2.0) == doctest::Approx(-1.0));
  CHECK_THROWS_AS(eval_H(e3, 0, -1.0, 1.0), LawError);
  AdhesionSpec e10{AdhesionLaw::E1_ED0, {2.0}, {}};
  CHECK(eval_H(e10, 0, 0.5, 3.0) == doctest::Approx(-9.0));
}

TEST_CASE("per-vertex tables and their sup norms") {
  AdhesionSpec adh{AdhesionLaw::E1, {0.5, 1.5, 1.0}, {0.1, 0.3}};
  CHECK(adh.lambda_at(1) == 1.5);
  CHECK(adh.lambda_inf() == 1.5);
  CHECK(adh.ED_at(0) == 0.1);
  CHECK(adh.ED_inf() == 0.3);
  AdhesionSpec constant{AdhesionLaw::E1, {0.7}, {0.2}};
  CHECK(constant.lambda_at(5) == 0.7);
}

TEST_CASE("constant derivation per law") {
  FrictionSpec fric{1.0, 0.5, 0.1};
  AdhesionSpec e1{AdhesionLaw::E1, {2.0}, {0.3}};
  HypothesisConstants k = derive_constants(fric, e1);
  CHECK(k.c0phi_g == 1.0);
  CHECK(k.c1phi_g == 0.5);
  CHECK(k.c2phi_g == 0.1);
  CHECK(k.c1phi_a == 2.0);
  CHECK(k.c2phi_a == 2.0);
  CHECK(k.c3phi_a == 2.0);
  CHECK(k.c0beta == 0.3);
  CHECK(k.c3beta == 2.0);

  AdhesionSpec e3{AdhesionLaw::E3, {2.0}, {}};
  HypothesisConstants k3 = derive_constants(fric, e3);
  CHECK(k3.c0beta == 0.0);
  // the sharp E3 constant: ||lambda||, not ||lambda||/2. The halved value
  // fails the two-point bound, e.g. at y1=0, y2=0.5, r1=r2=1:
  // |H(0,1)-H(0.5,1)| = lambda/3 > (lambda/2)*1*0.5 = lambda/4.
  CHECK(k3.c3beta == 2.0);
  {
    double lam = 2.0;
    double lhs = std::abs(0.0 - (-lam * 0.5 / 1.5));
    CHECK(lhs > (lam / 2.0) * 1.0 * 0.5);    // halved constant violated
    CHECK(lhs <= lam * 1.0 * 0.5 + 1e-15);   // sharp constant holds
  }
}

TEST_CASE("hypothesis sampling: shipped laws satisfy the derived constants") {
  FrictionSpec fric{1.0, 0.5, 0.1};
  for (auto law : {AdhesionLaw::E1, AdhesionLaw::E1_ED0, AdhesionLaw::E2, AdhesionLaw::E3}) {
    AdhesionSpec adh{law, {0.8}, {0.2}};
    HypothesisConstants k = derive_constants(fric, adh);
    HypothesisReport rep = check_hypotheses(fric, adh, k, 10000);
    INFO("law ", adhesion_law_name(law), ", worst ", rep.worst_inequality);
    CHECK(rep.violations == 0);
    CHECK(rep.worst_slack >= -1e-12);
  }
}

TEST_CASE("hypothesis sampling flags a deliberately broken constant") {
  FrictionSpec fric{1.0, 0.5, 1.0};
  AdhesionSpec adh{AdhesionLaw::E3, {2.0}, {}};
  HypothesisConstants k = derive_constants(fric, adh);
  k.c3beta /= 2.0;  // the nominal halved value
  HypothesisReport rep = check_hypotheses(fric, adh, k, 10000);
  CHECK(rep.violations > 0);
  CHECK(rep.worst_slack < -1e-12);
}

TEST_CASE("law name round-trip") {
  for (auto law : {AdhesionLaw::E1, AdhesionLaw::E1_ED0, AdhesionLaw::E2, AdhesionLaw::E3})
    CHECK(parse_adhesion_law(adhesion_law_name(law)) == law);
  CHECK_THROWS_AS(parse_adhesion_law("E4"), LawError);
}
