#include "antiplane/laws.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

namespace antiplane {

AdhesionLaw parse_adhesion_law(const std::string& name) {
  if (name == "E1") return AdhesionLaw::E1;
  if (name == "E1_ED0") return AdhesionLaw::E1_ED0;
  if (name == "E2") return AdhesionLaw::E2;
  if (name == "E3") return AdhesionLaw::E3;
  throw LawError("unknown law '" + name + "'");
}

const char* adhesion_law_name(AdhesionLaw law) {
  switch (law) {
    case AdhesionLaw::E1: return "E1";
    case AdhesionLaw::E1_ED0: return "E1_ED0";
    case AdhesionLaw::E2: return "E2";
    case AdhesionLaw::E3: return "E3";
  }
  return "?";
}

static double table_at(const std::vector<double>& tab, std::size_t i) {
  if (tab.empty()) return 0.0;
  return tab.size() == 1 ? tab[0] : tab.at(i);
}

static double table_inf(const std::vector<double>& tab) {
  double m = 0.0;
  for (double x : tab) m = std::max(m, std::abs(x));
  return m;
}

double AdhesionSpec::lambda_at(std::size_t i) const { return table_at(lambda, i); }
double AdhesionSpec::ED_at(std::size_t i) const { return table_at(ED, i); }
double AdhesionSpec::lambda_inf() const { return table_inf(lambda); }
double AdhesionSpec::ED_inf() const { return table_inf(ED); }

double eval_g(const FrictionSpec& spec, double r, double y) {
  if (r < 0.0) throw LawError("eval_g: negative slip magnitude");
  return std::max(0.0, spec.c0g + spec.c1g * y + spec.c2g * r);
}

double eval_H(const AdhesionSpec& spec, std::size_t i, double beta, double u) {
  const double lam = spec.lambda_at(i);
  switch (spec.law) {
    case AdhesionLaw::E1:
      return spec.ED_at(i) - lam * u * u * beta;
    case AdhesionLaw::E1_ED0:
      return -lam * u * u * beta;
    case AdhesionLaw::E2:
      return -std::max(lam * u * u * beta - spec.ED_at(i), 0.0);
    case AdhesionLaw::E3:
      if (beta <= -1.0) throw LawError("eval_H: E3 needs beta > -1");
      return -lam * beta / (1.0 + beta) * u * u;
  }
  throw LawError("eval_H: bad law");
}

HypothesisConstants derive_constants(const FrictionSpec& fric, const AdhesionSpec& adh) {
  HypothesisConstants c;
  c.c0phi_g = fric.c0g;
  c.c1phi_g = fric.c1g;
  c.c2phi_g = fric.c2g;
  const double lam = adh.lambda_inf();
  c.c1phi_a = c.c2phi_a = c.c3phi_a = lam;
  c.c1beta = c.c2beta = c.c3beta = lam;
  switch (adh.law) {
    case AdhesionLaw::E1:
    case AdhesionLaw::E2:
      c.c0beta = adh.ED_inf();
      break;
    case AdhesionLaw::E1_ED0:
    case AdhesionLaw::E3:
      c.c0beta = 0.0;
      break;
  }
  return c;
}

HypothesisReport check_hypotheses(const FrictionSpec& fric, const AdhesionSpec& adh,
                                  const HypothesisConstants& k, int n_samples,
                                  const SampleBox& box, std::uint64_t seed) {
  if (n_samples < 1) throw LawError("check_hypotheses: need n_samples >= 1");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> ry(box.y_lo, box.y_hi);
  std::uniform_real_distribution<double> rr(box.r_lo, box.r_hi);
  std::uniform_real_distribution<double> rv(box.v_lo, box.v_hi);

  const double lam = adh.lambda_inf();
  const double ed = (adh.law == AdhesionLaw::E1 || adh.law == AdhesionLaw::E2) ? adh.ED_inf() : 0.0;

  auto phi_g = [&](double y, double r, double v) { return eval_g(fric, std::abs(r), y) * std::abs(v); };
  auto phi_a = [&](double y, double r, double v) { return -lam * y * y * r * v; };
  auto H = [&](double y, double r) {
    switch (adh.law) {
      case AdhesionLaw::E1: return ed - lam * r * r * y;
      case AdhesionLaw::E1_ED0: return -lam * r * r * y;
      case AdhesionLaw::E2: return -std::max(lam * r * r * y - ed, 0.0);
      case AdhesionLaw::E3: return -lam * y / (1.0 + y) * r * r;
    }
    return 0.0;
  };

  HypothesisReport rep;
  rep.worst_slack = std::numeric_limits<double>::infinity();
  auto record = [&](const char* name, double slack) {
    if (slack < rep.worst_slack) {
      rep.worst_slack = slack;
      rep.worst_inequality = name;
    }
    if (slack < -1e-12) ++rep.violations;
  };

  for (int s = 0; s < n_samples; ++s) {
    double y1 = ry(rng), y2 = ry(rng);
    double r1 = rr(rng), r2 = rr(rng);
    double v1 = rv(rng), v2 = rv(rng);
    double dv = std::abs(v1 - v2);

    // friction functional: four-point monotonicity-type bound
    {
      double lhs = phi_g(y1, r1, v2) - phi_g(y1, r1, v1) + phi_g(y2, r2, v1) - phi_g(y2, r2, v2);
      double rhs = k.c1phi_g * std::abs(y1 - y2) * dv + k.c2phi_g * std::abs(r1 - r2) * dv;
      record("friction_four_point", rhs - lhs);
    }
    // friction functional at the origin
    record("friction_origin", k.c0phi_g * dv - std::abs(phi_g(0, 0, v1) - phi_g(0, 0, v2)));
    // adhesion functional: four-point bound
    {
      double lhs = phi_a(y1, r1, v2) - phi_a(y1, r1, v1) + phi_a(y2, r2, v1) - phi_a(y2, r2, v2);
      double rhs = (k.c1phi_a * y1 * y1 * std::abs(r1 - r2) +
                    k.c2phi_a * std::abs(y2) * std::abs(r2) * std::abs(y1 - y2) +
                    k.c3phi_a * std::abs(y1) * std::abs(r2) * std::abs(y1 - y2)) *
                   dv;
      record("adhesion_four_point", rhs - lhs);
    }
    // adhesion functional vanishes at the origin
    record("adhesion_origin", -std::abs(phi_a(0, 0, v1)));
    // evolution law: two-point Lipschitz-type bound
    {
      double lhs = std::abs(H(y1, r1) - H(y2, r2));
      double rhs = (k.c1beta * std::abs(y1) * std::abs(r1) + k.c2beta * std::abs(y1) * std::abs(r2)) *
                       std::abs(r1 - r2) +
                   k.c3beta * r2 * r2 * std::abs(y1 - y2);
      record("evolution_two_point", rhs - lhs);
    }
    // evolution law at the origin
    record("evolution_origin", k.c0beta - std::abs(H(0, 0)));
    // collapsed bounds used downstream
    {
      double lhs = phi_g(y1, r1, v2) - phi_g(y1, r1, v1);
      double rhs = (k.c0phi_g + k.c1phi_g * std::abs(y1) + k.c2phi_g * std::abs(r1)) * dv;
      record("friction_growth", rhs - lhs);
    }
    {
      double lhs = phi_a(y1, r1, v2) - phi_a(y1, r1, v1);
      record("adhesion_growth", k.c1phi_a * y1 * y1 * std::abs(r1) * dv - lhs);
    }
    record("evolution_growth",
           k.c0beta + k.c3beta * std::abs(y1) * r1 * r1 - std::abs(H(y1, r1)));
    rep.samples += 9;
  }
  return rep;
}

}  // namespace antiplane
