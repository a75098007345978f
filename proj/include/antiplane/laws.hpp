#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace antiplane {

struct LawError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Affine-clamped friction bound g(r, y) = max(0, c0g + c1g*y + c2g*r),
/// Lipschitz in (r, y) with constants (c2g, c1g). The clamp keeps the bound
/// nonnegative without changing the Lipschitz constants.
struct FrictionSpec {
  double c0g = 0.0;
  double c1g = 0.0;
  double c2g = 0.0;
};

enum class AdhesionLaw : std::uint8_t { E1, E1_ED0, E2, E3 };

AdhesionLaw parse_adhesion_law(const std::string& name);
const char* adhesion_law_name(AdhesionLaw law);

/// Bonding-field evolution law dbeta/dt = H(beta, u). lambda and ED may be
/// constant or tabulated per contact vertex; the L-infinity norms used in
/// constant derivation are the max over those values.
struct AdhesionSpec {
  AdhesionLaw law = AdhesionLaw::E1;
  std::vector<double> lambda{0.0};  // size 1 = constant
  std::vector<double> ED{0.0};      // ignored for E1_ED0 / E3

  double lambda_at(std::size_t contact_vertex) const;
  double ED_at(std::size_t contact_vertex) const;
  double lambda_inf() const;
  double ED_inf() const;
};

/// Structural-inequality constants for the friction functional (phi_g),
/// the adhesion functional (phi_a), and the evolution law (beta block).
struct HypothesisConstants {
  double c0phi_g = 0.0, c1phi_g = 0.0, c2phi_g = 0.0;
  double c1phi_a = 0.0, c2phi_a = 0.0, c3phi_a = 0.0;
  double c0beta = 0.0, c1beta = 0.0, c2beta = 0.0, c3beta = 0.0;
};

double eval_g(const FrictionSpec& spec, double r, double y);

/// Right-hand side of the chosen evolution law at a single point.
///   E1:     ED - lambda u^2 beta
///   E1_ED0:    - lambda u^2 beta
///   E2:     -(lambda u^2 beta - ED)_+
///   E3:     -lambda beta/(1+beta) u^2
double eval_H(const AdhesionSpec& spec, std::size_t contact_vertex, double beta, double u);

/// Maps the concrete law parameters to the structural constants.
/// E1/E2: all six functional/evolution Lipschitz constants equal
/// ||lambda||_inf and c0beta = ||ED||_inf (0 for E1_ED0 and E3).
/// For E3 the sharp c3beta on beta >= 0 is ||lambda||_inf; the nominally
/// published ||lambda||_inf / 2 fails the law's own Lipschitz inequality
/// near beta = 0 (see the unit tests), so the sharp value is used.
HypothesisConstants derive_constants(const FrictionSpec& fric, const AdhesionSpec& adh);

struct HypothesisReport {
  double worst_slack = 0.0;       // min over all samples and inequalities
  std::string worst_inequality;   // name of the binding inequality
  int violations = 0;             // samples with slack < -1e-12
  int samples = 0;
};

struct SampleBox {
  double r_lo = -2.0, r_hi = 2.0;  // displacement-trace values
  double v_lo = -2.0, v_hi = 2.0;  // test-function values
  double y_lo = 0.0, y_hi = 1.0;   // bonding values (the invariant regime)
};

/// Samples the structural inequalities of the friction functional, the
/// adhesion functional, and the evolution law (both the four-point forms and
/// the collapsed two-point bounds) on random tuples and reports worst slack.
/// Violations are reported, never thrown.
HypothesisReport check_hypotheses(const FrictionSpec& fric, const AdhesionSpec& adh,
                                  const HypothesisConstants& consts, int n_samples,
                                  const SampleBox& box = {}, std::uint64_t seed = 20240817);

}  // namespace antiplane
