#pragma once

#include "galgeo/linsets.hpp"
#include "galgeo/moore.hpp"
#include "galgeo/spread.hpp"

namespace galgeo {

constexpr uint64_t kDefaultThetaSeed = 0x1d8a2u;

// Big ambient Sigma* = PG(nt-1, q^n) with Psi = coordinate-wise q-Frobenius,
// whose fixed points form the subgeometry Sigma = PG(nt-1, q). theta spans a
// (t-1)-subspace whose n conjugates decompose Sigma*; gamma (the projection
// center) is spanned by the conjugates outside the index set, lambda (the
// axis) by those inside.
struct SubgeometryFrame {
  const FieldTower* tower = nullptr;
  std::vector<uint32_t> index_set;  // h+1 distinct exponents, 0 included
  Mat theta;                        // t x nt over F_{q^n}, RREF
  ProjSubspace gamma, lambda;
  FqSubspace sigma;                 // rational points of Sigma, blown up
  uint64_t seed = kDefaultThetaSeed;
  uint32_t tries = 0;
};

// Entrywise q^power Frobenius, realizing Psi^power in the standard frame.
Mat psi_apply(const FieldTower& tw, const Mat& m, uint32_t power);

SubgeometryFrame build_subgeometry_frame(const FieldTower& tw, std::vector<uint32_t> index_set,
                                         uint64_t seed = kDefaultThetaSeed);

struct ProjectionResult {
  SubgeometryFrame frame;
  FqSubspace u_ambient;   // U = (S+H) cap V inside the big blown ambient
  Mat lambda_pivots_basis;  // lambda's RREF basis (for coordinate transport)
  LinearSet ls;           // the projected linear set in axis coordinates
};

// U = (S+H) cap V, cross-checked against the direct one-orbit formula; the
// result is materialized as a linear set in Lambda coordinates.
ProjectionResult project_subgeometry(const SubgeometryFrame& frame);

// The field-reduction spread {X(P) : P in Theta} of Sigma.
Spread desarguesian_spread(const SubgeometryFrame& frame);

struct SpreadRecovery {
  Spread spread;
  bool verified = false;            // spread axioms hold
  bool equals_construction = false;  // same element set as desarguesian_spread
  uint32_t theta_bar_power = 0;      // conjugate exponent m with theta_bar = theta^{Psi^m}
  std::vector<uint32_t> ell;         // ell_1 = 0, ell_2, ...
  bool gamma_matches = false;        // gamma = <theta_bar^{Psi^j} : j outside ell>
  bool transversals_match = false;   // T_i = <gamma, theta_bar^{Psi^{ell_i}}> cap lambda
};

// D_L = {<Gamma, pi> cap Sigma : pi in P} from the projected set's
// pseudoregulus, verified and matched against the construction.
SpreadRecovery recover_spread_from_linset(const ProjectionResult& proj,
                                          const std::vector<ProjSubspace>& pseudoregulus,
                                          const std::vector<ProjSubspace>& transversals);

// Shift-equivalence of two maximum h-scattered specs via their exponent
// sets; throws not_maximum_h_scattered when either side is not Moore.
std::optional<uint32_t> equivalent_pseudoregulus_type(const LinearSetSpec& a, const LinearSetSpec& b,
                                                      const ExecPolicy& policy = {});

struct AsympClassification {
  ProgressionInfo progression;
  // For h = 1: the number of shift-orbits of size-2 Moore sets, and phi(n)/2.
  std::optional<uint64_t> orbit_census;
  std::optional<uint64_t> phi_n_half;
};

AsympClassification asymp_classify(const LinearSetSpec& spec, const ExecPolicy& policy = {});

uint64_t euler_phi(uint64_t n);

}  // namespace galgeo
