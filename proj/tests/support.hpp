#pragma once

#include <cstdint>
#include <vector>

#include "nsmlimit/integrator.hpp"
#include "nsmlimit/model.hpp"

namespace nsmtest {

using namespace nsmlimit;

/// Errors at the final time for dt = T/10, T/20, T/40 and the two observed
/// orders log2(e_i / e_{i+1}).
struct OrderStudy {
  std::vector<double> errors;
  std::vector<double> orders;
};

/// q(t) = q_a + sin(ωt) q_b is made an exact solution of the semi-discrete
/// full system by the source F(t) = ω cos(ωt) q_b − rhs_full(q(t)).
OrderStudy full_manufactured_order(const Params& p, const Grid& g, std::uint64_t seed, double T);
OrderStudy limit_manufactured_order(const Params& p, const Grid& g, std::uint64_t seed, double T);

/// sqrt(Σ squared L² norms of all components).
double state_distance(const FullState& a, const FullState& b);
double state_distance(const LimitState& a, const LimitState& b);

}  // namespace nsmtest

#include "nsmlimit/diagnostics.hpp"

namespace nsmtest {

/// Paired full/limit run from well-prepared data (1 axis, 64 points), with
/// snapshots at t_center − dt, t_center, t_center + dt.
std::vector<nsmlimit::AuditSnapshot> audit_window(const nsmlimit::Params& p, double dt, double t_center,
                                                  std::uint64_t seed = 1);

}  // namespace nsmtest
