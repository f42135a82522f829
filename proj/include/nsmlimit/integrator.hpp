#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <functional>
#include <optional>
#include <vector>

#include "nsmlimit/errors.hpp"
#include "nsmlimit/params.hpp"
#include "nsmlimit/state.hpp"

namespace nsmlimit {

enum class StepMode { fixed_dt, adaptive };

struct StepControl {
  double dt = 2e-4;
  double cfl = 0.5;  ///< advective Courant number, used in adaptive mode
  double t_end = 0.1;
  StepMode mode = StepMode::fixed_dt;
  std::size_t stride = 1;  ///< observer is called every `stride` steps

  /// Throws ConfigError on a nonpositive dt or stride, cfl outside (0, 1]
  /// or a negative t_end.
  void validate() const;
};

/// Per-mode linear part of the κ-scaled system, linearized about the mean
/// density n̄. On (Ĵ, Ê, B̂):
///   ∂t Ĵ = a Ê − f Ĵ − (μ/n̄)|k|² Ĵ − ((μ+λ)/n̄) k (k·Ĵ)
///   ∂t Ê = i k×B̂ / κ − n̄ P_k Ĵ
///   ∂t B̂ = −i k×Ê / κ
/// with a = (1+ε)/(τε), f = a κ_ei K κ² n̄ and P_k the Leray symbol; on û
/// only the viscous multiplier acts. Stores both the generator and exp(h L).
class StiffOperator {
 public:
  using Block = Eigen::Matrix<std::complex<double>, 9, 9>;
  using Viscous = Eigen::Matrix3d;

  /// Propagators exp(h·L_k) for every mode of `grid`.
  StiffOperator(const Grid& grid, const Params& p, double n_mean, double h);
  /// L = 0: identity propagators.
  static StiffOperator zero(const Grid& grid, double h);

  double h() const noexcept { return h_; }
  const Grid& grid() const noexcept { return grid_; }
  std::size_t modes() const noexcept { return gen_.size(); }
  const Block& generator(std::size_t mode) const { return gen_[mode]; }
  const Block& propagator(std::size_t mode) const { return prop_[mode]; }
  const Viscous& viscous_generator(std::size_t mode) const { return visc_gen_[mode]; }
  const Viscous& viscous_propagator(std::size_t mode) const { return visc_prop_[mode]; }

  /// s ← exp(hL) s (density untouched).
  void propagate(FullState& s) const;
  void propagate(LimitState& s) const;
  /// L s, with a zero density component.
  FullState apply(const FullState& s) const;
  LimitState apply(const LimitState& s) const;

 private:
  StiffOperator(const Grid& grid, double h);

  Grid grid_;
  double h_;
  std::vector<Block> gen_, prop_;
  std::vector<Viscous> visc_gen_, visc_prop_;
};

StiffOperator build_stiff_operator(const Grid& grid, const Params& p, double n_mean, double dt);

/// Strang splitting: half stiff propagator, SSP-RK2 on the remaining terms,
/// half stiff propagator, then Leray projection of E and B. The stiff
/// operator is cached per step size.
class FullStepper {
 public:
  using Forcing = std::function<FullState(double t)>;

  FullStepper(const Params& p, double n_mean, bool stiff = true);
  /// Extra source F(t) added to the right-hand side (manufactured solutions).
  void set_forcing(Forcing f) { forcing_ = std::move(f); }
  /// Advances s from t to t + dt. Throws BlowUp on non-finite output.
  FullState step(const FullState& s, double t, double dt);

 private:
  /// rhs_full(s) − L s + F(t).
  FullState nonstiff(const FullState& s, double t) const;
  const StiffOperator& op(const Grid& g, double dt);

  Params p_;
  double n_mean_;
  bool stiff_;
  Forcing forcing_;
  std::optional<StiffOperator> op_;
};

/// Same structure for the limit system with the viscous multiplier as the
/// only implicit part.
class LimitStepper {
 public:
  using Forcing = std::function<LimitState(double t)>;

  LimitStepper(const Params& p, double n_mean, bool stiff = true);
  void set_forcing(Forcing f) { forcing_ = std::move(f); }
  LimitState step(const LimitState& s, double t, double dt);

 private:
  LimitState nonstiff(const LimitState& s, double t) const;
  const StiffOperator& op(const Grid& g, double dt);

  Params p_;
  double n_mean_;
  bool stiff_;
  Forcing forcing_;
  std::optional<StiffOperator> op_;
};

/// One step with a freshly built operator linearized about the mean of s.n.
FullState step_full(const FullState& s, const Params& p, double t, double dt);
LimitState step_limit(const LimitState& s, const Params& p, double t, double dt);

/// Full and limit solutions advanced together on the same time levels.
struct PairedState {
  FullState full;
  LimitState limit;

  const Grid& grid() const { return full.grid(); }
};

class PairedStepper {
 public:
  PairedStepper(const Params& p, double n_mean) : full_(p, n_mean), limit_(p, n_mean) {}
  PairedState step(const PairedState& s, double t, double dt) {
    return PairedState{full_.step(s.full, t, dt), limit_.step(s.limit, t, dt)};
  }

 private:
  FullStepper full_;
  LimitStepper limit_;
};

double advective_speed(const FullState& s);
double advective_speed(const LimitState& s);
double advective_speed(const PairedState& s);

template <class State>
struct Trajectory {
  State state;
  double t = 0.0;
  std::size_t steps = 0;
};

/// Steps from t = 0 to sc.t_end, calling observe(state, t, step) after every
/// `stride`-th step and after the last one. The last step is shortened to
/// land on t_end exactly. t_end = 0 returns the initial state untouched
/// without calling the observer.
template <class State, class Stepper, class Observer>
Trajectory<State> evolve(State s, const StepControl& sc, Stepper& stepper, Observer&& observe) {
  sc.validate();
  Trajectory<State> tr{std::move(s), 0.0, 0};
  while (tr.t < sc.t_end) {
    double dt = sc.dt;
    if (sc.mode == StepMode::adaptive) {
      dt = std::min(dt, sc.cfl * tr.state.grid().spacing() / std::max(1.0, advective_speed(tr.state)));
    }
    const bool last = tr.t + dt >= sc.t_end * (1.0 - 1e-12);
    if (last) dt = sc.t_end - tr.t;
    tr.state = stepper.step(tr.state, tr.t, dt);
    ++tr.steps;
    tr.t = last ? sc.t_end : tr.t + dt;
    if (last || tr.steps % sc.stride == 0) observe(static_cast<const State&>(tr.state), tr.t, tr.steps);
  }
  return tr;
}

}  // namespace nsmlimit
