#include "nsmlimit/integrator.hpp"

#include <unsupported/Eigen/MatrixFunctions>

#include "nsmlimit/model.hpp"
#include "nsmlimit/spectral.hpp"

namespace nsmlimit {
namespace {

using Vec9 = Eigen::Matrix<std::complex<double>, 9, 1>;
using Vec3 = Eigen::Matrix<std::complex<double>, 3, 1>;

std::array<Spectrum, 3> forward3(const VectorField& v) { return {forward(v[0]), forward(v[1]), forward(v[2])}; }

VectorField inverse3(const std::array<Spectrum, 3>& s) {
  return VectorField(inverse(s[0]), inverse(s[1]), inverse(s[2]));
}

Eigen::Matrix3d viscous_symbol(const Mode& md, double mu, double lambda, double n_mean) {
  const Eigen::Vector3d k(md.k_odd[0], md.k_odd[1], md.k_odd[2]);
  return -(mu / n_mean) * md.k2 * Eigen::Matrix3d::Identity() - ((mu + lambda) / n_mean) * (k * k.transpose());
}

// Applies a per-mode 9x9 block to (J, E, B) and a 3x3 block to u.
template <class BlockAt, class ViscAt>
void apply_blocks(const Grid& g, VectorField* u, VectorField* J, VectorField* E, VectorField* B, BlockAt block,
                  ViscAt visc) {
  const ModeTable& t = *ModeTable::of(g);
  if (u != nullptr) {
    auto su = forward3(*u);
    for (std::size_t i = 0; i < t.size(); ++i) {
      const Vec3 v(su[0].c[i], su[1].c[i], su[2].c[i]);
      const Vec3 w = visc(i).template cast<std::complex<double>>() * v;
      for (int a = 0; a < 3; ++a) su[a].c[i] = w(a);
    }
    *u = inverse3(su);
  }
  if (J != nullptr) {
    auto sj = forward3(*J), se = forward3(*E), sb = forward3(*B);
    for (std::size_t i = 0; i < t.size(); ++i) {
      Vec9 q;
      for (int a = 0; a < 3; ++a) {
        q(a) = sj[a].c[i];
        q(3 + a) = se[a].c[i];
        q(6 + a) = sb[a].c[i];
      }
      const Vec9 r = block(i) * q;
      for (int a = 0; a < 3; ++a) {
        sj[a].c[i] = r(a);
        se[a].c[i] = r(3 + a);
        sb[a].c[i] = r(6 + a);
      }
    }
    *J = inverse3(sj);
    *E = inverse3(se);
    *B = inverse3(sb);
  }
}

void require_finite(bool ok, double t, const char* what) {
  if (!ok) throw BlowUp(t, what);
}

}  // namespace

void StepControl::validate() const {
  if (!(dt > 0.0)) throw ConfigError("step: dt must be positive");
  if (!(cfl > 0.0 && cfl <= 1.0)) throw ConfigError("step: cfl must lie in (0, 1]");
  if (!(t_end >= 0.0)) throw ConfigError("step: t_end must be nonnegative");
  if (stride == 0) throw ConfigError("step: stride must be positive");
}

StiffOperator::StiffOperator(const Grid& grid, double h) : grid_(grid), h_(h) {
  const std::size_t m = ModeTable::of(grid)->size();
  gen_.assign(m, Block::Zero());
  prop_.assign(m, Block::Identity());
  visc_gen_.assign(m, Viscous::Zero());
  visc_prop_.assign(m, Viscous::Identity());
}

StiffOperator StiffOperator::zero(const Grid& grid, double h) { return StiffOperator(grid, h); }

StiffOperator::StiffOperator(const Grid& grid, const Params& p, double n_mean, double h) : StiffOperator(grid, h) {
  const ModeTable& t = *ModeTable::of(grid);
  const double a = p.field_coupling();
  const double friction = a * p.kappa_ei * p.K_rate * p.kappa * p.kappa * n_mean;
  const std::complex<double> I(0.0, 1.0);
  for (std::size_t i = 0; i < t.size(); ++i) {
    const Mode& md = t[i];
    const Eigen::Vector3d k(md.k_odd[0], md.k_odd[1], md.k_odd[2]);
    const Viscous visc = viscous_symbol(md, p.mu, p.lambda, n_mean);

    Eigen::Matrix3d cross;
    cross << 0.0, -k(2), k(1), k(2), 0.0, -k(0), -k(1), k(0), 0.0;
    const double kk = k.squaredNorm();
    const Eigen::Matrix3d leray =
        kk == 0.0 ? Eigen::Matrix3d::Identity() : Eigen::Matrix3d(Eigen::Matrix3d::Identity() - k * k.transpose() / kk);

    Block L = Block::Zero();
    L.block<3, 3>(0, 0) = (visc - friction * Eigen::Matrix3d::Identity()).cast<std::complex<double>>();
    L.block<3, 3>(0, 3) = a * Eigen::Matrix3cd::Identity();
    L.block<3, 3>(3, 0) = (-n_mean * leray).cast<std::complex<double>>();
    L.block<3, 3>(3, 6) = (I / p.kappa) * cross.cast<std::complex<double>>();
    L.block<3, 3>(6, 3) = (-I / p.kappa) * cross.cast<std::complex<double>>();

    gen_[i] = L;
    prop_[i] = (h * L).exp();
    visc_gen_[i] = visc;
    visc_prop_[i] = (h * visc).exp();
  }
}

StiffOperator build_stiff_operator(const Grid& grid, const Params& p, double n_mean, double dt) {
  return StiffOperator(grid, p, n_mean, dt);
}

void StiffOperator::propagate(FullState& s) const {
  if (!(s.grid() == grid_)) throw GridMismatch();
  apply_blocks(
      grid_, &s.u, &s.J, &s.E, &s.B, [this](std::size_t i) -> const Block& { return prop_[i]; },
      [this](std::size_t i) -> const Viscous& { return visc_prop_[i]; });
}

void StiffOperator::propagate(LimitState& s) const {
  if (!(s.grid() == grid_)) throw GridMismatch();
  apply_blocks(
      grid_, &s.u0, nullptr, nullptr, nullptr, [this](std::size_t i) -> const Block& { return prop_[i]; },
      [this](std::size_t i) -> const Viscous& { return visc_prop_[i]; });
}

FullState StiffOperator::apply(const FullState& s) const {
  if (!(s.grid() == grid_)) throw GridMismatch();
  FullState r = s;
  r.n = ScalarField(grid_);
  apply_blocks(
      grid_, &r.u, &r.J, &r.E, &r.B, [this](std::size_t i) -> const Block& { return gen_[i]; },
      [this](std::size_t i) -> const Viscous& { return visc_gen_[i]; });
  return r;
}

LimitState StiffOperator::apply(const LimitState& s) const {
  if (!(s.grid() == grid_)) throw GridMismatch();
  LimitState r{ScalarField(grid_), s.u0};
  apply_blocks(
      grid_, &r.u0, nullptr, nullptr, nullptr, [this](std::size_t i) -> const Block& { return gen_[i]; },
      [this](std::size_t i) -> const Viscous& { return visc_gen_[i]; });
  return r;
}

// -- full system ---------------------------------------------------------------

FullStepper::FullStepper(const Params& p, double n_mean, bool stiff) : p_(p), n_mean_(n_mean), stiff_(stiff) {}

const StiffOperator& FullStepper::op(const Grid& g, double dt) {
  const double h = 0.5 * dt;
  if (!op_ || op_->h() != h || !(op_->grid() == g))
    op_.emplace(stiff_ ? StiffOperator(g, p_, n_mean_, h) : StiffOperator::zero(g, h));
  return *op_;
}

FullState FullStepper::nonstiff(const FullState& s, double t) const {
  FullState r = rhs_full(s, p_);
  FullState lin = op_->apply(s);
  lin *= -1.0;
  r += lin;
  if (forcing_) r += forcing_(t);
  return r;
}

FullState FullStepper::step(const FullState& s, double t, double dt) {
  const StiffOperator& L = op(s.grid(), dt);
  FullState q = s;
  L.propagate(q);
  require_finite(q.all_finite(), t, "stiff propagator");

  const FullState q1 = q + dt * nonstiff(q, t);
  require_finite(q1.all_finite(), t + dt, "explicit stage");
  FullState q2 = 0.5 * q + 0.5 * (q1 + dt * nonstiff(q1, t + dt));
  L.propagate(q2);
  q2.E = leray_project(q2.E);
  q2.B = leray_project(q2.B);
  require_finite(q2.all_finite(), t + dt, "full step");
  return q2;
}

// -- limit system --------------------------------------------------------------

LimitStepper::LimitStepper(const Params& p, double n_mean, bool stiff) : p_(p), n_mean_(n_mean), stiff_(stiff) {}

const StiffOperator& LimitStepper::op(const Grid& g, double dt) {
  const double h = 0.5 * dt;
  if (!op_ || op_->h() != h || !(op_->grid() == g))
    op_.emplace(stiff_ ? StiffOperator(g, p_, n_mean_, h) : StiffOperator::zero(g, h));
  return *op_;
}

LimitState LimitStepper::nonstiff(const LimitState& s, double t) const {
  LimitState r = rhs_limit(s, p_);
  LimitState lin = op_->apply(s);
  lin *= -1.0;
  r += lin;
  if (forcing_) r += forcing_(t);
  return r;
}

LimitState LimitStepper::step(const LimitState& s, double t, double dt) {
  const StiffOperator& L = op(s.grid(), dt);
  LimitState q = s;
  L.propagate(q);
  const LimitState q1 = q + dt * nonstiff(q, t);
  require_finite(q1.all_finite(), t + dt, "explicit stage");
  LimitState q2 = 0.5 * q + 0.5 * (q1 + dt * nonstiff(q1, t + dt));
  L.propagate(q2);
  require_finite(q2.all_finite(), t + dt, "limit step");
  return q2;
}

FullState step_full(const FullState& s, const Params& p, double t, double dt) {
  FullStepper st(p, s.n.mean());
  return st.step(s, t, dt);
}

LimitState step_limit(const LimitState& s, const Params& p, double t, double dt) {
  LimitStepper st(p, s.n0.mean());
  return st.step(s, t, dt);
}

double advective_speed(const FullState& s) { return magnitude(s.u).max(); }
double advective_speed(const LimitState& s) { return magnitude(s.u0).max(); }
double advective_speed(const PairedState& s) { return std::max(advective_speed(s.full), advective_speed(s.limit)); }

}  // namespace nsmlimit
