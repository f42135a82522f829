#include "nsmlimit/initdata.hpp"

#include <array>
#include <cmath>
#include <random>
#include <stdexcept>

#include "nsmlimit/errors.hpp"
#include "nsmlimit/spectral.hpp"

namespace nsmlimit {
namespace {

constexpr double kDecay = 0.5;

std::array<std::uint64_t, 5> derive_seeds(std::uint64_t seed) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32), 0x5eedu};
  std::array<std::uint32_t, 10> raw{};
  seq.generate(raw.begin(), raw.end());
  std::array<std::uint64_t, 5> out{};
  for (int i = 0; i < 5; ++i) out[i] = (std::uint64_t{raw[2 * i]} << 32) | raw[2 * i + 1];
  return out;
}

ScalarField smooth_scalar(std::uint64_t seed, const Grid& g) {
  return band_limit(random_smooth_field(seed, kDecay, g), kPerturbationBand);
}

VectorField smooth_vector(std::uint64_t seed, const Grid& g) {
  return band_limit(random_smooth_vector(seed, kDecay, g), kPerturbationBand);
}

template <class F>
F unit(F f, double l) {
  const double norm = sobolev_norm(f, l);
  if (norm > 0.0) f *= 1.0 / norm;
  return f;
}

}  // namespace

LimitState make_limit_data(std::uint64_t seed, double amplitude, const Grid& grid, double velocity_scale) {
  if (!(amplitude < 1.0) || amplitude < 0.0) throw std::invalid_argument("vacuum risk");
  const auto seeds = derive_seeds(seed);
  ScalarField phi = smooth_scalar(seeds[0], grid);
  phi -= ScalarField(grid, phi.mean());
  const double peak = phi.max_abs();
  LimitState s;
  s.n0 = ScalarField(grid, 1.0);
  if (amplitude > 0.0 && peak > 0.0) s.n0 += (amplitude / peak) * phi;

  VectorField v = smooth_vector(seeds[1], grid);
  const double vpeak = v.max_abs();
  s.u0 = vpeak > 0.0 ? (velocity_scale / vpeak) * v : VectorField(grid);
  return s;
}

FullState make_well_prepared(const WellPreparedSpec& spec) {
  const Grid& g = spec.base.grid();
  const auto seeds = derive_seeds(spec.seed ^ 0xd1b54a32d192ed03ull);
  const int active = spec.perturb_n + spec.perturb_u + spec.perturb_j + spec.perturb_E + spec.perturb_B;
  const double size = active == 0 ? 0.0 : spec.C0 / std::sqrt(static_cast<double>(active));
  const double scale = spec.ill_prepared ? size : size * spec.kappa;

  FullState s;
  s.n = spec.base.n0;
  s.u = spec.base.u0;
  s.J = VectorField(g);
  s.E = VectorField(g);
  s.B = VectorField(g);
  if (spec.perturb_n) s.n += scale * unit(smooth_scalar(seeds[0], g), spec.l);
  if (spec.perturb_u) s.u += scale * unit(smooth_vector(seeds[1], g), spec.l);
  if (spec.perturb_j) s.J = scale * unit(leray_project(smooth_vector(seeds[2], g)), spec.l);
  if (spec.perturb_E) s.E = scale * unit(leray_project(smooth_vector(seeds[3], g)), spec.l);
  if (spec.perturb_B) s.B = scale * unit(leray_project(smooth_vector(seeds[4], g)), spec.l);
  if (!(s.n.min() > 0.0)) throw VacuumError();
  return s;
}

double hypothesis_norm(const FullState& s, const LimitState& base, double l) {
  const auto sq = [](double v) { return v * v; };
  return std::sqrt(sq(sobolev_norm(s.n - base.n0, l)) + sq(sobolev_norm(s.u - base.u0, l)) +
                   sq(sobolev_norm(s.J, l)) + sq(sobolev_norm(s.E, l)) + sq(sobolev_norm(s.B, l)));
}

TwoFluidState make_twofluid_sample(std::uint64_t seed, const Grid& grid, double kappa) {
  const auto seeds = derive_seeds(seed ^ 0x2545f4914f6cdd1dull);
  const LimitState base = make_limit_data(seeds[0], 0.2, grid, 0.5);
  const VectorField j = 0.5 * unit(leray_project(smooth_vector(seeds[1], grid)), 0.0);

  TwoFluidState s;
  s.n = base.n0;
  s.ui = base.u0;
  s.ue = s.ui - kappa * (j / s.n);
  s.E = 0.5 * unit(leray_project(smooth_vector(seeds[2], grid)), 0.0);
  s.B = 0.5 * unit(leray_project(smooth_vector(seeds[3], grid)), 0.0);
  return s;
}

}  // namespace nsmlimit
