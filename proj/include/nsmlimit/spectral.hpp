#pragma once

#include <array>
#include <complex>
#include <cstdint>
#include <functional>
#include <memory>
#include <vector>

#include "nsmlimit/field.hpp"

namespace nsmlimit {

using Complex = std::complex<double>;

/// Wavevector data for one entry of the half-complex spectrum.
struct Mode {
  std::array<int, 3> m{};        ///< integer mode numbers (signed)
  std::array<double, 3> k{};     ///< physical wavevector 2π m / period
  std::array<double, 3> k_odd{}; ///< wavevector used by odd-order operators (Nyquist components zeroed)
  double k2 = 0.0;               ///< |k|²
  double weight = 1.0;           ///< Parseval multiplicity of this half-spectrum entry (1 or 2)
  bool dealiased_out = false;    ///< some |m_i| exceeds two thirds of the Nyquist number
};

/// Per-grid table of the half-complex (real-to-complex) spectrum layout.
/// The last active axis is halved to points/2 + 1 entries.
class ModeTable {
 public:
  explicit ModeTable(const Grid& grid);
  /// Shared, lazily-built table for `grid`. Thread-safe.
  static std::shared_ptr<const ModeTable> of(const Grid& grid);

  const Grid& grid() const noexcept { return grid_; }
  std::size_t size() const noexcept { return modes_.size(); }
  const Mode& operator[](std::size_t i) const noexcept { return modes_[i]; }
  const std::vector<Mode>& modes() const noexcept { return modes_; }
  /// Index of the entry holding integer mode `m`, or -1 when `m` lives in
  /// the omitted conjugate half or outside the grid.
  std::int64_t index_of(const std::array<int, 3>& m) const noexcept;

 private:
  Grid grid_;
  std::vector<Mode> modes_;
};

/// Normalized Fourier coefficients c_k with f(x) = Σ c_k e^{i k·x}, stored
/// in half-complex layout (see ModeTable).
struct Spectrum {
  Grid grid{};
  std::vector<Complex> c;

  Spectrum() = default;
  explicit Spectrum(const Grid& g);
  const ModeTable& table() const { return *ModeTable::of(grid); }
};

Spectrum forward(const ScalarField& f);
ScalarField inverse(const Spectrum& s);

/// Multiplies each coefficient by m(mode) and transforms back.
ScalarField apply_multiplier(const ScalarField& f, const std::function<Complex(const Mode&)>& m);

// -- differential operators (exact on the trigonometric interpolant) ----------

/// ∂^order f / ∂x_axis^order. Throws std::invalid_argument for a collapsed axis.
ScalarField derivative(const ScalarField& f, int axis, int order = 1);
/// Mixed derivative ∂^α f for a multi-index α.
ScalarField derivative(const ScalarField& f, const std::array<int, 3>& alpha);
VectorField gradient(const ScalarField& f);
ScalarField divergence(const VectorField& v);
VectorField curl(const VectorField& v);
ScalarField laplacian(const ScalarField& f);
VectorField laplacian(const VectorField& v);
/// ∇(div v).
VectorField grad_div(const VectorField& v);

/// (Σ_k (1+|k|²)^l |c_k|² V)^{1/2}; l = 0 is the L² norm.
double sobolev_norm(const ScalarField& f, double l);
double sobolev_norm(const VectorField& v, double l);

/// Orthogonal projection onto divergence-free fields: v̂ − k(k·v̂)/|k|².
VectorField leray_project(const VectorField& v);

/// Two-thirds rule: zero every mode with some |m_i| > (2/3)·(points/2).
ScalarField dealias(const ScalarField& f);
VectorField dealias(const VectorField& v);

/// Keep only modes with max_i |m_i| <= kmax.
ScalarField band_limit(const ScalarField& f, int kmax);
VectorField band_limit(const VectorField& v, int kmax);

/// Smooth random real field with |c_k| <= exp(-decay_rate·|k|). Coefficients
/// are drawn on a resolution-independent lattice, so the same seed yields the
/// same trigonometric polynomial on any grid that resolves it.
ScalarField random_smooth_field(std::uint64_t seed, double decay_rate, const Grid& grid);
VectorField random_smooth_vector(std::uint64_t seed, double decay_rate, const Grid& grid);

}  // namespace nsmlimit
