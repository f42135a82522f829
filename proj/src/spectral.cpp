#include "nsmlimit/spectral.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <random>
#include <stdexcept>
#include <tuple>

#include "nsmlimit/errors.hpp"

namespace nsmlimit {
namespace {

// FFTW planning is not thread-safe; execution of an existing plan on new
// arrays is. Plans are built once per (dims, points) under a lock and kept
// for the lifetime of the process. FFTW_ESTIMATE keeps the chosen algorithm,
// and therefore the rounding, identical from run to run.
struct PlanPair {
  fftw_plan r2c = nullptr;
  fftw_plan c2r = nullptr;
};

std::mutex& plan_mutex() {
  static std::mutex m;
  return m;
}

const PlanPair& plans_for(const Grid& grid) {
  static std::map<std::pair<int, int>, PlanPair> cache;
  std::lock_guard<std::mutex> lock(plan_mutex());
  auto key = std::make_pair(grid.dims, grid.points);
  auto it = cache.find(key);
  if (it != cache.end()) return it->second;

  std::vector<int> n(grid.dims, grid.points);
  const std::size_t real_size = grid.size();
  const std::size_t cplx_size = real_size / grid.points * (grid.points / 2 + 1);
  double* in = fftw_alloc_real(real_size);
  fftw_complex* out = fftw_alloc_complex(cplx_size);
  const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
  PlanPair p;
  p.r2c = fftw_plan_dft_r2c(grid.dims, n.data(), in, out, flags);
  p.c2r = fftw_plan_dft_c2r(grid.dims, n.data(), out, in, flags);
  fftw_free(in);
  fftw_free(out);
  if (p.r2c == nullptr || p.c2r == nullptr) throw std::runtime_error("FFTW planning failed");
  return cache.emplace(key, p).first->second;
}

int signed_mode(int index, int n) { return index <= n / 2 ? index : index - n; }

void require_same_grid(const Grid& a, const Grid& b) {
  if (!(a == b)) throw GridMismatch();
}

std::array<Spectrum, 3> forward3(const VectorField& v) {
  return {forward(v[0]), forward(v[1]), forward(v[2])};
}

VectorField inverse3(const std::array<Spectrum, 3>& s) {
  return VectorField(inverse(s[0]), inverse(s[1]), inverse(s[2]));
}

}  // namespace

ModeTable::ModeTable(const Grid& grid) : grid_(grid) {
  grid.validate();
  const int n = grid.points;
  const int last = grid.dims - 1;
  std::array<int, 3> ext{1, 1, 1};
  for (int a = 0; a < grid.dims; ++a) ext[a] = (a == last) ? n / 2 + 1 : n;
  modes_.reserve(static_cast<std::size_t>(ext[0]) * ext[1] * ext[2]);
  const double k0 = grid.k0();
  for (int i = 0; i < ext[0]; ++i)
    for (int j = 0; j < ext[1]; ++j)
      for (int l = 0; l < ext[2]; ++l) {
        Mode md;
        const std::array<int, 3> idx{i, j, l};
        for (int a = 0; a < 3; ++a) {
          if (!grid.active(a)) continue;
          md.m[a] = (a == last) ? idx[a] : signed_mode(idx[a], n);
          md.k[a] = k0 * md.m[a];
          md.k_odd[a] = (std::abs(md.m[a]) == n / 2) ? 0.0 : md.k[a];
          if (3 * std::abs(md.m[a]) > n) md.dealiased_out = true;
        }
        md.k2 = md.k[0] * md.k[0] + md.k[1] * md.k[1] + md.k[2] * md.k[2];
        md.weight = (idx[last] == 0 || idx[last] == n / 2) ? 1.0 : 2.0;
        modes_.push_back(md);
      }
}

std::shared_ptr<const ModeTable> ModeTable::of(const Grid& grid) {
  static std::mutex m;
  static std::map<std::tuple<int, int, double>, std::shared_ptr<const ModeTable>> cache;
  std::lock_guard<std::mutex> lock(m);
  auto key = std::make_tuple(grid.dims, grid.points, grid.period);
  auto it = cache.find(key);
  if (it != cache.end()) return it->second;
  auto table = std::make_shared<const ModeTable>(grid);
  cache.emplace(key, table);
  return table;
}

std::int64_t ModeTable::index_of(const std::array<int, 3>& m) const noexcept {
  const int n = grid_.points;
  const int last = grid_.dims - 1;
  std::int64_t idx = 0;
  for (int a = 0; a < grid_.dims; ++a) {
    const int ext = (a == last) ? n / 2 + 1 : n;
    int j = m[a];
    if (a == last) {
      if (j < 0 || j > n / 2) return -1;
    } else {
      if (j < -n / 2 || j > n / 2) return -1;
      if (j < 0) j += n;
    }
    idx = idx * ext + j;
  }
  for (int a = grid_.dims; a < 3; ++a)
    if (m[a] != 0) return -1;
  return idx;
}

Spectrum::Spectrum(const Grid& g) : grid(g), c(ModeTable::of(g)->size(), Complex(0.0, 0.0)) {}

Spectrum forward(const ScalarField& f) {
  const Grid& g = f.grid();
  Spectrum s(g);
  const PlanPair& p = plans_for(g);
  // r2c does not modify its input when planned out-of-place.
  fftw_execute_dft_r2c(p.r2c, const_cast<double*>(f.values().data()), reinterpret_cast<fftw_complex*>(s.c.data()));
  const double scale = 1.0 / static_cast<double>(g.size());
  for (auto& x : s.c) x *= scale;
  return s;
}

ScalarField inverse(const Spectrum& s) {
  ScalarField out(s.grid);
  std::vector<Complex> work = s.c;  // c2r overwrites its input
  const PlanPair& p = plans_for(s.grid);
  fftw_execute_dft_c2r(p.c2r, reinterpret_cast<fftw_complex*>(work.data()), out.values().data());
  return out;
}

ScalarField apply_multiplier(const ScalarField& f, const std::function<Complex(const Mode&)>& m) {
  Spectrum s = forward(f);
  const ModeTable& t = s.table();
  for (std::size_t i = 0; i < s.c.size(); ++i) s.c[i] *= m(t[i]);
  return inverse(s);
}

ScalarField derivative(const ScalarField& f, int axis, int order) {
  if (order < 1) throw std::invalid_argument("derivative order must be >= 1");
  std::array<int, 3> alpha{0, 0, 0};
  if (axis < 0 || axis > 2) throw std::invalid_argument("axis out of range");
  alpha[axis] = order;
  return derivative(f, alpha);
}

ScalarField derivative(const ScalarField& f, const std::array<int, 3>& alpha) {
  const Grid& g = f.grid();
  for (int a = 0; a < 3; ++a)
    if (alpha[a] < 0) throw std::invalid_argument("negative multi-index");
    else if (alpha[a] > 0 && !g.active(a)) throw std::invalid_argument("derivative along collapsed axis");
  if (alpha[0] + alpha[1] + alpha[2] == 0) return f;
  return apply_multiplier(f, [&alpha](const Mode& md) {
    Complex factor(1.0, 0.0);
    for (int a = 0; a < 3; ++a) {
      if (alpha[a] == 0) continue;
      const double k = (alpha[a] % 2 == 1) ? md.k_odd[a] : md.k[a];
      static const Complex ipow[4] = {{1.0, 0.0}, {0.0, 1.0}, {-1.0, 0.0}, {0.0, -1.0}};
      factor *= ipow[alpha[a] % 4] * std::pow(k, alpha[a]);
    }
    return factor;
  });
}

VectorField gradient(const ScalarField& f) {
  const Grid& g = f.grid();
  VectorField out(g);
  const Spectrum s = forward(f);
  const ModeTable& t = s.table();
  for (int a = 0; a < g.dims; ++a) {
    Spectrum d = s;
    for (std::size_t i = 0; i < d.c.size(); ++i) d.c[i] *= Complex(0.0, t[i].k_odd[a]);
    out[a] = inverse(d);
  }
  return out;
}

ScalarField divergence(const VectorField& v) {
  const Grid& g = v.grid();
  require_same_grid(g, v[1].grid());
  require_same_grid(g, v[2].grid());
  Spectrum acc(g);
  const ModeTable& t = acc.table();
  for (int a = 0; a < g.dims; ++a) {
    const Spectrum s = forward(v[a]);
    for (std::size_t i = 0; i < s.c.size(); ++i) acc.c[i] += Complex(0.0, t[i].k_odd[a]) * s.c[i];
  }
  return inverse(acc);
}

VectorField curl(const VectorField& v) {
  const Grid& g = v.grid();
  const auto s = forward3(v);
  std::array<Spectrum, 3> r{Spectrum(g), Spectrum(g), Spectrum(g)};
  const ModeTable& t = s[0].table();
  const Complex I(0.0, 1.0);
  for (std::size_t i = 0; i < t.size(); ++i) {
    const auto& k = t[i].k_odd;
    r[0].c[i] = I * (k[1] * s[2].c[i] - k[2] * s[1].c[i]);
    r[1].c[i] = I * (k[2] * s[0].c[i] - k[0] * s[2].c[i]);
    r[2].c[i] = I * (k[0] * s[1].c[i] - k[1] * s[0].c[i]);
  }
  return inverse3(r);
}

ScalarField laplacian(const ScalarField& f) {
  return apply_multiplier(f, [](const Mode& md) { return Complex(-md.k2, 0.0); });
}

VectorField laplacian(const VectorField& v) { return VectorField(laplacian(v[0]), laplacian(v[1]), laplacian(v[2])); }

VectorField grad_div(const VectorField& v) {
  const Grid& g = v.grid();
  const auto s = forward3(v);
  std::array<Spectrum, 3> r{Spectrum(g), Spectrum(g), Spectrum(g)};
  const ModeTable& t = s[0].table();
  for (std::size_t i = 0; i < t.size(); ++i) {
    const auto& k = t[i].k_odd;
    const Complex kv = k[0] * s[0].c[i] + k[1] * s[1].c[i] + k[2] * s[2].c[i];
    for (int a = 0; a < 3; ++a) r[a].c[i] = -k[a] * kv;
  }
  return inverse3(r);
}

double sobolev_norm(const ScalarField& f, double l) {
  if (l < 0.0) throw std::invalid_argument("sobolev index must be nonnegative");
  const Spectrum s = forward(f);
  const ModeTable& t = s.table();
  double sum = 0.0;
  for (std::size_t i = 0; i < s.c.size(); ++i)
    sum += t[i].weight * std::pow(1.0 + t[i].k2, l) * std::norm(s.c[i]);
  return std::sqrt(sum * f.grid().volume());
}

double sobolev_norm(const VectorField& v, double l) {
  double sum = 0.0;
  for (int a = 0; a < 3; ++a) {
    const double n = sobolev_norm(v[a], l);
    sum += n * n;
  }
  return std::sqrt(sum);
}

VectorField leray_project(const VectorField& v) {
  auto s = forward3(v);
  const ModeTable& t = s[0].table();
  for (std::size_t i = 0; i < t.size(); ++i) {
    const auto& k = t[i].k_odd;
    const double kk = k[0] * k[0] + k[1] * k[1] + k[2] * k[2];
    if (kk == 0.0) continue;
    const Complex kv = k[0] * s[0].c[i] + k[1] * s[1].c[i] + k[2] * s[2].c[i];
    for (int a = 0; a < 3; ++a) s[a].c[i] -= k[a] * kv / kk;
  }
  return inverse3(s);
}

ScalarField dealias(const ScalarField& f) {
  return apply_multiplier(f, [](const Mode& md) { return md.dealiased_out ? Complex(0.0) : Complex(1.0); });
}

VectorField dealias(const VectorField& v) { return VectorField(dealias(v[0]), dealias(v[1]), dealias(v[2])); }

ScalarField band_limit(const ScalarField& f, int kmax) {
  return apply_multiplier(f, [kmax](const Mode& md) {
    const int m = std::max({std::abs(md.m[0]), std::abs(md.m[1]), std::abs(md.m[2])});
    return m > kmax ? Complex(0.0) : Complex(1.0);
  });
}

VectorField band_limit(const VectorField& v, int kmax) {
  return VectorField(band_limit(v[0], kmax), band_limit(v[1], kmax), band_limit(v[2], kmax));
}

namespace {

// Uniform double in [0, 1) built from the top 53 bits; unlike
// std::uniform_real_distribution this is identical across standard libraries.
double unit(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

// Lattice half-width used when drawing coefficients. Modes beyond it have
// magnitude below e^-37 relative to the mean for any decay rate that needs them.
constexpr int kMaxLattice = 64;

}  // namespace

ScalarField random_smooth_field(std::uint64_t seed, double decay_rate, const Grid& grid) {
  if (!(decay_rate > 0.0)) throw std::invalid_argument("decay_rate must be positive");
  grid.validate();
  std::mt19937_64 rng(seed);
  Spectrum s(grid);
  const ModeTable& t = s.table();
  const int box = static_cast<int>(std::min<double>(kMaxLattice, std::ceil(37.0 / decay_rate)));
  const int last = grid.dims - 1;
  const double k0 = grid.k0();

  s.c[0] = Complex(2.0 * unit(rng) - 1.0, 0.0);
  std::array<int, 3> lo{0, 0, 0}, hi{0, 0, 0};
  for (int a = 0; a < grid.dims; ++a) {
    lo[a] = -box;
    hi[a] = box;
  }
  std::array<int, 3> m{};
  for (m[0] = lo[0]; m[0] <= hi[0]; ++m[0])
    for (m[1] = lo[1]; m[1] <= hi[1]; ++m[1])
      for (m[2] = lo[2]; m[2] <= hi[2]; ++m[2]) {
        // canonical representative of ±m: first nonzero component positive
        int first = 0;
        for (int a = 0; a < 3 && first == 0; ++a) first = m[a];
        if (first <= 0) continue;
        const double radius = 0.5 + 0.5 * unit(rng);
        const double phase = 2.0 * 3.141592653589793 * unit(rng);
        const double kabs = k0 * std::sqrt(double(m[0]) * m[0] + double(m[1]) * m[1] + double(m[2]) * m[2]);
        bool fits = true;
        for (int a = 0; a < grid.dims; ++a) fits = fits && 2 * std::abs(m[a]) < grid.points;
        if (!fits) continue;
        const Complex c = std::polar(radius * std::exp(-decay_rate * kabs), phase);
        const std::array<int, 3> neg{-m[0], -m[1], -m[2]};
        if (m[last] > 0) {
          s.c[t.index_of(m)] = c;
        } else if (m[last] < 0) {
          s.c[t.index_of(neg)] = std::conj(c);
        } else {
          s.c[t.index_of(m)] = c;
          s.c[t.index_of(neg)] = std::conj(c);
        }
      }
  return inverse(s);
}

VectorField random_smooth_vector(std::uint64_t seed, double decay_rate, const Grid& grid) {
  // Decorrelated per-component seeds.
  std::seed_seq seq{seed, std::uint64_t{0x9e3779b97f4a7c15ULL}};
  std::array<std::uint64_t, 3> seeds{};
  std::mt19937_64 mix(seq);
  for (auto& s : seeds) s = mix();
  return VectorField(random_smooth_field(seeds[0], decay_rate, grid), random_smooth_field(seeds[1], decay_rate, grid),
                     random_smooth_field(seeds[2], decay_rate, grid));
}

}  // namespace nsmlimit
