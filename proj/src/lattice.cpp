#include "cpl/lattice.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace cpl {

LatticeDistribution::LatticeDistribution(Point origin,
                                         std::vector<double> spacing,
                                         std::vector<std::size_t> extents,
                                         std::vector<double> masses)
    : origin_(std::move(origin)),
      spacing_(std::move(spacing)),
      extents_(std::move(extents)),
      masses_(std::move(masses)) {
  const std::size_t d = spacing_.size();
  if (d == 0 || d > 2) throw invalid_input("lattice dimension must be 1 or 2");
  if (origin_.size() != d || extents_.size() != d)
    throw invalid_input("lattice field sizes inconsistent");
  std::size_t cells = 1;
  for (std::size_t e : extents_) {
    if (e == 0) throw invalid_input("lattice extent must be positive");
    cells *= e;
  }
  for (double h : spacing_)
    if (!(h > 0.0)) throw invalid_input("lattice spacing must be positive");
  if (masses_.size() != cells) throw invalid_input("mass array size mismatch");
  double sum = 0.0;
  for (double m : masses_) {
    if (m < 0.0) throw invalid_input("negative lattice mass");
    sum += m;
  }
  if (std::abs(sum - 1.0) > 1e-6) throw invalid_input("masses do not sum to 1");
  for (double& m : masses_) m /= sum;
}

LatticeDistribution to_lattice(const DiscreteDistribution& f,
                               const std::vector<double>& spacing) {
  const std::size_t d = static_cast<std::size_t>(f.dim());
  if (spacing.size() != d) throw invalid_input("spacing dimension mismatch");
  std::vector<long long> lo(d), hi(d);
  std::vector<std::vector<long long>> cells(f.size(), std::vector<long long>(d));
  for (std::size_t ai = 0; ai < f.size(); ++ai) {
    const auto& a = f.atoms()[ai];
    for (std::size_t i = 0; i < d; ++i) {
      double q = a.x[i] / spacing[i];
      long long idx = std::llround(q);
      if (std::abs(q - static_cast<double>(idx)) > 1e-6)
        throw invalid_input("atom off the requested lattice");
      cells[ai][i] = idx;
      if (ai == 0 || idx < lo[i]) lo[i] = idx;
      if (ai == 0 || idx > hi[i]) hi[i] = idx;
    }
  }
  std::vector<std::size_t> extents(d);
  std::size_t total = 1;
  for (std::size_t i = 0; i < d; ++i) {
    extents[i] = static_cast<std::size_t>(hi[i] - lo[i]) + 1;
    total *= extents[i];
  }
  std::vector<double> masses(total, 0.0);
  for (std::size_t ai = 0; ai < f.size(); ++ai) {
    std::size_t flat = 0;
    for (std::size_t i = 0; i < d; ++i)
      flat = flat * extents[i] + static_cast<std::size_t>(cells[ai][i] - lo[i]);
    masses[flat] += f.atoms()[ai].mass;
  }
  Point origin(d);
  for (std::size_t i = 0; i < d; ++i)
    origin[i] = static_cast<double>(lo[i]) * spacing[i];
  return LatticeDistribution(std::move(origin), spacing, std::move(extents),
                             std::move(masses));
}

DiscreteDistribution to_sparse(const LatticeDistribution& f, double drop_below) {
  const std::size_t d = static_cast<std::size_t>(f.dim());
  std::vector<Atom> atoms;
  const auto& ext = f.extents();
  for (std::size_t flat = 0; flat < f.masses().size(); ++flat) {
    double m = f.masses()[flat];
    if (m <= drop_below || m == 0.0) continue;
    Point x(d);
    std::size_t rem = flat;
    for (std::size_t i = d; i-- > 0;) {
      x[i] = f.origin()[i] +
             static_cast<double>(rem % ext[i]) * f.spacing()[i];
      rem /= ext[i];
    }
    atoms.push_back({std::move(x), m});
  }
  return DiscreteDistribution(static_cast<int>(d), std::move(atoms));
}

void fft(std::vector<std::complex<double>>& a, bool inverse) {
  const std::size_t n = a.size();
  if (n == 0 || (n & (n - 1)) != 0)
    throw invalid_input("fft size must be a power of two");
  for (std::size_t i = 1, j = 0; i < n; ++i) {
    std::size_t bit = n >> 1;
    for (; j & bit; bit >>= 1) j ^= bit;
    j ^= bit;
    if (i < j) std::swap(a[i], a[j]);
  }
  for (std::size_t len = 2; len <= n; len <<= 1) {
    double ang = 2.0 * std::numbers::pi / static_cast<double>(len) *
                 (inverse ? -1.0 : 1.0);
    std::complex<double> wl(std::cos(ang), std::sin(ang));
    for (std::size_t i = 0; i < n; i += len) {
      std::complex<double> w = 1.0;
      for (std::size_t k = 0; k < len / 2; ++k) {
        std::complex<double> u = a[i + k];
        std::complex<double> v = a[i + k + len / 2] * w;
        a[i + k] = u + v;
        a[i + k + len / 2] = u - v;
        w *= wl;
      }
    }
  }
  if (inverse)
    for (auto& z : a) z /= static_cast<double>(n);
}

namespace {

std::size_t next_pow2(std::size_t n) {
  std::size_t p = 1;
  while (p < n) p <<= 1;
  return p;
}

// 2-D FFT over a row-major array of size rows x cols (both powers of two).
void fft2(std::vector<std::complex<double>>& a, std::size_t rows,
          std::size_t cols, bool inverse) {
  std::vector<std::complex<double>> buf;
  for (std::size_t r = 0; r < rows; ++r) {
    buf.assign(a.begin() + static_cast<long>(r * cols),
               a.begin() + static_cast<long>((r + 1) * cols));
    fft(buf, inverse);
    std::copy(buf.begin(), buf.end(), a.begin() + static_cast<long>(r * cols));
  }
  buf.resize(rows);
  for (std::size_t c = 0; c < cols; ++c) {
    for (std::size_t r = 0; r < rows; ++r) buf[r] = a[r * cols + c];
    fft(buf, inverse);
    for (std::size_t r = 0; r < rows; ++r) a[r * cols + c] = buf[r];
  }
}

}  // namespace

LatticeDistribution convolve_lattice(const LatticeDistribution& f,
                                     const LatticeDistribution& g) {
  if (f.dim() != g.dim()) throw invalid_input("dimension mismatch");
  const std::size_t d = static_cast<std::size_t>(f.dim());
  for (std::size_t i = 0; i < d; ++i)
    if (std::abs(f.spacing()[i] - g.spacing()[i]) > 1e-12)
      throw invalid_input("lattice spacing mismatch");

  std::vector<std::size_t> out_ext(d), pad(d);
  for (std::size_t i = 0; i < d; ++i) {
    out_ext[i] = f.extents()[i] + g.extents()[i] - 1;
    pad[i] = next_pow2(out_ext[i]);
  }

  auto embed = [&](const LatticeDistribution& src) {
    std::size_t cells = 1;
    for (std::size_t p : pad) cells *= p;
    std::vector<std::complex<double>> arr(cells, 0.0);
    const auto& ext = src.extents();
    if (d == 1) {
      for (std::size_t i = 0; i < ext[0]; ++i) arr[i] = src.masses()[i];
    } else {
      for (std::size_t r = 0; r < ext[0]; ++r)
        for (std::size_t c = 0; c < ext[1]; ++c)
          arr[r * pad[1] + c] = src.masses()[r * ext[1] + c];
    }
    return arr;
  };

  auto fa = embed(f);
  auto fb = embed(g);
  if (d == 1) {
    fft(fa, false);
    fft(fb, false);
    for (std::size_t i = 0; i < fa.size(); ++i) fa[i] *= fb[i];
    fft(fa, true);
  } else {
    fft2(fa, pad[0], pad[1], false);
    fft2(fb, pad[0], pad[1], false);
    for (std::size_t i = 0; i < fa.size(); ++i) fa[i] *= fb[i];
    fft2(fa, pad[0], pad[1], true);
  }

  std::size_t out_cells = 1;
  for (std::size_t e : out_ext) out_cells *= e;
  std::vector<double> masses(out_cells);
  if (d == 1) {
    for (std::size_t i = 0; i < out_ext[0]; ++i)
      masses[i] = std::max(0.0, fa[i].real());
  } else {
    for (std::size_t r = 0; r < out_ext[0]; ++r)
      for (std::size_t c = 0; c < out_ext[1]; ++c)
        masses[r * out_ext[1] + c] =
            std::max(0.0, fa[r * pad[1] + c].real());
  }
  Point origin(d);
  for (std::size_t i = 0; i < d; ++i) origin[i] = f.origin()[i] + g.origin()[i];
  return LatticeDistribution(std::move(origin), f.spacing(), std::move(out_ext),
                             std::move(masses));
}

}  // namespace cpl
