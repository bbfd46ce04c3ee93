#include "randcrit/montecarlo.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

#include "randcrit/io.hpp"
#include "randcrit/parallel.hpp"
#include "randcrit/rng.hpp"

namespace randcrit {

namespace {
constexpr std::size_t kSampleChunk = 256;

struct Tally {
  std::vector<std::int64_t> counts;
  std::vector<std::int64_t> sumsq;
  std::int64_t overflow = 0;
  double worst_residual = 0.0;
};
}  // namespace

EmpiricalDensity empirical_zero_density(const EnsembleSpec& e,
                                        std::int64_t n_samples,
                                        const GridSpec& grid,
                                        std::uint64_t seed, int threads) {
  if (n_samples < 1) {
    throw Error(ErrorCode::InvalidConfig, "n_samples must be >= 1");
  }
  const std::size_t cells = static_cast<std::size_t>(grid.nx) * grid.ny;
  const std::size_t n = static_cast<std::size_t>(n_samples);
  std::vector<Tally> partial(chunk_count(n, kSampleChunk));
  for_each_chunk(n, kSampleChunk, threads, [&](std::size_t c, std::size_t begin, std::size_t end) {
    Tally t{std::vector<std::int64_t>(cells, 0), std::vector<std::int64_t>(cells, 0), 0, 0.0};
    std::vector<int> hit;
    for (std::size_t s = begin; s < end; ++s) {
      const auto section = sample_section(e, seed, s);
      const RootSet rs = find_roots(section.coefficients);
      t.worst_residual = std::max(t.worst_residual,
                                  rs.max_residual() / residual_bound(section.coefficients));
      hit.clear();
      // roots dropped with a trimmed leading coefficient sit far outside any grid
      t.overflow += e.degree - static_cast<std::int64_t>(rs.roots.size());
      for (cplx r : rs.roots) {
        const int cell = grid.cell_of(r);
        if (cell < 0) ++t.overflow;
        else hit.push_back(cell);
      }
      std::sort(hit.begin(), hit.end());
      for (std::size_t i = 0; i < hit.size();) {
        std::size_t j = i;
        while (j < hit.size() && hit[j] == hit[i]) ++j;
        const std::int64_t k = static_cast<std::int64_t>(j - i);
        t.counts[hit[i]] += k;
        t.sumsq[hit[i]] += k * k;
        i = j;
      }
    }
    partial[c] = std::move(t);
  });

  EmpiricalDensity out;
  out.grid = grid;
  out.n_samples = n_samples;
  out.degree = e.degree;
  out.counts.assign(cells, 0);
  std::vector<std::int64_t> sumsq(cells, 0);
  for (const Tally& t : partial) {
    for (std::size_t i = 0; i < cells; ++i) {
      out.counts[i] += t.counts[i];
      sumsq[i] += t.sumsq[i];
    }
    out.overflow += t.overflow;
    out.max_residual_ratio = std::max(out.max_residual_ratio, t.worst_residual);
  }
  const double area = grid.cell_area();
  const double ns = static_cast<double>(n_samples);
  out.density.resize(cells);
  out.stderr_.resize(cells);
  for (std::size_t i = 0; i < cells; ++i) {
    const double mean = out.counts[i] / ns;
    out.density[i] = mean / area;
    double var = 0.0;
    if (n_samples > 1) {
      var = (static_cast<double>(sumsq[i]) - ns * mean * mean) / (ns - 1.0);
    }
    out.stderr_[i] = std::sqrt(std::max(var, 0.0) / ns) / area;
  }
  return out;
}

void write_csv(std::ostream& out, const EmpiricalDensity& d) {
  out << "x,y,count,density,stderr\n";
  for (int iy = 0; iy < d.grid.ny; ++iy) {
    for (int ix = 0; ix < d.grid.nx; ++ix) {
      const std::size_t i = static_cast<std::size_t>(iy) * d.grid.nx + ix;
      out << format_number(d.grid.x_center(ix)) << ','
          << format_number(d.grid.y_center(iy)) << ',' << d.counts[i] << ','
          << format_number(d.density[i]) << ',' << format_number(d.stderr_[i])
          << '\n';
    }
  }
}

std::vector<double> sample_real_polynomial(int degree, std::uint64_t seed,
                                           std::uint64_t index) {
  CounterRng rng(seed, Stream::RealPolynomial, index);
  std::vector<double> c(degree + 1);
  for (double& v : c) v = rng.normal();
  return c;
}

int count_real_roots(const RootSet& roots, double imag_tolerance) {
  int n = 0;
  for (cplx r : roots.roots) {
    if (std::abs(r.imag()) <= imag_tolerance * (1.0 + std::abs(r))) ++n;
  }
  return n;
}

RealZeroEstimate empirical_real_zero_count(int degree, std::int64_t n_samples,
                                           std::uint64_t seed,
                                           const RealZeroOptions& opts) {
  if (degree < 1) throw Error(ErrorCode::InvalidDegree, "degree must be >= 1");
  if (n_samples < 2) throw Error(ErrorCode::InvalidConfig, "n_samples must be >= 2");
  const std::size_t n = static_cast<std::size_t>(n_samples);
  struct Sums { std::int64_t s = 0, s2 = 0; };
  std::vector<Sums> partial(chunk_count(n, kSampleChunk));
  for_each_chunk(n, kSampleChunk, opts.threads, [&](std::size_t c, std::size_t begin, std::size_t end) {
    Sums acc;
    std::vector<cplx> coeffs(degree + 1);
    for (std::size_t s = begin; s < end; ++s) {
      const auto real = sample_real_polynomial(degree, seed, s);
      for (int i = 0; i <= degree; ++i) coeffs[i] = opts.coefficient_scale * real[i];
      const std::int64_t k = count_real_roots(find_roots(coeffs), opts.imag_tolerance);
      acc.s += k;
      acc.s2 += k * k;
    }
    partial[c] = acc;
  });
  Sums total;
  for (const Sums& p : partial) {
    total.s += p.s;
    total.s2 += p.s2;
  }
  const double ns = static_cast<double>(n_samples);
  const double mean = total.s / ns;
  const double var = (static_cast<double>(total.s2) - ns * mean * mean) / (ns - 1.0);
  return {mean, std::sqrt(std::max(var, 0.0) / ns), n_samples};
}

}  // namespace randcrit
