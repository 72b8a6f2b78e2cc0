#include "gowers/generate.hpp"

#include <cmath>
#include <numeric>

#include "gowers/engine.hpp"
#include "gowers/error.hpp"

namespace gowers {

namespace {

using i128 = __int128;

std::int64_t ipow(std::int64_t b, int e) {
  std::int64_t r = 1;
  for (int i = 0; i < e; ++i) r *= b;
  return r;
}

i128 binom_exact(std::int64_t n, int k) {
  i128 r = 1;
  for (int j = 0; j < k; ++j) r = r * (n - j) / (j + 1);
  return r;
}

// Numerators over n^d of the binomial coefficients of a random polynomial that
// is well defined on Z/n (same parametrisation as the separation scan).
std::vector<std::int64_t> random_cyclic_numerators(std::int64_t n, int d, std::int64_t D, CounterRng& rng) {
  std::vector<std::int64_t> num(d + 1, 0);
  for (int i = d; i >= 1; --i) {
    i128 s = static_cast<i128>(rng.below(static_cast<std::uint64_t>(n))) * D;
    for (int l = 2; i - 1 + l <= d; ++l) s -= binom_exact(n, l) * num[i - 1 + l];
    s /= n;
    num[i] = static_cast<std::int64_t>(((s % D) + D) % D);
  }
  return num;
}

}  // namespace

PolyPhase random_poly_phase(const DomainSpec& dom, int degree, CounterRng& rng) {
  if (degree < 0) usage_fail("random_poly_phase: degree must be >= 0");
  const std::size_t card = dom.cardinality();
  const double c0 = rng.uniform();
  if (dom.is_interval()) {
    std::vector<double> c(degree + 1);
    c[0] = c0;
    for (int i = 1; i <= degree; ++i) c[i] = rng.uniform();
    return phase_from_coeffs(dom, c);
  }
  if (!dom.is_group()) usage_fail("random_poly_phase: grids carry no polynomial maps");
  const auto& shape = dom.shape();
  std::vector<double> table(card, c0);
  // univariate parts, one per axis, evaluated exactly over n^d
  for (std::size_t ax = 0; ax < shape.size(); ++ax) {
    const auto n = static_cast<std::int64_t>(shape[ax]);
    if (n == 1 || degree == 0) continue;
    const int d = degree;
    if (std::pow(static_cast<double>(n), d) > 4e18) usage_fail("random_poly_phase: n^d overflows");
    const std::int64_t D = ipow(n, d);
    const auto num = random_cyclic_numerators(n, d, D, rng);
    for (std::size_t x = 0; x < card; ++x) {
      const std::int64_t xi = static_cast<std::int64_t>(dom.coords(x)[ax]);
      i128 s = 0;
      for (int i = 1; i <= d; ++i) s = (s + (binom_exact(xi, i) % D) * num[i]) % D;
      table[x] += static_cast<double>(s) / static_cast<double>(D);
    }
  }
  // multilinear cross terms t x_i x_j / gcd, well defined on the product
  if (degree >= 2 && shape.size() >= 2) {
    for (std::size_t i = 0; i < shape.size(); ++i)
      for (std::size_t j = i + 1; j < shape.size(); ++j) {
        const std::size_t g = std::gcd(shape[i], shape[j]);
        const std::size_t t = rng.below(g);
        for (std::size_t x = 0; x < card; ++x) {
          const auto c = dom.coords(x);
          table[x] += static_cast<double>((t * c[i] % g) * c[j] % g) / static_cast<double>(g);
        }
      }
  }
  if (degree >= 3 && shape.size() >= 3) {
    for (std::size_t i = 0; i < shape.size(); ++i)
      for (std::size_t j = i + 1; j < shape.size(); ++j)
        for (std::size_t l = j + 1; l < shape.size(); ++l) {
          const std::size_t g = std::gcd(std::gcd(shape[i], shape[j]), shape[l]);
          const std::size_t t = rng.below(g);
          for (std::size_t x = 0; x < card; ++x) {
            const auto c = dom.coords(x);
            table[x] += static_cast<double>(((t * c[i] % g) * c[j] % g) * c[l] % g) / static_cast<double>(g);
          }
        }
  }
  for (auto& v : table) v = wrap01(v);
  PolyPhase p{dom, degree, std::move(table), std::nullopt};
  if (dom.is_cyclic()) {
    // coefficients by forward differences
    std::vector<double> diff(p.table), c(degree + 1, 0.0);
    for (int i = 0; i <= degree && !diff.empty(); ++i) {
      c[i] = wrap01(diff[0]);
      for (std::size_t x = 0; x + 1 < diff.size(); ++x) diff[x] = wrap_half(diff[x + 1] - diff[x]);
      diff.pop_back();
    }
    p.coeffs = std::move(c);
  }
  return p;
}

std::vector<double> smooth_noise(const DomainSpec& d, CounterRng& rng) {
  const std::size_t n = d.cardinality();
  const auto& shape = d.shape();
  std::vector<double> g(n, 0.0);
  double wsum = 0;
  for (int term = 0; term < 3; ++term) {
    const double a = rng.uniform() + 0.1, ph = rng.uniform();
    std::vector<double> freq(shape.size());
    for (std::size_t i = 0; i < shape.size(); ++i) freq[i] = static_cast<double>(rng.below(3)) / static_cast<double>(shape[i]);
    for (std::size_t x = 0; x < n; ++x) {
      const auto c = d.coords(x);
      double t = ph;
      for (std::size_t i = 0; i < c.size(); ++i) t += freq[i] * static_cast<double>(c[i]);
      g[x] += a * std::cos(kTwoPi * t);
    }
    wsum += a;
  }
  for (auto& v : g) v /= wsum;
  return g;
}

const std::vector<std::string>& generator_kinds() {
  static const std::vector<std::string> k{"constant",        "character",       "poly-phase",     "coset-phase",
                                          "gaussian-grid",   "random-unimodular", "random-gaussian", "random-bounded",
                                          "noisy-poly-phase", "magnitude-noise", "random-grid"};
  return k;
}

Signal generate(const std::string& kind, const GenParams& p, std::uint64_t seed) {
  CounterRng rng(seed, 0x6e6e);
  const DomainSpec& d = p.domain;
  const std::size_t n = d.cardinality();
  std::vector<cplx> v(n);

  if (kind == "constant") return Signal::constant(d, 1.0);
  if (kind == "character") {
    if (!d.is_group()) usage_fail("character needs a finite abelian group");
    const auto& shape = d.shape();
    const auto xi = d.coords(p.frequency % n);
    for (std::size_t x = 0; x < n; ++x) {
      const auto c = d.coords(x);
      double t = 0;
      for (std::size_t i = 0; i < shape.size(); ++i)
        t += static_cast<double>((xi[i] * c[i]) % shape[i]) / static_cast<double>(shape[i]);
      v[x] = expi(t);
    }
    return Signal(d, std::move(v));
  }
  if (kind == "poly-phase") return phase_signal(random_poly_phase(d, p.degree, rng));
  if (kind == "noisy-poly-phase" || kind == "magnitude-noise") {
    const Signal base = phase_signal(random_poly_phase(d, p.degree, rng));
    if (kind == "noisy-poly-phase") {
      const auto g = smooth_noise(d, rng);
      for (std::size_t x = 0; x < n; ++x) v[x] = base.values[x] * std::polar(1.0, p.noise * g[x]);
    } else {
      for (std::size_t x = 0; x < n; ++x) v[x] = base.values[x] * (1.0 - p.noise * rng.uniform());
    }
    return Signal(d, std::move(v));
  }
  if (kind == "coset-phase") {
    if (!d.is_group()) usage_fail("coset-phase needs a finite abelian group");
    const std::size_t gen = p.generator ? *p.generator % n : rng.below(n);
    std::vector<std::size_t> members{0};
    for (std::size_t y = d.add(0, gen); y != 0; y = d.add(y, gen)) members.push_back(y);
    const std::size_t m = members.size();
    CounterRng prng = rng.split(1);
    const PolyPhase P = random_poly_phase(DomainSpec::cyclic(m), p.degree, prng);
    const double pk = critical_exponent(p.k).value();
    const double height = std::pow(static_cast<double>(m) / static_cast<double>(n), -1.0 / pk);
    std::fill(v.begin(), v.end(), cplx(0.0));
    for (std::size_t j = 0; j < m; ++j) v[d.add(p.offset % n, members[j])] = height * expi(P.table[j]);
    return Signal(d, std::move(v));
  }
  if (kind == "gaussian-grid") {
    const auto& g = d.grid_params();
    const double h = 2 * g.extent / static_cast<double>(g.points);
    for (std::size_t x = 0; x < n; ++x) {
      const auto c = d.coords(x);
      double r2 = 0, lin = 0;
      for (auto ci : c) {
        const double t = -g.extent + h * static_cast<double>(ci);
        r2 += t * t;
        lin += t;
      }
      v[x] = std::exp(-M_PI * r2 / (p.sigma * p.sigma)) * expi(p.modulation * lin + p.chirp * r2);
    }
    return Signal(d, std::move(v));
  }
  if (kind == "random-unimodular") {
    for (auto& z : v) z = expi(rng.uniform());
    return Signal(d, std::move(v));
  }
  if (kind == "random-gaussian") {
    for (auto& z : v) {
      const double re = rng.normal(), im = rng.normal();
      z = cplx(re, im) / std::sqrt(2.0);
    }
    return Signal(d, std::move(v));
  }
  if (kind == "random-bounded") {
    for (auto& z : v) z = std::polar(std::sqrt(rng.uniform()), kTwoPi * rng.uniform());
    return Signal(d, std::move(v));
  }
  if (kind == "random-grid") {
    // A few resolved Gaussian bumps well inside the box.
    const auto& g = d.grid_params();
    const double h = 2 * g.extent / static_cast<double>(g.points);
    const int bumps = 1 + static_cast<int>(rng.below(4));
    std::fill(v.begin(), v.end(), cplx(0.0));
    for (int b = 0; b < bumps; ++b) {
      std::vector<double> centre(g.dim);
      for (auto& c : centre) c = (rng.uniform() - 0.5) * 0.5 * g.extent;
      const double width = 0.4 + 1.1 * rng.uniform();
      const double freq = (rng.uniform() - 0.5) * 2.0;
      const cplx amp = std::polar(0.2 + rng.uniform(), kTwoPi * rng.uniform());
      for (std::size_t x = 0; x < n; ++x) {
        const auto c = d.coords(x);
        double r2 = 0, lin = 0;
        for (std::size_t i = 0; i < c.size(); ++i) {
          const double t = -g.extent + h * static_cast<double>(c[i]) - centre[i];
          r2 += t * t;
          lin += t;
        }
        v[x] += amp * std::exp(-M_PI * r2 / (width * width)) * expi(freq * lin);
      }
    }
    return Signal(d, std::move(v));
  }
  usage_fail("unknown generator kind '" + kind + "'");
}

}  // namespace gowers
