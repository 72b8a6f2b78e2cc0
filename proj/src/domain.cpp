#include "gowers/domain.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

#include "gowers/error.hpp"
#include "gowers/fft.hpp"
#include "internal.hpp"

namespace gowers {

cplx expi(double x) {
  // Reduce first so large arguments keep full relative accuracy.
  const double r = x - std::floor(x);
  return {std::cos(kTwoPi * r), std::sin(kTwoPi * r)};
}

double wrap01(double x) {
  double r = x - std::floor(x);
  if (r >= 1.0) r = 0.0;
  return r;
}

double wrap_half(double x) {
  double r = x - std::floor(x);  // [0, 1)
  if (r > 0.5) r -= 1.0;
  if (r <= -0.5) r += 1.0;
  return r;
}

long double binomial(long double n, int i) {
  long double r = 1.0L;
  for (int j = 0; j < i; ++j) r = r * (n - j) / (j + 1);
  return r;
}

// --- DomainSpec -------------------------------------------------------------

DomainSpec::DomainSpec(Variant v) : v_(std::move(v)) {
  if (auto* g = std::get_if<FiniteAbelian>(&v_)) {
    require(!g->moduli.empty(), "FiniteAbelian needs at least one modulus");
    shape_ = g->moduli;
    card_ = 1;
    for (auto n : shape_) {
      require(n >= 1, "FiniteAbelian moduli must be >= 1");
      card_ *= n;
    }
    weight_ = 1.0 / static_cast<double>(card_);
  } else if (auto* iv = std::get_if<Interval>(&v_)) {
    require(iv->length >= 1, "Interval length must be >= 1");
    shape_ = {iv->length};
    card_ = iv->length;
    weight_ = 1.0 / static_cast<double>(card_);
  } else {
    const auto& e = std::get<EuclideanGrid>(v_);
    require(e.dim >= 1, "EuclideanGrid dim must be >= 1");
    require(e.extent > 0 && std::isfinite(e.extent), "EuclideanGrid extent must be positive");
    require(e.points >= 2, "EuclideanGrid needs at least 2 points per axis");
    shape_.assign(e.dim, e.points);
    card_ = 1;
    for (std::size_t i = 0; i < e.dim; ++i) card_ *= e.points;
    weight_ = std::pow(2.0 * e.extent / static_cast<double>(e.points), static_cast<double>(e.dim));
  }
}

DomainSpec DomainSpec::cyclic(std::size_t n) { return DomainSpec(FiniteAbelian{{n}}); }
DomainSpec DomainSpec::group(std::vector<std::size_t> m) { return DomainSpec(FiniteAbelian{std::move(m)}); }
DomainSpec DomainSpec::interval(std::size_t n) { return DomainSpec(Interval{n}); }
DomainSpec DomainSpec::grid(std::size_t dim, double extent, std::size_t points) {
  return DomainSpec(EuclideanGrid{dim, extent, points});
}

const EuclideanGrid& DomainSpec::grid_params() const {
  if (!is_grid()) usage_fail("domain is not a Euclidean grid");
  return std::get<EuclideanGrid>(v_);
}

std::vector<std::size_t> DomainSpec::coords(std::size_t x) const {
  std::vector<std::size_t> c(shape_.size());
  for (std::size_t i = shape_.size(); i-- > 0;) {
    c[i] = x % shape_[i];
    x /= shape_[i];
  }
  return c;
}

std::size_t DomainSpec::index(std::span<const std::size_t> c) const {
  std::size_t x = 0;
  for (std::size_t i = 0; i < shape_.size(); ++i) x = x * shape_[i] + c[i] % shape_[i];
  return x;
}

std::size_t DomainSpec::add(std::size_t a, std::size_t b) const {
  if (shape_.size() == 1) {
    const std::size_t n = shape_[0];
    const std::size_t s = a + b;
    return s >= n ? s - n : s;
  }
  std::size_t x = 0, stride = 1;
  for (std::size_t i = shape_.size(); i-- > 0;) {
    const std::size_t n = shape_[i];
    std::size_t s = a % n + b % n;
    if (s >= n) s -= n;
    x += s * stride;
    stride *= n;
    a /= n;
    b /= n;
  }
  return x;
}

std::size_t DomainSpec::neg(std::size_t a) const {
  std::size_t x = 0, stride = 1;
  for (std::size_t i = shape_.size(); i-- > 0;) {
    const std::size_t n = shape_[i];
    const std::size_t c = a % n;
    x += (c == 0 ? 0 : n - c) * stride;
    stride *= n;
    a /= n;
  }
  return x;
}

std::size_t DomainSpec::order(std::size_t a) const {
  std::size_t ord = 1;
  const auto c = coords(a);
  for (std::size_t i = 0; i < c.size(); ++i) {
    const std::size_t oi = shape_[i] / std::gcd(shape_[i], c[i]);
    ord = std::lcm(ord, oi);
  }
  return ord;
}

std::string DomainSpec::describe() const {
  std::ostringstream os;
  if (is_group()) {
    os << "group:";
    for (std::size_t i = 0; i < shape_.size(); ++i) os << (i ? "x" : "") << shape_[i];
  } else if (is_interval()) {
    os << "interval:" << card_;
  } else {
    const auto& e = std::get<EuclideanGrid>(v_);
    os << "grid:" << e.dim << ":" << e.extent << ":" << e.points;
  }
  return os.str();
}

bool DomainSpec::operator==(const DomainSpec& o) const {
  if (v_.index() != o.v_.index()) return false;
  if (is_grid()) {
    const auto& a = std::get<EuclideanGrid>(v_);
    const auto& b = std::get<EuclideanGrid>(o.v_);
    return a.dim == b.dim && a.extent == b.extent && a.points == b.points;
  }
  return shape_ == o.shape_;
}

// --- Signal / PolyPhase / CosetDescriptor -----------------------------------

Signal::Signal(DomainSpec d, std::vector<cplx> v) : domain(std::move(d)), values(std::move(v)) {
  if (values.size() != domain.cardinality())
    usage_fail("signal has " + std::to_string(values.size()) + " values but domain " +
               domain.describe() + " has " + std::to_string(domain.cardinality()) + " points");
  for (const auto& z : values)
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) usage_fail("signal contains a non-finite value");
}

Signal Signal::constant(const DomainSpec& d, cplx c) {
  return Signal(d, std::vector<cplx>(d.cardinality(), c));
}

PolyPhase PolyPhase::shifted_by(double s) const {
  PolyPhase p = *this;
  for (auto& t : p.table) t = wrap01(t + s);
  if (p.coeffs && !p.coeffs->empty()) (*p.coeffs)[0] = wrap01((*p.coeffs)[0] + s);
  return p;
}

void CosetDescriptor::validate() const {
  if (!domain.is_group()) usage_fail("coset descriptors live on finite abelian groups");
  const std::size_t n = domain.cardinality();
  if (elements.empty() || !std::is_sorted(elements.begin(), elements.end()))
    usage_fail("coset elements must be a nonempty sorted list");
  if (elements.front() != 0) usage_fail("subgroup does not contain the identity");
  if (offset >= n) usage_fail("coset offset outside the group");
  std::vector<char> in(n, 0);
  for (auto e : elements) {
    if (e >= n) usage_fail("subgroup element outside the group");
    in[e] = 1;
  }
  for (auto a : elements) {
    if (!in[domain.neg(a)]) usage_fail("subgroup not closed under negation");
    for (auto b : elements)
      if (!in[domain.add(a, b)]) usage_fail("subgroup not closed under addition");
  }
  if (n % elements.size() != 0) usage_fail("subgroup order does not divide |G|");
}

std::vector<std::size_t> CosetDescriptor::coset_members() const {
  std::vector<std::size_t> out;
  out.reserve(elements.size());
  for (auto e : elements) out.push_back(domain.add(offset, e));
  std::sort(out.begin(), out.end());
  return out;
}

// --- operations -------------------------------------------------------------

namespace detail {

void shift_into(const DomainSpec& d, const cplx* in, cplx* out, std::size_t h) {
  const auto& shape = d.shape();
  const std::size_t n = d.cardinality();
  if (shape.size() == 1) {
    h %= n;
    std::copy(in, in + (n - h), out + h);
    std::copy(in + (n - h), in + n, out);
    return;
  }
  // Split into the leading axes (odometer) and a contiguous last axis.
  const std::size_t last = shape.back();
  const auto hc = d.coords(h);
  const std::size_t rows = n / last;
  const std::size_t hl = hc.back();
  std::vector<std::size_t> rc(shape.size() - 1, 0);
  for (std::size_t r = 0; r < rows; ++r) {
    std::size_t dst = 0;
    for (std::size_t i = 0; i + 1 < shape.size(); ++i) {
      std::size_t c = rc[i] + hc[i];
      if (c >= shape[i]) c -= shape[i];
      dst = dst * shape[i] + c;
    }
    const cplx* src = in + r * last;
    cplx* o = out + dst * last;
    std::copy(src, src + (last - hl), o + hl);
    std::copy(src + (last - hl), src + last, o);
    for (std::size_t i = rc.size(); i-- > 0;) {
      if (++rc[i] < shape[i]) break;
      rc[i] = 0;
    }
  }
}

}  // namespace detail

Signal translate(const Signal& f, std::size_t h) {
  if (f.domain.is_interval())
    usage_fail("intervals have no translation; embed into Z/M with embed_interval first");
  if (h >= f.domain.cardinality()) usage_fail("translate: shift is not a domain element");
  std::vector<cplx> out(f.size());
  detail::shift_into(f.domain, f.values.data(), out.data(), h);
  return Signal(f.domain, std::move(out));
}

Signal mult_derivative(const Signal& f, std::size_t h) {
  Signal t = translate(f, h);
  simd::active().mul_conj(t.values.data(), f.values.data(), t.values.data(), t.size());
  return t;
}

double lp_norm(const Signal& f, double p) {
  if (!(p > 0)) usage_fail("lp_norm needs p > 0");
  const auto& k = simd::active();
  if (std::isinf(p)) {
    double m = 0;
    for (const auto& z : f.values) m = std::max(m, std::abs(z));
    return m;
  }
  const double w = f.domain.point_weight();
  if (p == 2.0) return std::sqrt(w * k.sum_abs2(f.values.data(), f.size()));
  std::vector<double> a(f.size());
  for (std::size_t i = 0; i < a.size(); ++i) a[i] = std::pow(std::abs(f.values[i]), p);
  return std::pow(w * k.sum_real(a.data(), a.size()), 1.0 / p);
}

Signal fourier(const Signal& f) {
  if (!f.domain.is_group()) usage_fail("fourier needs a finite abelian group domain");
  auto out = fft::forward(f.values, f.domain.shape());
  const double s = 1.0 / static_cast<double>(f.size());
  for (auto& z : out) z *= s;
  return Signal(f.domain, std::move(out));
}

Signal inverse_fourier(const Signal& fhat) {
  if (!fhat.domain.is_group()) usage_fail("inverse_fourier needs a finite abelian group domain");
  return Signal(fhat.domain, fft::backward(fhat.values, fhat.domain.shape()));
}

PolyCheck poly_from_table(std::span<const double> table, const DomainSpec& domain, int d,
                          const Tolerances& tol) {
  if (d < 0) usage_fail("poly_from_table: degree must be >= 0");
  if (domain.is_grid()) usage_fail("poly_from_table: grids carry no polynomial structure");
  const std::size_t n = domain.cardinality();
  if (table.size() != n) usage_fail("poly_from_table: table length does not match the domain");

  PolyCheck res;
  const auto& shape = domain.shape();
  const std::size_t r = shape.size();
  // Generators e_i; on an interval the single generator 1 with no wraparound.
  std::vector<std::size_t> gens(r);
  for (std::size_t i = 0; i < r; ++i) {
    std::size_t stride = 1;
    for (std::size_t j = i + 1; j < r; ++j) stride *= shape[j];
    gens[i] = stride;
  }
  const bool lin = domain.is_interval();

  // Iterate over multisets g_1 <= ... <= g_{d+1} of generator indices.
  std::vector<std::size_t> ms(d + 1, 0);
  std::vector<double> cur(n), nxt(n);
  for (;;) {
    std::size_t valid = n;  // interval: differences defined on [0, valid)
    std::copy(table.begin(), table.end(), cur.begin());
    for (int s = 0; s <= d; ++s) {
      const std::size_t g = gens[ms[s]];
      if (lin) {
        if (valid <= 1) {
          valid = 0;
          break;
        }
        for (std::size_t x = 0; x + 1 < valid; ++x) nxt[x] = wrap_half(cur[x + 1] - cur[x]);
        --valid;
      } else {
        for (std::size_t x = 0; x < n; ++x) nxt[x] = wrap_half(cur[domain.add(x, g)] - cur[x]);
      }
      std::swap(cur, nxt);
    }
    for (std::size_t x = 0; x < valid; ++x) res.defect = std::max(res.defect, std::abs(cur[x]));
    // next multiset
    int pos = d;
    while (pos >= 0 && ms[pos] + 1 >= r) --pos;
    if (pos < 0) break;
    ++ms[pos];
    for (int s = pos + 1; s <= d; ++s) ms[s] = ms[pos];
  }

  res.accepted = res.defect <= tol.poly;
  if (!res.accepted) return res;

  PolyPhase p{domain, d, {}, std::nullopt};
  p.table.resize(n);
  for (std::size_t x = 0; x < n; ++x) p.table[x] = wrap01(table[x]);
  if (lin || domain.is_cyclic()) {
    // Newton coefficients c_i = (Delta_1^i P)(0).
    std::vector<double> c(d + 1, 0.0), diff(p.table.begin(), p.table.end());
    for (int i = 0; i <= d; ++i) {
      if (diff.empty()) break;
      c[i] = wrap01(diff[0]);
      for (std::size_t x = 0; x + 1 < diff.size(); ++x) diff[x] = wrap_half(diff[x + 1] - diff[x]);
      diff.pop_back();
    }
    for (auto& v : c)
      if (std::abs(v - 1.0) < 1e-12 || std::abs(v) < 1e-12) v = 0.0;
    p.coeffs = std::move(c);
  }
  res.phase = std::move(p);
  return res;
}

Signal phase_signal(const PolyPhase& p, cplx c) {
  std::vector<cplx> v(p.table.size());
  for (std::size_t x = 0; x < v.size(); ++x) v[x] = c * expi(p.table[x]);
  return Signal(p.domain, std::move(v));
}

PolyPhase phase_from_coeffs(const DomainSpec& d, std::vector<double> coeffs) {
  if (!(d.is_interval() || d.is_cyclic()))
    usage_fail("binomial coefficients need a cyclic group or an interval");
  PolyPhase p{d, static_cast<int>(coeffs.size()) - 1, {}, std::nullopt};
  if (p.degree < 0) p.degree = 0;
  p.table.resize(d.cardinality());
  for (std::size_t x = 0; x < p.table.size(); ++x) {
    long double s = 0;
    for (std::size_t i = 0; i < coeffs.size(); ++i) {
      const long double t = static_cast<long double>(coeffs[i]) * binomial(x, static_cast<int>(i));
      s += t - std::floor(t);
    }
    p.table[x] = wrap01(static_cast<double>(s - std::floor(s)));
  }
  for (auto& c : coeffs) c = wrap01(c);
  p.coeffs = std::move(coeffs);
  return p;
}

Signal lift_to_extension(const Signal& f, std::size_t q) {
  if (q < 1) usage_fail("lift_to_extension needs q >= 1");
  if (!f.domain.is_cyclic()) usage_fail("lift_to_extension needs a cyclic group Z/N");
  const std::size_t n = f.size();
  std::vector<cplx> v(n * q);
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = f.values[i % n];
  return Signal(DomainSpec::cyclic(n * q), std::move(v));
}

Signal embed_interval(const Signal& f, std::size_t ambient) {
  if (!f.domain.is_interval()) usage_fail("embed_interval needs an interval signal");
  if (ambient < f.size()) usage_fail("ambient group is smaller than the interval");
  std::vector<cplx> v(ambient, cplx(0.0));
  std::copy(f.values.begin(), f.values.end(), v.begin());
  return Signal(DomainSpec::cyclic(ambient), std::move(v));
}

}  // namespace gowers
