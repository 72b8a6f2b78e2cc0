#pragma once

#include <complex>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "gowers/config.hpp"
#include "gowers/kernels.hpp"

namespace gowers {

inline constexpr double kTwoPi = 6.283185307179586476925286766559;

// e(x) = exp(2 pi i x)
cplx expi(double x);
// Representative of x mod 1 in [0, 1).
double wrap01(double x);
// Representative of x mod 1 in (-1/2, 1/2].
double wrap_half(double x);

struct FiniteAbelian {
  std::vector<std::size_t> moduli;
};

struct Interval {
  std::size_t length;
};

// Sampled [-L, L]^dim with m points per axis at x_j = -L + j * 2L/m.
struct EuclideanGrid {
  std::size_t dim;
  double extent;
  std::size_t points;
};

class DomainSpec {
 public:
  using Variant = std::variant<FiniteAbelian, Interval, EuclideanGrid>;

  DomainSpec() : DomainSpec(FiniteAbelian{{1}}) {}

  static DomainSpec cyclic(std::size_t n);
  static DomainSpec group(std::vector<std::size_t> moduli);
  static DomainSpec interval(std::size_t n);
  static DomainSpec grid(std::size_t dim, double extent, std::size_t points);

  const Variant& variant() const { return v_; }
  bool is_group() const { return std::holds_alternative<FiniteAbelian>(v_); }
  bool is_interval() const { return std::holds_alternative<Interval>(v_); }
  bool is_grid() const { return std::holds_alternative<EuclideanGrid>(v_); }
  bool is_cyclic() const { return is_group() && shape_.size() == 1; }
  const EuclideanGrid& grid_params() const;

  std::size_t cardinality() const { return card_; }
  // Measure carried by each point: 1/|G|, 1/N, or (2L/m)^dim.
  double point_weight() const { return weight_; }
  // Axis lengths of the periodic structure (groups and grids); {N} for intervals.
  const std::vector<std::size_t>& shape() const { return shape_; }

  // Element arithmetic on the group or the grid torus. Elements are canonical
  // (row-major) indices.
  std::vector<std::size_t> coords(std::size_t x) const;
  std::size_t index(std::span<const std::size_t> c) const;
  std::size_t add(std::size_t a, std::size_t b) const;
  std::size_t neg(std::size_t a) const;
  std::size_t sub(std::size_t a, std::size_t b) const { return add(a, neg(b)); }
  // Additive order of an element.
  std::size_t order(std::size_t a) const;

  std::string describe() const;
  bool operator==(const DomainSpec& o) const;

 private:
  explicit DomainSpec(Variant v);
  Variant v_;
  std::vector<std::size_t> shape_;
  std::size_t card_ = 0;
  double weight_ = 0.0;
};

struct Signal {
  DomainSpec domain;
  std::vector<cplx> values;

  Signal(DomainSpec d, std::vector<cplx> v);
  static Signal constant(const DomainSpec& d, cplx c);
  std::size_t size() const { return values.size(); }
};

struct PolyPhase {
  DomainSpec domain;
  int degree = 0;
  std::vector<double> table;                 // values in [0, 1)
  std::optional<std::vector<double>> coeffs;  // binomial basis, cyclic/interval only

  // table(x) + s (mod 1).
  PolyPhase shifted_by(double s) const;
};

struct CosetDescriptor {
  DomainSpec domain;
  std::vector<std::size_t> elements;  // sorted subgroup H0
  std::size_t offset = 0;

  // Checks identity membership, closure under + and -, and |H0| divides |G|.
  void validate() const;
  std::vector<std::size_t> coset_members() const;
};

// T^h f(x) = f(x - h). Intervals have no shift; embed them first.
Signal translate(const Signal& f, std::size_t h);
// (T^h f) * conj(f)
Signal mult_derivative(const Signal& f, std::size_t h);
// p = infinity gives the sup norm.
double lp_norm(const Signal& f, double p);

// fhat(xi) = E_x f(x) e(-xi.x) on the dual identified with the group itself.
Signal fourier(const Signal& f);
Signal inverse_fourier(const Signal& fhat);

struct PolyCheck {
  bool accepted = false;
  double defect = 0.0;  // largest |difference| mod 1 seen
  std::optional<PolyPhase> phase;
};
PolyCheck poly_from_table(std::span<const double> table, const DomainSpec& domain, int d,
                          const Tolerances& tol = default_tolerances());

// c * e(P(x)).
Signal phase_signal(const PolyPhase& p, cplx c = 1.0);
// P(x) = sum_i c_i binom(x, i) on a cyclic group or an interval.
PolyPhase phase_from_coeffs(const DomainSpec& d, std::vector<double> coeffs);
// g(n) = f(n mod N) on Z/qN.
Signal lift_to_extension(const Signal& f, std::size_t q);
// Zero extension of an interval signal into Z/M.
Signal embed_interval(const Signal& f, std::size_t ambient);

// binom(n, i) as a long double (exact while it fits the mantissa).
long double binomial(long double n, int i);

}  // namespace gowers
