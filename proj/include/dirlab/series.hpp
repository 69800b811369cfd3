#pragma once

#include <complex>
#include <cstdint>
#include <limits>
#include <span>
#include <string>
#include <vector>

namespace dirlab {

using cplx = std::complex<double>;
inline constexpr double kInf = std::numeric_limits<double>::infinity();

// Where the coefficients live: the scalar field, or the d-dimensional l_q
// model. The cotype is declared nominally for the infinite-dimensional space
// the model stands in for; it is not derived from the truncation.
struct CoefficientSpaceSpec {
  enum class Kind { scalar, vector };

  Kind kind = Kind::scalar;
  std::uint32_t dim = 1;
  double q = 2.0; // norm exponent in [1, inf]

  static CoefficientSpaceSpec scalar_space() { return {}; }
  static CoefficientSpaceSpec lq(std::uint32_t dim, double q);

  bool is_scalar() const { return kind == Kind::scalar; }
  double nominal_cotype() const;
  // q' = q/(q-1); 1 <-> inf
  double dual_exponent() const;
  std::string name() const;
  bool operator==(const CoefficientSpaceSpec&) const = default;
};

// One coefficient: a complex vector stored sparsely (coordinate -> value), so
// basis-vector coefficients in high dimension stay O(1). Entries are sorted
// by coordinate and nonzero.
class Coefficient {
public:
  using Entry = std::pair<std::uint32_t, cplx>;

  Coefficient() = default;

  static Coefficient scalar(cplx v) { return basis(0, v); }
  static Coefficient basis(std::uint32_t j, cplx v);
  static Coefficient dense(std::span<const cplx> values);

  cplx get(std::uint32_t j) const;
  void set(std::uint32_t j, cplx v);
  bool is_zero() const { return entries_.empty(); }
  // smallest dim containing the support (0 for the zero coefficient)
  std::uint32_t min_dim() const;
  const std::vector<Entry>& entries() const { return entries_; }

  Coefficient& operator+=(const Coefficient& o);
  Coefficient& operator*=(cplx s);
  friend Coefficient operator+(Coefficient a, const Coefficient& b) { return a += b; }
  friend Coefficient operator*(Coefficient a, cplx s) { return a *= s; }
  friend Coefficient operator*(cplx s, Coefficient a) { return a *= s; }
  bool operator==(const Coefficient&) const = default;

private:
  std::vector<Entry> entries_;
};

// ||a||_X for the given space model (modulus / l_q / max of moduli).
double space_norm(const CoefficientSpaceSpec& space, const Coefficient& a);

// A functional on the model space, dense, paired bilinearly:
// x*(a) = sum_j x*_j a_j. norm_exponent is the dual exponent q'.
struct DualVector {
  std::vector<cplx> entries;
  double norm_exponent = 2.0;

  cplx apply(const Coefficient& a) const;
  double norm() const;
};

// Truncated Dirichlet series: sparse map n -> coefficient for n <= n_max.
// Zero coefficient and absent key are indistinguishable; n_max is explicit
// so zero-padded tails are representable. Immutable in spirit: operations
// return new values.
class DirichletTruncation {
public:
  using Entry = std::pair<std::uint64_t, Coefficient>;

  DirichletTruncation(CoefficientSpaceSpec space, std::uint64_t n_max);

  const CoefficientSpaceSpec& space() const { return space_; }
  std::uint64_t n_max() const { return n_max_; }

  // zero value erases; n outside [1, n_max] throws std::out_of_range
  void set(std::uint64_t n, Coefficient c);
  // nullptr when absent
  const Coefficient* find(std::uint64_t n) const;
  Coefficient at(std::uint64_t n) const; // zero when absent

  const std::vector<Entry>& support() const { return coeffs_; }
  std::size_t support_size() const { return coeffs_.size(); }
  bool empty() const { return coeffs_.empty(); }

private:
  CoefficientSpaceSpec space_;
  std::uint64_t n_max_;
  std::vector<Entry> coeffs_; // ascending n, nonzero coefficients
};

// --- operations -----------------------------------------------------------

// coefficient at n becomes a_n * n^{-sigma}; n_max unchanged
DirichletTruncation translate(const DirichletTruncation& D, double sigma);

// sum_{n <= N} a_n n^{-s}; N > n_max throws std::out_of_range
Coefficient evaluate_partial(const DirichletTruncation& D, cplx s, std::uint64_t N);

// Abel summation residual for the two-sided identity
//   sum_{n=M+1}^{N} a_n n^{-(sigma+eps+s)}
//     = S_N / N^eps - S_M / M^eps
//       + sum_{n=M}^{N-1} S_n (n^{-eps} - (n+1)^{-eps}),
// with S_n = sum_{k<=n} a_k k^{-(sigma+s)}. Returns ||lhs - rhs||_X.
// Requires 1 <= M < N-1 <= n_max - 1.
double abel_identity_residual(const DirichletTruncation& D, double sigma, double eps,
                              std::uint64_t M, std::uint64_t N, cplx s);

// Residual of the resummation identity used when the abscissa is nonnegative:
//   sum_{n<=N} a_n n^{-s}
//     = T_N N^{sigma0} + sum_{n=1}^{N-1} T_n (n^{sigma0} - (n+1)^{sigma0}),
// with T_n = sum_{k<=n} a_k k^{-(sigma0+s)}.
double abel_resummation_residual(const DirichletTruncation& D, double sigma0,
                                 std::uint64_t N, cplx s);

// scalar series with coefficients x*(a_n)
DirichletTruncation apply_functional(const DirichletTruncation& D, const DualVector& xstar);

// keeps exactly the coefficients with Omega(n) = m
DirichletTruncation homogeneous_part(const DirichletTruncation& D, std::uint64_t m);

// Coefficientwise a_n + lambda_n x0 in the common ambient model space.
// x0 must be a unit vector supported on a single coordinate j0, and every
// coefficient of D1 must vanish at j0 (the concrete coordinate-hyperplane
// model: Y = {v : v_{j0} = 0}).
DirichletTruncation combine_with_direction(const DirichletTruncation& D1,
                                           const DirichletTruncation& D2,
                                           const Coefficient& x0);

} // namespace dirlab
