#include "exact_solve.hpp"

#include <algorithm>

#include "neumann/error.hpp"

namespace neumann::detail {

namespace {

using u64 = std::uint64_t;
__extension__ typedef __int128 i128;

constexpr unsigned kLazyTerms = 255;  // products < 2^56 summed before reducing
constexpr unsigned kMaxIterations = 40000;

bool is_prime(u64 n) {
  if (n < 2) return false;
  for (u64 d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

u64 pow_mod(u64 b, u64 e, u64 p) {
  u64 r = 1;
  b %= p;
  while (e) {
    if (e & 1) r = r * b % p;
    b = b * b % p;
    e >>= 1;
  }
  return r;
}

u64 inv_mod(u64 a, u64 p) { return pow_mod(a, p - 2, p); }

// Dense LU factorization with row pivoting over Z/p, p < 2^28.
class ModularLU {
 public:
  ModularLU(const std::vector<SparseRow>& rows, u64 p) : n_(rows.size()), p_(p), a_(n_ * n_, 0) {
    for (std::size_t i = 0; i < n_; ++i)
      for (std::size_t k = 0; k < rows[i].cols.size(); ++k) {
        const std::int64_t v = rows[i].vals[k] % static_cast<std::int64_t>(p);
        u64& e = at(i, rows[i].cols[k]);
        e = (e + static_cast<u64>(v < 0 ? v + static_cast<std::int64_t>(p) : v)) % p;
      }
    perm_.resize(n_);
    for (std::size_t i = 0; i < n_; ++i) perm_[i] = i;
  }

  bool factor() {
    unsigned pending = 0;
    diag_inv_.assign(n_, 0);
    for (std::size_t k = 0; k < n_; ++k) {
      if (pending == kLazyTerms) {
        for (std::size_t i = k; i < n_; ++i)
          for (std::size_t j = k; j < n_; ++j) at(i, j) %= p_;
        pending = 0;
      }
      std::size_t piv = n_;
      for (std::size_t i = k; i < n_; ++i) {
        at(i, k) %= p_;
        if (piv == n_ && at(i, k) != 0) piv = i;
      }
      if (piv == n_) return false;
      if (piv != k) {
        std::swap_ranges(a_.begin() + static_cast<std::ptrdiff_t>(piv * n_),
                         a_.begin() + static_cast<std::ptrdiff_t>((piv + 1) * n_),
                         a_.begin() + static_cast<std::ptrdiff_t>(k * n_));
        std::swap(perm_[piv], perm_[k]);
      }
      u64* rk = &at(k, 0);
      for (std::size_t j = k + 1; j < n_; ++j) rk[j] %= p_;
      const u64 inv = inv_mod(rk[k], p_);
      diag_inv_[k] = inv;
      for (std::size_t i = k + 1; i < n_; ++i) {
        u64* ri = &at(i, 0);
        const u64 m = ri[k] * inv % p_;
        ri[k] = m;
        if (m == 0) continue;
        const u64 f = p_ - m;
        for (std::size_t j = k + 1; j < n_; ++j) ri[j] += f * rk[j];
      }
      ++pending;
    }
    for (auto& v : a_) v %= p_;
    return true;
  }

  // Solves A y = r (mod p); r entries already reduced.
  std::vector<u64> solve(const std::vector<u64>& r) const {
    std::vector<u64> z(n_);
    for (std::size_t i = 0; i < n_; ++i) {
      const u64* ri = &a_[i * n_];
      u64 acc = 0;
      unsigned cnt = 0;
      for (std::size_t k = 0; k < i; ++k) {
        acc += ri[k] * z[k];
        if (++cnt == kLazyTerms) {
          acc %= p_;
          cnt = 0;
        }
      }
      acc %= p_;
      z[i] = (r[perm_[i]] + p_ - acc) % p_;
    }
    std::vector<u64> y(n_);
    for (std::size_t i = n_; i-- > 0;) {
      const u64* ri = &a_[i * n_];
      u64 acc = 0;
      unsigned cnt = 0;
      for (std::size_t k = i + 1; k < n_; ++k) {
        acc += ri[k] * y[k];
        if (++cnt == kLazyTerms) {
          acc %= p_;
          cnt = 0;
        }
      }
      acc %= p_;
      y[i] = (z[i] + p_ - acc) % p_ * diag_inv_[i] % p_;
    }
    return y;
  }

 private:
  u64& at(std::size_t i, std::size_t j) { return a_[i * n_ + j]; }

  std::size_t n_;
  u64 p_;
  std::vector<u64> a_;
  std::vector<std::size_t> perm_;
  std::vector<u64> diag_inv_;
};

bool verify(const std::vector<SparseRow>& rows, const std::vector<std::int64_t>& rhs,
            const std::vector<mpz_class>& num, const mpz_class& den) {
  mpz_class acc, target;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    acc = 0;
    for (std::size_t k = 0; k < rows[i].cols.size(); ++k)
      acc += num[rows[i].cols[k]] * static_cast<long>(rows[i].vals[k]);
    target = den * static_cast<long>(rhs[i]);
    if (acc != target) return false;
  }
  return true;
}

bool reconstruct_all(const std::vector<mpz_class>& x, const mpz_class& m,
                     std::vector<mpz_class>& num, mpz_class& den) {
  const std::size_t n = x.size();
  mpz_class bound = sqrt(mpz_class(m / 2));
  mpz_class half = m / 2;
  std::vector<mpz_class> scale_at(n);
  num.assign(n, 0);
  den = 1;
  mpz_class v, nn, dd;
  for (std::size_t i = 0; i < n; ++i) {
    v = x[i] * den % m;
    if (v > half) v -= m;
    if (abs(v) <= bound) {
      num[i] = v;
    } else {
      if (!rational_reconstruct(v < 0 ? mpz_class(v + m) : v, m, nn, dd)) return false;
      num[i] = nn;
      den *= dd;
      if (den > bound) return false;
    }
    scale_at[i] = den;
  }
  for (std::size_t i = 0; i < n; ++i) num[i] *= den / scale_at[i];
  mpz_class g = den;
  for (const auto& c : num) {
    if (g == 1) break;
    g = gcd(g, c);
  }
  if (g != 1) {
    for (auto& c : num) c /= g;
    den /= g;
  }
  return true;
}

}  // namespace

bool rational_reconstruct(const mpz_class& a, const mpz_class& m, mpz_class& num,
                          mpz_class& den) {
  const mpz_class bound = sqrt(mpz_class(m / 2));
  mpz_class r0 = m, r1 = a % m, s0 = 0, s1 = 1, q, t;
  if (r1 < 0) r1 += m;
  while (r1 > bound) {
    q = r0 / r1;
    t = r0 - q * r1;
    r0 = r1;
    r1 = t;
    t = s0 - q * s1;
    s0 = s1;
    s1 = t;
  }
  if (s1 == 0 || abs(s1) > bound) return false;
  num = r1;
  den = s1;
  if (den < 0) {
    num = -num;
    den = -den;
  }
  return gcd(num, den) == 1;
}

RationalSolution solve_rational(const std::vector<SparseRow>& rows,
                                const std::vector<std::int64_t>& rhs) {
  const std::size_t n = rows.size();
  if (rhs.size() != n) throw DimensionError("solve_rational: rhs size mismatch");
  for (const auto& row : rows)
    for (auto c : row.cols)
      if (c >= n) throw DimensionError("solve_rational: column out of range");

  u64 p = (u64{1} << 28) - 1;
  for (int attempt = 0; attempt < 5; ++attempt) {
    while (!is_prime(p)) --p;
    ModularLU lu(rows, p);
    if (!lu.factor()) {
      --p;
      continue;
    }
    std::vector<std::int64_t> r = rhs;
    std::vector<mpz_class> x(n, 0);
    std::vector<u64> rmod(n);
    mpz_class pk = 1;
    unsigned next_check = 8;
    for (unsigned iter = 1; iter <= kMaxIterations; ++iter) {
      const auto ps = static_cast<std::int64_t>(p);
      for (std::size_t i = 0; i < n; ++i) {
        const std::int64_t v = r[i] % ps;
        rmod[i] = static_cast<u64>(v < 0 ? v + ps : v);
      }
      const std::vector<u64> y = lu.solve(rmod);
      for (std::size_t i = 0; i < n; ++i)
        if (y[i]) mpz_addmul_ui(x[i].get_mpz_t(), pk.get_mpz_t(), y[i]);
      pk *= static_cast<unsigned long>(p);
      for (std::size_t i = 0; i < n; ++i) {
        i128 acc = r[i];
        for (std::size_t k = 0; k < rows[i].cols.size(); ++k)
          acc -= static_cast<i128>(rows[i].vals[k]) * static_cast<i128>(y[rows[i].cols[k]]);
        if (acc % ps != 0) throw ConvergenceError("solve_rational: lifting residual not divisible");
        r[i] = static_cast<std::int64_t>(acc / ps);
      }
      if (iter < next_check) continue;
      next_check = std::max(next_check + 1, next_check * 3 / 2);
      RationalSolution sol;
      if (reconstruct_all(x, pk, sol.numerators, sol.denominator) &&
          verify(rows, rhs, sol.numerators, sol.denominator))
        return sol;
    }
    throw ConvergenceError("solve_rational: lifting did not converge");
  }
  throw ConvergenceError("solve_rational: system is singular");
}

}  // namespace neumann::detail
