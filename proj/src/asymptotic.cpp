#include "neumann/asymptotic.hpp"

#include <cmath>
#include <mpfr.h>

#include "neumann/error.hpp"

namespace neumann {

namespace {

class Mpfr {
 public:
  explicit Mpfr(mpfr_prec_t prec) { mpfr_init2(v_, prec); }
  ~Mpfr() { mpfr_clear(v_); }
  Mpfr(const Mpfr&) = delete;
  Mpfr& operator=(const Mpfr&) = delete;

  mpfr_ptr get() { return v_; }
  mpfr_srcptr get() const { return v_; }

 private:
  mpfr_t v_;
};

// [lo, hi] enclosure of the partial sum over n < terms.
void partial_sum(unsigned terms, Mpfr& lo, Mpfr& hi, mpfr_prec_t prec) {
  mpfr_set_ui(lo.get(), 0, MPFR_RNDD);
  mpfr_set_ui(hi.get(), 0, MPFR_RNDU);
  Mpfr t(prec), y2(prec);
  mpz_class y = 1;
  for (unsigned n = 0; n < terms; ++n) {
    const mpz_class sq = y * y;
    for (auto [acc, rnd] : {std::pair{&lo, MPFR_RNDD}, std::pair{&hi, MPFR_RNDU}}) {
      mpfr_set_z(y2.get(), sq.get_mpz_t(), rnd == MPFR_RNDD ? MPFR_RNDU : MPFR_RNDD);
      mpfr_ui_div(t.get(), 1, y2.get(), rnd);
      mpfr_log1p(t.get(), t.get(), rnd);
      mpfr_div_2ui(t.get(), t.get(), n + 1, rnd);
      mpfr_add(acc->get(), acc->get(), t.get(), rnd);
    }
    y = y * y + 1;
  }
}

// Upper bound on the omitted terms n >= terms: (8/7) 2^{-terms-1} y_terms^{-2}.
void tail_bound(unsigned terms, Mpfr& out, mpfr_prec_t prec) {
  if (terms == 0) {
    // ln 2 / 2 + ln(5/4)/4 + ... < 1; crude but valid.
    mpfr_set_ui(out.get(), 1, MPFR_RNDU);
    return;
  }
  const mpz_class y = recurrence_term(terms);
  Mpfr y2(prec);
  const mpz_class sq = y * y;
  mpfr_set_z(y2.get(), sq.get_mpz_t(), MPFR_RNDD);
  mpfr_ui_div(out.get(), 8, y2.get(), MPFR_RNDU);
  mpfr_div_ui(out.get(), out.get(), 7, MPFR_RNDU);
  mpfr_div_2ui(out.get(), out.get(), terms + 1, MPFR_RNDU);
}

std::string to_fixed(const Mpfr& v, unsigned digits) {
  char* s = nullptr;
  mpfr_asprintf(&s, "%.*Rf", static_cast<int>(digits), v.get());
  std::string out(s);
  mpfr_free_str(s);
  return out;
}

AsymptoticResult finish(unsigned terms, unsigned digits, mpfr_prec_t prec) {
  Mpfr lo(prec), hi(prec), tail(prec);
  partial_sum(terms, lo, hi, prec);
  tail_bound(terms, tail, prec);
  Mpfr klo(prec), khi(prec), s(prec), k(prec), c(prec);
  mpfr_exp(klo.get(), lo.get(), MPFR_RNDD);
  mpfr_add(s.get(), hi.get(), tail.get(), MPFR_RNDU);
  mpfr_exp(khi.get(), s.get(), MPFR_RNDU);
  // Point estimate: midpoint of the enclosure of the true constant.
  mpfr_add(k.get(), klo.get(), khi.get(), MPFR_RNDN);
  mpfr_div_2ui(k.get(), k.get(), 1, MPFR_RNDN);
  mpfr_log2(c.get(), k.get(), MPFR_RNDN);
  mpfr_ui_div(c.get(), 1, c.get(), MPFR_RNDN);
  Mpfr width(prec);
  mpfr_sub(width.get(), khi.get(), klo.get(), MPFR_RNDU);

  AsymptoticResult r;
  r.digits = digits;
  r.terms_used = terms;
  r.k = to_fixed(k, digits);
  r.coefficient = to_fixed(c, digits);
  r.k_value = mpfr_get_d(k.get(), MPFR_RNDN);
  r.coefficient_value = mpfr_get_d(c.get(), MPFR_RNDN);
  r.error_bound = mpfr_get_d(width.get(), MPFR_RNDU);
  return r;
}

mpfr_prec_t precision_for(unsigned digits) {
  return static_cast<mpfr_prec_t>(std::ceil((digits + 20) * 3.3219280948873623)) + 64;
}

}  // namespace

mpz_class recurrence_term(unsigned n) {
  mpz_class y = 1;
  for (unsigned k = 0; k < n; ++k) y = y * y + 1;
  return y;
}

AsymptoticResult compute_k(unsigned digits) {
  if (digits == 0 || digits > kMaxDigits)
    throw DomainError("compute_k: digits must be in [1, " + std::to_string(kMaxDigits) + "]");
  const mpfr_prec_t prec = precision_for(digits);
  // Terms until the tail bound is below 10^{-digits-2}.
  unsigned terms = 1;
  Mpfr tail(prec), target(prec);
  mpfr_set_ui(target.get(), 10, MPFR_RNDN);
  mpfr_pow_si(target.get(), target.get(), -static_cast<long>(digits) - 2, MPFR_RNDD);
  while (true) {
    tail_bound(terms, tail, prec);
    if (mpfr_cmp(tail.get(), target.get()) < 0) break;
    ++terms;
  }
  return finish(terms, digits, prec);
}

AsymptoticResult compute_k_with_terms(unsigned terms, unsigned digits) {
  if (terms == 0) throw DomainError("compute_k_with_terms: need at least one term");
  if (terms > 12) throw DomainError("compute_k_with_terms: at most 12 terms");
  if (digits == 0 || digits > kMaxDigits)
    throw DomainError("compute_k_with_terms: digits must be in [1, " + std::to_string(kMaxDigits) + "]");
  return finish(terms, digits, precision_for(digits));
}

std::vector<FloorRow> verify_floor_identity(unsigned n_max, unsigned precision_bits) {
  if (n_max > 6) throw DomainError("verify_floor_identity: n_max must be <= 6");
  if (precision_bits < 32) throw DomainError("verify_floor_identity: precision too small");
  const auto prec = static_cast<mpfr_prec_t>(precision_bits);
  // Enough terms for the tail to fall below the working precision.
  unsigned terms = 1;
  Mpfr tail(prec);
  while (true) {
    tail_bound(terms, tail, prec);
    if (mpfr_get_exp(tail.get()) < -static_cast<mpfr_exp_t>(precision_bits) || terms >= 12) break;
    ++terms;
  }
  Mpfr lo(prec), hi(prec), klo(prec), khi(prec);
  partial_sum(terms, lo, hi, prec);
  mpfr_add(hi.get(), hi.get(), tail.get(), MPFR_RNDU);
  mpfr_exp(klo.get(), lo.get(), MPFR_RNDD);
  mpfr_exp(khi.get(), hi.get(), MPFR_RNDU);

  std::vector<FloorRow> rows;
  mpz_class flo, fhi;
  for (unsigned n = 0; n <= n_max; ++n) {
    FloorRow row;
    row.n = n;
    row.y = recurrence_term(n);
    mpfr_get_z(flo.get_mpz_t(), klo.get(), MPFR_RNDD);
    mpfr_get_z(fhi.get_mpz_t(), khi.get(), MPFR_RNDD);
    if (flo == fhi) {
      row.floor_value = flo;
      row.status = flo == row.y ? FloorStatus::Match : FloorStatus::Mismatch;
    }
    rows.push_back(row);
    mpfr_sqr(klo.get(), klo.get(), MPFR_RNDD);
    mpfr_sqr(khi.get(), khi.get(), MPFR_RNDU);
  }
  return rows;
}

double coefficient_for_recurrence_level(unsigned n) {
  if (n < 1 || n > 6) throw DomainError("recurrence level must be in [1, 6]");
  const double y = recurrence_term(n).get_d();
  return std::ldexp(1.0, static_cast<int>(n)) / std::log2(y);
}

}  // namespace neumann
