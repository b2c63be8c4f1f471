#include "folner/symbolic.hpp"

#include <bit>

#include <mpfr.h>

#include "folner/errors.hpp"

namespace folner {

namespace {

class Real {
 public:
  explicit Real(mpfr_prec_t prec) { mpfr_init2(v_, prec); }
  Real(const Real &o)
  {
    mpfr_init2(v_, mpfr_get_prec(o.v_));
    mpfr_set(v_, o.v_, MPFR_RNDN);
  }
  Real &operator=(const Real &o)
  {
    mpfr_set_prec(v_, mpfr_get_prec(o.v_));
    mpfr_set(v_, o.v_, MPFR_RNDN);
    return *this;
  }
  ~Real() { mpfr_clear(v_); }
  mpfr_ptr get() { return v_; }
  mpfr_srcptr get() const { return v_; }

 private:
  mpfr_t v_;
};

// exp^{(h)}(lo) <= x <= exp^{(h)}(hi)
struct Level {
  int h;
  Real lo, hi;
};

void widen_exponent_range()
{
  static const bool done = [] {
    mpfr_set_emax(mpfr_get_emax_max());
    mpfr_set_emin(mpfr_get_emin_min());
    return true;
  }();
  (void)done;
}

void log_of(Real &r, const Integer &z, mpfr_rnd_t rnd)
{
  mpfr_set_z(r.get(), z.get_mpz_t(), rnd);
  mpfr_log(r.get(), r.get(), rnd);
}

Level eval(const SymbolicSize &x, mpfr_prec_t prec)
{
  if (x.is_literal()) {
    Level l{0, Real(prec), Real(prec)};
    mpfr_set_z(l.lo.get(), x.literal().get_mpz_t(), MPFR_RNDD);
    mpfr_set_z(l.hi.get(), x.literal().get_mpz_t(), MPFR_RNDU);
    return l;
  }

  Level e = eval(x.exponent(), prec);
  Real logc_lo(prec), logc_hi(prec), logb_lo(prec), logb_hi(prec);
  log_of(logc_lo, x.coeff(), MPFR_RNDD);
  log_of(logc_hi, x.coeff(), MPFR_RNDU);
  log_of(logb_lo, Integer(x.base()), MPFR_RNDD);
  log_of(logb_hi, Integer(x.base()), MPFR_RNDU);

  if (e.h == 0) {
    // log x = log c + E log b
    Level l{0, Real(prec), Real(prec)};
    Real ilo(prec), ihi(prec);
    mpfr_mul(ilo.get(), e.lo.get(), logb_lo.get(), MPFR_RNDD);
    mpfr_add(ilo.get(), ilo.get(), logc_lo.get(), MPFR_RNDD);
    mpfr_mul(ihi.get(), e.hi.get(), logb_hi.get(), MPFR_RNDU);
    mpfr_add(ihi.get(), ihi.get(), logc_hi.get(), MPFR_RNDU);
    mpfr_exp(l.hi.get(), ihi.get(), MPFR_RNDU);
    if (mpfr_inf_p(l.hi.get())) {
      l.h = 1;
      l.lo = ilo;
      l.hi = ihi;
      return l;
    }
    mpfr_exp(l.lo.get(), ilo.get(), MPFR_RNDD);
    return l;
  }

  Level l{e.h + 1, Real(prec), Real(prec)};
  if (e.h == 1) {
    // log log x = L + log(log b + log c / E) with E = exp(L)
    Real t(prec);
    mpfr_log(t.get(), logb_lo.get(), MPFR_RNDD);
    mpfr_add(l.lo.get(), e.lo.get(), t.get(), MPFR_RNDD);
    mpfr_neg(t.get(), e.lo.get(), MPFR_RNDU);
    mpfr_exp(t.get(), t.get(), MPFR_RNDU);
    mpfr_mul(t.get(), t.get(), logc_hi.get(), MPFR_RNDU);
    mpfr_add(t.get(), t.get(), logb_hi.get(), MPFR_RNDU);
    mpfr_log(t.get(), t.get(), MPFR_RNDU);
    mpfr_add(l.hi.get(), e.hi.get(), t.get(), MPFR_RNDU);
    return l;
  }

  // Deeper towers: log^{(h)} x differs from L by at most |log kappa| / Z,
  // kappa in [log b, log b + log c], Z = exp^{(h-1)}(L.lo).
  if (mpfr_cmp_ui(e.lo.get(), 2) < 0)
    throw InvalidArgument("tower too shallow for its height; cannot bound " + x.to_string());
  Real a1(prec), a2(prec), eta(prec), z(prec);
  mpfr_log(a1.get(), logb_lo.get(), MPFR_RNDD);
  mpfr_abs(a1.get(), a1.get(), MPFR_RNDU);
  mpfr_add(a2.get(), logb_hi.get(), logc_hi.get(), MPFR_RNDU);
  mpfr_log(a2.get(), a2.get(), MPFR_RNDU);
  mpfr_abs(a2.get(), a2.get(), MPFR_RNDU);
  mpfr_max(eta.get(), a1.get(), a2.get(), MPFR_RNDU);
  mpfr_set(z.get(), e.lo.get(), MPFR_RNDD);
  for (int i = 0; i < e.h - 1 && !mpfr_inf_p(z.get()); ++i)
    mpfr_exp(z.get(), z.get(), MPFR_RNDD);
  if (mpfr_inf_p(z.get()))
    mpfr_set_ui_2exp(eta.get(), 1, mpfr_get_emin(), MPFR_RNDU);
  else
    mpfr_div(eta.get(), eta.get(), z.get(), MPFR_RNDU);
  mpfr_sub(l.lo.get(), e.lo.get(), eta.get(), MPFR_RNDD);
  mpfr_add(l.hi.get(), e.hi.get(), eta.get(), MPFR_RNDU);
  return l;
}

void raise(Level &l, int h)
{
  for (; l.h < h; ++l.h) {
    if (mpfr_sgn(l.lo.get()) <= 0)
      mpfr_set_inf(l.lo.get(), -1);
    else
      mpfr_log(l.lo.get(), l.lo.get(), MPFR_RNDD);
    mpfr_log(l.hi.get(), l.hi.get(), MPFR_RNDU);
  }
}

} // namespace

SymbolicSize::SymbolicSize(Integer value) : coeff_(std::move(value))
{
  if (coeff_ < 0)
    throw InvalidArgument("symbolic sizes are nonnegative");
}

SymbolicSize SymbolicSize::power(Integer coeff, unsigned long base, SymbolicSize exponent)
{
  if (coeff < 1 || base < 2)
    throw InvalidArgument("tower needs coeff >= 1 and base >= 2");
  if (exponent.is_literal()) {
    const Integer &e = exponent.literal();
    // upper bound on the bit length of coeff * base^e
    unsigned long per = (base & (base - 1)) == 0 ? std::countr_zero(base)
                                                 : std::bit_width(base);
    Integer bits = e * per + static_cast<unsigned long>(mpz_sizeinbase(coeff.get_mpz_t(), 2));
    if (bits <= kMaterializeBits) {
      Integer v;
      mpz_ui_pow_ui(v.get_mpz_t(), base, e.get_ui());
      return SymbolicSize(coeff * v);
    }
  }
  SymbolicSize s;
  s.coeff_ = std::move(coeff);
  s.base_ = base;
  s.exponent_ = std::make_shared<const SymbolicSize>(std::move(exponent));
  return s;
}

const Integer &SymbolicSize::literal() const
{
  if (!is_literal())
    throw InvalidArgument(to_string() + " is not a literal");
  return coeff_;
}

std::optional<Integer> SymbolicSize::value() const
{
  if (is_literal())
    return coeff_;
  return std::nullopt;
}

const SymbolicSize &SymbolicSize::exponent() const
{
  if (!exponent_)
    throw InvalidArgument("a literal has no exponent");
  return *exponent_;
}

SymbolicSize SymbolicSize::times(const Integer &k) const
{
  if (k < 0)
    throw InvalidArgument("negative multiplier");
  if (is_literal() || k == 0)
    return SymbolicSize(is_literal() ? coeff_ * k : Integer(0));
  return power(coeff_ * k, base_, *exponent_);
}

std::optional<Integer> SymbolicSize::materialize(std::uint64_t max_bits) const
{
  if (is_literal()) {
    if (mpz_sizeinbase(coeff_.get_mpz_t(), 2) > max_bits)
      return std::nullopt;
    return coeff_;
  }
  auto e = exponent_->materialize(64);
  if (!e || !e->fits_ulong_p())
    return std::nullopt;
  Integer bits = *e * static_cast<unsigned long>(mpz_sizeinbase(Integer(base_).get_mpz_t(), 2) - 1) +
                 static_cast<unsigned long>(mpz_sizeinbase(coeff_.get_mpz_t(), 2) - 1);
  if (bits > Integer(std::to_string(max_bits)))
    return std::nullopt;
  Integer v;
  mpz_ui_pow_ui(v.get_mpz_t(), base_, e->get_ui());
  v *= coeff_;
  if (mpz_sizeinbase(v.get_mpz_t(), 2) > max_bits)
    return std::nullopt;
  return v;
}

std::string SymbolicSize::to_string() const
{
  if (is_literal())
    return coeff_.get_str();
  std::string e = exponent_->to_string();
  if (!exponent_->is_literal())
    e = "(" + e + ")";
  return (coeff_ == 1 ? "" : coeff_.get_str() + "*") + std::to_string(base_) + "^" + e;
}

bool SymbolicSize::structurally_equal(const SymbolicSize &o) const
{
  if (is_literal() != o.is_literal() || coeff_ != o.coeff_)
    return false;
  return is_literal() || (base_ == o.base_ && exponent_->structurally_equal(*o.exponent_));
}

std::strong_ordering operator<=>(const SymbolicSize &a, const SymbolicSize &b)
{
  if (a.is_literal() && b.is_literal()) {
    int c = cmp(a.coeff_, b.coeff_);
    return c < 0 ? std::strong_ordering::less
                 : c > 0 ? std::strong_ordering::greater : std::strong_ordering::equal;
  }
  if (a.structurally_equal(b))
    return std::strong_ordering::equal;

  widen_exponent_range();
  for (mpfr_prec_t prec : {128, 512, 2048, 8192}) {
    Level la = eval(a, prec), lb = eval(b, prec);
    int h = std::max(la.h, lb.h);
    raise(la, h);
    raise(lb, h);
    if (mpfr_less_p(la.hi.get(), lb.lo.get()))
      return std::strong_ordering::less;
    if (mpfr_greater_p(la.lo.get(), lb.hi.get()))
      return std::strong_ordering::greater;
  }
  constexpr std::uint64_t kFallbackBits = std::uint64_t{1} << 26;
  auto va = a.materialize(kFallbackBits), vb = b.materialize(kFallbackBits);
  if (va && vb)
    return SymbolicSize(*va) <=> SymbolicSize(*vb);
  throw InvalidArgument("cannot decide the order of " + a.to_string() + " and " + b.to_string());
}

} // namespace folner
