#include "lml/scalar.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace lml {

namespace {
ScalarPolicy g_policy = ScalarPolicy::Auto;
}

void set_scalar_policy(ScalarPolicy p) { g_policy = p; }
ScalarPolicy scalar_policy() { return g_policy; }

Scalar Scalar::from_rat(const Rat& q) {
  if (q < 0) throw std::domain_error("Scalar magnitudes are nonnegative");
  if (q == 0) return Scalar();
  if (scalar_policy() == ScalarPolicy::Log) return from_log2(log2_rat(q));
  Scalar s;
  s.coeff_ = q;
  return s;
}

Scalar Scalar::from_log2(double lg) {
  if (std::isnan(lg)) throw std::domain_error("Scalar from NaN log");
  if (lg == -std::numeric_limits<double>::infinity()) return Scalar();
  if (scalar_policy() == ScalarPolicy::Exact)
    throw std::runtime_error("exact mode: log-tier value requested");
  Scalar s;
  s.kind_ = Kind::Log;
  s.log2_ = lg;
  return s;
}

Scalar Scalar::pow2(long n) {
  if (scalar_policy() == ScalarPolicy::Log)
    return from_log2(static_cast<double>(n));
  Scalar s;
  s.coeff_ = pow_rat(Rat(2), n);
  return s;
}

Scalar Scalar::rat_pow(const Rat& base, const Rat& exp) {
  if (base <= 0) throw std::domain_error("rat_pow needs a positive base");
  return from_rat(base).pow(exp);
}

const Rat& Scalar::as_rat() const {
  if (!is_rational()) throw std::logic_error("Scalar is not a plain rational");
  return coeff_;
}

double Scalar::exact_log2() const {
  double lg = log2_rat(coeff_);
  for (const Factor& f : factors_)
    lg += lml::to_double(f.exp) * log2_int(f.base);
  return lg;
}

double Scalar::log2() const {
  if (kind_ == Kind::Log) return log2_;
  if (coeff_ == 0) return -std::numeric_limits<double>::infinity();
  return exact_log2();
}

double Scalar::to_double() const {
  if (is_rational()) return coeff_.get_d();
  return std::exp2(log2());
}

// Keeps the factor list canonical: bases >= 2, not perfect powers, strictly
// increasing, exponents in (0,1). Integer exponent parts are absorbed into
// the rational coefficient.
void Scalar::insert_factor(Int base, Rat e) {
  if (base <= 0) throw std::logic_error("factor base must be positive");
  if (base == 1 || e == 0) return;

  if (is_power_of_two(base)) {
    long k = static_cast<long>(mpz_sizeinbase(base.get_mpz_t(), 2)) - 1;
    if (k > 1) {
      e *= k;
      base = 2;
    }
  } else {
    // Largest k with base = root^k leaves a root that is not itself a
    // perfect power.
    long kmax = static_cast<long>(mpz_sizeinbase(base.get_mpz_t(), 2)) - 1;
    for (long k = kmax; k >= 2; --k) {
      Int root, rem;
      mpz_rootrem(root.get_mpz_t(), rem.get_mpz_t(), base.get_mpz_t(),
                  static_cast<unsigned long>(k));
      if (rem == 0) {
        base = root;
        e *= k;
        break;
      }
    }
  }

  Int fl = floor_rat(e);
  if (fl != 0) {
    if (!fl.fits_slong_p()) throw std::overflow_error("factor exponent blew up");
    long k = fl.get_si();
    Int p = pow_int(base, static_cast<unsigned long>(k > 0 ? k : -k));
    if (k > 0)
      coeff_ *= p;
    else
      coeff_ /= p;
    e -= Rat(fl);
  }
  if (e == 0) return;

  auto it = std::lower_bound(
      factors_.begin(), factors_.end(), base,
      [](const Factor& f, const Int& b) { return f.base < b; });
  if (it != factors_.end() && it->base == base) {
    Rat total = it->exp + e;
    factors_.erase(it);
    insert_factor(base, total);
  } else {
    factors_.insert(it, Factor{base, e});
  }
}

// Splits factor bases until they are pairwise coprime, merging as it goes.
// After this, the value is rational iff the factor list is empty, which is
// what equality and exact addition test for. Terminates because every split
// strictly decreases the product of the bases.
void Scalar::refine_coprime() {
  if (kind_ != Kind::Exact) return;
  bool changed = true;
  while (changed) {
    changed = false;
    for (size_t i = 0; i + 1 < factors_.size() && !changed; ++i) {
      for (size_t j = i + 1; j < factors_.size() && !changed; ++j) {
        Int g = gcd(factors_[i].base, factors_[j].base);
        if (g == 1) continue;
        Factor fi = factors_[i];
        Factor fj = factors_[j];
        factors_.erase(factors_.begin() + j);
        factors_.erase(factors_.begin() + i);
        insert_factor(g, fi.exp + fj.exp);
        insert_factor(fi.base / g, fi.exp);
        insert_factor(fj.base / g, fj.exp);
        changed = true;
      }
    }
  }
}

Scalar Scalar::mul(const Scalar& o) const {
  if (is_zero() || o.is_zero()) return zero();
  if (kind_ == Kind::Exact && o.kind_ == Kind::Exact) {
    Scalar r = *this;
    r.coeff_ *= o.coeff_;
    for (const Factor& f : o.factors_) r.insert_factor(f.base, f.exp);
    return r;
  }
  return from_log2(log2() + o.log2());
}

Scalar Scalar::div(const Scalar& o) const {
  if (o.is_zero()) throw std::domain_error("division by zero Scalar");
  if (is_zero()) return zero();
  if (kind_ == Kind::Exact && o.kind_ == Kind::Exact) {
    Scalar r = *this;
    r.coeff_ /= o.coeff_;
    for (const Factor& f : o.factors_) r.insert_factor(f.base, -f.exp);
    return r;
  }
  return from_log2(log2() - o.log2());
}

Scalar Scalar::mul_rat(const Rat& c) const {
  if (c < 0) throw std::domain_error("Scalar magnitudes are nonnegative");
  if (c == 0 || is_zero()) return zero();
  if (kind_ == Kind::Exact) {
    Scalar r = *this;
    r.coeff_ *= c;
    return r;
  }
  return from_log2(log2_ + log2_rat(c));
}

Scalar Scalar::add(const Scalar& o) const {
  if (is_zero()) return o;
  if (o.is_zero()) return *this;
  if (kind_ == Kind::Exact && o.kind_ == Kind::Exact) {
    Scalar q = o.div(*this);
    q.refine_coprime();
    if (q.factors_.empty()) return mul_rat(1 + q.coeff_);
  }
  if (scalar_policy() == ScalarPolicy::Exact)
    throw std::runtime_error("exact mode: sum of incommensurable magnitudes");
  double a = log2();
  double b = o.log2();
  if (a < b) std::swap(a, b);
  return from_log2(a + std::log2(1.0 + std::exp2(b - a)));
}

Scalar Scalar::sub(const Scalar& o) const {
  if (o.is_zero()) return *this;
  if (is_zero()) throw std::domain_error("Scalar subtraction went negative");
  if (kind_ == Kind::Exact && o.kind_ == Kind::Exact) {
    Scalar q = o.div(*this);
    q.refine_coprime();
    if (q.factors_.empty()) {
      Rat c = 1 - q.coeff_;
      if (c < 0) throw std::domain_error("Scalar subtraction went negative");
      return mul_rat(c);
    }
  }
  if (scalar_policy() == ScalarPolicy::Exact)
    throw std::runtime_error(
        "exact mode: difference of incommensurable magnitudes");
  double a = log2();
  double b = o.log2();
  if (a == b) return zero();
  if (a < b) throw std::domain_error("Scalar subtraction went negative");
  return from_log2(a + std::log2(1.0 - std::exp2(b - a)));
}

Scalar Scalar::pow(const Rat& e) const {
  if (is_zero()) {
    if (e > 0) return zero();
    if (e == 0) return one();
    throw std::domain_error("zero Scalar to a negative power");
  }
  if (e == 0) return one();
  if (kind_ == Kind::Log) return from_log2(log2_ * lml::to_double(e));
  Scalar r;
  r.coeff_ = 1;
  r.insert_factor(Int(coeff_.get_num()), e);
  r.insert_factor(Int(coeff_.get_den()), -e);
  for (const Factor& f : factors_) r.insert_factor(f.base, f.exp * e);
  return r;
}

int Scalar::cmp(const Scalar& o) const {
  bool za = is_zero();
  bool zb = o.is_zero();
  if (za || zb) {
    if (za && zb) return 0;
    return za ? -1 : 1;
  }
  if (kind_ == Kind::Exact && o.kind_ == Kind::Exact) {
    Scalar q = div(o);
    q.refine_coprime();
    if (q.factors_.empty()) {
      if (q.coeff_ > 1) return 1;
      if (q.coeff_ < 1) return -1;
      return 0;
    }
    double lg = q.exact_log2();
    return lg > 0 ? 1 : (lg < 0 ? -1 : 0);
  }
  double a = log2();
  double b = o.log2();
  return a > b ? 1 : (a < b ? -1 : 0);
}

std::string Scalar::str() const {
  if (kind_ == Kind::Log) {
    std::ostringstream os;
    os.precision(15);
    os << "2^" << log2_;
    return os.str();
  }
  if (coeff_ == 0) return "0";
  std::string s = rat_str(coeff_);
  for (const Factor& f : factors_)
    s += " * " + f.base.get_str() + "^(" + rat_str(f.exp) + ")";
  return s;
}

}  // namespace lml
