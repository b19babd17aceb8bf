#include "lml/rational.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>

namespace lml {

namespace {

bool all_digits(const std::string& s) {
  return !s.empty() && std::all_of(s.begin(), s.end(), [](unsigned char c) {
    return std::isdigit(c) != 0;
  });
}

}  // namespace

Rat parse_rat(const std::string& text) {
  auto fail = [&text]() {
    throw std::invalid_argument("cannot parse rational: '" + text + "'");
  };

  std::string s = text;
  s.erase(std::remove_if(s.begin(), s.end(),
                         [](unsigned char c) { return std::isspace(c) != 0; }),
          s.end());
  if (s.empty()) fail();

  bool neg = false;
  if (s[0] == '+' || s[0] == '-') {
    neg = s[0] == '-';
    s.erase(0, 1);
  }

  Rat out;
  if (auto slash = s.find('/'); slash != std::string::npos) {
    std::string num = s.substr(0, slash);
    std::string den = s.substr(slash + 1);
    if (!all_digits(num) || !all_digits(den)) fail();
    Int d(den, 10);
    if (d == 0) fail();
    out = Rat(Int(num, 10), d);
    out.canonicalize();
  } else if (auto dot = s.find('.'); dot != std::string::npos) {
    std::string ip = s.substr(0, dot);
    std::string fp = s.substr(dot + 1);
    if (ip.empty()) ip = "0";
    if (!all_digits(ip) || (!fp.empty() && !all_digits(fp))) fail();
    out = Rat(Int(ip + fp, 10), pow_int(10, fp.size()));
    out.canonicalize();
  } else {
    if (!all_digits(s)) fail();
    out = Rat(Int(s, 10));
  }
  return neg ? Rat(-out) : out;
}

long floor_log2(const Rat& q) {
  if (q <= 0) throw std::domain_error("floor_log2 of non-positive rational");
  // num in [2^(bn-1), 2^bn) and den in [2^(bd-1), 2^bd) place q strictly
  // inside (2^(e-1), 2^(e+1)) for e = bn - bd, so only e and e-1 can be the
  // floor.
  long bn = static_cast<long>(mpz_sizeinbase(q.get_num_mpz_t(), 2));
  long bd = static_cast<long>(mpz_sizeinbase(q.get_den_mpz_t(), 2));
  long e = bn - bd;
  return q >= pow_rat(Rat(2), e) ? e : e - 1;
}

Rat pow_rat(const Rat& q, long e) {
  if (e == 0) return Rat(1);
  if (q == 0) {
    if (e < 0) throw std::domain_error("zero to a negative power");
    return Rat(0);
  }
  unsigned long m =
      e > 0 ? static_cast<unsigned long>(e)
            : static_cast<unsigned long>(-(e + 1)) + 1ul;
  Int n = pow_int(Int(q.get_num()), m);
  Int d = pow_int(Int(q.get_den()), m);
  Rat r = e > 0 ? Rat(n, d) : Rat(d, n);
  r.canonicalize();
  return r;
}

double log2_int(const Int& n) {
  if (n <= 0) throw std::domain_error("log2 of non-positive integer");
  long exp = 0;
  double mant = mpz_get_d_2exp(&exp, n.get_mpz_t());
  return static_cast<double>(exp) + std::log2(mant);
}

std::string rat_str(const Rat& q) {
  if (q.get_den() == 1) return q.get_num().get_str();
  return q.get_num().get_str() + "/" + q.get_den().get_str();
}

}  // namespace lml
