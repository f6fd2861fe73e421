#include "syz/field.hpp"

#include <stdexcept>

namespace syz {

uint64_t PrimeField::pow(uint64_t a, uint64_t e) const {
  uint64_t r = 1 % p;
  a %= p;
  while (e) {
    if (e & 1) r = mul(r, a);
    a = mul(a, a);
    e >>= 1;
  }
  return r;
}

uint64_t PrimeField::inv(uint64_t a) const {
  if (a == 0) throw std::domain_error("inverse of zero");
  return pow(a, p - 2);
}

namespace {

uint64_t mulmod64(uint64_t a, uint64_t b, uint64_t m) {
  return static_cast<uint64_t>(static_cast<__uint128_t>(a) * b % m);
}

uint64_t powmod64(uint64_t a, uint64_t e, uint64_t m) {
  uint64_t r = 1 % m;
  a %= m;
  while (e) {
    if (e & 1) r = mulmod64(r, a, m);
    a = mulmod64(a, a, m);
    e >>= 1;
  }
  return r;
}

}  // namespace

bool is_prime(uint64_t n) {
  if (n < 2) return false;
  for (uint64_t q : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
    if (n % q == 0) return n == q;
  }
  uint64_t d = n - 1;
  int s = 0;
  while ((d & 1) == 0) {
    d >>= 1;
    ++s;
  }
  // this base set decides primality for every 64-bit integer
  for (uint64_t a : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
    uint64_t x = powmod64(a, d, n);
    if (x == 1 || x == n - 1) continue;
    bool witness = true;
    for (int i = 1; i < s; ++i) {
      x = mulmod64(x, x, n);
      if (x == n - 1) {
        witness = false;
        break;
      }
    }
    if (witness) return false;
  }
  return true;
}

uint64_t default_prime(uint32_t ell) {
  if (ell == 0) throw std::invalid_argument("root order must be >= 1");
  uint64_t n = 1000000;
  while (!(is_prime(n) && (ell == 1 || n % ell == 1))) ++n;
  return n;
}

uint64_t unit_order(const PrimeField& F, uint64_t a) {
  a %= F.p;
  if (a == 0) throw std::domain_error("order of zero");
  uint64_t x = a, ord = 1;
  while (x != 1) {
    x = F.mul(x, a);
    ++ord;
  }
  return ord;
}

PrimeField make_field(uint64_t p, uint32_t ell) {
  if (!is_prime(p)) throw std::invalid_argument("modulus is not prime");
  if (p < 3 || p >= (1ull << 31)) throw std::invalid_argument("prime must lie in [3, 2^31)");
  if (ell == 0) throw std::invalid_argument("root order must be >= 1");
  if (ell > 1 && (p - 1) % ell != 0) throw std::invalid_argument("p is not 1 mod ell");
  PrimeField F{p, ell, 1};
  if (ell > 1) {
    for (uint64_t a = 2; a < p; ++a) {
      uint64_t z = F.pow(a, (p - 1) / ell);
      if (z == 1) continue;
      // exact order ell: z^(ell/q) != 1 for every prime q | ell
      bool exact = true;
      for (uint64_t q = 2; q <= ell; ++q) {
        if (ell % q == 0 && is_prime(q) && F.pow(z, ell / q) == 1) {
          exact = false;
          break;
        }
      }
      if (exact) {
        F.zeta = z;
        return F;
      }
    }
    throw std::runtime_error("no primitive root found");  // unreachable for valid input
  }
  return F;
}

uint64_t Rng::below(uint64_t n) {
  if (n == 0) throw std::invalid_argument("empty range");
  if (n == 1) return 0;
  const uint64_t limit = UINT64_MAX - UINT64_MAX % n;
  uint64_t x;
  do {
    x = gen_();
  } while (x >= limit);
  return x % n;
}

}  // namespace syz
