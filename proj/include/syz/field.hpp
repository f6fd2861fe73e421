#pragma once

#include <cstdint>
#include <random>

namespace syz {

// Arithmetic mod a prime p < 2^31. Elements are uint64_t values in [0, p);
// the headroom lets the elimination code delay reductions safely.
struct PrimeField {
  uint64_t p = 0;
  uint32_t root_order = 1;  // ell
  uint64_t zeta = 1;        // primitive ell-th root of unity; 1 when ell == 1

  uint64_t add(uint64_t a, uint64_t b) const {
    uint64_t s = a + b;
    return s >= p ? s - p : s;
  }
  uint64_t sub(uint64_t a, uint64_t b) const { return a >= b ? a - b : a + (p - b); }
  uint64_t neg(uint64_t a) const { return a == 0 ? 0 : p - a; }
  uint64_t mul(uint64_t a, uint64_t b) const { return a * b % p; }
  uint64_t pow(uint64_t a, uint64_t e) const;
  uint64_t inv(uint64_t a) const;  // a != 0
};

// Deterministic Miller-Rabin, valid for all 64-bit inputs.
bool is_prime(uint64_t n);

// Smallest prime >= 10^6 congruent to 1 mod ell.
uint64_t default_prime(uint32_t ell);

// Checks primality and the congruence p == 1 (mod ell), then fixes the
// lexicographically first primitive ell-th root of unity. Throws on bad input.
PrimeField make_field(uint64_t p, uint32_t ell = 1);

// Multiplicative order of a in F_p^*.
uint64_t unit_order(const PrimeField& F, uint64_t a);

// mt19937_64 plus rejection sampling. std::uniform_int_distribution is
// implementation-defined, so draws go through below() to keep every run
// reproducible across platforms.
class Rng {
 public:
  explicit Rng(uint64_t seed) : gen_(seed) {}
  uint64_t below(uint64_t n);  // uniform on [0, n), n >= 1
  uint64_t field_element(const PrimeField& F) { return below(F.p); }
  uint64_t nonzero(const PrimeField& F) { return 1 + below(F.p - 1); }

 private:
  std::mt19937_64 gen_;
};

}  // namespace syz
