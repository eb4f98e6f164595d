#include "lucas/intmath.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <mutex>

#include <gmp.h>

namespace lucas {

u64 mod_pow(u64 base, u64 exponent, u64 modulus) {
    if (modulus == 1) return 0;
    u64 result = 1;
    base %= modulus;
    while (exponent != 0) {
        if ((exponent & 1U) != 0) result = mul_mod(result, base, modulus);
        base = mul_mod(base, base, modulus);
        exponent >>= 1;
    }
    return result;
}

BigInt mod_pow(const BigInt& base, const BigInt& exponent, const BigInt& modulus) {
    if (modulus < 1) throw std::invalid_argument("mod_pow: modulus must be positive");
    if (exponent < 0) throw std::invalid_argument("mod_pow: negative exponent");
    if (modulus == 1) return 0;
    return boost::multiprecision::powm(mod_floor(base, modulus), exponent, modulus);
}

int jacobi(const BigInt& a, const BigInt& n) {
    if (n <= 0 || low_bits(n, 1) == 0)
        throw std::invalid_argument("jacobi: modulus must be odd and positive, got " + n.str());
    return detail::jacobi_reduced<BigInt>(mod_floor(a, n), n);
}

int jacobi(i64 a, u64 n) {
    if (n == 0 || (n & 1U) == 0)
        throw std::invalid_argument("jacobi: modulus must be odd and positive");
    return detail::jacobi_reduced<u64>(mod_floor(a, n), n);
}

BigInt isqrt_newton(const BigInt& n) {
    if (n < 0) throw std::invalid_argument("isqrt_newton: negative argument");
    if (n < 2) return n;
    // 2^ceil(bits/2) >= sqrt(n), so the iteration decreases monotonically.
    BigInt x = BigInt(1) << static_cast<unsigned>((bit_length(n) + 1) / 2);
    for (;;) {
        BigInt y = (x + n / x) >> 1;
        if (y >= x) break;
        x = std::move(y);
    }
    while (x * x > n) --x;
    while ((x + 1) * (x + 1) <= n) ++x;
    return x;
}

u64 isqrt_newton(u64 n) {
    if (n < 2) return n;
    u64 x = u64{1} << ((bit_length(n) + 1) / 2);
    for (;;) {
        const u64 y = (x + n / x) >> 1;
        if (y >= x) break;
        x = y;
    }
    while (static_cast<unsigned __int128>(x) * x > n) --x;
    while (static_cast<unsigned __int128>(x + 1) * (x + 1) <= n) ++x;
    return x;
}

std::vector<u64> sieve_primes(u64 limit, u64 max_limit) {
    if (limit > max_limit)
        throw BudgetExceeded("sieve_primes: limit " + std::to_string(limit) +
                             " exceeds budget " + std::to_string(max_limit));
    std::vector<u64> primes;
    if (limit < 2) return primes;
    // Odd-only sieve: index i stands for 2i+1.
    const u64 half = (limit - 1) / 2 + 1;
    std::vector<bool> composite(half, false);
    for (u64 i = 1; (2 * i + 1) * (2 * i + 1) <= limit; ++i) {
        if (composite[i]) continue;
        const u64 p = 2 * i + 1;
        for (u64 j = p * p / 2; j < half; j += p) composite[j] = true;
    }
    primes.reserve(static_cast<std::size_t>(limit / std::max(1.0, std::log(double(limit)) - 1.1)));
    primes.push_back(2);
    for (u64 i = 1; i < half; ++i)
        if (!composite[i]) primes.push_back(2 * i + 1);
    return primes;
}

namespace {

// Process-wide prime table that only ever grows.
class PrimeTable {
public:
    // Snapshots stay valid after the table grows.
    std::shared_ptr<const std::vector<u64>> up_to(u64 limit) {
        std::lock_guard lock(mutex_);
        if (limit > covered_) {
            covered_ = std::max(limit, covered_ * 2);
            primes_ = std::make_shared<const std::vector<u64>>(sieve_primes(covered_, u64{1} << 32));
        }
        return primes_;
    }

private:
    std::mutex mutex_;
    u64 covered_ = 0;
    std::shared_ptr<const std::vector<u64>> primes_;
};

PrimeTable& prime_table() {
    static PrimeTable table;
    return table;
}

}  // namespace

u64 nth_odd_prime(std::size_t l) {
    if (l == 0) throw std::invalid_argument("nth_odd_prime: l must be positive");
    // The l-th odd prime is the (l+1)-th prime; Rosser's bound p_n < n(ln n + ln ln n), n >= 6.
    const double n = static_cast<double>(l + 1);
    const u64 bound = n < 6 ? 15 : static_cast<u64>(n * (std::log(n) + std::log(std::log(n)))) + 1;
    const auto primes = prime_table().up_to(bound);
    return primes->at(l);
}

namespace {

bool strong_probable_prime_u64(u64 n, u64 a) {
    a %= n;
    if (a == 0) return true;
    u64 d = n - 1;
    unsigned s = 0;
    while ((d & 1U) == 0) {
        d >>= 1;
        ++s;
    }
    u64 x = mod_pow(a, d, n);
    if (x == 1 || x == n - 1) return true;
    for (unsigned i = 1; i < s; ++i) {
        x = mul_mod(x, x, n);
        if (x == n - 1) return true;
    }
    return false;
}

bool strong_probable_prime_big(const BigInt& n, const BigInt& a) {
    const BigInt nm1 = n - 1;
    const auto split = two_adic_split(nm1);
    BigInt x = boost::multiprecision::powm(a, split.q, n);
    if (x == 1 || x == nm1) return true;
    for (unsigned i = 1; i < split.kappa; ++i) {
        x = x * x % n;
        if (x == nm1) return true;
    }
    return false;
}

constexpr u64 kSmallPrimes[] = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41};

}  // namespace

bool is_prime_oracle(u64 n) {
    if (n < 2) return false;
    for (u64 p : kSmallPrimes) {
        if (n == p) return true;
        if (n % p == 0) return false;
    }
    if (n < 41 * 41) return true;
    // Sinclair's seven bases: no strong pseudoprime below 2^64 passes all of them.
    for (u64 a : {2ULL, 325ULL, 9375ULL, 28178ULL, 450775ULL, 9780504ULL, 1795265022ULL})
        if (!strong_probable_prime_u64(n, a)) return false;
    return true;
}

bool is_prime_oracle(const BigInt& n) {
    if (n < 2) return false;
    if (n <= std::numeric_limits<u64>::max()) return is_prime_oracle(n.convert_to<u64>());
    for (u64 p : kSmallPrimes)
        if (boost::multiprecision::integer_modulus(n, static_cast<unsigned>(p)) == 0) return false;
    // The first 13 primes as bases are deterministic below psi_13.
    static const BigInt psi13("3317044064679887385961981");
    if (n < psi13) {
        for (u64 p : kSmallPrimes)
            if (!strong_probable_prime_big(n, BigInt(p))) return false;
        return true;
    }
    return mpz_probab_prime_p(n.backend().data(), 40) != 0;
}

BigInt Factorization::value() const {
    BigInt v = 1;
    for (const auto& e : entries) v *= boost::multiprecision::pow(e.prime, e.exponent);
    return v;
}

unsigned Factorization::total() const {
    unsigned t = 0;
    for (const auto& e : entries) t += e.exponent;
    return t;
}

namespace {

// Brent's cycle-finding variant of Pollard rho, f(x) = x^2 + c.
template <class Int>
Int brent_split(const Int& n, const Int& c, Int y, u64 max_iterations) {
    const u64 m = 128;
    Int g = 1, q = 1, x = 0, ys = 0;
    u64 iterations = 0;
    u64 r = 1;
    while (g == 1) {
        x = y;
        for (u64 i = 0; i < r; ++i) y = add_mod(mul_mod(y, y, n), c, n);
        u64 k = 0;
        while (k < r && g == 1) {
            ys = y;
            const u64 steps = std::min(m, r - k);
            for (u64 i = 0; i < steps; ++i) {
                y = add_mod(mul_mod(y, y, n), c, n);
                q = mul_mod(q, x > y ? Int(x - y) : Int(y - x), n);
            }
            g = gcd(q, n);
            k += steps;
            iterations += steps;
            if (iterations > max_iterations) return 0;
        }
        r *= 2;
    }
    if (g == n) {
        do {
            ys = add_mod(mul_mod(ys, ys, n), c, n);
            g = gcd(x > ys ? Int(x - ys) : Int(ys - x), n);
        } while (g == 1);
    }
    return g;
}

void split_into(const BigInt& n, const FactorConfig& config, Rng& rng, std::vector<BigInt>& out) {
    if (n == 1) return;
    if (is_prime_oracle(n)) {
        out.push_back(n);
        return;
    }
    const BigInt root = isqrt_newton(n);
    if (root * root == n) {
        split_into(root, config, rng, out);
        split_into(root, config, rng, out);
        return;
    }
    for (unsigned attempt = 0; attempt < config.rho_attempts; ++attempt) {
        BigInt d;
        if (n <= std::numeric_limits<u64>::max()) {
            const u64 nn = n.convert_to<u64>();
            const u64 c = 1 + uniform_below(nn - 1, rng);
            const u64 y = uniform_below(nn, rng);
            d = brent_split<u64>(nn, c, y, config.rho_iterations);
        } else {
            const BigInt c = 1 + uniform_below(BigInt(n - 1), rng);
            const BigInt y = uniform_below(n, rng);
            d = brent_split<BigInt>(n, c, y, config.rho_iterations);
        }
        if (d > 1 && d < n) {
            split_into(d, config, rng, out);
            split_into(n / d, config, rng, out);
            return;
        }
    }
    throw FactorizationError("factorize: could not split " + n.str() + " within the rho budget");
}

}  // namespace

Factorization factorize(const BigInt& n, const FactorConfig& config) {
    if (n < 2) throw std::invalid_argument("factorize: n must be at least 2");
    std::vector<BigInt> primes;
    BigInt rest = n;

    const auto table = prime_table().up_to(std::max<u64>(config.trial_limit, 100));
    for (u64 p : *table) {
        if (p > config.trial_limit) break;
        if (BigInt(p) * p > rest) break;
        while (boost::multiprecision::integer_modulus(rest, static_cast<unsigned long>(p)) == 0) {
            rest /= p;
            primes.emplace_back(p);
        }
    }
    if (rest > 1) {
        Rng rng(config.seed);
        split_into(rest, config, rng, primes);
    }

    std::sort(primes.begin(), primes.end());
    Factorization f;
    for (auto& p : primes) {
        if (!f.entries.empty() && f.entries.back().prime == p)
            ++f.entries.back().exponent;
        else
            f.entries.push_back({std::move(p), 1});
    }
    return f;
}

Factorization factorize(u64 n, const FactorConfig& config) {
    if (n < 2) throw std::invalid_argument("factorize: n must be at least 2");
    if (n >= (u64{1} << 40)) return factorize(BigInt(n), config);
    // Below 2^40 the table reaches sqrt(n), so whatever survives is prime.
    const auto table = prime_table().up_to(u64{1} << 20);
    Factorization f;
    u64 rest = n;
    for (u64 p : *table) {
        if (p * p > rest) break;
        if (rest % p != 0) continue;
        unsigned e = 0;
        while (rest % p == 0) {
            rest /= p;
            ++e;
        }
        f.entries.push_back({BigInt(p), e});
    }
    if (rest > 1) f.entries.push_back({BigInt(rest), 1});
    return f;
}

u64 uniform_below(u64 bound, Rng& rng) {
    if (bound == 0) throw std::invalid_argument("uniform_below: empty range");
    if (bound == 1) return 0;
    const u64 mask = ~u64{0} >> std::countl_zero(bound - 1);
    for (;;) {
        const u64 x = rng() & mask;
        if (x < bound) return x;
    }
}

BigInt uniform_below(const BigInt& bound, Rng& rng) {
    if (bound <= 0) throw std::invalid_argument("uniform_below: empty range");
    if (bound == 1) return 0;
    const std::size_t bits = bit_length(BigInt(bound - 1));
    const std::size_t words = (bits + 63) / 64;
    const unsigned top_bits = static_cast<unsigned>(bits - 64 * (words - 1));
    for (;;) {
        BigInt x = 0;
        for (std::size_t w = 0; w < words; ++w) {
            u64 word = rng();
            // most significant word first
            if (w == 0 && top_bits < 64) word &= (u64{1} << top_bits) - 1;
            x = (x << 64) | BigInt(word);
        }
        if (x < bound) return x;
    }
}

u64 derive_seed(u64 seed, u64 index) {
    u64 z = seed + 0x9e3779b97f4a7c15ULL * (index + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

}  // namespace lucas
