"""Chebyshev polynomial evaluation over Z_N and security-parameter generation.

T_n(x) mod N is computed with O(bits(n)) 2x2 matrix multiplications by
binary exponentiation of the stepping matrix [[2x, -1], [1, 0]]:

    [T_{n+1}; T_n] = [[2x, -1], [1, 0]]^n . [T_1; T_0],  T_1 = x, T_0 = 1

A direct O(n) recurrence is kept as a test oracle, together with a
brute-force discrete-log oracle for toy moduli.

Exponents (polynomial degrees) are unbounded non-negative integers and are
never reduced; the semigroup law T_u(T_v(x)) = T_{uv}(x) then holds exactly
for integer products.
"""

from dataclasses import dataclass

ORACLE_DEGREE_LIMIT = 1 << 20
ORACLE_MODULUS_LIMIT = 1 << 24
TRIAL_DIVISION_BOUND = 100_000

# Deterministic Miller-Rabin witness bound for the first 13 primes
# (Sorenson & Webster).
_DETERMINISTIC_BOUND = 3_317_044_064_679_887_385_961_981
_DETERMINISTIC_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41)

MILLER_RABIN_ROUNDS = 64


class ModulusError(ValueError):
    """Modulus fails a precondition (not odd, too small, wrong certificate)."""


class OracleRangeError(ValueError):
    """A test-only oracle was called outside its supported input range."""


class SearchExhausted(RuntimeError):
    """Parameter search gave up after its attempt budget."""


# ---------------------------------------------------------------------------
# primality

def _small_primes(bound=TRIAL_DIVISION_BOUND):
    sieve = bytearray([1]) * (bound + 1)
    sieve[0] = sieve[1] = 0
    for i in range(2, int(bound ** 0.5) + 1):
        if sieve[i]:
            sieve[i * i:: i] = bytearray(len(sieve[i * i:: i]))
    return [i for i in range(2, bound + 1) if sieve[i]]


_SIEVE = None


def small_primes():
    global _SIEVE
    if _SIEVE is None:
        _SIEVE = _small_primes()
    return _SIEVE


def _miller_rabin_witness(n, a, d, r):
    x = pow(a, d, n)
    if x == 1 or x == n - 1:
        return False
    for _ in range(r - 1):
        x = (x * x) % n
        if x == n - 1:
            return False
    return True  # a witnesses compositeness


def is_probable_prime(n, rounds=MILLER_RABIN_ROUNDS):
    """Miller-Rabin primality test.

    Deterministic witness set below ~3.3e24, otherwise `rounds` random bases
    (seeded from n, so the answer is reproducible).
    """
    if n < 2:
        return False
    for p in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47):
        if n == p:
            return True
        if n % p == 0:
            return False
    d, r = n - 1, 0
    while d % 2 == 0:
        d //= 2
        r += 1
    if n < _DETERMINISTIC_BOUND:
        bases = _DETERMINISTIC_BASES
    else:
        import random
        rng = random.Random(n)
        bases = [rng.randrange(2, n - 1) for _ in range(rounds)]
    return not any(_miller_rabin_witness(n, a, d, r) for a in bases)


# ---------------------------------------------------------------------------
# 2x2 matrices over Z_N, row-major tuples (a, b, c, d)

MAT_IDENTITY = (1, 0, 0, 1)


def mat_mul(m1, m2, N):
    a, b, c, d = m1
    e, f, g, h = m2
    return (
        (a * e + b * g) % N,
        (a * f + b * h) % N,
        (c * e + d * g) % N,
        (c * f + d * h) % N,
    )


def mat_pow(m, n, N):
    """m^n mod N by square-and-multiply; m^0 is the identity."""
    if n < 0:
        raise ValueError("negative matrix power")
    result = MAT_IDENTITY
    base = tuple(v % N for v in m)
    while n:
        if n & 1:
            result = mat_mul(result, base, N)
        n >>= 1
        if n:
            base = mat_mul(base, base, N)
    return result


def _check_inputs(n, x, N, certificate=None):
    if N < 3 or N % 2 == 0:
        raise ModulusError(f"modulus must be an odd prime >= 3, got {N}")
    if certificate is not None and certificate.N != N:
        raise ModulusError("modulus does not match the supplied certificate")
    if not 0 <= x < N:
        raise ValueError(f"x must satisfy 0 <= x < N, got x={x}")
    if n < 0:
        raise ValueError(f"degree must be non-negative, got {n}")


def cheb_eval(n, x, N, certificate=None):
    """T_n(x) mod N via matrix binary exponentiation.

    Returns the second component of [[2x,-1],[1,0]]^n . [x, 1]^T.
    """
    _check_inputs(n, x, N, certificate)
    if n == 0:
        return 1 % N
    _, _, c, d = mat_pow((2 * x % N, N - 1, 1, 0), n, N)
    return (c * x + d) % N


def cheb_eval_recursive(n, x, N):
    """T_n(x) mod N by the direct O(n) recurrence. Test oracle only."""
    _check_inputs(n, x, N)
    if n > ORACLE_DEGREE_LIMIT:
        raise OracleRangeError(f"oracle range: n={n} exceeds {ORACLE_DEGREE_LIMIT}")
    if n == 0:
        return 1 % N
    t_prev, t = 1, x
    for _ in range(n - 1):
        t_prev, t = t, (2 * x * t - t_prev) % N
    return t


def dlog_bruteforce(x, y, N, max_n):
    """Smallest v <= max_n with T_v(x) == y mod N, or None.

    Demonstration oracle for toy moduli only.
    """
    if N > ORACLE_MODULUS_LIMIT:
        raise OracleRangeError(f"oracle range: N={N} exceeds {ORACLE_MODULUS_LIMIT}")
    if max_n > ORACLE_MODULUS_LIMIT:
        raise OracleRangeError(f"oracle range: max_n={max_n} exceeds {ORACLE_MODULUS_LIMIT}")
    _check_inputs(0, x, N)
    if y == 1 % N:
        return 0
    t_prev, t = 1, x
    for v in range(1, max_n + 1):
        if t == y:
            return v
        t_prev, t = t, (2 * x * t - t_prev) % N
    return None


# ---------------------------------------------------------------------------
# parameter generation

def gen_exponent(bits, rng):
    """Uniform random integer in [2^(bits-1), 2^bits); never 0 or 1."""
    if bits < 2:
        raise ValueError("exponent width must be >= 2 bits")
    return rng.getrandbits(bits - 1) | (1 << (bits - 1))


@dataclass
class ModulusCertificate:
    """Evidence that N is prime with large prime factors in (N-1)/2 and (N+1)/2.

    The literal condition N-1 = 2*p1, N+1 = 2*p2 with p1, p2 both prime
    admits only N = 5 ((N-1)/2 and (N+1)/2 are consecutive integers), so the
    standard relaxation is used: each half exposes a prime factor of at
    least factor_bits bits.
    """

    N: int
    p1_factor: int
    p2_factor: int
    cofactor1: int
    cofactor2: int
    factor_bits: int

    def verify(self):
        if not is_probable_prime(self.N):
            return False
        if (self.N - 1) // 2 != self.p1_factor * self.cofactor1:
            return False
        if (self.N + 1) // 2 != self.p2_factor * self.cofactor2:
            return False
        for f in (self.p1_factor, self.p2_factor):
            if f.bit_length() < self.factor_bits or not is_probable_prime(f):
                return False
        return True

    _FIELDS = ("N", "p1_factor", "p2_factor", "cofactor1", "cofactor2", "factor_bits")

    def to_text(self):
        return "".join(f"{name} {getattr(self, name)}\n" for name in self._FIELDS)

    @classmethod
    def from_text(cls, text):
        values = {}
        for line in text.splitlines():
            line = line.strip()
            if not line:
                continue
            name, _, value = line.partition(" ")
            values[name] = int(value)
        return cls(**values)


def _random_prime(bits, rng):
    while True:
        n = rng.getrandbits(bits - 1) | (1 << (bits - 1)) | 1
        if is_probable_prime(n):
            return n


def _find_large_prime_factor(m, min_bits, bound=TRIAL_DIVISION_BOUND):
    """(prime factor of >= min_bits bits, cofactor) of m, or None.

    Trial division up to `bound`, then a primality test of the remainder.
    """
    if m < 2:
        return None
    rem = m
    largest_small = None
    for p in small_primes():
        if p * p > rem:
            break
        while rem % p == 0:
            rem //= p
            largest_small = p
    if rem > 1 and rem.bit_length() >= max(min_bits, 1) and is_probable_prime(rem):
        return rem, m // rem
    if largest_small is not None and largest_small.bit_length() >= max(min_bits, 1):
        return largest_small, m // largest_small
    return None


def gen_modulus(bits, factor_bits, rng, max_attempts=100_000):
    """Random prime N of `bits` bits with a ModulusCertificate.

    For factor_bits > 0 the prime is constructed as N = 2*r*c + 1 with r a
    random prime of factor_bits bits, so (N-1)/2 has r as a certified
    factor; candidates are retried until (N+1)/2 also exposes a prime
    factor of >= factor_bits bits. factor_bits = 0 degenerates to a plain
    random prime (any prime factor certifies).
    """
    if bits < 16:
        raise ValueError("modulus width must be >= 16 bits")
    if factor_bits < 0 or (factor_bits and factor_bits > bits - 8):
        raise ValueError("factor_bits must be in [0, bits - 8]")

    if factor_bits == 0:
        for _ in range(max_attempts):
            N = _random_prime(bits, rng)
            f1 = _find_large_prime_factor((N - 1) // 2, 0)
            f2 = _find_large_prime_factor((N + 1) // 2, 0)
            if f1 and f2:
                return ModulusCertificate(N, f1[0], f2[0], f1[1], f2[1], 0)
        raise SearchExhausted("modulus search exhausted")

    cofactor_bits = bits - factor_bits - 1
    r = _random_prime(factor_bits, rng)
    for attempt in range(max_attempts):
        if attempt and attempt % 512 == 0:
            r = _random_prime(factor_bits, rng)
        c = rng.getrandbits(cofactor_bits - 1) | (1 << (cofactor_bits - 1)) if cofactor_bits > 1 else 1
        N = 2 * r * c + 1
        if N.bit_length() != bits or not is_probable_prime(N):
            continue
        found = _find_large_prime_factor((N + 1) // 2, factor_bits)
        if found is None:
            continue
        p2, cof2 = found
        return ModulusCertificate(N, r, p2, c, cof2, factor_bits)
    raise SearchExhausted("modulus search exhausted")
