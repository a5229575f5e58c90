"""Exact samplers for the family, on a deterministic stream layer.

Randomness comes from Philox4x64 (counter-based) keyed by (seed,
stream_id): the same key reproduces the same sequence on any platform and
any thread layout.  All beta-distributed quantities are sampled by inverse
CDF through inv_reg_inc_beta - slower than gamma-ratio tricks but exactly
reproducible and backed by the tested inverse routine.

Draw-order contracts (these make reruns byte-identical, so they are part
of the interface and must not be reordered):

    sample_position_1d   signs first, then velocity betas
    sample_position      radius betas first, then direction normals
    sample_direction     polar-method normals in vectorized rejection
                         rounds; a batch of n is NOT the concatenation of
                         n scalar calls
    sample_epd_telegraph one spawned substream per variate; inside it the
                         initial sign, then exponential gaps in chunks of 16
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .family import FamilyParams
from .specfun import inv_reg_inc_beta

__all__ = [
    "RngStream",
    "KSResult",
    "sample_beta",
    "sample_velocity",
    "sample_position_1d",
    "sample_direction",
    "sample_position",
    "sample_projection_w",
    "sample_epd_telegraph",
    "ks_test",
    "parallel_draw",
]

_MASK64 = (1 << 64) - 1
_GOLDEN = 0x9E3779B97F4A7C15


def _mix64(z: int) -> int:
    # splitmix64 finalizer; bijective on 64-bit words
    z &= _MASK64
    z ^= z >> 30
    z = (z * 0xBF58476D1CE4E5B9) & _MASK64
    z ^= z >> 27
    z = (z * 0x94D049BB133111EB) & _MASK64
    z ^= z >> 31
    return z


class RngStream:
    """Deterministic random stream (Philox4x64 keyed by seed and stream id).

    Substreams are derived by mixing the parent stream id with the child
    index, so any (seed, stream_id) pair names one reproducible sequence.
    The k-th spawn() of a stream is identical to substream(k).  A stream
    is single-owner: never share one instance between concurrent tasks.
    """

    def __init__(self, seed: int, stream_id: int = 0):
        self.seed = int(seed) & _MASK64
        self.stream_id = int(stream_id) & _MASK64
        self._gen = np.random.Generator(
            np.random.Philox(key=[self.seed, self.stream_id])
        )
        self._spawned = 0

    def uniform_open(self, size=None):
        """Uniform variates strictly inside (0, 1): half-ulp shifted 53-bit grid."""
        return self._gen.random(size) + 2.0**-54

    def signs(self, size=None):
        """Uniform +-1 variates."""
        u = self._gen.random(size)
        out = np.where(u < 0.5, -1.0, 1.0)
        return float(out) if size is None else out

    def exponentials(self, size=None):
        """Standard exponential variates by inversion: -ln(U)."""
        return -np.log(self.uniform_open(size))

    def normals(self, size: int):
        """Standard normals by the Marsaglia polar method.

        Pairs (u, v) uniform on the square are rejected outside the unit
        disk in vectorized rounds; consumption therefore depends on the
        batch size, which is fixed by the caller's call sequence.
        """
        size = int(size)
        out = np.empty(size)
        filled = 0
        while filled < size:
            # ~pi/4 of pairs survive; each pair yields two normals
            npairs = max(64, int((size - filled) * 0.7) + 16)
            u = 2.0 * self._gen.random(npairs) - 1.0
            v = 2.0 * self._gen.random(npairs) - 1.0
            s = u * u + v * v
            ok = (s > 0.0) & (s < 1.0)
            f = np.sqrt(-2.0 * np.log(s[ok]) / s[ok])
            z = np.concatenate([u[ok] * f, v[ok] * f])
            take = min(z.size, size - filled)
            out[filled : filled + take] = z[:take]
            filled += take
        return out

    def substream(self, k: int) -> "RngStream":
        """Independent child stream number k (pure; no state consumed)."""
        if k < 0:
            raise ValueError("substream index must be >= 0")
        child = _mix64(self.stream_id ^ (((int(k) + 1) * _GOLDEN) & _MASK64))
        return RngStream(self.seed, child)

    def spawn(self) -> "RngStream":
        """Next child stream; the k-th spawn equals substream(k)."""
        child = self.substream(self._spawned)
        self._spawned += 1
        return child


@dataclass(frozen=True)
class KSResult:
    """Kolmogorov-Smirnov outcome.  The accept field is named `passed`
    because `pass` is a Python keyword."""

    statistic: float
    n: int
    critical_value: float
    passed: bool


_OPEN_LO = np.nextafter(0.0, 1.0)
_OPEN_HI = np.nextafter(1.0, 0.0)


def sample_beta(rng: RngStream, a, b, size=None):
    """Beta(a, b) variates by inverse CDF, clamped to the open interval."""
    if not (a > 0.0 and b > 0.0):
        raise ValueError("sample_beta requires a > 0 and b > 0")
    u = rng.uniform_open(size)
    y = inv_reg_inc_beta(u, a, b)
    return float(np.clip(y, _OPEN_LO, _OPEN_HI)) if size is None else np.clip(y, _OPEN_LO, _OPEN_HI)


def sample_velocity(rng: RngStream, p: FamilyParams, size=None):
    """Speed variates V = c Y^{1/beta}, Y ~ Beta(1/beta, gamma+1); V in (0, c).

    The density is (beta/c)(1 - (v/c)^beta)^gamma / B(1/beta, gamma+1).
    """
    if p.d != 1:
        raise ValueError(f"sample_velocity requires d = 1, got d = {p.d}")
    y = sample_beta(rng, 1.0 / p.beta_exp, p.gamma_exp + 1.0, size)
    return p.c * y ** (1.0 / p.beta_exp)


def sample_position_1d(rng: RngStream, p: FamilyParams, t, size=None):
    """Positions X(t) = D V t^alpha with D uniform on {-1, +1}.

    Draw order: signs first, then velocities.
    """
    if p.d != 1:
        raise ValueError(f"sample_position_1d requires d = 1, got d = {p.d}")
    t = float(t)
    if t <= 0.0:
        raise ValueError(f"t must be > 0, got {t}")
    d_sign = rng.signs(size)
    v = sample_velocity(rng, p, size)
    return d_sign * v * t**p.alpha


def sample_direction(rng: RngStream, d: int, size=None):
    """Uniform directions on S^{d-1}: normalized polar-method normals."""
    if int(d) != d or d < 2:
        raise ValueError("sample_direction requires integer d >= 2")
    d = int(d)
    n = 1 if size is None else int(size)
    z = rng.normals(n * d).reshape(n, d)
    z /= np.sqrt(np.sum(z * z, axis=1))[:, None]
    return z[0] if size is None else z


def sample_position(rng: RngStream, p: FamilyParams, t, size=None):
    """Positions in R^d: radius c t^alpha Y^{1/beta} with Y ~ Beta(d/beta,
    gamma+1), times an independent uniform direction.

    Draw order: radius betas first, then direction normals.  For d = 1
    this delegates to sample_position_1d (signs first, then speeds).
    """
    if p.d == 1:
        return sample_position_1d(rng, p, t, size)
    t = float(t)
    if t <= 0.0:
        raise ValueError(f"t must be > 0, got {t}")
    y = sample_beta(rng, p.d / p.beta_exp, p.gamma_exp + 1.0, size)
    r = p.c * t**p.alpha * np.asarray(y) ** (1.0 / p.beta_exp)
    theta = sample_direction(rng, p.d, size)
    if size is None:
        return float(r) * theta
    return r[:, None] * theta


def sample_projection_w(rng: RngStream, d: int, size=None):
    """First-coordinate modulus of a uniform direction: W = sqrt(B) with
    B ~ Beta(1/2, (d-1)/2); density 2(1-w^2)^{(d-3)/2}/B(1/2, (d-1)/2).

    d = 3 gives W exactly uniform on (0,1); d = 2 gives W^2 arcsine.
    """
    if int(d) != d or d < 2:
        raise ValueError("sample_projection_w requires integer d >= 2")
    d = int(d)
    b = sample_beta(rng, 0.5, (d - 1) / 2.0, size)
    return math.sqrt(b) if size is None else np.sqrt(b)


_TELEGRAPH_CHUNK = 16


def _telegraph_integral(child: RngStream, xi: float, t: float, eps: float):
    """One realization of int_eps^t (sign path) ds plus the flip count.

    Events of the rate-xi/s Poisson process are generated backward from t
    by inversion: the cumulative rate from s to t is xi ln(t/s), so with
    T_k a unit-rate Poisson arrival sequence the event times are
    s_k = t exp(-T_k/xi), stopping once s_k < eps.  Folding the sign at
    time t into the caller's symmetric initial sign, the integral over
    the alternating segments telescopes to

        t + 2 sum_{k=1..K} (-1)^k s_k + (+eps if K odd else -eps).

    Exponential gaps are drawn in chunks of 16 from the per-variate
    substream; shrinking eps only extends the same T_k sequence, so
    realizations are pathwise coupled across eps.
    """
    total_t = 0.0
    alt = 0.0
    k = 0
    while True:
        gaps = child.exponentials(_TELEGRAPH_CHUNK)
        arrivals = total_t + np.cumsum(gaps)
        s = t * np.exp(-arrivals / xi)
        alive = int(np.count_nonzero(s >= eps))  # prefix: s is decreasing
        if alive:
            ss = s[:alive]
            sgn = np.where(np.arange(k + 1, k + alive + 1) % 2 == 1, -1.0, 1.0)
            alt += float(sgn @ ss)
            k += alive
        if alive < _TELEGRAPH_CHUNK:
            break
        total_t = float(arrivals[-1])
    integral = t + 2.0 * alt + (eps if k % 2 == 1 else -eps)
    return integral, k


def sample_epd_telegraph(rng: RngStream, xi, c, t, eps, size=None):
    """Signed telegraph-type displacement U(0) int_0^t (-1)^{N(s)} ds.

    N is the nonhomogeneous Poisson process with rate xi/s and U(0) is
    uniform on {-c, +c}.  The cumulative rate diverges at 0, so the
    simulation starts at eps: the neglected displacement is bounded by
    c*eps.  Each variate owns one spawned substream (sign drawn first,
    then the exponential gaps), so runs with smaller eps extend the same
    paths instead of resampling them.
    """
    xi = float(xi)
    c = float(c)
    t = float(t)
    eps = float(eps)
    if xi <= 0.0 or c <= 0.0 or t <= 0.0:
        raise ValueError("sample_epd_telegraph requires xi, c, t > 0")
    if not (0.0 < eps < t):
        raise ValueError(f"eps must lie in (0, t), got eps={eps}, t={t}")

    def one() -> float:
        child = rng.spawn()
        s0 = child.signs()
        integral, _ = _telegraph_integral(child, xi, t, eps)
        return c * s0 * integral

    if size is None:
        return one()
    return np.array([one() for _ in range(int(size))])


def ks_test(samples, cdf, alpha: float = 0.01) -> KSResult:
    """One-sample Kolmogorov-Smirnov test against a given CDF.

    D_n is the max over order statistics of max(i/n - F(x_i),
    F(x_i) - (i-1)/n); the critical value is the asymptotic Kolmogorov
    c(alpha)/sqrt(n) with c(alpha) = sqrt(-ln(alpha/2)/2), adequate for
    the n >= 1e4 sizes used here (no small-n tables).
    """
    if not (0.0 < alpha < 1.0):
        raise ValueError("alpha must lie in (0, 1)")
    x = np.sort(np.asarray(samples, dtype=float).ravel())
    n = x.size
    if n < 10:
        raise ValueError(f"ks_test needs at least 10 samples, got {n}")
    f = np.asarray(cdf(x), dtype=float)
    if f.shape != x.shape:
        raise ValueError("cdf must map the sample array to an equal-shape array")
    i = np.arange(1, n + 1)
    d_plus = float(np.max(i / n - f))
    d_minus = float(np.max(f - (i - 1) / n))
    stat = max(d_plus, d_minus)
    crit = math.sqrt(-math.log(alpha / 2.0) / 2.0) / math.sqrt(n)
    return KSResult(statistic=stat, n=int(n), critical_value=crit, passed=stat < crit)


_BLOCK = 65536


def parallel_draw(seed, stream_id, n, draw_block, threads: int = 1):
    """Deterministic parallel Monte Carlo.

    The n draws are split into fixed blocks of 65536; block b is produced
    by draw_block(substream(b) of the base stream, block_size) and the
    blocks are concatenated in block order.  The output is a pure
    function of (seed, stream_id, n, draw_block) - the thread count only
    changes wall time, never bytes.
    """
    n = int(n)
    if n < 0:
        raise ValueError("n must be >= 0")
    base = RngStream(seed, stream_id)
    sizes = [_BLOCK] * (n // _BLOCK)
    if n % _BLOCK:
        sizes.append(n % _BLOCK)
    if not sizes:
        return np.empty(0)

    def work(b: int):
        return np.asarray(draw_block(base.substream(b), sizes[b]))

    if threads <= 1:
        parts = [work(b) for b in range(len(sizes))]
    else:
        with ThreadPoolExecutor(max_workers=int(threads)) as pool:
            parts = list(pool.map(work, range(len(sizes))))
    return np.concatenate(parts, axis=0)
