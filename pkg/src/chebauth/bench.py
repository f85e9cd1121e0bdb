"""Timing and size reports: evaluation scaling, protocol phase costs, frames.

Medians over warm-started iteration loops; absolute milliseconds are
hardware-bound, so only ratios and monotonic trends are meaningful.
"""

import csv
import random
import statistics
import time

from . import wire
from .cheb import cheb_eval, gen_exponent, gen_modulus
from .harness import build_deployment
from .protocol import (
    AGT_CACHED_HASHES,
    OpCounter,
    agt_confirm,
    agt_handle_login,
    ev_handle_response,
    ev_login,
)

WARMUP = 10


class BenchAssertionError(AssertionError):
    """A measured quantity contradicts the expected operation counts."""


def _median_ms(samples):
    return statistics.median(samples) * 1000.0


def bench_cheb(bit_sizes, iters, modulus_bits=256, seed=0):
    """Median wall time of cheb_eval per degree bit-length, fixed modulus.

    Returns rows of {label, median_ms, iters, ratio_to_first}.
    """
    if iters < 1:
        raise ValueError("iters must be >= 1")
    rng = random.Random(seed)
    factor_bits = {64: 48, 128: 96, 256: 200}.get(modulus_bits, 0)
    N = gen_modulus(modulus_bits, factor_bits, rng).N
    rows = []
    for bits in bit_sizes:
        if not 64 <= bits <= 4096:
            raise ValueError(f"degree bit size {bits} outside [64, 4096]")
        pairs = [
            (gen_exponent(bits, rng), rng.randrange(0, N))
            for _ in range(min(iters, 64))
        ]
        for n, x in pairs[:WARMUP]:
            cheb_eval(n, x, N)
        samples = []
        for i in range(iters):
            n, x = pairs[i % len(pairs)]
            start = time.perf_counter()
            cheb_eval(n, x, N)
            samples.append(time.perf_counter() - start)
        rows.append({"label": f"{bits}bits", "median_ms": _median_ms(samples), "iters": iters})
    base = rows[0]["median_ms"]
    for row in rows:
        row["ratio_to_first"] = row["median_ms"] / base
    return rows


def bench_protocol(iters, modulus_bits=256, seed=0):
    """Per-party median login+auth times with instrumented op counts.

    Key material is generated once and excluded from timing. Also reports
    the sum of isolated single-evaluation timings next to the measured
    totals: protocol degrees are products of hashes and keys, so summing
    isolated timings at the nominal exponent width underestimates the real
    cost.
    """
    if iters < 1:
        raise ValueError("iters must be >= 1")
    deployment = build_deployment(seed, bits=modulus_bits)
    params, card, agt = deployment.params, deployment.card, deployment.agt
    rng = random.Random(seed + 1)

    ev_samples, agt_samples = [], []
    ev_counter = agt_counter = None
    for _ in range(iters + WARMUP):
        agt.counter = OpCounter("AGT")
        agt.pending = None

        start = time.perf_counter()
        session, msg1 = ev_login(card, deployment.id_i, deployment.password, params, rng)
        ev_time = time.perf_counter() - start

        start = time.perf_counter()
        msg2 = agt_handle_login(agt, msg1, params, rng)
        agt_time = time.perf_counter() - start

        start = time.perf_counter()
        msg3, _ = ev_handle_response(session, card, deployment.id_i, msg2, params)
        ev_time += time.perf_counter() - start

        start = time.perf_counter()
        agt_confirm(agt, msg3, params)
        agt_time += time.perf_counter() - start

        ev_samples.append(ev_time)
        agt_samples.append(agt_time)
        ev_counter, agt_counter = session.counter, agt.counter
    ev_samples, agt_samples = ev_samples[WARMUP:], agt_samples[WARMUP:]

    if ev_counter.chebyshev != 5 or agt_counter.chebyshev != 2:
        raise BenchAssertionError(
            f"operation counts off: EV {ev_counter.chebyshev} cheb (want 5), "
            f"AGT {agt_counter.chebyshev} cheb (want 2)"
        )

    # isolated baseline: one evaluation at the nominal exponent width
    single = []
    for _ in range(max(100, iters)):
        n = gen_exponent(160, rng)
        x = rng.randrange(0, params.N)
        start = time.perf_counter()
        cheb_eval(n, x, params.N)
        single.append(time.perf_counter() - start)
    cheb_ms = _median_ms(single)

    return [
        {
            "label": "EV",
            "median_ms": _median_ms(ev_samples),
            "iters": iters,
            "cheb_ops": ev_counter.chebyshev,
            "hash_ops": ev_counter.hashes,
        },
        {
            "label": "AGT",
            "median_ms": _median_ms(agt_samples),
            "iters": iters,
            "cheb_ops": agt_counter.chebyshev,
            "hash_ops": agt_counter.hashes,
            "hash_ops_total": agt_counter.hashes + AGT_CACHED_HASHES,
        },
        {
            "label": "isolated-cheb-sum",
            "median_ms": 7 * cheb_ms,
            "iters": max(100, iters),
            "cheb_ops": 7,
            "hash_ops": 0,
        },
    ]


def report_sizes(modulus_bits=256, hash_bits=160):
    """Per-message payload bits and the session total."""
    per_message = wire.message_bits(modulus_bits, hash_bits)
    rows = [
        {"label": name, "bits": bits, "bytes": bits // 8}
        for name, bits in per_message.items()
    ]
    total = wire.session_cost_bits(modulus_bits, hash_bits)
    rows.append({"label": "total", "bits": total, "bytes": total // 8})
    return rows


# ---------------------------------------------------------------------------
# output

def write_csv(rows, stream):
    fieldnames = []
    for row in rows:
        for key in row:
            if key not in fieldnames:
                fieldnames.append(key)
    writer = csv.DictWriter(stream, fieldnames=fieldnames)
    writer.writeheader()
    writer.writerows(rows)


def format_table(rows):
    if not rows:
        return ""
    fieldnames = []
    for row in rows:
        for key in row:
            if key not in fieldnames:
                fieldnames.append(key)
    rendered = [
        {k: (f"{v:.6f}" if isinstance(v, float) else str(v if v is not None else ""))
         for k, v in row.items()}
        for row in rows
    ]
    widths = {
        k: max(len(k), *(len(r.get(k, "")) for r in rendered)) for k in fieldnames
    }
    lines = ["  ".join(k.ljust(widths[k]) for k in fieldnames)]
    for row in rendered:
        lines.append("  ".join(row.get(k, "").ljust(widths[k]) for k in fieldnames))
    return "\n".join(lines)


def plot_rows(rows, path, x_key, y_key, title, kind="line"):
    """Render a report as a matplotlib figure written to `path`."""
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    labels = [str(row[x_key]) for row in rows]
    values = [row[y_key] for row in rows]
    fig, ax = plt.subplots(figsize=(6, 4))
    if kind == "bar":
        ax.bar(labels, values)
    else:
        ax.plot(labels, values, marker="o")
    ax.set_xlabel(x_key)
    ax.set_ylabel(y_key)
    ax.set_title(title)
    ax.grid(True, alpha=0.3)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
