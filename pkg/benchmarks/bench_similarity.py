"""Compare the compiled edit-distance kernel against the pure-Python fallback.

Runs the same workload twice: once in this process (whichever kernel imported)
and once in a subprocess forced onto the fallback with SCIWRITE_LINT_PURE=1.

    python3 benchmarks/bench_similarity.py [--pairs 2000] [--repeat 5]
"""

import argparse
import json
import os
import random
import statistics
import subprocess
import sys
import time

WORDS = (
    "sparse recovery spectral methods adaptive inference bayesian convex "
    "optimization estimation regression clustering alignment retrieval "
    "hierarchical variational causal robust scalable sampling decoding "
    "representation genomic climate particle protein market sensor imaging"
).split()


def make_pairs(n: int, seed: int = 17) -> list:
    """Title-like string pairs, half of them near-duplicates with typos."""
    rng = random.Random(seed)
    pairs = []
    for i in range(n):
        left = " ".join(rng.choices(WORDS, k=rng.randint(4, 9))).title()
        if i % 2:
            chars = list(left)
            for _ in range(rng.randint(1, 3)):
                pos = rng.randrange(len(chars))
                chars[pos] = rng.choice("abcdefghijklmnop")
            right = "".join(chars)
        else:
            right = " ".join(rng.choices(WORDS, k=rng.randint(4, 9))).title()
        pairs.append((left, right))
    return pairs


def run_workload(pairs: list, repeat: int) -> dict:
    from sciwrite_lint.similarity import KERNEL, similarity

    timings = []
    checksum = 0.0
    for _ in range(repeat):
        start = time.perf_counter()
        checksum = sum(similarity(a, b) for a, b in pairs)
        timings.append(time.perf_counter() - start)
    return {
        "kernel": KERNEL,
        "pairs": len(pairs),
        "best_s": min(timings),
        "median_s": statistics.median(timings),
        "checksum": round(checksum, 6),
    }


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--pairs", type=int, default=2000)
    parser.add_argument("--repeat", type=int, default=5)
    parser.add_argument("--inner", action="store_true", help=argparse.SUPPRESS)
    args = parser.parse_args()

    pairs = make_pairs(args.pairs)
    result = run_workload(pairs, args.repeat)
    if args.inner:
        print(json.dumps(result))
        return 0

    env = dict(os.environ, SCIWRITE_LINT_PURE="1")
    fallback = json.loads(subprocess.run(
        [sys.executable, __file__, "--pairs", str(args.pairs),
         "--repeat", str(args.repeat), "--inner"],
        env=env, capture_output=True, text=True, check=True,
    ).stdout)

    print(f"{'kernel':<10} {'pairs':>6} {'best':>10} {'median':>10}")
    for row in (result, fallback):
        print(f"{row['kernel']:<10} {row['pairs']:>6} "
              f"{row['best_s']:>9.4f}s {row['median_s']:>9.4f}s")
    if result["checksum"] != fallback["checksum"]:
        print("MISMATCH: kernels disagree on the workload checksum", file=sys.stderr)
        return 1
    if result["kernel"] != fallback["kernel"]:
        speedup = fallback["best_s"] / result["best_s"]
        print(f"speedup: {speedup:.1f}x ({result['kernel']} over {fallback['kernel']})")
    else:
        print("note: compiled kernel unavailable; both runs used the fallback")
    return 0


if __name__ == "__main__":
    sys.exit(main())
