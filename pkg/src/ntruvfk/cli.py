"""Batch experiment driver.

Subcommands: table1, lambda1, keygen, kem-roundtrip, attack, sweep,
bench-babai.  Every command is a deterministic function of its flags plus
--seed (except the wall-clock columns); the default master seed is the
fixed constant 0xA11CE.  CSV files are header-first and schema-stable;
JSON summaries go to stdout.  Exit codes: 0 success, 2 parameter error,
3 verification failure.
"""

from __future__ import annotations

import argparse
import csv
import json
import random
import sys
import time
from dataclasses import dataclass
from importlib import resources
from typing import Optional

import numpy as np

from . import attack, cvp, ntru_hps, ntru_prime, vfk
from .ring import encode_poly

DEFAULT_MASTER_SEED = 0xA11CE

TABLE1_Q = [32, 64, 128, 256, 512, 1024, 2048, 4096, 4621, 4591, 5167]

ATTACK_CSV_HEADER = [
    "param_set", "variant", "N", "q", "k", "P", "R",
    "call_index", "seed", "success", "cvp_distance", "cvp_iterations", "wall_ms",
]

BENCH_CSV_HEADER = ["instance_id", "solver", "distance", "wall_ms", "iterations"]


@dataclass(frozen=True)
class RegistryEntry:
    name: str
    variant: str
    params: object  # HpsParams or PrimeParams
    k: int
    P: int

    @property
    def N(self) -> int:
        return self.params.N if self.variant == "hps" else self.params.p

    @property
    def q(self) -> int:
        return self.params.q


def load_registry(path: Optional[str] = None) -> dict:
    """Parse the parameter-set config (package data by default).

    Each entry is validated by its params constructor and gets (k, P)
    derived from q, so every registered set is obtuse by construction.
    """
    if path is None:
        text = resources.files("ntruvfk").joinpath("data/parameter_sets.cfg").read_text()
    else:
        with open(path) as fh:
            text = fh.read()
    registry = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        fields = line.split()
        if len(fields) < 3:
            raise ValueError(f"registry line {lineno}: expected '<name> <variant> key=value...'")
        name, variant = fields[0], fields[1]
        kv = {}
        for tok in fields[2:]:
            key, _, val = tok.partition("=")
            kv[key] = int(val)
        if variant == "hps":
            params = ntru_hps.HpsParams(name, kv["N"], kv["q"])
        elif variant == "prime":
            params = ntru_prime.PrimeParams(name, kv["p"], kv["q"], kv["w"])
        else:
            raise ValueError(f"registry line {lineno}: unknown variant {variant!r}")
        k, P = vfk.max_k(params.q)
        registry[name] = RegistryEntry(name, variant, params, k, P)
    return registry


def _lookup(registry: dict, name: str) -> RegistryEntry:
    if name not in registry:
        listing = ", ".join(sorted(registry))
        raise KeyError(f"unknown parameter set {name!r}; registered sets: {listing}")
    return registry[name]


def _emit_csv(header, rows, out: Optional[str]):
    fh = open(out, "w", newline="") if out else sys.stdout
    try:
        w = csv.writer(fh)
        w.writerow(header)
        w.writerows(rows)
    finally:
        if out:
            fh.close()


def _make_instance(entry: RegistryEntry, rng):
    if entry.variant == "hps":
        return attack.make_hps_instance(entry.params, rng)
    return attack.make_prime_instance(entry.params, rng)


def _attack_rows(entry: RegistryEntry, records):
    rows = []
    for rec in records:
        rows.append([
            entry.name, entry.variant, entry.N, entry.q, entry.k, entry.P, rec.R,
            rec.call_index, rec.seed, int(rec.success),
            f"{rec.cvp_distance:.6f}", rec.cvp_iterations, f"{rec.wall_ms:.3f}",
        ])
    return rows


# ---------------------------------------------------------------------------
# commands

def cmd_table1(args, registry) -> int:
    rows = []
    for q in TABLE1_Q:
        k, P = vfk.max_k(q)
        rows.append([q, k, P])
    if args.format == "json":
        print(json.dumps([{"q": q, "k": k, "P": P} for q, k, P in rows]))
    else:
        _emit_csv(["q", "k", "P"], rows, args.out)
    return 0


def cmd_lambda1(args, registry) -> int:
    entry = _lookup(registry, args.set)
    lat = vfk.build(entry.N, entry.q, entry.k, entry.P)
    value = vfk.lambda1(lat)
    closed = vfk.lambda1_closed_form(lat)
    payload = {
        "param_set": entry.name,
        "N": entry.N, "q": entry.q, "k": entry.k, "P": entry.P,
        "lambda1": value,
        "lambda1_sq": vfk.lambda1_squared(lat),
        "sqrt_1_plus_k_sq": closed,
    }
    if args.format == "json":
        print(json.dumps(payload))
    else:
        print(f"{entry.name}: lambda1 = {value:.6f}  (sqrt(1+k^2) = {closed:.6f})")
    return 0


def cmd_keygen(args, registry) -> int:
    entry = _lookup(registry, args.set)
    rng = random.Random(args.seed)
    if entry.variant == "hps":
        kp = ntru_hps.keygen(entry.params, rng)
        payload = {
            "param_set": entry.name,
            "public_key": encode_poly(kp.h).hex(),
            "secret": {
                "f": encode_poly(kp.f).hex(),
                "f3": encode_poly(kp.f3).hex(),
                "hq": encode_poly(kp.hq).hex(),
                "S": kp.S.hex(),
            },
        }
    else:
        kp = ntru_prime.keygen(entry.params, rng)
        payload = {
            "param_set": entry.name,
            "public_key": encode_poly(kp.h).hex(),
            "secret": {"f": encode_poly(kp.f).hex(), "g3": encode_poly(kp.g3).hex()},
        }
    text = json.dumps(payload, indent=2)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text + "\n")
    else:
        print(text)
    return 0


def cmd_kem_roundtrip(args, registry) -> int:
    entry = _lookup(registry, args.set)
    rng = random.Random(args.seed)
    failures = 0
    t0 = time.perf_counter()
    if entry.variant == "hps":
        kp = ntru_hps.keygen(entry.params, rng)
        for _ in range(args.trials):
            c, s = ntru_hps.encap(entry.params, kp.h, rng)
            if ntru_hps.decap(kp, c) != s:
                failures += 1
    else:
        kp = ntru_prime.keygen(entry.params, rng)
        for _ in range(args.trials):
            K, ct, m, _ = ntru_prime.encap(entry.params, kp.h, rng)
            if ntru_prime.decap(kp, ct) != K or any(x not in (-1, 0, 1) for x in m.coeffs):
                failures += 1
    print(json.dumps({
        "param_set": entry.name, "trials": args.trials, "failures": failures,
        "total_wall_s": round(time.perf_counter() - t0, 3),
    }))
    return 3 if failures else 0


def cmd_attack(args, registry) -> int:
    entry = _lookup(registry, args.set)
    rng = random.Random(args.seed)
    _, inst = _make_instance(entry, rng)
    t0 = time.perf_counter()
    records = attack.run_attack(inst, entry.k, args.R, calls=args.calls, master_seed=args.seed)
    wall = time.perf_counter() - t0
    if args.out:
        _emit_csv(ATTACK_CSV_HEADER, _attack_rows(entry, records), args.out)
    successes = sum(r.success for r in records)
    print(json.dumps({
        "param_set": entry.name, "R": args.R, "calls": args.calls,
        "successes": successes, "success": successes > 0,
        "total_wall_s": round(wall, 3),
    }))
    return 0


def cmd_sweep(args, registry) -> int:
    entry = _lookup(registry, args.set)
    rng = random.Random(args.seed)
    _, inst = _make_instance(entry, rng)
    t0 = time.perf_counter()
    result = attack.sweep_R0(
        inst, entry.k, args.R_min, args.R_max, calls=args.calls, master_seed=args.seed
    )
    wall = time.perf_counter() - t0
    if args.out:
        rows = []
        for R in sorted(result.per_R):
            rows.extend(_attack_rows(entry, result.per_R[R]))
        _emit_csv(ATTACK_CSV_HEADER, rows, args.out)
    print(json.dumps({
        "param_set": entry.name, "R0": result.R0,
        "calls_per_R": args.calls, "total_wall_s": round(wall, 3),
    }))
    return 0


def cmd_bench_babai(args, registry) -> int:
    P = vfk.choose_P(args.k, args.q)
    lat = vfk.build(args.N, args.q, args.k, P)  # raises on non-obtuse input
    rng = random.Random(args.seed)
    basis = lat.basis_rows()
    gso = cvp.gram_schmidt(basis)
    rows = []
    for trial in range(args.trials):
        y = np.array(
            [rng.randint(0, 1) for _ in range(args.N)]
            + [rng.randint(-1000, 1000) for _ in range(args.N)],
            dtype=np.int64,
        )
        t0 = time.perf_counter()
        xb = cvp.babai(basis, y, gso=gso)
        t_babai = (time.perf_counter() - t0) * 1000.0
        d = xb - y
        dist_babai = float(np.sqrt(d @ d))
        t0 = time.perf_counter()
        res = cvp.cvp_vfk(lat, y)
        t_mincut = (time.perf_counter() - t0) * 1000.0
        rows.append([trial, "babai", f"{dist_babai:.6f}", f"{t_babai:.3f}", 0])
        rows.append([trial, "mincut", f"{res.distance:.6f}", f"{t_mincut:.3f}", res.iterations])
    _emit_csv(BENCH_CSV_HEADER, rows, args.out)
    return 0


# ---------------------------------------------------------------------------

def _build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="ntruvfk",
        description="KEM round trips, message-recovery attacks, R0 sweeps and "
        "CVP benchmarks on first-kind Voronoi lattices.",
    )
    ap.add_argument("--registry", help="alternate parameter-set config file")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("table1", help="derived (q -> k, P) for the standard q values")
    p.add_argument("--out")
    p.add_argument("--format", choices=["csv", "json"], default="csv")
    p.set_defaults(func=cmd_table1)

    p = sub.add_parser("lambda1", help="first successive minimum of a set's lattice")
    p.add_argument("--set", required=True)
    p.add_argument("--format", choices=["text", "json"], default="text")
    p.set_defaults(func=cmd_lambda1)

    p = sub.add_parser("keygen", help="fresh keypair as hex JSON")
    p.add_argument("--set", required=True)
    p.add_argument("--seed", type=int, default=DEFAULT_MASTER_SEED)
    p.add_argument("--out")
    p.set_defaults(func=cmd_keygen)

    p = sub.add_parser("kem-roundtrip", help="encap/decap agreement trials")
    p.add_argument("--set", required=True)
    p.add_argument("--trials", type=int, default=100)
    p.add_argument("--seed", type=int, default=DEFAULT_MASTER_SEED)
    p.set_defaults(func=cmd_kem_roundtrip)

    p = sub.add_parser("attack", help="oracle-assisted message recovery at one range")
    p.add_argument("--set", required=True)
    p.add_argument("--R", type=int, required=True)
    p.add_argument("--calls", type=int, default=100)
    p.add_argument("--seed", type=int, default=DEFAULT_MASTER_SEED)
    p.add_argument("--out", help="per-call CSV records")
    p.set_defaults(func=cmd_attack)

    p = sub.add_parser("sweep", help="attack across a range of R, reporting R0")
    p.add_argument("--set", required=True)
    p.add_argument("--R-min", dest="R_min", type=int, required=True)
    p.add_argument("--R-max", dest="R_max", type=int, required=True)
    p.add_argument("--calls", type=int, default=100)
    p.add_argument("--seed", type=int, default=DEFAULT_MASTER_SEED)
    p.add_argument("--out")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("bench-babai", help="Babai vs min-cut distances on one lattice")
    p.add_argument("--N", type=int, required=True)
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--trials", type=int, default=100)
    p.add_argument("--seed", type=int, default=DEFAULT_MASTER_SEED)
    p.add_argument("--out")
    p.set_defaults(func=cmd_bench_babai)

    return ap


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        registry = load_registry(args.registry)
        return args.func(args, registry)
    except (KeyError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
