"""Lattice toolkit: NTRU-HPS / NTRU-Prime KEMs, the first-kind Voronoi
attack lattice with exact min-cut CVP, and the oracle-assisted
message-recovery experiment harness."""

from . import attack, cli, cvp, ntru_hps, ntru_prime, ring, vfk

__all__ = ["attack", "cli", "cvp", "ntru_hps", "ntru_prime", "ring", "vfk"]
