"""Run profiles and pinned constants.

The asymptotic thresholds of the min-cut pipeline (phi, beta, balance, core
fraction, round counts) are polylog expressions that degenerate at desk
scale, so the desk profile fixes them to explicit constants; the paper
profile keeps the original formulas. Every result records which profile and
constants produced it.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace


@dataclass(frozen=True)
class Params:
    profile: str = "desk"
    # sparsity parameter; None means the paper-profile formula 1/log2(n)^10
    phi: float | None = 0.125
    # matching-player slack; None means |R|/log2(n)^5
    beta: float | None = 1.0
    # sparsification must shrink R by this factor, else the exhaustive
    # fallback engages
    zeta: float = 0.5
    # tolerated core loss per one_step: |R'| >= (1 - theta_core)|R|;
    # None means 1/log2(n)
    theta_core: float | None = 0.5
    # fraction of (tau+1) fake/pruned incident edges a core terminal may have
    bad_fraction: float = 0.5
    # cut-matching rounds: rounds_base + ceil(log2(slots))
    rounds_base: int = 1
    # witness conductance target; None means 1/(6 ln|X| + 6)
    phi_x: float | None = None
    # exhaustive-search thresholds for the explicit witness graph
    cut_player_exact_limit: int = 20
    prune_exact_limit: int = 18
    witness_check_limit: int = 18
    # stack reset policy in the blocking-flow search: "full" restarts at
    # the source after every augmentation, "retreat" backs up only to the
    # first saturated edge (cheaper benchmark toggle, off by default)
    reset_policy: str = "full"
    # splitter family size guard: |F| <= coeff * k^exponent * (log2 n + 1)^2
    splitter_coeff: int = 8
    splitter_exponent: int = 4

    def phi_for(self, n: int) -> float:
        if self.phi is not None:
            return self.phi
        return 1.0 / max(math.log2(max(n, 4)), 1.0) ** 10

    def beta_for(self, r_size: int, n: int) -> float:
        if self.beta is not None:
            return self.beta
        return max(1.0, r_size / max(math.log2(max(n, 4)), 1.0) ** 5)

    def theta_core_for(self, n: int) -> float:
        if self.theta_core is not None:
            return self.theta_core
        return 1.0 / max(math.log2(max(n, 4)), 1.0)

    def rounds_for(self, slots: int) -> int:
        return max(2, self.rounds_base + math.ceil(math.log2(max(slots, 2))))

    def phi_x_for(self, x_size: int) -> float:
        if self.phi_x is not None:
            return self.phi_x
        return 1.0 / (6.0 * math.log(max(x_size, 2)) + 6.0)

    def bad_budget(self, tau: int) -> float:
        return self.bad_fraction * (tau + 1)

    def k_unbalanced(self, r_size: int, n: int) -> int:
        inv = 1.0 / self.phi_for(n)
        expr = math.ceil(inv**3 + inv)
        return min(expr, r_size - 1)

    def internal_capacity(self, n: int) -> int:
        return max(1, math.ceil(1.0 / self.phi_for(n)))

    def describe(self) -> dict:
        return {
            "profile": self.profile,
            "phi": self.phi,
            "beta": self.beta,
            "zeta": self.zeta,
            "theta_core": self.theta_core,
            "bad_fraction": self.bad_fraction,
            "rounds_base": self.rounds_base,
            "phi_x": self.phi_x,
            "reset_policy": self.reset_policy,
        }


DESK = Params()
PAPER = Params(
    profile="paper",
    phi=None,
    beta=None,
    theta_core=None,
    bad_fraction=0.1,
    rounds_base=2,
)

PROFILES = {"desk": DESK, "paper": PAPER}

# Budget constants pinned from the first green acceptance run; the suite
# regression-guards them at +-0% (any increase fails).
PINNED = {
    # bfs_tree logical BIS calls <= C1_BFS * n * log2(n)
    "C1_BFS": 1.13,
    # dominating_set charged cut queries <= C2_DOMSET * n * log2(n)
    "C2_DOMSET": 1.59,
    # blocking-flow rounds <= C_ROUNDS * (n^(2/3) * W + 1)
    "C_ROUNDS": 0.49,
    # global_mincut charged cut queries <= C_GLOBAL * n^(5/3) * log2(n)^K_GLOBAL
    "C_GLOBAL": 0.28,
    "K_GLOBAL": 1.0,
    # decomposition crossing edges <= C_CROSSING * phi * |R| * (tau+1) * log2(n)^6
    "C_CROSSING": 1.0,
    # per-family log-log slope ceiling for the scaling gate
    "SLOPE_MAX": 1.9,
    # isolating_cuts charged cut queries <= C_ISO * n^(5/3) * log2(n)
    "C_ISO": 0.78,
}

# per-family maxflow budgets: charged cut queries <= C * n^(5/3) * W * log2(n)
PINNED_FLOW = {
    "random_gnp": 0.45,
    "two_cliques_bridge": 0.28,
    "complete": 0.20,
    "barbell": 0.19,
}


def get_profile(name: str) -> Params:
    try:
        return PROFILES[name]
    except KeyError:
        raise ValueError(f"unknown profile {name!r}; expected one of {sorted(PROFILES)}")


def load_config_overrides(path, base: Params) -> Params:
    """Apply key=value overrides from a plain-text config file."""
    updates = {}
    with open(path) as fh:
        for ln in fh:
            ln = ln.strip()
            if not ln or ln.startswith("#"):
                continue
            if "=" not in ln:
                raise ValueError(f"bad config line: {ln!r}")
            key, val = (part.strip() for part in ln.split("=", 1))
            if not hasattr(base, key):
                raise ValueError(f"unknown config key: {key!r}")
            current = getattr(base, key)
            if key in ("profile", "reset_policy"):
                updates[key] = val
            elif val.lower() == "none":
                updates[key] = None
            elif isinstance(current, int) and not isinstance(current, bool):
                updates[key] = int(val)
            else:
                updates[key] = float(val)
    return replace(base, **updates)
