"""Two-player zero-sum normal-form games on probability simplices.

Only player 1's utility matrix is stored; player 2's utilities are its
negation, so the zero-sum identity holds by construction.
"""

import json

import numpy as np

SIMPLEX_TOL = 1e-12


class GameMatrix:
    """Player-1 utility matrix u1 indexed (a1, a2) plus the bound u_max."""

    def __init__(self, u1, u_max=None):
        u1 = np.asarray(u1, dtype=np.float64)
        if u1.ndim != 2 or u1.shape[0] < 1 or u1.shape[1] < 1:
            raise ValueError("u1 must be a nonempty 2-d matrix")
        if u_max is None:
            u_max = float(np.abs(u1).max())
        u_max = float(u_max)
        if np.abs(u1).max() > u_max + 1e-15:
            raise ValueError("u1 entry exceeds u_max")
        self.u1 = u1
        self.n_actions_1, self.n_actions_2 = u1.shape
        self.u_max = u_max

    def n_actions(self, player):
        return self.n_actions_1 if player == 1 else self.n_actions_2


def validate_strategy(p, n=None):
    """Check and renormalize a mixed strategy.

    Entries must be nonnegative and sum to 1 within 1e-12; the returned copy
    is renormalized once so long runs cannot accumulate drift.
    """
    p = np.asarray(p, dtype=np.float64)
    if p.ndim != 1 or (n is not None and p.shape[0] != n):
        raise ValueError("strategy has wrong shape")
    if np.any(p < 0) or not np.all(np.isfinite(p)):
        raise ValueError("strategy entries must be finite and nonnegative")
    s = p.sum()
    if abs(s - 1.0) > SIMPLEX_TOL:
        raise ValueError(f"strategy sums to {s!r}, not 1")
    return p / s


def is_interior(p):
    return bool(np.all(p > 0))


def expected_value(g, p1, p2, player):
    """Expected utility of `player` under the profile (p1, p2)."""
    p1 = validate_strategy(p1, g.n_actions_1)
    p2 = validate_strategy(p2, g.n_actions_2)
    v1 = float(p1 @ g.u1 @ p2)
    return v1 if player == 1 else -v1


def conditional_utilities(g, opponent, player):
    """Expected utility of each own action against the opponent strategy."""
    if player == 1:
        opponent = validate_strategy(opponent, g.n_actions_2)
        return g.u1 @ opponent
    opponent = validate_strategy(opponent, g.n_actions_1)
    return -(g.u1.T @ opponent)


def best_response(g, opponent, player):
    """Index of the pure best response; ties broken by lowest index."""
    return int(np.argmax(conditional_utilities(g, opponent, player)))


def exploitability(g, p1, p2):
    """Sum over both players of the best pure deviation payoff; zero exactly
    at Nash equilibria."""
    q1 = conditional_utilities(g, p2, 1)
    q2 = conditional_utilities(g, p1, 2)
    return float(q1.max() + q2.max())


def is_eps_nash(g, p1, p2, eps):
    return exploitability(g, p1, p2) <= eps


def make_brps():
    """Biased rock-paper-scissors, a 3x3 antisymmetric game with interior
    equilibrium (0.2, 0.6, 0.2)."""
    u1 = [[0.0, -0.1, 0.3],
          [0.1, 0.0, -0.1],
          [-0.3, 0.1, 0.0]]
    return GameMatrix(u1, u_max=0.3)


def make_meq():
    """3x2 game whose Nash set is a line segment for player 1 crossed with
    the single point (1/2, 1/2) for player 2."""
    u1 = [[0.1, -0.2],
          [-0.4, 0.3],
          [-1.0, 0.9]]
    return GameMatrix(u1, u_max=1.0)


def make_random_game(n1, n2, rng_seed):
    """Game with i.i.d. uniform [0, 1] entries; u_max = 1."""
    if n1 < 1 or n2 < 1:
        raise ValueError("action counts must be positive")
    rng = np.random.default_rng(rng_seed)
    return GameMatrix(rng.random((n1, n2)), u_max=1.0)


def sample_interior_strategy(n, rng_seed):
    """Uniform draw from the open n-simplex (normalized exponentials).

    rng_seed may be an integer or an existing numpy Generator.
    """
    if n < 1:
        raise ValueError("n must be positive")
    rng = rng_seed if isinstance(rng_seed, np.random.Generator) \
        else np.random.default_rng(rng_seed)
    while True:
        e = rng.exponential(size=n)
        if np.all(e > 0):
            return e / e.sum()


def load_game(spec, rng_seed=0):
    """Resolve a game from a name or a JSON file path.

    Names: "brps", "meq", "random" (10x10), "random:N1xN2". Anything else is
    read as a file {"u1": [[...]], "u_max": <real>} (u_max optional).
    """
    if spec == "brps":
        return make_brps()
    if spec == "meq":
        return make_meq()
    if spec == "random" or spec.startswith("random:"):
        if spec == "random":
            n1 = n2 = 10
        else:
            try:
                a, b = spec.split(":", 1)[1].lower().split("x")
                n1, n2 = int(a), int(b)
            except ValueError:
                raise ValueError(f"bad random game spec {spec!r}")
        return make_random_game(n1, n2, rng_seed)
    with open(spec) as f:
        data = json.load(f)
    if "u1" not in data:
        raise ValueError(f"game file {spec!r} missing 'u1'")
    return GameMatrix(data["u1"], u_max=data.get("u_max"))
