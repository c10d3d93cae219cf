"""Independent brute-force oracles used only by the tests."""
import itertools

import numpy as np

GRID = np.round(np.linspace(-1.0, 1.0, 201), 12)   # step 0.01


def grid_min_residual(targets, grid=GRID) -> float:
    """min over the grid of max_ij |u_i v_j - t_ij| with u, v in grid^2.

    Exhaustive over grid^4: for fixed (u0, u1) the two v_j decouple, so the
    search is done column by column without skipping any grid point.
    """
    t = np.asarray(targets, dtype=float).reshape(2, 2)
    g = grid.astype(np.float32)
    t = t.astype(np.float32)
    best_cols = []
    for j in range(2):
        f0 = np.abs(g[:, None] * g[None, :] - t[0, j])   # [u0, v]
        f1 = np.abs(g[:, None] * g[None, :] - t[1, j])   # [u1, v]
        best_cols.append(np.maximum(f0[:, None, :], f1[None, :, :]).min(axis=2))  # [u0, u1]
    return float(np.maximum(best_cols[0], best_cols[1]).min())


def grid_feasible(targets, tol=1e-9) -> bool:
    return grid_min_residual(targets) < tol + 0.02


def brute_force_chsh_local() -> list[float]:
    """CHSH of every deterministic strategy from first principles (no library code)."""
    vals = []
    for fa0, fa1, fb0, fb1 in itertools.product((0, 1), repeat=4):
        fa, fb = (fa0, fa1), (fb0, fb1)
        total = 0
        for x, y in itertools.product((0, 1), repeat=2):
            sign = -1 if x == y == 1 else 1
            total += sign * (-1) ** fa[x] * (-1) ** fb[y]
        vals.append(total)
    return vals


def ns_vertex_enumeration_max(coeffs) -> float:
    """Maximum of a linear functional over the 2222 NS polytope via its 24 vertices.

    The vertices are the 16 deterministic boxes and the 8 PR-type boxes
    a XOR b = x*y XOR alpha*x XOR beta*y XOR gamma.
    """
    c = np.asarray(coeffs, dtype=float).reshape(2, 2, 2, 2)
    vals = []
    for fa0, fa1, fb0, fb1 in itertools.product((0, 1), repeat=4):
        p = np.zeros((2, 2, 2, 2))
        for x, y in itertools.product((0, 1), repeat=2):
            p[x, y, (fa0, fa1)[x], (fb0, fb1)[y]] = 1
        vals.append(float((c * p).sum()))
    for al, be, ga in itertools.product((0, 1), repeat=3):
        p = np.zeros((2, 2, 2, 2))
        for x, y, a, b in itertools.product((0, 1), repeat=4):
            if a ^ b == (x * y) ^ (al * x) ^ (be * y) ^ ga:
                p[x, y, a, b] = 0.5
        vals.append(float((c * p).sum()))
    return max(vals)


def margin_separated_tables(n: int, seed: int) -> list[np.ndarray]:
    """Random 2x2 target tables whose verdict the 0.01 grid can resolve.

    Kinds (cycled): entries on the lattice {-1, -1/2, 0, 1/2, 1}, whose
    nonzero determinants are >= 1/4 so any approximate factorization has
    residual > 0.06; exact products u v^T; products with a zeroed factor;
    products with entries of magnitude >= 0.2 and one sign flipped, whose
    residual is at least the smallest magnitude.
    """
    rng = np.random.default_rng(seed)
    lattice = np.array([-1.0, -0.5, 0.0, 0.5, 1.0])
    out = []
    for k in range(n):
        kind = k % 4
        if kind == 0:
            t = rng.choice(lattice, size=(2, 2))
        elif kind in (1, 2):
            u = rng.uniform(-1, 1, 2)
            v = rng.uniform(-1, 1, 2)
            if kind == 2:
                (u if rng.random() < 0.5 else v)[rng.integers(2)] = 0.0
            t = np.outer(u, v)
        else:
            u = rng.choice([-1, 1], 2) * rng.uniform(np.sqrt(0.2), 1, 2)
            v = rng.choice([-1, 1], 2) * rng.uniform(np.sqrt(0.2), 1, 2)
            t = np.outer(u, v)
            i, j = rng.integers(2), rng.integers(2)
            t[i, j] = -t[i, j]
        out.append(t)
    return out
