"""Force-directed placement for co-occurrence networks.

Nodes repel each other in proportion to their degrees, edges pull their
endpoints together in proportion to distance and edge weight, and a weak
gravity keeps disconnected components from drifting apart.  Step size is
adapted globally from the ratio of steady motion to oscillation, so dense
and sparse graphs settle without per-graph tuning.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace

import numpy as np

from .graph import NetworkView

# Hard bounds on the adaptive global speed.
SPEED_MIN = 1e-4
SPEED_MAX = 10.0
# The global speed may at most grow by this factor per step; shrinking is
# uncapped so a sudden oscillation brakes the system immediately.
SPEED_GROWTH = 1.5
# Distances are clamped from below so coincident nodes do not produce
# infinite forces; the repulsion then acts along an arbitrary fixed axis.
MIN_DISTANCE = 1e-9


@dataclass(frozen=True)
class LayoutParams:
    """Tunable constants for the force model and the stepping scheme."""

    k_r: float = 1.0
    k_g: float = 0.05
    edge_weight_exponent: float = 1.0
    tolerance: float = 1e-3
    max_iters: int = 1000
    seed: int = 0
    # Scales the damped global speed into an actual step factor.  Kept well
    # below the stability boundary of the two-body oscillation so simple
    # configurations damp geometrically instead of cycling.
    step_scale: float = 0.05
    jitter_tolerance: float = 1.0
    # Upper bound on any single node's displacement in one step.
    max_step: float = 10.0


@dataclass
class LayoutState:
    """Positions plus the bookkeeping the adaptive stepper carries along."""

    positions: dict[str, tuple[float, float]]
    iteration: int = 0
    converged: bool = False
    speed: float = 1.0
    prev_forces: dict[str, tuple[float, float]] | None = field(default=None, repr=False)


def init_layout(view: NetworkView, seed: int) -> LayoutState:
    """Place nodes deterministically inside the unit disk.

    The same view and seed always give the same positions, and no two nodes
    start at the same point.  An empty view starts converged.
    """
    rng = np.random.default_rng(seed)
    positions: dict[str, tuple[float, float]] = {}
    taken: set[tuple[float, float]] = set()
    for node in view.nodes:
        while True:
            # Uniform over the disk: radius is sqrt of a uniform draw.
            r = math.sqrt(rng.random())
            theta = rng.random() * 2.0 * math.pi
            pos = (r * math.cos(theta), r * math.sin(theta))
            if pos not in taken:
                break
        taken.add(pos)
        positions[node.id] = pos
    return LayoutState(positions=positions, converged=not view.nodes)


def _arrays(view: NetworkView, positions: dict[str, tuple[float, float]]):
    """Unpack a view into the arrays the force kernel works on."""
    ids = [node.id for node in view.nodes]
    order = {node_id: i for i, node_id in enumerate(ids)}
    pos = np.array([positions[node_id] for node_id in ids], dtype=float)
    degree = np.zeros(len(ids), dtype=float)
    edge_idx = np.zeros((len(view.edges), 2), dtype=int)
    edge_w = np.zeros(len(view.edges), dtype=float)
    for k, edge in enumerate(view.edges):
        i, j = order[edge.a], order[edge.b]
        edge_idx[k] = (i, j)
        edge_w[k] = edge.weight
        degree[i] += 1.0
        degree[j] += 1.0
    return ids, pos, degree, edge_idx, edge_w


def _forces(
    pos: np.ndarray,
    degree: np.ndarray,
    edge_idx: np.ndarray,
    edge_w: np.ndarray,
    params: LayoutParams,
) -> np.ndarray:
    """Net force on every node under the current positions."""
    n = pos.shape[0]
    mass = degree + 1.0

    # Repulsion: k_r * mass_a * mass_b / distance, pairwise.
    delta = pos[:, None, :] - pos[None, :, :]
    dist = np.sqrt(np.sum(delta * delta, axis=2))
    np.fill_diagonal(dist, 1.0)
    dist = np.maximum(dist, MIN_DISTANCE)
    coeff = params.k_r * np.outer(mass, mass) / (dist * dist)
    np.fill_diagonal(coeff, 0.0)
    force = np.einsum("ij,ijk->ik", coeff, delta)

    # Attraction along edges: distance * weight^exponent toward the other
    # endpoint, which reduces to -w^exp * (pos_a - pos_b).
    if len(edge_idx):
        a, b = edge_idx[:, 0], edge_idx[:, 1]
        pull = (edge_w ** params.edge_weight_exponent)[:, None] * (pos[a] - pos[b])
        np.add.at(force, a, -pull)
        np.add.at(force, b, pull)

    # Gravity: constant magnitude k_g * mass toward the origin.
    if params.k_g != 0.0 and n:
        radius = np.sqrt(np.sum(pos * pos, axis=1))
        safe = np.maximum(radius, MIN_DISTANCE)
        toward = -pos / safe[:, None]
        toward[radius < MIN_DISTANCE] = 0.0
        force += params.k_g * mass[:, None] * toward

    return force


def compute_forces(
    view: NetworkView,
    positions: dict[str, tuple[float, float]],
    params: LayoutParams,
) -> dict[str, tuple[float, float]]:
    """Net force per node id; exposed so the force model can be inspected."""
    ids, pos, degree, edge_idx, edge_w = _arrays(view, positions)
    force = _forces(pos, degree, edge_idx, edge_w, params)
    return {node_id: (float(f[0]), float(f[1])) for node_id, f in zip(ids, force)}


def layout_step(state: LayoutState, view: NetworkView, params: LayoutParams) -> LayoutState:
    """Advance the layout one synchronous step.

    All forces are computed from the incoming positions, then every node
    moves at once.  The returned state never aliases the input state.
    """
    ids, pos, degree, edge_idx, edge_w = _arrays(view, positions=state.positions)
    n = len(ids)
    if n == 0:
        return replace(state, positions=dict(state.positions), converged=True)

    mass = degree + 1.0
    force = _forces(pos, degree, edge_idx, edge_w, params)

    if state.prev_forces is None:
        prev = np.zeros_like(force)
    else:
        prev = np.array([state.prev_forces[node_id] for node_id in ids], dtype=float)

    # Oscillating nodes see their force flip between steps (high swinging);
    # nodes in steady motion keep it aligned (high traction).  The global
    # speed follows traction over swinging, clamped and growth-limited.
    swinging = np.sqrt(np.sum((force - prev) ** 2, axis=1))
    traction = np.sqrt(np.sum((force + prev) ** 2, axis=1)) / 2.0
    total_swing = float(np.sum(mass * swinging))
    total_traction = float(np.sum(mass * traction))
    if total_swing > 0.0:
        target = params.jitter_tolerance * total_traction / total_swing
    else:
        target = state.speed * SPEED_GROWTH
    speed = min(target, state.speed * SPEED_GROWTH)
    speed = min(max(speed, SPEED_MIN), SPEED_MAX)

    # Per-node factor: the global speed damped by each node's own swinging,
    # then capped so no node can jump further than max_step.
    factor = params.step_scale * speed / (1.0 + speed * np.sqrt(swinging))
    magnitude = np.sqrt(np.sum(force * force, axis=1))
    over = factor * magnitude > params.max_step
    if np.any(over):
        factor = np.where(over, params.max_step / np.maximum(magnitude, MIN_DISTANCE), factor)

    step = factor[:, None] * force
    new_pos = pos + step
    mean_move = float(np.mean(np.sqrt(np.sum(step * step, axis=1))))

    return LayoutState(
        positions={node_id: (float(p[0]), float(p[1])) for node_id, p in zip(ids, new_pos)},
        iteration=state.iteration + 1,
        converged=mean_move < params.tolerance,
        speed=speed,
        prev_forces={node_id: (float(f[0]), float(f[1])) for node_id, f in zip(ids, force)},
    )


def run_layout(
    view: NetworkView,
    params: LayoutParams,
    state: LayoutState | None = None,
) -> LayoutState:
    """Step from seeded initial positions until movement dies down.

    Stops as soon as the mean per-node displacement of a step falls below
    params.tolerance, or after params.max_iters steps.
    """
    if state is None:
        state = init_layout(view, params.seed)
    while not state.converged and state.iteration < params.max_iters:
        state = layout_step(state, view, params)
    return state
