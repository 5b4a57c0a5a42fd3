"""Seeded random networks for property tests, benchmarks and the acceptance corpus."""
from __future__ import annotations

import random
from fractions import Fraction

from .core_model import PlanarNetwork, change_orientation, simple_directed_paths, validate
from .errors import DegeneracyError, InvalidNetworkError
from .flows import simple_cycles
from .geometry import GaugeFrame, frame_problems
from .le_networks import build_le_network, random_le_tableau


def random_rational(rng: random.Random, lo, hi, den: int = 12) -> Fraction:
    lo, hi = Fraction(lo), Fraction(hi)
    return lo + (hi - lo) * Fraction(rng.randint(1, den - 1), den)


def jitter(network: PlanarNetwork, rng: random.Random, amount=Fraction(1, 3), tries: int = 6) -> PlanarNetwork:
    """Move every internal vertex by a small random offset, keeping the drawing planar."""
    from .transforms import check_vertex_motion

    net = network
    for v in network.internal_vertices:
        for _ in range(tries):
            x, y = net.pos(v)
            dx = random_rational(rng, -amount, amount, 29)
            dy = random_rational(rng, -amount, amount, 31)
            target = (x + dx, y + dy)
            if target[1] <= 0:
                continue
            try:
                net = check_vertex_motion(net, v, target)
                break
            except InvalidNetworkError:
                continue
    return net


def random_frame(network: PlanarNetwork, rng: random.Random, tries: int = 200) -> GaugeFrame:
    for _ in range(tries):
        fr = GaugeFrame(random_rational(rng, -3, 3, 37), random_rational(rng, 0, 3, 41))
        if not frame_problems(network, fr):
            return fr
    raise DegeneracyError("no generic random frame found")


def random_reorientation(network: PlanarNetwork, rng: random.Random, steps: int = 2,
                         prefer_cycles: bool = False) -> PlanarNetwork:
    """Reverse a few random simple cycles or source-to-sink paths.

    With `prefer_cycles`, path reversals that create a directed cycle are
    preferred when one is available.
    """
    net = network
    for _ in range(steps):
        cycles = simple_cycles(net)
        if cycles and rng.random() < 0.5:
            net = change_orientation(net, list(rng.choice(cycles)))
            continue
        paths = simple_directed_paths(net, limit=200)
        if not paths:
            continue
        rng.shuffle(paths)
        choice = paths[0]
        if prefer_cycles and not cycles:
            for p in paths[:25]:
                if simple_cycles(change_orientation(net, list(p))):
                    choice = p
                    break
        net = change_orientation(net, list(choice))
    return net


def random_le_network(rng: random.Random, max_k: int = 3, max_extra: int = 3) -> PlanarNetwork:
    k = rng.randint(1, max_k)
    n = k + rng.randint(1, max_extra)
    return build_le_network(random_le_tableau(rng, k, n))


def random_network(rng: random.Random, max_k: int = 3, max_extra: int = 3, reorient: int = 2,
                   moves: int = 0, prefer_cycles: bool = False) -> PlanarNetwork:
    """A jittered Le-network, optionally reshaped by moves and reoriented."""
    net = random_le_network(rng, max_k, max_extra)
    if moves:
        from .transforms import random_moves

        net = random_moves(net, rng, moves)
    net = jitter(net, rng)
    if reorient:
        net = random_reorientation(net, rng, reorient, prefer_cycles)
    if validate(net):
        raise InvalidNetworkError("generator produced an invalid network")
    return PlanarNetwork(net.vertices.values(), net.edges.values())


def corpus(seed: int, size: int, **kwargs) -> list:
    rng = random.Random(seed)
    return [random_network(rng, **kwargs) for _ in range(size)]
