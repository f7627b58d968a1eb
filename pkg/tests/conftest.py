from pathlib import Path

import numpy as np
import pytest

import csmacoop as cc

TOY_PATH = Path(__file__).resolve().parent.parent / "scenarios" / "toy.scn"


@pytest.fixture(scope="session")
def toy_scenario():
    return cc.load_scenario(TOY_PATH)


@pytest.fixture(scope="session")
def toy(toy_scenario):
    """(network, helper assignment) of the 3-node reference scenario."""
    net = toy_scenario.network
    return net, cc.classify(net)


def random_network(rng: np.random.Generator, n: int, link_prob: float = 0.7) -> cc.Network:
    """Random n-node network with mixed rates; some nodes end up helped."""
    nodes = tuple(f"m{i}" for i in range(n))
    ap_rate = {k: float(rng.uniform(0.3, 4.0)) for k in nodes}
    link_rate = {}
    for a in nodes:
        for b in nodes:
            if a != b and rng.random() < link_prob:
                link_rate[(a, b)] = float(rng.uniform(0.3, 8.0))
    return cc.Network(
        nodes=nodes,
        ap_rate=ap_rate,
        link_rate=link_rate,
        power=float(rng.uniform(0.5, 2.0)),
    )


def brute_force_two_hop(net: cc.Network, k: str):
    """Unrestricted per-node helper rule, evaluated pairwise from raw rates."""
    best, best_time = None, None
    for h in net.nodes:
        if h == k or (k, h) not in net.link_rate:
            continue
        t = 1.0 / net.link_rate[(k, h)] + 1.0 / net.ap_rate[h]
        if best_time is None or t < best_time:
            best, best_time = h, t
    if best is not None and best_time < 1.0 / net.ap_rate[k]:
        return best
    return None
