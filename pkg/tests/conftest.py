import random
from pathlib import Path

import pytest
from hypothesis import settings

from petrigame.net import PetriNet
from petrigame.reductions import access_control, random_game

settings.register_profile("default", deadline=None, max_examples=60)
settings.load_profile("default")

ROOT = Path(__file__).resolve().parent.parent
GAMES = ROOT / "games"


def seeded_game(seed: int, env_tokens: int | None = None, **kw):
    rng = random.Random(seed)
    if env_tokens is None:
        env_tokens = rng.randint(0, 2)
    return random_game(rng, env_tokens=env_tokens, **kw)


def conservative_net(seed: int, places: int = 4, transitions: int = 5, tokens: int = 3) -> PetriNet:
    """Random net whose transitions consume and produce equally many tokens."""
    rng = random.Random(seed)
    ps = [f"p{i}" for i in range(places)]
    trans = {}
    for i in range(transitions):
        w = rng.randint(1, 2)
        pre, post = {}, {}
        for _ in range(w):
            a, b = rng.choice(ps), rng.choice(ps)
            pre[a] = pre.get(a, 0) + 1
            post[b] = post.get(b, 0) + 1
        trans[f"t{i}"] = (pre, post)
    init = {}
    for _ in range(tokens):
        p = rng.choice(ps)
        init[p] = init.get(p, 0) + 1
    return PetriNet(ps, trans, init)


@pytest.fixture(scope="session")
def lock():
    return access_control()


@pytest.fixture(scope="session")
def lock_verdict(lock):
    from petrigame.solver import decide

    return decide(lock)
