import numpy as np


def derive_seeds(seed: int, count: int) -> list[int]:
    """Derive independent child seeds from one base seed.

    Child i depends only on (seed, i), so jobs seeded this way give the same
    results whatever order they run in.

    Args:
        seed - Base seed
        count - Number of child seeds

    Returns:
        List of 32-bit seeds.
    """
    children = np.random.SeedSequence(seed).spawn(count)
    return [int(c.generate_state(1)[0]) for c in children]
