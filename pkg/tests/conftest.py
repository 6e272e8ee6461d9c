from functools import lru_cache

from frobrec.orbifold import new_orbifold
from frobrec.reconstruct import reconstruct

# every triple exercised somewhere in the suite
SUITE = [
    (1, 1, 1), (1, 1, 2), (1, 1, 3), (1, 2, 2), (1, 2, 3), (2, 2, 2), (2, 2, 3),
    (2, 2, 5), (3, 3, 3), (2, 3, 4), (2, 3, 5), (2, 3, 6), (2, 3, 7), (3, 4, 5),
]


@lru_cache(maxsize=None)
def cached_potential(a, max_m=None, use_symmetry=True):
    """Reconstructed potential shared between tests; callers must not mutate it."""
    return reconstruct(new_orbifold(*a), max_m, use_symmetry=use_symmetry)


def suite_max_m(a, cap=3):
    from frobrec.series import natural_max_m

    nat = natural_max_m(new_orbifold(*a))
    return cap if nat is None else max(1, min(cap, nat))
