import pytest

from frobrec.orbifold import new_orbifold
from frobrec.oracle import OracleFailure, _brute_keys, oracle_from_seed, oracle_reconstruct
from frobrec.series import admissible_keys

from conftest import cached_potential


@pytest.mark.parametrize("a", [(1, 1, 1), (1, 1, 2), (1, 2, 2), (2, 3, 5)])
def test_brute_keys_match_enumeration(a):
    A = new_orbifold(*a)
    expected = sorted(((alpha, m) for m in range(4) for alpha in admissible_keys(A, m)), key=lambda k: (k[1], k[0]))
    assert _brute_keys(A, 3) == expected


@pytest.mark.parametrize("a", [(1, 1, 1), (1, 1, 2), (1, 2, 2)])
def test_oracle_matches_solver_small(a):
    assert oracle_from_seed(new_orbifold(*a), 3) == cached_potential(a, 3)


def test_oracle_needs_normalisation():
    # without the e^{t_mu} normalisation the first m = 1 level is underdetermined
    A = new_orbifold(1, 1, 2)
    with pytest.raises(OracleFailure):
        oracle_reconstruct(A, 2, {})
