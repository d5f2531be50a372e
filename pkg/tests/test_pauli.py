import numpy as np
import pytest

from ncselftest.pauli import (CapacityError, DimensionError, PauliString, commutes, embed,
                              multiply, product, random_pauli, symplectic_product, to_dense)

I2 = np.eye(2)
X = np.array([[0, 1], [1, 0]], dtype=complex)
Y = np.array([[0, -1j], [1j, 0]])
Z = np.diag([1.0 + 0j, -1.0])
SINGLE = {"I": I2, "X": X, "Y": Y, "Z": Z}
COEFF = {"": 1, "+": 1, "-": -1, "+i": 1j, "i": 1j, "-i": -1j}


def kron_literal(literal):
    """Oracle: Kronecker product with qubit 1 as the least significant factor."""
    for prefix in ("-i", "+i", "i", "-", "+", ""):
        if literal.startswith(prefix) and literal[len(prefix):].isalpha():
            body = literal[len(prefix):]
            break
    m = np.array([[1.0 + 0j]])
    for ch in reversed(body):
        m = np.kron(m, SINGLE[ch])
    return COEFF[prefix] * m


def random_literal(rng, n):
    prefix = rng.choice(["", "-", "+i", "-i"])
    return prefix + "".join(rng.choice(list("IXYZ"), size=n))


@pytest.mark.parametrize("literal", ["X", "Y", "Z", "I", "-iY", "iXZ", "XYZ", "-ZZI", "+iIYX"])
def test_dense_matches_kron(literal):
    assert np.allclose(to_dense(PauliString.parse(literal)), kron_literal(literal))


def test_xz_is_minus_i_y():
    p = PauliString.parse("X") * PauliString.parse("Z")
    assert p == PauliString.parse("-iY")
    assert p.coefficient == -1j


def test_y_squares_to_identity():
    y = PauliString.parse("Y")
    assert y * y == PauliString.identity(1)
    assert y.is_hermitian


def test_random_products_match_dense(rng):
    for _ in range(1000):
        n = int(rng.integers(1, 7))
        a, b = random_literal(rng, n), random_literal(rng, n)
        p = multiply(PauliString.parse(a), PauliString.parse(b))
        assert np.allclose(to_dense(p), kron_literal(a) @ kron_literal(b))


def test_commutation_matches_dense(rng):
    for _ in range(1000):
        n = int(rng.integers(1, 7))
        p, q = random_pauli(n, rng), random_pauli(n, rng)
        dp, dq = to_dense(p), to_dense(q)
        assert commutes(p, q) == np.allclose(dp @ dq, dq @ dp)
        assert symplectic_product(p, q) == (0 if commutes(p, q) else 1)


def test_associativity(rng):
    for _ in range(500):
        n = int(rng.integers(1, 40))
        p, q, r = (random_pauli(n, rng) for _ in range(3))
        assert (p * q) * r == p * (q * r)


def test_hermiticity_matches_dense(rng):
    for _ in range(300):
        n = int(rng.integers(1, 6))
        p = random_pauli(n, rng)
        d = to_dense(p)
        assert p.is_hermitian == np.allclose(d, d.conj().T)


def test_literal_round_trip(rng):
    for _ in range(500):
        n = int(rng.integers(1, 80))
        p = random_pauli(n, rng)
        assert PauliString.parse(str(p)) == p


def test_printing_conventions():
    assert str(PauliString.parse("+XXX")) == "XXX"
    assert str(PauliString.parse("-XXX")) == "-XXX"
    assert str(PauliString.parse("iY")) == "+iY"


def test_embed_and_product():
    n = 4
    p = product([embed("X", 1, n), embed("Z", 3, n), embed("Y", 4, n)])
    assert p == PauliString.parse("XIZY")
    assert p.weight == 3


def test_dimension_mismatch():
    with pytest.raises(DimensionError):
        multiply(PauliString.parse("XX"), PauliString.parse("XXX"))


def test_bad_literal():
    with pytest.raises(ValueError):
        PauliString.parse("XQ")


def test_dense_cap():
    with pytest.raises(CapacityError):
        to_dense(PauliString.identity(13))


def test_multiword_strings(rng):
    # 130 qubits spans three 64-bit words; compare against bitwise reference
    for _ in range(50):
        p, q = random_pauli(130, rng), random_pauli(130, rng)
        anti = int(np.sum(p.x_bits & q.z_bits) + np.sum(p.z_bits & q.x_bits)) % 2
        assert commutes(p, q) == (anti == 0)
