"""Endomorphism factories shared across test modules."""

from nakex.braid import Permutation
from nakex.platforms import PointMapEndo, SymmetricPlatform


def trivial_endo(platform):
    """Everything maps to the identity."""
    return PointMapEndo(platform, tuple((x, platform.identity()) for x in platform.elements()))


def perm_sign(perm: Permutation) -> int:
    inversions = 0
    images = perm.images
    for i in range(len(images)):
        for j in range(i + 1, len(images)):
            if images[i] > images[j]:
                inversions += 1
    return inversions % 2


def sign_endo(platform: SymmetricPlatform, target: Permutation):
    """x -> target^{sign(x)}; target must be an involution.  Idempotent."""
    return PointMapEndo(
        platform,
        tuple(
            (x, target if perm_sign(x) else platform.identity())
            for x in platform.elements()
        ),
    )


def inner_point_map(platform, p):
    """Conjugation by p realized as an explicit table."""
    return PointMapEndo(
        platform,
        tuple(
            (x, platform.mul(platform.mul(platform.inv(p), x), p))
            for x in platform.elements()
        ),
    )
