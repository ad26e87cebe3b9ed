"""Point-force (stokeslet) fields for the propulsion forcing.

The swimmer model replaces each flagellar bundle by a single point force on
the z axis a distance lam behind the rear pole of its cell body. For the
mirror pair the tips therefore sit at (0, 0, -+(2 + h + lam)): the body whose
center is at +(1 + h) pushes fluid backward through a force along +z applied
above it, and the mirror body the opposite. The swimmer pair is force-free;
these unbounded-flow fields are diagnostics, while the dynamics couples the
forcing to the spheres through the drag functionals.
"""

from dataclasses import dataclass

import numpy as np

from .errors import DomainError, SingularityError

__all__ = ["oseen_tensor", "tip_height", "StokesletPair", "ambient_field"]


def oseen_tensor(x):
    """Free-space Oseen tensor G(x) = (I / r + x x^T / r^3) / (8 pi).

    x is a length-3 vector; the origin is the singular point.
    """
    x = np.asarray(x, dtype=float)
    if x.shape != (3,):
        raise DomainError(f"expected a length-3 vector, got shape {x.shape}")
    if not np.all(np.isfinite(x)):
        raise DomainError("non-finite evaluation point")
    r = float(np.linalg.norm(x))
    if r == 0.0:
        raise SingularityError("oseen tensor is singular at the origin")
    return (np.eye(3) / r + np.outer(x, x) / r**3) / (8.0 * np.pi)


def tip_height(h, lam):
    """Height of the upper propulsion point: rear pole plus offset lam.

    The upper body occupies c z in [h, 2 + h] on the axis, so its rear pole is
    at z = 2 + h and the point force sits outside both spheres for any lam > 0.
    """
    h = float(h)
    lam = float(lam)
    if h <= 0.0:
        raise DomainError(f"half-gap must be positive, got {h}")
    if lam <= 0.0:
        raise DomainError(f"tip offset must be positive, got {lam}")
    return 2.0 + h + lam


@dataclass(frozen=True)
class StokesletPair:
    """Mirror pair of propulsion point forces of common magnitude f_p >= 0.

    The force applied to the fluid at the upper tip points along +z and at
    the lower tip along -z, the pattern exerted by a pair of pushers swimming
    toward each other.
    """

    h: float
    lam: float
    f_p: float

    def __post_init__(self):
        tip_height(self.h, self.lam)  # validates h, lam
        if not np.isfinite(self.f_p) or self.f_p < 0.0:
            raise DomainError(f"force magnitude must be >= 0, got {self.f_p}")

    @property
    def tip_upper(self):
        return np.array([0.0, 0.0, tip_height(self.h, self.lam)])

    @property
    def tip_lower(self):
        return np.array([0.0, 0.0, -tip_height(self.h, self.lam)])


def ambient_field(pair, x):
    """Velocity of the two bare stokeslets at x, ignoring the spheres.

    u(x) = f_p [G(x - tip_upper) e_z - G(x - tip_lower) e_z].
    Antisymmetric in z, so the z component vanishes on the midplane.
    """
    x = np.asarray(x, dtype=float)
    ez = np.array([0.0, 0.0, 1.0])
    g_up = oseen_tensor(x - pair.tip_upper)
    g_dn = oseen_tensor(x - pair.tip_lower)
    return pair.f_p * (g_up @ ez - g_dn @ ez)
