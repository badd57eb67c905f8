"""Background parameters and the discrete spectrum.

The master eigenvalue list follows the block layout singles, -singles,
doubles, -doubles, triples, -triples so that every later index range in
the reconstruction matrix matches the printed block bounds verbatim.

Norming data is supplied by the user at the fundamental first-quadrant
eigenvalues only; the data at the mirrored points -xi follows from the
space-time reflection symmetry, and the hat-side data (kept for
validation only) from the z -> a/z symmetry.
"""

from __future__ import annotations

import cmath
from dataclasses import dataclass, field

import numpy as np

from .errors import (
    DegenerateSpectrum,
    NotFirstQuadrant,
    ZeroNormingConstant,
)

DEGENERACY_RTOL = 1e-8


@dataclass(frozen=True)
class BackgroundParams:
    """Boundary data of the nonzero background: q -> q_minus (left), eta*conj(q_minus) (right)."""

    sigma: int
    eta: int
    q_minus: complex
    x0: float = 0.0
    t0: float = 0.0

    def __post_init__(self):
        if self.sigma not in (-1, 1):
            raise ValueError(f"sigma must be +-1, got {self.sigma}")
        if self.eta not in (-1, 1):
            raise ValueError(f"eta must be +-1, got {self.eta}")
        if self.q_minus == 0:
            raise ValueError("q_minus must be nonzero (nonzero boundary conditions)")

    @property
    def q0(self) -> float:
        return abs(self.q_minus)

    @property
    def q_plus(self) -> complex:
        return self.eta * self.q_minus.conjugate()

    @property
    def a(self) -> complex:
        """Uniformization constant sigma*eta*q0^2."""
        return complex(self.sigma * self.eta * self.q0 ** 2)


@dataclass(frozen=True)
class EigenvalueEntry:
    """One fundamental eigenvalue with its pole order and norming constants.

    b, d, h default to None, meaning "use the shift-dressed defaults"
    (see :func:`default_norming`).  d is meaningful for order >= 2 only,
    h for order 3.
    """

    xi: complex
    order: int
    b: complex | None = None
    d: complex | None = None
    h: complex | None = None

    def __post_init__(self):
        if self.order not in (1, 2, 3):
            raise ValueError(f"pole order must be 1, 2 or 3, got {self.order}")
        z = complex(self.xi)
        if not (z.real > 0 and z.imag > 0):
            raise NotFirstQuadrant(f"eigenvalue {z} not in the open first quadrant")
        if self.b is not None and self.b == 0:
            raise ZeroNormingConstant(f"b = 0 at eigenvalue {z}")
        if self.order < 2 and self.d not in (None, 0, 0j):
            raise ValueError(f"d given for order-{self.order} eigenvalue {z}")
        if self.order < 3 and self.h not in (None, 0, 0j):
            raise ValueError(f"h given for order-{self.order} eigenvalue {z}")


def _theta0_jet(bg: BackgroundParams, z: complex):
    """theta0, theta0', theta0'' at z (derivatives in z)."""
    from .jets import jet_const, jet_var

    a = bg.a
    zj = jet_var(z)
    z2 = zj * zj
    iz2 = jet_const(1.0, z) / z2
    f = (z2 - (a * a) * iz2) * 0.25          # k*lambda
    g = f * ((z2 + (a * a) * iz2) * 0.5 + 2 * a)
    th0 = f * bg.x0 + g * bg.t0
    return th0.coeffs[0], th0.coeffs[1], 2 * th0.coeffs[2]


def default_norming(bg: BackgroundParams, xi: complex, order: int):
    """Shift-dressed default norming constants at a fundamental eigenvalue.

    The reflection symmetry (relating data at xi and -xi) combined with
    the z -> -z symmetry pins admissible norming data to c * jet of
    exp(i*theta0(z)) at xi, with c^2 = -sigma.  For zero shifts this is
    the plain b=1, d=0, h=0 choice (sigma = -1).
    """
    t0v, t0p, t0pp = _theta0_jet(bg, xi)
    c = 1.0 + 0j if bg.sigma == -1 else 1j
    E = cmath.exp(1j * t0v)
    b = c * E
    d = -bg.sigma * c * 1j * t0p * E if order >= 2 else 0j
    h = c * E * (1j * t0pp - (3 + 2 * bg.sigma) * t0p ** 2) if order >= 3 else 0j
    return b, d, h


@dataclass(frozen=True)
class DiscreteSpectrum:
    """Validated discrete spectrum with the symmetry-completed master list."""

    bg: BackgroundParams
    entries: tuple                      # fundamentals, grouped by order
    counts: tuple                       # (N1, N2, N3)
    E: np.ndarray                       # master list, length 2L
    orders: np.ndarray                  # pole order per master index
    hat: np.ndarray                     # a / E
    completed: bool = False
    b: np.ndarray | None = None         # norming data at every master point
    d: np.ndarray | None = None
    h: np.ndarray | None = None
    b_hat: np.ndarray | None = None     # hat-side data at fundamental hats (validation only)
    d_hat: np.ndarray | None = None
    h_hat: np.ndarray | None = None
    mbar: complex = 0j                  # principal branch of log(exp2imbar)/2i
    mbar_gauge: complex = 0j            # per-factor-log branch matched by the gauge integral
    exp2imbar: complex = 1 + 0j         # exact product, never re-exponentiated
    _frozen: dict = field(default_factory=dict, repr=False)

    @property
    def L(self) -> int:
        return sum(self.counts)

    @property
    def M(self) -> int:
        n1, n2, n3 = self.counts
        return 2 * n1 + 4 * n2 + 6 * n3

    @property
    def exp_imbar(self) -> complex:
        """Principal square root of exp2imbar; the sign is a b-reparameterization."""
        return np.sqrt(complex(self.exp2imbar))


def validate_spectrum(bg: BackgroundParams, entries) -> DiscreteSpectrum:
    """Build the master list, check invariants. Norming data is not yet completed."""
    entries = [e if isinstance(e, EigenvalueEntry) else EigenvalueEntry(*e) for e in entries]
    singles = [e for e in entries if e.order == 1]
    doubles = [e for e in entries if e.order == 2]
    triples = [e for e in entries if e.order == 3]
    grouped = singles + doubles + triples
    counts = (len(singles), len(doubles), len(triples))

    master, orders = [], []
    for grp in (singles, doubles, triples):
        master.extend(complex(e.xi) for e in grp)
        master.extend(-complex(e.xi) for e in grp)
        orders.extend([grp[0].order] * 2 * len(grp) if grp else [])
    E = np.asarray(master, dtype=complex)
    orders = np.asarray(orders, dtype=int)
    hat = bg.a / E if len(master) else np.zeros(0, dtype=complex)

    # structural point set {+-xi_i, +-hat_i}: pairwise distinct
    pts = []
    for e in grouped:
        z = complex(e.xi)
        zh = bg.a / z
        pts.extend((z, -z, zh, -zh))
    pts = np.asarray(pts, dtype=complex)
    tol = DEGENERACY_RTOL * bg.q0
    for i in range(len(pts)):
        sep = np.abs(pts[i + 1:] - pts[i])
        if sep.size and sep.min() < tol:
            j = i + 1 + int(np.argmin(sep))
            raise DegenerateSpectrum(
                f"spectral points {pts[i]} and {pts[j]} closer than {tol:g}")

    mbar, e2im = compute_mbar(bg, grouped)
    return DiscreteSpectrum(
        bg=bg, entries=tuple(grouped), counts=counts, E=E, orders=orders, hat=hat,
        mbar=mbar, mbar_gauge=gauge_mbar(bg, grouped), exp2imbar=e2im,
    )


def compute_mbar(bg: BackgroundParams, entries):
    """Constant phase from the trace-formula closure at z -> 0.

    Returns (mbar, exp2imbar) with exp2imbar the exact product
    (q+/q-) * prod (hat(xi)/xi)^(2*order) and mbar its principal
    logarithm over 2i.
    """
    prod = bg.q_plus / bg.q_minus
    for e in entries:
        xi = complex(e.xi)
        prod *= ((bg.a / xi) / xi) ** (2 * e.order)
    return cmath.log(prod) / 2j, prod


def gauge_mbar(bg: BackgroundParams, entries) -> complex:
    """Branch of mbar accumulated factor by factor.

    This is the value the gauge-phase integral converges to: each
    eigenvalue contributes its own principal logarithm, so the result
    can differ from the principal branch of the full product by a
    multiple of pi (same exponential).
    """
    acc = cmath.log(bg.q_plus / bg.q_minus)
    for e in entries:
        xi = complex(e.xi)
        acc += 2 * e.order * cmath.log((bg.a / xi) / xi)
    return acc / 2j


def complete_norming_data(bg: BackgroundParams, spectrum: DiscreteSpectrum) -> DiscreteSpectrum:
    """Fill norming data at the -xi master points and the hat-side validation data.

    User data is taken at the fundamental eigenvalues (dressed defaults
    where omitted); the -xi values follow from the reflection symmetry
    written as a pure z <-> -z constraint with theta0 parity, and the
    hat-side values from the z -> a/z relations.
    """
    sig = bg.sigma
    n1, n2, n3 = spectrum.counts
    L = spectrum.L
    bb = np.zeros(2 * L, dtype=complex)
    dd = np.zeros(2 * L, dtype=complex)
    hh = np.zeros(2 * L, dtype=complex)
    bh = np.zeros(L, dtype=complex)
    dh = np.zeros(L, dtype=complex)
    hhat = np.zeros(L, dtype=complex)

    # fundamental master indices per block: [off, off+cnt), mirrored at [off+cnt, off+2cnt)
    offs, fund_idx = [], []
    off = 0
    for cnt in (n1, n2, n3):
        offs.append(off)
        fund_idx.extend(range(off, off + cnt))
        off += 2 * cnt

    for i, e in enumerate(spectrum.entries):
        xi = complex(e.xi)
        b, d, h = e.b, e.d, e.h
        if b is None:
            db, dd_, dh_ = default_norming(bg, xi, e.order)
            b = db
            d = dd_ if d is None else d
            h = dh_ if h is None else h
        else:
            d = 0j if d is None else complex(d)
            h = 0j if h is None else complex(h)
        b = complex(b)
        if b == 0:
            raise ZeroNormingConstant(f"b = 0 at {xi}")

        t0v, t0p, t0pp = _theta0_jet(bg, xi)
        E2 = cmath.exp(2j * t0v)
        bm = sig * E2 / b
        dm = sig * b ** -2 * d * E2 + 2j * t0p * b ** -1 * E2
        hm = (-sig * E2 * b ** -2 * h
              + sig * E2 * b ** -1 * (2 * b ** -2 * d ** 2 - 4 * t0p ** 2
                                      + 2j * t0pp - 4j * t0p * b ** -1 * d))

        n = fund_idx[i]
        cnt = spectrum.counts[e.order - 1]
        bb[n], dd[n], hh[n] = b, d, h
        bb[n + cnt], dd[n + cnt], hh[n + cnt] = bm, dm, hm

        # z -> a/z side, used by the verification suite only
        bh[i] = -sig / b
        dh[i] = xi ** 2 / (bg.eta * bg.q0 ** 2) * d
        hhat[i] = -sig * (xi ** 4 * h + 2 * xi ** 3 * d) / bg.q0 ** 4

    return DiscreteSpectrum(
        bg=bg, entries=spectrum.entries, counts=spectrum.counts,
        E=spectrum.E, orders=spectrum.orders, hat=spectrum.hat,
        completed=True, b=bb, d=dd, h=hh, b_hat=bh, d_hat=dh, h_hat=hhat,
        mbar=spectrum.mbar, mbar_gauge=spectrum.mbar_gauge,
        exp2imbar=spectrum.exp2imbar,
    )


def build_spectrum(bg: BackgroundParams, entries) -> DiscreteSpectrum:
    """validate_spectrum followed by complete_norming_data."""
    return complete_norming_data(bg, validate_spectrum(bg, entries))
