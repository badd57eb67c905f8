"""Independent checks: PDE residual, boundary limits, trace-zero orders,
internal identities, and the small-instance linear-system oracle.

The residual operator evaluates the nonlocal term analytically at the
stencil points (the reflected argument is just another evaluation of
the closed form), so no grid interpolation enters the metric.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import NoDecayDetected, StencilHitSingularity
from .phase import PhaseContext, TraceContext, trace_u11, trace_u22, u11_derivatives
from .poles import coeffs_at
from .reconstruct import Engine, assemble_system, bare_potential
from .spectral import BackgroundParams, DiscreteSpectrum, complete_norming_data

RESIDUAL_H = 1e-3


# ------------------------------------------------------------------ residual

def _stencil(bg: BackgroundParams, x: float, t: float, h: float):
    x0, t0 = bg.x0, bg.t0
    return [(x, t), (x + h, t), (x - h, t), (x, t + h), (x, t - h),
            (x0 - x - h, t0 - t), (x0 - x + h, t0 - t)]


def _combine(bg: BackgroundParams, qq: dict, x: float, t: float, h: float) -> complex:
    x0, t0 = bg.x0, bg.t0
    dqt = (qq[(x, t + h)] - qq[(x, t - h)]) / (2 * h)
    dqxx = (qq[(x + h, t)] - 2 * qq[(x, t)] + qq[(x - h, t)]) / h ** 2
    gp = qq[(x + h, t)] ** 2 * qq[(x0 - x - h, t0 - t)]
    gm = qq[(x - h, t)] ** 2 * qq[(x0 - x + h, t0 - t)]
    return dqt - 1j * dqxx - bg.sigma * (gp - gm) / (2 * h)


def _eval_points(q_eval, pts):
    """Map points to q values; q_eval is an Engine-like object or a callable."""
    if hasattr(q_eval, "q_points"):
        samples = q_eval.q_points(pts)
        vals, sing = {}, {}
        for p, s in zip(pts, samples):
            vals[p] = s.q
            sing[p] = s.singular
        return vals, sing
    vals = {p: complex(q_eval(*p)) for p in pts}
    return vals, {p: not np.isfinite(vals[p]) for p in pts}


def pde_residual(q_eval, bg: BackgroundParams, x: float, t: float,
                 h: float = RESIDUAL_H) -> complex:
    """R = D_t q - i D_xx q - sigma D_x[q^2(x,t) q(x0-x, t0-t)] with central stencils."""
    pts = _stencil(bg, x, t, h)
    vals, sing = _eval_points(q_eval, pts)
    if any(sing.values()):
        raise StencilHitSingularity(f"singular stencil point near ({x}, {t})")
    return _combine(bg, vals, x, t, h)


@dataclass
class ResidualReport:
    points: list
    residuals: list
    max_abs_residual: float
    richardson_order: float
    skipped_singular: int
    h: float = RESIDUAL_H

    @property
    def passed(self) -> bool:
        return (self.max_abs_residual <= 1e-4
                and abs(self.richardson_order - 2.0) <= 0.3
                and len(self.residuals) > 0)


def residual_scan(q_eval, bg: BackgroundParams, points, h: float = RESIDUAL_H) -> ResidualReport:
    """Residuals at many points, plus a Richardson order from step doubling.

    All stencil evaluations (both step sizes) go through one batched
    call so rows share their gauge quadratures.
    """
    pts_all = []
    for (x, t) in points:
        pts_all.extend(_stencil(bg, x, t, h))
        pts_all.extend(_stencil(bg, x, t, 2 * h))
    pts_all = list(dict.fromkeys(pts_all))
    vals, sing = _eval_points(q_eval, pts_all)

    kept, residuals, orders = [], [], []
    skipped = 0
    for (x, t) in points:
        st1 = _stencil(bg, x, t, h)
        st2 = _stencil(bg, x, t, 2 * h)
        if any(sing[p] for p in st1 + st2):
            skipped += 1
            continue
        r1 = _combine(bg, vals, x, t, h)
        r2 = _combine(bg, vals, x, t, 2 * h)
        kept.append((x, t))
        residuals.append(r1)
        if abs(r1) > 2e-6 and abs(r2) > 2e-6:   # above the evaluation noise floor
            orders.append(np.log2(abs(r2) / abs(r1)))
    max_abs = max((abs(r) for r in residuals), default=np.inf)
    order = float(np.median(orders)) if orders else float("nan")
    return ResidualReport(points=kept, residuals=residuals,
                          max_abs_residual=float(max_abs),
                          richardson_order=order, skipped_singular=skipped, h=h)


# ------------------------------------------------------------------ boundary

@dataclass
class BoundaryReport:
    X_minus: float
    X_plus: float
    err_minus: float
    err_plus: float

    def passed(self, tol: float = 1e-6) -> bool:
        return self.err_minus <= tol and self.err_plus <= tol


def boundary_check(q_eval, bg: BackgroundParams, t: float = 0.0,
                   tol: float = 1e-6) -> BoundaryReport:
    """|q(-X) - q_-| and |q(+X) - q_+| at a far field X chosen by tail probing."""
    base = 8.0
    X = base
    best = None
    for _ in range(12):
        pts = [(-X + bg.x0 / 2, t), (X + bg.x0 / 2, t)]
        vals, sing = _eval_points(q_eval, pts)
        if not any(sing.values()):
            em = abs(vals[pts[0]] - bg.q_minus)
            ep = abs(vals[pts[1]] - bg.q_plus)
            best = BoundaryReport(X_minus=pts[0][0], X_plus=pts[1][0],
                                  err_minus=float(em), err_plus=float(ep))
            if em < tol * 1e-2 and ep < tol * 1e-2:
                return best
        X *= 2
    if best is None:
        raise NoDecayDetected(f"no regular far-field sample found at row t={t}")
    return best


# --------------------------------------------------------------- trace zeros

@dataclass
class TraceZeroReport:
    rows: list
    passed: bool


def trace_zero_check(tc: TraceContext, spectrum: DiscreteSpectrum,
                     below_rel: float = 1e-10, lead_floor: float = 1e-8) -> TraceZeroReport:
    """Vanishing orders of u11 at every master eigenvalue."""
    rows, ok = [], True
    for n, z in enumerate(spectrum.E):
        m = int(spectrum.orders[n])
        ud = u11_derivatives(tc, complex(z))
        lead = abs(ud[m])
        below = max(abs(ud[k]) for k in range(m))
        entry_ok = lead >= lead_floor and below <= below_rel * lead
        ok &= entry_ok
        rows.append({"eigenvalue": complex(z), "order": m,
                     "leading": lead, "below_max": below, "ok": entry_ok})
    return TraceZeroReport(rows=rows, passed=ok)


# -------------------------------------------------------------------- oracle

def oracle_bare(spectrum: DiscreteSpectrum, tc: TraceContext, ctx: PhaseContext,
                x: float, t: float) -> complex:
    """Bare potential from a generic dense solve of the value/derivative
    equations closed by the z -> a/z symmetry, then the scalar
    reconstruction sum.  Independent of the block-matrix path."""
    s = spectrum
    bg = s.bg
    n1, n2, n3 = s.counts
    L = s.L
    twoL = 2 * L
    sing = list(range(0, 2 * n1))
    doub = list(range(2 * n1, 2 * n1 + 2 * n2))
    trip = list(range(2 * n1 + 2 * n2, twoL))
    dt_list = doub + trip
    d1_of = {n: twoL + i for i, n in enumerate(dt_list)}
    d2_of = {n: twoL + len(dt_list) + i for i, n in enumerate(trip)}
    M = twoL + len(dt_list) + len(trip)
    if M == 0:
        return complex(bg.q_minus)

    cf = {n: coeffs_at(s, tc, ctx, n, x, t) for n in range(twoL)}
    qm = bg.q_minus
    a = bg.a
    A_mat = np.zeros((M, M), complex)
    rhs = np.zeros(M, complex)

    def add_sums(row, hk, order):
        # order = 0,1,2: which z-derivative of the pole expansion
        for n in sing:
            A = cf[n].A
            dd = hk - s.E[n]
            coef = (A / dd, -A / dd ** 2, 2 * A / dd ** 3)[order]
            A_mat[row, n] -= coef
        for n in doub:
            B, C = cf[n].B, cf[n].C
            dd = hk - s.E[n]
            if order == 0:
                cv, cd = B / dd ** 2 + B * C / dd, B / dd
            elif order == 1:
                cv, cd = -(2 * B / dd ** 3 + B * C / dd ** 2), -B / dd ** 2
            else:
                cv, cd = 6 * B / dd ** 4 + 2 * B * C / dd ** 3, 2 * B / dd ** 3
            A_mat[row, n] -= cv
            A_mat[row, d1_of[n]] -= cd
        for n in trip:
            D, E, F = cf[n].D, cf[n].E, cf[n].F
            dd = hk - s.E[n]
            if order == 0:
                cv = D * F / dd + D * E / dd ** 2 + D / dd ** 3
                cd = D * E / dd + D / dd ** 2
                c2 = D / (2 * dd)
            elif order == 1:
                cv = -(D * F / dd ** 2 + 2 * D * E / dd ** 3 + 3 * D / dd ** 4)
                cd = -(D * E / dd ** 2 + 2 * D / dd ** 3)
                c2 = -D / (2 * dd ** 2)
            else:
                cv = 2 * D * F / dd ** 3 + 6 * D * E / dd ** 4 + 12 * D / dd ** 5
                cd = 2 * D * E / dd ** 3 + 6 * D / dd ** 4
                c2 = D / dd ** 3
            A_mat[row, n] -= cv
            A_mat[row, d1_of[n]] -= cd
            A_mat[row, d2_of[n]] -= c2

    row = 0
    for k in range(twoL):                       # value equations at hat(xi_k)
        hk = s.hat[k]
        A_mat[row, k] = -1j * qm / hk           # closure: nu11 = -(i q_-/hk) v_k
        add_sums(row, hk, 0)
        rhs[row] = -1j * qm / hk
        row += 1
    for k in dt_list:                           # first-derivative equations
        hk = s.hat[k]
        A_mat[row, k] = 1j * qm / hk ** 2
        A_mat[row, d1_of[k]] = 1j * a * qm / hk ** 3
        add_sums(row, hk, 1)
        rhs[row] = 1j * qm / hk ** 2
        row += 1
    for k in trip:                              # second-derivative equations
        hk = s.hat[k]
        A_mat[row, k] = -2j * qm / hk ** 3
        A_mat[row, d1_of[k]] = -4j * a * qm / hk ** 4
        A_mat[row, d2_of[k]] = -1j * qm * bg.q0 ** 4 / hk ** 5
        add_sums(row, hk, 2)
        rhs[row] = -2j * qm / hk ** 3
        row += 1

    w = np.linalg.solve(A_mat, rhs)
    total = 0j
    for n in sing:
        total += cf[n].A * w[n]
    for n in doub:
        total += cf[n].B * cf[n].C * w[n] + cf[n].B * w[d1_of[n]]
    for n in trip:
        total += (cf[n].D * cf[n].F * w[n] + cf[n].D * cf[n].E * w[d1_of[n]]
                  + cf[n].D / 2 * w[d2_of[n]])
    return complex(qm + 1j * total)


# ------------------------------------------------------------ identity suite

@dataclass
class IdentityCheck:
    name: str
    max_error: float
    tol: float

    @property
    def passed(self) -> bool:
        return self.max_error <= self.tol


@dataclass
class IdentityReport:
    checks: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def add(self, name, err, tol):
        self.checks.append(IdentityCheck(name=name, max_error=float(err), tol=tol))


def identity_suite(spectrum: DiscreteSpectrum, tc: TraceContext, ctx: PhaseContext,
                   seed: int = 0, gauge_points: int = 4) -> IdentityReport:
    """Internal consistency checks for one scenario."""
    rng = np.random.default_rng(seed)
    bg = spectrum.bg
    rep = IdentityReport()

    # +- pair consistency of the completed norming data
    err = 0.0
    if spectrum.L:
        from .spectral import _theta0_jet
        n1, n2, n3 = spectrum.counts
        off = 0
        idx = []
        for cnt in (n1, n2, n3):
            idx.extend((off + i, off + cnt + i) for i in range(cnt))
            off += 2 * cnt
        for i_plus, i_minus in idx:
            t0v, _, _ = _theta0_jet(bg, complex(spectrum.E[i_plus]))
            lhs = spectrum.b[i_plus] * spectrum.b[i_minus]
            rhs = bg.sigma * np.exp(2j * t0v)
            err = max(err, abs(lhs - rhs) / max(abs(rhs), 1e-300))
    rep.add("pm_pair_norming", err, 1e-12)

    # hat-side completion involution
    err = 0.0
    for i, e in enumerate(spectrum.entries or ()):
        xi = complex(e.xi)
        xh = bg.a / xi
        bh, dh, hh = spectrum.b_hat[i], spectrum.d_hat[i], spectrum.h_hat[i]
        b2 = -bg.sigma / bh
        d2 = xh ** 2 / (bg.eta * bg.q0 ** 2) * dh
        h2 = -bg.sigma * (xh ** 4 * hh + 2 * xh ** 3 * dh) / bg.q0 ** 4
        n = _fund_master_index(spectrum, i)
        scale = max(abs(spectrum.b[n]), 1.0)
        err = max(err, abs(b2 - spectrum.b[n]) / scale,
                  abs(d2 - spectrum.d[n]) / max(abs(spectrum.d[n]), 1.0),
                  abs(h2 - spectrum.h[n]) / max(abs(spectrum.h[n]), 1.0))
    rep.add("hat_involution", err, 1e-12)

    # u11 * u22 = 1 and evenness off the pole sets
    err_rec, err_even = 0.0, 0.0
    for _ in range(12):
        z = complex(rng.uniform(0.3, 2.5) * np.exp(1j * rng.uniform(0.05, 1.5)))
        try:
            u1, u2 = trace_u11(tc, z), trace_u22(tc, z)
            err_rec = max(err_rec, abs(u1 * u2 - 1))
            err_even = max(err_even, abs(trace_u11(tc, -z) - u1) / max(abs(u1), 1e-30))
        except Exception:
            continue
    rep.add("u11_u22_reciprocal", err_rec, 1e-10)
    rep.add("u11_even", err_even, 1e-12)

    # Schur route vs explicit determinants at moderate points
    err = 0.0
    for _ in range(4):
        x = float(rng.uniform(-4, 4))
        t = float(rng.uniform(-2, 2))
        sysm = assemble_system(spectrum, tc, ctx, x, t)
        if sysm.M == 0:
            break
        try:
            P, cond = bare_potential(sysm, bg.q_minus)
        except Exception:
            continue
        if cond > 1e10:
            continue
        big = np.zeros((sysm.M + 1, sysm.M + 1), complex)
        big[0, 1:] = sysm.Y
        big[1:, 0] = sysm.H
        big[1:, 1:] = sysm.G
        P_det = bg.q_minus * (1 + np.linalg.det(big) / np.linalg.det(sysm.G))
        err = max(err, abs(P - P_det) / (1 + abs(P)))
    rep.add("schur_vs_determinant", err, 1e-9)

    # generic dense solve of the closed equations vs the engine
    eng = Engine(spectrum)
    err = 0.0
    for _ in range(4):
        x = float(rng.uniform(-4, 4))
        t = float(rng.uniform(-2, 2))
        Po = oracle_bare(spectrum, tc, ctx, x, t)
        Pe, _, sflag = eng.bare(np.array([x]), np.array([t]))
        if sflag[0]:
            continue
        err = max(err, abs(Po - Pe[0]) / (1 + abs(Po)))
    rep.add("linear_solve_oracle", err, 1e-9)

    # gauge sum rule against the gauge-branch mbar
    err = 0.0
    cnt = 0
    for _ in range(gauge_points):
        x = float(rng.uniform(-6, 6))
        t = float(rng.uniform(-3, 3))
        try:
            m1, b1 = eng.gauge_row(t, np.array([x]))
            m2, b2 = eng.gauge_row(bg.t0 - t, np.array([bg.x0 - x]))
        except Exception:
            continue
        if b1 is not None or b2 is not None:
            continue
        err = max(err, abs(m1[0] + m2[0] - spectrum.mbar_gauge))
        cnt += 1
    rep.add("gauge_sum_rule", err if cnt else float("nan"), 1e-8)
    return rep


def _fund_master_index(spectrum: DiscreteSpectrum, i: int) -> int:
    off = 0
    j = i
    for cnt, order in zip(spectrum.counts, (1, 2, 3)):
        if j < cnt:
            return off + j
        j -= cnt
        off += 2 * cnt
    raise IndexError(i)
