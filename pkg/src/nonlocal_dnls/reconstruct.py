"""Reconstruction of q(x,t) from the discrete scattering data.

The bare potential is the determinant ratio P = q_-(1 - Y G^{-1} H) of
the block system assembled from the printed kernels; the gauge phase
m_-(x,t) is an adaptive quadrature of the bare-potential product along
the row, and q = e^{2i m_-} P.

The batched engine factors the exponential e^{-2i theta(xi_n)} out of
each matrix column analytically and clips it against the constant
delta block, so assembly never overflows at large |x| or |t|; partial
pivoting then sees only the intrinsic conditioning.
"""

from __future__ import annotations

import os
from dataclasses import dataclass

import numpy as np

from .errors import QuadratureNoConvergence, SingularG
from .jets import jet_var
from .phase import PhaseContext, TraceContext, theta, u11_derivatives
from .poles import LEADING_DERIV_FLOOR, coeffs_at
from .spectral import BackgroundParams, DiscreteSpectrum

COND_LIMIT = 1e14
GAUGE_TOL = 1e-9
_GL12 = np.polynomial.legendre.leggauss(12)
_GL24 = np.polynomial.legendre.leggauss(24)
_BASE_PANEL = 0.5
_MAX_REFINE = 26
_MIN_PANEL = 1e-7
_PROBE_STEP = 4.0
_PROBE_MAX_DOUBLINGS = 13
_CHUNK = 16384

VAL, D1, D2 = 0, 1, 2


@dataclass(frozen=True)
class LinearSystem:
    """The assembled M x M system at one (x, t)."""

    M: int
    G: np.ndarray
    Y: np.ndarray
    H: np.ndarray
    col_eig: np.ndarray    # master index per column
    col_kind: np.ndarray   # VAL / D1 / D2 per column
    row_eig: np.ndarray
    row_kind: np.ndarray


@dataclass(frozen=True)
class SolutionSample:
    x: float
    t: float
    P: complex
    gauge: complex
    q: complex
    cond_estimate: float
    singular: bool = False


@dataclass(frozen=True)
class GaugePhase:
    """Gauge phase bookkeeping for one evaluation."""

    mbar: complex
    m_minus: complex

    @property
    def m_plus(self) -> complex:
        return self.m_minus - self.mbar


class _Structure:
    """(x,t)-independent assembly data for one spectrum."""

    def __init__(self, spectrum: DiscreteSpectrum):
        s = spectrum
        n1, n2, n3 = s.counts
        L = s.L
        sing = list(range(0, 2 * n1))
        doub = list(range(2 * n1, 2 * n1 + 2 * n2))
        trip = list(range(2 * n1 + 2 * n2, 2 * L))
        cols = ([(n, VAL) for n in sing] + [(n, VAL) for n in doub]
                + [(n, D1) for n in doub] + [(n, VAL) for n in trip]
                + [(n, D1) for n in trip] + [(n, D2) for n in trip])
        rows = ([(n, VAL) for n in sing + doub + trip]
                + [(n, D1) for n in doub + trip] + [(n, D2) for n in trip])
        M = len(cols)
        assert M == s.M and len(rows) == M
        self.M = M
        self.col_eig = np.array([c[0] for c in cols], dtype=int)
        self.col_kind = np.array([c[1] for c in cols], dtype=int)
        self.row_eig = np.array([r[0] for r in rows], dtype=int)
        self.row_kind = np.array([r[1] for r in rows], dtype=int)

        if M == 0:
            self.K1 = self.K2 = self.K3 = self.Dconst = np.zeros((0, 0), complex)
            self.H = np.zeros(0, complex)
            return

        hat_row = s.hat[self.row_eig]
        delta = hat_row[:, None] - s.E[self.col_eig][None, :]
        inv = 1.0 / delta
        rk = self.row_kind[:, None]
        self.K1 = np.where(rk == VAL, inv, np.where(rk == D1, inv ** 2, 2 * inv ** 3))
        self.K2 = np.where(rk == VAL, inv ** 2, np.where(rk == D1, 2 * inv ** 3, 6 * inv ** 4))
        self.K3 = np.where(rk == VAL, inv ** 3, np.where(rk == D1, 3 * inv ** 4, 12 * inv ** 5))

        bg = s.bg
        qp, qmc, q0 = bg.q_plus, np.conj(bg.q_minus), bg.q0
        sig = bg.sigma
        D = np.zeros((M, M), complex)
        same = self.row_eig[:, None] == self.col_eig[None, :]
        xi = s.E[self.row_eig]
        for k in range(M):
            for n in range(M):
                if not same[k, n]:
                    continue
                rk_, ck_ = self.row_kind[k], self.col_kind[n]
                z = xi[k]
                if rk_ == VAL and ck_ == VAL:
                    D[k, n] = 1j * sig * z / qp
                elif rk_ == D1 and ck_ == VAL:
                    D[k, n] = 1j * z ** 2 / (qmc * q0 ** 2)
                elif rk_ == D1 and ck_ == D1:
                    D[k, n] = 1j * z ** 3 / (qmc * q0 ** 2)
                elif rk_ == D2 and ck_ == VAL:
                    D[k, n] = 2j * sig * z ** 3 / (qp * q0 ** 4)
                elif rk_ == D2 and ck_ == D1:
                    D[k, n] = 4j * sig * z ** 4 / (qp * q0 ** 4)
                elif rk_ == D2 and ck_ == D2:
                    D[k, n] = 1j * sig * z ** 5 / (qp * q0 ** 4)
        self.Dconst = D

        # singles columns pair value rows only: derivative rows belong to
        # doubles/triples eigenvalues, disjoint from the singles set
        col_order = s.orders[self.col_eig]
        bad = same & (col_order[None, :] == 1) & (self.row_kind[:, None] != VAL)
        assert not bad.any(), "derivative row collided with a single-pole column"

        self.H = np.where(self.row_kind == VAL, 1 / hat_row,
                          np.where(self.row_kind == D1, 1 / hat_row ** 2, 2 / hat_row ** 3))


class Engine:
    """Vectorized bare-potential evaluator for one spectrum."""

    def __init__(self, spectrum: DiscreteSpectrum):
        if not spectrum.completed:
            raise ValueError("engine needs completed norming data")
        self.spectrum = spectrum
        self.bg = spectrum.bg
        self.ctx = PhaseContext(self.bg)
        self.tc = TraceContext(spectrum)
        self.struct = _Structure(spectrum)
        s = spectrum
        twoL = len(s.E)
        # theta(z; x, t) = f(z) x + g(z) t; store f, f', f'', g, g', g'' per master point
        self.f = np.zeros((twoL, 3), complex)
        self.g = np.zeros((twoL, 3), complex)
        self.ud = np.zeros((twoL, 6), complex)
        for n in range(twoL):
            z = complex(s.E[n])
            jf = theta(self.ctx, jet_var(z), 1.0, 0.0)
            jg = theta(self.ctx, jet_var(z), 0.0, 1.0)
            self.f[n] = (jf.coeffs[0], jf.coeffs[1], 2 * jf.coeffs[2])
            self.g[n] = (jg.coeffs[0], jg.coeffs[1], 2 * jg.coeffs[2])
            self.ud[n] = u11_derivatives(self.tc, z)
            m = s.orders[n]
            if abs(self.ud[n][m]) < LEADING_DERIV_FLOOR:
                raise SingularG(f"vanishing leading u11 derivative at {z}")
        # exponential envelope data for deterministic tail truncation:
        # |coefficient_n| ~ (b_n/u^(m)) e^{rate_n x + tdrift_n t}
        if twoL:
            self._rate = 2 * self.f[:, 0].imag
            self._tdrift = 2 * self.g[:, 0].imag
            mm = s.orders
            bu = np.abs(s.b) / np.maximum(np.abs(self.ud[np.arange(twoL), mm]), 1e-300)
            self._lnbu = np.log(np.maximum(bu, 1e-300))
            self._rate = np.maximum(self._rate, 1e-3)

    # ------------------------------------------------------------------ bare
    def bare(self, x, t):
        """P, cond estimate and singular mask at arrays of points."""
        x = np.atleast_1d(np.asarray(x, dtype=float))
        t = np.atleast_1d(np.asarray(t, dtype=float))
        npts = x.size
        if self.struct.M == 0:
            return (np.full(npts, self.bg.q_minus, dtype=complex),
                    np.ones(npts), np.zeros(npts, dtype=bool))
        P = np.empty(npts, dtype=complex)
        cond = np.empty(npts)
        sing = np.zeros(npts, dtype=bool)
        for lo in range(0, npts, _CHUNK):
            hi = min(npts, lo + _CHUNK)
            self._bare_chunk(x[lo:hi], t[lo:hi], P[lo:hi], cond[lo:hi], sing[lo:hi])
        return P, cond, sing

    def _coeff_bundles(self, x, t):
        """Per-column K1/K2/K3 coefficients with the exponential factored out."""
        s = self.spectrum
        st = self.struct
        ce = st.col_eig
        # theta', theta'' at the column eigenvalues
        thp = self.f[ce, 1][:, None] * x[None, :] + self.g[ce, 1][:, None] * t[None, :]
        thpp = self.f[ce, 2][:, None] * x[None, :] + self.g[ce, 2][:, None] * t[None, :]
        b = s.b[ce][:, None]
        d = s.d[ce][:, None]
        h = s.h[ce][:, None]
        ud = self.ud[ce]
        ords = s.orders[ce]
        kind = st.col_kind
        ncols, npts = len(ce), x.size
        y1 = np.zeros((ncols, npts), complex)
        y2 = np.zeros((ncols, npts), complex)
        y3 = np.zeros((ncols, npts), complex)
        for j in range(ncols):
            m, kd = ords[j], kind[j]
            if m == 1:
                y1[j] = b[j] / ud[j, 1]
            elif m == 2:
                Bh = 2 * b[j] / ud[j, 2]
                if kd == VAL:
                    C = d[j] / b[j] - 2j * thp[j] - ud[j, 3] / (3 * ud[j, 2])
                    y1[j] = Bh * C
                    y2[j] = Bh
                else:
                    y1[j] = Bh
            else:
                Dh = 6 * b[j] / ud[j, 3]
                E = d[j] / b[j] - 2j * thp[j] - ud[j, 4] / (4 * ud[j, 3])
                if kd == VAL:
                    F = (h[j] / (2 * b[j]) - d[j] * ud[j, 4] / (4 * b[j] * ud[j, 3])
                         + ud[j, 4] ** 2 / (16 * ud[j, 3] ** 2) - ud[j, 5] / (20 * ud[j, 3])
                         + 2 * thp[j] ** 2 - 1j * thpp[j] - 2j * thp[j] * E)
                    y1[j], y2[j], y3[j] = Dh * F, Dh * E, Dh
                elif kd == D1:
                    y1[j], y2[j] = Dh * E, Dh
                else:
                    y1[j] = Dh / 2
        # exponent of the column exponential e^{-2 i theta}
        pexp = -2j * (self.f[ce, 0][:, None] * x[None, :] + self.g[ce, 0][:, None] * t[None, :])
        return y1, y2, y3, pexp

    def _bare_chunk(self, x, t, P_out, cond_out, sing_out):
        st = self.struct
        y1, y2, y3, pexp = self._coeff_bundles(x, t)
        decay = pexp.real <= 0
        colfac = np.exp(np.where(decay, pexp, 0))          # e^p on decaying columns, else 1
        dfac = np.exp(np.where(decay, 0, -pexp))           # 1, else e^{-p}; |.| <= 1 always
        npts = x.size
        # G[p] = sum_i Ki * yi_scaled + Dconst * dfac  (column-wise factors)
        y1s = (y1 * colfac).T                              # (npts, M)
        y2s = (y2 * colfac).T
        y3s = (y3 * colfac).T
        G = (st.K1[None, :, :] * y1s[:, None, :]
             + st.K2[None, :, :] * y2s[:, None, :]
             + st.K3[None, :, :] * y3s[:, None, :]
             + st.Dconst[None, :, :] * dfac.T[:, None, :])
        Y = y1s
        bad = ~np.isfinite(G).all(axis=(1, 2)) | ~np.isfinite(Y).all(axis=1)
        if bad.any():
            G[bad] = np.eye(st.M)
            Y[bad] = 0
        # column equilibration
        cn = np.abs(G).max(axis=1)
        cn[cn == 0] = 1.0
        G /= cn[:, None, :]
        Y = Y / cn
        try:
            Ginv = np.linalg.inv(G)
        except np.linalg.LinAlgError:
            Ginv = np.empty_like(G)
            for i in range(npts):
                try:
                    Ginv[i] = np.linalg.inv(G[i])
                except np.linalg.LinAlgError:
                    Ginv[i] = np.eye(st.M)
                    bad[i] = True
        cond = (np.abs(G).sum(axis=1).max(axis=1)
                * np.abs(Ginv).sum(axis=1).max(axis=1))
        ygh = np.einsum("pj,pjk,k->p", Y, Ginv, st.H)
        P = self.bg.q_minus * (1 - ygh)
        sing = bad | ~np.isfinite(P) | (cond > COND_LIMIT)
        P_out[:] = np.where(sing, np.nan, P)
        cond_out[:] = cond
        sing_out[:] = sing

    # ----------------------------------------------------------------- gauge
    def _gauge_integrand(self, ys, t):
        Pv, _, s1 = self.bare(ys, np.full(ys.size, t))
        Pr, _, s2 = self.bare(self.bg.x0 - ys, np.full(ys.size, self.bg.t0 - t))
        bg = self.bg
        f = 0.5 * (bg.sigma * self.spectrum.exp2imbar * Pv * Pr
                   - bg.sigma * bg.eta * bg.q0 ** 2)
        f[s1 | s2] = np.nan
        return f

    def _influence(self, t):
        """Envelope positions where each column coefficient reaches O(1)."""
        xstar = -(self._lnbu + self._tdrift * t) / self._rate
        pad = 30.0 / self._rate + 5.0
        return float((xstar - pad).min()), float((xstar + pad).max())

    def _find_left_edge(self, t, x_first, tol):
        """Leftmost quadrature point, smooth in t.

        The envelope estimate keeps adjacent stencil rows on the same
        truncation footing; a single probe validates it and falls back
        to geometric probing only if the estimate is inadequate.
        """
        if self.spectrum.L == 0:
            return x_first - _PROBE_STEP
        bg = self.bg
        left_here, _ = self._influence(t)
        _, right_refl = self._influence(bg.t0 - t)
        y_left = min(x_first, 0.0, left_here, bg.x0 - right_refl) - 4.0
        tail = tol * 1e-3
        mag = abs(self._gauge_integrand(np.array([y_left]), t)[0])
        if mag < 10 * tail or not np.isfinite(mag):
            return y_left
        # fallback: geometric probing with a three-point window
        dists = _PROBE_STEP * 2.0 ** np.arange(_PROBE_MAX_DOUBLINGS)
        ys = y_left - dists
        mags = np.abs(self._gauge_integrand(ys, t))
        for j in range(len(ys) - 2):
            if np.all(mags[j:j + 3] < tail):
                return float(ys[j])
        jmin = int(np.nanargmin(mags)) if np.isfinite(mags).any() else -1
        if jmin >= 0 and mags[jmin] < tol * 1e-1:
            return float(ys[jmin])
        raise QuadratureNoConvergence(
            f"gauge integrand tail not below {tail:g} at row t={t}: probes {mags.tolist()}")

    def _panel_integrals(self, a, bnd, t):
        """GL-12 and GL-24 integrals over panels [a_i, b_i]; nan where singular."""
        mids = 0.5 * (a + bnd)
        half = 0.5 * (bnd - a)
        out = []
        for nodes, wts in (_GL12, _GL24):
            ys = (mids[:, None] + half[:, None] * nodes[None, :]).ravel()
            f = self._gauge_integrand(ys, t).reshape(len(a), -1)
            out.append((f * wts[None, :]).sum(axis=1) * half)
        return out[0], out[1]

    def gauge_row(self, t, xs, tol=GAUGE_TOL):
        """Cumulative m_- at sorted positions xs along one row.

        Returns (m_values, singular_from) where singular_from is the
        leftmost x beyond which the quadrature crossed a non-integrable
        point (None if the whole row is clean).
        """
        xs = np.asarray(xs, dtype=float)
        if self.spectrum.L == 0:
            return np.zeros(xs.size, complex), None
        y_left = self._find_left_edge(t, xs[0], tol)
        edges = [y_left]
        allpts = np.concatenate([[y_left], xs])
        for lo, hi in zip(allpts[:-1], allpts[1:]):
            gap = hi - lo
            if gap <= 0:
                continue
            nsub = max(1, int(np.ceil(gap / _BASE_PANEL)))
            edges.extend(lo + gap * (np.arange(1, nsub + 1) / nsub))
        edges = np.asarray(edges)
        a = edges[:-1].copy()
        bnd = edges[1:].copy()
        width_total = max(edges[-1] - edges[0], 1.0)
        i12, i24 = self._panel_integrals(a, bnd, t)
        vals = i24.copy()
        err = np.abs(i24 - i12)
        budget = np.maximum(tol * (bnd - a) / width_total, 1e-15)
        bad_edge = None
        for _ in range(_MAX_REFINE):
            fail = (err > budget) | ~np.isfinite(vals)
            if not fail.any():
                break
            idx = np.where(fail)[0]
            too_small = (bnd[idx] - a[idx]) < _MIN_PANEL
            if too_small.any():
                first = a[idx[too_small]].min()
                bad_edge = first if bad_edge is None else min(bad_edge, first)
                keep = idx[~too_small]
                vals[idx[too_small]] = np.nan
                idx = keep
                if idx.size == 0:
                    break
            mid = 0.5 * (a[idx] + bnd[idx])
            na = np.concatenate([a, mid])
            nb = np.concatenate([bnd, mid])
            nb[idx] = mid
            na[len(a):] = mid
            nb[len(a):] = bnd[idx]
            l12, l24 = self._panel_integrals(
                np.concatenate([a[idx], mid]), np.concatenate([mid, bnd[idx]]), t)
            half_n = len(idx)
            vals = np.concatenate([vals, l24[half_n:]])
            vals[idx] = l24[:half_n]
            err = np.concatenate([err, np.abs(l24 - l12)[half_n:]])
            err[idx] = np.abs(l24 - l12)[:half_n]
            budget = np.concatenate([budget, np.maximum(tol * (bnd[idx] - mid) / width_total, 1e-15)])
            budget[idx] = np.maximum(tol * (mid - a[idx]) / width_total, 1e-15)
            a, bnd = na, nb
        else:
            if ((err > budget) & np.isfinite(vals)).any():
                raise QuadratureNoConvergence(f"gauge quadrature stalled at row t={t}")

        order = np.argsort(a, kind="stable")
        a, bnd, vals = a[order], bnd[order], vals[order]
        cum = np.concatenate([[0], np.cumsum(vals)])
        # exact edge lookup (xs are panel edges by construction)
        edge_vals = np.concatenate([[a[0]], bnd])
        m_out = np.empty(xs.size, complex)
        for i, xv in enumerate(xs):
            k = int(np.searchsorted(edge_vals, xv + 1e-12)) - 1
            k = max(0, min(k, len(cum) - 1))
            m_out[i] = cum[k]
        if bad_edge is not None:
            return m_out, float(bad_edge)
        return m_out, None

    # --------------------------------------------------------------- samples
    def q_points(self, pts, tol=GAUGE_TOL):
        """Solution samples at arbitrary points, grouped into rows internally."""
        by_t: dict = {}
        for i, (xv, tv) in enumerate(pts):
            by_t.setdefault(float(tv), []).append((float(xv), i))
        out = [None] * len(pts)
        for tv, lst in by_t.items():
            xs = np.array(sorted({xv for xv, _ in lst}))
            try:
                m, bad_from = self.gauge_row(tv, xs, tol)
            except QuadratureNoConvergence:
                m = np.full(xs.size, np.nan, complex)
                bad_from = -np.inf
            mmap = dict(zip(xs.tolist(), m.tolist()))
            P, cond, sing = self.bare(xs, np.full(xs.size, tv))
            pmap = {xv: (P[i], cond[i], bool(sing[i])) for i, xv in enumerate(xs.tolist())}
            for xv, i in lst:
                Pv, cv, sv = pmap[xv]
                mv = mmap[xv]
                if bad_from is not None and xv > bad_from:
                    sv = True
                if not np.isfinite(complex(mv)):
                    sv = True
                gauge = np.exp(2j * mv) if np.isfinite(complex(mv)) else complex("nan")
                qv = gauge * Pv
                out[i] = SolutionSample(x=xv, t=tv, P=complex(Pv), gauge=complex(gauge),
                                        q=complex(qv), cond_estimate=float(cv), singular=sv)
        return out

    def q_grid(self, x_vals, t_vals, tol=GAUGE_TOL):
        """Row-major samples over the tensor grid."""
        samples = []
        for tv in t_vals:
            pts = [(xv, tv) for xv in x_vals]
            samples.extend(self.q_points(pts, tol))
        return samples


# ---------------------------------------------------------------- public ops

def assemble_system(spectrum: DiscreteSpectrum, tc: TraceContext, ctx: PhaseContext,
                    x: float, t: float) -> LinearSystem:
    """Literal G, Y, H at one point, filled per the printed blocks."""
    st = _Structure(spectrum)
    M = st.M
    if M == 0:
        z = np.zeros((0, 0), complex)
        return LinearSystem(0, z, np.zeros(0, complex), np.zeros(0, complex),
                            st.col_eig, st.col_kind, st.row_eig, st.row_kind)
    cf = {n: coeffs_at(spectrum, tc, ctx, n, x, t) for n in set(st.col_eig.tolist())}
    y1 = np.zeros(M, complex)
    y2 = np.zeros(M, complex)
    y3 = np.zeros(M, complex)
    for j in range(M):
        c = cf[st.col_eig[j]]
        kd = st.col_kind[j]
        if c.order == 1:
            y1[j] = c.A
        elif c.order == 2:
            if kd == VAL:
                y1[j], y2[j] = c.B * c.C, c.B
            else:
                y1[j] = c.B
        else:
            if kd == VAL:
                y1[j], y2[j], y3[j] = c.D * c.F, c.D * c.E, c.D
            elif kd == D1:
                y1[j], y2[j] = c.D * c.E, c.D
            else:
                y1[j] = c.D / 2
    G = st.K1 * y1[None, :] + st.K2 * y2[None, :] + st.K3 * y3[None, :] + st.Dconst
    return LinearSystem(M, G, y1, st.H.copy(), st.col_eig, st.col_kind,
                        st.row_eig, st.row_kind)


def bare_potential(system: LinearSystem, q_minus: complex):
    """P = q_-(1 - Y G^{-1} H) via one factorization, plus a condition estimate.

    The condition estimate is taken after column equilibration, so it
    measures intrinsic (solution) singularity rather than the benign
    exponential column scaling.
    """
    if system.M == 0:
        return complex(q_minus), 1.0
    G = system.G.copy()
    Y = system.Y.copy()
    if not (np.isfinite(G).all() and np.isfinite(Y).all()):
        raise SingularG("non-finite entries in assembled system")
    cn = np.abs(G).max(axis=0)
    cn[cn == 0] = 1.0
    G /= cn[None, :]
    Y = Y / cn
    try:
        Ginv = np.linalg.inv(G)
    except np.linalg.LinAlgError as exc:
        raise SingularG("singular reconstruction matrix") from exc
    cond = np.abs(G).sum(axis=0).max() * np.abs(Ginv).sum(axis=0).max()
    if cond > COND_LIMIT:
        raise SingularG(f"condition estimate {cond:.3e} above {COND_LIMIT:g}")
    P = q_minus * (1 - Y @ Ginv @ system.H)
    return complex(P), float(cond)


def gauge_phase(spectrum: DiscreteSpectrum, tc: TraceContext, ctx: PhaseContext,
                x: float, t: float, tol: float = GAUGE_TOL) -> complex:
    """m_-(x, t) by adaptive left-truncated quadrature of the bare product."""
    eng = Engine(spectrum)
    m, bad = eng.gauge_row(float(t), np.array([float(x)]), tol)
    if bad is not None and x > bad:
        raise QuadratureNoConvergence(f"gauge path crosses a singular point before x={x}")
    return complex(m[0])


def evaluate_q(spectrum: DiscreteSpectrum, tc: TraceContext, ctx: PhaseContext,
               x: float, t: float, tol: float = GAUGE_TOL) -> SolutionSample:
    """Full solution sample q = e^{2i m_-} P at one point."""
    eng = Engine(spectrum)
    return eng.q_points([(x, t)], tol)[0]


def _grid_worker(args):
    spectrum, t_vals, x_vals, tol = args
    eng = Engine(spectrum)
    return eng.q_grid(x_vals, t_vals, tol)


def evaluate_grid(spectrum: DiscreteSpectrum, tc: TraceContext, ctx: PhaseContext,
                  grid, tol: float = GAUGE_TOL, workers: int | None = None):
    """Row-major samples over the grid; rows are independent and parallelizable."""
    x_vals = np.linspace(grid["x_min"], grid["x_max"], int(grid["nx"])) \
        if grid["nx"] > 1 else np.array([grid["x_min"]])
    t_vals = np.linspace(grid["t_min"], grid["t_max"], int(grid["nt"])) \
        if grid["nt"] > 1 else np.array([grid["t_min"]])
    if workers is None:
        workers = int(os.environ.get("NONLOCAL_DNLS_WORKERS", "1"))
    if workers <= 1 or len(t_vals) == 1:
        eng = Engine(spectrum)
        return eng.q_grid(x_vals, t_vals, tol)
    from concurrent.futures import ProcessPoolExecutor

    chunks = np.array_split(t_vals, min(workers, len(t_vals)))
    out = []
    with ProcessPoolExecutor(max_workers=workers) as ex:
        for part in ex.map(_grid_worker,
                           [(spectrum, chunk, x_vals, tol) for chunk in chunks]):
            out.extend(part)
    return out
