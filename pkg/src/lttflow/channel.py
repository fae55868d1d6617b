"""Channel simulators and the front-ends that reduce them to AWGN-equivalent
landing points: scalar AWGN, Rayleigh fading with linear MMSE equalization,
and MIMO via SVD-domain per-mode MMSE."""

from dataclasses import dataclass, field as dc_field

import numpy as np

from .exceptions import CalibrationError
from .ode_decoder import DecodeConfig, integrate, integrate_staged
from .randomness import complex_normal, standard_normal
from .schedule import NoiseSchedule


# ---- real <-> complex packing ----

def pack_complex(x):
    """Consecutive real pairs become (re, im); odd length is zero-padded."""
    x = np.asarray(x, dtype=float).ravel()
    if x.size % 2:
        x = np.concatenate([x, [0.0]])
    return x[0::2] + 1j * x[1::2]


def unpack_complex(z, original_len):
    """Inverse of pack_complex; drops the padding."""
    z = np.asarray(z, dtype=complex).ravel()
    flat = np.empty(2 * z.size)
    flat[0::2] = z.real
    flat[1::2] = z.imag
    if not (2 * z.size - 1 <= original_len <= 2 * z.size):
        raise ValueError(
            f"original_len={original_len} inconsistent with {z.size} complex symbols"
        )
    return flat[:original_len]


# ---- AWGN ----

def awgn(x, sigma_ch, rng):
    """y = x + sigma_ch * eps with eps i.i.d. N(0,1) per real dimension."""
    if sigma_ch < 0:
        raise ValueError(f"sigma_ch must be nonnegative, got {sigma_ch}")
    x = np.asarray(x, dtype=float)
    return x + sigma_ch * standard_normal(rng, x.shape)


# ---- channel reports ----

@dataclass
class ChannelReport:
    """Equalized observation plus per-mode landing data.

    For Rayleigh there is a single mode; for MIMO one mode per transmit
    stream. `equalized` is in the receiver's estimation basis (SVD basis for
    MIMO), block-ordered with `n_streams` entries per channel use.
    """

    equalized: np.ndarray
    alpha: np.ndarray
    sigma_eff: np.ndarray
    t_star: np.ndarray
    h_realization: dict
    lam: float
    kind: str
    n_streams: int = 1
    n_symbols: int = 0  # complex symbol count before block padding
    extras: dict = dc_field(default_factory=dict)


# ---- Rayleigh fading ----

def rayleigh_equalize(x, sigma_ch, lam, rng, sched: NoiseSchedule,
                      fast_fading=False) -> ChannelReport:
    """Block-fading scalar Rayleigh channel with linear MMSE equalization.

    Draws H ~ CN(0,1) (one draw per call, or one per symbol when
    fast_fading), forms Y = H x + sigma_ch eps, applies
    w = H* / (|H|^2 + lam), and reports the AWGN-equivalent landing data:
    alpha = |H|^2/(|H|^2+lam), sigma_eff = sigma_ch |H|/(|H|^2+lam),
    t_star = sigma_inv(sigma_eff).
    """
    if lam < 0:
        raise ValueError(f"lam must be nonnegative, got {lam}")
    x = np.asarray(x, dtype=complex).ravel()
    n = x.size
    h = complex_normal(rng, n) if fast_fading else np.full(n, complex_normal(rng, 1)[0])
    eps = complex_normal(rng, n)
    y = h * x + sigma_ch * eps
    habs2 = np.abs(h) ** 2
    w = np.conj(h) / (habs2 + lam)
    z = w * y
    alpha = habs2 / (habs2 + lam)
    sigma_eff = sigma_ch * np.abs(h) / (habs2 + lam)
    if np.any(sigma_eff > sched.sigma_max):
        raise CalibrationError(
            f"effective noise {sigma_eff.max():.4g} exceeds sigma_max="
            f"{sched.sigma_max} (|H|={np.abs(h).min():.4g}, outage)"
        )
    t_star = np.atleast_1d(sched.sigma_inv(sigma_eff))
    if fast_fading:
        modes_alpha, modes_sig, modes_t = alpha, sigma_eff, t_star
        h_store = h
    else:
        modes_alpha, modes_sig, modes_t = alpha[:1], sigma_eff[:1], t_star[:1]
        h_store = h[0]
    return ChannelReport(
        equalized=z,
        alpha=modes_alpha,
        sigma_eff=modes_sig,
        t_star=modes_t,
        h_realization={"H": h_store},
        lam=float(lam),
        kind="rayleigh",
        n_streams=1,
        n_symbols=n,
        extras={"sigma_ch": float(sigma_ch)},
    )


# ---- complex SVD ----

def complex_svd_2x2(h):
    """Closed-form SVD of a 2x2 complex matrix via the eigen-decomposition
    of H^H H. Returns (U, s, V) with H = U diag(s) V^H, s descending."""
    h = np.asarray(h, dtype=complex)
    if h.shape != (2, 2):
        raise ValueError(f"expected a 2x2 matrix, got shape {h.shape}")
    a_mat = h.conj().T @ h
    a = a_mat[0, 0].real
    c = a_mat[1, 1].real
    b = a_mat[0, 1]
    half_tr = 0.5 * (a + c)
    disc = np.sqrt(max(0.25 * (a - c) ** 2 + abs(b) ** 2, 0.0))
    lam1 = max(half_tr + disc, 0.0)
    lam2 = max(half_tr - disc, 0.0)
    scale = max(a, c, abs(b), 1.0)
    if abs(b) > 1e-15 * scale:
        v1 = np.array([b, lam1 - a])
        v1 /= np.linalg.norm(v1)
        v2 = np.array([-(lam1 - a), np.conj(b)])
        v2 /= np.linalg.norm(v2)
        v = np.column_stack([v1, v2])
    elif a >= c:
        v = np.eye(2, dtype=complex)
    else:
        v = np.array([[0.0, 1.0], [1.0, 0.0]], dtype=complex)
        lam1, lam2 = max(c, 0.0), max(a, 0.0)
    s = np.array([np.sqrt(lam1), np.sqrt(lam2)])
    u = np.zeros((2, 2), dtype=complex)
    for i in range(2):
        if s[i] > 1e-15 * np.sqrt(scale):
            u[:, i] = h @ v[:, i] / s[i]
    # complete orthonormal columns for zero singular values
    for i in range(2):
        if np.linalg.norm(u[:, i]) < 0.5:
            j = 1 - i
            if np.linalg.norm(u[:, j]) > 0.5:
                u[:, i] = np.array([-np.conj(u[1, j]), np.conj(u[0, j])])
            else:
                u[:, i] = np.eye(2, dtype=complex)[:, i]
    return u, s, v


def _svd(h):
    h = np.asarray(h, dtype=complex)
    if h.shape == (2, 2):
        return complex_svd_2x2(h)
    u, s, vh = np.linalg.svd(h, full_matrices=False)
    return u, s, vh.conj().T


# ---- MIMO ----

def mimo_equalize(x, h, sigma_ch, lam, rng, sched: NoiseSchedule) -> ChannelReport:
    """MIMO channel with receiver-side SVD and per-mode MMSE weights.

    Symbols are grouped into blocks of N_t per channel use (zero-padded).
    Per use: Y = H x + sigma_ch eps, Ytilde = U^H Y, and per mode i
    zhat_i = w_i Ytilde_i with w_i = s_i/(s_i^2+lam). The report carries the
    per-mode (alpha_i, sigma_eff_i, t_star_i); a zero mode carries no signal
    (w=0, t*=1, skipped during transport).
    """
    if lam < 0:
        raise ValueError(f"lam must be nonnegative, got {lam}")
    x = np.asarray(x, dtype=complex).ravel()
    h = np.asarray(h, dtype=complex)
    n_r, n_t = h.shape
    n_sym = x.size
    pad = (-n_sym) % n_t
    if pad:
        x = np.concatenate([x, np.zeros(pad, dtype=complex)])
    n_uses = x.size // n_t
    u, s, v = _svd(h)
    k = s.size  # min(n_r, n_t) recoverable modes

    sig_full = np.zeros(n_t)
    sig_full[:k] = s
    nonzero = sig_full > 0
    w = np.zeros(n_t)
    w[nonzero] = sig_full[nonzero] / (sig_full[nonzero] ** 2 + lam)
    alpha = np.zeros(n_t)
    alpha[nonzero] = sig_full[nonzero] ** 2 / (sig_full[nonzero] ** 2 + lam)
    sigma_eff = sigma_ch * w
    if np.any(sigma_eff > sched.sigma_max):
        raise CalibrationError(
            f"per-mode effective noise {sigma_eff.max():.4g} exceeds "
            f"sigma_max={sched.sigma_max}"
        )
    t_star = np.atleast_1d(sched.sigma_inv(sigma_eff))
    t_star[~nonzero] = 1.0  # dead modes never land

    blocks = x.reshape(n_uses, n_t)
    eps = complex_normal(rng, (n_uses, n_r))
    y = blocks @ h.T + sigma_ch * eps
    y_tilde = y @ np.conj(u)  # rows are U^H y per use
    zhat = np.zeros((n_uses, n_t), dtype=complex)
    zhat[:, :k] = y_tilde[:, :k] * w[:k]
    return ChannelReport(
        equalized=zhat.ravel(),
        alpha=alpha,
        sigma_eff=sigma_eff,
        t_star=t_star,
        h_realization={"H": h, "U": u, "S": np.array(s), "V": v},
        lam=float(lam),
        kind="mimo",
        n_streams=n_t,
        n_symbols=n_sym,
        extras={"sigma_ch": float(sigma_ch)},
    )


def mimo_decode(report: ChannelReport, field, sched: NoiseSchedule = None,
                solver="midpoint", steps=10, real_len=None, clamp_output=False,
                basis="pixel", debias=True):
    """Transport the per-mode landing points to t=1 and return a real vector.

    basis="pixel" (default): optionally debias each mode by 1/alpha_i, rotate
    the blocks back to the data basis, then run a single transport from a
    common landing time matched to the RMS per-mode effective noise. The
    velocity field was trained on data-basis vectors, so this keeps its
    inputs on the distribution it knows. Dead modes count as full-strength
    noise; effective levels above sigma_max clamp the landing time to 0.

    basis="svd": transport each mode in the singular basis from its own
    landing time (staged activation on a shared clock, dead modes stay at
    zero), then rotate back.
    """
    if report.kind != "mimo":
        raise ValueError(f"expected a mimo report, got kind={report.kind!r}")
    if basis not in ("pixel", "svd"):
        raise ValueError(f"basis must be 'pixel' or 'svd', got {basis!r}")
    n_t = report.n_streams
    zhat = report.equalized.reshape(-1, n_t)
    n_uses = zhat.shape[0]
    if real_len is None:
        real_len = 2 * report.n_symbols
    v = report.h_realization["V"]
    alpha = report.alpha
    live = alpha > 0

    if basis == "pixel":
        if sched is None:
            raise ValueError("basis='pixel' needs the noise schedule")
        if debias:
            zhat = np.where(live, zhat / np.where(live, alpha, 1.0), zhat)
            sigma_land = np.where(live, report.sigma_eff / np.where(live, alpha, 1.0),
                                  sched.sigma_max)
        else:
            sigma_land = np.where(live, report.sigma_eff, sched.sigma_max)
        level = min(float(np.sqrt(np.mean(sigma_land**2))), sched.sigma_max)
        t_start = float(sched.sigma_inv(level))
        x0 = unpack_complex((zhat @ v.T).ravel()[: report.n_symbols], real_len)
        cfg = DecodeConfig(solver=solver, steps=steps, t_start=t_start)
        out = integrate(field, x0, cfg)
    else:
        t_star = report.t_star
        if debias:
            zhat = np.where(live, zhat / np.where(live, alpha, 1.0), zhat)
            if sched is None:
                raise ValueError("basis='svd' with debias needs the noise schedule")
            levels = np.minimum(
                np.where(live, report.sigma_eff / np.where(live, alpha, 1.0), 0.0),
                sched.sigma_max,
            )
            t_star = np.where(live, np.atleast_1d(sched.sigma_inv(levels)), 1.0)
        # per-complex-symbol landing time, expanded to the real view
        t_real = np.repeat(np.tile(t_star, n_uses), 2)
        x0 = np.empty(2 * zhat.size)
        x0[0::2] = zhat.real.ravel()
        x0[1::2] = zhat.imag.ravel()
        xhat_real = integrate_staged(field, x0, t_real, solver=solver, steps=steps)
        xhat_tilde = (xhat_real[0::2] + 1j * xhat_real[1::2]).reshape(n_uses, n_t)
        out = unpack_complex((xhat_tilde @ v.T).ravel()[: report.n_symbols], real_len)
    if clamp_output:
        out = np.clip(out, 0.0, 1.0)
    return out


def recompute_report(report: ChannelReport, sched: NoiseSchedule):
    """Re-derive (alpha, sigma_eff, t_star) from the stored channel draw.

    Used to verify internal consistency of a report; returns arrays in the
    same layout as the stored fields.
    """
    lam = report.lam
    sig_from = None
    if report.kind == "rayleigh":
        habs = np.atleast_1d(np.abs(report.h_realization["H"]))
        alpha = habs**2 / (habs**2 + lam)
        sig_from = habs / (habs**2 + lam)
    elif report.kind == "mimo":
        s = np.zeros(report.n_streams)
        stored = report.h_realization["S"]
        s[: stored.size] = stored
        alpha = np.where(s > 0, s**2 / (s**2 + lam), 0.0)
        sig_from = np.where(s > 0, s / (s**2 + lam), 0.0)
    else:
        raise ValueError(f"unknown report kind {report.kind!r}")
    sigma_ch = report.extras["sigma_ch"]
    sigma_eff = sigma_ch * sig_from
    t_star = np.where(sig_from > 0, np.atleast_1d(sched.sigma_inv(sigma_eff)), 1.0)
    return alpha, sigma_eff, t_star
