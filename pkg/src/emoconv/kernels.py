"""Hot numeric kernels with numba and pure-numpy builds.

Three loops dominate runtime and cannot be flattened into single numpy
expressions: the LSTM time recursion (forward and backward), the per-frame
normalized autocorrelation of the pitch tracker, and the phase-continuous
oscillator bank of the synthesizer.  Each is provided twice:

* a scalar-loop body compiled with ``@njit(cache=True)`` (fast), and
* a numpy body that vectorizes everything except the unavoidable
  sequential dimension (portable fallback).

The LSTM bodies are identical source compiled two ways; the pitch and
synthesis fallbacks are separately vectorized.  ``emoconv.backend`` picks
the build at import time; both are importable for the benchmark via
:func:`implementations`.

All kernels write into caller-allocated output arrays, take only ndarrays
and scalars, and hold no state.
"""

import numpy as np

from . import backend

# ---------------------------------------------------------------------------
# LSTM: one direction, a whole sequence.
#
# Shapes: x (T, Din), W (Din, 4H), U (H, 4H), b (4H,).  Gate order along the
# 4H axis is input, forget, cell, output.  Outputs h (T, H), c (T, H) and the
# post-activation gates (T, 4H) are filled in place.
# ---------------------------------------------------------------------------


def _lstm_forward(x, W, U, b, h, c, gates):
    T = x.shape[0]
    H = U.shape[0]
    for t in range(T):
        a = np.dot(x[t], W) + b
        if t > 0:
            a = a + np.dot(h[t - 1], U)
        ig = 1.0 / (1.0 + np.exp(-a[:H]))
        fg = 1.0 / (1.0 + np.exp(-a[H:2 * H]))
        gg = np.tanh(a[2 * H:3 * H])
        og = 1.0 / (1.0 + np.exp(-a[3 * H:]))
        if t > 0:
            cc = fg * c[t - 1] + ig * gg
        else:
            cc = ig * gg
        gates[t, :H] = ig
        gates[t, H:2 * H] = fg
        gates[t, 2 * H:3 * H] = gg
        gates[t, 3 * H:] = og
        c[t] = cc
        h[t] = og * np.tanh(c[t])


def _lstm_backward(x, W, U, h, c, gates, dh_out, dx, dW, dU, db):
    """Reverse sweep; accumulates dW/dU/db and fills dx in place."""
    T = x.shape[0]
    H = U.shape[0]
    dh_carry = np.zeros_like(dh_out[0])
    dc_carry = np.zeros_like(dh_out[0])
    for t in range(T - 1, -1, -1):
        ig = gates[t, :H]
        fg = gates[t, H:2 * H]
        gg = gates[t, 2 * H:3 * H]
        og = gates[t, 3 * H:]
        tc = np.tanh(c[t])
        dh = dh_out[t] + dh_carry
        do = dh * tc
        dc = dc_carry + dh * og * (1.0 - tc * tc)
        di = dc * gg
        dg = dc * ig
        if t > 0:
            df = dc * c[t - 1]
        else:
            df = dc * 0.0
        dc_carry = dc * fg
        da = np.empty_like(db)
        da[:H] = di * ig * (1.0 - ig)
        da[H:2 * H] = df * fg * (1.0 - fg)
        da[2 * H:3 * H] = dg * (1.0 - gg * gg)
        da[3 * H:] = do * og * (1.0 - og)
        dW += np.outer(x[t], da)
        if t > 0:
            dU += np.outer(h[t - 1], da)
            dh_carry = np.dot(U, da)
        db += da
        dx[t] = np.dot(W, da)


# ---------------------------------------------------------------------------
# Pitch: normalized autocorrelation per frame over a lag window.
#
# frames (T, N) float64, rectangular (no analysis window).  For each frame
# the correlation r(lag) between x[:N-lag] and x[lag:] is normalized by the
# energies of the two segments, the best lag is refined by parabolic
# interpolation, and (fractional_lag, peak_value) are written out.  Frames
# with no usable peak get lag 0 / peak 0.
# ---------------------------------------------------------------------------


def _nccf_frames_loop(frames, lag_min, lag_max, lag_out, peak_out):
    T, N = frames.shape
    n_lags = lag_max - lag_min + 1
    for i in range(T):
        x = frames[i]
        cs = np.empty(N + 1)
        cs[0] = 0.0
        for n in range(N):
            cs[n + 1] = cs[n] + x[n] * x[n]
        r = np.zeros(n_lags)
        for li in range(n_lags):
            lag = lag_min + li
            m = N - lag
            num = np.dot(x[:m], x[lag:lag + m])
            den = np.sqrt(cs[m] * (cs[N] - cs[lag]))
            if den > 0.0:
                r[li] = num / den
        best = 0
        for li in range(1, n_lags):
            if r[li] > r[best]:
                best = li
        if r[best] <= 0.0:
            lag_out[i] = 0.0
            peak_out[i] = 0.0
            continue
        delta = 0.0
        if 0 < best < n_lags - 1:
            denom = r[best - 1] - 2.0 * r[best] + r[best + 1]
            if abs(denom) > 1e-12:
                delta = 0.5 * (r[best - 1] - r[best + 1]) / denom
                if delta > 0.5:
                    delta = 0.5
                elif delta < -0.5:
                    delta = -0.5
        lag_out[i] = lag_min + best + delta
        peak_out[i] = r[best]


def _nccf_frames_numpy(frames, lag_min, lag_max, lag_out, peak_out):
    T, N = frames.shape
    n_lags = lag_max - lag_min + 1
    cs = np.zeros((T, N + 1))
    np.cumsum(frames * frames, axis=1, out=cs[:, 1:])
    total = cs[:, N]
    r = np.zeros((T, n_lags))
    for li in range(n_lags):
        lag = lag_min + li
        m = N - lag
        num = np.einsum("ij,ij->i", frames[:, :m], frames[:, lag:lag + m])
        den = np.sqrt(cs[:, m] * (total - cs[:, lag]))
        np.divide(num, den, out=r[:, li], where=den > 0.0)
    best = np.argmax(r, axis=1)
    rows = np.arange(T)
    peak = r[rows, best]
    lo = r[rows, np.maximum(best - 1, 0)]
    hi = r[rows, np.minimum(best + 1, n_lags - 1)]
    denom = lo - 2.0 * peak + hi
    interior = (best > 0) & (best < n_lags - 1) & (np.abs(denom) > 1e-12)
    delta = np.where(interior, 0.5 * (lo - hi) / np.where(interior, denom, 1.0), 0.0)
    delta = np.clip(delta, -0.5, 0.5)
    usable = peak > 0.0
    lag_out[:] = np.where(usable, lag_min + best + delta, 0.0)
    peak_out[:] = np.where(usable, peak, 0.0)


# ---------------------------------------------------------------------------
# Synthesis: windowed overlap-add of a per-frame oscillator bank.
#
# Voiced frames (f0 > 60 Hz) sum harmonics k*f0 with per-frame amplitudes
# amps (T, KH) and phases carried across frames; other frames sum a bank of
# fixed-frequency, per-frame-random-phase components (shaped noise).  The
# kernel only accumulates win * frame into out; window-sum compensation and
# peak handling are the caller's job.
# ---------------------------------------------------------------------------


def _synth_frames_loop(f0, amps, nz_amps, nz_phases, nz_omega, win, hop, sr, out):
    T = f0.shape[0]
    KH = amps.shape[1]
    J = nz_amps.shape[1]
    L = win.shape[0]
    two_pi = 2.0 * np.pi
    phases = np.zeros(KH)
    for t in range(T):
        base = t * hop
        if f0[t] > 60.0:
            w0 = two_pi * f0[t] / sr
            for k in range(KH):
                a = amps[t, k]
                if a > 0.0:
                    wk = w0 * (k + 1)
                    ph = phases[k]
                    for n in range(L):
                        out[base + n] += win[n] * a * np.sin(ph + wk * n)
            adv = two_pi * f0[t] * hop / sr
            for k in range(KH):
                phases[k] = (phases[k] + adv * (k + 1)) % two_pi
        else:
            for j in range(J):
                a = nz_amps[t, j]
                if a > 0.0:
                    ph = nz_phases[t, j]
                    wj = nz_omega[j]
                    for n in range(L):
                        out[base + n] += win[n] * a * np.sin(ph + wj * n)


def _synth_frames_numpy(f0, amps, nz_amps, nz_phases, nz_omega, win, hop, sr, out):
    T = f0.shape[0]
    KH = amps.shape[1]
    L = win.shape[0]
    two_pi = 2.0 * np.pi
    n = np.arange(L)
    k = np.arange(1, KH + 1)
    phases = np.zeros(KH)
    for t in range(T):
        base = t * hop
        if f0[t] > 60.0:
            w0 = two_pi * f0[t] / sr
            act = amps[t] > 0.0
            if act.any():
                mat = np.sin(phases[act, None] + (w0 * k[act])[:, None] * n[None, :])
                out[base:base + L] += win * (amps[t, act] @ mat)
            phases = (phases + two_pi * f0[t] * hop / sr * k) % two_pi
        else:
            act = nz_amps[t] > 0.0
            if act.any():
                mat = np.sin(nz_phases[t, act][:, None] + nz_omega[act][:, None] * n[None, :])
                out[base:base + L] += win * (nz_amps[t, act] @ mat)


# ---------------------------------------------------------------------------
# Dispatch.
# ---------------------------------------------------------------------------

_NUMPY_IMPLS = {
    "lstm_forward": _lstm_forward,
    "lstm_backward": _lstm_backward,
    "nccf_frames": _nccf_frames_numpy,
    "synth_frames": _synth_frames_numpy,
}

_JIT_SOURCES = {
    "lstm_forward": _lstm_forward,
    "lstm_backward": _lstm_backward,
    "nccf_frames": _nccf_frames_loop,
    "synth_frames": _synth_frames_loop,
}

_jit_cache = None


def _jit_impls():
    global _jit_cache
    if _jit_cache is None:
        from numba import njit

        _jit_cache = {name: njit(cache=True)(fn) for name, fn in _JIT_SOURCES.items()}
    return _jit_cache


def implementations(which: str):
    """Return the kernel dict for backend ``"numpy"`` or ``"numba"``."""
    if which == "numpy":
        return dict(_NUMPY_IMPLS)
    if which == "numba":
        if not backend.numba_available():
            raise RuntimeError("numba is not importable in this environment")
        return dict(_jit_impls())
    raise ValueError(f"unknown backend {which!r}")


ACTIVE_BACKEND = backend.backend_name()
_active = implementations(ACTIVE_BACKEND)

lstm_forward = _active["lstm_forward"]
lstm_backward = _active["lstm_backward"]
nccf_frames = _active["nccf_frames"]
synth_frames = _active["synth_frames"]
