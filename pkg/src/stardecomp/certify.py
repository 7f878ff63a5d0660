"""Decision procedure for star-decomposition certification.

Given a triple (d, k, alpha) — alpha being a density at which an independent
set is assumed to exist — decide whether the thin-set + orientation method
guarantees a k-star decomposition a.a.s., and sweep degree ranges to find the
exceptional degrees where only k_ind - 1 certifies.

The continuum condition is checked on a rectangular (beta, tau) grid with a
conservative Lipschitz safety margin, refined locally near violations.  Errors
are one-sided: the checker may under-certify, never over-certify.
"""

from __future__ import annotations

import concurrent.futures
import csv
import math
from dataclasses import dataclass, field, replace

import numpy as np

from .entropy import (
    alpha_dk,
    alpha_fc_estimate,
    alpha_fm,
    avg_degree_ceiling,
    avg_degree_ceiling_inv,
    ind_set_rate,
    kappa,
    pair_rate,
)

DEFAULT_BETA_STEP = 1e-6
DEFAULT_TAU_STEP = 1e-3
MAX_REFINEMENTS = 3


class CertifyError(RuntimeError):
    """Procedure left its domain; carries a short machine-readable reason."""

    def __init__(self, reason, detail=""):
        super().__init__(f"{reason}: {detail}" if detail else reason)
        self.reason = reason


@dataclass(frozen=True)
class CertifyInput:
    d: int
    k: int
    alpha: float
    beta_grid_step: float = DEFAULT_BETA_STEP
    tau_grid_step: float = DEFAULT_TAU_STEP
    safety_margin: float = 0.0

    def validate(self):
        if self.d < 3:
            raise CertifyError("bad input", f"d={self.d} < 3")
        if not self.d / 2 < self.k < self.d - 1:
            raise CertifyError("bad input", f"k={self.k} outside (d/2, d-1)")
        if self.beta_grid_step <= 0 or self.tau_grid_step <= 0:
            raise CertifyError("bad input", "grid steps must be positive")
        return self


@dataclass
class CertifyResult:
    certified: bool = False
    t1: float = float("nan")
    x1: float = float("nan")
    x2: float = float("nan")
    t2: float = float("nan")
    d_hat: int = 0
    tau_plus: float = float("nan")
    beta_max: float = float("nan")
    strong_condition_met: bool = False
    weak_condition_met: bool = False
    worst_witness: tuple | None = None  # (beta, tau, slack)
    error: str | None = None


def _h_arr(x):
    """Vectorized -x log x with the same clamping band as entropy.h."""
    x = np.asarray(x, dtype=float)
    if np.any(x < -1e-12) or np.any(x > 1.0 + 1e-12):
        raise ValueError("array entropy argument outside [0, 1]")
    xc = np.clip(x, 0.0, 1.0)
    out = np.zeros_like(xc)
    pos = (xc > 0.0) & (xc < 1.0)
    out[pos] = -xc[pos] * np.log(xc[pos])
    return out


def pair_rate_grid(d, alpha, betas, taus):
    """pair_rate evaluated on the outer grid betas x taus (numpy broadcast).

    Returns an array of shape (len(betas), len(taus)).
    """
    b = np.asarray(betas, dtype=float)[:, None]
    t = np.asarray(taus, dtype=float)[None, :]
    edge = (
        2.0 * _h_arr(b)
        + 2.0 * b * (_h_arr(t) + _h_arr(1.0 - t))
        + 2.0 * _h_arr(alpha - t * b)
        + 2.0 * _h_arr(1.0 - 2.0 * alpha - (1.0 - t) * b)
        - _h_arr(np.full_like(b, 1.0 - 2.0 * alpha))
    )
    vert = _h_arr(np.full((1, 1), alpha)) + _h_arr(b) + _h_arr(1.0 - alpha - b)
    return d / 2.0 * edge - (d - 1) * vert


def derive_dhat(inp: CertifyInput) -> CertifyResult:
    """Steps 1-3 of the decision procedure: from (d, k) derive the thinness
    parameter d_hat via the induced-average-degree ceiling and its inverse."""
    inp.validate()
    d, k = inp.d, inp.k
    t1 = 2.0 * (d - k) / d
    if t1 <= 2.0 / d:
        raise CertifyError("k too large", f"t1={t1} <= 2/d for d={d}, k={k}")
    x1 = avg_degree_ceiling_inv(d, t1)
    x2 = 1.0 - alpha_dk(d, k) - x1
    if x2 <= 0.0:
        raise CertifyError("x2 nonpositive", f"x1={x1} >= 1 - alpha_dk")
    t2 = avg_degree_ceiling(d, x2)
    d_hat = math.floor(k - t2 * d / 2.0)
    if d_hat < 1:
        raise CertifyError("d_hat underflow", f"d_hat={d_hat}")
    return CertifyResult(
        t1=t1, x1=x1, x2=x2, t2=t2, d_hat=d_hat, tau_plus=(d_hat + 1) / d
    )


def beta_max(d, alpha, tau_plus, step=DEFAULT_BETA_STEP):
    """Smallest beta > 0 at which the pair rate at (alpha, beta, tau_plus)
    turns negative, i.e. inf { beta > 0 : pair_rate < 0 }.

    Located by ascending grid scan then bisection to 1e-10; the returned value
    is rounded up by one bisection tolerance (conservative).
    """
    if not 0.0 < alpha < 0.5:
        raise ValueError(f"alpha {alpha} outside (0, 1/2)")
    if not 0.0 < tau_plus <= 1.0:
        raise ValueError(f"tau_plus {tau_plus} outside (0, 1]")
    if ind_set_rate(d, alpha) < 0.0:
        # Already negative in the beta -> 0 limit: the infimum is 0.
        return 0.0
    tol = 1e-10
    b_hi_cap = 1.0 - 2.0 * alpha
    lo = 0.0
    b = step
    while b < b_hi_cap:
        if pair_rate(d, alpha, b, tau_plus) < 0.0:
            break
        lo = b
        b += step
    else:
        raise CertifyError(
            "no sign change", f"pair rate stays nonnegative up to beta={b_hi_cap}"
        )
    hi = min(b, b_hi_cap)
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if pair_rate(d, alpha, mid, tau_plus) < 0.0:
            hi = mid
        else:
            lo = mid
    return hi + tol


MAX_GRID_POINTS = 4001


def _grid(lo, hi, step, minimum_points=2):
    n = max(minimum_points, int(math.ceil((hi - lo) / step)) + 1)
    # Cap grid size; the Lipschitz margin uses the effective spacing, so a
    # coarser-than-requested grid stays conservative.
    return np.linspace(lo, hi, min(n, MAX_GRID_POINTS))


def check_condition(
    d,
    k,
    d_hat,
    alpha,
    bmax,
    tau_plus,
    beta_step=DEFAULT_BETA_STEP,
    tau_step=DEFAULT_TAU_STEP,
    safety_margin=0.0,
):
    """Check the two sufficient conditions for thinning down to density
    alpha_dk(d, k).

    strong: (d - d_hat) * bmax < alpha - alpha_dk(d, k)
    weak:   (tau*d - d_hat) * beta < alpha - alpha_dk(d, k) at every grid point
            (beta, tau) in (0, bmax] x [tau_plus, 1] with nonnegative pair
            rate, with a per-cell Lipschitz margin added; the grid is refined
            x10 around violations up to MAX_REFINEMENTS times.

    Returns (strong, weak, worst_witness) where worst_witness is the grid
    point maximizing (tau*d - d_hat) * beta among nonnegative-rate points, as
    (beta, tau, slack).
    """
    if d_hat >= k:
        raise CertifyError("bad input", f"d_hat={d_hat} >= k={k}")
    rhs = alpha - alpha_dk(d, k)
    strong = (d - d_hat) * bmax < rhs

    if bmax <= 0.0:
        return strong, True, None

    witness = [None]  # best (beta, tau, slack) seen, by smallest slack

    def note_witness(bs, ts, vals, mask):
        if not np.any(mask):
            return
        vm = np.where(mask, vals, -np.inf)
        i, j = np.unravel_index(np.argmax(vm), vm.shape)
        slack = rhs - vals[i, j]
        if witness[0] is None or slack < witness[0][2]:
            witness[0] = (float(bs[i]), float(ts[j]), float(slack))

    def check_box(b_lo, b_hi, t_lo, t_hi, db, dt, depth):
        # Keep at least ~50 points per axis so coarse steps on a tiny box
        # still cover it.
        bs = _grid(max(b_lo, 0.0), b_hi, db, minimum_points=51)
        ts = _grid(t_lo, t_hi, dt, minimum_points=51)
        db_eff = bs[1] - bs[0]
        dt_eff = ts[1] - ts[0]
        rates = pair_rate_grid(d, alpha, bs, ts)
        mask = rates >= 0.0
        vals = (ts[None, :] * d - d_hat) * bs[:, None]
        note_witness(bs, ts, vals, mask)
        # A raw violation at a grid point is a genuine counterexample on the
        # continuum; no refinement can rescue it.
        if np.any(mask & (vals + safety_margin >= rhs)):
            return False
        margin = safety_margin + d * db_eff + d * bmax * dt_eff
        bad = mask & (vals + margin >= rhs)
        if not np.any(bad):
            return True
        if depth >= MAX_REFINEMENTS:
            return False
        bi, ti = np.nonzero(bad)
        nb_lo = max(b_lo, bs[bi.min()] - db_eff)
        nb_hi = min(b_hi, bs[bi.max()] + db_eff)
        nt_lo = max(t_lo, ts[ti.min()] - dt_eff)
        nt_hi = min(t_hi, ts[ti.max()] + dt_eff)
        return check_box(nb_lo, nb_hi, nt_lo, nt_hi, db / 10, dt / 10, depth + 1)

    weak = check_box(0.0, bmax, tau_plus, 1.0, beta_step, tau_step, 0)
    # The strong condition implies the weak one analytically; never report the
    # grid check as stricter than that.
    weak = weak or strong
    return strong, weak, witness[0]


def certify(inp: CertifyInput) -> CertifyResult:
    """Run the full decision procedure for one (d, k, alpha) triple."""
    try:
        res = derive_dhat(inp)
    except CertifyError as exc:
        return CertifyResult(error=exc.reason)
    try:
        bmax = beta_max(inp.d, inp.alpha, res.tau_plus, step=inp.beta_grid_step)
        strong, weak, witness = check_condition(
            inp.d,
            inp.k,
            res.d_hat,
            inp.alpha,
            bmax,
            res.tau_plus,
            beta_step=inp.beta_grid_step,
            tau_step=inp.tau_grid_step,
            safety_margin=inp.safety_margin,
        )
    except (CertifyError, ValueError) as exc:
        return replace(res, error=str(exc))
    return replace(
        res,
        beta_max=bmax,
        strong_condition_met=strong,
        weak_condition_met=weak,
        worst_witness=witness,
        certified=strong or weak,
    )


def certify_degree(
    d,
    alpha,
    beta_step=DEFAULT_BETA_STEP,
    tau_step=DEFAULT_TAU_STEP,
    safety_margin=0.0,
):
    """Find the largest certifiable star size for degree d at independence
    density alpha.

    Starts at k = floor(kappa(d, alpha)) and decrements until a k certifies or
    k <= d/2.  Returns (k_certified or None, list of (k, CertifyResult)).
    """
    if not 0.0 < alpha < 0.5:
        raise ValueError(f"alpha {alpha} outside (0, 1/2)")
    results = []
    k = math.floor(kappa(d, alpha))
    while k > d / 2:
        if alpha <= alpha_dk(d, k) or k >= d - 1:
            results.append((k, CertifyResult(error="alpha at or below alpha_dk"
                                             if k < d - 1 else "k too large")))
            k -= 1
            continue
        inp = CertifyInput(
            d=d,
            k=k,
            alpha=alpha,
            beta_grid_step=beta_step,
            tau_grid_step=tau_step,
            safety_margin=safety_margin,
        )
        res = certify(inp)
        results.append((k, res))
        if res.certified:
            return k, results
        k -= 1
    return None, results


@dataclass
class DegreeRecord:
    """One row of a sweep report (matches the emitted JSON/CSV fields)."""

    d: int
    alpha: float
    alpha_source: str
    k_ind: int
    k_certified: int | None
    exceptional: bool
    t1: float
    x1: float
    x2: float
    t2: float
    d_hat: int
    beta_max: float
    condition: str  # "strong" | "weak" | "failed"
    error: str | None = None

    def as_dict(self):
        def num(x):
            # NaN is not valid JSON; failed stages report null.
            return None if x != x else x

        return {
            "d": self.d,
            "alpha": self.alpha,
            "alpha_source": self.alpha_source,
            "k_ind": self.k_ind,
            "k_certified": self.k_certified,
            "exceptional": self.exceptional,
            "t1": num(self.t1),
            "x1": num(self.x1),
            "x2": num(self.x2),
            "t2": num(self.t2),
            "d_hat": self.d_hat,
            "beta_max": num(self.beta_max),
            "condition": self.condition,
            "error": self.error,
        }


@dataclass
class SweepReport:
    d_min: int
    d_max: int
    alpha_source: str
    records: list = field(default_factory=list)

    @property
    def exceptional_degrees(self):
        return [r.d for r in self.records if r.exceptional]

    def as_dict(self):
        return {
            "d_min": self.d_min,
            "d_max": self.d_max,
            "alpha_source": self.alpha_source,
            "exceptional_degrees": self.exceptional_degrees,
            "records": [r.as_dict() for r in self.records],
        }


def load_alpha_table(path):
    """Read a CSV with header `d,alpha` into a dict degree -> alpha."""
    table = {}
    with open(path, newline="") as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames is None or [f.strip() for f in reader.fieldnames] != ["d", "alpha"]:
            raise ValueError(f"{path}: expected header 'd,alpha'")
        for row in reader:
            table[int(row["d"])] = float(row["alpha"])
    return table


def _certify_one(args):
    (d, alpha, source, beta_step, tau_step, safety_margin) = args
    k_ind = math.floor(kappa(d, alpha))
    try:
        k_cert, results = certify_degree(
            d, alpha, beta_step=beta_step, tau_step=tau_step,
            safety_margin=safety_margin,
        )
    except (CertifyError, ValueError) as exc:
        return DegreeRecord(
            d=d, alpha=alpha, alpha_source=source, k_ind=k_ind,
            k_certified=None, exceptional=True, t1=float("nan"),
            x1=float("nan"), x2=float("nan"), t2=float("nan"), d_hat=0,
            beta_max=float("nan"), condition="failed", error=str(exc),
        )
    if k_cert is not None:
        res = dict(results)[k_cert]
        cond = "strong" if res.strong_condition_met else "weak"
    else:
        # Report the intermediates of the first (largest-k) attempt.
        res = results[0][1] if results else CertifyResult(error="no k in range")
        cond = "failed"
    return DegreeRecord(
        d=d,
        alpha=alpha,
        alpha_source=source,
        k_ind=k_ind,
        k_certified=k_cert,
        exceptional=(k_cert is None or k_cert < k_ind),
        t1=res.t1,
        x1=res.x1,
        x2=res.x2,
        t2=res.t2,
        d_hat=res.d_hat,
        beta_max=res.beta_max,
        condition=cond,
        error=res.error,
    )


def sweep(
    d_min,
    d_max,
    alpha_source="estimate",
    alpha_table=None,
    threads=1,
    beta_step=DEFAULT_BETA_STEP,
    tau_step=DEFAULT_TAU_STEP,
    safety_margin=0.0,
    strict_table=False,
):
    """Run certify_degree over a degree range.

    alpha_source "table" takes densities from alpha_table (dict d -> alpha),
    falling back to the built-in estimate per degree unless strict_table is
    set, in which case a missing degree raises KeyError.  Results are merged
    in degree order, independent of worker count.
    """
    jobs = []
    for d in range(d_min, d_max + 1):
        if alpha_source == "table" and alpha_table and d in alpha_table:
            a, src = alpha_table[d], "table"
        elif alpha_source == "table" and strict_table:
            raise KeyError(f"alpha table has no entry for d={d}")
        else:
            if d < 20:
                raise ValueError("estimate fallback requires d >= 20")
            a, src = alpha_fc_estimate(d), "estimate"
        jobs.append((d, a, src, beta_step, tau_step, safety_margin))

    if threads > 1 and len(jobs) > 1:
        with concurrent.futures.ProcessPoolExecutor(max_workers=threads) as pool:
            records = list(pool.map(_certify_one, jobs, chunksize=32))
    else:
        records = [_certify_one(j) for j in jobs]
    records.sort(key=lambda r: r.d)
    return SweepReport(
        d_min=d_min, d_max=d_max, alpha_source=alpha_source, records=records
    )
