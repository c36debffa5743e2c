"""Input-averaged fidelities, closed-form references and fidelity differences.

Inputs ``c0 = cos t``, ``c1 = exp(i f) sin t`` are averaged with the measure
``sin t cos t dt df / pi`` on (0, pi/2) x (0, 2 pi). The protocol fidelity is
a quartic form in ``(c0, c1)`` (see :func:`ghz_teleport.protocol.transfer_tensor`),
so each configuration is simulated once and then evaluated at every node.
"""
from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from functools import lru_cache
from typing import Sequence, Union

import numpy as np
from scipy.optimize import minimize_scalar

from .bases import check_angle
from .channel import Scheme, SchemeConfig
from .noise import UNIFORM, NoiseKind, NoiseSpec
from .protocol import fidelity_from_tensor, transfer_tensor


@dataclass(frozen=True)
class Quadrature:
    order: int = 32

    def __post_init__(self):
        if int(self.order) < 8:
            raise ValueError(f"quadrature order must be at least 8, got {self.order}")


@dataclass(frozen=True)
class MonteCarlo:
    samples: int
    seed: int

    def __post_init__(self):
        if int(self.samples) < 1:
            raise ValueError("Monte Carlo needs at least one sample")
        if not isinstance(self.seed, (int, np.integer)):
            raise ValueError("Monte Carlo requires an explicit integer seed")


Method = Union[Quadrature, MonteCarlo]


@dataclass
class FidelityReport:
    scheme: Scheme
    theta: float
    phi: float
    noise: NoiseKind
    p: float
    placement: Union[int, str]
    avg_fidelity_sim: float
    avg_fidelity_closed: float | None = None
    abs_deviation: float | None = None
    std_error: float | None = None
    per_placement: dict[int, float] | None = field(default=None)

    def to_dict(self) -> dict:
        d = asdict(self)
        d["scheme"] = self.scheme.value
        d["noise"] = self.noise.value
        if self.per_placement is not None:
            d["per_placement"] = {str(k): v for k, v in self.per_placement.items()}
        return d


@lru_cache(maxsize=16)
def _quadrature_nodes(order: int):
    x, w = np.polynomial.legendre.leggauss(order)
    t = (x + 1) * (math.pi / 4)  # (0, pi/2)
    wt = w * (math.pi / 4)
    f = (x + 1) * math.pi  # (0, 2 pi)
    wf = w * math.pi
    tt, ff = np.meshgrid(t, f, indexing="ij")
    weights = np.outer(wt * np.sin(t) * np.cos(t), wf) / math.pi
    c0 = np.cos(tt).ravel()
    c1 = (np.exp(1j * ff) * np.sin(tt)).ravel()
    return c0, c1, weights.ravel()


def sample_inputs(samples: int, seed: int):
    """Inputs drawn from the uniform measure (t has density sin 2t)."""
    rng = np.random.default_rng(seed)
    u = rng.random(samples)
    v = rng.random(samples)
    t = 0.5 * np.arccos(1 - 2 * u)
    f = 2 * math.pi * v
    return np.cos(t), np.exp(1j * f) * np.sin(t)


def _average(tensors: Sequence[np.ndarray], method: Method):
    """Mean over placements of the input-averaged fidelity, plus std error."""
    if isinstance(method, Quadrature):
        c0, c1, w = _quadrature_nodes(int(method.order))
        vals = [float(np.dot(w, fidelity_from_tensor(T, c0, c1))) for T in tensors]
        return vals, None
    c0, c1 = sample_inputs(int(method.samples), int(method.seed))
    per = np.array([fidelity_from_tensor(T, c0, c1) for T in tensors])
    combined = per.mean(axis=0)
    n = combined.size
    se = float(combined.std(ddof=1) / math.sqrt(n)) if n > 1 else float("nan")
    return [float(v) for v in per.mean(axis=1)], se


def average_fidelity(
    cfg: SchemeConfig, noise: NoiseSpec | None = None, method: Method = Quadrature()
) -> FidelityReport:
    noise = noise or NoiseSpec()
    if noise.kind is NoiseKind.NONE:
        placements: tuple = ()
        tensors = [transfer_tensor(cfg, noise)]
    else:
        placements = noise.placements()
        tensors = [transfer_tensor(cfg, noise.at(q)) for q in placements]
    values, se = _average(tensors, method)
    sim = float(np.mean(values))
    try:
        closed = closed_form(cfg.scheme, noise.kind, cfg.theta, cfg.phi, noise.p, noise.placement)
    except ValueError:
        closed = None
    per = None
    if noise.kind is not NoiseKind.NONE and noise.placement == UNIFORM:
        per = dict(zip(placements, values))
    return FidelityReport(
        scheme=cfg.scheme,
        theta=cfg.theta,
        phi=cfg.phi,
        noise=noise.kind,
        p=noise.p,
        placement=noise.placement,
        avg_fidelity_sim=sim,
        avg_fidelity_closed=closed,
        abs_deviation=None if closed is None else abs(sim - closed),
        std_error=se,
        per_placement=per,
    )


# Closed forms ---------------------------------------------------------------


def _quantum_term(scheme: Scheme, theta: float, phi: float) -> float:
    s = math.sin(2 * theta) * math.sin(2 * phi)
    return s**3 if scheme is Scheme.EPR3 else s**2


def closed_form(
    scheme,
    noise_kind,
    theta: float,
    phi: float,
    p: float = 0.0,
    placement: Union[int, str] = UNIFORM,
) -> float:
    """Closed average fidelity for a scheme, noise kind and placement.

    ``placement`` is ``"uniform"`` (the average over the six channel qubits)
    or a single channel qubit.
    """
    scheme, kind = Scheme(scheme), NoiseKind(noise_kind)
    check_angle(theta, "channel angle theta")
    check_angle(phi, "measurement angle phi")
    spec = NoiseSpec(kind, p, placement)  # validates p and placement
    q = _quantum_term(scheme, theta, phi)
    base = 2 / 3 + q / 3
    if kind is NoiseKind.NONE:
        return base
    if kind is NoiseKind.PHASE_FLIP:
        return 2 / 3 + (1 - 2 * p) * q / 3
    if scheme is Scheme.EPR3:
        # every placement gives the same value
        if kind is NoiseKind.BIT_FLIP:
            return (1 - p) * base
        return 4 * p / 9 + (1 - 4 * p / 3) * base
    if kind is NoiseKind.BIT_FLIP:
        if spec.placement == UNIFORM:
            return (1 - 5 * p / 6) * base
        return base if spec.placement == 6 else (1 - p) * base
    if spec.placement == UNIFORM:
        return 2 / 3 * (1 - 5 * p / 9) + (1 - 4 * p / 3) * q / 3
    if spec.placement == 6:
        return 2 / 3 + (1 - 4 * p / 3) * q / 3
    return 2 / 3 * (1 - 2 * p / 3) + (1 - 4 * p / 3) * q / 3


def small_deviation_fidelity(scheme, d_theta: float, d_phi: float) -> float:
    """Leading-order fidelity for angles pi/4 + d_theta, pi/4 + d_phi."""
    k = 2.0 if Scheme(scheme) is Scheme.EPR3 else 4.0 / 3.0
    return 1.0 - k * (d_theta**2 + d_phi**2)


def delta_F(
    theta: float,
    phi: float,
    noise_kind=NoiseKind.NONE,
    p: float = 0.0,
    simulate: bool = False,
    method: Method = Quadrature(),
) -> float:
    """``<F_GHZ> - <F_EPR>`` under uniformly placed noise."""
    if not simulate:
        return closed_form(Scheme.GHZ2, noise_kind, theta, phi, p) - closed_form(
            Scheme.EPR3, noise_kind, theta, phi, p
        )
    noise = NoiseSpec(noise_kind, p)
    ghz = average_fidelity(SchemeConfig(Scheme.GHZ2, theta, phi), noise, method)
    epr = average_fidelity(SchemeConfig(Scheme.EPR3, theta, phi), noise, method)
    return ghz.avg_fidelity_sim - epr.avg_fidelity_sim


def optimal_bitflip_product(p: float) -> float:
    """Value of sin(2 theta) sin(2 phi) maximizing the bit-flip difference."""
    return 2 * (1 - 5 * p / 6) / (3 * (1 - p))


def locate_delta_maximum(noise_kind=NoiseKind.NONE, p: float = 0.0, phi: float = math.pi / 4):
    """Maximize the fidelity difference over theta at fixed phi.

    Returns ``(theta_star, product, delta)`` where ``product`` is
    ``sin(2 theta*) sin(2 phi)``.
    """
    res = minimize_scalar(
        lambda t: -delta_F(t, phi, noise_kind, p),
        bounds=(1e-9, math.pi / 4),
        method="bounded",
        options={"xatol": 1e-12},
    )
    theta = float(res.x)
    return theta, math.sin(2 * theta) * math.sin(2 * phi), -float(res.fun)


def midpoint_grid(count: int, lo: float = 0.0, hi: float = math.pi / 2) -> np.ndarray:
    """``count`` cell midpoints of (lo, hi); never touches the endpoints."""
    if count < 1:
        raise ValueError("grid count must be at least 1")
    return lo + (np.arange(count) + 0.5) * (hi - lo) / count


def delta_F_grid(count: int, noise_kind=NoiseKind.NONE, p: float = 0.0):
    """Closed fidelity difference on a ``count`` x ``count`` midpoint grid."""
    g = midpoint_grid(count)
    tt, ff = np.meshgrid(g, g, indexing="ij")
    s = np.sin(2 * tt) * np.sin(2 * ff)
    kind = NoiseKind(noise_kind)
    if kind is NoiseKind.NONE:
        d = (s**2 - s**3) / 3
    else:
        d = np.vectorize(lambda a, b: delta_F(a, b, kind, p))(tt, ff)
    return g, d


# Sweeps ---------------------------------------------------------------------


@dataclass(frozen=True)
class SweepPoint:
    scheme: Scheme
    theta: float
    phi: float
    kind: NoiseKind
    p: float
    placement: Union[int, str]


def sweep_points(
    thetas: Sequence[float],
    phis: Sequence[float],
    ps: Sequence[float],
    schemes: Sequence = (Scheme.EPR3, Scheme.GHZ2),
    kinds: Sequence = (NoiseKind.NONE,),
    placement: Union[int, str] = UNIFORM,
) -> list[SweepPoint]:
    """Grid points in row-major order: scheme, noise kind, theta, phi, p.

    The noiseless kind contributes a single ``p = 0`` row per angle pair.
    """
    if not len(thetas) or not len(phis):
        raise ValueError("theta and phi grids must be nonempty")
    points = []
    for scheme in schemes:
        for kind in kinds:
            kind = NoiseKind(kind)
            p_values = [0.0] if kind is NoiseKind.NONE else list(ps)
            if not p_values:
                raise ValueError("p grid must be nonempty for noisy sweeps")
            for t in thetas:
                for f in phis:
                    for p in p_values:
                        points.append(
                            SweepPoint(Scheme(scheme), float(t), float(f), kind, float(p), placement)
                        )
    return points


def evaluate_point(point: SweepPoint, method: Method = Quadrature()) -> FidelityReport:
    placement = point.placement if point.kind is not NoiseKind.NONE else UNIFORM
    return average_fidelity(
        SchemeConfig(point.scheme, point.theta, point.phi),
        NoiseSpec(point.kind, point.p, placement),
        method,
    )


def _evaluate_chunk(args):
    points, method = args
    return [evaluate_point(pt, method) for pt in points]


def grid_sweep(
    thetas: Sequence[float],
    phis: Sequence[float],
    ps: Sequence[float] = (0.0,),
    schemes: Sequence = (Scheme.EPR3, Scheme.GHZ2),
    kinds: Sequence = (NoiseKind.NONE,),
    placement: Union[int, str] = UNIFORM,
    method: Method = Quadrature(),
    jobs: int = 1,
) -> list[FidelityReport]:
    """One report per grid point, in deterministic row-major order.

    Each point is computed independently, so results do not depend on
    ``jobs``.
    """
    points = sweep_points(thetas, phis, ps, schemes, kinds, placement)
    if jobs <= 1 or len(points) < 2:
        return [evaluate_point(pt, method) for pt in points]
    size = max(1, math.ceil(len(points) / (4 * jobs)))
    chunks = [(points[i : i + size], method) for i in range(0, len(points), size)]
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        return [r for chunk in pool.map(_evaluate_chunk, chunks) for r in chunk]


def fit_slope(ps: Sequence[float], values: Sequence[float]) -> tuple[float, float]:
    """Least-squares line through ``(p, value)``; returns ``(slope, intercept)``."""
    slope, intercept = np.polyfit(np.asarray(ps, float), np.asarray(values, float), 1)
    return float(slope), float(intercept)


TABLE1_SLOPES = {
    (Scheme.EPR3, NoiseKind.BIT_FLIP): -1.0,
    (Scheme.GHZ2, NoiseKind.BIT_FLIP): -5 / 6,
    (Scheme.EPR3, NoiseKind.PHASE_FLIP): -2 / 3,
    (Scheme.GHZ2, NoiseKind.PHASE_FLIP): -2 / 3,
    (Scheme.EPR3, NoiseKind.DEPOLARIZING): -8 / 9,
    (Scheme.GHZ2, NoiseKind.DEPOLARIZING): -22 / 27,
}


def table1(ps: Sequence[float], method: Method = Quadrature()):
    """Simulated fidelities at maximal entanglement and fitted slopes in p.

    Returns ``(reports, slopes)`` with ``slopes[(scheme, kind)] = (slope, intercept)``.
    """
    reports = grid_sweep(
        [math.pi / 4],
        [math.pi / 4],
        ps,
        kinds=(NoiseKind.BIT_FLIP, NoiseKind.PHASE_FLIP, NoiseKind.DEPOLARIZING),
        method=method,
    )
    slopes = {}
    for key in TABLE1_SLOPES:
        rows = [r for r in reports if (r.scheme, r.noise) == key]
        slopes[key] = fit_slope([r.p for r in rows], [r.avg_fidelity_sim for r in rows])
    return reports, slopes
