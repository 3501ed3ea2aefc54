"""Smoothness audit of four statistical model objectives.

Each model exposes counted value/gradient/Hessian oracles on its natural
domain. The audited quantity is the curvature-to-gradient ratio

    ratio(theta) = ||F''(theta)||_F / ||F'(theta)||_2^2 ,

which is bounded along gradient paths for (L0, L1)-smooth objectives and
blows up (or stays pinned away from zero) for the models that violate that
taxonomy. ``probe_path`` samples the ratio along a parameter path and fits
the trend of log(ratio) against log(||grad||) over the last third of the
in-domain samples.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import DomainError, ParameterError, ZeroGradientError
from .numerics import LD, ld

_DOMAIN_EPS = LD("1e-300")


def _as_vec(theta, dim):
    arr = np.atleast_1d(np.asarray(theta, dtype=LD))
    if arr.shape != (dim,):
        raise ParameterError(f"expected a parameter vector of length {dim}, got shape {arr.shape}")
    return arr


class ModelObjective:
    """A model objective with counted oracles and a domain guard.

    ``path_point`` maps a scalar path coordinate to a full parameter
    vector so 1-d probe paths apply uniformly to multivariate models.
    """

    name = ""
    dim = 1

    def __init__(self):
        self.obj_evals = 0
        self.grad_evals = 0
        self.hess_evals = 0

    def check_domain(self, theta):
        pass

    def path_point(self, t):
        return np.array([ld(t)], dtype=LD)

    def value(self, theta):
        theta = _as_vec(theta, self.dim)
        self.check_domain(theta)
        self.obj_evals += 1
        return self._value(theta)

    def grad(self, theta):
        theta = _as_vec(theta, self.dim)
        self.check_domain(theta)
        self.grad_evals += 1
        return self._grad(theta)

    def hess(self, theta):
        theta = _as_vec(theta, self.dim)
        self.check_domain(theta)
        self.hess_evals += 1
        return self._hess(theta)


class FactorAnalysisObjective(ModelObjective):
    """Gaussian likelihood in the precision parameter theta > 0.

    F(theta) = log(2 pi)/2 - log(theta) + theta^2 x^2 / 2
    As theta -> 0 the ratio (1 + theta^2 x^2) / (1 - theta^2 x^2)^2
    tends to 1, so curvature never decays relative to the squared
    gradient.
    """

    name = "factor_analysis"

    def __init__(self, x=1.0):
        super().__init__()
        self.x = ld(x)

    def check_domain(self, theta):
        if not theta[0] >= _DOMAIN_EPS:
            raise DomainError(f"precision must satisfy theta >= {_DOMAIN_EPS}, got {theta[0]}")

    def _value(self, theta):
        t = theta[0]
        return LD(0.5) * ld(np.log(2 * np.pi)) - ld(np.log(t)) + t**2 * self.x**2 / 2

    def _grad(self, theta):
        t = theta[0]
        return np.array([-1 / t + t * self.x**2], dtype=LD)

    def _hess(self, theta):
        t = theta[0]
        return np.array([[1 / t**2 + self.x**2]], dtype=LD)


class FFNNObjective(ModelObjective):
    """Depth-4 linear-chain network under logistic loss.

    F(w) = log(1 + exp(-p)) with p = w1 w2 w3 w4. Along w1 = 0,
    w2 = w3 = w4 = k the gradient is (k^3/2, 0, 0, 0) while the Hessian
    Frobenius norm grows like k^6/4, keeping the ratio near 1.
    """

    name = "ffnn"
    dim = 4

    def path_point(self, t):
        t = ld(t)
        return np.array([LD(0), t, t, t], dtype=LD)

    def _p(self, w):
        return w[0] * w[1] * w[2] * w[3]

    def _value(self, theta):
        p = self._p(theta)
        # log1p(exp(-p)) stated stably on both sides
        if p >= 0:
            return ld(np.log1p(np.exp(-p)))
        return -p + ld(np.log1p(np.exp(p)))

    def _sigma(self, p):
        """1 / (1 + exp(p)), computed without overflow."""
        if p >= 0:
            e = ld(np.exp(-p))
            return e / (1 + e)
        return 1 / (1 + ld(np.exp(p)))

    def _cofactors(self, w):
        """v_i = prod_{j != i} w_j."""
        return np.array(
            [
                w[1] * w[2] * w[3],
                w[0] * w[2] * w[3],
                w[0] * w[1] * w[3],
                w[0] * w[1] * w[2],
            ],
            dtype=LD,
        )

    def _grad(self, theta):
        s = self._sigma(self._p(theta))
        return -s * self._cofactors(theta)

    def _hess(self, theta):
        w = theta
        p = self._p(w)
        s = self._sigma(p)
        v = self._cofactors(w)
        m = np.zeros((4, 4), dtype=LD)
        for a in range(4):
            for b in range(4):
                if a != b:
                    rest = [i for i in range(4) if i not in (a, b)]
                    m[a, b] = w[rest[0]] * w[rest[1]]
        return -s * m + s * (1 - s) * np.outer(v, v)


class GEEObjective(ModelObjective):
    """Estimating-equation objective with mean sqrt(theta), theta > 0.

    F(theta) = -y log(theta) + 2 sqrt(theta); the ratio tends to the
    constant 1/y as theta -> 0, so it never decays with the gradient.
    """

    name = "gee"

    def __init__(self, y=1.0):
        super().__init__()
        self.y = ld(y)
        if not self.y > 0:
            raise ParameterError(f"observation y must be positive, got {self.y}")

    def check_domain(self, theta):
        if not theta[0] >= _DOMAIN_EPS:
            raise DomainError(f"gee parameter must satisfy theta >= {_DOMAIN_EPS}, got {theta[0]}")

    def _value(self, theta):
        t = theta[0]
        return -self.y * ld(np.log(t)) + 2 * ld(np.sqrt(t))

    def _grad(self, theta):
        t = theta[0]
        return np.array([-(self.y - ld(np.sqrt(t))) / t], dtype=LD)

    def _hess(self, theta):
        t = theta[0]
        return np.array([[(self.y - LD(0.5) * ld(np.sqrt(t))) / t**2]], dtype=LD)


class InverseGaussianObjective(ModelObjective):
    """Inverse-Gaussian GLM negative log-likelihood in the natural
    parameter theta < 0.

    F(theta) = -(theta y + sqrt(-2 theta)); the ratio grows like
    (-2 theta)^(-1/2) as theta -> 0-, an unbounded curvature-to-gradient
    profile.
    """

    name = "inverse_gaussian"

    def __init__(self, y=1.0):
        super().__init__()
        self.y = ld(y)
        if not self.y > 0:
            raise ParameterError(f"observation y must be positive, got {self.y}")

    def check_domain(self, theta):
        if not theta[0] <= -_DOMAIN_EPS:
            raise DomainError(
                f"natural parameter must satisfy theta <= -{_DOMAIN_EPS}, got {theta[0]}"
            )

    def _value(self, theta):
        t = theta[0]
        return -(t * self.y + ld(np.sqrt(-2 * t)))

    def _grad(self, theta):
        t = theta[0]
        return np.array([-(self.y - 1 / ld(np.sqrt(-2 * t)))], dtype=LD)

    def _hess(self, theta):
        t = theta[0]
        u = ld(np.sqrt(-2 * t))
        return np.array([[1 / u**3]], dtype=LD)


MODELS = {
    "factor_analysis": FactorAnalysisObjective,
    "ffnn": FFNNObjective,
    "gee": GEEObjective,
    "inverse_gaussian": InverseGaussianObjective,
}


def get_model(name, **params) -> ModelObjective:
    try:
        cls = MODELS[name]
    except KeyError:
        raise ParameterError(f"unknown model {name!r}; choose from {sorted(MODELS)}") from None
    return cls(**params)


def curvature_ratio(model: ModelObjective, theta):
    """||F''||_F / ||F'||_2^2 at theta; raises ZeroGradientError at
    stationary points."""
    g = model.grad(theta)
    h = model.hess(theta)
    gnorm = ld(np.sqrt(np.sum(g * g)))
    hnorm = ld(np.sqrt(np.sum(h * h)))
    if gnorm == 0:
        raise ZeroGradientError(f"gradient vanishes at theta={theta}")
    return hnorm / gnorm**2, gnorm, hnorm


@dataclass
class AuditSample:
    t: np.longdouble
    theta: list
    grad_norm: np.longdouble
    hess_norm: np.longdouble
    ratio: np.longdouble


@dataclass
class AuditReport:
    model: str
    path: str
    samples: list = field(default_factory=list)
    skipped: list = field(default_factory=list)  # (t, reason)
    trend_slope: float | None = None

    @property
    def ratios(self):
        return [s.ratio for s in self.samples]


def geometric_path(start, ratio, count):
    start, ratio = ld(start), ld(ratio)
    return [start * ratio**k for k in range(int(count))]


def linear_path(start, step, count):
    start, step = ld(start), ld(step)
    return [start + step * k for k in range(int(count))]


def parse_path(spec: str):
    """Parse 'geometric:start,ratio,K' or 'linear:start,step,K'."""
    try:
        kind, rest = spec.split(":", 1)
        a, b, count = rest.split(",")
        count = int(count)
    except ValueError:
        raise ParameterError(
            f"path must look like 'geometric:start,ratio,K' or 'linear:start,step,K', got {spec!r}"
        ) from None
    if count <= 0:
        raise ParameterError("path length K must be positive")
    if kind == "geometric":
        return geometric_path(a, b, count)
    if kind == "linear":
        return linear_path(a, b, count)
    raise ParameterError(f"unknown path kind {kind!r}")


def _trend_slope(samples):
    """Slope of log(ratio) vs log(grad_norm) over the last third."""
    if len(samples) < 3:
        return None
    tail = samples[-max(2, len(samples) // 3):]
    xs = np.array([math.log(float(s.grad_norm)) for s in tail])
    ys = np.array([math.log(float(s.ratio)) for s in tail])
    if np.ptp(xs) == 0:
        return 0.0
    return float(np.polyfit(xs, ys, 1)[0])


def probe_path(model: ModelObjective, path, path_label="") -> AuditReport:
    """Sample the curvature ratio along a scalar path; out-of-domain or
    stationary points are recorded and skipped rather than aborting."""
    report = AuditReport(model=model.name, path=path_label)
    for t in path:
        theta = model.path_point(t)
        try:
            ratio, gnorm, hnorm = curvature_ratio(model, theta)
        except (DomainError, ZeroGradientError) as exc:
            report.skipped.append((ld(t), str(exc)))
            continue
        report.samples.append(
            AuditSample(ld(t), [ld(v) for v in theta], gnorm, hnorm, ratio)
        )
    report.trend_slope = _trend_slope(report.samples)
    return report
