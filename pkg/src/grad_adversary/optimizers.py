"""Thirteen instrumented gradient methods.

Every runner produces a :class:`Trace`: per-iteration iterate, objective
and gradient values, inner-loop probe points, cumulative oracle counters,
and control state. Objective-free methods never trigger a counted
objective evaluation; their recorded f values come from the objective's
uncounted shadow oracle so claim checks can be pure functions of traces.

Acceptance comparisons in the line-search methods use ``<=`` with an
absolute slack of ``1e-12 * max(1, |F(theta_k)|)``: the adversarial
constructions make the first accepted trial hold with exact equality, and
the slack keeps rounding from flipping that decision.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .numerics import LD, ExactReal, as_position, ld
from .objective import Objective


@dataclass
class Probe:
    kind: str  # trial | nag_y | nag_z | bregman_seed
    theta: np.longdouble
    f: np.longdouble | None = None
    grad: np.longdouble | None = None


@dataclass
class IterationRecord:
    k: int
    theta: list
    f: np.longdouble
    grad: list
    probes: list = field(default_factory=list)
    cum_obj_evals: int = 0
    cum_grad_evals: int = 0
    cum_hess_evals: int = 0
    control: dict = field(default_factory=dict)


@dataclass
class Trace:
    scenario: str
    params: dict
    iterations: list = field(default_factory=list)
    flags: list = field(default_factory=list)


@dataclass
class RunBudget:
    max_inner: int = 8192


_DEFAULT_BUDGET = RunBudget()


def _slack(fk):
    return LD(1e-12) * max(LD(1), abs(fk))


class _Recorder:
    def __init__(self, obj: Objective, scenario: str, params: dict):
        self.obj = obj
        self.trace = Trace(scenario=scenario, params=dict(params))

    def add(self, k, theta, f=None, grad=None, probes=None, control=None):
        if f is None:
            f = self.obj.value_shadow(theta)
        if grad is None:
            grad = self.obj.grad_shadow(theta)
        o, g, h = self.obj.counters()
        self.trace.iterations.append(
            IterationRecord(
                k=k,
                theta=[ld(theta)],
                f=ld(f),
                grad=[ld(grad)],
                probes=list(probes or []),
                cum_obj_evals=o,
                cum_grad_evals=g,
                cum_hess_evals=h,
                control=dict(control or {}),
            )
        )

    def flag(self, name):
        if name not in self.trace.flags:
            self.trace.flags.append(name)


def _finite(x):
    if isinstance(x, ExactReal):
        return True
    return bool(np.isfinite(x))


# ---------------------------------------------------------------------------
# objective-free methods


def run_constant_gd(obj, theta0, m, steps, budget=None) -> Trace:
    """theta_{k+1} = theta_k - m * F'(theta_k)."""
    m = ld(m)
    theta = as_position(theta0)
    rec = _Recorder(obj, "constant", {"m": m, "theta0": theta})
    for k in range(steps):
        g = obj.grad(theta)
        rec.add(k, theta, grad=g, control={"step_size": m})
        nxt = theta - m * g
        if not _finite(nxt):
            rec.flag("overflow")
            return rec.trace
        theta = nxt
    rec.add(steps, theta, control={"step_size": m})
    return rec.trace


def run_bb(obj, theta0, m0, steps, budget=None) -> Trace:
    """Barzilai-Borwein; both variants coincide in one dimension."""
    m0 = ld(m0)
    theta = as_position(theta0)
    rec = _Recorder(obj, "bb", {"m0": m0, "theta0": theta})
    g = obj.grad(theta)
    rec.add(0, theta, grad=g, control={"step_size": m0})
    theta_prev, g_prev = theta, g
    theta = theta - m0 * g
    step = m0
    for k in range(1, steps + 1):
        if not _finite(theta):
            rec.flag("overflow")
            return rec.trace
        if k == steps:
            rec.add(k, theta, control={"step_size": step})
            break
        g = obj.grad(theta)
        rec.add(k, theta, grad=g, control={"step_size": step})
        denom = g - g_prev
        if denom == 0:
            rec.flag("zero_gradient_difference")
            return rec.trace
        step = (theta - theta_prev) / denom
        theta_prev, g_prev = theta, g
        theta = theta - step * g
    return rec.trace


def nag_supports(m):
    """The B/A recursion shared by the runner and anchor generation."""
    m = ld(m)
    b = LD(0)
    a = 1 / m
    while True:
        yield b, a
        b = b + LD(0.5) * (1 + np.sqrt(4 * b + 1))
        a = b + 1 / m


def run_nag(obj, theta0, m, steps, budget=None) -> Trace:
    m = ld(m)
    theta = as_position(theta0)
    z = theta
    rec = _Recorder(obj, "nag", {"m": m, "theta0": theta})
    rec.add(0, theta, control={"b_k": LD(0)})
    b = LD(0)
    a = 1 / m
    for t in range(steps):
        b1 = b + LD(0.5) * (1 + np.sqrt(4 * b + 1))
        a1 = b1 + 1 / m
        y = theta + (1 - a / a1) * (z - theta)
        gy = obj.grad(y)
        theta_new = y - m * gy
        z = z - m * (a1 - a) * gy
        if not (_finite(theta_new) and _finite(z)):
            rec.flag("overflow")
            return rec.trace
        probes = [Probe("nag_y", y, grad=gy), Probe("nag_z", z)]
        rec.add(t + 1, theta_new, probes=probes, control={"b_k": b1})
        theta, b, a = theta_new, b1, a1
    return rec.trace


def run_bregman(obj, theta0, m, steps, budget=None) -> Trace:
    """Proximal steps: local minimizer of F(psi) + (psi - theta_k)^2 / (2m).

    The inner search is seeded at theta_k - m*F'(theta_k) (the stationary
    point when the landing region is linear) and polished by guarded Newton
    until first- and second-order conditions hold.
    """
    budget = budget or _DEFAULT_BUDGET
    m = ld(m)
    theta = as_position(theta0)
    rec = _Recorder(obj, "bregman", {"m": m, "theta0": theta})
    rec.add(0, theta)
    for k in range(steps):
        g = obj.grad(theta)
        seed = theta - m * g
        psi = seed
        converged = False
        for _ in range(budget.max_inner):
            gp = obj.grad(psi) + (psi - theta) / m
            hp = obj.hess(psi) + 1 / m
            if abs(gp) <= LD(1e-10) * max(LD(1), abs(psi)) and hp > 0:
                converged = True
                break
            if hp > 0:
                step = -gp / hp
                cap = abs(m)
                step = max(-cap, min(cap, step))
            else:
                step = (m / 16) if gp < 0 else (-m / 16)
            psi = psi + step
        if not converged:
            rec.flag("inner_no_convergence")
            return rec.trace
        if not _finite(psi):
            rec.flag("overflow")
            return rec.trace
        rec.add(k + 1, psi, probes=[Probe("bregman_seed", seed)], control={"step_size": m})
        theta = psi
    return rec.trace


def run_negative_curvature(obj, theta0, m, m_prime, steps, budget=None) -> Trace:
    m = ld(m)
    m_prime = ld(m_prime)
    theta = as_position(theta0)
    rec = _Recorder(obj, "negcurve", {"m": m, "m_prime": m_prime, "theta0": theta})
    for k in range(steps):
        h = obj.hess(theta)
        g = obj.grad(theta)
        rec.add(k, theta, grad=g, control={"step_size": m})
        if h >= 0:
            sp = LD(0)
        else:
            sp = LD(1) if g == 0 else -np.sign(g)
        s = LD(0) if g == 0 else -g
        if s == 0 and sp == 0:
            rec.flag("stationary_point")
            return rec.trace
        nxt = theta + m * s + m_prime * sp
        if not _finite(nxt):
            rec.flag("overflow")
            return rec.trace
        theta = nxt
    rec.add(steps, theta, control={"step_size": m})
    return rec.trace


def run_lipschitz_approx(obj, theta0, m0, steps, budget=None) -> Trace:
    m0 = ld(m0)
    theta = as_position(theta0)
    rec = _Recorder(obj, "lipapprox", {"m0": m0, "theta0": theta})
    g = obj.grad(theta)
    rec.add(0, theta, grad=g, control={"step_size": m0, "w_k": LD(np.inf)})
    theta_prev, g_prev = theta, g
    theta = theta - m0 * g
    m_prev = m0
    w_prev = LD(np.inf)  # first branch of the min is +infinity
    for k in range(1, steps + 1):
        if not _finite(theta):
            rec.flag("overflow")
            return rec.trace
        if k == steps:
            rec.add(k, theta, control={"step_size": m_prev})
            break
        g = obj.grad(theta)
        dg = abs(g - g_prev)
        if dg == 0:
            rec.add(k, theta, grad=g)
            rec.flag("zero_gradient_difference")
            return rec.trace
        mk = min(np.sqrt(1 + w_prev) * m_prev, abs(theta - theta_prev) / (2 * dg))
        rec.add(k, theta, grad=g, control={"step_size": mk, "w_k": w_prev})
        theta_prev, g_prev = theta, g
        theta = theta - mk * g
        w_prev = mk / m_prev
        m_prev = mk
    return rec.trace


def run_wngrad(obj, theta0, b0, steps, budget=None) -> Trace:
    b0 = ld(b0)
    theta = as_position(theta0)
    rec = _Recorder(obj, "wngrad", {"b0": b0, "theta0": theta})
    b = b0
    g = obj.grad(theta)
    rec.add(0, theta, grad=g, control={"b_k": b})
    for k in range(1, steps + 1):
        theta = theta - g / b
        if not _finite(theta):
            rec.flag("overflow")
            return rec.trace
        g = obj.grad(theta) if k < steps else obj.grad_shadow(theta)
        b = b + g * g / b
        rec.add(k, theta, grad=g, control={"b_k": b})
    return rec.trace


def run_adagrad_like(obj, theta0, zeta, mu, steps, budget=None) -> Trace:
    zeta = ld(zeta)
    mu = ld(mu)
    theta = as_position(theta0)
    rec = _Recorder(obj, "adagrad", {"zeta": zeta, "mu": mu, "theta0": theta})
    acc = zeta
    for k in range(steps):
        g = obj.grad(theta)
        acc = acc + g * g
        w = acc**mu
        rec.add(k, theta, grad=g, control={"w_k": w})
        theta = theta - g / w
        if not _finite(theta):
            rec.flag("overflow")
            return rec.trace
    rec.add(steps, theta)
    return rec.trace


def run_polyak(obj, theta0, f_lower_bound, steps, budget=None) -> Trace:
    """Polyak step sizes; the one method here that reads F once per step."""
    f_lb = ld(f_lower_bound)
    theta = as_position(theta0)
    rec = _Recorder(obj, "polyak", {"f_lb": f_lb, "theta0": theta})
    for k in range(steps):
        f = obj.value(theta)
        g = obj.grad(theta)
        rec.add(k, theta, f=f, grad=g)
        if g == 0:
            rec.flag("zero_gradient")
            return rec.trace
        step = (f - f_lb) / (g * g)
        theta = theta - step * g
        if not _finite(theta):
            rec.flag("overflow")
            return rec.trace
    rec.add(steps, theta)
    return rec.trace


# ---------------------------------------------------------------------------
# line-search methods


def run_armijo(obj, theta0, alpha, delta, rho, steps, budget=None) -> Trace:
    alpha, delta, rho = ld(alpha), ld(delta), ld(rho)
    theta = as_position(theta0)
    rec = _Recorder(obj, "armijo", {"alpha": alpha, "delta": delta, "rho": rho, "theta0": theta})
    budget = budget or _DEFAULT_BUDGET
    fk = obj.value(theta)
    rec.add(0, theta, f=fk)
    for k in range(steps):
        g = obj.grad(theta)
        probes = []
        accepted = None
        for j in range(budget.max_inner):
            stepsize = alpha * delta**j
            trial = theta - stepsize * g
            ft = obj.value(trial)
            probes.append(Probe("trial", trial, f=ft))
            if ft <= fk - rho * stepsize * g * g + _slack(fk):
                accepted = (trial, ft, stepsize)
                break
        if accepted is None:
            rec.flag("inner_trial_cap")
            return rec.trace
        theta, fk, used = accepted
        rec.add(k + 1, theta, f=fk, probes=probes, control={"step_size": used})
    return rec.trace


def cubic_subproblem_1d(g, h, penalty, convention):
    """Global minimizer of g*s + h*s^2/2 + penalty*|s|^3/(6 or 3).

    ``convention`` is "sixth" (penalty/6 scaling) or "third" (penalty/3).
    """
    g, h, penalty = ld(g), ld(h), ld(penalty)
    if penalty <= 0:
        raise ValueError("penalty must be positive")
    if convention == "sixth":
        a = penalty / 2
    elif convention == "third":
        a = penalty
    else:
        raise ValueError(f"unknown convention {convention!r}")

    candidates = [LD(0)]
    disc = h * h - 4 * a * g  # stationarity on s >= 0: a s^2 + h s + g = 0
    if disc >= 0:
        r = np.sqrt(disc)
        for s in ((-h + r) / (2 * a), (-h - r) / (2 * a)):
            if s > 0:
                candidates.append(s)
    disc = h * h + 4 * a * g  # stationarity on s <= 0 via u = -s: a u^2 + h u - g = 0
    if disc >= 0:
        r = np.sqrt(disc)
        for u in ((-h + r) / (2 * a), (-h - r) / (2 * a)):
            if u > 0:
                candidates.append(-u)

    def model(s):
        return g * s + h * s * s / 2 + a * abs(s) ** 3 / 3

    return min(candidates, key=model)


def acr_cauchy_step(g, h, sigma):
    """Exact minimizer of the cubic model along -F'(theta_k)."""
    g, h, sigma = ld(g), ld(h), ld(sigma)
    if g == 0:
        return LD(0)
    # minimize -m g^2 + m^2 g^2 h / 2 + (sigma/3) m^3 |g|^3 over m >= 0
    aa = sigma * abs(g) ** 3
    disc = (h * g * g) ** 2 + 4 * aa * g * g
    m = (-h * g * g + np.sqrt(disc)) / (2 * aa)
    return -m * g


def run_cubic_newton(obj, theta0, L0, delta1, steps, budget=None) -> Trace:
    L0, delta1 = ld(L0), ld(delta1)
    theta = as_position(theta0)
    rec = _Recorder(obj, "cubic_newton", {"L0": L0, "delta1": delta1, "theta0": theta})
    budget = budget or _DEFAULT_BUDGET
    fk = obj.value(theta)
    rec.add(0, theta, f=fk)
    for k in range(steps):
        g = obj.grad(theta)
        h = obj.hess(theta)
        M = L0  # the penalty restarts from L0 every outer iteration
        probes = []
        accepted = None
        for _ in range(budget.max_inner):
            s = cubic_subproblem_1d(g, h, M, "sixth")
            psi = theta + s
            u = g * s + h * s * s / 2 + M * abs(s) ** 3 / 6
            fpsi = obj.value(psi)
            probes.append(Probe("trial", psi, f=fpsi))
            if fpsi <= fk + u + _slack(fk):
                accepted = (psi, fpsi, M)
                break
            M = delta1 * M
        if accepted is None:
            rec.flag("inner_trial_cap")
            return rec.trace
        theta, fk, used = accepted
        rec.add(k + 1, theta, f=fk, probes=probes, control={"penalty": used})
    return rec.trace


def run_acr(obj, theta0, sigma0, delta1, delta2, eta1, eta2, steps, budget=None) -> Trace:
    sigma0, delta1, delta2 = ld(sigma0), ld(delta1), ld(delta2)
    eta1, eta2 = ld(eta1), ld(eta2)
    theta = as_position(theta0)
    rec = _Recorder(
        obj,
        "acr",
        {
            "sigma0": sigma0,
            "delta1": delta1,
            "delta2": delta2,
            "eta1": eta1,
            "eta2": eta2,
            "theta0": theta,
        },
    )
    budget = budget or _DEFAULT_BUDGET
    fk = obj.value(theta)
    rec.add(0, theta, f=fk)
    sigma_carry = sigma0
    for k in range(steps):
        g = obj.grad(theta)
        h = obj.hess(theta)  # B_k is the true Hessian
        sigma = sigma_carry
        probes = []
        accepted = None
        for _ in range(budget.max_inner):
            gamma = cubic_subproblem_1d(g, h, sigma, "third")
            model_drop = -(g * gamma + h * gamma * gamma / 2 + sigma * abs(gamma) ** 3 / 3)
            if model_drop <= 0:
                rec.flag("stationary_point")
                return rec.trace
            ftrial = obj.value(theta + gamma)
            probes.append(Probe("trial", theta + gamma, f=ftrial))
            ratio = (fk - ftrial) / model_drop
            if ratio >= eta1:
                accepted = (theta + gamma, ftrial, sigma, ratio)
                break
            sigma = delta2 * sigma  # inflate to the top of [d1*s, d2*s]
        if accepted is None:
            rec.flag("inner_trial_cap")
            return rec.trace
        theta, fk, sig_used, ratio = accepted
        # very successful steps reset to sigma0; merely successful ones keep sigma
        sigma_carry = sigma0 if ratio > eta2 else sig_used
        rec.add(
            k + 1,
            theta,
            f=fk,
            probes=probes,
            control={"penalty": sig_used, "rho": ratio},
        )
    return rec.trace


def run_dynamic(obj, theta0, L0, sigma0, delta1, steps, budget=None) -> Trace:
    """Line search over Lipschitz constants for paired first/second-order
    upper-bound models; the cheaper model is tried at each inner step."""
    L0, sigma0, delta1 = ld(L0), ld(sigma0), ld(delta1)
    theta = as_position(theta0)
    rec = _Recorder(obj, "dynamic", {"L0": L0, "sigma0": sigma0, "delta1": delta1, "theta0": theta})
    budget = budget or _DEFAULT_BUDGET
    fk = obj.value(theta)
    rec.add(0, theta, f=fk)
    for k in range(steps):
        g = obj.grad(theta)
        hh = obj.hess(theta)
        if hh >= 0:
            sp = LD(0)
        else:
            sp = LD(1) if g == 0 else -np.sign(g)
        s = -g
        ell = L0  # accepted steps reset both constants to their floors
        sigma = sigma0
        probes = []
        accepted = None
        for _ in range(budget.max_inner):
            if s == 0:
                m_l, u = LD(0), LD(0)
            else:
                m_l = 1 / ell
                u = -m_l * g * g + ell * m_l * m_l * g * g / 2
            if sp == 0:
                m_s, up = LD(0), LD(0)
            else:
                c = sp * hh * sp
                m_s = (-c + np.sqrt(c * c - 2 * sigma * abs(sp) ** 3 * g * sp)) / (
                    sigma * abs(sp) ** 3
                )
                up = m_s * g * sp + m_s * m_s * c / 2 + sigma * m_s**3 * abs(sp) ** 3 / 6
            if u <= up:
                trial = theta + m_l * s
                ft = obj.value(trial)
                probes.append(Probe("trial", trial, f=ft))
                if ft <= fk + u + _slack(fk):
                    accepted = (trial, ft)
                    break
                ell = delta1 * ell
            else:
                trial = theta + m_s * sp
                ft = obj.value(trial)
                probes.append(Probe("trial", trial, f=ft))
                if ft <= fk + up + _slack(fk):
                    accepted = (trial, ft)
                    break
                sigma = delta1 * sigma
        if accepted is None:
            rec.flag("inner_trial_cap")
            return rec.trace
        theta, fk = accepted
        rec.add(k + 1, theta, f=fk, probes=probes, control={"penalty": ell, "sigma": sigma})
    return rec.trace
