"""Scenario catalog: one adversarial construction per method.

Each scenario binds an objective, a method configuration, and its
expectations: predicted iterates (anchor landings), flat-region radii,
probe targets, divergence spans, gradient floors and evaluation-growth
bases. Expectations are produced by mirrored recursions that compute the
anchor sequences directly from their defining formulas, independently of
the optimizer loop, so verification compares two separately derived
sequences.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .blocks import _phi
from .bump import BumpSpec, make_bump
from .chained import AnchorSpec, ChainedStaircase, make_chained
from .errors import AnchorOverflowError, ParameterError, UnknownScenarioError
from .numerics import LD, ExactReal, ld
from .objective import Objective
from . import optimizers as opt

_SENTINEL_STEPS = 10**9
SQRT5 = np.sqrt(LD(5))


@dataclass
class Expectation:
    main: list | None = None  # target per recorded main iterate
    radii: list | None = None  # flat-slope radius per target (None = tolerance only)
    probes: dict = field(default_factory=dict)  # (k, kind) -> (target, radius|None)
    span: tuple | None = None  # (S_first, S_last) for the divergence lower bound


@dataclass
class Scenario:
    name: str
    group: str  # quartic | staircase | explosion
    summary: str
    defaults: dict
    build: callable  # (params, steps) -> Objective
    run: callable  # (obj, params, steps, budget) -> Trace
    expect: callable  # (params, steps) -> Expectation
    max_steps: callable  # (params) -> int
    checks: tuple
    grad_floor: object = None  # longdouble bound or None
    eval_base: int | None = None
    strict_divergence: bool = False
    finalize: callable = None  # optional derived-default hook


# ---------------------------------------------------------------------------
# constant-step quartic blow-up


def _build_quartic(p, steps):
    def value(t):
        return t**4 / 4

    def grad(t):
        return t**3

    def hess(t):
        return 3 * t * t

    return Objective(value, grad, hess, name="quartic")


def _finalize_constant(p):
    if p.get("theta0") is None:
        # first representable point past the blow-up threshold sqrt(2/m)
        p["theta0"] = np.nextafter(np.sqrt(2 / p["m"]), LD(np.inf))
    return p


def _finalize_dynamic(p):
    if p["curvature"] < 0:
        raise ParameterError(f"curvature must be non-negative, got {p['curvature']}")
    return p


# ---------------------------------------------------------------------------
# staircase scenarios (anchor generators + mirrored expectations)


def _bb_gen(m0):
    def gen():
        s, d = LD(0), LD(1)
        while d > 0:
            yield s, d
            s = s + m0
            d = d / 2

    return gen


def _nag_state(m):
    """Joint Theta/Y/Z/B/A recursion (slopes are all -1 on this staircase)."""
    theta, z, b, a = LD(0), LD(0), LD(0), 1 / m
    gy = LD(-1)
    while True:
        b1 = b + LD(0.5) * (1 + np.sqrt(4 * b + 1))
        a1 = b1 + 1 / m
        y = theta + (1 - a / a1) * (z - theta)
        theta = y - m * gy
        z = z - m * (a1 - a) * gy
        yield y, theta, z
        b, a = b1, a1


def _nag_gen(m):
    def gen():
        yield LD(0), LD(1)
        last = LD(0)
        for y, theta, _ in _nag_state(m):
            if y > last:
                last = y
                yield y, LD(1)
            if theta > last:
                last = theta
                yield theta, LD(1)

    return gen


def _uniform_gen(m):
    """Anchors m apart, slope -1 everywhere."""

    def gen():
        s = LD(0)
        gstep = m * LD(-1)
        while np.isfinite(s):
            yield s, LD(1)
            s = s - gstep

    return gen


def _lipapprox_iterates(m0):
    """Mirror of the Lipschitz-approximation recursion on this staircase."""
    ratio = SQRT5 / (SQRT5 + 1)  # slope decay d_{j+1}/d_j
    d = LD(1)
    theta, g = LD(0), LD(-1)
    yield theta, d
    theta_prev, g_prev = theta, g
    theta = theta - m0 * g
    d = d * ratio
    yield theta, d
    m_prev, w_prev = m0, LD(np.inf)
    while np.isfinite(theta):
        g = -d
        mk = min(np.sqrt(1 + w_prev) * m_prev, abs(theta - theta_prev) / (2 * abs(g - g_prev)))
        theta_prev, g_prev = theta, g
        theta = theta - mk * g
        w_prev = mk / m_prev
        m_prev = mk
        d = d * ratio
        yield theta, d


def _lipapprox_gen(m0):
    def gen():
        for s, d in _lipapprox_iterates(m0):
            if not np.isfinite(s):
                return
            yield s, d

    return gen


def _wngrad_gen(b0):
    def gen():
        s, b = LD(0), b0
        g = LD(-1)
        while np.isfinite(s):
            yield s, LD(1)
            s = s - g / b
            b = b + g * g / b

    return gen


def _adagrad_gen(zeta, mu):
    def gen():
        s, acc = LD(0), zeta
        g = LD(-1)
        while np.isfinite(s):
            yield s, LD(1)
            acc = acc + g * g
            w = acc**mu
            s = s - g / w

    return gen


POLYAK_D = LD(1) / 8
POLYAK_F_LB = LD(-31) / 2048


def _polyak_gen():
    """Anchors produced by mirroring the Polyak step on the memoized values."""

    def gen():
        # rise per unit length for entry/exit slope 1/8 (the 1346/2048 constant)
        rise = _phi(LD(1), POLYAK_D, POLYAK_D)
        s, val = LD(0), LD(0)
        g = -POLYAK_D
        yield s, POLYAK_D
        s_next = LD(1)
        while np.isfinite(s_next):
            gap = s_next - s
            val = val + gap * rise
            s = s_next
            yield s, POLYAK_D
            step = (val - POLYAK_F_LB) / (g * g)
            s_next = s - step * g

    return gen


def _chained_build(gen_factory):
    def build(p, steps):
        return make_chained(AnchorSpec(gen_factory(p)))

    return build


def _chain_expect(gen, steps, idx_map, span_last=None):
    """Targets/radii for main iterates mapped onto chain anchor indices."""
    chain = ChainedStaircase(AnchorSpec(gen))
    main = [chain.anchor(idx_map(k)) for k in range(steps + 1)]
    radii = [chain.flat_radius(idx_map(k)) for k in range(steps + 1)]
    last = span_last if span_last is not None else idx_map(steps)
    span = (chain.anchor(0), chain.anchor(last))
    return chain, Expectation(main=main, radii=radii, span=span)


def _simulate_max_steps(pairs, cap=30000):
    """Count how many anchors a (S, d) iterator yields finitely."""
    count = -1
    with np.errstate(over="ignore", invalid="ignore", divide="ignore"):
        for s, d in pairs:
            if not (np.isfinite(s) and d > 0):
                break
            count += 1
            if count >= cap:
                return _SENTINEL_STEPS
    return max(count, 0)


# ---------------------------------------------------------------------------
# explosion scenarios (bump objective over doubly exponential anchor gaps)


def _explosion_spacing_base(kind, p):
    if kind == "armijo":
        return p["delta"]
    if kind == "cubic_newton":
        return 1 / np.sqrt(p["delta1"])
    if kind == "acr":
        return 1 / np.sqrt(p["delta2"])
    if kind == "dynamic":
        return 1 / p["delta1"]
    raise UnknownScenarioError(kind)


def _explosion_anchors(base, steps):
    anchors = [ExactReal(0)]
    with np.errstate(over="ignore"):
        for j in range(1, steps + 1):
            gap = base ** LD(j - 2 ** (j - 1))
            if not np.isfinite(gap):
                raise AnchorOverflowError(f"anchor S_{j} overflowed", max_feasible=j - 1)
            anchors.append(anchors[-1] + gap)
    return anchors


def _half_gap(base, j):
    """delta^(j+2-2^(j+1)): the slope scale at anchor j."""
    return base ** LD(j + 2 - 2 ** (j + 1))


def _explosion_triples(kind, p, steps):
    base = _explosion_spacing_base(kind, p)
    triples = []
    acc = LD(0)
    with np.errstate(over="ignore"):
        for j in range(steps + 1):
            h = _half_gap(base, j)
            if kind == "armijo":
                triples.append((-(p["rho"] / p["alpha"]) * acc, -h / p["alpha"], LD(0)))
                acc = acc + h * h
            elif kind == "cubic_newton":
                triples.append((-(p["L0"] / 3) * acc, -(p["L0"] / 2) * h * h, LD(0)))
                acc = acc + h * h * h
            elif kind == "acr":
                scale = 2 * (p["eta2"] + 1) * p["sigma0"] / 3
                triples.append((-scale * acc, -p["sigma0"] * h * h, LD(0)))
                acc = acc + h * h * h
            else:  # dynamic
                triples.append((-(p["L0"] / 2) * acc, -p["L0"] * h, p["curvature"]))
                acc = acc + h * h
    return triples


def _explosion_build(kind):
    def build(p, steps):
        base = _explosion_spacing_base(kind, p)
        window = (1 - base) / 2
        spec = BumpSpec(
            anchors=_explosion_anchors(base, steps),
            delta=window,
            triples=_explosion_triples(kind, p, steps),
        )
        return make_bump(spec, name=kind)

    return build


def _explosion_expect(kind):
    def expect(p, steps):
        base = _explosion_spacing_base(kind, p)
        return Expectation(main=_explosion_anchors(base, steps))

    return expect


def _explosion_max_steps(kind):
    def max_steps(p):
        base = _explosion_spacing_base(kind, p)
        if not 0 < base < 1:
            raise ParameterError(f"anchor spacing base {base} outside (0,1)")
        lg = float(np.log2(ld(base)))
        if kind in ("cubic_newton", "dynamic"):
            lg_pen = float(np.log2(p["delta1"]))
        elif kind == "acr":
            lg_pen = float(np.log2(p["delta2"]))
        else:
            lg_pen = -lg  # armijo shrinks steps by delta per trial
        fsum = LD(0)
        with np.errstate(over="ignore"):
            for j in range(64):
                h = _half_gap(base, j)
                if kind == "armijo":
                    g = h / p["alpha"]
                    fsum = fsum + h * h
                elif kind == "cubic_newton":
                    g = (p["L0"] / 2) * h * h
                    fsum = fsum + h * h * h
                elif kind == "acr":
                    g = p["sigma0"] * h * h
                    fsum = fsum + h * h * h
                else:
                    g = p["L0"] * h
                    fsum = fsum + h * h
                trials = 2**j - 1  # penalty/step-size adjustments before acceptance
                if not (
                    np.isfinite(g)
                    and np.isfinite(g * g)
                    and np.isfinite(fsum)
                    and trials * lg_pen < 16300
                ):
                    return j  # step j infeasible: largest reachable iterate is theta_j
        return 64

    return max_steps


# ---------------------------------------------------------------------------
# catalog


def _catalog():
    scenarios = {}

    def add(s):
        scenarios[s.name] = s

    add(
        Scenario(
            name="constant",
            group="quartic",
            summary="fixed-step gradient descent on F=theta^4/4 past the stable radius",
            defaults={"m": LD(0.1), "theta0": None},
            build=_build_quartic,
            run=lambda obj, p, steps, budget: opt.run_constant_gd(
                obj, p["theta0"], p["m"], steps, budget
            ),
            expect=lambda p, steps: Expectation(),
            max_steps=lambda p: _SENTINEL_STEPS,
            checks=("divergence",),
            strict_divergence=True,
            finalize=_finalize_constant,
        )
    )

    def _bb_expect(p, steps):
        _, e = _chain_expect(_bb_gen(p["m0"]), steps, lambda k: k)
        return e

    add(
        Scenario(
            name="bb",
            group="staircase",
            summary="Barzilai-Borwein steps walking anchors m0*j with halving slopes",
            defaults={"m0": LD(1), "theta0": LD(0)},
            build=_chained_build(lambda p: _bb_gen(p["m0"])),
            run=lambda obj, p, steps, budget: opt.run_bb(obj, p["theta0"], p["m0"], steps, budget),
            expect=_bb_expect,
            max_steps=lambda p: _simulate_max_steps(_bb_gen(p["m0"])()),
            checks=("anchor_tracking", "divergence"),
        )
    )

    def _nag_expect(p, steps):
        m = p["m"]
        chain = ChainedStaircase(AnchorSpec(_nag_gen(m)))
        idx = lambda t: 0 if t == 0 else (1 if t == 1 else 2 * t - 2)
        main = [chain.anchor(idx(t)) for t in range(steps + 1)]
        radii = [chain.flat_radius(idx(t)) for t in range(steps + 1)]
        probes = {}
        state = _nag_state(m)
        for t in range(steps):
            # record t+1 carries the support point y_t and the updated z_{t+1}
            _, _, z = next(state)
            y_idx = 0 if t == 0 else (1 if t == 1 else 2 * t - 1)
            probes[(t + 1, "nag_y")] = (chain.anchor(y_idx), chain.flat_radius(y_idx))
            probes[(t + 1, "nag_z")] = (z, None)
        return Expectation(main=main, radii=radii, probes=probes, span=(main[0], main[-1]))

    add(
        Scenario(
            name="nag",
            group="staircase",
            summary="accelerated gradient whose theta/y iterates interleave along the staircase",
            defaults={"m": LD(1), "theta0": LD(0)},
            build=_chained_build(lambda p: _nag_gen(p["m"])),
            run=lambda obj, p, steps, budget: opt.run_nag(obj, p["theta0"], p["m"], steps, budget),
            expect=_nag_expect,
            max_steps=lambda p: _SENTINEL_STEPS,
            checks=("anchor_tracking", "divergence", "gradient_floor"),
            grad_floor=LD(1),
        )
    )

    def _uniform_expect(p, steps):
        _, e = _chain_expect(_uniform_gen(p["m"]), steps, lambda k: k)
        return e

    add(
        Scenario(
            name="bregman",
            group="staircase",
            summary="proximal (implicit) steps landing on uniformly spaced anchors",
            defaults={"m": LD(1), "theta0": LD(0)},
            build=_chained_build(lambda p: _uniform_gen(p["m"])),
            run=lambda obj, p, steps, budget: opt.run_bregman(
                obj, p["theta0"], p["m"], steps, budget
            ),
            expect=_uniform_expect,
            max_steps=lambda p: _SENTINEL_STEPS,
            checks=("anchor_tracking", "divergence", "gradient_floor"),
            grad_floor=LD(1),
        )
    )

    def _negcurve_expect(p, steps):
        _, e = _chain_expect(_uniform_gen(p["m"]), steps, lambda k: k)
        return e

    add(
        Scenario(
            name="negcurve",
            group="staircase",
            summary="gradient plus negative-curvature steps; curvature direction stays inactive",
            defaults={"m": LD(1), "m_prime": LD(1), "theta0": LD(0)},
            build=_chained_build(lambda p: _uniform_gen(p["m"])),
            run=lambda obj, p, steps, budget: opt.run_negative_curvature(
                obj, p["theta0"], p["m"], p["m_prime"], steps, budget
            ),
            expect=_negcurve_expect,
            max_steps=lambda p: _SENTINEL_STEPS,
            checks=("anchor_tracking", "divergence", "gradient_floor"),
            grad_floor=LD(1),
        )
    )

    def _lip_expect(p, steps):
        _, e = _chain_expect(_lipapprox_gen(p["m0"]), steps, lambda k: k)
        return e

    add(
        Scenario(
            name="lipapprox",
            group="staircase",
            summary="estimated-Lipschitz step sizes growing by the golden ratio",
            defaults={"m0": LD(1), "theta0": LD(0)},
            build=_chained_build(lambda p: _lipapprox_gen(p["m0"])),
            run=lambda obj, p, steps, budget: opt.run_lipschitz_approx(
                obj, p["theta0"], p["m0"], steps, budget
            ),
            expect=_lip_expect,
            max_steps=lambda p: _simulate_max_steps(_lipapprox_gen(p["m0"])()),
            checks=("anchor_tracking", "divergence"),
        )
    )

    def _wngrad_expect(p, steps):
        _, e = _chain_expect(_wngrad_gen(p["b0"]), steps, lambda k: k)
        return e

    add(
        Scenario(
            name="wngrad",
            group="staircase",
            summary="norm-adapted step sizes with growing denominator sequence",
            defaults={"b0": LD(1), "theta0": LD(0)},
            build=_chained_build(lambda p: _wngrad_gen(p["b0"])),
            run=lambda obj, p, steps, budget: opt.run_wngrad(
                obj, p["theta0"], p["b0"], steps, budget
            ),
            expect=_wngrad_expect,
            max_steps=lambda p: _SENTINEL_STEPS,
            checks=("anchor_tracking", "divergence", "gradient_floor"),
            grad_floor=LD(1),
        )
    )

    def _adagrad_expect(p, steps):
        _, e = _chain_expect(_adagrad_gen(p["zeta"], p["mu"]), steps, lambda k: k)
        return e

    add(
        Scenario(
            name="adagrad",
            group="staircase",
            summary="accumulated-square step sizes shrinking like (zeta + k)^(-mu)",
            defaults={"zeta": LD(1), "mu": LD(0.5), "theta0": LD(0)},
            build=_chained_build(lambda p: _adagrad_gen(p["zeta"], p["mu"])),
            run=lambda obj, p, steps, budget: opt.run_adagrad_like(
                obj, p["theta0"], p["zeta"], p["mu"], steps, budget
            ),
            expect=_adagrad_expect,
            max_steps=lambda p: _SENTINEL_STEPS,
            checks=("anchor_tracking", "divergence", "gradient_floor"),
            grad_floor=LD(1),
        )
    )

    def _polyak_expect(p, steps):
        _, e = _chain_expect(_polyak_gen(), steps, lambda k: k + 1)
        return e

    add(
        Scenario(
            name="polyak",
            group="staircase",
            summary="Polyak step sizes driven by a deliberately loose lower bound",
            defaults={"theta0": LD(1), "f_lb": POLYAK_F_LB},
            build=_chained_build(lambda p: _polyak_gen()),
            run=lambda obj, p, steps, budget: opt.run_polyak(
                obj, p["theta0"], p["f_lb"], steps, budget
            ),
            expect=_polyak_expect,
            max_steps=lambda p: _simulate_max_steps(_polyak_gen()()),
            checks=("anchor_tracking", "divergence", "gradient_floor"),
            grad_floor=POLYAK_D,
        )
    )

    add(
        Scenario(
            name="armijo",
            group="explosion",
            summary="backtracking line search doubling its trial count at every acceptance",
            defaults={
                "alpha": LD(1),
                "delta": LD(0.5),
                "rho": LD(0.5),
                "theta0": ExactReal(0),
            },
            build=_explosion_build("armijo"),
            run=lambda obj, p, steps, budget: opt.run_armijo(
                obj, p["theta0"], p["alpha"], p["delta"], p["rho"], steps, budget
            ),
            expect=_explosion_expect("armijo"),
            max_steps=_explosion_max_steps("armijo"),
            checks=("anchor_tracking", "eval_growth"),
            eval_base=2,
        )
    )

    add(
        Scenario(
            name="cubic_newton",
            group="explosion",
            summary="cubic-regularized Newton doubling rejected trials per acceptance",
            defaults={"L0": LD(1), "delta1": LD(4), "theta0": ExactReal(0)},
            build=_explosion_build("cubic_newton"),
            run=lambda obj, p, steps, budget: opt.run_cubic_newton(
                obj, p["theta0"], p["L0"], p["delta1"], steps, budget
            ),
            expect=_explosion_expect("cubic_newton"),
            max_steps=_explosion_max_steps("cubic_newton"),
            checks=("anchor_tracking", "eval_growth"),
            eval_base=2,
        )
    )

    add(
        Scenario(
            name="acr",
            group="explosion",
            summary="adaptive cubic regularization with exponentially escalating penalties",
            defaults={
                "sigma0": LD(1),
                "delta1": LD(2),
                "delta2": LD(4),
                "eta1": LD(0.25),
                "eta2": LD(0.5),
                "theta0": ExactReal(0),
            },
            build=_explosion_build("acr"),
            run=lambda obj, p, steps, budget: opt.run_acr(
                obj,
                p["theta0"],
                p["sigma0"],
                p["delta1"],
                p["delta2"],
                p["eta1"],
                p["eta2"],
                steps,
                budget,
            ),
            expect=_explosion_expect("acr"),
            max_steps=_explosion_max_steps("acr"),
            checks=("anchor_tracking", "eval_growth"),
            eval_base=2,
        )
    )

    add(
        Scenario(
            name="dynamic",
            group="explosion",
            summary="paired first/second-order upper-bound models with line-searched constants",
            defaults={
                "L0": LD(1),
                "sigma0": LD(1),
                "delta1": LD(2),
                "curvature": LD(0),
                "theta0": ExactReal(0),
            },
            finalize=_finalize_dynamic,
            build=_explosion_build("dynamic"),
            run=lambda obj, p, steps, budget: opt.run_dynamic(
                obj, p["theta0"], p["L0"], p["sigma0"], p["delta1"], steps, budget
            ),
            expect=_explosion_expect("dynamic"),
            max_steps=_explosion_max_steps("dynamic"),
            checks=("anchor_tracking", "eval_growth"),
            eval_base=2,
        )
    )

    return scenarios


SCENARIOS = _catalog()


def list_scenarios():
    return sorted(SCENARIOS)


def get_scenario(name) -> Scenario:
    try:
        return SCENARIOS[name]
    except KeyError:
        raise UnknownScenarioError(
            f"unknown scenario {name!r}; available: {', '.join(list_scenarios())}"
        ) from None


def resolve_params(scenario: Scenario, overrides=None) -> dict:
    """Merge defaults with key=value overrides, coercing to longdouble."""
    params = dict(scenario.defaults)
    for key, value in (overrides or {}).items():
        if key not in params:
            raise ParameterError(
                f"unknown parameter {key!r} for scenario {scenario.name!r}; "
                f"accepted: {', '.join(sorted(params))}"
            )
        params[key] = ld(value)
    if scenario.finalize is not None:
        params = scenario.finalize(params)
    return params
