"""Command-line front end: capacities, sweeps, thresholds, figure data, verification.

Commands
  capacity        one capacity/advantage evaluation for a state and scenario
  sweep           capacity and advantage against one noise or protocol parameter
  threshold       roots of the quantum advantage in one parameter
  kappa-scan      advantage and its noise-induced depletion across the kappa family
  holevo-scatter  seeded random-pure-state study (entanglement vs Holevo quantity)
  figure          regenerate the data behind a named figure preset
  verify          recompute every published threshold and compare

All outputs are deterministic: CSV bodies are byte-identical across reruns
with the same seed, and each file embeds its full resolved configuration.
Exit codes: 0 success, 2 parse error, 3 numerical failure.
"""
from __future__ import annotations

import argparse
import json
import math
import os
import shlex
import sys
from dataclasses import dataclass, fields
from typing import List, Optional, Tuple

import numpy as np

from . import __version__, holevo
from . import families as fam
from . import protocol as proto
from ._backend import get_backend
from .channels import (
    GaussianChannel,
    amplifier_channel,
    attenuator_channel,
    environmental_channel,
    identity_channel,
)
from .errors import CVDenseError
from .optim import sign_change_scan

OUTPUT_DIR_ENV = "CVDENSE_OUTPUT_DIR"

EXIT_OK = 0
EXIT_PARSE = 2
EXIT_NUMERICAL = 3


class ParseError(ValueError):
    pass


# ---------------------------------------------------------------------------
# spec-string grammars
# ---------------------------------------------------------------------------

def _parse_kv(body: str, spec: str) -> dict:
    out = {}
    if not body:
        return out
    for item in body.split(","):
        if "=" not in item:
            raise ParseError(f"expected key=value in {spec!r}, got {item!r}")
        key, val = item.split("=", 1)
        out[key.strip()] = val.strip()
    return out


def _fget(kv: dict, key: str, spec: str, default=None) -> float:
    if key not in kv:
        if default is None:
            raise ParseError(f"missing {key}= in {spec!r}")
        return default
    try:
        return float(kv.pop(key))
    except ValueError as exc:
        raise ParseError(f"bad numeric value for {key} in {spec!r}") from exc


def parse_channel_spec(spec: str) -> GaussianChannel:
    """Grammar: identity | amplifier:s=<f>[,nth=<f>] | pureloss:theta=<f>[,nth=<f>]
    | env:gamma=<f>,t=<f>,nbar=<f>[,conv=secIV|eq29]
    """
    name, _, body = spec.partition(":")
    kv = _parse_kv(body, spec)
    try:
        if name == "identity":
            chan = identity_channel()
        elif name == "amplifier":
            chan = amplifier_channel(_fget(kv, "s", spec), _fget(kv, "nth", spec, 1.0))
        elif name == "pureloss":
            chan = attenuator_channel(_fget(kv, "theta", spec), _fget(kv, "nth", spec, 1.0))
        elif name == "env":
            conv = kv.pop("conv", "eq29")
            chan = environmental_channel(_fget(kv, "gamma", spec), _fget(kv, "t", spec),
                                         _fget(kv, "nbar", spec), convention=conv)
        else:
            raise ParseError(f"unknown channel kind {name!r} in {spec!r}")
    except CVDenseError as exc:
        raise ParseError(f"invalid channel {spec!r}: {exc}") from exc
    if kv:
        raise ParseError(f"unexpected keys {sorted(kv)} in {spec!r}")
    return chan


def parse_state_spec(spec: str) -> Tuple[str, dict]:
    """Grammar: tmsv[:r=<f>] | kappa:k=<f>[,r=<f>] | pure:a=<f> | decomp:r=<f>,s2=<f>
    | random:nbar=<f>,seed=<u64>
    """
    name, _, body = spec.partition(":")
    kv = _parse_kv(body, spec)
    params: dict = {}
    if name == "tmsv":
        if "r" in kv:
            params["r"] = _fget(kv, "r", spec)
    elif name == "kappa":
        params["k"] = _fget(kv, "k", spec)
        if "r" in kv:
            params["r"] = _fget(kv, "r", spec)
    elif name == "pure":
        params["a"] = _fget(kv, "a", spec)
    elif name == "decomp":
        params["r"] = _fget(kv, "r", spec)
        params["s2"] = _fget(kv, "s2", spec)
    elif name == "random":
        params["nbar"] = _fget(kv, "nbar", spec)
        params["seed"] = int(_fget(kv, "seed", spec))
    else:
        raise ParseError(f"unknown state family {name!r} in {spec!r}")
    if kv:
        raise ParseError(f"unexpected keys {sorted(kv)} in {spec!r}")
    return name, params


def parse_range(text: str) -> Tuple[float, float, float]:
    parts = text.split(":")
    if len(parts) != 3:
        raise ParseError(f"range must be lo:hi:step, got {text!r}")
    try:
        lo, hi, step = (float(p) for p in parts)
    except ValueError as exc:
        raise ParseError(f"non-numeric range {text!r}") from exc
    if step <= 0 or hi < lo:
        raise ParseError(f"range needs hi >= lo and step > 0, got {text!r}")
    return lo, hi, step


def range_values(lo: float, hi: float, step: float) -> List[float]:
    count = int(math.floor((hi - lo) / step + 1e-9)) + 1
    return [lo + k * step for k in range(count)]


# ---------------------------------------------------------------------------
# run configuration and its metadata round trip
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class RunConfig:
    command: str
    figure: Optional[str] = None
    state: str = "tmsv"
    dist_a: str = "identity"
    dist_b: str = "identity"
    post: str = "identity"
    tau: float = 1.0
    nbar: Optional[float] = None
    scheme: str = proto.ADAPTIVE
    param: Optional[str] = None
    sweep: Optional[Tuple[float, float, float]] = None
    stage: Optional[str] = None
    channel: Optional[str] = None
    points: int = 50
    samples: int = 10000
    steps: int = 64
    bracket: Optional[Tuple[float, float]] = None
    fmt: str = "csv"
    output: Optional[str] = None
    seed: int = 1234

    def to_meta(self) -> str:
        tokens = [f"version={__version__}", f"backend={get_backend()}", "rng=pcg64",
                  "env_default_conv=eq29"]
        for f in fields(self):
            val = getattr(self, f.name)
            if val is None:
                continue
            if f.name == "sweep":
                val = f"{val[0]:.12g}:{val[1]:.12g}:{val[2]:.12g}"
            elif f.name == "bracket":
                val = f"{val[0]:.12g}:{val[1]:.12g}"
            tokens.append(shlex.quote(f"{f.name}={val}"))
        return "# meta: " + " ".join(tokens)

    @classmethod
    def from_meta(cls, line: str) -> "RunConfig":
        if not line.startswith("# meta: "):
            raise ParseError("metadata line must start with '# meta: '")
        known = {f.name: f for f in fields(cls)}
        kwargs = {}
        for token in shlex.split(line[len("# meta: "):]):
            key, _, val = token.partition("=")
            if key not in known:
                continue
            if key == "sweep":
                kwargs[key] = parse_range(val)
            elif key == "bracket":
                lo, hi = val.split(":")
                kwargs[key] = (float(lo), float(hi))
            elif key in ("tau", "nbar"):
                kwargs[key] = float(val)
            elif key in ("points", "samples", "steps", "seed"):
                kwargs[key] = int(val)
            else:
                kwargs[key] = val
        return cls(**kwargs)


def _base_scenario(cfg: RunConfig) -> proto.NoiseScenario:
    return proto.NoiseScenario.from_channels(
        parse_channel_spec(cfg.dist_a), parse_channel_spec(cfg.dist_b),
        parse_channel_spec(cfg.post), cfg.tau)


_PARAM_FAMILY = {"s": "amplifier", "theta": "pureloss", "t": "env"}


def _channel_for_value(cfg: RunConfig, value: float) -> GaussianChannel:
    """Build the swept/solved channel at one value of the scan parameter."""
    family = (cfg.channel or "").partition(":")[0]
    kv = _parse_kv((cfg.channel or "").partition(":")[2], cfg.channel or "")
    if family and family != _PARAM_FAMILY.get(cfg.param):
        raise ParseError(
            f"--param {cfg.param} scans a {_PARAM_FAMILY.get(cfg.param)} channel, "
            f"but --channel names {family!r}")
    if cfg.param == "s":
        return amplifier_channel(value, float(kv.get("nth", 1.0)))
    if cfg.param == "theta":
        return attenuator_channel(value, float(kv.get("nth", 1.0)))
    if cfg.param == "t":
        if "gamma" not in kv or "nbar" not in kv:
            raise ParseError("--param t needs --channel env:gamma=<f>,nbar=<f>")
        return environmental_channel(float(kv["gamma"]), value, float(kv["nbar"]),
                                     convention=kv.get("conv", "eq29"))
    raise ParseError(f"parameter {cfg.param!r} does not define a channel")


def _scenario_for_value(cfg: RunConfig, value: float) -> proto.NoiseScenario:
    if cfg.param == "tau":
        return proto.NoiseScenario.from_channels(
            parse_channel_spec(cfg.dist_a), parse_channel_spec(cfg.dist_b),
            parse_channel_spec(cfg.post), value)
    chan = _channel_for_value(cfg, value)
    ident = identity_channel()
    stage = cfg.stage or ("all" if cfg.param == "t" else None)
    if stage == "dist":
        return proto.NoiseScenario.from_channels(chan, chan, ident, cfg.tau)
    if stage == "post":
        return proto.NoiseScenario.from_channels(ident, ident, chan, cfg.tau)
    if stage == "all":
        return proto.NoiseScenario.from_channels(chan, chan, chan, cfg.tau)
    raise ParseError("--stage must be one of dist, post, all")


# ---------------------------------------------------------------------------
# emission
# ---------------------------------------------------------------------------

def _fmt(value) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, float) and math.isnan(value):
        return "nan"
    if isinstance(value, (float, np.floating)):
        return f"{float(value):.12g}"
    return str(value)


def emit(cfg: RunConfig, columns: List[str], rows: List[list]) -> str:
    if cfg.fmt == "json":
        payload = {
            "meta": cfg.to_meta()[len("# meta: "):],
            "columns": columns,
            "rows": [[_fmt(v) for v in row] for row in rows],
        }
        return json.dumps(payload, indent=1) + "\n"
    lines = [cfg.to_meta(), ",".join(columns)]
    lines.extend(",".join(_fmt(v) for v in row) for row in rows)
    return "\n".join(lines) + "\n"


def _write(cfg: RunConfig, text: str) -> None:
    if cfg.output is None:
        sys.stdout.write(text)
        return
    path = cfg.output
    base = os.environ.get(OUTPUT_DIR_ENV)
    if base and not os.path.isabs(path):
        path = os.path.join(base, path)
    os.makedirs(os.path.dirname(path) or ".", exist_ok=True)
    with open(path, "w") as fh:
        fh.write(text)
    print(f"wrote {path}")


# ---------------------------------------------------------------------------
# command implementations
# ---------------------------------------------------------------------------

def _capacity_row(state: str, scenario: proto.NoiseScenario, nbar: float, scheme: str):
    name, params = parse_state_spec(state)
    cl = proto.classical_capacity(nbar)
    if name == "tmsv" and "r" not in params:
        res = proto.capacity(scenario, nbar, scheme)
    elif name == "tmsv" or name == "pure":
        if name == "tmsv":
            form = fam.tmsv(params["r"])
        else:
            a = params["a"]
            form = fam.StandardForm(a, math.sqrt(a * a - 1), -math.sqrt(a * a - 1), a)
        if scheme == proto.ADAPTIVE:
            sigma = proto.sigma_adaptive(form, scenario, nbar)
        else:
            s_sq = (nbar - (form.a - 1.0) / 2.0) / 2.0
            if s_sq < 0:
                return [state, scheme, nbar, math.nan, cl, math.nan, math.nan, math.nan, False]
            sigma = math.sqrt(s_sq)
        bits = proto.mutual_information(form, scenario, proto.EncodingDistribution(sigma))
        res = proto.CapacityResult(bits, math.acosh(form.a) / 2.0, sigma, scheme, True)
    elif name == "kappa":
        if scheme != proto.ADAPTIVE:
            raise ParseError("kappa-family capacity is defined for the adaptive scheme only")
        if "r" in params:
            bits = fam.kappa_mutual_information(params["r"], params["k"], scenario, nbar)
            res = proto.CapacityResult(bits, params["r"],
                                       fam._kappa_sigma(params["r"], scenario, nbar),
                                       scheme, True)
        else:
            res = fam.kappa_capacity(params["k"], scenario, nbar)
    elif name == "decomp":
        if scenario != proto.NoiseScenario.noiseless():
            raise ParseError("decomp-family capacity is defined for the noiseless scenario only")
        bits = fam.decomp_mutual_information(params["r"], params["s2"], nbar)
        res = proto.CapacityResult(bits, params["r"], math.nan, proto.ADAPTIVE, True)
    else:
        raise ParseError(f"state family {name!r} has no capacity evaluation")
    adv = res.capacity_bits - cl if res.feasible else math.nan
    return [state, res.scheme, nbar, res.capacity_bits, cl, adv,
            res.r_opt, res.sigma_opt, res.feasible]


def cmd_capacity(cfg: RunConfig):
    if cfg.nbar is None:
        raise ParseError("capacity requires --nbar")
    scenario = _base_scenario(cfg)
    columns = ["state", "scheme", "nbar", "capacity_bits", "classical_bits",
               "advantage_bits", "r_opt", "sigma_opt", "feasible"]
    return columns, [_capacity_row(cfg.state, scenario, cfg.nbar, cfg.scheme)]


def _advantage_fn(cfg: RunConfig, scheme: str):
    def f(value: float) -> float:
        scenario = _scenario_for_value(cfg, value)
        return proto.quantum_advantage(scenario, cfg.nbar, scheme)
    return f


def cmd_sweep(cfg: RunConfig):
    if cfg.nbar is None or cfg.sweep is None or cfg.param is None:
        raise ParseError("sweep requires --nbar, --param and --range")
    columns = [cfg.param]
    for scheme in proto.SCHEMES:
        columns += [f"capacity_{scheme}", f"advantage_{scheme}", f"r_opt_{scheme}",
                    f"sigma_{scheme}", f"feasible_{scheme}"]
    rows = []
    cl = proto.classical_capacity(cfg.nbar)
    for value in range_values(*cfg.sweep):
        row = [value]
        scenario = _scenario_for_value(cfg, value)
        for scheme in proto.SCHEMES:
            res = proto.capacity(scenario, cfg.nbar, scheme)
            adv = res.capacity_bits - cl if res.feasible else math.nan
            row += [res.capacity_bits, adv, res.r_opt, res.sigma_opt, res.feasible]
        rows.append(row)
    return columns, rows


_DEFAULT_BRACKETS = {"s": (0.0, 1.0), "theta": (0.0, math.pi), "t": (0.005, 6.0),
                     "tau": (0.55, 0.9999)}


def cmd_threshold(cfg: RunConfig):
    if cfg.nbar is None or cfg.param is None:
        raise ParseError("threshold requires --nbar and --param")
    columns = ["root_index", cfg.param, "scheme"]
    if cfg.param == "nbar":
        kwargs = {"bracket": cfg.bracket} if cfg.bracket else {}
        root = proto.threshold_energy(_base_scenario(cfg), cfg.scheme, **kwargs)
        return ["root_index", "nbar_threshold", "scheme"], [[0, root, cfg.scheme]]
    if cfg.param not in _DEFAULT_BRACKETS:
        raise ParseError(f"threshold parameter must be one of s, theta, t, tau, nbar")
    lo, hi = cfg.bracket or _DEFAULT_BRACKETS[cfg.param]
    roots = sign_change_scan(_advantage_fn(cfg, cfg.scheme), lo, hi, cfg.steps)
    rows = [[i, r, cfg.scheme] for i, r in enumerate(roots)]
    return columns, rows


_FIG7_SETTINGS = [
    ("amp_dist_s0.1", lambda: ("amplifier:s=0.1", "amplifier:s=0.1", "identity", 1.0)),
    ("loss_post_th0.2", lambda: ("identity", "identity", "pureloss:theta=0.2", 1.0)),
    ("env_g0.1_nb0.5_t1", lambda: ("env:gamma=0.1,t=1,nbar=0.5",) * 3 + (1.0,)),
    ("detector_tau0.8", lambda: ("identity", "identity", "identity", 0.8)),
]


def _named_scenario(specs) -> proto.NoiseScenario:
    da, db, pp, tau = specs
    return proto.NoiseScenario.from_channels(
        parse_channel_spec(da), parse_channel_spec(db), parse_channel_spec(pp), tau)


def cmd_kappa_scan(cfg: RunConfig):
    if cfg.nbar is None:
        raise ParseError("kappa-scan requires --nbar")
    scenario = _base_scenario(cfg)
    clean = proto.NoiseScenario.noiseless()
    cl = proto.classical_capacity(cfg.nbar)
    columns = ["kappa", "capacity_bits", "advantage_bits", "advantage_depletion_bits", "r_opt"]
    rows = []
    for k in np.linspace(0.0, 0.5, cfg.points):
        noisy = fam.kappa_capacity(k, scenario, cfg.nbar)
        free = fam.kappa_capacity(k, clean, cfg.nbar)
        q_noisy = noisy.capacity_bits - cl if noisy.feasible else math.nan
        q_free = free.capacity_bits - cl
        rows.append([k, noisy.capacity_bits, q_noisy, q_free - q_noisy, noisy.r_opt])
    return columns, rows


def cmd_holevo_scatter(cfg: RunConfig):
    if cfg.nbar is None:
        raise ParseError("holevo-scatter requires --nbar")
    seeds, photons, ent, hol = holevo.scatter_arrays(cfg.nbar, cfg.samples, cfg.seed)
    order = np.argsort(ent)
    columns = ["seed", "nbar_sender", "entanglement_bits", "holevo_bits"]
    rows = [[int(seeds[i]), photons[i], ent[i], hol[i]] for i in order]
    return columns, rows


# ---------------------------------------------------------------------------
# figure presets
# ---------------------------------------------------------------------------

FIGURE_NAMES = (["fig3a", "fig3b"]
                + [f"fig{n}{p}" for n in (4, 5, 6) for p in "abcd"]
                + ["fig7a", "fig7b", "fig8"])


def figure_preset(name: str, fmt: str = "csv", output: Optional[str] = None,
                  seed: int = 1234) -> RunConfig:
    """Fully resolved configuration reproducing the data of a named figure."""
    if name not in FIGURE_NAMES:
        raise ParseError(f"unknown figure {name!r}; available: {', '.join(FIGURE_NAMES)}")
    base = dict(command="figure", figure=name, fmt=fmt, output=output, seed=seed)
    if name in ("fig3a", "fig3b"):
        return RunConfig(**base, sweep=(0.1, 30.0, 0.1))
    if name in ("fig4a", "fig5a"):
        return RunConfig(**base, nbar=30.0, param="s", channel="amplifier",
                         stage="dist" if name == "fig4a" else "post", sweep=(0.0, 0.7, 0.005))
    if name in ("fig4b", "fig5b"):
        return RunConfig(**base, nbar=30.0, param="theta", channel="pureloss",
                         stage="dist" if name == "fig4b" else "post",
                         sweep=(0.0, math.pi, 0.01))
    if name in ("fig4c", "fig5c"):
        return RunConfig(**base, param="s", channel="amplifier",
                         stage="dist" if name == "fig4c" else "post", sweep=(0.5, 30.0, 0.25))
    if name in ("fig4d", "fig5d"):
        return RunConfig(**base, param="theta", channel="pureloss",
                         stage="dist" if name == "fig4d" else "post", sweep=(0.5, 30.0, 0.25))
    if name == "fig6a":
        return RunConfig(**base, nbar=30.0, param="t", stage="all", sweep=(0.01, 3.0, 0.01))
    if name == "fig6b":
        return RunConfig(**base, nbar=30.0, param="t", stage="all", sweep=(0.01, 3.0, 0.01))
    if name in ("fig6c", "fig6d"):
        return RunConfig(**base, param="t", stage="all", sweep=(0.5, 30.0, 0.25))
    if name in ("fig7a", "fig7b"):
        return RunConfig(**base, nbar=30.0, points=50)
    return RunConfig(**base, samples=10000)  # fig8


def _series_q_dsc(scenario: proto.NoiseScenario, nbars):
    """Advantage and conditional-entropy headroom against sender energy."""
    n_th = proto.threshold_energy(scenario, proto.ADAPTIVE)
    ref = proto.neg_conditional_entropy(scenario, n_th)
    q_vals, d_vals = [], []
    for n in nbars:
        q_vals.append(proto.quantum_advantage(scenario, n, proto.ADAPTIVE))
        try:
            d_vals.append(proto.neg_conditional_entropy(scenario, n) - ref)
        except CVDenseError:
            d_vals.append(math.nan)
    return q_vals, d_vals


def cmd_figure(cfg: RunConfig):
    name = cfg.figure
    if name is None:
        raise ParseError("figure requires a preset name")
    if name in ("fig3a", "fig3b"):
        clean = proto.NoiseScenario.noiseless()
        nbars = range_values(*cfg.sweep)
        q_vals, d_vals = _series_q_dsc(clean, nbars)
        if name == "fig3a":
            neg = [proto.neg_cond_entropy_tmsv_closed(n) for n in nbars]
            return ["nbar", "neg_cond_entropy_bits", "advantage_bits"], \
                [[n, s, q] for n, s, q in zip(nbars, neg, q_vals)]
        return ["nbar", "advantage_bits", "delta_sc_bits"], \
            [[n, q, d] for n, q, d in zip(nbars, q_vals, d_vals)]

    if name in ("fig4a", "fig4b", "fig5a", "fig5b"):
        rows = []
        for value in range_values(*cfg.sweep):
            scenario = _scenario_for_value(cfg, value)
            rows.append([value,
                         proto.quantum_advantage(scenario, cfg.nbar, proto.ADAPTIVE),
                         proto.quantum_advantage(scenario, cfg.nbar, proto.NON_ADAPTIVE)])
        return [cfg.param, "advantage_adaptive", "advantage_non_adaptive"], rows

    if name in ("fig4c", "fig4d", "fig5c", "fig5d"):
        strengths = (0.1, 0.4)
        nbars = range_values(*cfg.sweep)
        columns = ["nbar"]
        series = []
        for value in strengths:
            scenario = _scenario_for_value(cfg, value)
            q_vals, d_vals = _series_q_dsc(scenario, nbars)
            tag = f"{cfg.param}{value:g}"
            columns += [f"advantage_{tag}", f"delta_sc_{tag}"]
            series += [q_vals, d_vals]
        return columns, [[n] + [s[i] for s in series] for i, n in enumerate(nbars)]

    if name in ("fig6a", "fig6b"):
        variants = [0.1, 0.2, 0.3] if name == "fig6a" else [0.5, 1.0, 1.5]
        columns = ["t"] + [(f"advantage_gamma{v:g}" if name == "fig6a"
                            else f"advantage_nbar_env{v:g}") for v in variants]
        rows = []
        for t in range_values(*cfg.sweep):
            row = [t]
            for v in variants:
                gamma, nb = (v, 0.5) if name == "fig6a" else (0.1, v)
                chan = environmental_channel(gamma, t, nb)
                scenario = proto.NoiseScenario.from_channels(chan, chan, chan, 1.0)
                row.append(proto.quantum_advantage(scenario, cfg.nbar, proto.ADAPTIVE))
            rows.append(row)
        return columns, rows

    if name in ("fig6c", "fig6d"):
        variants = [(0.1, 0.5), (0.3, 0.5)] if name == "fig6c" else [(0.1, 0.5), (0.1, 1.0)]
        nbars = range_values(*cfg.sweep)
        columns = ["nbar"]
        series = []
        for gamma, nb in variants:
            chan = environmental_channel(gamma, 0.5, nb)
            scenario = proto.NoiseScenario.from_channels(chan, chan, chan, 1.0)
            q_vals, d_vals = _series_q_dsc(scenario, nbars)
            tag = f"gamma{gamma:g}_nbenv{nb:g}"
            columns += [f"advantage_{tag}", f"delta_sc_{tag}"]
            series += [q_vals, d_vals]
        return columns, [[n] + [s[i] for s in series] for i, n in enumerate(nbars)]

    if name in ("fig7a", "fig7b"):
        cl = proto.classical_capacity(cfg.nbar)
        clean = proto.NoiseScenario.noiseless()
        columns = ["kappa"] + [tag for tag, _ in _FIG7_SETTINGS]
        rows = []
        scenarios = [(tag, _named_scenario(build())) for tag, build in _FIG7_SETTINGS]
        for k in np.linspace(0.0, 0.5, cfg.points):
            q_free = fam.kappa_capacity(k, clean, cfg.nbar).capacity_bits - cl
            row = [k]
            for _, scenario in scenarios:
                q_noisy = fam.kappa_capacity(k, scenario, cfg.nbar).capacity_bits - cl
                row.append(q_free - q_noisy if name == "fig7a" else q_noisy)
            rows.append(row)
        return columns, rows

    # fig8: three seeded scatter studies
    columns = ["nbar", "seed", "nbar_sender", "entanglement_bits", "holevo_bits"]
    rows = []
    for nbar in (30.0, 40.0, 50.0):
        seeds, photons, ent, hol = holevo.scatter_arrays(nbar, cfg.samples, cfg.seed)
        for i in np.argsort(ent):
            rows.append([nbar, int(seeds[i]), photons[i], ent[i], hol[i]])
    return columns, rows


# ---------------------------------------------------------------------------
# verification of every published threshold
# ---------------------------------------------------------------------------

def _amp_dist(s):
    c = amplifier_channel(s)
    return proto.NoiseScenario.from_channels(c, c, identity_channel(), 1.0)


def _loss_dist(theta):
    c = attenuator_channel(theta)
    return proto.NoiseScenario.from_channels(c, c, identity_channel(), 1.0)


def _amp_post(s):
    i = identity_channel()
    return proto.NoiseScenario.from_channels(i, i, amplifier_channel(s), 1.0)


def _loss_post(theta):
    i = identity_channel()
    return proto.NoiseScenario.from_channels(i, i, attenuator_channel(theta), 1.0)


def _env_all(gamma, t, nb, convention="eq29"):
    c = environmental_channel(gamma, t, nb, convention=convention)
    return proto.NoiseScenario.from_channels(c, c, c, 1.0)


def _tau_only(tau):
    i = identity_channel()
    return proto.NoiseScenario.from_channels(i, i, i, tau)


def _root_in_param(make_scenario, nbar, scheme, lo, hi, steps=64):
    f = lambda v: proto.quantum_advantage(make_scenario(v), nbar, scheme)
    roots = sign_change_scan(f, lo, hi, steps)
    if not roots:
        return math.nan
    return roots[0]


def verification_table():
    """(name, computed, expected, tolerance) for every published threshold."""
    ad, na = proto.ADAPTIVE, proto.NON_ADAPTIVE
    clean = proto.NoiseScenario.noiseless()
    rows = []

    def add(name, computed, expected, tol):
        rows.append((name, computed, expected, tol))

    n_th = proto.threshold_energy(clean, ad)
    add("noiseless_nbar_threshold", n_th, 1.883, 1e-3)
    add("noiseless_neg_cond_entropy_at_threshold",
        proto.neg_cond_entropy_tmsv_closed(n_th), 1.717, 1e-3)

    add("dist_amplifier_s_threshold_adaptive",
        _root_in_param(_amp_dist, 30.0, ad, 0.0, 1.0), 0.467, 5e-3)
    add("dist_amplifier_s_threshold_non_adaptive",
        _root_in_param(_amp_dist, 30.0, na, 0.0, 1.0), 0.398, 5e-3)

    zone_ad = sign_change_scan(
        lambda v: proto.quantum_advantage(_loss_dist(v), 30.0, ad), 0.0, math.pi, 128)
    zone_na = sign_change_scan(
        lambda v: proto.quantum_advantage(_loss_dist(v), 30.0, na), 0.0, math.pi, 128)
    add("dist_pure_loss_dead_zone_start_adaptive", zone_ad[0], 0.571, 5e-3)
    add("dist_pure_loss_dead_zone_end_adaptive", zone_ad[-1], 2.57, 5e-3)
    add("dist_pure_loss_dead_zone_start_non_adaptive", zone_na[0], 0.428, 5e-3)
    add("dist_pure_loss_dead_zone_end_non_adaptive", zone_na[-1], 2.713, 5e-3)

    add("post_amplifier_s_threshold_adaptive",
        _root_in_param(_amp_post, 30.0, ad, 0.0, 1.0), 0.539, 5e-3)
    add("post_amplifier_s_threshold_non_adaptive",
        _root_in_param(_amp_post, 30.0, na, 0.0, 1.0), 0.411, 5e-3)
    add("post_pure_loss_theta_threshold_adaptive",
        _root_in_param(_loss_post, 30.0, ad, 0.0, 1.2), 0.636, 5e-3)
    add("post_pure_loss_theta_threshold_non_adaptive",
        _root_in_param(_loss_post, 30.0, na, 0.0, 1.2), 0.379, 5e-3)

    add("detector_nbar_threshold_tau0.9",
        proto.threshold_energy(_tau_only(0.9), ad), 3.181, 1e-2)
    add("detector_nbar_threshold_tau0.8",
        proto.threshold_energy(_tau_only(0.8), ad), 7.085, 1e-2)
    add("detector_tau_threshold_adaptive",
        _root_in_param(_tau_only, 30.0, ad, 0.6, 0.99), 1 / math.sqrt(2), 5e-3)
    add("detector_tau_threshold_non_adaptive",
        _root_in_param(_tau_only, 30.0, na, 0.6, 0.99), 0.85, 1e-2)

    add("dist_amplifier_nbar_threshold_s0.1",
        proto.threshold_energy(_amp_dist(0.1), ad), 2.088, 1e-2)
    add("dist_amplifier_nbar_threshold_s0.4",
        proto.threshold_energy(_amp_dist(0.4), ad), 11.555, 1e-2)
    add("dist_pure_loss_nbar_threshold_theta0.1",
        proto.threshold_energy(_loss_dist(0.1), ad), 1.969, 1e-2)
    add("dist_pure_loss_nbar_threshold_theta0.4",
        proto.threshold_energy(_loss_dist(0.4), ad), 4.572, 1e-2)

    for gamma, expected in ((0.1, 2.061), (0.2, 1.031), (0.3, 0.687)):
        add(f"env_time_threshold_gamma{gamma:g}_nbenv0.5",
            _root_in_param(lambda t, g=gamma: _env_all(g, t, 0.5), 30.0, ad, 0.01, 6.0),
            expected, 2e-2)
    for nb, expected in ((1.0, 1.321), (1.5, 0.966)):
        add(f"env_time_threshold_gamma0.1_nbenv{nb:g}",
            _root_in_param(lambda t, b=nb: _env_all(0.1, t, b), 30.0, ad, 0.01, 6.0),
            expected, 2e-2)
    return rows


def cmd_verify(cfg: RunConfig):
    columns = ["name", "computed", "expected", "abs_tol", "status"]
    rows = []
    for name, computed, expected, tol in verification_table():
        status = "pass" if abs(computed - expected) <= tol else "FAIL"
        rows.append([name, computed, expected, tol, status])
    return columns, rows


# ---------------------------------------------------------------------------
# argument parsing and entry point
# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="cvdense",
        description="Dense coding with two-mode Gaussian states under noise")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, nbar_required=False):
        p.add_argument("--state", default="tmsv", help="state spec (default tmsv)")
        p.add_argument("--dist-a", default="identity", help="distribution channel on mode A")
        p.add_argument("--dist-b", default="identity", help="distribution channel on mode B")
        p.add_argument("--post", default="identity", help="channel on the encoded mode")
        p.add_argument("--tau", type=float, default=1.0, help="detector efficiency in (0, 1]")
        p.add_argument("--nbar", type=float, required=nbar_required,
                       help="sender-side photon budget")
        p.add_argument("--scheme", default="adaptive",
                       choices=["adaptive", "non-adaptive", "non_adaptive"])
        p.add_argument("--format", dest="fmt", default="csv", choices=["csv", "json"])
        p.add_argument("--output", "-o", default=None,
                       help=f"output file (default stdout; relative to ${OUTPUT_DIR_ENV} if set)")
        p.add_argument("--seed", type=int, default=1234)

    p = sub.add_parser("capacity", help="capacity and advantage for one configuration")
    common(p, nbar_required=True)

    p = sub.add_parser("sweep", help="capacities against one noise parameter")
    common(p, nbar_required=True)
    p.add_argument("--param", required=True, choices=["s", "theta", "t", "tau"])
    p.add_argument("--range", dest="sweep", required=True, help="lo:hi:step (closed)")
    p.add_argument("--stage", choices=["dist", "post", "all"])
    p.add_argument("--channel", help="channel family with fixed extras, e.g. env:gamma=0.1,nbar=0.5")

    p = sub.add_parser("threshold", help="roots of the quantum advantage in one parameter")
    common(p, nbar_required=True)
    p.add_argument("--param", required=True, choices=["s", "theta", "t", "tau", "nbar"])
    p.add_argument("--stage", choices=["dist", "post", "all"])
    p.add_argument("--channel", help="channel family with fixed extras")
    p.add_argument("--bracket", help="lo:hi scan interval")
    p.add_argument("--steps", type=int, default=64, help="scan grid size")

    p = sub.add_parser("kappa-scan", help="kappa-family advantage and depletion")
    common(p, nbar_required=True)
    p.add_argument("--points", type=int, default=50)

    p = sub.add_parser("holevo-scatter", help="random pure-state Holevo study")
    common(p, nbar_required=True)
    p.add_argument("--samples", type=int, default=10000)

    p = sub.add_parser("figure", help="regenerate data for a figure preset")
    p.add_argument("name", choices=FIGURE_NAMES)
    p.add_argument("--format", dest="fmt", default="csv", choices=["csv", "json"])
    p.add_argument("--output", "-o", default=None)
    p.add_argument("--seed", type=int, default=1234)

    p = sub.add_parser("verify", help="recompute every published threshold")
    p.add_argument("--format", dest="fmt", default="csv", choices=["csv", "json"])
    p.add_argument("--output", "-o", default=None)

    return parser


def config_from_args(args: argparse.Namespace) -> RunConfig:
    if args.command == "figure":
        return figure_preset(args.name, fmt=args.fmt, output=args.output, seed=args.seed)
    if args.command == "verify":
        return RunConfig(command="verify", fmt=args.fmt, output=args.output)
    kwargs = dict(command=args.command, state=args.state, dist_a=args.dist_a,
                  dist_b=args.dist_b, post=args.post, tau=args.tau, nbar=args.nbar,
                  scheme=args.scheme.replace("-", "_"), fmt=args.fmt,
                  output=args.output, seed=args.seed)
    if args.command in ("sweep", "threshold"):
        kwargs.update(param=args.param, stage=args.stage, channel=args.channel)
    if args.command == "sweep":
        kwargs.update(sweep=parse_range(args.sweep))
    if args.command == "threshold":
        if args.bracket:
            lo, _, hi = args.bracket.partition(":")
            kwargs.update(bracket=(float(lo), float(hi)))
        kwargs.update(steps=args.steps)
    if args.command == "kappa-scan":
        kwargs.update(points=args.points)
    if args.command == "holevo-scatter":
        kwargs.update(samples=args.samples)
    return RunConfig(**kwargs)


_COMMANDS = {
    "capacity": cmd_capacity,
    "sweep": cmd_sweep,
    "threshold": cmd_threshold,
    "kappa-scan": cmd_kappa_scan,
    "holevo-scatter": cmd_holevo_scatter,
    "figure": cmd_figure,
    "verify": cmd_verify,
}


def run(cfg: RunConfig) -> int:
    """Execute a resolved configuration; returns the process exit code."""
    try:
        columns, rows = _COMMANDS[cfg.command](cfg)
    except ParseError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except CVDenseError as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    _write(cfg, emit(cfg, columns, rows))
    if cfg.command == "verify" and any(row[-1] == "FAIL" for row in rows):
        return EXIT_NUMERICAL
    return EXIT_OK


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = config_from_args(args)
    except ParseError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    return run(cfg)


if __name__ == "__main__":
    raise SystemExit(main())
