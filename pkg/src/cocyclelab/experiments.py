"""Experiment drivers and configuration behind the command line front end.

An experiment is described by a JSON config file:

``kind``
    Optional experiment name; must match the subcommand when present.
``cocycle``
    Path of the tuple definition file, relative to the config file.
``seed``
    Required integer (the command line may override it); every run is
    fully determined by config + seed.
``out``
    Optional output CSV path (certificates go next to it as JSON).
``parallel``
    Optional replicate worker count.

Estimator knobs (all optional, with defaults): ``n_iter``, ``n_rep``,
``qr_period``, ``n_samples``, ``sep_tol``, ``frac_threshold``,
``n_pullback``, ``direction_tol``, ``rel_gap``, ``grid_n``, ``zero_tol``,
``budget``, ``n_candidates``.

Kind-specific fields: ``energies`` (list, or {min, max, steps}) for
sweep-energy; ``epsilons``, ``perturbation`` ({"coeffs": d*d rows}) and
``perturb_index`` for continuity; ``certify_base`` (default true) toggles
the certification flag column of the continuity table.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from ._version import __version__
from .certify import (DEFAULT_FRAC_THRESHOLD, DEFAULT_GRID_N, DEFAULT_REL_GAP,
                      DEFAULT_SEP_TOL, DEFAULT_ZERO_TOL, pinching_d, twisting_d,
                      weakly_pinching, weakly_twisting)
from .cocycle import (DIAGONAL, SCHRODINGER, SL2, RandomProduct, ScalarPotential,
                      entry_rows_to_arrays, make_schrodinger, perturbed_map,
                      rescale_diagonal, right_rotate, shift_potential)
from .errors import ConfigError, UnsupportedPipelineError
from .fileio import file_digest, load_cocycle
from .lyapunov import diagonal_spectrum, estimate_spectrum, estimate_top_exponent
from .tables import ResultTable

EXPERIMENT_KINDS = ("lyapunov", "certify", "sweep-energy", "continuity",
                    "perturb-search")

_INT_KNOBS = {
    "n_iter": 20000,
    "n_rep": 8,
    "qr_period": 20,
    "n_samples": 200,
    "n_pullback": 200,
    "grid_n": DEFAULT_GRID_N,
    "n_candidates": 8,
}
_FLOAT_KNOBS = {
    "sep_tol": DEFAULT_SEP_TOL,
    "frac_threshold": DEFAULT_FRAC_THRESHOLD,
    "direction_tol": 1e-8,
    "rel_gap": DEFAULT_REL_GAP,
    "zero_tol": DEFAULT_ZERO_TOL,
    "budget": 0.1,
}
DEFAULT_EPSILONS = (1e-1, 1e-2, 1e-3, 1e-4)


@dataclass
class ExperimentConfig:
    kind: str
    cocycle: object
    seed: int
    knobs: dict
    out: str = None
    parallel: int = 1
    energies: object = None
    epsilons: tuple = None
    perturbation: dict = None
    perturb_index: int = None
    certify_base: bool = True
    digest: str = None

    def provenance(self):
        return {
            "config_digest": self.digest,
            "code_version": __version__,
            "seed": self.seed,
        }


@dataclass
class ExperimentOutput:
    table: ResultTable
    certificates: list = field(default_factory=list)
    extras: dict = field(default_factory=dict)


def _require_positive_int(doc, name, default):
    value = doc.get(name, default)
    if isinstance(value, bool) or not isinstance(value, int) or value < 1:
        raise ConfigError(f"{name} must be a positive integer, got {value!r}")
    return value


def _require_positive_float(doc, name, default):
    value = doc.get(name, default)
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ConfigError(f"{name} must be a positive number, got {value!r}")
    value = float(value)
    if not (np.isfinite(value) and value > 0.0):
        raise ConfigError(f"{name} must be a positive number, got {value!r}")
    return value


def _parse_energies(node):
    if node is None:
        raise ConfigError("sweep-energy needs an 'energies' field")
    if isinstance(node, dict):
        try:
            lo, hi, steps = node["min"], node["max"], node["steps"]
        except KeyError as exc:
            raise ConfigError(f"energies range needs min/max/steps, missing {exc}")
        if isinstance(steps, bool) or not isinstance(steps, int) or steps < 1:
            raise ConfigError("energies steps must be a positive integer")
        grid = np.linspace(float(lo), float(hi), steps)
    else:
        grid = np.asarray(node, dtype=float)
    if grid.ndim != 1 or len(grid) == 0 or not np.all(np.isfinite(grid)):
        raise ConfigError("energies must be a non-empty list of finite values")
    return grid


def _parse_epsilons(node):
    if node is None:
        return tuple(DEFAULT_EPSILONS)
    eps = tuple(float(e) for e in node)
    if not eps or any(not (np.isfinite(e) and e > 0.0) for e in eps):
        raise ConfigError("epsilons must be a non-empty list of positive values")
    return eps


def load_experiment_config(path, kind, seed=None, out=None, parallel=None):
    """Read and validate an experiment config file for the given kind."""
    if kind not in EXPERIMENT_KINDS:
        raise ConfigError(f"unknown experiment kind {kind!r}")
    path = Path(path)
    try:
        doc = json.loads(path.read_text())
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}")
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config {path} is not valid JSON: {exc}")
    if not isinstance(doc, dict):
        raise ConfigError("config must be a JSON object")
    declared = doc.get("kind")
    if declared is not None and declared != kind:
        raise ConfigError(f"config declares kind {declared!r}, command runs {kind!r}")

    if seed is None:
        seed = doc.get("seed")
    if isinstance(seed, bool) or not isinstance(seed, int) or seed < 0:
        raise ConfigError("a nonnegative integer seed is required "
                          "(config 'seed' or --seed)")

    cocycle_field = doc.get("cocycle")
    if not isinstance(cocycle_field, str):
        raise ConfigError("config needs a 'cocycle' path")
    cocycle = load_cocycle(path.parent / cocycle_field)

    knobs = {}
    for name, default in _INT_KNOBS.items():
        knobs[name] = _require_positive_int(doc, name, default)
    for name, default in _FLOAT_KNOBS.items():
        knobs[name] = _require_positive_float(doc, name, default)

    if parallel is None:
        parallel = doc.get("parallel", 1)
    if isinstance(parallel, bool) or not isinstance(parallel, int) or parallel < 1:
        raise ConfigError("parallel must be a positive integer")

    energies = _parse_energies(doc.get("energies")) if kind == "sweep-energy" else None
    epsilons = _parse_epsilons(doc.get("epsilons")) if kind == "continuity" else None

    perturbation = doc.get("perturbation")
    perturb_index = doc.get("perturb_index")
    if kind == "continuity":
        if not (isinstance(perturbation, dict) and "coeffs" in perturbation):
            raise ConfigError("continuity needs a 'perturbation' object with "
                              "'coeffs' rows for the direction map")
        if perturb_index is None:
            perturb_index = 1 if cocycle.product.n_symbols > 1 else 0
        if (isinstance(perturb_index, bool) or not isinstance(perturb_index, int)
                or not 0 <= perturb_index < cocycle.product.n_symbols):
            raise ConfigError(f"perturb_index must name a symbol in "
                              f"[0, {cocycle.product.n_symbols})")

    certify_base = doc.get("certify_base", True)
    if not isinstance(certify_base, bool):
        raise ConfigError("certify_base must be a boolean")

    if out is None:
        out = doc.get("out")
    if out is not None and not isinstance(out, str):
        raise ConfigError("out must be a path string")

    return ExperimentConfig(
        kind=kind, cocycle=cocycle, seed=int(seed), knobs=knobs, out=out,
        parallel=parallel, energies=energies, epsilons=epsilons,
        perturbation=perturbation, perturb_index=perturb_index,
        certify_base=certify_base, digest=file_digest(path),
    )


def certification_pipeline(product, seed=0, knobs=None):
    """Run the certificate chain appropriate for the tuple's dimension.

    d = 2 runs WEAK_PINCH then WEAK_TWIST; d > 2 requires a diagonal first
    map and runs PINCH_D on its exact exponents, then TWIST_D on the
    holonomy minors.
    """
    kn = dict(_INT_KNOBS, **_FLOAT_KNOBS)
    kn.update(knobs or {})
    if product.n_symbols < 2:
        raise UnsupportedPipelineError(
            "certification needs at least two symbols (a fixed-point map and a "
            "homoclinic partner); add a second map to the tuple"
        )
    if product.dim == 2:
        return [
            weakly_pinching(product, kn["n_iter"], kn["n_rep"], seed),
            weakly_twisting(product, kn["n_samples"], kn["sep_tol"],
                            kn["frac_threshold"], seed, kn["n_pullback"],
                            kn["direction_tol"]),
        ]
    if product.maps[0].group_tag != DIAGONAL:
        raise UnsupportedPipelineError(
            f"the d = {product.dim} pipeline needs a diagonal first map; "
            "retag map 0 as diagonal (or supply a 2x2 tuple)"
        )
    exponents = diagonal_spectrum(product.solo(0))
    return [
        pinching_d(exponents, kn["rel_gap"]),
        twisting_d(product, kn["grid_n"], kn["zero_tol"]),
    ]


def _is_sl2_like(product):
    return product.dim == 2 and all(
        m.group_tag in (SL2, SCHRODINGER) for m in product.maps
    )


def cmd_lyapunov(config):
    """Estimate the full spectrum of the configured tuple; one summary row."""
    product = config.cocycle.product
    kn = config.knobs
    est = estimate_spectrum(product, kn["n_iter"], kn["n_rep"], config.seed,
                            kn["qr_period"], config.parallel)
    d = product.dim
    columns = ([f"lambda_{i}" for i in range(1, d + 1)]
               + [f"stderr_{i}" for i in range(1, d + 1)]
               + ["n_iter", "n_rep"])
    row = list(est.values) + list(est.stderr) + [kn["n_iter"], kn["n_rep"]]
    if _is_sl2_like(product):
        # unit determinants force the exponents to cancel; report the sum
        columns.append("sl2_sum")
        row.append(float(est.values[0] + est.values[1]))
    table = ResultTable(columns, [row], config.provenance())
    return ExperimentOutput(table)


def cmd_certify(config):
    """Run the certification pipeline; one row per certificate."""
    certs = certification_pipeline(config.cocycle.product, config.seed, config.knobs)
    for cert in certs:
        cert.input_digest = config.cocycle.digest
        cert.seed = config.seed
    rows = [[c.kind, c.verdict, c.margin] for c in certs]
    table = ResultTable(["kind", "verdict", "margin"], rows, config.provenance())
    return ExperimentOutput(table, certificates=certs)


def cmd_sweep_energy(config):
    """Top exponent of the Schrodinger tuple across an energy grid."""
    cocycle = config.cocycle
    if cocycle.potentials is None:
        raise ConfigError("sweep-energy needs a cocycle file with potentials")
    base = cocycle.product
    if not all(m.group_tag == SCHRODINGER for m in base.maps):
        raise ConfigError("sweep-energy expects every map tagged SCHRODINGER")
    kn = config.knobs
    rows = []
    for energy in config.energies:
        maps = [make_schrodinger(shift_potential(-u, float(energy)))
                for u in cocycle.potentials]
        product = RandomProduct(base.angles, maps, base.weights)
        est = estimate_top_exponent(product, kn["n_iter"], kn["n_rep"], config.seed,
                                    kn["qr_period"], config.parallel)
        rows.append([float(energy), est.top, float(est.stderr[0])])
    table = ResultTable(["energy", "lambda_top", "stderr"], rows,
                        config.provenance())
    return ExperimentOutput(table)


def cmd_continuity_probe(config):
    """Spectrum deviations along an epsilon ladder of one perturbed map.

    The first row is the unperturbed estimate (same seed, exactly equal);
    the ``certified`` column flags whether the base tuple passed its
    certification pipeline, without which deviations carry no guarantee.
    """
    product = config.cocycle.product
    d = product.dim
    kn = config.knobs
    idx = config.perturb_index
    direction = entry_rows_to_arrays(d, config.perturbation["coeffs"])

    certified = 0
    if config.certify_base:
        try:
            certs = certification_pipeline(product, config.seed, kn)
            certified = int(all(c.passed for c in certs))
        except UnsupportedPipelineError:
            certified = 0

    base = estimate_spectrum(product, kn["n_iter"], kn["n_rep"], config.seed,
                             kn["qr_period"], config.parallel)
    rows = [[0.0] + list(base.values) + [0.0, certified]]
    for eps in config.epsilons:
        maps = list(product.maps)
        maps[idx] = perturbed_map(maps[idx], *direction, scale=eps)
        perturbed = RandomProduct(product.angles, maps, product.weights)
        est = estimate_spectrum(perturbed, kn["n_iter"], kn["n_rep"], config.seed,
                                kn["qr_period"], config.parallel)
        deviation = float(np.max(np.abs(est.values - base.values)))
        rows.append([float(eps)] + list(est.values) + [deviation, certified])
    columns = (["epsilon"] + [f"lambda_{i}" for i in range(1, d + 1)]
               + ["deviation", "certified"])
    table = ResultTable(columns, rows, config.provenance())
    return ExperimentOutput(table)


def _ascending_ladder(budget, n):
    return [budget * 2.0 ** (j - (n - 1)) for j in range(n)]


def fejer_bump(center, degree):
    """Nonnegative trig polynomial of the given degree, peak value 1 at center.

    Fejer kernel normalized to unit height: the standard closed-under-
    truncation stand-in for a localized bump.
    """
    k = int(degree)
    if k < 1:
        raise ValueError("bump degree must be >= 1")
    amp = 2.0 * (1.0 - np.arange(1, k + 1) / (k + 1)) / (k + 1)
    phase = 2.0 * np.pi * np.arange(1, k + 1) * float(center)
    return ScalarPotential(1.0 / (k + 1), amp * np.cos(phase), amp * np.sin(phase))


def _with_map(product, idx, new_map):
    maps = list(product.maps)
    maps[idx] = new_map
    return RandomProduct(product.angles, maps, product.weights)


def _search_candidates(product, failing, budget, n_candidates, seed):
    """Perturbation family for the failing certificate: (family, parameter, tuple)."""
    maps = product.maps
    if product.dim == 2:
        if all(m.group_tag == SCHRODINGER and m.potential is not None for m in maps):
            candidates = [
                ("potential_shift", c,
                 _with_map(product, 1,
                           make_schrodinger(shift_potential(maps[1].potential, c))))
                for c in _ascending_ladder(budget, n_candidates)
            ]
            witnesses = failing.diagnostics.get("witnesses") or []
            center = witnesses[0]["t"] if witnesses else 0.25
            bump = fejer_bump(center, maps[1].degree + 8)
            candidates += [
                ("potential_bump", c,
                 _with_map(product, 1,
                           make_schrodinger(maps[1].potential + c * bump)))
                for c in _ascending_ladder(budget, n_candidates)
            ]
            return candidates
        return [
            ("rotation", turns, _with_map(product, 1, right_rotate(maps[1], turns)))
            for turns in _ascending_ladder(budget, n_candidates)
        ]
    rng = np.random.Generator(np.random.Philox(np.random.SeedSequence([seed, 104729])))
    candidates = []
    for _ in range(n_candidates):
        log_b = rng.uniform(-budget, budget, product.dim)
        candidates.append((
            "diagonal_rescale", float(np.max(np.abs(log_b))),
            _with_map(product, 0, rescale_diagonal(maps[0], np.exp(log_b))),
        ))
    return candidates


def _pipeline_summary(certs):
    margin = min(c.margin for c in certs)
    for cert in certs:
        if not cert.passed:
            return cert.verdict, margin, cert
    return "PASS", margin, None


def cmd_perturb_search(config):
    """Search a perturbation family for a tuple that passes certification.

    Candidate parameters grow from budget/2^(n-1) up to the budget (the
    smallest working perturbation wins); an already-passing tuple returns
    the zero perturbation.  Exhausting the ladder is reported in the table,
    not raised.
    """
    product = config.cocycle.product
    kn = config.knobs
    columns = ["candidate", "family", "parameter", "verdict", "margin", "selected"]

    base_certs = certification_pipeline(product, config.seed, kn)
    verdict, margin, failing = _pipeline_summary(base_certs)
    rows = [[0, "none", 0.0, verdict, margin, int(failing is None)]]
    selected = None
    certs_out = base_certs
    if failing is None:
        selected = {"candidate": 0, "family": "none", "parameter": 0.0}
    else:
        candidates = _search_candidates(product, failing, kn["budget"],
                                        kn["n_candidates"], config.seed)
        for number, (family, parameter, candidate) in enumerate(candidates, start=1):
            certs = certification_pipeline(candidate, config.seed, kn)
            verdict, margin, still_failing = _pipeline_summary(certs)
            found = still_failing is None
            rows.append([number, family, parameter, verdict, margin, int(found)])
            if found:
                selected = {"candidate": number, "family": family,
                            "parameter": parameter}
                certs_out = certs
                break

    for cert in certs_out:
        cert.input_digest = config.cocycle.digest
        cert.seed = config.seed
    table = ResultTable(columns, rows, config.provenance())
    return ExperimentOutput(table, certificates=certs_out,
                            extras={"selected": selected})


COMMANDS = {
    "lyapunov": cmd_lyapunov,
    "certify": cmd_certify,
    "sweep-energy": cmd_sweep_energy,
    "continuity": cmd_continuity_probe,
    "perturb-search": cmd_perturb_search,
}
